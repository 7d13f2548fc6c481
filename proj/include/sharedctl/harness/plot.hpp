#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sharedctl/harness/hypotheses.hpp"
#include "sharedctl/harness/matrix.hpp"

namespace sharedctl {

// Per-trial strip chart of one metric, grouped by mode and hand.
std::string metric_strip_svg(const std::vector<TrialRow>& rows, const std::string& metric);

// Heat map of a 2D histogram, log-scaled counts.
std::string histogram_svg(const Histogram2D& h, const std::string& title);

// Reads a long-format histogram table written by write_histogram_csv.
Histogram2D read_histogram_csv(const std::filesystem::path& file);

// Renders every metric of <report>/metrics.csv and every hist_*.csv into
// out_dir as SVG. Returns the files written.
std::vector<std::filesystem::path> write_plots(const std::filesystem::path& report_dir,
                                               const std::filesystem::path& out_dir);

}  // namespace sharedctl
