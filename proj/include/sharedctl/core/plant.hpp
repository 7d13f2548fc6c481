#pragma once

#include "sharedctl/core/types.hpp"

namespace sharedctl {

// Velocity-controlled end effector: x' = x + v_cmd * dt.
inline Vec3 plant_step(const Vec3& x, const Vec3& v_cmd, double dt) { return x + v_cmd * dt; }

}  // namespace sharedctl
