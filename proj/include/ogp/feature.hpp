#pragma once

#include <array>

namespace ogp {

// One time step of network input: relative position and velocity of the
// tracked vehicle plus the ego yaw rate and speed.
struct FeatureVector {
  double x = 0.0;         // m, longitudinal relative position
  double y = 0.0;         // m, lateral relative position
  double vx = 0.0;        // m/s, longitudinal relative velocity
  double vy = 0.0;        // m/s, lateral relative velocity
  double yaw_rate = 0.0;  // rad/s, ego
  double speed = 0.0;     // m/s, ego

  static constexpr int kCount = 6;

  std::array<double, kCount> to_array() const {
    return {x, y, vx, vy, yaw_rate, speed};
  }
};

}  // namespace ogp
