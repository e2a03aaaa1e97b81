#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace renewal {

using Vec = Eigen::VectorXd;

// Expected per-frame performance of one (event, action) pair:
// penalty, frame length (slots, always >= 1) and resource use.
struct PerformanceTriple {
  double y_hat = 0.0;
  double t_hat = 1.0;
  Vec z_hat;
};

// Realized per-frame outcome.
struct Outcome {
  double y = 0.0;
  double T = 1.0;
  Vec z;
};

// Realized frame together with the chosen decision and the post-update
// controller snapshot.
struct FrameRecord {
  long n = 0;
  int event_id = 0;
  int action_id = 0;
  double y = 0.0;
  double T = 1.0;
  Vec z;
  double summand = 0.0;  // theta-update summand, evaluated with pre-update state
  Vec q_after;
  double theta_after = 0.0;
};

// Full algorithm state. Q holds the virtual queue backlogs, theta the
// trimmed pseudo average, D the running sum of summands. The stored pair
// (D, theta) stays consistent: theta == clip(D / n^delta, 0, theta_max)
// for n >= 1.
struct ControllerState {
  long n = 0;
  Vec Q;
  double theta = 0.0;
  double D = 0.0;
  double V = 100.0;
  double delta = 0.7;
  double theta_max = 1.0;
  Vec c;

  static ControllerState initial(double V, double delta, double theta_max,
                                 const Vec& c) {
    ControllerState s;
    s.V = V;
    s.delta = delta;
    s.theta_max = theta_max;
    s.c = c;
    s.Q = Vec::Zero(c.size());
    return s;
  }
};

}  // namespace renewal
