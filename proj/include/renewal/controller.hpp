#pragma once

#include "renewal/model.hpp"
#include "renewal/rng.hpp"
#include "renewal/types.hpp"

namespace renewal {

// Clip x to [0, theta_max].
double clip_theta(double x, double theta_max);

// Per-frame decision score: V*(y_hat - theta*t_hat) + sum_l Q_l*(z_hat_l - c_l*t_hat).
// The chosen action is the one minimizing this over the event's action list.
double dpp_score(const ControllerState& state, const PerformanceTriple& perf);

// Argmin of dpp_score over the event's action list; ties broken by lowest
// action index so runs are deterministic.
int select_action(const ControllerState& state, int event_id,
                  const RenewalModel& model);

// Component-wise max(Q_l + z_l - c_l*T, 0).
Vec update_queues(const Vec& Q, const Vec& z, double T, const Vec& c);

struct ThetaUpdate {
  double D = 0.0;       // new accumulation
  double theta = 0.0;   // theta[n+1]
  double summand = 0.0; // this frame's contribution to D
};

// Computes the frame summand with the pre-update Q and theta held in
// `state`, folds it into D and re-clips. Maintaining D incrementally is
// equivalent to re-summing from scratch: the historical theta[i], Q[i]
// inside each past summand are already baked into D.
ThetaUpdate update_theta(const ControllerState& state, const Outcome& outcome);

// One full frame: sample event, select action, realize outcome, update
// theta then queues (both consume the frame-n values of Q and theta),
// advance n. Returns the frame record with post-update snapshots.
FrameRecord step(ControllerState& state, const RenewalModel& model, Rng& rng);

}  // namespace renewal
