#pragma once

// Shared test models and replay helpers.

#include <vector>

#include "renewal/controller.hpp"
#include "renewal/model.hpp"
#include "renewal/rng.hpp"
#include "renewal/types.hpp"

namespace renewal::testing {

inline Vec vec1(double a) { return Vec::Constant(1, a); }

inline SyntheticModel::Cell deterministic_cell(double y, double T, Vec z) {
  SyntheticModel::Cell cell;
  cell.expect = {y, T, z};
  cell.outcomes = {{y, T, std::move(z)}};
  cell.outcome_probs = {1.0};
  return cell;
}

// One event, one action, fixed outcome.
inline SyntheticModel single_action_model(double y, double T, double z,
                                          double c) {
  return SyntheticModel({1.0}, 1, vec1(c),
                        {{deterministic_cell(y, T, vec1(z))}});
}

// Two events, two actions, one binding resource constraint. The cheap
// action overdraws the resource budget, so the optimal stationary policy
// mixes and the constraint is active (optimal ratio ~0.5454). Event 1 has
// random frame lengths, so queue and theta dynamics are genuinely noisy.
inline SyntheticModel tension_model() {
  SyntheticModel::Cell e0a0 = deterministic_cell(4.0, 1.0, vec1(0.0));
  SyntheticModel::Cell e0a1 = deterministic_cell(0.0, 1.0, vec1(2.0));

  SyntheticModel::Cell e1a0;
  e1a0.expect = {2.0, 2.0, vec1(0.0)};
  e1a0.outcomes = {{2.0, 1.0, vec1(0.0)}, {2.0, 3.0, vec1(0.0)}};
  e1a0.outcome_probs = {0.5, 0.5};

  SyntheticModel::Cell e1a1;
  e1a1.expect = {1.0, 1.5, vec1(1.5)};
  e1a1.outcomes = {{1.0, 1.0, vec1(1.5)}, {1.0, 2.0, vec1(1.5)}};
  e1a1.outcome_probs = {0.5, 0.5};

  return SyntheticModel({0.5, 0.5}, 2, vec1(1.0),
                        {{e0a0, e0a1}, {e1a0, e1a1}});
}

// Every action overdraws the resource budget; no feasible policy exists.
inline SyntheticModel infeasible_model() {
  return SyntheticModel({1.0}, 2, vec1(1.0),
                        {{deterministic_cell(1.0, 1.0, vec1(3.0)),
                          deterministic_cell(2.0, 1.0, vec1(2.0))}});
}

inline std::vector<FrameRecord> run_frames(ControllerState& state,
                                           const RenewalModel& model,
                                           long frames, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FrameRecord> records;
  records.reserve(frames);
  for (long i = 0; i < frames; ++i) records.push_back(step(state, model, rng));
  return records;
}

// Pre-decision (theta, Q) of frame i, reconstructed from snapshots.
struct PreState {
  double theta;
  Vec Q;
};

inline PreState pre_state(const std::vector<FrameRecord>& records,
                          std::size_t i, int L) {
  if (i == 0) return {0.0, Vec::Zero(L)};
  return {records[i - 1].theta_after, records[i - 1].q_after};
}

}  // namespace renewal::testing
