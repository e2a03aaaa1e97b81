#include "renewal/controller.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace renewal {

double clip_theta(double x, double theta_max) {
  if (x > theta_max) return theta_max;
  if (x < 0.0) return 0.0;
  return x;
}

double dpp_score(const ControllerState& state, const PerformanceTriple& perf) {
  if (perf.z_hat.size() != state.Q.size()) {
    throw std::invalid_argument("dpp_score: z_hat length does not match constraint count");
  }
  double score = state.V * (perf.y_hat - state.theta * perf.t_hat);
  score += state.Q.dot(perf.z_hat - perf.t_hat * state.c);
  return score;
}

int select_action(const ControllerState& state, int event_id,
                  const RenewalModel& model) {
  const int num_actions = model.num_actions(event_id);
  if (num_actions <= 0) {
    throw std::invalid_argument("select_action: model exposes no actions for event");
  }
  int best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (int a = 0; a < num_actions; ++a) {
    double score = dpp_score(state, model.expectations(event_id, a));
    if (score < best_score) {  // strict: lowest index wins ties
      best_score = score;
      best = a;
    }
  }
  return best;
}

Vec update_queues(const Vec& Q, const Vec& z, double T, const Vec& c) {
  return (Q + z - c * T).cwiseMax(0.0);
}

ThetaUpdate update_theta(const ControllerState& state, const Outcome& outcome) {
  ThetaUpdate u;
  u.summand = outcome.y - state.theta * outcome.T +
              state.Q.dot(outcome.z - state.c * outcome.T) / state.V;
  u.D = state.D + u.summand;
  u.theta = clip_theta(
      u.D / std::pow(static_cast<double>(state.n + 1), state.delta),
      state.theta_max);
  return u;
}

FrameRecord step(ControllerState& state, const RenewalModel& model, Rng& rng) {
  const int event_id = model.sample_event(rng);
  const int action_id = select_action(state, event_id, model);
  const Outcome outcome = model.realize(event_id, action_id, rng);

  // theta update first, then queues: both consume the frame-n Q and theta.
  const ThetaUpdate u = update_theta(state, outcome);
  state.Q = update_queues(state.Q, outcome.z, outcome.T, state.c);
  state.D = u.D;
  state.theta = u.theta;

  FrameRecord rec;
  rec.n = state.n;
  rec.event_id = event_id;
  rec.action_id = action_id;
  rec.y = outcome.y;
  rec.T = outcome.T;
  rec.z = outcome.z;
  rec.summand = u.summand;
  rec.q_after = state.Q;
  rec.theta_after = state.theta;

  state.n += 1;
  return rec;
}

}  // namespace renewal
