#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "renewal/controller.hpp"

using namespace renewal;
using namespace renewal::testing;

TEST_CASE("clip_theta") {
  CHECK(clip_theta(5.0, 2.0) == 2.0);
  CHECK(clip_theta(-1.0, 2.0) == 0.0);
  CHECK(clip_theta(1.5, 2.0) == 1.5);
  CHECK(clip_theta(0.0, 2.0) == 0.0);
  CHECK(clip_theta(2.0, 2.0) == 2.0);
}

namespace {
ControllerState make_state(double V, double theta, Vec Q, Vec c) {
  ControllerState s = ControllerState::initial(V, 0.7, 1e9, std::move(c));
  s.theta = theta;
  s.Q = std::move(Q);
  return s;
}
}  // namespace

TEST_CASE("dpp_score") {
  SUBCASE("zero state reduces to V*y_hat") {
    auto s = make_state(1.0, 0.0, vec1(0.0), vec1(1.0));
    CHECK(dpp_score(s, {2.5, 3.0, vec1(7.0)}) == doctest::Approx(2.5).epsilon(1e-12));
  }
  SUBCASE("hand evaluation") {
    auto s = make_state(300.0, 2.0, vec1(5.0), vec1(1.0));
    CHECK(dpp_score(s, {1.8, 1.6, vec1(2.0)}) == doctest::Approx(-418.0).epsilon(1e-12));
  }
  SUBCASE("y_hat equal to theta*t_hat cancels") {
    auto s = make_state(1.0, 1.0, vec1(0.0), vec1(1.0));
    CHECK(dpp_score(s, {3.0, 3.0, vec1(0.0)}) == doctest::Approx(0.0));
  }
  SUBCASE("dimension mismatch rejected") {
    auto s = make_state(1.0, 0.0, vec1(0.0), vec1(1.0));
    CHECK_THROWS_AS(dpp_score(s, {1.0, 1.0, Vec::Zero(2)}), std::invalid_argument);
  }
}

TEST_CASE("select_action on the file model") {
  FileDownloadModel model;
  SUBCASE("zero state picks the idle action") {
    // event (omega=0.8, s=5): scores are V*alpha*s = {0, 1.5, 3, 4.5}
    auto s = make_state(1.0, 0.0, vec1(0.0), vec1(1.0));
    CHECK(select_action(s, 8, model) == 0);
  }
  SUBCASE("large theta picks the longest expected frame") {
    // event (omega=0.5, s=1): -theta*t_hat dominates once theta is big
    auto s = make_state(1.0, 100.0, vec1(0.0), vec1(1.0));
    CHECK(select_action(s, 3, model) == 3);
  }
}

TEST_CASE("select_action singleton argmin") {
  auto model = single_action_model(1.0, 1.0, 0.0, 1.0);
  auto s = make_state(1.0, 0.0, vec1(0.0), vec1(1.0));
  CHECK(select_action(s, 0, model) == 0);
}

TEST_CASE("update_queues") {
  CHECK(update_queues(vec1(0.0), vec1(2.0), 1.6, vec1(1.0))[0] ==
        doctest::Approx(0.4).epsilon(1e-12));
  CHECK(update_queues(vec1(0.0), vec1(0.0), 2.0, vec1(1.0))[0] == 0.0);
  Vec Q(2), z(2), c(2);
  Q << 3, 1;
  z << 0, 5;
  c << 1, 1;
  Vec next = update_queues(Q, z, 2.0, c);
  CHECK(next[0] == doctest::Approx(1.0));
  CHECK(next[1] == doctest::Approx(4.0));
}

TEST_CASE("update_theta") {
  SUBCASE("no clipping") {
    ControllerState s = ControllerState::initial(1.0, 0.5, 10.0, vec1(1.0));
    auto u = update_theta(s, {3.0, 2.0, vec1(0.0)});
    CHECK(u.summand == doctest::Approx(3.0));
    CHECK(u.D == doctest::Approx(3.0));
    CHECK(u.theta == doctest::Approx(3.0));
  }
  SUBCASE("ceiling at theta_max") {
    ControllerState s = ControllerState::initial(1.0, 1.0, 1.0, vec1(1.0));
    auto u = update_theta(s, {3.0, 2.0, vec1(0.0)});
    CHECK(u.theta == 1.0);
  }
  SUBCASE("all-zero frame") {
    ControllerState s = ControllerState::initial(1.0, 0.9, 10.0, vec1(1.0));
    auto u = update_theta(s, {0.0, 1.0, vec1(0.0)});
    CHECK(u.summand == 0.0);
    CHECK(u.theta == 0.0);
  }
}

TEST_CASE("step traces on a deterministic single-action model") {
  auto model = single_action_model(1.0, 1.0, 0.0, 1.0);
  ControllerState s = ControllerState::initial(1.0, 1.0, 10.0, vec1(1.0));
  Rng rng(7);

  FrameRecord r1 = step(s, model, rng);
  CHECK(r1.summand == doctest::Approx(1.0));
  CHECK(s.theta == doctest::Approx(1.0));
  CHECK(s.Q[0] == 0.0);
  CHECK(s.n == 1);

  // theta[1] = 1 enters the second summand: 1 - 1*1 = 0, theta[2] = 1/2
  FrameRecord r2 = step(s, model, rng);
  CHECK(r2.summand == doctest::Approx(0.0));
  CHECK(s.D == doctest::Approx(1.0));
  CHECK(s.theta == doctest::Approx(0.5));
}

TEST_CASE("arrival equal to service keeps queues at zero") {
  auto model = single_action_model(1.0, 2.0, 2.0, 1.0);  // z = c*T identically
  ControllerState s = ControllerState::initial(1.0, 0.7, 10.0, vec1(1.0));
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    step(s, model, rng);
    CHECK(s.Q[0] == 0.0);
  }
}

TEST_CASE("run invariants on a noisy constrained model") {
  auto model = tension_model();
  ControllerState s =
      ControllerState::initial(20.0, 0.7, auto_theta_max(model), vec1(1.0));
  const double theta_max = s.theta_max;
  auto records = run_frames(s, model, 5000, 42);

  double prev_qnorm = 0.0;
  double D = 0.0;
  Rng probe_rng(7);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const FrameRecord& r = records[i];
    CHECK(r.q_after.minCoeff() >= 0.0);
    CHECK(r.theta_after >= 0.0);
    CHECK(r.theta_after <= theta_max);

    // ||Q[n+1]|| - ||Q[n]|| <= K[n]
    const double K = (r.z - vec1(1.0) * r.T).norm();
    CHECK(r.q_after.norm() - prev_qnorm <= K + 1e-12);
    prev_qnorm = r.q_after.norm();

    // equivalence of trimmed and raw pseudo averages at random probes
    D += r.summand;
    const double theta_hat = D / std::pow(double(i + 1), 0.7);
    for (int k = 0; k < 3; ++k) {
      const double x = probe_rng.uniform() * theta_max;
      if (x <= 0.0 || x >= theta_max) continue;
      CHECK((r.theta_after >= x) == (theta_hat >= x));
      CHECK((r.theta_after <= x) == (theta_hat <= x));
    }
  }
}

TEST_CASE("argmin dominance by re-enumeration") {
  auto model = tension_model();
  ControllerState s =
      ControllerState::initial(20.0, 0.7, auto_theta_max(model), vec1(1.0));
  auto records = run_frames(s, model, 2000, 11);
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto pre = pre_state(records, i, 1);
    ControllerState ps = ControllerState::initial(20.0, 0.7, s.theta_max, vec1(1.0));
    ps.theta = pre.theta;
    ps.Q = pre.Q;
    const double chosen =
        dpp_score(ps, model.expectations(records[i].event_id, records[i].action_id));
    for (int a = 0; a < model.num_actions(records[i].event_id); ++a) {
      CHECK(chosen <= dpp_score(ps, model.expectations(records[i].event_id, a)) + 1e-12);
    }
  }
}

TEST_CASE("determinism: identical seeds give identical records") {
  auto model = tension_model();
  ControllerState s1 = ControllerState::initial(20.0, 0.7, 5.0, vec1(1.0));
  ControllerState s2 = ControllerState::initial(20.0, 0.7, 5.0, vec1(1.0));
  auto a = run_frames(s1, model, 1000, 99);
  auto b = run_frames(s2, model, 1000, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].event_id == b[i].event_id);
    CHECK(a[i].action_id == b[i].action_id);
    CHECK(a[i].y == b[i].y);
    CHECK(a[i].T == b[i].T);
    CHECK(a[i].summand == b[i].summand);
    CHECK(a[i].theta_after == b[i].theta_after);
    CHECK(a[i].q_after == b[i].q_after);
  }
}

TEST_CASE("incremental D equals recomputed sum of summands") {
  auto model = tension_model();
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    ControllerState s = ControllerState::initial(10.0, 0.6, 5.0, vec1(1.0));
    auto records = run_frames(s, model, 1000, seed);
    double resum = 0.0;
    for (const auto& r : records) resum += r.summand;
    CHECK(s.D == doctest::Approx(resum).epsilon(1e-9));
  }
}
