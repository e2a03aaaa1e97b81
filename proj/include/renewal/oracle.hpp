#pragma once

#include <string>
#include <utility>
#include <vector>

#include "renewal/model.hpp"
#include "renewal/types.hpp"

namespace renewal {

// Tabulated linear fractional program over randomized stationary policies
// of a finite model: minimize E[y]/E[T] subject to E[z_l]/E[T] <= c_l.
struct LfpInstance {
  Vec P;                        // event probabilities, length E
  Eigen::MatrixXd y_hat;        // E x A
  Eigen::MatrixXd t_hat;        // E x A, entries >= 1
  std::vector<Eigen::MatrixXd> z_hat;  // L matrices, each E x A
  Vec c;                        // length L
};

LfpInstance build_lfp(const RenewalModel& model);

// LP in the fixed shape emitted by charnes_cooper:
// minimize cost'x subject to A_eq x = b_eq, A_ub x <= b_ub, x >= 0.
struct LinearProgram {
  Vec cost;
  Eigen::MatrixXd A_eq;
  Vec b_eq;
  Eigen::MatrixXd A_ub;
  Vec b_ub;
};

// Charnes-Cooper reduction. Variables are w(e,a) (row-major) followed by
// the scaling variable t. The denominator sum(w*t_hat) is normalized to 1;
// t_hat >= 1 keeps it positive on the feasible set. Recovery:
// theta* = objective, p(a|e) = w(e,a) / (P(e)*t).
LinearProgram charnes_cooper(const LfpInstance& inst);

enum class LpStatus { optimal, infeasible, unbounded };

std::string to_string(LpStatus status);

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Vec x;
  double objective = 0.0;
};

// Dense two-phase simplex with Bland's anti-cycling rule. Feasibility and
// reduced-cost tolerances are 1e-9.
LpResult simplex_solve(const LinearProgram& lp);

struct OracleSolution {
  double theta_star = 0.0;
  Eigen::MatrixXd policy;     // E x A, row-stochastic
  LpStatus status = LpStatus::infeasible;
  double objective_ratio = 0.0;
  Vec constraint_ratios;      // length L
};

// Ratio of expected penalty to expected frame length under a
// row-stochastic policy, plus the analogous constraint ratios.
std::pair<double, Vec> evaluate_policy(const LfpInstance& inst,
                                       const Eigen::MatrixXd& policy);

OracleSolution solve_lfp(const LfpInstance& inst);
OracleSolution solve_oracle(const RenewalModel& model);

}  // namespace renewal
