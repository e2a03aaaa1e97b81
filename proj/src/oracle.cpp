#include "renewal/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace renewal {

namespace {
constexpr double kTol = 1e-9;  // feasibility and reduced-cost tolerance
}

LfpInstance build_lfp(const RenewalModel& model) {
  const int E = model.num_events();
  if (E <= 0) throw std::invalid_argument("build_lfp: model has no events");
  const int A = model.num_actions(0);
  for (int e = 1; e < E; ++e) {
    if (model.num_actions(e) != A) {
      throw std::invalid_argument("build_lfp: action count must be uniform across events");
    }
  }
  const int L = model.constraint_count();

  LfpInstance inst;
  inst.P = Vec(E);
  inst.y_hat = Eigen::MatrixXd(E, A);
  inst.t_hat = Eigen::MatrixXd(E, A);
  inst.z_hat.assign(L, Eigen::MatrixXd(E, A));
  inst.c = model.constraint_levels();
  for (int e = 0; e < E; ++e) {
    inst.P[e] = model.event_prob(e);
    for (int a = 0; a < A; ++a) {
      const PerformanceTriple p = model.expectations(e, a);
      inst.y_hat(e, a) = p.y_hat;
      inst.t_hat(e, a) = p.t_hat;
      for (int l = 0; l < L; ++l) inst.z_hat[l](e, a) = p.z_hat[l];
    }
  }
  return inst;
}

LinearProgram charnes_cooper(const LfpInstance& inst) {
  const int E = static_cast<int>(inst.P.size());
  const int A = static_cast<int>(inst.y_hat.cols());
  const int L = static_cast<int>(inst.c.size());
  const int nw = E * A;
  const int n = nw + 1;  // w(e,a) row-major, then t

  LinearProgram lp;
  lp.cost = Vec::Zero(n);
  for (int e = 0; e < E; ++e)
    for (int a = 0; a < A; ++a) lp.cost[e * A + a] = inst.y_hat(e, a);

  // Equalities: the t_hat normalization row, then one coupling row per event.
  lp.A_eq = Eigen::MatrixXd::Zero(1 + E, n);
  lp.b_eq = Vec::Zero(1 + E);
  for (int e = 0; e < E; ++e)
    for (int a = 0; a < A; ++a) lp.A_eq(0, e * A + a) = inst.t_hat(e, a);
  lp.b_eq[0] = 1.0;
  for (int e = 0; e < E; ++e) {
    for (int a = 0; a < A; ++a) lp.A_eq(1 + e, e * A + a) = 1.0;
    lp.A_eq(1 + e, nw) = -inst.P[e];
  }

  // Inequalities: one resource row per constraint.
  lp.A_ub = Eigen::MatrixXd::Zero(L, n);
  lp.b_ub = Vec::Zero(L);
  for (int l = 0; l < L; ++l)
    for (int e = 0; e < E; ++e)
      for (int a = 0; a < A; ++a)
        lp.A_ub(l, e * A + a) = inst.z_hat[l](e, a) - inst.c[l] * inst.t_hat(e, a);

  return lp;
}

namespace {

// Full-tableau simplex over rows [A | b] with the objective row appended.
// Bland's rule throughout. Returns false on an unbounded ray.
bool run_simplex(Eigen::MatrixXd& tab, std::vector<int>& basis,
                 const std::vector<bool>& allowed) {
  const int m = static_cast<int>(tab.rows()) - 1;
  const int ncols = static_cast<int>(tab.cols()) - 1;
  for (;;) {
    int enter = -1;
    for (int j = 0; j < ncols; ++j) {
      if (allowed[j] && tab(m, j) < -kTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return true;  // optimal

    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      if (tab(i, enter) > kTol) {
        const double ratio = tab(i, ncols) / tab(i, enter);
        if (leave < 0 || ratio < best_ratio - kTol ||
            (ratio < best_ratio + kTol && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) return false;  // unbounded

    // pivot
    tab.row(leave) /= tab(leave, enter);
    for (int i = 0; i <= m; ++i) {
      if (i != leave && tab(i, enter) != 0.0) {
        tab.row(i) -= tab(i, enter) * tab.row(leave);
      }
    }
    basis[leave] = enter;
  }
}

}  // namespace

LpResult simplex_solve(const LinearProgram& lp) {
  const int n = static_cast<int>(lp.cost.size());
  const int m_eq = static_cast<int>(lp.b_eq.size());
  const int m_ub = static_cast<int>(lp.b_ub.size());
  const int m = m_eq + m_ub;
  const int n_slack = m_ub;
  const int n_art = m;
  const int ncols = n + n_slack + n_art;

  // Rows: equalities first, then inequalities with slacks. Right-hand sides
  // are made nonnegative by row negation so the artificial basis is valid.
  Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(m + 1, ncols + 1);
  for (int i = 0; i < m_eq; ++i) {
    tab.block(i, 0, 1, n) = lp.A_eq.row(i);
    tab(i, ncols) = lp.b_eq[i];
  }
  for (int i = 0; i < m_ub; ++i) {
    tab.block(m_eq + i, 0, 1, n) = lp.A_ub.row(i);
    tab(m_eq + i, n + i) = 1.0;
    tab(m_eq + i, ncols) = lp.b_ub[i];
  }
  for (int i = 0; i < m; ++i) {
    if (tab(i, ncols) < 0.0) tab.row(i) = -tab.row(i);
    tab(i, n + n_slack + i) = 1.0;
  }

  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + n_slack + i;

  // Phase 1: minimize the sum of artificials.
  for (int i = 0; i < m; ++i) tab.row(m) -= tab.row(i);
  tab.block(m, n + n_slack, 1, n_art).setZero();

  std::vector<bool> allowed(ncols, true);
  if (!run_simplex(tab, basis, allowed)) {
    throw std::runtime_error("simplex: phase-1 unbounded (internal error)");
  }
  if (-tab(m, ncols) > kTol) {
    return {LpStatus::infeasible, Vec(), 0.0};
  }

  // Drive any artificials remaining in the basis out (or mark their rows
  // as redundant by leaving the artificial at zero level).
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= n + n_slack) {
      int enter = -1;
      for (int j = 0; j < n + n_slack; ++j) {
        if (std::abs(tab(i, j)) > kTol) {
          enter = j;
          break;
        }
      }
      if (enter >= 0) {
        tab.row(i) /= tab(i, enter);
        for (int k = 0; k <= m; ++k) {
          if (k != i && tab(k, enter) != 0.0) {
            tab.row(k) -= tab(k, enter) * tab.row(i);
          }
        }
        basis[i] = enter;
      }
    }
  }

  // Phase 2: real costs; artificial columns are barred.
  for (int j = 0; j < n + n_slack; ++j) tab(m, j) = j < n ? lp.cost[j] : 0.0;
  tab.block(m, n + n_slack, 1, n_art).setZero();
  tab(m, ncols) = 0.0;
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n + n_slack && tab(m, basis[i]) != 0.0) {
      tab.row(m) -= tab(m, basis[i]) * tab.row(i);
    }
  }
  for (int j = n + n_slack; j < ncols; ++j) allowed[j] = false;
  if (!run_simplex(tab, basis, allowed)) {
    return {LpStatus::unbounded, Vec(), 0.0};
  }

  LpResult res;
  res.status = LpStatus::optimal;
  res.x = Vec::Zero(n);
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) res.x[basis[i]] = tab(i, ncols);
  }
  res.objective = lp.cost.dot(res.x);
  return res;
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

std::pair<double, Vec> evaluate_policy(const LfpInstance& inst,
                                       const Eigen::MatrixXd& policy) {
  const int E = static_cast<int>(inst.P.size());
  const int A = static_cast<int>(inst.y_hat.cols());
  const int L = static_cast<int>(inst.c.size());
  double num_y = 0.0, den_t = 0.0;
  Vec num_z = Vec::Zero(L);
  for (int e = 0; e < E; ++e) {
    for (int a = 0; a < A; ++a) {
      const double w = inst.P[e] * policy(e, a);
      num_y += w * inst.y_hat(e, a);
      den_t += w * inst.t_hat(e, a);
      for (int l = 0; l < L; ++l) num_z[l] += w * inst.z_hat[l](e, a);
    }
  }
  return {num_y / den_t, num_z / den_t};
}

OracleSolution solve_lfp(const LfpInstance& inst) {
  const int E = static_cast<int>(inst.P.size());
  const int A = static_cast<int>(inst.y_hat.cols());

  const LpResult lpres = simplex_solve(charnes_cooper(inst));
  OracleSolution sol;
  sol.status = lpres.status;
  if (lpres.status != LpStatus::optimal) return sol;

  const double t = lpres.x[E * A];
  // The normalization row plus the coupling rows force t = sum(w) > 0 at
  // any optimum; a zero here means the tableau went wrong.
  if (t <= kTol) throw std::runtime_error("charnes_cooper recovery: t = 0 at optimum");

  sol.theta_star = lpres.objective;
  sol.policy = Eigen::MatrixXd::Zero(E, A);
  for (int e = 0; e < E; ++e) {
    if (inst.P[e] <= 0.0) {
      sol.policy.row(e).setConstant(1.0 / A);  // zero-probability event: any row works
      continue;
    }
    double row_sum = 0.0;
    for (int a = 0; a < A; ++a) {
      double p = lpres.x[e * A + a] / (inst.P[e] * t);
      if (p < 0.0 && p > -1e-12) p = 0.0;
      sol.policy(e, a) = p;
      row_sum += p;
    }
    sol.policy.row(e) /= row_sum;
  }

  auto [obj, ratios] = evaluate_policy(inst, sol.policy);
  sol.objective_ratio = obj;
  sol.constraint_ratios = ratios;
  return sol;
}

OracleSolution solve_oracle(const RenewalModel& model) {
  return solve_lfp(build_lfp(model));
}

}  // namespace renewal
