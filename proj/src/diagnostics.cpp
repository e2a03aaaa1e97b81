#include "renewal/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace renewal {

double k_norm(const Vec& z, double T, const Vec& c) {
  if (z.size() != c.size()) {
    throw std::invalid_argument("k_norm: dimension mismatch");
  }
  return (z - c * T).norm();
}

BoundConstants bound_constants(const BoundInputs& in) {
  if (in.eta <= 0.0 || in.B <= 0.0 || in.xi <= 0.0 || in.V <= 0.0 ||
      in.theta_max <= 0.0) {
    throw std::invalid_argument("bound_constants: inputs must be positive");
  }
  BoundConstants out;
  out.Gamma = in.B;
  out.r = std::min(in.eta, in.xi * in.eta * in.eta / (8.0 * in.B));
  out.rho = 1.0 - out.r * in.xi / 2.0 +
            (2.0 * in.B / (in.eta * in.eta)) * out.r * out.r;
  if (out.rho >= 1.0) {
    throw std::runtime_error("bound_constants: rho >= 1 (internal error)");
  }
  out.C0 = 2.0 * in.B * in.B / (in.V * in.xi * in.eta * in.eta) +
           2.0 * (in.theta_max + 1.0) * in.B / (in.xi * in.eta) -
           in.xi / (4.0 * in.V);
  out.c0_positive = out.C0 > 0.0;
  out.sigma = out.C0 * in.V;
  out.D = 1.0 + in.B * std::exp(out.r * out.sigma) / (1.0 - out.rho);
  return out;
}

ExpMomentSeries empirical_exp_moment(
    const std::vector<std::vector<double>>& qnorm_runs, double r) {
  if (qnorm_runs.size() < 2) {
    throw std::invalid_argument(
        "empirical_exp_moment: cross-run statistic needs at least two runs");
  }
  const std::size_t N = qnorm_runs.front().size();
  for (const auto& run : qnorm_runs) {
    if (run.size() != N) {
      throw std::invalid_argument("empirical_exp_moment: runs have unequal length");
    }
  }
  const double R = static_cast<double>(qnorm_runs.size());
  ExpMomentSeries out;
  out.mean.resize(N);
  out.stderr_.resize(N);
  for (std::size_t n = 0; n < N; ++n) {
    double sum = 0.0, sumsq = 0.0;
    for (const auto& run : qnorm_runs) {
      const double v = std::exp(r * run[n]);
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / R;
    const double var = std::max(0.0, (sumsq - R * mean * mean) / (R - 1.0));
    out.mean[n] = mean;
    out.stderr_[n] = std::sqrt(var / R);
  }
  return out;
}

namespace {
double cap_at(long i, double eta, double r, double V, int L) {
  const double lg = std::log(static_cast<double>(i + 1));
  return (2.0 / eta + 4.0 * std::sqrt(static_cast<double>(L)) / (eta * r * V)) *
         lg * lg;
}
}  // namespace

TruncatedSeries truncated_series(const std::vector<FrameRecord>& records,
                                 double eta, double r, double V, double delta,
                                 const Vec& c) {
  const std::size_t N = records.size();
  const int L = static_cast<int>(c.size());
  const double sqL = std::sqrt(static_cast<double>(L));

  TruncatedSeries out;
  out.theta_tilde.assign(N + 1, 0.0);
  out.caps.resize(N);
  out.flag_A.resize(N);
  out.flag_B.resize(N);
  out.flag_E.resize(N);

  double running = 0.0;
  double theta_pre = 0.0;           // theta[0] = 0
  Vec q_pre = Vec::Zero(c.size());  // Q[0] = 0
  for (std::size_t i = 0; i < N; ++i) {
    const FrameRecord& rec = records[i];
    const double cap = cap_at(static_cast<long>(i), eta, r, V, L);
    out.caps[i] = cap;
    running += std::min(rec.summand, cap);
    out.theta_tilde[i + 1] =
        running / std::pow(static_cast<double>(i + 1), delta);

    const double lg = std::log(static_cast<double>(i + 1));
    out.flag_A[i] = rec.y - theta_pre * rec.T > (2.0 / eta) * lg * lg;
    out.flag_B[i] = q_pre.norm() > (2.0 * sqL / r) * lg;
    out.flag_E[i] = k_norm(rec.z, rec.T, c) > (2.0 / eta) * lg;

    theta_pre = rec.theta_after;
    q_pre = rec.q_after;
  }
  return out;
}

HittingTimeSeries hitting_times(const std::vector<double>& theta_tilde,
                                double target) {
  HittingTimeSeries out;
  out.target = target;
  for (std::size_t n = 0; n < theta_tilde.size(); ++n) {
    if (theta_tilde[n] < target) out.n_k.push_back(static_cast<long>(n));
  }
  for (std::size_t k = 0; k + 1 < out.n_k.size(); ++k) {
    out.S.push_back(out.n_k[k + 1] - out.n_k[k]);
  }
  return out;
}

std::vector<double> f_process(const std::vector<FrameRecord>& records,
                              long n_k, double eta, double r, double V,
                              const Vec& c) {
  const long N = static_cast<long>(records.size());
  if (n_k < 0 || n_k > N) {
    throw std::out_of_range("f_process: n_k out of range");
  }
  const int L = static_cast<int>(c.size());
  std::vector<double> F;
  F.reserve(N - n_k + 1);
  F.push_back(0.0);  // F[n_k], empty sum
  double running = 0.0;
  for (long i = n_k; i < N; ++i) {
    running += std::min(records[i].summand, cap_at(i, eta, r, V, L));
    F.push_back(running);
  }
  return F;
}

}  // namespace renewal
