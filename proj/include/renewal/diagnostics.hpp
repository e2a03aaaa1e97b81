#pragma once

#include <vector>

#include "renewal/types.hpp"

namespace renewal {

// Euclidean norm of the queue increment vector (z_l - c_l*T).
double k_norm(const Vec& z, double T, const Vec& c);

// Exponential-moment inputs: eta and B bound E[e^{eta X}] <= B for the
// frame variables, xi is the uniform slackness margin of the Slater-type
// condition (some stationary policy meets every constraint with margin xi).
struct BoundInputs {
  double eta = 1.0;
  double B = 1.0;
  double xi = 1.0;
  double V = 1.0;
  double theta_max = 1.0;
  int L = 1;
};

struct BoundConstants {
  double r = 0.0;
  double sigma = 0.0;
  double rho = 0.0;
  double Gamma = 0.0;
  double C0 = 0.0;
  double D = 0.0;
  bool c0_positive = true;  // false -> the decay bound is vacuous
};

// Drift/decay constants: Gamma = B, r = min{eta, xi*eta^2 / (8B)},
// rho = 1 - r*xi/2 + (2B/eta^2) r^2, C0 = 2B^2/(V xi eta^2)
// + 2(theta_max+1)B/(xi eta) - xi/(4V), sigma = C0*V,
// D = 1 + B e^{r sigma}/(1-rho). The r formula uses the minimizer of the
// rho quadratic (xi*eta^2/8B); at xi*eta^2/4B the quadratic equals 1 and
// the decay bound degenerates.
BoundConstants bound_constants(const BoundInputs& in);

struct ExpMomentSeries {
  std::vector<double> mean;    // per-frame cross-run sample mean of e^{r||Q||}
  std::vector<double> stderr_; // per-frame standard error
};

// Cross-run statistic: requires at least two independent runs' ||Q[n]||
// series (equal length).
ExpMomentSeries empirical_exp_moment(
    const std::vector<std::vector<double>>& qnorm_runs, double r);

struct TruncatedSeries {
  std::vector<double> theta_tilde;  // length N+1, theta_tilde[0] = 0
  std::vector<double> caps;         // per-frame truncation caps, length N
  std::vector<char> flag_A;         // y_i - theta_i*T_i exceeds (2/eta) log^2(i+1)
  std::vector<char> flag_B;         // ||Q_i|| exceeds (2 sqrt(L)/r) log(i+1)
  std::vector<char> flag_E;         // K_i exceeds (2/eta) log(i+1)
};

// Term-wise truncated pseudo average and the three truncation events.
// theta_i and Q_i are the pre-decision values of frame i, reconstructed
// from the previous record's snapshots (zero state before frame 0).
TruncatedSeries truncated_series(const std::vector<FrameRecord>& records,
                                 double eta, double r, double V, double delta,
                                 const Vec& c);

struct HittingTimeSeries {
  double target = 0.0;
  std::vector<long> n_k;  // visit indices of theta_tilde below target
  std::vector<long> S;    // S_k = n_{k+1} - n_k
};

// Visits of the theta_tilde series to (-inf, target); consecutive visits
// count separately. theta_tilde[0] = 0, so index 0 is a visit whenever the
// target is positive.
HittingTimeSeries hitting_times(const std::vector<double>& theta_tilde,
                                double target);

// Running sum of truncated summands from visit index n_k. Element j of the
// result is F[n_k + j]; F[n_k] = 0 by the empty sum.
std::vector<double> f_process(const std::vector<FrameRecord>& records,
                              long n_k, double eta, double r, double V,
                              const Vec& c);

}  // namespace renewal
