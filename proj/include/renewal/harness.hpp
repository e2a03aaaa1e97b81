#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "renewal/diagnostics.hpp"
#include "renewal/model.hpp"
#include "renewal/types.hpp"

namespace renewal {

// Invalid configuration (bad flags, malformed config files, inconsistent
// model tables). The CLI maps this to exit code 1; other errors map to 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string model = "file";   // "file" or "synthetic:<path>"
  long frames = 200000;
  double V = 100.0;
  double delta = 0.7;
  double theta_max = 0.0;       // used when theta_max_auto is false
  bool theta_max_auto = true;
  std::uint64_t seed = 1;
  std::string output;           // path prefix; empty -> no files written
  bool diagnostics = false;
  std::optional<double> eta, B, xi;  // bound inputs; model defaults if unset
  double eps0_scale = 0.1;      // hitting-time target = theta* + eps0_scale (eps0 = scale*V)
};

struct RunSummary {
  double avg_penalty_ratio = 0.0;   // sum(y) / sum(T)
  Vec avg_resource_ratios;          // sum(z_l) / sum(T)
  double avg_queue = 0.0;           // (1/N) sum ||Q[n]||
  double final_theta = 0.0;
  long frames = 0;
  double slots = 0.0;               // sum(T)
  double wall_time = 0.0;           // seconds
};

struct RunResult {
  RunSummary summary;
  std::vector<FrameRecord> records;  // kept when requested
};

// Executes the controller for config.frames frames. Deterministic per
// seed. When config.output is nonempty writes <output>.summary.json and,
// with diagnostics on, <output>.records.csv, <output>.diagnostics.csv and
// <output>.hitting.json.
RunResult run(const RunConfig& config, bool keep_records = false);

struct SweepConfig {
  RunConfig base;
  std::vector<double> V_list;
  std::vector<double> delta_list;
  int replications = 5;
  int parallelism = 1;
  std::string output;  // CSV path; empty -> not written
};

struct SweepRow {
  double V = 0.0;
  double delta = 0.0;
  int rep = 0;
  RunSummary summary;
  bool failed = false;
  std::string error;
};

// One row per (V, delta, replication). Replication seeds follow the
// derive_stream rule, so results are independent of execution order and of
// the parallelism setting. Rows come back sorted by (V, delta, rep).
std::vector<SweepRow> sweep(const SweepConfig& config);

SweepConfig sweep_config_from_file(const std::string& path);

// --- serialization -------------------------------------------------------

// Shortest round-trip decimal form; used everywhere so identical configs
// give byte-identical files.
std::string format_double(double x);

std::string summary_to_json(const RunSummary& s);
void write_text_file(const std::string& path, const std::string& content);

// Record CSV schema: n,event,action,y,T,z1..zL,summand,theta,q1..qL
// (theta and q are the post-update snapshots).
std::string records_to_csv(const std::vector<FrameRecord>& records, int L);
std::vector<FrameRecord> read_records_csv(const std::string& path);

// Sweep CSV schema:
// V,delta,rep,avg_penalty_ratio,avg_resource_1..L,avg_queue,final_theta,frames,slots
std::string sweep_to_csv(const std::vector<SweepRow>& rows, int L);

// Diagnostics CSV (one row per frame):
// n,theta_hat,theta,theta_tilde,q_norm,K,flag_A,flag_B,flag_E
// theta_hat/theta/theta_tilde are the post-frame values; q_norm is the
// pre-decision queue norm entering the frame.
std::string diagnostics_to_csv(const std::vector<FrameRecord>& records,
                               const TruncatedSeries& ts, double delta,
                               double V, const Vec& c);

std::string hitting_to_json(const HittingTimeSeries& h);

}  // namespace renewal
