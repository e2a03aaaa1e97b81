#include "renewal/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "renewal/controller.hpp"
#include "renewal/oracle.hpp"
#include "renewal/rng.hpp"

namespace renewal {

std::string format_double(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

BoundInputs resolve_bound_inputs(const RunConfig& config, double theta_max,
                                 int L) {
  BoundInputs bi;
  bi.eta = config.eta.value_or(FileDownloadModel::kDefaultEta);
  bi.B = config.B.value_or(FileDownloadModel::default_B());
  bi.xi = config.xi.value_or(FileDownloadModel::kDefaultXi);
  bi.V = config.V;
  bi.theta_max = theta_max;
  bi.L = L;
  return bi;
}

void validate(const RunConfig& config) {
  if (config.frames < 1) throw ConfigError("frames must be >= 1");
  if (config.V <= 0.0) throw ConfigError("V must be positive");
  if (config.delta <= 0.0 || config.delta > 1.5) {
    throw ConfigError("delta must be in (0, 1.5]");
  }
  if (!config.theta_max_auto && config.theta_max <= 0.0) {
    throw ConfigError("theta_max must be positive or auto");
  }
}

}  // namespace

RunResult run(const RunConfig& config, bool keep_records) {
  validate(config);
  const auto t0 = std::chrono::steady_clock::now();

  const auto model = make_model(config.model);
  const double theta_max =
      config.theta_max_auto ? auto_theta_max(*model) : config.theta_max;
  const Vec& c = model->constraint_levels();
  const int L = static_cast<int>(c.size());

  ControllerState state =
      ControllerState::initial(config.V, config.delta, theta_max, c);
  Rng rng(config.seed);

  const bool want_records = keep_records || config.diagnostics;
  RunResult result;
  if (want_records) result.records.reserve(config.frames);

  double sum_y = 0.0, sum_T = 0.0, sum_qnorm = 0.0;
  Vec sum_z = Vec::Zero(L);
  for (long i = 0; i < config.frames; ++i) {
    FrameRecord rec = step(state, *model, rng);
    sum_y += rec.y;
    sum_T += rec.T;
    sum_z += rec.z;
    sum_qnorm += state.Q.norm();
    if (want_records) result.records.push_back(std::move(rec));
  }

  RunSummary& s = result.summary;
  s.avg_penalty_ratio = sum_y / sum_T;
  s.avg_resource_ratios = sum_z / sum_T;
  s.avg_queue = sum_qnorm / static_cast<double>(config.frames);
  s.final_theta = state.theta;
  s.frames = config.frames;
  s.slots = sum_T;
  s.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  if (!config.output.empty()) {
    write_text_file(config.output + ".summary.json", summary_to_json(s));
    if (config.diagnostics) {
      write_text_file(config.output + ".records.csv",
                      records_to_csv(result.records, L));
      const BoundInputs bi = resolve_bound_inputs(config, theta_max, L);
      const BoundConstants bc = bound_constants(bi);
      const TruncatedSeries ts = truncated_series(
          result.records, bi.eta, bc.r, config.V, config.delta, c);
      write_text_file(config.output + ".diagnostics.csv",
                      diagnostics_to_csv(result.records, ts, config.delta,
                                         config.V, c));
      const OracleSolution oracle = solve_oracle(*model);
      const double target = oracle.theta_star + config.eps0_scale;
      write_text_file(config.output + ".hitting.json",
                      hitting_to_json(hitting_times(ts.theta_tilde, target)));
    }
  }
  if (!keep_records && !config.diagnostics) result.records.clear();
  return result;
}

std::vector<SweepRow> sweep(const SweepConfig& config) {
  if (config.replications < 1) throw ConfigError("replications must be >= 1");
  if (config.V_list.empty() || config.delta_list.empty()) {
    throw ConfigError("V_list and delta_list must be nonempty");
  }
  const int parallelism = std::max(1, config.parallelism);

  struct Point {
    std::size_t vi, di;
    int rep;
  };
  std::vector<Point> points;
  for (std::size_t vi = 0; vi < config.V_list.size(); ++vi)
    for (std::size_t di = 0; di < config.delta_list.size(); ++di)
      for (int rep = 0; rep < config.replications; ++rep)
        points.push_back({vi, di, rep});

  std::vector<SweepRow> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= points.size()) return;
      const Point& pt = points[idx];
      SweepRow& row = rows[idx];
      row.V = config.V_list[pt.vi];
      row.delta = config.delta_list[pt.di];
      row.rep = pt.rep;
      RunConfig rc = config.base;
      rc.V = row.V;
      rc.delta = row.delta;
      rc.seed = derive_stream(config.base.seed, pt.vi, pt.di,
                              static_cast<std::uint64_t>(pt.rep));
      rc.output.clear();
      rc.diagnostics = false;
      try {
        row.summary = run(rc).summary;
      } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
      }
    }
  };

  if (parallelism == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int i = 0; i < parallelism; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     if (a.V != b.V) return a.V < b.V;
                     if (a.delta != b.delta) return a.delta < b.delta;
                     return a.rep < b.rep;
                   });

  if (!config.output.empty()) {
    const auto model = make_model(config.base.model);
    write_text_file(config.output,
                    sweep_to_csv(rows, model->constraint_count()));
  }
  return rows;
}

SweepConfig sweep_config_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sweep config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  try {
    SweepConfig sc;
    const auto& base = j.at("base");
    sc.base.model = base.value("model", std::string("file"));
    sc.base.frames = base.value("frames", sc.base.frames);
    sc.base.seed = base.value("seed", sc.base.seed);
    sc.base.V = base.value("V", sc.base.V);
    sc.base.delta = base.value("delta", sc.base.delta);
    if (base.contains("theta_max") && !base.at("theta_max").is_string()) {
      sc.base.theta_max = base.at("theta_max").get<double>();
      sc.base.theta_max_auto = false;
    }
    sc.V_list = j.at("V_list").get<std::vector<double>>();
    sc.delta_list = j.at("delta_list").get<std::vector<double>>();
    sc.replications = j.value("replications", 5);
    sc.parallelism = j.value("parallelism", 1);
    sc.output = j.value("output", std::string());
    return sc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed sweep config: ") + e.what());
  }
}

std::string summary_to_json(const RunSummary& s) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"avg_penalty_ratio\": " << format_double(s.avg_penalty_ratio) << ",\n";
  out << "  \"avg_resource_ratios\": [";
  for (int l = 0; l < s.avg_resource_ratios.size(); ++l) {
    if (l) out << ", ";
    out << format_double(s.avg_resource_ratios[l]);
  }
  out << "],\n";
  out << "  \"avg_queue\": " << format_double(s.avg_queue) << ",\n";
  out << "  \"final_theta\": " << format_double(s.final_theta) << ",\n";
  out << "  \"frames\": " << s.frames << ",\n";
  out << "  \"slots\": " << format_double(s.slots) << ",\n";
  out << "  \"wall_time\": " << format_double(s.wall_time) << "\n";
  out << "}\n";
  return out.str();
}

std::string records_to_csv(const std::vector<FrameRecord>& records, int L) {
  std::ostringstream out;
  out << "n,event,action,y,T";
  for (int l = 1; l <= L; ++l) out << ",z" << l;
  out << ",summand,theta";
  for (int l = 1; l <= L; ++l) out << ",q" << l;
  out << "\n";
  for (const FrameRecord& r : records) {
    out << r.n << ',' << r.event_id << ',' << r.action_id << ','
        << format_double(r.y) << ',' << format_double(r.T);
    for (int l = 0; l < L; ++l) out << ',' << format_double(r.z[l]);
    out << ',' << format_double(r.summand) << ','
        << format_double(r.theta_after);
    for (int l = 0; l < L; ++l) out << ',' << format_double(r.q_after[l]);
    out << "\n";
  }
  return out.str();
}

std::vector<FrameRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open records csv: " + path);
  std::string header;
  if (!std::getline(in, header)) throw ConfigError("empty records csv: " + path);

  // Infer L from the z columns of the header.
  int L = 0;
  {
    std::stringstream hs(header);
    std::string col;
    while (std::getline(hs, col, ',')) {
      if (col.size() > 1 && col[0] == 'z') ++L;
    }
  }
  if (L == 0) throw ConfigError("records csv has no z columns: " + path);

  std::vector<FrameRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (static_cast<int>(fields.size()) != 7 + 2 * L) {
      throw ConfigError("records csv row has wrong column count: " + path);
    }
    FrameRecord r;
    std::size_t k = 0;
    r.n = std::stol(fields[k++]);
    r.event_id = std::stoi(fields[k++]);
    r.action_id = std::stoi(fields[k++]);
    r.y = std::stod(fields[k++]);
    r.T = std::stod(fields[k++]);
    r.z = Vec(L);
    for (int l = 0; l < L; ++l) r.z[l] = std::stod(fields[k++]);
    r.summand = std::stod(fields[k++]);
    r.theta_after = std::stod(fields[k++]);
    r.q_after = Vec(L);
    for (int l = 0; l < L; ++l) r.q_after[l] = std::stod(fields[k++]);
    records.push_back(std::move(r));
  }
  return records;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows, int L) {
  std::ostringstream out;
  out << "V,delta,rep,avg_penalty_ratio";
  for (int l = 1; l <= L; ++l) out << ",avg_resource_" << l;
  out << ",avg_queue,final_theta,frames,slots\n";
  for (const SweepRow& row : rows) {
    out << format_double(row.V) << ',' << format_double(row.delta) << ','
        << row.rep;
    if (row.failed) {
      out << ",error";
      for (int l = 0; l < L; ++l) out << ",error";
      out << ",error,error,0,0\n";
      continue;
    }
    out << ',' << format_double(row.summary.avg_penalty_ratio);
    for (int l = 0; l < L; ++l)
      out << ',' << format_double(row.summary.avg_resource_ratios[l]);
    out << ',' << format_double(row.summary.avg_queue) << ','
        << format_double(row.summary.final_theta) << ','
        << row.summary.frames << ',' << format_double(row.summary.slots)
        << "\n";
  }
  return out.str();
}

std::string diagnostics_to_csv(const std::vector<FrameRecord>& records,
                               const TruncatedSeries& ts, double delta,
                               double V, const Vec& c) {
  (void)V;
  std::ostringstream out;
  out << "n,theta_hat,theta,theta_tilde,q_norm,K,flag_A,flag_B,flag_E\n";
  double D = 0.0;
  Vec q_pre = Vec::Zero(c.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const FrameRecord& r = records[i];
    D += r.summand;
    const double theta_hat =
        D / std::pow(static_cast<double>(i + 1), delta);
    out << r.n << ',' << format_double(theta_hat) << ','
        << format_double(r.theta_after) << ','
        << format_double(ts.theta_tilde[i + 1]) << ','
        << format_double(q_pre.norm()) << ','
        << format_double(k_norm(r.z, r.T, c)) << ','
        << int(ts.flag_A[i]) << ',' << int(ts.flag_B[i]) << ','
        << int(ts.flag_E[i]) << "\n";
    q_pre = r.q_after;
  }
  return out.str();
}

std::string hitting_to_json(const HittingTimeSeries& h) {
  std::ostringstream out;
  out << "{\n  \"target\": " << format_double(h.target) << ",\n  \"n_k\": [";
  for (std::size_t i = 0; i < h.n_k.size(); ++i) {
    if (i) out << ", ";
    out << h.n_k[i];
  }
  out << "],\n  \"S\": [";
  for (std::size_t i = 0; i < h.S.size(); ++i) {
    if (i) out << ", ";
    out << h.S[i];
  }
  out << "]\n}\n";
  return out.str();
}

}  // namespace renewal
