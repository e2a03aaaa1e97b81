#include "renewal/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "renewal/harness.hpp"  // ConfigError

namespace renewal {

namespace {
constexpr double kOmega[3] = {0.2, 0.5, 0.8};
constexpr double kS[3] = {1.0, 3.0, 5.0};
constexpr double kAlpha[4] = {0.0, 0.3, 0.6, 0.9};
constexpr double kPower[4] = {0.0, 1.0, 2.0, 4.0};
constexpr double kLambda = 0.5;  // idle -> active probability
}  // namespace

int RenewalModel::sample_event(Rng& rng) const {
  std::vector<double> probs(num_events());
  for (int e = 0; e < num_events(); ++e) probs[e] = event_prob(e);
  return rng.categorical(probs);
}

FileDownloadModel::FileDownloadModel() {
  c_ = Vec::Constant(1, 1.0);
}

double FileDownloadModel::omega_of(int event_id) const {
  if (event_id < 0 || event_id >= 9) throw std::out_of_range("event_id");
  return kOmega[event_id / 3];
}

double FileDownloadModel::s_of(int event_id) const {
  if (event_id < 0 || event_id >= 9) throw std::out_of_range("event_id");
  return kS[event_id % 3];
}

double FileDownloadModel::action_value(int action_id) const {
  if (action_id < 0 || action_id >= 4) throw std::out_of_range("action_id");
  return kAlpha[action_id];
}

double FileDownloadModel::power_of(int action_id) const {
  if (action_id < 0 || action_id >= 4) throw std::out_of_range("action_id");
  return kPower[action_id];
}

PerformanceTriple FileDownloadModel::expectations(int event_id,
                                                  int action_id) const {
  const double omega = omega_of(event_id);
  const double s = s_of(event_id);
  const double alpha = action_value(action_id);
  PerformanceTriple p;
  p.y_hat = alpha * s;
  p.t_hat = 1.0 + 2.0 * alpha * omega;
  p.z_hat = Vec::Constant(1, power_of(action_id));
  return p;
}

Outcome FileDownloadModel::realize(int event_id, int action_id,
                                   Rng& rng) const {
  const double omega = omega_of(event_id);
  const double s = s_of(event_id);
  const double alpha = action_value(action_id);
  const double phi = alpha * omega;  // download success probability

  Outcome out;
  out.y = alpha * s;
  out.z = Vec::Constant(1, power_of(action_id));
  out.T = 1.0;
  if (phi > 0.0 && rng.uniform() < phi) {
    // success: one active slot plus a geometric idle period, mean 1/lambda
    out.T = 1.0 + static_cast<double>(rng.geometric(kLambda));
  }
  return out;
}

SyntheticModel::SyntheticModel(std::vector<double> event_probs,
                               int num_actions, Vec c,
                               std::vector<std::vector<Cell>> table)
    : event_probs_(std::move(event_probs)),
      num_actions_(num_actions),
      c_(std::move(c)),
      table_(std::move(table)) {
  validate();
}

void SyntheticModel::validate() const {
  const int E = static_cast<int>(event_probs_.size());
  if (E == 0) throw ConfigError("synthetic model: empty event list");
  if (num_actions_ <= 0) throw ConfigError("synthetic model: empty action list");

  double psum = 0.0;
  for (double p : event_probs_) {
    if (p < 0.0 || p > 1.0) throw ConfigError("synthetic model: invalid event probability");
    psum += p;
  }
  if (std::abs(psum - 1.0) > 1e-12) {
    throw ConfigError("synthetic model: event probabilities sum to " +
                      std::to_string(psum) + ", expected 1");
  }
  if (static_cast<int>(table_.size()) != E) {
    throw ConfigError("synthetic model: table row count does not match events");
  }
  const auto L = c_.size();
  for (int e = 0; e < E; ++e) {
    if (static_cast<int>(table_[e].size()) != num_actions_) {
      throw ConfigError("synthetic model: missing table entries for event " + std::to_string(e));
    }
    for (int a = 0; a < num_actions_; ++a) {
      const Cell& cell = table_[e][a];
      const std::string where = "(event " + std::to_string(e) + ", action " + std::to_string(a) + ")";
      if (cell.expect.z_hat.size() != L) {
        throw ConfigError("synthetic model: z_hat length mismatch at " + where);
      }
      if (cell.expect.t_hat < 1.0) {
        throw ConfigError("synthetic model: t_hat < 1 at " + where);
      }
      if (cell.outcomes.empty() || cell.outcomes.size() != cell.outcome_probs.size()) {
        throw ConfigError("synthetic model: malformed outcome list at " + where);
      }
      double osum = 0.0, my = 0.0, mt = 0.0;
      Vec mz = Vec::Zero(L);
      for (std::size_t k = 0; k < cell.outcomes.size(); ++k) {
        const double p = cell.outcome_probs[k];
        if (p < 0.0 || p > 1.0) throw ConfigError("synthetic model: invalid outcome probability at " + where);
        const Outcome& o = cell.outcomes[k];
        if (o.T < 1.0) throw ConfigError("synthetic model: outcome with T < 1 at " + where);
        if (o.z.size() != L) throw ConfigError("synthetic model: outcome z length mismatch at " + where);
        osum += p;
        my += p * o.y;
        mt += p * o.T;
        mz += p * o.z;
      }
      if (std::abs(osum - 1.0) > 1e-12) {
        throw ConfigError("synthetic model: outcome probabilities do not sum to 1 at " + where);
      }
      if (std::abs(my - cell.expect.y_hat) > 1e-9 ||
          std::abs(mt - cell.expect.t_hat) > 1e-9 ||
          (mz - cell.expect.z_hat).cwiseAbs().maxCoeff() > 1e-9) {
        throw ConfigError("synthetic model: declared expectations do not match outcome means at " + where);
      }
    }
  }
}

PerformanceTriple SyntheticModel::expectations(int event_id, int action_id) const {
  return table_.at(event_id).at(action_id).expect;
}

Outcome SyntheticModel::realize(int event_id, int action_id, Rng& rng) const {
  const Cell& cell = table_.at(event_id).at(action_id);
  const int k = rng.categorical(cell.outcome_probs);
  return cell.outcomes[k];
}

SyntheticModel SyntheticModel::from_json(const nlohmann::json& config) {
  try {
    std::vector<double> event_probs;
    std::vector<int> event_ids;
    for (const auto& ev : config.at("events")) {
      event_ids.push_back(ev.at("id").get<int>());
      event_probs.push_back(ev.at("prob").get<double>());
    }
    const auto& actions = config.at("actions");
    const int A = static_cast<int>(actions.size());
    std::vector<int> action_ids;
    for (const auto& a : actions) action_ids.push_back(a.get<int>());

    const auto& cj = config.at("c");
    Vec c(cj.size());
    for (std::size_t l = 0; l < cj.size(); ++l) c[l] = cj[l].get<double>();

    auto event_index = [&](int id) {
      for (std::size_t i = 0; i < event_ids.size(); ++i)
        if (event_ids[i] == id) return static_cast<int>(i);
      throw ConfigError("synthetic model: table references unknown event " + std::to_string(id));
    };
    auto action_index = [&](int id) {
      for (std::size_t i = 0; i < action_ids.size(); ++i)
        if (action_ids[i] == id) return static_cast<int>(i);
      throw ConfigError("synthetic model: table references unknown action " + std::to_string(id));
    };

    std::vector<std::vector<Cell>> table(event_probs.size(), std::vector<Cell>(A));
    std::vector<std::vector<bool>> seen(event_probs.size(), std::vector<bool>(A, false));
    for (const auto& row : config.at("table")) {
      const int e = event_index(row.at("event").get<int>());
      const int a = action_index(row.at("action").get<int>());
      Cell cell;
      cell.expect.y_hat = row.at("y_hat").get<double>();
      cell.expect.t_hat = row.at("t_hat").get<double>();
      const auto& zj = row.at("z_hat");
      cell.expect.z_hat = Vec(zj.size());
      for (std::size_t l = 0; l < zj.size(); ++l) cell.expect.z_hat[l] = zj[l].get<double>();
      for (const auto& oj : row.at("outcomes")) {
        Outcome o;
        o.y = oj.at("y").get<double>();
        o.T = oj.at("T").get<double>();
        const auto& ozj = oj.at("z");
        o.z = Vec(ozj.size());
        for (std::size_t l = 0; l < ozj.size(); ++l) o.z[l] = ozj[l].get<double>();
        cell.outcomes.push_back(std::move(o));
        cell.outcome_probs.push_back(oj.at("prob").get<double>());
      }
      table[e][a] = std::move(cell);
      seen[e][a] = true;
    }
    for (std::size_t e = 0; e < seen.size(); ++e)
      for (int a = 0; a < A; ++a)
        if (!seen[e][a])
          throw ConfigError("synthetic model: no table entry for (event " +
                            std::to_string(event_ids[e]) + ", action " +
                            std::to_string(action_ids[a]) + ")");

    return SyntheticModel(std::move(event_probs), A, std::move(c), std::move(table));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("synthetic model: malformed config: ") + e.what());
  }
}

SyntheticModel SyntheticModel::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open synthetic model config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return from_json(j);
}

double auto_theta_max(const RenewalModel& model) {
  double best = 0.0;
  for (int e = 0; e < model.num_events(); ++e) {
    for (int a = 0; a < model.num_actions(e); ++a) {
      const PerformanceTriple p = model.expectations(e, a);
      best = std::max(best, p.y_hat / p.t_hat);
    }
  }
  return best > 0.0 ? 1.5 * best : 1.0;
}

std::unique_ptr<RenewalModel> make_model(const std::string& spec) {
  if (spec == "file" || spec == "file_download") {
    return std::make_unique<FileDownloadModel>();
  }
  const std::string prefix = "synthetic:";
  if (spec.rfind(prefix, 0) == 0) {
    return std::make_unique<SyntheticModel>(
        SyntheticModel::from_file(spec.substr(prefix.size())));
  }
  throw ConfigError("unknown model: " + spec);
}

}  // namespace renewal
