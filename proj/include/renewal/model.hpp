#pragma once

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "renewal/rng.hpp"
#include "renewal/types.hpp"

namespace renewal {

// A renewal system: a finite event space with probabilities, a finite
// action list per event, known conditional expectations and a sampler for
// realized outcomes. Models are immutable after construction; all
// randomness flows through the caller-provided stream.
class RenewalModel {
 public:
  virtual ~RenewalModel() = default;

  virtual int num_events() const = 0;
  virtual double event_prob(int event_id) const = 0;
  virtual int num_actions(int event_id) const = 0;
  virtual PerformanceTriple expectations(int event_id, int action_id) const = 0;
  virtual Outcome realize(int event_id, int action_id, Rng& rng) const = 0;
  virtual int constraint_count() const = 0;
  virtual const Vec& constraint_levels() const = 0;

  int sample_event(Rng& rng) const;
};

// The two-state file-downloading MDP reduced to one decision per frame.
// The composite event (omega, s) takes 9 equiprobable values, enumerated
// row-major with omega outer and s inner. A frame is one active slot; on
// download success the frame extends by a geometric idle period with mean
// 1/lambda, so E[T] = 1 + 2*alpha*omega at lambda = 0.5.
class FileDownloadModel : public RenewalModel {
 public:
  FileDownloadModel();

  int num_events() const override { return 9; }
  double event_prob(int) const override { return 1.0 / 9.0; }
  int num_actions(int) const override { return 4; }
  PerformanceTriple expectations(int event_id, int action_id) const override;
  Outcome realize(int event_id, int action_id, Rng& rng) const override;
  int constraint_count() const override { return 1; }
  const Vec& constraint_levels() const override { return c_; }

  double omega_of(int event_id) const;
  double s_of(int event_id) const;
  double action_value(int action_id) const;
  double power_of(int action_id) const;

  // Exponential-moment defaults for diagnostics (user-overridable).
  static constexpr double kDefaultEta = 0.3;
  static double default_B() { return std::exp(1.0); }
  static constexpr double kDefaultXi = 1.0;

 private:
  Vec c_;
};

// Explicit tabulated model: events with probabilities and, per
// (event, action), declared expectations plus a discrete outcome
// distribution consistent with them. Construction validates the tables.
class SyntheticModel : public RenewalModel {
 public:
  struct Cell {
    PerformanceTriple expect;
    std::vector<Outcome> outcomes;
    std::vector<double> outcome_probs;
  };

  SyntheticModel(std::vector<double> event_probs, int num_actions, Vec c,
                 std::vector<std::vector<Cell>> table);

  static SyntheticModel from_json(const nlohmann::json& config);
  static SyntheticModel from_file(const std::string& path);

  int num_events() const override { return static_cast<int>(event_probs_.size()); }
  double event_prob(int event_id) const override { return event_probs_.at(event_id); }
  int num_actions(int) const override { return num_actions_; }
  PerformanceTriple expectations(int event_id, int action_id) const override;
  Outcome realize(int event_id, int action_id, Rng& rng) const override;
  int constraint_count() const override { return static_cast<int>(c_.size()); }
  const Vec& constraint_levels() const override { return c_; }

 private:
  void validate() const;

  std::vector<double> event_probs_;
  int num_actions_;
  Vec c_;
  std::vector<std::vector<Cell>> table_;  // [event][action]
};

// theta_max heuristic: no stationary policy's penalty ratio exceeds the
// largest tabulated y_hat / t_hat, so 1.5x that value is a safe ceiling.
double auto_theta_max(const RenewalModel& model);

// "file" / "file_download" or "synthetic:<path>".
std::unique_ptr<RenewalModel> make_model(const std::string& spec);

}  // namespace renewal
