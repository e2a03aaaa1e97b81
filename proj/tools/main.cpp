#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "renewal/controller.hpp"
#include "renewal/diagnostics.hpp"
#include "renewal/harness.hpp"
#include "renewal/model.hpp"
#include "renewal/oracle.hpp"

namespace {

using namespace renewal;

std::string oracle_to_json(const OracleSolution& sol) {
  std::ostringstream out;
  out << "{\n  \"theta_star\": " << format_double(sol.theta_star) << ",\n";
  out << "  \"status\": \"" << to_string(sol.status) << "\",\n";
  out << "  \"policy\": [";
  for (int e = 0; e < sol.policy.rows(); ++e) {
    if (e) out << ", ";
    out << "[";
    for (int a = 0; a < sol.policy.cols(); ++a) {
      if (a) out << ", ";
      out << format_double(sol.policy(e, a));
    }
    out << "]";
  }
  out << "],\n  \"achieved_ratios\": {\"objective\": "
      << format_double(sol.objective_ratio) << ", \"constraints\": [";
  for (int l = 0; l < sol.constraint_ratios.size(); ++l) {
    if (l) out << ", ";
    out << format_double(sol.constraint_ratios[l]);
  }
  out << "]}\n}\n";
  return out.str();
}

Vec parse_vec(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
  Vec v(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) v[i] = vals[i];
  return v;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Online renewal optimization: per-frame decision simulator, "
               "offline ratio oracle and diagnostics"};
  app.require_subcommand(1);

  // --- run ---------------------------------------------------------------
  RunConfig rc;
  std::string theta_max_arg = "auto";
  double eta = 0, B = 0, xi = 0;
  auto* run_cmd = app.add_subcommand("run", "simulate one configuration");
  run_cmd->add_option("--model", rc.model, "file | synthetic:<path>");
  run_cmd->add_option("--frames", rc.frames, "number of frames");
  run_cmd->add_option("--V", rc.V, "tradeoff parameter");
  run_cmd->add_option("--delta", rc.delta, "pseudo-average exponent");
  run_cmd->add_option("--theta-max", theta_max_arg, "truncation ceiling or 'auto'");
  run_cmd->add_option("--seed", rc.seed, "rng seed");
  run_cmd->add_flag("--diagnostics", rc.diagnostics,
                    "also emit records, diagnostics csv and hitting times");
  auto* eta_opt = run_cmd->add_option("--eta", eta, "exponential-moment exponent");
  auto* b_opt = run_cmd->add_option("--B", B, "exponential-moment bound");
  auto* xi_opt = run_cmd->add_option("--xi", xi, "slackness margin");
  run_cmd->add_option("--eps0", rc.eps0_scale, "hitting-time target offset above theta*");
  run_cmd->add_option("--out", rc.output, "output path prefix")->required();

  // --- sweep ---------------------------------------------------------------
  std::string sweep_config_path, sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "grid of runs over (V, delta)");
  sweep_cmd->add_option("--config", sweep_config_path, "sweep config json")->required();
  sweep_cmd->add_option("--out", sweep_out, "output csv (overrides config)");

  // --- oracle ---------------------------------------------------------------
  std::string oracle_model = "file";
  auto* oracle_cmd = app.add_subcommand("oracle", "offline optimal ratio and policy");
  oracle_cmd->add_option("--model", oracle_model, "file | synthetic:<path>");

  // --- diagnose ---------------------------------------------------------------
  std::string diag_records, diag_out, diag_model;
  double diag_eta = FileDownloadModel::kDefaultEta;
  double diag_B = FileDownloadModel::default_B();
  double diag_xi = FileDownloadModel::kDefaultXi;
  double diag_V = 100.0, diag_delta = 0.7, diag_theta_max = 0.0;
  double diag_eps0 = 0.1;
  std::string diag_c = "1";
  std::optional<double> diag_target;
  double diag_target_val = 0.0;
  auto* diag_cmd = app.add_subcommand("diagnose", "post-process a records csv");
  diag_cmd->add_option("--records", diag_records, "records csv from a run")->required();
  diag_cmd->add_option("--eta", diag_eta, "exponential-moment exponent");
  diag_cmd->add_option("--B", diag_B, "exponential-moment bound");
  diag_cmd->add_option("--xi", diag_xi, "slackness margin");
  diag_cmd->add_option("--V", diag_V, "V used for the run");
  diag_cmd->add_option("--delta", diag_delta, "delta used for the run");
  diag_cmd->add_option("--theta-max", diag_theta_max, "theta_max used for the run (default: auto from --model)");
  diag_cmd->add_option("--c", diag_c, "constraint levels, comma separated");
  auto* target_opt = diag_cmd->add_option("--target", diag_target_val,
                                          "hitting-time target (default: theta* + eps0 from --model)");
  diag_cmd->add_option("--model", diag_model, "model used to compute theta* for the target");
  diag_cmd->add_option("--eps0", diag_eps0, "target offset above theta*");
  diag_cmd->add_option("--out", diag_out, "output path prefix")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (run_cmd->parsed()) {
    if (theta_max_arg != "auto") {
      rc.theta_max = std::stod(theta_max_arg);
      rc.theta_max_auto = false;
    }
    if (eta_opt->count()) rc.eta = eta;
    if (b_opt->count()) rc.B = B;
    if (xi_opt->count()) rc.xi = xi;
    const RunResult result = run(rc);
    std::cout << summary_to_json(result.summary);
    return 0;
  }

  if (sweep_cmd->parsed()) {
    SweepConfig sc = sweep_config_from_file(sweep_config_path);
    if (!sweep_out.empty()) sc.output = sweep_out;
    if (sc.output.empty()) throw ConfigError("sweep output path missing (config 'output' or --out)");
    const auto rows = sweep(sc);
    std::cerr << rows.size() << " rows -> " << sc.output << "\n";
    return 0;
  }

  if (oracle_cmd->parsed()) {
    const auto model = make_model(oracle_model);
    std::cout << oracle_to_json(solve_oracle(*model));
    return 0;
  }

  if (diag_cmd->parsed()) {
    const auto records = read_records_csv(diag_records);
    const Vec c = parse_vec(diag_c);
    if (target_opt->count()) diag_target = diag_target_val;

    double theta_max = diag_theta_max;
    std::unique_ptr<RenewalModel> model;
    if (!diag_model.empty()) model = make_model(diag_model);
    if (theta_max <= 0.0) {
      if (!model) throw ConfigError("diagnose: give --theta-max or --model");
      theta_max = auto_theta_max(*model);
    }

    BoundInputs bi{diag_eta, diag_B, diag_xi, diag_V, theta_max,
                   static_cast<int>(c.size())};
    const BoundConstants bc = bound_constants(bi);
    const TruncatedSeries ts =
        truncated_series(records, bi.eta, bc.r, diag_V, diag_delta, c);
    write_text_file(diag_out + ".diagnostics.csv",
                    diagnostics_to_csv(records, ts, diag_delta, diag_V, c));

    double target;
    if (diag_target) {
      target = *diag_target;
    } else {
      if (!model) throw ConfigError("diagnose: give --target or --model");
      target = solve_oracle(*model).theta_star + diag_eps0;
    }
    write_text_file(diag_out + ".hitting.json",
                    hitting_to_json(hitting_times(ts.theta_tilde, target)));
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const renewal::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
