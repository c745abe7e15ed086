// ballmax command-line tool: instance ingestion, solve/classify pipeline,
// sequence generation, randomized estimation and 2D figure reproduction.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ballmax/classify.hpp"
#include "ballmax/estimator.hpp"
#include "ballmax/figures.hpp"
#include "ballmax/io.hpp"
#include "ballmax/oracle2d.hpp"
#include "ballmax/sequence.hpp"
#include "ballmax/solver.hpp"
#include "ballmax/ssp.hpp"

namespace {

constexpr const char* kVersion = "ballmax 0.1.0";

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

// Randomized subcommands refuse to run without an explicit --seed unless
// "--seed auto" is passed.
std::uint64_t parse_seed(const std::string& seed_text) {
  if (seed_text == "auto")
    return static_cast<std::uint64_t>(
        std::chrono::system_clock::now().time_since_epoch().count());
  return std::stoull(seed_text);
}

void write_report(const std::string& out_dir, const std::string& name,
                  ballmax::Json report) {
  std::filesystem::create_directories(out_dir);
  ballmax::write_text(out_dir + "/" + name, report.dump(2) + "\n");
}

ballmax::Json base_report(const ballmax::Json& config) {
  ballmax::Json rep;
  rep["version"] = kVersion;
  rep["config"] = config;
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maximum distance over an intersection of balls: solver, "
               "sequence generator and randomized estimators"};
  app.require_subcommand(1);

  std::string instance_path, out_dir = ".", seed_text, ssp_path;
  double lambda_override = -1.0, r_init = -1.0, step = -1.0, threshold = 0.995;
  double r0_flag = -1.0, offset_param = -1.0, tol = 1e-8;
  double bracket_lo = -1.0, bracket_hi = -1.0;
  std::int64_t samples = 4096;
  int workers = 1, seq_i = -20, vol_p = 2;
  std::vector<int> indices = {-30, -10, -3, 0, 2};
  std::string format = "json";

  auto add_common = [&](CLI::App* cmd, bool needs_instance = true) {
    if (needs_instance)
      cmd->add_option("--instance", instance_path, "instance JSON file")->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--lambda", lambda_override, "override the instance lambda");
  };
  auto add_random = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed_text, "RNG seed (integer, or 'auto')")->required();
    cmd->add_option("--samples", samples, "samples per round");
    cmd->add_option("--workers", workers, "parallel sampling workers");
  };

  auto* cmd_solve = app.add_subcommand("solve", "solve the convex DC subproblem");
  add_common(cmd_solve);
  cmd_solve->add_option("--tol", tol, "solver tolerance");

  auto* cmd_classify = app.add_subcommand("classify", "solve and classify the instance");
  add_common(cmd_classify);

  auto* cmd_sequence = app.add_subcommand("sequence", "emit sequence elements Q_{R^2}^i");
  add_common(cmd_sequence);
  cmd_sequence->add_option("--i", indices, "indices to emit");
  cmd_sequence->add_option("--r0", r0_flag, "probe radius R (default: solver r_lower)");
  cmd_sequence->add_option("--format", format, "json or svg");

  auto* cmd_estimate = app.add_subcommand("estimate", "Procedure B estimate of R0");
  add_common(cmd_estimate);
  add_random(cmd_estimate);
  cmd_estimate->add_option("--i", seq_i, "backward sequence index (negative)");
  cmd_estimate->add_option("--r-init", r_init, "initial radius (default: solver r_lower)");
  cmd_estimate->add_option("--step", step, "radius growth step");

  auto* cmd_volume = app.add_subcommand("volume", "volume-ratio bisection for R0");
  add_common(cmd_volume);
  add_random(cmd_volume);
  cmd_volume->add_option("--i", seq_i, "base sequence index");
  cmd_volume->add_option("--p", vol_p, "index offset p >= 1");
  cmd_volume->add_option("--lo", bracket_lo, "bracket low end")->required();
  cmd_volume->add_option("--hi", bracket_hi, "bracket high end")->required();
  cmd_volume->add_option("--threshold", threshold, "Wilson-low threshold for ratio = 1");

  auto* cmd_ssp = app.add_subcommand("ssp-encode", "encode a subset-sum instance");
  cmd_ssp->add_option("--ssp", ssp_path, "SSP JSON file {\"s\": [...], \"t\": .., \"beta\": ..}")
      ->required();
  cmd_ssp->add_option("--out", out_dir, "output directory");
  cmd_ssp->add_option("--offset-param", offset_param, "imprint ball depth");
  cmd_ssp->add_option("--lambda", lambda_override, "lambda for the emitted instance");

  auto* cmd_oracle = app.add_subcommand("oracle", "exact 2D farthest-point oracle");
  add_common(cmd_oracle);

  auto* cmd_figures = app.add_subcommand("figures", "emit 2D SVG figure set");
  add_common(cmd_figures);
  cmd_figures->add_option("--r0", r0_flag, "highlight radius (default: 2D oracle)");
  cmd_figures->add_option("--i", indices, "sequence indices to draw");

  CLI11_PARSE(app, argc, argv);

  Timer timer;
  try {
    ballmax::Json config;

    auto load = [&]() {
      ballmax::Instance inst = ballmax::load_instance(instance_path);
      if (lambda_override > 0.0) inst.lambda = lambda_override;
      ballmax::validate(inst);
      config["instance"] = instance_path;
      config["lambda"] = inst.lambda;
      return inst;
    };

    if (*cmd_solve || *cmd_classify) {
      const ballmax::Instance inst = load();
      ballmax::SolverOpts opts;
      opts.tol = tol;
      config["tol"] = opts.tol;
      const ballmax::DcSolution sol = ballmax::minimize_dc(inst, opts);
      const ballmax::Classification cls = ballmax::classify(inst, sol);
      ballmax::Json rep = base_report(config);
      rep["results"]["solution"] = ballmax::solution_to_json(sol);
      rep["results"]["classification"] = ballmax::classification_to_json(cls);
      const auto [lo, hi] = ballmax::certify_interval(cls, inst);
      rep["results"]["interval"] = ballmax::Json::array({lo, hi ? ballmax::Json(*hi) : ballmax::Json(nullptr)});
      rep["timings"]["seconds"] = timer.seconds();
      write_report(out_dir, "report.json", rep);
    } else if (*cmd_sequence) {
      const ballmax::Instance inst = load();
      double r0 = r0_flag;
      if (r0 < 0.0) r0 = ballmax::minimize_dc(inst, {}).r_lower;
      config["r0"] = r0;
      config["indices"] = indices;
      ballmax::Json rep = base_report(config);
      rep["results"]["elements"] = ballmax::Json::array();
      for (int i : indices) {
        const ballmax::SequenceElement el = ballmax::element_at(inst, i, r0 * r0);
        ballmax::Json je;
        je["index"] = el.index;
        je["hull_inside"] = el.hull_inside;
        je["centers"] = ballmax::Json::array();
        for (const auto& c : el.centers)
          je["centers"].push_back(ballmax::io_detail::point_to_json(c));
        je["radii_sq"] = el.radii_sq;
        je["empty"] = el.empty();
        rep["results"]["elements"].push_back(std::move(je));
      }
      rep["timings"]["seconds"] = timer.seconds();
      write_report(out_dir, "report.json", rep);
      if (format == "svg") ballmax::emit_figures(inst, r0, indices, out_dir);
    } else if (*cmd_estimate) {
      const ballmax::Instance inst = load();
      const ballmax::RngSeed seed{parse_seed(seed_text)};
      const ballmax::DcSolution sol = ballmax::minimize_dc(inst, {});
      const ballmax::Classification cls = ballmax::classify(inst, sol);
      if (r_init <= 0.0) r_init = std::max(1e-6, 0.9 * sol.r_lower);
      if (step <= 0.0) step = std::max(0.01, 0.01 * r_init);
      config["seed"] = seed.seed;
      config["samples"] = samples;
      config["workers"] = workers;
      config["i"] = seq_i;
      config["r_init"] = r_init;
      config["step"] = step;
      ballmax::EstimateReport est =
          ballmax::procedure_b(inst, seq_i, r_init, samples, step, seed, workers);
      est.classification = cls;
      ballmax::Json rep = base_report(config);
      rep["results"]["estimate"] = ballmax::estimate_to_json(est);
      rep["timings"]["seconds"] = timer.seconds();
      write_report(out_dir, "report.json", rep);
      ballmax::write_text(out_dir + "/stats_trace.csv", ballmax::stats_trace_csv(est));
    } else if (*cmd_volume) {
      const ballmax::Instance inst = load();
      const ballmax::RngSeed seed{parse_seed(seed_text)};
      config["seed"] = seed.seed;
      config["samples"] = samples;
      config["workers"] = workers;
      config["i"] = seq_i;
      config["p"] = vol_p;
      config["bracket"] = ballmax::Json::array({bracket_lo, bracket_hi});
      config["threshold"] = threshold;
      const ballmax::EstimateReport est = ballmax::volume_bisect(
          inst, seq_i, vol_p, {bracket_lo, bracket_hi}, samples, threshold, seed, workers);
      ballmax::Json rep = base_report(config);
      rep["results"]["estimate"] = ballmax::estimate_to_json(est);
      rep["timings"]["seconds"] = timer.seconds();
      write_report(out_dir, "report.json", rep);
      ballmax::write_text(out_dir + "/stats_trace.csv", ballmax::stats_trace_csv(est));
    } else if (*cmd_ssp) {
      std::ifstream in(ssp_path);
      if (!in) throw ballmax::ParseError("cannot open SSP file: " + ssp_path);
      ballmax::Json j;
      try {
        in >> j;
      } catch (const std::exception& e) {
        throw ballmax::ParseError(std::string("malformed JSON: ") + e.what());
      }
      ballmax::SspInstance ssp;
      if (!j.contains("s") || !j["s"].is_array() || !j.contains("t"))
        throw ballmax::ParseError("ssp: expected fields 's' (array) and 't'");
      for (const auto& v : j["s"]) ssp.s.push_back(v.get<double>());
      ssp.t = j["t"].get<double>();
      if (j.contains("beta")) ssp.beta = j["beta"].get<double>();
      const ballmax::SspEncoding enc =
          ballmax::encode(ssp, offset_param > 0.0 ? offset_param : 0.0);
      ballmax::Instance inst;
      inst.q = enc.balls;
      inst.c0 = enc.c0;
      inst.lambda = lambda_override > 0.0 ? lambda_override : 0.5;
      config["ssp"] = ssp_path;
      config["beta"] = enc.beta;
      config["offset_param"] = enc.offset_param;
      std::filesystem::create_directories(out_dir);
      ballmax::write_text(out_dir + "/instance.json",
                          ballmax::instance_to_json(inst).dump(2) + "\n");
      ballmax::Json rep = base_report(config);
      rep["results"]["c0"] = ballmax::io_detail::point_to_json(enc.c0);
      rep["results"]["solvable_distance_sq"] = enc.solvable_distance_sq(ssp.t);
      rep["results"]["decision_gap"] = enc.beta / 2.0;
      rep["results"]["dropped_facets"] = ballmax::Json::array();
      for (const auto& d : enc.dropped) {
        ballmax::Json jd;
        jd["facet"] = d.name;
        jd["delta"] = d.delta;
        rep["results"]["dropped_facets"].push_back(std::move(jd));
        std::cerr << "warning: dropped redundant facet '" << d.name << "'\n";
      }
      rep["timings"]["seconds"] = timer.seconds();
      write_report(out_dir, "report.json", rep);
    } else if (*cmd_oracle) {
      const ballmax::Instance inst = load();
      const ballmax::OracleResult res = ballmax::farthest_2d(inst);
      ballmax::Json rep = base_report(config);
      rep["results"]["oracle"] = ballmax::oracle_to_json(res);
      rep["timings"]["seconds"] = timer.seconds();
      write_report(out_dir, "report.json", rep);
    } else if (*cmd_figures) {
      const ballmax::Instance inst = load();
      double r0 = r0_flag;
      if (r0 < 0.0) r0 = ballmax::farthest_2d(inst).r0;
      config["r0"] = r0;
      config["indices"] = indices;
      std::filesystem::create_directories(out_dir);
      const auto files = ballmax::emit_figures(inst, r0, indices, out_dir);
      ballmax::Json rep = base_report(config);
      rep["results"]["files"] = files;
      rep["timings"]["seconds"] = timer.seconds();
      write_report(out_dir, "report.json", rep);
    }
  } catch (const ballmax::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ballmax::InvalidInstance& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ballmax::DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ballmax::DimensionUnsupported& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    // Solver/estimator failures: NoInitialHit, NoFeasibleStart, ...
    std::cerr << "failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
