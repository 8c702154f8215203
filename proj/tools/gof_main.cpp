#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gof/calibration.hpp"
#include "gof/density.hpp"
#include "gof/errors.hpp"
#include "gof/io.hpp"
#include "gof/presets.hpp"
#include "gof/simd/kernels.hpp"
#include "gof/version.hpp"

namespace fs = std::filesystem;
using gof::io::format_double;

namespace {

unsigned resolve_threads(const std::optional<unsigned>& flag,
                         unsigned config_value) {
  if (flag) {
    return *flag;
  }
  if (const char* env = std::getenv("GOF_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0') {
      return static_cast<unsigned>(v);
    }
    std::fprintf(stderr, "gof: ignoring non-numeric GOF_THREADS value '%s'\n",
                 env);
  }
  return config_value;
}

void print_result_summary(const gof::CalibrationResult& r, double seconds) {
  std::printf("trials completed: %llu  rejected: %llu  (%.2f s)\n",
              static_cast<unsigned long long>(r.trials_completed),
              static_cast<unsigned long long>(r.trials_rejected), seconds);
  std::printf("mean_x2 = %s  var_x2 = %s\n", format_double(r.mean_x2).c_str(),
              format_double(r.var_x2).c_str());
  std::printf("fitted gamma: alpha = %s  lambda = %s\n",
              format_double(r.gamma.alpha).c_str(),
              format_double(r.gamma.lambda).c_str());
  const std::string chisq_col = "chisq(dof=" + std::to_string(r.chisq_dof) + ")";
  std::printf("%-8s %-14s %-14s %-14s\n", "prob", "sample", "fitted-gamma",
              chisq_col.c_str());
  for (size_t i = 0; i < r.quantile_probs.size(); ++i) {
    std::printf("%-8.4g %-14.8g %-14.8g %-14.8g\n", r.quantile_probs[i],
                r.sample_quantiles[i], r.gamma_quantiles[i],
                r.chisq_quantiles[i]);
  }
}

std::vector<std::string> write_outputs(const gof::CalibrationConfig& cfg,
                                       const gof::CalibrationResult& res,
                                       const fs::path& out_dir) {
  fs::create_directories(out_dir);
  std::vector<std::string> outputs = {"result.json", "quantiles.csv"};
  gof::io::write_text_file(out_dir / "result.json",
                           gof::io::result_to_json(res).dump(2) + "\n");
  gof::io::write_text_file(out_dir / "quantiles.csv",
                           gof::io::quantiles_csv(res));
  if (cfg.retain_samples) {
    gof::io::write_samples_bin(out_dir / "samples.bin", res.samples);
    outputs.push_back("samples.bin");
  }
  outputs.push_back("manifest.json");
  gof::io::write_text_file(out_dir / "manifest.json",
                           gof::io::make_manifest(cfg, outputs).dump(2) + "\n");
  return outputs;
}

int cmd_calibrate(const std::string& config_path,
                  const std::optional<uint64_t>& seed,
                  const std::optional<uint64_t>& trials,
                  const std::optional<unsigned>& threads,
                  const std::optional<bool>& retain, const fs::path& out_dir) {
  gof::CalibrationConfig cfg = gof::io::load_config_file(config_path);
  if (seed) {
    cfg.seed = *seed;
  }
  if (trials) {
    cfg.trials = *trials;
  }
  if (retain) {
    cfg.retain_samples = *retain;
  }
  cfg.threads = resolve_threads(threads, cfg.threads);

  const auto t0 = std::chrono::steady_clock::now();
  const gof::CalibrationResult res = gof::run_calibration(cfg);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_outputs(cfg, res, out_dir);
  print_result_summary(res, seconds);
  std::printf("outputs written to %s\n", out_dir.string().c_str());
  return 0;
}

void print_comparison_row(const char* name, double computed, double reference) {
  std::printf("%-24s %-16.8g %-16.8g %.3e\n", name, computed, reference,
              std::fabs(computed - reference));
}

int cmd_reproduce_case(const std::string& case_id,
                       const std::optional<uint64_t>& trials,
                       const std::optional<uint64_t>& seed,
                       const std::optional<unsigned>& threads,
                       const std::optional<fs::path>& out_dir) {
  const gof::CasePreset* preset = gof::find_case(case_id);
  if (preset == nullptr) {
    std::string known;
    for (const auto& c : gof::builtin_cases()) {
      known += known.empty() ? c.id : ", " + c.id;
    }
    throw std::invalid_argument("unknown case '" + case_id + "' (known: " +
                                known + ")");
  }
  gof::CalibrationConfig cfg = preset->config;
  if (trials) {
    cfg.trials = *trials;
  }
  if (seed) {
    cfg.seed = *seed;
  }
  cfg.threads = resolve_threads(threads, cfg.threads);

  std::printf("case %s: %s\n", preset->id.c_str(), preset->description.c_str());
  std::printf("trials = %llu, seed = %llu\n",
              static_cast<unsigned long long>(cfg.trials),
              static_cast<unsigned long long>(cfg.seed));
  const auto t0 = std::chrono::steady_clock::now();
  const gof::CalibrationResult res = gof::run_calibration(cfg);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (out_dir) {
    write_outputs(cfg, res, *out_dir);
  }

  const gof::CaseReference& ref = preset->reference;
  std::printf("%-24s %-16s %-16s %s\n", "metric", "computed", "reference",
              "|diff|");
  print_comparison_row("mean_x2", res.mean_x2, ref.mean_x2);
  print_comparison_row("var_x2", res.var_x2, ref.var_x2);
  if (ref.alpha) {
    print_comparison_row("alpha", res.gamma.alpha, *ref.alpha);
  }
  if (ref.lambda) {
    print_comparison_row("lambda", res.gamma.lambda, *ref.lambda);
  }
  static const char* kQuantNames[4] = {"statistic q(0.75)", "statistic q(0.90)",
                                       "statistic q(0.95)",
                                       "statistic q(0.99)"};
  for (size_t i = 0; i < 4 && i < res.sample_quantiles.size(); ++i) {
    print_comparison_row(kQuantNames[i], res.sample_quantiles[i],
                         ref.statistic_quantiles[i]);
  }
  if (ref.gamma_quantiles) {
    static const char* kGammaNames[4] = {"gamma q(0.75)", "gamma q(0.90)",
                                         "gamma q(0.95)", "gamma q(0.99)"};
    for (size_t i = 0; i < 4 && i < res.gamma_quantiles.size(); ++i) {
      print_comparison_row(kGammaNames[i], res.gamma_quantiles[i],
                           (*ref.gamma_quantiles)[i]);
    }
  }
  std::printf("elapsed: %.2f s\n", seconds);
  return 0;
}

int cmd_quantiles(double alpha, double lambda, int dof,
                  const std::vector<double>& probs) {
  const gof::GammaParams g(alpha, lambda);
  std::printf(dof > 0 ? "prob,gamma_quantile,chisq_quantile\n"
                      : "prob,gamma_quantile\n");
  for (double p : probs) {
    const double q = gof::gamma_quantile(g, p);
    if (dof > 0) {
      std::printf("%s,%s,%s\n", format_double(p).c_str(),
                  format_double(q).c_str(),
                  format_double(gof::chi_square_quantile(dof, p)).c_str());
    } else {
      std::printf("%s,%s\n", format_double(p).c_str(),
                  format_double(q).c_str());
    }
  }
  return 0;
}

int cmd_density(const std::string& samples_path, size_t grid_size,
                const std::string& out_csv, const std::optional<double>& alpha,
                const std::optional<double>& lambda) {
  const std::vector<double> values = gof::io::read_samples_bin(samples_path);
  if (values.size() < 2) {
    throw std::invalid_argument("samples file holds fewer than two values");
  }
  const gof::DensityEstimate est = gof::density_export(values, grid_size);
  gof::GammaParams g = [&] {
    if (alpha && lambda) {
      return gof::GammaParams(*alpha, *lambda);
    }
    gof::MomentAccumulator acc;
    for (double v : values) {
      acc.add(v);
    }
    return gof::fit_gamma(acc.mean, acc.variance());
  }();
  std::string csv = "grid_x,empirical_density,fitted_gamma_density\n";
  for (size_t i = 0; i < est.grid.size(); ++i) {
    csv += format_double(est.grid[i]);
    csv += ',';
    csv += format_double(est.density[i]);
    csv += ',';
    csv += format_double(gof::gamma_pdf(g, est.grid[i]));
    csv += '\n';
  }
  gof::io::write_text_file(out_csv, csv);
  std::printf("wrote %zu density rows to %s (bandwidth %.6g, gamma alpha=%.8g "
              "lambda=%.8g)\n",
              est.grid.size(), out_csv.c_str(), est.bandwidth, g.alpha,
              g.lambda);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Finite-sample critical values for the Pearson statistic via "
      "moment-matched gamma calibration"};
  app.set_version_flag("--version", gof::kVersion);
  app.require_subcommand(1);
  std::string kernels = "auto";
  app.add_option("--kernels", kernels,
                 "kernel variant: auto, scalar, or avx2")
      ->capture_default_str();

  auto* cal = app.add_subcommand("calibrate",
                                 "run a calibration described by a JSON config");
  std::string config_path;
  std::optional<uint64_t> seed_opt;
  std::optional<uint64_t> trials_opt;
  std::optional<unsigned> threads_opt;
  std::string out_dir = ".";
  cal->add_option("--config", config_path, "config or manifest JSON file")
      ->required();
  cal->add_option("--seed", seed_opt, "override the config seed");
  cal->add_option("--trials", trials_opt, "override the trial count");
  cal->add_option("--threads", threads_opt,
                  "worker threads (GOF_THREADS as fallback, 0 = auto)");
  cal->add_option("--out", out_dir, "output directory")->capture_default_str();
  auto* retain_flag = cal->add_flag("--retain", "keep every statistic");
  auto* no_retain_flag =
      cal->add_flag("--no-retain", "keep only a quantile subsample");
  no_retain_flag->excludes(retain_flag);

  auto* rep = app.add_subcommand(
      "reproduce-case", "run a built-in case (A1, A2, B, C, D, E, F) and "
                        "compare against its reference values");
  std::string case_id;
  std::optional<uint64_t> rep_trials;
  std::optional<uint64_t> rep_seed;
  std::optional<unsigned> rep_threads;
  std::optional<fs::path> rep_out;
  rep->add_option("case", case_id, "case id")->required();
  rep->add_option("--trials", rep_trials, "override the preset trial count");
  rep->add_option("--seed", rep_seed, "override the preset seed");
  rep->add_option("--threads", rep_threads, "worker threads");
  rep->add_option("--out", rep_out, "also write result files here");

  auto* qu = app.add_subcommand("quantiles",
                                "print quantiles of a fitted gamma law");
  double alpha = 0.0;
  double lambda = 0.0;
  int dof = 0;
  std::vector<double> probs;
  qu->add_option("--alpha", alpha, "gamma shape")->required();
  qu->add_option("--lambda", lambda, "gamma rate")->required();
  qu->add_option("--dof", dof, "also print chi-square quantiles at this dof");
  qu->add_option("probs", probs, "probabilities (default 0.75 0.9 0.95 0.99)");

  auto* den = app.add_subcommand("density",
                                 "kernel density export from a samples file");
  std::string samples_path;
  std::string out_csv;
  size_t grid_size = 512;
  std::optional<double> den_alpha;
  std::optional<double> den_lambda;
  den->add_option("--samples", samples_path, "samples.bin file")->required();
  den->add_option("--grid-size", grid_size, "grid points")
      ->capture_default_str();
  den->add_option("--out", out_csv, "output CSV path")->required();
  den->add_option("--alpha", den_alpha, "gamma shape for the reference column");
  den->add_option("--lambda", den_lambda, "gamma rate for the reference column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    gof::simd::select_kernels(kernels);
    if (cal->parsed()) {
      std::optional<bool> retain;
      if (retain_flag->count() > 0) {
        retain = true;
      }
      if (no_retain_flag->count() > 0) {
        retain = false;
      }
      return cmd_calibrate(config_path, seed_opt, trials_opt, threads_opt,
                           retain, out_dir);
    }
    if (rep->parsed()) {
      return cmd_reproduce_case(case_id, rep_trials, rep_seed, rep_threads,
                                rep_out);
    }
    if (qu->parsed()) {
      if (probs.empty()) {
        probs = {0.75, 0.9, 0.95, 0.99};
      }
      return cmd_quantiles(alpha, lambda, dof, probs);
    }
    if (den->parsed()) {
      return cmd_density(samples_path, grid_size, out_csv, den_alpha,
                         den_lambda);
    }
    std::fprintf(stderr, "no subcommand given\n");
    return 2;
  } catch (const gof::CalibrationIntegrityError& e) {
    std::fprintf(stderr, "gof: calibration integrity failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "gof: error: %s\n", e.what());
    return 2;
  }
}
