#include "gof/io.hpp"

#include <bit>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include "gof/simd/kernels.hpp"
#include "gof/version.hpp"

namespace gof::io {

namespace {

using nlohmann::json;

constexpr char kSamplesMagic[8] = {'G', 'O', 'F', 'S', 'M', 'P', 'L', '1'};

uint64_t get_u64(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw std::invalid_argument(std::string(key) + " must be an integer");
  }
  if (v.is_number_integer() && v.get<int64_t>() < 0) {
    throw std::invalid_argument(std::string(key) + " must be nonnegative");
  }
  return v.get<uint64_t>();
}

std::vector<double> get_doubles(const json& j) {
  if (!j.is_array()) {
    throw std::invalid_argument("expected an array of numbers");
  }
  return j.get<std::vector<double>>();
}

ParamVector param_vector(const json& j) {
  const auto v = get_doubles(j);
  return ParamVector(std::span<const double>(v));
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) {
      break;
    }
  }
  return buf;
}

CalibrationConfig config_from_json(const nlohmann::json& j) {
  const json& c = j.contains("config") ? j.at("config") : j;
  CalibrationConfig cfg;

  const std::string family = c.at("family").get<std::string>();
  if (family == "exponential") {
    cfg.trial.family = Family::Exponential;
  } else if (family == "normal") {
    cfg.trial.family = Family::Normal;
  } else {
    throw std::invalid_argument("unknown family '" + family +
                                "' (expected exponential or normal)");
  }
  cfg.trial.estimator.family = cfg.trial.family;

  cfg.trial.sample_size = get_u64(c, "sample_size");
  cfg.trials = get_u64(c, "trials");
  cfg.seed = get_u64(c, "seed");

  const json& prior = c.at("prior");
  if (prior.contains("fixed")) {
    cfg.prior = PriorSpec::fixed_at(param_vector(prior.at("fixed")));
  } else if (prior.contains("uniform")) {
    const json& u = prior.at("uniform");
    cfg.prior = PriorSpec::uniform_box(param_vector(u.at("lower")),
                                       param_vector(u.at("upper")));
  } else {
    throw std::invalid_argument("prior must contain 'fixed' or 'uniform'");
  }

  const json& part = c.at("partition");
  if (part.contains("breakpoints")) {
    cfg.trial.partition = Partition(get_doubles(part.at("breakpoints")));
  } else if (part.contains("equiprobable")) {
    const json& eq = part.at("equiprobable");
    uint64_t cells = 0;
    ParamVector at;
    bool have_at = false;
    if (eq.is_object()) {
      cells = get_u64(eq, "cells");
      if (eq.contains("at")) {
        at = param_vector(eq.at("at"));
        have_at = true;
      }
    } else {
      cells = eq.get<uint64_t>();
    }
    if (!have_at) {
      if (cfg.prior.kind != PriorSpec::Kind::Fixed) {
        throw std::invalid_argument(
            "equiprobable partition needs 'at' parameters unless the prior "
            "is fixed");
      }
      at = cfg.prior.fixed;
    }
    cfg.trial.partition =
        equiprobable_partition(cfg.trial.family, at, cells);
  } else {
    throw std::invalid_argument(
        "partition must contain 'breakpoints' or 'equiprobable'");
  }

  if (c.contains("quantile_probs")) {
    cfg.quantile_probs = get_doubles(c.at("quantile_probs"));
  }
  if (c.contains("retain_samples")) {
    cfg.retain_samples = c.at("retain_samples").get<bool>();
  }
  if (c.contains("rejection_threshold")) {
    cfg.rejection_threshold = c.at("rejection_threshold").get<double>();
  }
  if (c.contains("expected_count_floor")) {
    cfg.trial.expected_count_floor = c.at("expected_count_floor").get<double>();
  }
  if (c.contains("quantile_reservoir")) {
    cfg.quantile_reservoir = get_u64(c, "quantile_reservoir");
  }
  if (c.contains("threads")) {
    cfg.threads = static_cast<unsigned>(get_u64(c, "threads"));
  }
  if (c.contains("normal_variance_divisor")) {
    const std::string div = c.at("normal_variance_divisor").get<std::string>();
    if (div == "unbiased") {
      cfg.trial.estimator.normal_variance = VarianceDivisor::Unbiased;
    } else if (div == "mle") {
      cfg.trial.estimator.normal_variance = VarianceDivisor::Mle;
    } else {
      throw std::invalid_argument(
          "normal_variance_divisor must be 'unbiased' or 'mle'");
    }
  }
  cfg.validate();
  return cfg;
}

nlohmann::json config_to_json(const CalibrationConfig& cfg) {
  json c;
  c["family"] = family_name(cfg.trial.family);
  c["sample_size"] = cfg.trial.sample_size;
  c["trials"] = cfg.trials;
  c["seed"] = cfg.seed;
  const auto breaks = cfg.trial.partition.breakpoints();
  c["partition"] = {
      {"breakpoints", std::vector<double>(breaks.begin(), breaks.end())}};
  if (cfg.prior.kind == PriorSpec::Kind::Fixed) {
    const auto v = cfg.prior.fixed.values();
    c["prior"] = {{"fixed", std::vector<double>(v.begin(), v.end())}};
  } else {
    const auto lo = cfg.prior.lower.values();
    const auto hi = cfg.prior.upper.values();
    c["prior"] = {
        {"uniform",
         {{"lower", std::vector<double>(lo.begin(), lo.end())},
          {"upper", std::vector<double>(hi.begin(), hi.end())}}}};
  }
  c["quantile_probs"] = cfg.quantile_probs;
  c["retain_samples"] = cfg.retain_samples;
  c["rejection_threshold"] = cfg.rejection_threshold;
  c["expected_count_floor"] = cfg.trial.expected_count_floor;
  c["quantile_reservoir"] = cfg.quantile_reservoir;
  c["threads"] = cfg.threads;
  c["normal_variance_divisor"] =
      cfg.trial.estimator.normal_variance == VarianceDivisor::Unbiased
          ? "unbiased"
          : "mle";
  return c;
}

CalibrationConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot read config file: " + path.string());
  }
  json j;
  in >> j;
  return config_from_json(j);
}

nlohmann::json result_to_json(const CalibrationResult& result) {
  json r;
  r["mean_x2"] = result.mean_x2;
  r["var_x2"] = result.var_x2;
  r["gamma"] = {{"alpha", result.gamma.alpha}, {"lambda", result.gamma.lambda}};
  r["chisq_dof"] = result.chisq_dof;
  r["quantile_probs"] = result.quantile_probs;
  r["sample_quantiles"] = result.sample_quantiles;
  r["gamma_quantiles"] = result.gamma_quantiles;
  r["chisq_quantiles"] = result.chisq_quantiles;
  r["trials_completed"] = result.trials_completed;
  r["trials_rejected"] = result.trials_rejected;
  r["retained_count"] = result.samples.size();
  r["samples_are_subsample"] = result.samples_are_subsample;
  return r;
}

std::string quantiles_csv(const CalibrationResult& result) {
  std::string csv =
      "prob,sample_quantile,fitted_gamma_quantile,chisq_reference_quantile\n";
  for (size_t i = 0; i < result.quantile_probs.size(); ++i) {
    csv += format_double(result.quantile_probs[i]);
    csv += ',';
    csv += format_double(result.sample_quantiles[i]);
    csv += ',';
    csv += format_double(result.gamma_quantiles[i]);
    csv += ',';
    csv += format_double(result.chisq_quantiles[i]);
    csv += '\n';
  }
  return csv;
}

nlohmann::json make_manifest(const CalibrationConfig& cfg,
                             const std::vector<std::string>& output_names) {
  json m;
  m["tool"] = "gof";
  m["version"] = kVersion;
  m["created_utc"] = utc_timestamp();
  m["kernels"] = simd::active_kernels().name;
  m["outputs"] = output_names;
  m["config"] = config_to_json(cfg);
  return m;
}

void write_samples_bin(const std::filesystem::path& path,
                       std::span<const double> values) {
  static_assert(std::endian::native == std::endian::little,
                "sample file writer assumes a little-endian host");
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write samples file: " + path.string());
  }
  out.write(kSamplesMagic, sizeof(kSamplesMagic));
  const uint64_t count = values.size();
  out.write(reinterpret_cast<const char*>(&count), sizeof(count));
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!out) {
    throw std::runtime_error("short write to samples file: " + path.string());
  }
}

std::vector<double> read_samples_bin(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument("cannot read samples file: " + path.string());
  }
  char magic[8];
  uint64_t count = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&count), sizeof(count));
  if (!in || std::memcmp(magic, kSamplesMagic, sizeof(magic)) != 0) {
    throw std::invalid_argument("not a gof samples file: " + path.string());
  }
  std::vector<double> values(count);
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) {
    throw std::invalid_argument("truncated samples file: " + path.string());
  }
  return values;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write file: " + path.string());
  }
  out << content;
  if (!out) {
    throw std::runtime_error("short write to file: " + path.string());
  }
}

}  // namespace gof::io
