#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gof/calibration.hpp"

namespace gof::io {

// Config schema (see README): family, sample_size, trials, seed, partition
// (breakpoints or equiprobable), prior (fixed or uniform box), plus optional
// tuning fields. A manifest (object with a "config" member) is accepted
// anywhere a config is.
CalibrationConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const CalibrationConfig& cfg);
CalibrationConfig load_config_file(const std::filesystem::path& path);

nlohmann::json result_to_json(const CalibrationResult& result);
std::string quantiles_csv(const CalibrationResult& result);

nlohmann::json make_manifest(const CalibrationConfig& cfg,
                             const std::vector<std::string>& output_names);

// Raw sample file: 8-byte magic "GOFSMPL1", little-endian u64 count, then
// count little-endian IEEE doubles.
void write_samples_bin(const std::filesystem::path& path,
                       std::span<const double> values);
std::vector<double> read_samples_bin(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

// Shortest representation that parses back to the same double.
std::string format_double(double v);

}  // namespace gof::io
