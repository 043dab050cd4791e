#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "cndisc/detector.hpp"
#include "cndisc/synthetic.hpp"

namespace cndisc::cli {

inline constexpr int kSchemaVersion = 1;

nlohmann::json config_to_json(const DetectorConfig& cfg);
DetectorConfig config_from_json(const nlohmann::json& j);

/// {schema_version, config, sigma_hat, knots: [{zeta, delta_t, z, sign}], profile_path}.
/// `input` is echoed under config when non-empty.
nlohmann::json report_to_json(const DetectionReport& report, const std::string& profile_path,
                              const nlohmann::json& input = {});

/// Report as stored on disk; the profile lives in a separate CSV.
struct StoredReport {
    DetectorConfig config;
    double sigma_hat = 0.0;
    std::vector<Knot> knots;
    std::string profile_path;  ///< as written in the file
};

StoredReport report_from_json(const nlohmann::json& j);
StoredReport read_report(const std::filesystem::path& path);

nlohmann::json summary_to_json(const MonteCarloSummary& s);
MonteCarloSummary summary_from_json(const nlohmann::json& j);

}  // namespace cndisc::cli
