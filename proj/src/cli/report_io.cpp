#include "cndisc/cli/report_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "cndisc/cli/csv_io.hpp"

namespace cndisc::cli {

namespace {

using nlohmann::json;

// JSON has no NaN/inf; they are stored as null.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_nan(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

void check_schema(const json& j) {
    if (!j.is_object() || !j.contains("schema_version") || j.at("schema_version") != kSchemaVersion) {
        throw ParseError("unsupported or missing schema_version (expected " + std::to_string(kSchemaVersion) + ")");
    }
}

}  // namespace

json config_to_json(const DetectorConfig& cfg) {
    return json{
        {"order", cfg.approx.order},
        {"degree_left", cfg.approx.degree_left},
        {"degree_right", cfg.approx.degree_right},
        {"support_left", cfg.approx.support_left},
        {"support_right", cfg.approx.support_right},
        {"normalize_x", cfg.approx.normalize_x},
        {"max_condition", cfg.approx.max_condition},
        {"confidence", cfg.confidence},
        {"min_separation", cfg.resolved_min_separation()},
        {"sigma", cfg.sigma ? json(*cfg.sigma) : json(nullptr)},
    };
}

DetectorConfig config_from_json(const json& j) {
    DetectorConfig cfg;
    cfg.approx.order = j.at("order").get<int>();
    cfg.approx.degree_left = j.at("degree_left").get<int>();
    cfg.approx.degree_right = j.at("degree_right").get<int>();
    cfg.approx.support_left = j.at("support_left").get<int>();
    cfg.approx.support_right = j.at("support_right").get<int>();
    cfg.approx.normalize_x = j.at("normalize_x").get<bool>();
    cfg.approx.max_condition = j.at("max_condition").get<double>();
    cfg.confidence = j.at("confidence").get<double>();
    cfg.min_separation = j.at("min_separation").get<int>();
    if (!j.at("sigma").is_null()) {
        cfg.sigma = j.at("sigma").get<double>();
    }
    return cfg;
}

json report_to_json(const DetectionReport& report, const std::string& profile_path, const json& input) {
    json cfg = config_to_json(report.config);
    if (!input.is_null()) {
        cfg["input"] = input;
    }
    json knots = json::array();
    for (const Knot& k : report.knots) {
        knots.push_back({{"zeta", k.zeta}, {"delta_t", k.delta_t}, {"z", number_or_null(k.z)}, {"sign", k.sign}});
    }
    return json{
        {"schema_version", kSchemaVersion},
        {"config", cfg},
        {"sigma_hat", report.sigma},
        {"knots", knots},
        {"profile_path", profile_path},
    };
}

StoredReport report_from_json(const json& j) {
    check_schema(j);
    try {
        StoredReport r;
        r.config = config_from_json(j.at("config"));
        r.sigma_hat = j.at("sigma_hat").get<double>();
        r.profile_path = j.at("profile_path").get<std::string>();
        for (const auto& k : j.at("knots")) {
            Knot knot;
            knot.zeta = k.at("zeta").get<double>();
            knot.delta_t = k.at("delta_t").get<double>();
            knot.z = k.at("z").is_null() ? std::copysign(std::numeric_limits<double>::infinity(), knot.delta_t)
                                         : k.at("z").get<double>();
            knot.sign = k.at("sign").get<int>();
            r.knots.push_back(knot);
        }
        return r;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed report: ") + e.what());
    }
}

StoredReport read_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return report_from_json(j);
}

json summary_to_json(const MonteCarloSummary& s) {
    json knots = json::array();
    for (const auto& k : s.knots) {
        knots.push_back({
            {"true_location", k.true_location},
            {"detections", k.detections},
            {"detection_rate", k.detection_rate},
            {"mean_error", number_or_null(k.mean_error)},
            {"half_width", number_or_null(k.half_width)},
            {"std_dev", number_or_null(k.std_dev)},
        });
    }
    return json{
        {"schema_version", kSchemaVersion},
        {"m", s.m},
        {"sigma", s.sigma},
        {"num_points", s.num_points},
        {"base_seed", s.base_seed},
        {"config", config_to_json(s.config)},
        {"all_detected_rate", s.all_detected_rate},
        {"mean_spurious", s.mean_spurious},
        {"knots", knots},
    };
}

MonteCarloSummary summary_from_json(const json& j) {
    check_schema(j);
    try {
        MonteCarloSummary s;
        s.m = j.at("m").get<std::size_t>();
        s.sigma = j.at("sigma").get<double>();
        s.num_points = j.at("num_points").get<std::size_t>();
        s.base_seed = j.at("base_seed").get<std::uint64_t>();
        s.config = config_from_json(j.at("config"));
        s.all_detected_rate = j.at("all_detected_rate").get<double>();
        s.mean_spurious = j.at("mean_spurious").get<double>();
        for (const auto& k : j.at("knots")) {
            KnotStatistics ks;
            ks.true_location = k.at("true_location").get<double>();
            ks.detections = k.at("detections").get<std::size_t>();
            ks.detection_rate = k.at("detection_rate").get<double>();
            ks.mean_error = number_or_nan(k.at("mean_error"));
            ks.half_width = number_or_nan(k.at("half_width"));
            ks.std_dev = number_or_nan(k.at("std_dev"));
            s.knots.push_back(ks);
        }
        return s;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed Monte Carlo summary: ") + e.what());
    }
}

}  // namespace cndisc::cli
