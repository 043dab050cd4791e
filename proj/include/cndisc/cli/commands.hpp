#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cndisc/detector.hpp"
#include "cndisc/synthetic.hpp"

namespace cndisc::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitIo = 2,      ///< unreadable/unwritable file or unparseable content
    kExitConfig = 3,  ///< invalid configuration or arguments
};

/// Detector flags as typed on the command line; unset fields take the
/// defaults derived from the order.
struct DetectorFlags {
    int order = 1;
    std::optional<int> degree_left;
    std::optional<int> degree_right;
    std::optional<int> support_left;
    std::optional<int> support_right;
    std::optional<double> sigma;
    double confidence = 0.95;
    int min_separation = 0;
    bool normalize_x = false;
    unsigned threads = 1;

    DetectorConfig resolve() const;
    static DetectorFlags from_config(const DetectorConfig& cfg);
};

struct DetectOptions {
    std::filesystem::path input;
    std::string x_col = "0";
    std::string y_col = "1";
    DetectorFlags flags;
    std::filesystem::path out = "report.json";
    std::optional<std::filesystem::path> profile;
    std::optional<std::filesystem::path> plot;
};

struct SynthOptions {
    double sigma = 0.05;
    std::size_t num_points = 100;
    std::uint64_t seed = 1;
    std::filesystem::path out = "synthetic.csv";
};

struct MonteCarloOptions {
    long long m = 1000;
    double sigma = 0.05;
    std::size_t num_points = 100;
    std::uint64_t seed = 1;
    DetectorFlags flags = DetectorFlags::from_config(monte_carlo_config());
    unsigned threads = 0;
    std::filesystem::path out = "montecarlo.json";
};

struct PlotOptions {
    std::filesystem::path report;
    std::filesystem::path input;
    std::string x_col = "0";
    std::string y_col = "1";
    std::filesystem::path out = "report.svg";
};

struct FitOptions {
    std::filesystem::path input;
    std::string x_col = "0";
    std::string y_col = "1";
    std::optional<std::filesystem::path> report;
    std::vector<double> knots;
    int degree = 2;
    std::filesystem::path out = "spline.json";
    std::optional<std::filesystem::path> curve;
};

// Each command throws on failure; run_cli maps exceptions to exit codes.
void cmd_detect(const DetectOptions& opts, std::ostream& log);
void cmd_synth(const SynthOptions& opts, std::ostream& log);
void cmd_montecarlo(const MonteCarloOptions& opts, std::ostream& log);
void cmd_plot(const PlotOptions& opts, std::ostream& log);
void cmd_fit(const FitOptions& opts, std::ostream& log);

/// Parses argv and dispatches to a subcommand. Diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cndisc::cli
