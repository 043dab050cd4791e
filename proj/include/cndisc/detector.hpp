#pragma once

// Scans a series over every admissible interstitial point and picks out
// discontinuity locations from the resulting diagnostic profiles.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cndisc/coupled_fit.hpp"
#include "cndisc/series.hpp"

namespace cndisc {

struct DetectorConfig {
    ApproxConfig approx = ApproxConfig::defaults(1);
    double confidence = 0.95;
    /// Peak neighbourhood radius in profile indices; 0 selects max(l_L, l_R).
    int min_separation = 0;
    /// Known observation noise; estimated from the data when empty.
    std::optional<double> sigma;
    /// Worker threads for the scan (0 = hardware concurrency).
    unsigned threads = 1;

    int resolved_min_separation() const noexcept;
    void validate() const;
};

struct PointDiagnostics {
    double zeta = 0.0;
    std::size_t gap = 0;
    double delta_t = 0.0;
    double variance = 0.0;
    double e_approx = 0.0;
    double e_combined = 0.0;
    double e_extrap = 0.0;
    double z_score = 0.0;
};

struct Knot {
    double zeta = 0.0;
    double delta_t = 0.0;
    double z = 0.0;
    int sign = 0;                 ///< sign of delta_t
    std::size_t profile_index = 0;
};

struct DetectionReport {
    std::vector<PointDiagnostics> profile;
    std::vector<Knot> knots;  ///< sorted by zeta
    DetectorConfig config;
    double sigma = 0.0;       ///< noise level used for the variances
};

/// First and last gap index with full left and right support.
struct GapRange {
    std::size_t first = 0;
    std::size_t last = 0;
    std::size_t count() const noexcept { return last - first + 1; }
};

/// Throws SeriesTooShort when no gap has full support.
GapRange admissible_gaps(std::size_t series_size, const ApproxConfig& cfg);

/// Relative floor (times max|y|) applied to an estimated noise level.
inline constexpr double kSigmaFloor = 1e-8;

/// Median over windows of sqrt(E_a / residual degrees of freedom).
double estimate_noise_sigma(const SampleSeries& series, const ApproxConfig& cfg, unsigned threads = 1);

/// One PointDiagnostics per admissible gap, in increasing zeta order.
std::vector<PointDiagnostics> scan(const SampleSeries& series, const ApproxConfig& cfg,
                                   std::optional<double> sigma = std::nullopt, unsigned threads = 1);

/// Noise level scan uses: sigma if given, else the estimate floored at
/// kSigmaFloor * max|y|.
double resolve_sigma(const SampleSeries& series, const ApproxConfig& cfg, std::optional<double> sigma,
                     unsigned threads = 1);

/// Indices j where values[j] is strictly greater than every other entry in
/// [j - radius, j + radius] (clipped to the range).
std::vector<std::size_t> strict_local_maxima(std::span<const double> values, std::size_t radius);

/// Peak-gated knot selection: a Delta-t^2 peak is kept when it is
/// significant and the extrapolation error also peaks within one index.
/// Only profile and knots are filled in.
DetectionReport find_knots(const std::vector<PointDiagnostics>& profile, double confidence,
                           int min_separation);

/// scan + find_knots with the configuration and noise level echoed.
DetectionReport detect(const SampleSeries& series, const DetectorConfig& cfg);

}  // namespace cndisc
