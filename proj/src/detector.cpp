#include "cndisc/detector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cndisc/error.hpp"
#include "cndisc/error_measures.hpp"
#include "cndisc/parallel.hpp"
#include "cndisc/taylor.hpp"

namespace cndisc {

int DetectorConfig::resolved_min_separation() const noexcept {
    return min_separation > 0 ? min_separation : std::max(approx.support_left, approx.support_right);
}

void DetectorConfig::validate() const {
    approx.validate();
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw InvalidArgument("confidence must lie in (0, 1)");
    }
    if (min_separation < 0) {
        throw InvalidArgument("min_separation must be >= 0");
    }
    if (sigma && !(*sigma >= 0.0 && std::isfinite(*sigma))) {
        throw InvalidArgument("sigma must be a finite value >= 0");
    }
}

GapRange admissible_gaps(std::size_t series_size, const ApproxConfig& cfg) {
    cfg.validate();
    const auto left = static_cast<std::size_t>(cfg.support_left);
    const auto right = static_cast<std::size_t>(cfg.support_right);
    if (series_size < left + right) {
        throw SeriesTooShort("series of " + std::to_string(series_size) + " samples is shorter than one window (" +
                             std::to_string(left + right) + ")");
    }
    return {left - 1, series_size - right - 1};
}

namespace {

struct WindowResult {
    double zeta = 0.0;
    std::size_t gap = 0;
    double delta_t = 0.0;
    double unit_variance = 0.0;  // variance of delta_t for sigma = 1
    ErrorTriple errors;
};

std::vector<WindowResult> evaluate_windows(const SampleSeries& series, const ApproxConfig& cfg,
                                           unsigned threads) {
    const GapRange gaps = admissible_gaps(series.size(), cfg);
    const Eigen::VectorXd selector = selector_vector(cfg.order, cfg.degree_left, cfg.degree_right);
    std::vector<WindowResult> out(gaps.count());
    parallel_for(out.size(), threads, [&](std::size_t i) {
        const SampleWindow window = center_window(series, gaps.first + i, cfg);
        const CoupledFit fit = solve_coupled(window, cfg);
        WindowResult& r = out[i];
        r.zeta = window.zeta;
        r.gap = window.gap;
        r.delta_t = delta_taylor(fit, selector);
        r.unit_variance = propagate_isotropic(fit.K, 1.0, selector).delta_variance;
        r.errors = error_triple(fit, window, cfg.order);
    });
    return out;
}

double median(std::vector<double> values) {
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double sigma_from_windows(const std::vector<WindowResult>& windows, const ApproxConfig& cfg) {
    const int dof = cfg.num_coefficients() - cfg.order;
    const double residual_dof = static_cast<double>(cfg.window_size() - dof);
    std::vector<double> per_window;
    per_window.reserve(windows.size());
    for (const auto& w : windows) {
        per_window.push_back(std::sqrt(w.errors.e_approx / residual_dof));
    }
    return median(std::move(per_window));
}

// Round-off floor for an estimated sigma: on noise-free data the residuals are
// ~1e-16 and round-off in delta_t would otherwise read as significant.
double floored_sigma(double estimate, const SampleSeries& series) {
    double scale = 0.0;
    for (double v : series.y()) {
        scale = std::max(scale, std::abs(v));
    }
    return std::max(estimate, kSigmaFloor * scale);
}

std::vector<PointDiagnostics> to_profile(const std::vector<WindowResult>& windows, double sigma) {
    std::vector<PointDiagnostics> profile;
    profile.reserve(windows.size());
    for (const auto& w : windows) {
        PointDiagnostics p;
        p.zeta = w.zeta;
        p.gap = w.gap;
        p.delta_t = w.delta_t;
        p.variance = sigma * sigma * w.unit_variance;
        p.e_approx = w.errors.e_approx;
        p.e_combined = w.errors.e_combined;
        p.e_extrap = w.errors.e_extrap;
        p.z_score = z_score(p.delta_t, p.variance);
        profile.push_back(p);
    }
    return profile;
}

}  // namespace

double estimate_noise_sigma(const SampleSeries& series, const ApproxConfig& cfg, unsigned threads) {
    return sigma_from_windows(evaluate_windows(series, cfg, threads), cfg);
}

double resolve_sigma(const SampleSeries& series, const ApproxConfig& cfg, std::optional<double> sigma,
                     unsigned threads) {
    if (sigma) {
        if (!(*sigma >= 0.0)) {
            throw InvalidArgument("sigma must be >= 0");
        }
        return *sigma;
    }
    return floored_sigma(estimate_noise_sigma(series, cfg, threads), series);
}

std::vector<PointDiagnostics> scan(const SampleSeries& series, const ApproxConfig& cfg,
                                   std::optional<double> sigma, unsigned threads) {
    if (sigma && !(*sigma >= 0.0)) {
        throw InvalidArgument("sigma must be >= 0");
    }
    const auto windows = evaluate_windows(series, cfg, threads);
    const double s = sigma ? *sigma : floored_sigma(sigma_from_windows(windows, cfg), series);
    return to_profile(windows, s);
}

std::vector<std::size_t> strict_local_maxima(std::span<const double> values, std::size_t radius) {
    std::vector<std::size_t> peaks;
    const std::size_t n = values.size();
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t lo = j >= radius ? j - radius : 0;
        const std::size_t hi = std::min(n - 1, j + radius);
        bool is_peak = true;
        for (std::size_t k = lo; k <= hi && is_peak; ++k) {
            if (k != j && !(values[j] > values[k])) {
                is_peak = false;
            }
        }
        // A lone sample has nothing to be a peak relative to.
        if (is_peak && hi > lo) {
            peaks.push_back(j);
        }
    }
    return peaks;
}

DetectionReport find_knots(const std::vector<PointDiagnostics>& profile, double confidence,
                           int min_separation) {
    if (profile.empty()) {
        throw InvalidArgument("find_knots: empty profile");
    }
    if (min_separation < 1) {
        throw InvalidArgument("find_knots: min_separation must be >= 1");
    }
    const auto radius = static_cast<std::size_t>(min_separation);

    std::vector<double> delta_sq(profile.size());
    std::vector<double> extrap(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i) {
        delta_sq[i] = profile[i].delta_t * profile[i].delta_t;
        extrap[i] = profile[i].e_extrap;
    }
    const auto extrap_peaks = strict_local_maxima(extrap, 1);
    std::vector<bool> is_extrap_peak(profile.size(), false);
    for (auto j : extrap_peaks) {
        is_extrap_peak[j] = true;
    }

    std::vector<Knot> candidates;
    for (auto j : strict_local_maxima(delta_sq, radius)) {
        const PointDiagnostics& p = profile[j];
        const Significance sig = significance({.delta_t = p.delta_t, .variance = p.variance}, confidence);
        if (!sig.significant) {
            continue;
        }
        const bool gated = is_extrap_peak[j] || (j > 0 && is_extrap_peak[j - 1]) ||
                           (j + 1 < profile.size() && is_extrap_peak[j + 1]);
        if (!gated) {
            continue;
        }
        candidates.push_back({p.zeta, p.delta_t, sig.z, p.delta_t > 0.0 ? 1 : -1, j});
    }

    // Thin out knots closer than min_separation, strongest |z| first.
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Knot& a, const Knot& b) { return std::abs(a.z) > std::abs(b.z); });
    DetectionReport report;
    report.profile = profile;
    for (const Knot& k : candidates) {
        const bool crowded = std::any_of(report.knots.begin(), report.knots.end(), [&](const Knot& kept) {
            const std::size_t dist = kept.profile_index > k.profile_index ? kept.profile_index - k.profile_index
                                                                         : k.profile_index - kept.profile_index;
            return dist < radius;
        });
        if (!crowded) {
            report.knots.push_back(k);
        }
    }
    std::sort(report.knots.begin(), report.knots.end(),
              [](const Knot& a, const Knot& b) { return a.zeta < b.zeta; });
    return report;
}

DetectionReport detect(const SampleSeries& series, const DetectorConfig& cfg) {
    cfg.validate();
    const auto windows = evaluate_windows(series, cfg.approx, cfg.threads);
    const double sigma =
        cfg.sigma ? *cfg.sigma : floored_sigma(sigma_from_windows(windows, cfg.approx), series);
    DetectionReport report = find_knots(to_profile(windows, sigma), cfg.confidence, cfg.resolved_min_separation());
    report.config = cfg;
    report.sigma = sigma;
    return report;
}

}  // namespace cndisc
