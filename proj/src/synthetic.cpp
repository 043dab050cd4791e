#include "cndisc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/SVD>

#include "cndisc/coupled_fit.hpp"
#include "cndisc/error.hpp"
#include "cndisc/parallel.hpp"
#include "cndisc/polynomial.hpp"
#include "cndisc/taylor.hpp"

namespace cndisc {

PiecewisePoly::PiecewisePoly(std::vector<double> knots, std::vector<Eigen::VectorXd> segments, int degree,
                             double fit_residual)
    : knots_(std::move(knots)), segments_(std::move(segments)), degree_(degree), fit_residual_(fit_residual) {
    if (knots_.size() < 2 || segments_.size() != knots_.size() - 1) {
        throw InvalidArgument("piecewise polynomial: need k >= 2 knots and k-1 segments");
    }
    if (degree_ < 1) {
        throw InvalidArgument("piecewise polynomial: degree must be >= 1");
    }
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        if (!(knots_[i] > knots_[i - 1])) {
            throw InvalidArgument("piecewise polynomial: knots must be strictly increasing");
        }
    }
    for (const auto& s : segments_) {
        if (s.size() != degree_ + 1) {
            throw DimensionMismatch("piecewise polynomial: segment length must be degree+1");
        }
    }
}

std::vector<double> PiecewisePoly::interior_knots() const {
    return {knots_.begin() + 1, knots_.end() - 1};
}

std::size_t PiecewisePoly::segment_index(double x) const {
    if (!(x >= knots_.front() && x <= knots_.back())) {
        throw OutOfRange("piecewise polynomial: x=" + std::to_string(x) + " outside the knot range");
    }
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    const auto idx = static_cast<std::size_t>(it - knots_.begin());
    return std::min(idx == 0 ? 0 : idx - 1, segments_.size() - 1);
}

double PiecewisePoly::evaluate(double x, int derivative) const {
    const auto& c = segments_[segment_index(x)];
    return derivative == 0 ? poly_eval(c, x) : poly_eval(poly_derivative(c, derivative), x);
}

double PiecewisePoly::jump(std::size_t knot, int derivative) const {
    if (knot == 0 || knot + 1 >= knots_.size()) {
        throw InvalidArgument("piecewise polynomial: jump is defined at interior knots only");
    }
    const double at = knots_[knot];
    const auto right = poly_derivative(segments_[knot], derivative);
    const auto left = poly_derivative(segments_[knot - 1], derivative);
    return poly_eval(right, at) - poly_eval(left, at);
}

namespace {

// Row of d^r/dx^r [x^degree ... x 1] evaluated at x, placed in segment s.
Eigen::RowVectorXd derivative_row(std::size_t segment, int degree, std::size_t num_segments, double x, int r) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(num_segments) * (degree + 1));
    const auto offset = static_cast<Eigen::Index>(segment) * (degree + 1);
    for (int p = r; p <= degree; ++p) {
        double factor = 1.0;
        for (int q = 0; q < r; ++q) {
            factor *= p - q;
        }
        row[offset + degree - p] = factor * std::pow(x, p - r);
    }
    return row;
}

struct Neumaier {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        const double t = sum + v;
        carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

}  // namespace

PiecewisePoly make_clamped_piecewise(const std::vector<double>& knots, const std::vector<double>& values,
                                     int degree, double slope_left, double slope_right) {
    if (knots.size() < 2 || values.size() != knots.size()) {
        throw InvalidArgument("clamped piecewise: need matching knot and value sequences of length >= 2");
    }
    if (degree < 1) {
        throw InvalidArgument("clamped piecewise: degree must be >= 1");
    }
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (!(knots[i] > knots[i - 1])) {
            throw InvalidArgument("clamped piecewise: knots must be strictly increasing");
        }
    }
    const std::size_t segs = knots.size() - 1;
    const auto unknowns = static_cast<Eigen::Index>(segs) * (degree + 1);

    // Hard: derivatives 0..degree-1 agree at every interior knot.
    Eigen::MatrixXd C(static_cast<Eigen::Index>(segs - 1) * degree, unknowns);
    Eigen::Index row = 0;
    for (std::size_t k = 1; k < segs; ++k) {
        for (int r = 0; r < degree; ++r) {
            C.row(row++) = derivative_row(k - 1, degree, segs, knots[k], r) - derivative_row(k, degree, segs, knots[k], r);
        }
    }

    // Soft: knot values and the two end slopes.
    Eigen::MatrixXd A(static_cast<Eigen::Index>(knots.size()) + 2, unknowns);
    Eigen::VectorXd b(A.rows());
    for (std::size_t k = 0; k < knots.size(); ++k) {
        const std::size_t s = std::min(k, segs - 1);
        A.row(static_cast<Eigen::Index>(k)) = derivative_row(s, degree, segs, knots[k], 0);
        b[static_cast<Eigen::Index>(k)] = values[k];
    }
    A.row(A.rows() - 2) = derivative_row(0, degree, segs, knots.front(), 1);
    b[A.rows() - 2] = slope_left;
    A.row(A.rows() - 1) = derivative_row(segs - 1, degree, segs, knots.back(), 1);
    b[A.rows() - 1] = slope_right;

    const Eigen::MatrixXd N = nullspace_basis(C);
    const Eigen::MatrixXd AN = A * N;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(AN, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd coeffs = N * svd.solve(b);
    const double residual = (A * coeffs - b).cwiseAbs().maxCoeff();

    std::vector<Eigen::VectorXd> segments;
    for (std::size_t s = 0; s < segs; ++s) {
        segments.emplace_back(coeffs.segment(static_cast<Eigen::Index>(s) * (degree + 1), degree + 1));
    }
    PiecewisePoly poly(knots, std::move(segments), degree, residual);
    const double scale = std::max(1.0, coeffs.cwiseAbs().maxCoeff());
    for (std::size_t k = 1; k < segs; ++k) {
        if (std::abs(poly.jump(k, degree)) <= 1e-12 * scale) {
            throw InvalidArgument("clamped piecewise: no derivative jump at knot " + std::to_string(knots[k]));
        }
    }
    return poly;
}

PiecewisePoly make_test_signal() {
    return make_clamped_piecewise({0.0, 0.3, 0.7, 1.0}, {0.0, 0.3, 0.7, 1.0}, 2, 0.0, 0.0);
}

SampleSeries sample(const PiecewisePoly& poly, std::size_t num_points) {
    if (num_points < 2) {
        throw InvalidArgument("sample: num_points must be >= 2");
    }
    const double a = poly.knots().front();
    const double b = poly.knots().back();
    std::vector<double> x(num_points);
    std::vector<double> y(num_points);
    const double last = static_cast<double>(num_points - 1);
    for (std::size_t i = 0; i < num_points; ++i) {
        x[i] = i + 1 == num_points ? b : a + (b - a) * (static_cast<double>(i) / last);
        y[i] = poly.evaluate(x[i]);
    }
    return SampleSeries(std::move(x), std::move(y));
}

SampleSeries add_noise(const SampleSeries& series, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) {
        throw InvalidArgument("add_noise: sigma must be >= 0");
    }
    std::vector<double> y(series.y().begin(), series.y().end());
    if (sigma == 0.0) {
        return series.with_y(std::move(y));
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    for (double& v : y) {
        v += noise(rng);
    }
    return series.with_y(std::move(y));
}

DetectorConfig monte_carlo_config() {
    DetectorConfig cfg;
    cfg.approx = ApproxConfig::defaults(2);
    cfg.approx.support_left = 15;
    cfg.approx.support_right = 15;
    cfg.confidence = 0.95;
    return cfg;
}

MonteCarloSummary run_monte_carlo(const PiecewisePoly& poly, std::size_t m, double sigma,
                                  std::size_t num_points, const DetectorConfig& cfg,
                                  std::uint64_t base_seed, unsigned threads) {
    if (m < 1) {
        throw InvalidArgument("run_monte_carlo: m must be >= 1");
    }
    if (!(sigma >= 0.0)) {
        throw InvalidArgument("run_monte_carlo: sigma must be >= 0");
    }
    cfg.validate();
    const std::vector<double> truth = poly.interior_knots();
    if (truth.empty()) {
        throw InvalidArgument("run_monte_carlo: generator has no interior knots");
    }
    const SampleSeries clean = sample(poly, num_points);

    constexpr double kNone = std::numeric_limits<double>::quiet_NaN();
    struct Iteration {
        std::vector<double> error;  // per true knot, NaN when missed
        std::size_t spurious = 0;
    };
    std::vector<Iteration> results(m);

    DetectorConfig inner = cfg;
    inner.threads = 1;
    parallel_for(m, threads, [&](std::size_t it) {
        const SampleSeries noisy = add_noise(clean, sigma, base_seed + it);
        const DetectionReport report = detect(noisy, inner);
        Iteration& r = results[it];
        r.error.assign(truth.size(), kNone);
        std::vector<double> best_z(truth.size(), -1.0);
        for (const Knot& k : report.knots) {
            std::size_t nearest = 0;
            for (std::size_t t = 1; t < truth.size(); ++t) {
                if (std::abs(k.zeta - truth[t]) < std::abs(k.zeta - truth[nearest])) {
                    nearest = t;
                }
            }
            if (std::abs(k.z) > best_z[nearest]) {
                best_z[nearest] = std::abs(k.z);
                r.error[nearest] = k.zeta - truth[nearest];
            }
        }
        std::size_t found = 0;
        for (double e : r.error) {
            found += std::isnan(e) ? 0 : 1;
        }
        r.spurious = report.knots.size() - found;
    });

    MonteCarloSummary summary;
    summary.m = m;
    summary.sigma = sigma;
    summary.num_points = num_points;
    summary.base_seed = base_seed;
    summary.config = cfg;

    const double z95 = two_sided_critical_value(0.95);
    std::size_t all_found = 0;
    Neumaier spurious;
    for (const auto& r : results) {
        all_found += std::none_of(r.error.begin(), r.error.end(), [](double e) { return std::isnan(e); }) ? 1 : 0;
        spurious.add(static_cast<double>(r.spurious));
    }
    summary.all_detected_rate = static_cast<double>(all_found) / static_cast<double>(m);
    summary.mean_spurious = spurious.value() / static_cast<double>(m);

    for (std::size_t t = 0; t < truth.size(); ++t) {
        KnotStatistics ks;
        ks.true_location = truth[t];
        Neumaier sum;
        for (const auto& r : results) {
            if (!std::isnan(r.error[t])) {
                ++ks.detections;
                sum.add(r.error[t]);
            }
        }
        ks.detection_rate = static_cast<double>(ks.detections) / static_cast<double>(m);
        ks.mean_error = kNone;
        ks.std_dev = kNone;
        ks.half_width = kNone;
        if (ks.detections > 0) {
            ks.mean_error = sum.value() / static_cast<double>(ks.detections);
        }
        if (ks.detections > 1) {
            Neumaier sq;
            for (const auto& r : results) {
                if (!std::isnan(r.error[t])) {
                    const double d = r.error[t] - ks.mean_error;
                    sq.add(d * d);
                }
            }
            ks.std_dev = std::sqrt(sq.value() / static_cast<double>(ks.detections - 1));
            ks.half_width = z95 * ks.std_dev / std::sqrt(static_cast<double>(ks.detections));
        }
        summary.knots.push_back(ks);
    }
    return summary;
}

MonteCarloSummary run_monte_carlo(std::size_t m, double sigma, std::size_t num_points,
                                  const DetectorConfig& cfg, std::uint64_t base_seed, unsigned threads) {
    return run_monte_carlo(make_test_signal(), m, sigma, num_points, cfg, base_seed, threads);
}

}  // namespace cndisc
