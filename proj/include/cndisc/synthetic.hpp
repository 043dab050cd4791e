#pragma once

// Piecewise-polynomial test signals with known derivative discontinuities,
// and a seeded Monte Carlo harness that scores the detector against them.

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "cndisc/detector.hpp"
#include "cndisc/series.hpp"

namespace cndisc {

class PiecewisePoly {
public:
    /// segments[s] holds descending-power coefficients in global x,
    /// valid on [knots[s], knots[s+1]].
    PiecewisePoly(std::vector<double> knots, std::vector<Eigen::VectorXd> segments, int degree,
                  double fit_residual = 0.0);

    const std::vector<double>& knots() const noexcept { return knots_; }
    const std::vector<Eigen::VectorXd>& segments() const noexcept { return segments_; }
    int degree() const noexcept { return degree_; }
    /// Largest absolute residual of the soft (interpolation/clamp) conditions.
    double fit_residual() const noexcept { return fit_residual_; }

    std::vector<double> interior_knots() const;
    std::size_t segment_index(double x) const;

    /// Value (or derivative) at x; x must lie in [first knot, last knot].
    double evaluate(double x, int derivative = 0) const;

    /// Right limit minus left limit of the given derivative at interior knot i (1-based knot index).
    double jump(std::size_t knot, int derivative) const;

private:
    std::vector<double> knots_;
    std::vector<Eigen::VectorXd> segments_;
    int degree_;
    double fit_residual_;
};

/// Degree-`degree` piecewise polynomial that is exactly C^(degree-1) at every
/// interior knot and fits, in least squares, the knot values plus the two end
/// slopes. Throws InvalidArgument when an interior knot ends up without a jump
/// in the degree-th derivative.
PiecewisePoly make_clamped_piecewise(const std::vector<double>& knots, const std::vector<double>& values,
                                     int degree, double slope_left, double slope_right);

/// Quadratic test signal on knots [0, 0.3, 0.7, 1] through values [0, 0.3, 0.7, 1]
/// with zero end slopes; C^1 with second-derivative jumps at 0.3 and 0.7.
PiecewisePoly make_test_signal();

/// num_points uniform abscissae over [first knot, last knot], exact values.
SampleSeries sample(const PiecewisePoly& poly, std::size_t num_points);

/// Adds iid N(0, sigma^2) to y from a generator seeded with `seed`.
SampleSeries add_noise(const SampleSeries& series, double sigma, std::uint64_t seed);

struct KnotStatistics {
    double true_location = 0.0;
    std::size_t detections = 0;
    double detection_rate = 0.0;
    double mean_error = 0.0;   ///< detected minus true; NaN without detections
    double half_width = 0.0;   ///< 95% confidence half-width of the mean; NaN below two detections
    double std_dev = 0.0;
};

struct MonteCarloSummary {
    std::size_t m = 0;
    double sigma = 0.0;
    std::size_t num_points = 0;
    std::uint64_t base_seed = 0;
    DetectorConfig config;
    std::vector<KnotStatistics> knots;
    double all_detected_rate = 0.0;  ///< iterations in which every true knot was found
    double mean_spurious = 0.0;      ///< detections per iteration beyond one per true knot
};

/// Detector settings used for the Monte Carlo experiment on the quadratic
/// test signal: order 2, degree 2, 15-sample supports.
DetectorConfig monte_carlo_config();

/// Iteration i perturbs the sampled signal with seed base_seed + i, runs
/// detect, and assigns every detected knot to its nearest true knot. When
/// several land on the same true knot, the one with the largest |z| is that
/// knot's detection and the rest count as spurious.
MonteCarloSummary run_monte_carlo(const PiecewisePoly& poly, std::size_t m, double sigma,
                                  std::size_t num_points, const DetectorConfig& cfg,
                                  std::uint64_t base_seed, unsigned threads = 0);

MonteCarloSummary run_monte_carlo(std::size_t m, double sigma, std::size_t num_points,
                                  const DetectorConfig& cfg, std::uint64_t base_seed,
                                  unsigned threads = 0);

}  // namespace cndisc
