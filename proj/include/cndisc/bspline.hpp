#pragma once

// Least-squares B-spline modelling on a clamped knot vector.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "cndisc/series.hpp"

namespace cndisc {

struct SplineModel {
    int degree = 2;
    std::vector<double> interior_knots;
    std::vector<double> knots;     ///< full clamped vector, end multiplicity degree+1
    Eigen::VectorXd coefficients;  ///< one per basis function

    std::size_t num_basis() const noexcept { return knots.size() - static_cast<std::size_t>(degree) - 1; }
    double lower() const noexcept { return knots.front(); }
    double upper() const noexcept { return knots.back(); }
};

/// [a x (degree+1), interior..., b x (degree+1)]
std::vector<double> clamped_knot_vector(double a, double b, std::span<const double> interior, int degree);

/// Index s with knots[s] <= x < knots[s+1]; the right end maps to the last non-empty span.
std::size_t find_span(std::span<const double> knots, int degree, double x);

/// Values of all num_basis basis functions at x (zeros outside their support).
Eigen::VectorXd basis_values(std::span<const double> knots, int degree, double x);

/// Least-squares spline on the data range with the given interior knots.
/// Throws InadmissibleKnots when a basis function has no sample in its
/// support or the collocation matrix is rank deficient.
SplineModel fit_spline(const SampleSeries& series, std::span<const double> interior_knots, int degree);

/// de Boor evaluation; throws OutOfRange outside [lower(), upper()].
double eval_spline(const SplineModel& model, double x);
std::vector<double> eval_spline(const SplineModel& model, std::span<const double> x);

/// Root-mean-square of y - s(x) over the series.
double rms_residual(const SplineModel& model, const SampleSeries& series);

}  // namespace cndisc
