#include "cndisc/error_measures.hpp"

#include <cmath>

#include "cndisc/error.hpp"

namespace cndisc {

namespace {

void check_dims(const CoupledFit& fit, const SampleWindow& window) {
    if (fit.alpha.size() < 1 || fit.beta.size() < 1 ||
        window.x_left.size() != window.y_left.size() ||
        window.x_right.size() != window.y_right.size()) {
        throw DimensionMismatch("error measure: inconsistent fit/window dimensions");
    }
}

int degree_of(const Eigen::VectorXd& coeffs) { return static_cast<int>(coeffs.size()) - 1; }

}  // namespace

double approximation_error(const CoupledFit& fit, const SampleWindow& window) {
    check_dims(fit, window);
    const Eigen::VectorXd rl = window.y_left - vandermonde(window.x_left, degree_of(fit.alpha)) * fit.alpha;
    const Eigen::VectorXd rr = window.y_right - vandermonde(window.x_right, degree_of(fit.beta)) * fit.beta;
    return rl.squaredNorm() + rr.squaredNorm();
}

double combined_error(const CoupledFit& fit, const SampleWindow& window, int order) {
    check_dims(fit, window);
    if (order < 1 || order > degree_of(fit.alpha) || order > degree_of(fit.beta)) {
        throw InvalidArgument("combined_error: order exceeds polynomial degree");
    }
    const int dl = degree_of(fit.alpha);
    const int dr = degree_of(fit.beta);
    const double diff = fit.gamma[alpha_position(order, dl)] - fit.gamma[beta_position(order, dl, dr)];
    double moment = 0.0;
    for (Eigen::Index i = 0; i < window.x_left.size(); ++i) {
        moment += std::pow(window.x_left[i], 2 * order);
    }
    for (Eigen::Index i = 0; i < window.x_right.size(); ++i) {
        moment += std::pow(window.x_right[i], 2 * order);
    }
    return diff * diff * moment;
}

double analytic_error_constant(double x_min, double x_max, int order) {
    if (!(x_min < x_max)) {
        throw InvalidArgument("analytic combined error: x_min must be < x_max");
    }
    if (order < 1) {
        throw InvalidArgument("analytic combined error: order must be >= 1");
    }
    const int p = 2 * order + 1;
    return (std::pow(x_max, p) - std::pow(x_min, p)) / p;
}

double analytic_combined_error(double alpha_n, double beta_n, double x_min, double x_max, int order) {
    const double diff = alpha_n - beta_n;
    return diff * diff * analytic_error_constant(x_min, x_max, order);
}

double extrapolation_error(const CoupledFit& fit, const SampleWindow& window) {
    check_dims(fit, window);
    const Eigen::VectorXd rl = window.y_left - vandermonde(window.x_left, degree_of(fit.beta)) * fit.beta;
    const Eigen::VectorXd rr = window.y_right - vandermonde(window.x_right, degree_of(fit.alpha)) * fit.alpha;
    return rl.squaredNorm() + rr.squaredNorm();
}

ErrorTriple error_triple(const CoupledFit& fit, const SampleWindow& window, int order) {
    return {approximation_error(fit, window), combined_error(fit, window, order),
            extrapolation_error(fit, window)};
}

}  // namespace cndisc
