#pragma once

// Residual-based measures of how well two coupled polynomials explain a window.
// All values are in squared signal units.

#include "cndisc/coupled_fit.hpp"

namespace cndisc {

struct ErrorTriple {
    double e_approx = 0.0;    ///< E_a
    double e_combined = 0.0;  ///< E_fg
    double e_extrap = 0.0;    ///< E_e
};

/// ||y_L - V_L alpha||^2 + ||y_R - V_R beta||^2
double approximation_error(const CoupledFit& fit, const SampleWindow& window);

/// (alpha_n - beta_n)^2 * sum_i x_i^(2n) over every abscissa of the window.
/// The continuity constraints cancel all lower-order terms, so with both
/// degrees equal to n this is exactly the squared pointwise model difference;
/// higher-degree terms are not included.
double combined_error(const CoupledFit& fit, const SampleWindow& window, int order);

/// Integral of {(alpha_n - beta_n) x^n}^2 over [x_min, x_max], in closed form.
double analytic_combined_error(double alpha_n, double beta_n, double x_min, double x_max, int order);

/// (x_max^(2n+1) - x_min^(2n+1)) / (2n+1)
double analytic_error_constant(double x_min, double x_max, int order);

/// ||y_L - V_L beta||^2 + ||y_R - V_R alpha||^2: each polynomial judged on
/// the opposite side's samples.
double extrapolation_error(const CoupledFit& fit, const SampleWindow& window);

ErrorTriple error_triple(const CoupledFit& fit, const SampleWindow& window, int order);

}  // namespace cndisc
