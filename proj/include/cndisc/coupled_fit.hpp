#pragma once

// Constrained coupled polynomial approximation at a single interstitial point.
//
// Two polynomials P_f (left, degree d_L) and P_g (right, degree d_R) are fitted
// in a coordinate frame whose origin is the interstitial point. Their
// coefficients of x^0 ... x^(n-1) are tied together, so the pair is C^(n-1)
// continuous at the origin and the x^n coefficients are Maclaurin coefficients
// of the two sides. Coefficient vectors use descending powers throughout.

#include <cstddef>

#include <Eigen/Core>

#include "cndisc/series.hpp"

namespace cndisc {

struct ApproxConfig {
    int order = 1;           ///< n, derivative order of the sought discontinuity
    int degree_left = 1;     ///< d_L
    int degree_right = 1;    ///< d_R
    int support_left = 8;    ///< l_L, samples left of the interstitial point
    int support_right = 8;   ///< l_R
    bool normalize_x = false;
    double max_condition = 1e12;

    /// d_L = d_R = n and l_L = l_R = max(8, 2(n+1)).
    static ApproxConfig defaults(int order);

    /// Throws InvalidArgument when an invariant is violated.
    void validate() const;

    int num_coefficients() const noexcept { return degree_left + degree_right + 2; }
    int window_size() const noexcept { return support_left + support_right; }
};

/// Left/right sample blocks re-centred on an interstitial point.
struct SampleWindow {
    Eigen::VectorXd x_left;   ///< strictly negative, increasing
    Eigen::VectorXd y_left;
    Eigen::VectorXd x_right;  ///< strictly positive, increasing
    Eigen::VectorXd y_right;
    double zeta = 0.0;        ///< interstitial abscissa in series coordinates
    std::size_t gap = 0;      ///< the window sits between samples gap and gap+1

    /// [y_left; y_right]
    Eigen::VectorXd y() const;
    /// [x_left; x_right]
    Eigen::VectorXd x() const;
};

struct CoupledFit {
    Eigen::VectorXd alpha;  ///< P_f coefficients, length d_L+1
    Eigen::VectorXd beta;   ///< P_g coefficients, length d_R+1
    Eigen::VectorXd gamma;  ///< [alpha; beta]
    Eigen::MatrixXd K;      ///< linear estimator, gamma = K * y
    double condition = 1.0; ///< 2-norm condition number of the reduced design matrix
};

/// Position of the x^k coefficient of P_f inside gamma.
constexpr int alpha_position(int k, int degree_left) noexcept { return degree_left - k; }
/// Position of the x^k coefficient of P_g inside gamma.
constexpr int beta_position(int k, int degree_left, int degree_right) noexcept {
    return degree_left + 1 + degree_right - k;
}

/// Window around the gap between samples `gap` and `gap+1`.
SampleWindow center_window(const SampleSeries& series, std::size_t gap, const ApproxConfig& cfg);

/// Rows [x^degree, ..., x, 1].
Eigen::MatrixXd vandermonde(const Eigen::Ref<const Eigen::VectorXd>& x, int degree);

/// n x (d_L+d_R+2) matrix whose rows enforce alpha_k = beta_k for k < n.
/// Rows are ordered by descending power, matching the coefficient layout.
Eigen::MatrixXd constraint_matrix(int order, int degree_left, int degree_right);

/// Orthonormal basis of null(C), one column per free direction.
Eigen::MatrixXd nullspace_basis(const Eigen::Ref<const Eigen::MatrixXd>& C);

/// Minimises ||y - V gamma||^2 subject to C gamma = 0 via gamma = N (V N)^+ y.
CoupledFit solve_coupled(const SampleWindow& window, const ApproxConfig& cfg);

/// Selector with d^T gamma = alpha_n - beta_n.
Eigen::VectorXd selector_vector(int order, int degree_left, int degree_right);

}  // namespace cndisc
