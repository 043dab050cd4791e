#pragma once

#include <Eigen/Core>

#include "cndisc/coupled_fit.hpp"

namespace cndisc {

/// Difference of the n-th Maclaurin coefficients, left minus right.
struct DeltaEstimate {
    double delta_t = 0.0;
    double variance = 0.0;  ///< lambda_Delta
    int order = 1;
};

struct CovariancePropagation {
    Eigen::MatrixXd gamma_cov;  ///< K Lambda_y K^T
    double delta_variance = 0.0;
};

struct Significance {
    bool significant = false;
    double z = 0.0;
};

/// d^T gamma.
double delta_taylor(const CoupledFit& fit, const Eigen::Ref<const Eigen::VectorXd>& selector);

/// Pushes the observation covariance through the linear estimator K.
/// Lambda_y must be symmetric positive semidefinite.
CovariancePropagation propagate_covariance(const Eigen::Ref<const Eigen::MatrixXd>& K,
                                           const Eigen::Ref<const Eigen::MatrixXd>& observation_cov,
                                           const Eigen::Ref<const Eigen::VectorXd>& selector);

/// Same result for Lambda_y = sigma^2 I without forming the identity.
CovariancePropagation propagate_isotropic(const Eigen::Ref<const Eigen::MatrixXd>& K, double sigma,
                                          const Eigen::Ref<const Eigen::VectorXd>& selector);

/// delta_t / sqrt(variance); +-inf for a nonzero delta with zero variance, 0 for 0/0.
double z_score(double delta_t, double variance);

/// Two-sided z-test of delta_t against zero.
Significance significance(const DeltaEstimate& est, double confidence);

/// Two-sided standard normal critical value, e.g. 1.959964 for 0.95.
double two_sided_critical_value(double confidence);

}  // namespace cndisc
