#include "cndisc/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <limits>

#include <Eigen/Cholesky>
#include <boost/math/distributions/normal.hpp>

#include "cndisc/error.hpp"

namespace cndisc {

double delta_taylor(const CoupledFit& fit, const Eigen::Ref<const Eigen::VectorXd>& selector) {
    if (selector.size() != fit.gamma.size()) {
        throw DimensionMismatch("delta_taylor: selector has length " + std::to_string(selector.size()) +
                                ", gamma has length " + std::to_string(fit.gamma.size()));
    }
    return selector.dot(fit.gamma);
}

namespace {

void check_psd(const Eigen::Ref<const Eigen::MatrixXd>& cov) {
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    const double tol = 1e-12 * scale;
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > tol) {
        throw NotPositiveSemidefinite("observation covariance is not symmetric");
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
    if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() < -tol * cov.rows()).any()) {
        throw NotPositiveSemidefinite("observation covariance has a negative pivot");
    }
}

}  // namespace

CovariancePropagation propagate_covariance(const Eigen::Ref<const Eigen::MatrixXd>& K,
                                           const Eigen::Ref<const Eigen::MatrixXd>& observation_cov,
                                           const Eigen::Ref<const Eigen::VectorXd>& selector) {
    if (observation_cov.rows() != observation_cov.cols() || observation_cov.rows() != K.cols()) {
        throw DimensionMismatch("propagate_covariance: covariance must be square with K.cols() rows");
    }
    if (selector.size() != K.rows()) {
        throw DimensionMismatch("propagate_covariance: selector length must equal K.rows()");
    }
    check_psd(observation_cov);

    CovariancePropagation out;
    out.gamma_cov = K * observation_cov * K.transpose();
    // Symmetrise away round-off.
    out.gamma_cov = 0.5 * (out.gamma_cov + out.gamma_cov.transpose()).eval();
    out.delta_variance = std::max(0.0, selector.dot(out.gamma_cov * selector));
    return out;
}

CovariancePropagation propagate_isotropic(const Eigen::Ref<const Eigen::MatrixXd>& K, double sigma,
                                          const Eigen::Ref<const Eigen::VectorXd>& selector) {
    if (!(sigma >= 0.0)) {
        throw InvalidArgument("propagate_isotropic: sigma must be >= 0");
    }
    if (selector.size() != K.rows()) {
        throw DimensionMismatch("propagate_isotropic: selector length must equal K.rows()");
    }
    CovariancePropagation out;
    out.gamma_cov = (sigma * sigma) * (K * K.transpose());
    const Eigen::VectorXd w = K.transpose() * selector;
    out.delta_variance = sigma * sigma * w.squaredNorm();
    return out;
}

double two_sided_critical_value(double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw InvalidArgument("confidence must lie in (0, 1)");
    }
    const boost::math::normal_distribution<double> standard;
    return boost::math::quantile(standard, 0.5 + 0.5 * confidence);
}

double z_score(double delta_t, double variance) {
    if (!(variance >= 0.0)) {
        throw InvalidArgument("z_score: variance must be >= 0");
    }
    if (variance == 0.0) {
        return delta_t == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), delta_t);
    }
    return delta_t / std::sqrt(variance);
}

Significance significance(const DeltaEstimate& est, double confidence) {
    const double critical = two_sided_critical_value(confidence);
    Significance out;
    out.z = z_score(est.delta_t, est.variance);
    out.significant = std::abs(out.z) > critical;
    return out;
}

}  // namespace cndisc
