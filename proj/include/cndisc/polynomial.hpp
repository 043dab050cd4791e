#pragma once

#include <Eigen/Core>

namespace cndisc {

/// Horner evaluation of a polynomial with descending-power coefficients
/// (coeffs[0] multiplies x^degree).
inline double poly_eval(const Eigen::Ref<const Eigen::VectorXd>& coeffs, double x) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
        acc = acc * x + coeffs[i];
    }
    return acc;
}

/// Coefficients of the k-th derivative, still in descending order.
inline Eigen::VectorXd poly_derivative(const Eigen::Ref<const Eigen::VectorXd>& coeffs, int k = 1) {
    Eigen::VectorXd c = coeffs;
    for (int step = 0; step < k; ++step) {
        const Eigen::Index deg = c.size() - 1;
        if (deg <= 0) {
            return Eigen::VectorXd::Zero(1);
        }
        Eigen::VectorXd d(deg);
        for (Eigen::Index i = 0; i < deg; ++i) {
            d[i] = c[i] * static_cast<double>(deg - i);
        }
        c = std::move(d);
    }
    return c;
}

}  // namespace cndisc
