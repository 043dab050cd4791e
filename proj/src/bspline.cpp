#include "cndisc/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/QR>

#include "cndisc/error.hpp"

namespace cndisc {

std::vector<double> clamped_knot_vector(double a, double b, std::span<const double> interior, int degree) {
    if (degree < 0) {
        throw InvalidArgument("spline degree must be >= 0");
    }
    if (!(a < b)) {
        throw InvalidArgument("spline range must satisfy a < b");
    }
    std::vector<double> knots(static_cast<std::size_t>(degree) + 1, a);
    double prev = a;
    for (double k : interior) {
        if (!(k > prev) || !(k < b)) {
            throw InadmissibleKnots("interior knots must be strictly increasing and inside (" + std::to_string(a) +
                                    ", " + std::to_string(b) + ")");
        }
        knots.push_back(k);
        prev = k;
    }
    knots.insert(knots.end(), static_cast<std::size_t>(degree) + 1, b);
    return knots;
}

std::size_t find_span(std::span<const double> knots, int degree, double x) {
    const std::size_t nb = knots.size() - static_cast<std::size_t>(degree) - 1;
    if (!(x >= knots.front() && x <= knots.back())) {
        throw OutOfRange("x=" + std::to_string(x) + " outside the spline range");
    }
    if (x >= knots[nb]) {
        return nb - 1;
    }
    const auto it = std::upper_bound(knots.begin() + degree, knots.begin() + static_cast<std::ptrdiff_t>(nb) + 1, x);
    return static_cast<std::size_t>(it - knots.begin()) - 1;
}

Eigen::VectorXd basis_values(std::span<const double> knots, int degree, double x) {
    const std::size_t nb = knots.size() - static_cast<std::size_t>(degree) - 1;
    const std::size_t span = find_span(knots, degree, x);
    const auto p = static_cast<std::size_t>(degree);

    // Cox-de Boor triangle for the p+1 functions that are nonzero on this span.
    std::vector<double> local(p + 1, 0.0);
    std::vector<double> left(p + 1, 0.0);
    std::vector<double> right(p + 1, 0.0);
    local[0] = 1.0;
    for (std::size_t j = 1; j <= p; ++j) {
        left[j] = x - knots[span + 1 - j];
        right[j] = knots[span + j] - x;
        double saved = 0.0;
        for (std::size_t r = 0; r < j; ++r) {
            const double tmp = local[r] / (right[r + 1] + left[j - r]);
            local[r] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        local[j] = saved;
    }

    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nb));
    for (std::size_t j = 0; j <= p; ++j) {
        out[static_cast<Eigen::Index>(span - p + j)] = local[j];
    }
    return out;
}

SplineModel fit_spline(const SampleSeries& series, std::span<const double> interior_knots, int degree) {
    if (degree < 1) {
        throw InvalidArgument("fit_spline: degree must be >= 1");
    }
    const auto x = series.x();
    const auto y = series.y();

    SplineModel model;
    model.degree = degree;
    model.interior_knots.assign(interior_knots.begin(), interior_knots.end());
    model.knots = clamped_knot_vector(x.front(), x.back(), interior_knots, degree);
    const std::size_t nb = model.num_basis();
    if (series.size() < nb) {
        throw InadmissibleKnots("fit_spline: " + std::to_string(nb) + " basis functions but only " +
                                std::to_string(series.size()) + " samples");
    }

    Eigen::MatrixXd B(static_cast<Eigen::Index>(series.size()), static_cast<Eigen::Index>(nb));
    for (std::size_t i = 0; i < series.size(); ++i) {
        B.row(static_cast<Eigen::Index>(i)) = basis_values(model.knots, degree, x[i]).transpose();
    }
    for (Eigen::Index j = 0; j < B.cols(); ++j) {
        if (!(B.col(j).array() > 0.0).any()) {
            throw InadmissibleKnots("fit_spline: basis function " + std::to_string(j) +
                                    " has no sample inside its support");
        }
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
    if (qr.rank() < B.cols()) {
        throw InadmissibleKnots("fit_spline: collocation matrix is rank deficient (" + std::to_string(qr.rank()) +
                                " < " + std::to_string(B.cols()) + ")");
    }
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
    model.coefficients = qr.solve(yv);
    return model;
}

double eval_spline(const SplineModel& model, double x) {
    const auto p = static_cast<std::size_t>(model.degree);
    const std::size_t span = find_span(model.knots, model.degree, x);
    const auto& t = model.knots;

    std::vector<double> d(p + 1);
    for (std::size_t j = 0; j <= p; ++j) {
        d[j] = model.coefficients[static_cast<Eigen::Index>(span - p + j)];
    }
    for (std::size_t r = 1; r <= p; ++r) {
        for (std::size_t j = p; j >= r; --j) {
            const double lo = t[span - p + j];
            const double hi = t[span + 1 + j - r];
            const double a = (x - lo) / (hi - lo);
            d[j] = (1.0 - a) * d[j - 1] + a * d[j];
        }
    }
    return d[p];
}

std::vector<double> eval_spline(const SplineModel& model, std::span<const double> x) {
    std::vector<double> out;
    out.reserve(x.size());
    for (double v : x) {
        out.push_back(eval_spline(model, v));
    }
    return out;
}

double rms_residual(const SplineModel& model, const SampleSeries& series) {
    double sum = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double r = series.y()[i] - eval_spline(model, series.x()[i]);
        sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(series.size()));
}

}  // namespace cndisc
