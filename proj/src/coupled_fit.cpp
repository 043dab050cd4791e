#include "cndisc/coupled_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "cndisc/error.hpp"

namespace cndisc {

ApproxConfig ApproxConfig::defaults(int order) {
    ApproxConfig cfg;
    cfg.order = order;
    cfg.degree_left = order;
    cfg.degree_right = order;
    cfg.support_left = std::max(8, 2 * (order + 1));
    cfg.support_right = cfg.support_left;
    return cfg;
}

void ApproxConfig::validate() const {
    if (order < 1) {
        throw InvalidArgument("order must be >= 1, got " + std::to_string(order));
    }
    if (degree_left < order || degree_right < order) {
        throw InvalidArgument("polynomial degrees must be >= order (" + std::to_string(order) + ")");
    }
    if (support_left < degree_left + 1 || support_right < degree_right + 1) {
        throw InvalidArgument("each support must hold at least degree+1 samples");
    }
    if (!(max_condition > 1.0)) {
        throw InvalidArgument("condition-number limit must exceed 1");
    }
}

Eigen::VectorXd SampleWindow::y() const {
    Eigen::VectorXd out(y_left.size() + y_right.size());
    out << y_left, y_right;
    return out;
}

Eigen::VectorXd SampleWindow::x() const {
    Eigen::VectorXd out(x_left.size() + x_right.size());
    out << x_left, x_right;
    return out;
}

SampleWindow center_window(const SampleSeries& series, std::size_t gap, const ApproxConfig& cfg) {
    cfg.validate();
    const auto x = series.x();
    const auto y = series.y();
    const auto left = static_cast<std::size_t>(cfg.support_left);
    const auto right = static_cast<std::size_t>(cfg.support_right);
    if (gap + 1 < left || gap + 1 + right > series.size()) {
        throw WindowOutOfBounds("window at gap " + std::to_string(gap) + " needs " +
                                std::to_string(left) + " samples left and " + std::to_string(right) +
                                " right of the gap; series has " + std::to_string(series.size()));
    }

    SampleWindow w;
    w.gap = gap;
    w.zeta = 0.5 * (x[gap] + x[gap + 1]);
    w.x_left.resize(cfg.support_left);
    w.y_left.resize(cfg.support_left);
    w.x_right.resize(cfg.support_right);
    w.y_right.resize(cfg.support_right);
    const std::size_t first = gap + 1 - left;
    for (std::size_t i = 0; i < left; ++i) {
        w.x_left[static_cast<Eigen::Index>(i)] = x[first + i] - w.zeta;
        w.y_left[static_cast<Eigen::Index>(i)] = y[first + i];
    }
    for (std::size_t i = 0; i < right; ++i) {
        w.x_right[static_cast<Eigen::Index>(i)] = x[gap + 1 + i] - w.zeta;
        w.y_right[static_cast<Eigen::Index>(i)] = y[gap + 1 + i];
    }
    return w;
}

Eigen::MatrixXd vandermonde(const Eigen::Ref<const Eigen::VectorXd>& x, int degree) {
    if (degree < 0) {
        throw InvalidArgument("vandermonde: degree must be >= 0");
    }
    Eigen::MatrixXd V(x.size(), degree + 1);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double p = 1.0;
        for (int j = degree; j >= 0; --j) {
            V(i, j) = p;
            p *= x[i];
        }
    }
    return V;
}

Eigen::MatrixXd constraint_matrix(int order, int degree_left, int degree_right) {
    if (order < 1 || degree_left < order || degree_right < order) {
        throw InvalidArgument("constraint_matrix: need 1 <= order <= min(d_L, d_R)");
    }
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(order, degree_left + degree_right + 2);
    for (int row = 0; row < order; ++row) {
        const int k = order - 1 - row;
        C(row, alpha_position(k, degree_left)) = 1.0;
        C(row, beta_position(k, degree_left, degree_right)) = -1.0;
    }
    return C;
}

Eigen::MatrixXd nullspace_basis(const Eigen::Ref<const Eigen::MatrixXd>& C) {
    const Eigen::Index cols = C.cols();
    const Eigen::Index rows = C.rows();
    if (rows == 0) {
        return Eigen::MatrixXd::Identity(cols, cols);
    }
    if (rows > cols) {
        throw RankDeficient("nullspace_basis: more constraints than unknowns");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(C.transpose());
    if (qr.rank() < rows) {
        throw RankDeficient("nullspace_basis: constraint matrix has rank " +
                            std::to_string(qr.rank()) + " < " + std::to_string(rows));
    }
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(cols, cols);
    Eigen::MatrixXd N = Q.rightCols(cols - rows);

    // Fix the sign of each column so the basis is reproducible.
    for (Eigen::Index j = 0; j < N.cols(); ++j) {
        Eigen::Index pivot = 0;
        N.col(j).cwiseAbs().maxCoeff(&pivot);
        if (N(pivot, j) < 0.0) {
            N.col(j) = -N.col(j);
        }
    }
    return N;
}

CoupledFit solve_coupled(const SampleWindow& window, const ApproxConfig& cfg) {
    cfg.validate();
    if (window.x_left.size() != cfg.support_left || window.x_right.size() != cfg.support_right ||
        window.y_left.size() != cfg.support_left || window.y_right.size() != cfg.support_right) {
        throw DimensionMismatch("solve_coupled: window size does not match configured supports");
    }

    const int dl = cfg.degree_left;
    const int dr = cfg.degree_right;
    const int m = cfg.num_coefficients();

    double scale = 1.0;
    if (cfg.normalize_x) {
        scale = std::max(window.x_left.cwiseAbs().maxCoeff(), window.x_right.cwiseAbs().maxCoeff());
    }

    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(cfg.window_size(), m);
    V.topLeftCorner(cfg.support_left, dl + 1) = vandermonde(window.x_left / scale, dl);
    V.bottomRightCorner(cfg.support_right, dr + 1) = vandermonde(window.x_right / scale, dr);

    const Eigen::MatrixXd N = nullspace_basis(constraint_matrix(cfg.order, dl, dr));
    const Eigen::MatrixXd VN = V * N;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(VN, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double smin = s[s.size() - 1];
    const double condition = smin > 0.0 ? s[0] / smin : std::numeric_limits<double>::infinity();
    if (!(condition <= cfg.max_condition)) {
        throw IllConditioned("solve_coupled: condition number " + std::to_string(condition) +
                                 " of the reduced design matrix exceeds " +
                                 std::to_string(cfg.max_condition) + " at zeta=" +
                                 std::to_string(window.zeta),
                             condition);
    }

    const Eigen::MatrixXd pinv =
        svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().transpose();

    CoupledFit fit;
    fit.K = N * pinv;
    if (cfg.normalize_x) {
        // Undo the abscissa scaling: the x^k coefficient picks up scale^-k.
        Eigen::VectorXd unscale(m);
        for (int k = 0; k <= dl; ++k) {
            unscale[alpha_position(k, dl)] = std::pow(scale, -k);
        }
        for (int k = 0; k <= dr; ++k) {
            unscale[beta_position(k, dl, dr)] = std::pow(scale, -k);
        }
        fit.K = unscale.asDiagonal() * fit.K;
    }
    fit.gamma = fit.K * window.y();
    fit.alpha = fit.gamma.head(dl + 1);
    fit.beta = fit.gamma.tail(dr + 1);
    fit.condition = condition;
    return fit;
}

Eigen::VectorXd selector_vector(int order, int degree_left, int degree_right) {
    if (order < 1 || degree_left < order || degree_right < order) {
        throw InvalidArgument("selector_vector: need 1 <= order <= min(d_L, d_R)");
    }
    Eigen::VectorXd d = Eigen::VectorXd::Zero(degree_left + degree_right + 2);
    d[alpha_position(order, degree_left)] = 1.0;
    d[beta_position(order, degree_left, degree_right)] = -1.0;
    return d;
}

}  // namespace cndisc
