#include "cndisc/taylor.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <Eigen/SVD>

#include "cndisc/error.hpp"
#include "cndisc/synthetic.hpp"
#include "oracles.hpp"

namespace cndisc {
namespace {

CoupledFit slope_break_fit(SampleWindow* out_window = nullptr) {
    SampleWindow w;
    w.x_left = Eigen::Vector2d(-2, -1);
    w.y_left = Eigen::Vector2d(-2, -1);
    w.x_right = Eigen::Vector2d(1, 2);
    w.y_right = Eigen::Vector2d(2, 4);
    ApproxConfig cfg = ApproxConfig::defaults(1);
    cfg.support_left = cfg.support_right = 2;
    if (out_window) *out_window = w;
    return solve_coupled(w, cfg);
}

TEST(DeltaTaylor, ContinuousLineIsZero) {
    SampleWindow w;
    w.x_left = Eigen::Vector2d(-2, -1);
    w.y_left = Eigen::Vector2d(-3, -1);
    w.x_right = Eigen::Vector2d(1, 2);
    w.y_right = Eigen::Vector2d(3, 5);
    ApproxConfig cfg = ApproxConfig::defaults(1);
    cfg.support_left = cfg.support_right = 2;
    EXPECT_NEAR(delta_taylor(solve_coupled(w, cfg), selector_vector(1, 1, 1)), 0.0, 1e-12);
}

TEST(DeltaTaylor, SlopeBreak) {
    EXPECT_NEAR(delta_taylor(slope_break_fit(), selector_vector(1, 1, 1)), -1.0, 1e-12);
}

TEST(DeltaTaylor, DimensionMismatch) {
    EXPECT_THROW(delta_taylor(slope_break_fit(), selector_vector(1, 2, 1)), DimensionMismatch);
}

TEST(DeltaTaylor, RecoversGeneratorCurvatureJump) {
    // Abscissae chosen so a gap midpoint falls exactly on the 0.3 knot.
    const PiecewisePoly poly = make_test_signal();
    const double h = 0.01;
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 0; i < 30; ++i) {
        x.push_back(0.3 + (i - 14.5) * h);
        y.push_back(poly.evaluate(x.back()));
    }
    const SampleSeries clean(x, y);
    const SampleSeries noisy = add_noise(clean, 1e-4, 99);

    ApproxConfig cfg = ApproxConfig::defaults(2);
    cfg.support_left = cfg.support_right = 15;
    const SampleWindow w = center_window(noisy, 14, cfg);
    ASSERT_NEAR(w.zeta, 0.3, 1e-15);
    const CoupledFit fit = solve_coupled(w, cfg);
    const auto d = selector_vector(2, 2, 2);

    // alpha_2 - beta_2 = (f''(0-) - f''(0+)) / 2! = -jump / 2.
    const double truth = -poly.jump(1, 2) / 2.0;
    const double sd = std::sqrt(propagate_isotropic(fit.K, 1e-4, d).delta_variance);
    EXPECT_NEAR(delta_taylor(fit, d), truth, 4.0 * sd);
    EXPECT_NEAR(delta_taylor(solve_coupled(center_window(clean, 14, cfg), cfg), d), truth, 1e-9);
}

TEST(PropagateCovariance, ZeroCovariance) {
    const auto fit = slope_break_fit();
    const auto r = propagate_covariance(fit.K, Eigen::MatrixXd::Zero(4, 4), selector_vector(1, 1, 1));
    EXPECT_EQ(r.gamma_cov.norm(), 0.0);
    EXPECT_EQ(r.delta_variance, 0.0);
}

TEST(PropagateCovariance, IsotropicIdentity) {
    std::mt19937_64 rng(4);
    const auto inst = testing::random_instance(rng);
    const auto fit = solve_coupled(inst.window, inst.cfg);
    const auto d = selector_vector(inst.cfg.order, inst.cfg.degree_left, inst.cfg.degree_right);
    const double sigma = 0.3;
    const Eigen::Index n = fit.K.cols();
    const auto r = propagate_covariance(fit.K, sigma * sigma * Eigen::MatrixXd::Identity(n, n), d);
    const Eigen::MatrixXd expected = sigma * sigma * fit.K * fit.K.transpose();
    EXPECT_LE((r.gamma_cov - expected).norm(), 1e-12 * expected.norm());
    const auto iso = propagate_isotropic(fit.K, sigma, d);
    EXPECT_NEAR(iso.delta_variance, r.delta_variance, 1e-12 * r.delta_variance);
    EXPECT_GE(r.delta_variance, 0.0);
}

TEST(PropagateCovariance, MatchesMonteCarlo) {
    std::mt19937_64 rng(17);
    auto inst = testing::random_instance(rng);
    const auto fit = solve_coupled(inst.window, inst.cfg);
    const double sigma = 0.05;
    const Eigen::Index n = fit.K.cols();
    const Eigen::VectorXd y0 = inst.window.y();
    const auto predicted = propagate_isotropic(fit.K, sigma, selector_vector(inst.cfg.order, inst.cfg.degree_left,
                                                                              inst.cfg.degree_right));

    std::normal_distribution<double> noise(0.0, sigma);
    const int draws = 10000;
    Eigen::MatrixXd samples(fit.K.rows(), draws);
    for (int k = 0; k < draws; ++k) {
        Eigen::VectorXd y = y0;
        for (Eigen::Index i = 0; i < n; ++i) y[i] += noise(rng);
        samples.col(k) = fit.K * y;
    }
    const Eigen::VectorXd mean = samples.rowwise().mean();
    const Eigen::MatrixXd centred = samples.colwise() - mean;
    const Eigen::MatrixXd empirical = centred * centred.transpose() / (draws - 1);

    const double floor = 0.01 * predicted.gamma_cov.diagonal().maxCoeff();
    for (Eigen::Index i = 0; i < empirical.rows(); ++i) {
        for (Eigen::Index j = 0; j < empirical.cols(); ++j) {
            if (std::abs(predicted.gamma_cov(i, j)) > floor) {
                EXPECT_NEAR(empirical(i, j), predicted.gamma_cov(i, j), 0.1 * std::abs(predicted.gamma_cov(i, j)))
                    << i << "," << j;
            }
        }
    }
}

TEST(PropagateCovariance, RejectsNonPsd) {
    const auto fit = slope_break_fit();
    const auto d = selector_vector(1, 1, 1);
    Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(4, 4);
    asym(0, 1) = 0.5;
    EXPECT_THROW(propagate_covariance(fit.K, asym, d), NotPositiveSemidefinite);
    Eigen::MatrixXd indefinite = Eigen::MatrixXd::Identity(4, 4);
    indefinite(2, 2) = -1.0;
    EXPECT_THROW(propagate_covariance(fit.K, indefinite, d), NotPositiveSemidefinite);
    EXPECT_THROW(propagate_covariance(fit.K, Eigen::MatrixXd::Identity(3, 3), d), DimensionMismatch);
}

TEST(PropagateCovariance, InvariantToNullspaceSign) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const auto inst = testing::random_instance(rng);
        const auto& cfg = inst.cfg;
        const auto d = selector_vector(cfg.order, cfg.degree_left, cfg.degree_right);
        const Eigen::MatrixXd V = testing::oracle_design(inst.window, cfg.degree_left, cfg.degree_right);
        Eigen::MatrixXd N = nullspace_basis(constraint_matrix(cfg.order, cfg.degree_left, cfg.degree_right));
        N.col(trial % N.cols()) *= -1.0;
        const Eigen::MatrixXd flipped_K =
            N * Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(V * N).pseudoInverse();
        const auto fit = solve_coupled(inst.window, cfg);
        const double a = propagate_isotropic(fit.K, 1.0, d).delta_variance;
        const double b = propagate_isotropic(flipped_K, 1.0, d).delta_variance;
        EXPECT_NEAR(a, b, 1e-9 * a);
    }
}

TEST(Significance, Examples) {
    const auto zero = significance({.delta_t = 0.0, .variance = 0.3}, 0.95);
    EXPECT_FALSE(zero.significant);
    EXPECT_EQ(zero.z, 0.0);

    const auto strong = significance({.delta_t = 1.0, .variance = 0.01}, 0.95);
    EXPECT_TRUE(strong.significant);
    EXPECT_NEAR(strong.z, 10.0, 1e-12);

    EXPECT_NEAR(two_sided_critical_value(0.95), 1.959963984540054, 1e-12);
    EXPECT_FALSE(significance({.delta_t = 1.9, .variance = 1.0}, 0.95).significant);
    EXPECT_TRUE(significance({.delta_t = -2.0, .variance = 1.0}, 0.95).significant);
}

TEST(Significance, ZeroVariance) {
    const auto s = significance({.delta_t = -0.5, .variance = 0.0}, 0.99);
    EXPECT_TRUE(s.significant);
    EXPECT_TRUE(std::isinf(s.z));
    EXPECT_LT(s.z, 0.0);
    EXPECT_FALSE(significance({.delta_t = 0.0, .variance = 0.0}, 0.99).significant);
}

TEST(Significance, RejectsBadConfidence) {
    EXPECT_THROW(significance({.delta_t = 1.0, .variance = 1.0}, 1.0), InvalidArgument);
    EXPECT_THROW(significance({.delta_t = 1.0, .variance = 1.0}, 0.0), InvalidArgument);
    EXPECT_THROW(significance({.delta_t = 1.0, .variance = -1.0}, 0.5), InvalidArgument);
}

TEST(TaylorProperties, LinearityAndScaleCovariance) {
    std::mt19937_64 rng(63);
    for (int trial = 0; trial < 20; ++trial) {
        auto inst = testing::random_instance(rng);
        const auto& cfg = inst.cfg;
        const auto d = selector_vector(cfg.order, cfg.degree_left, cfg.degree_right);
        const auto fit = solve_coupled(inst.window, cfg);
        const double dt = delta_taylor(fit, d);
        const double var = propagate_isotropic(fit.K, 0.1, d).delta_variance;

        const double c = -3.5;
        inst.window.y_left *= c;
        inst.window.y_right *= c;
        const auto scaled = solve_coupled(inst.window, cfg);
        const double dt_c = delta_taylor(scaled, d);
        const double var_c = propagate_isotropic(scaled.K, 0.1 * std::abs(c), d).delta_variance;
        EXPECT_NEAR(dt_c, c * dt, 1e-9 * (1.0 + std::abs(c * dt)));
        EXPECT_NEAR(var_c, c * c * var, 1e-9 * c * c * var);
        EXPECT_NEAR(significance({.delta_t = dt_c, .variance = var_c}, 0.9).z,
                    c / std::abs(c) * significance({.delta_t = dt, .variance = var}, 0.9).z, 1e-8);
    }
}

}  // namespace
}  // namespace cndisc
