#include "kernoil/bootstrap.hpp"
#include "kernoil/rng.hpp"
#include "kernoil/var.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

using namespace kernoil;

namespace {

/// Simulate y_t = alpha + sum A_i y_{t-i} + L w_t with standard normal w.
Eigen::MatrixXd simulate_var(const Eigen::VectorXd& alpha,
                             const std::vector<Eigen::MatrixXd>& coeffs, const Eigen::MatrixXd& impact,
                             int T, Rng& rng, int burn = 200) {
    const int n = static_cast<int>(alpha.size());
    const int p = static_cast<int>(coeffs.size());
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(T + burn + p, n);
    for (int t = p; t < y.rows(); ++t) {
        Eigen::VectorXd v = alpha;
        for (int i = 1; i <= p; ++i) v += coeffs[i - 1] * y.row(t - i).transpose();
        Eigen::VectorXd w(n);
        for (int k = 0; k < n; ++k) w[k] = rng.next_normal();
        y.row(t) = (v + impact * w).transpose();
    }
    return y.bottomRows(T);
}

}  // namespace

TEST_CASE("estimate_ols recovers an exact VAR(1) with zero residuals") {
    Eigen::MatrixXd a1(2, 2);
    a1 << 0.5, 0.1, -0.2, 0.3;
    Eigen::VectorXd alpha(2);
    alpha << 0.7, -0.4;

    Eigen::MatrixXd y(60, 2);
    y.row(0) << 1.0, 2.0;
    for (int t = 1; t < y.rows(); ++t) {
        y.row(t) = (alpha + a1 * y.row(t - 1).transpose()).transpose();
    }
    const VarModel model = estimate_ols(y, 1);
    CHECK((model.coeffs[0] - a1).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((model.intercept - alpha).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(model.residuals.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("estimate_ols on white noise finds near-zero coefficients") {
    Rng rng(42);
    const int T = 10000;
    Eigen::MatrixXd y(T, 4);
    for (int t = 0; t < T; ++t) {
        for (int k = 0; k < 4; ++k) y(t, k) = rng.next_normal();
    }
    const VarModel model = estimate_ols(y, 1);
    CHECK(model.coeffs[0].cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("estimate_ols rejects too-small samples") {
    Eigen::MatrixXd y = Eigen::MatrixXd::Random(4 * 2, 4);  // T = 4p for p = 2
    CHECK_THROWS_WITH_AS(estimate_ols(y, 2), doctest::Contains("insufficient sample"),
                         std::invalid_argument);
}

TEST_CASE("estimate_ols rejects rank-deficient regressors") {
    // Two identical columns make the lag matrix singular.
    Rng rng(3);
    Eigen::MatrixXd y(50, 2);
    for (int t = 0; t < 50; ++t) {
        y(t, 0) = rng.next_normal();
        y(t, 1) = 2.0 * y(t, 0);
    }
    CHECK_THROWS_WITH_AS(estimate_ols(y, 1), doctest::Contains("rank deficient"),
                         std::runtime_error);
}

TEST_CASE("estimate_ols refuses panels with masked cells") {
    Rng rng(61);
    TimeSeriesFrame panel;
    panel.start = Month{2000, 1};
    panel.freq = Freq::monthly;
    panel.names = {"a", "b"};
    panel.values.resize(60, 2);
    for (int t = 0; t < 60; ++t) {
        panel.values(t, 0) = rng.next_normal();
        panel.values(t, 1) = rng.next_normal();
    }
    panel.mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(60, 2, false);
    panel.mask(30, 1) = true;
    CHECK_THROWS_WITH_AS(estimate_ols(panel, 1), doctest::Contains("missing"),
                         std::invalid_argument);
}

TEST_CASE("companion matrix eigen moduli") {
    VarModel model;
    model.p = 1;
    model.intercept = Eigen::VectorXd::Zero(3);
    model.coeffs = {0.5 * Eigen::MatrixXd::Identity(3, 3)};
    model.residuals = Eigen::MatrixXd::Zero(10, 3);
    model.sigma_u = Eigen::MatrixXd::Identity(3, 3);
    const CompanionForm cf = companion(model);
    for (double m : cf.eigen_moduli) CHECK(m == doctest::Approx(0.5));
    CHECK(is_stable(cf));

    model.coeffs = {Eigen::MatrixXd::Identity(3, 3)};
    const CompanionForm unit = companion(model);
    CHECK(unit.max_modulus() == doctest::Approx(1.0));
    CHECK_FALSE(is_stable(unit));
}

TEST_CASE("companion of a VAR(2) matches a direct eigensolve of the stack") {
    Rng rng(11);
    Eigen::MatrixXd a1(4, 4), a2(4, 4);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            a1(i, j) = 0.22 * rng.next_normal();
            a2(i, j) = 0.12 * rng.next_normal();
        }
    }
    VarModel model;
    model.p = 2;
    model.intercept = Eigen::VectorXd::Zero(4);
    model.coeffs = {a1, a2};
    model.residuals = Eigen::MatrixXd::Zero(10, 4);
    model.sigma_u = Eigen::MatrixXd::Identity(4, 4);

    // Independent stack built here, eigensolved directly.
    Eigen::MatrixXd stack = Eigen::MatrixXd::Zero(8, 8);
    stack.block(0, 0, 4, 4) = a1;
    stack.block(0, 4, 4, 4) = a2;
    stack.block(4, 0, 4, 4).setIdentity();
    Eigen::EigenSolver<Eigen::MatrixXd> es(stack, false);
    std::vector<double> expected;
    for (int i = 0; i < 8; ++i) expected.push_back(std::abs(es.eigenvalues()[i]));
    std::sort(expected.begin(), expected.end(), std::greater<>());

    const CompanionForm cf = companion(model);
    REQUIRE(cf.eigen_moduli.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(cf.eigen_moduli[i] == doctest::Approx(expected[i]).epsilon(1e-10));
    }
}

TEST_CASE("is_stable applies the tolerance strictly") {
    VarModel model;
    model.p = 1;
    model.intercept = Eigen::VectorXd::Zero(1);
    model.coeffs = {Eigen::MatrixXd::Constant(1, 1, 0.999)};
    model.residuals = Eigen::MatrixXd::Zero(10, 1);
    model.sigma_u = Eigen::MatrixXd::Identity(1, 1);
    const CompanionForm cf = companion(model);
    CHECK_FALSE(is_stable(cf, 1e-3));
    CHECK(is_stable(cf, 1e-4));
}

TEST_CASE("residuals are orthogonal to the regressors and sigma_u factors") {
    Rng rng(5);
    Eigen::MatrixXd a1(4, 4);
    a1.setZero();
    a1.diagonal() << 0.5, 0.4, 0.6, 0.3;
    a1(0, 2) = 0.1;
    a1(3, 1) = -0.15;
    Eigen::MatrixXd impact = Eigen::MatrixXd::Identity(4, 4);
    impact(2, 0) = 0.4;
    impact(3, 2) = 0.3;
    const Eigen::MatrixXd y =
        simulate_var(Eigen::VectorXd::Constant(4, 0.2), {a1}, impact, 400, rng);
    const VarModel model = estimate_ols(y, 1);

    // X'u per entry, scaled by sample size and regressor magnitude.
    Eigen::MatrixXd x(y.rows() - 1, 5);
    x.col(0).setOnes();
    x.rightCols(4) = y.topRows(y.rows() - 1);
    const Eigen::MatrixXd xtu = x.transpose() * model.residuals;
    const double scale = static_cast<double>(x.rows()) * x.cwiseAbs().maxCoeff();
    CHECK((xtu.cwiseAbs() / scale).maxCoeff() < 1e-8);

    CHECK((model.sigma_u - model.sigma_u.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::LLT<Eigen::MatrixXd> llt(model.sigma_u);
    CHECK(llt.info() == Eigen::Success);
}

TEST_CASE("refitting fitted-plus-residuals reproduces the coefficients") {
    Rng rng(17);
    Eigen::MatrixXd a1 = 0.4 * Eigen::MatrixXd::Identity(3, 3);
    a1(0, 1) = 0.2;
    const Eigen::MatrixXd y =
        simulate_var(Eigen::VectorXd::Zero(3), {a1}, Eigen::MatrixXd::Identity(3, 3), 300, rng);
    const VarModel model = estimate_ols(y, 1);

    Eigen::MatrixXd rebuilt(y.rows(), 3);
    rebuilt.topRows(1) = y.topRows(1);
    rebuilt.bottomRows(y.rows() - 1) = fitted_plus_residuals(model, y);
    const VarModel refit = estimate_ols(rebuilt, 1);
    CHECK((refit.coeffs[0] - model.coeffs[0]).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((refit.intercept - model.intercept).cwiseAbs().maxCoeff() < 1e-12);
}
