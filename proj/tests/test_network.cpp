#include "kernoil/network.hpp"
#include "kernoil/rng.hpp"

#include <doctest.h>

using namespace kernoil;

namespace {

/// Cycle economy: 1 buys from 2, 2 from 3, 3 from 1.
IONetwork cycle_network(const ThreeSectorCycle& c, Eigen::Vector3d sales) {
    IONetwork net;
    net.A = Eigen::MatrixXd::Zero(3, 3);
    net.A(0, 1) = c.a12;
    net.A(1, 2) = c.a23;
    net.A(2, 0) = c.a31;
    net.alpha_l = c.alpha_l();
    net.beta = Eigen::Vector3d::Constant(1.0 / 3.0);
    net.eta = c.eta;
    net.b = Eigen::Vector3d::Zero();
    net.sales = std::move(sales);
    return net;
}

/// Level change of employment implied by the log response and observed
/// sales, dl_j = alpha_j * sales_j * dln_l_j.
Eigen::Vector3d to_level_change(const IONetwork& net, const Eigen::VectorXd& dln_l) {
    return net.alpha_l.cwiseProduct(net.sales.cwiseProduct(dln_l)).head<3>();
}

}  // namespace

TEST_CASE("a_hat equals A under equal sales and respects the definition") {
    ThreeSectorCycle c{0.5, 0.25, 0.4, 1.0};
    const IONetwork net = cycle_network(c, Eigen::Vector3d::Ones());
    CHECK((a_hat(net) - net.A).cwiseAbs().maxCoeff() == 0.0);

    Rng rng(3);
    IONetwork uneven = cycle_network(c, Eigen::Vector3d{2.0, 0.5, 1.5});
    const Eigen::MatrixXd ahat = a_hat(uneven);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            CHECK(ahat(i, j) * uneven.sales[j] ==
                  doctest::Approx(uneven.A(i, j) * uneven.sales[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("a_hat of a single autarkic sector is zero") {
    IONetwork net;
    net.A = Eigen::MatrixXd::Zero(1, 1);
    net.alpha_l = Eigen::VectorXd::Ones(1);
    net.beta = Eigen::VectorXd::Ones(1);
    net.b = Eigen::VectorXd::Zero(1);
    net.sales = Eigen::VectorXd::Ones(1);
    CHECK(a_hat(net)(0, 0) == 0.0);
}

TEST_CASE("h_hat basics and the Neumann series") {
    CHECK((h_hat(Eigen::MatrixXd::Zero(3, 3)) - Eigen::MatrixXd::Identity(3, 3))
              .cwiseAbs()
              .maxCoeff() < 1e-14);

    Eigen::MatrixXd half(1, 1);
    half << 0.5;
    CHECK(h_hat(half)(0, 0) == doctest::Approx(2.0).epsilon(1e-12));

    Rng rng(7);
    Eigen::MatrixXd m(4, 4);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) m(i, j) = 0.2 * rng.next_double();
    }
    m *= 0.8 / spectral_radius(m);
    const Eigen::MatrixXd h = h_hat(m);
    Eigen::MatrixXd series = Eigen::MatrixXd::Identity(4, 4);
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(4, 4);
    for (int k = 1; k <= 200; ++k) {
        power = power * m;
        series += power;
    }
    CHECK((h - series).cwiseAbs().maxCoeff() < 1e-10);
    for (int j = 0; j < 4; ++j) CHECK(h(j, j) >= 1.0);

    Eigen::MatrixXd big = Eigen::MatrixXd::Constant(2, 2, 0.8);
    CHECK_THROWS_WITH_AS(h_hat(big), doctest::Contains("not productive"), std::runtime_error);
}

TEST_CASE("equilibrium_prices solves the supply-side system") {
    Eigen::VectorXd b(3);
    b << 0.2, -0.1, 0.4;
    CHECK((equilibrium_prices(Eigen::MatrixXd::Zero(3, 3), b) - b).cwiseAbs().maxCoeff() == 0.0);
    CHECK(equilibrium_prices(0.3 * Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Zero(3))
              .cwiseAbs()
              .maxCoeff() == 0.0);

    // Cycle closed form with the unit-cost constants.
    ThreeSectorCycle c{0.5, 0.25, 0.4, 0.0};
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
    a(0, 1) = c.a12;
    a(1, 2) = c.a23;
    a(2, 0) = c.a31;
    const Eigen::Vector3d alpha = c.alpha_l();
    Eigen::VectorXd lnB(3);
    auto mu = [](double share, double al) { return std::pow(share, -share) * std::pow(al, -al); };
    lnB << std::log(mu(c.a12, alpha[0])), std::log(mu(c.a23, alpha[1])), std::log(mu(c.a31, alpha[2]));
    const Eigen::VectorXd lnp = equilibrium_prices(a, lnB);
    const Eigen::Vector3d expected = three_sector_prices(c);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::exp(lnp[i]) == doctest::Approx(expected[i]).epsilon(1e-12));
    }

    // Price invariance: the solution is a function of (A, b) alone, bitwise.
    const Eigen::VectorXd again = equilibrium_prices(a, lnB);
    CHECK((again - lnp).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("labor_supply formula and corners") {
    CHECK(labor_supply(0.0, 0.0) == 1.0);
    CHECK(labor_supply(0.0, 1.0) == 0.5);
    CHECK(labor_supply(1.0, 1.0) == 0.0);
    CHECK_THROWS_AS(labor_supply(3.0, 1.0), std::domain_error);
    // Decreasing in both arguments.
    CHECK(labor_supply(0.5, 1.0) < labor_supply(0.2, 1.0));
    CHECK(labor_supply(0.5, 2.0) < labor_supply(0.5, 1.0));
}

TEST_CASE("employment_response: no shock, no response") {
    ThreeSectorCycle c{0.5, 0.5, 0.5, 1.0};
    const IONetwork net = cycle_network(c, Eigen::Vector3d::Ones());
    const EmploymentResponse resp = employment_response(net, {0.0, Eigen::Vector3d::Zero()});
    CHECK(resp.dln_l.cwiseAbs().maxCoeff() == 0.0);
    CHECK(resp.own_income.cwiseAbs().maxCoeff() == 0.0);
    CHECK(resp.network.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("the worked 3-sector example: dl_1 = 0.5") {
    ThreeSectorCycle c{0.5, 0.5, 0.5, 1.0};
    const IONetwork net = cycle_network(c, Eigen::Vector3d::Ones());
    const OilShock shock{3.0, Eigen::Vector3d::Zero()};

    const Eigen::Vector3d analytic = three_sector_analytic(c, shock);
    CHECK(analytic[0] == doctest::Approx(0.5).epsilon(1e-12));

    const EmploymentResponse resp = employment_response(net, shock);
    const Eigen::Vector3d levels = to_level_change(net, resp.dln_l);
    CHECK(levels[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK((levels - analytic).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("incomplete cycle: upstream propagation only") {
    ThreeSectorCycle c{0.35, 0.0, 0.45, 0.7};  // a23 = 0 cuts sector 2 out of sector 1's response
    const IONetwork net = cycle_network(c, Eigen::Vector3d{1.2, 0.8, 1.5});
    const double domega = 2.0;
    Eigen::Vector3d dz{0.3, 0.0, -0.2};

    const EmploymentResponse resp = employment_response(net, {domega, dz});
    const Eigen::Vector3d levels = to_level_change(net, resp.dln_l);
    const double expected =
        (1.0 - c.a12) * (domega / (3.0 * (1.0 + c.eta)) * (1.0 + c.a31) + dz[0] + c.a31 * dz[2]);
    CHECK(levels[0] == doctest::Approx(expected).epsilon(1e-12));

    // Sector 1 must load on dz2 with a coefficient of exactly zero.
    Eigen::Vector3d dz_bump = dz;
    dz_bump[1] += 7.0;
    const EmploymentResponse bumped = employment_response(net, {domega, dz_bump});
    CHECK(bumped.dln_l[0] == resp.dln_l[0]);
}

TEST_CASE("channels add up and amplification exceeds the own-income channel") {
    Rng rng(17);
    for (int draw = 0; draw < 200; ++draw) {
        ThreeSectorCycle c;
        c.a12 = 0.1 + 0.8 * rng.next_double();
        c.a23 = 0.1 + 0.8 * rng.next_double();
        c.a31 = 0.1 + 0.8 * rng.next_double();
        c.eta = 2.0 * rng.next_double();
        Eigen::Vector3d sales{0.5 + rng.next_double(), 0.5 + rng.next_double(),
                              0.5 + rng.next_double()};
        const IONetwork net = cycle_network(c, sales);
        const OilShock shock{0.5 + rng.next_double(), Eigen::Vector3d::Zero()};
        const EmploymentResponse resp = employment_response(net, shock);
        CHECK((resp.own_income + resp.own_demand + resp.network - resp.dln_l)
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
        // All-positive cycle with d_omega > 0: the network channel adds to
        // every sector's own-income effect.
        for (int j = 0; j < 3; ++j) CHECK(resp.dln_l[j] > resp.own_income[j]);
    }
}

TEST_CASE("general decomposition equals the closed form on random cycles") {
    Rng rng(23);
    double max_err = 0.0;
    for (int draw = 0; draw < 1000; ++draw) {
        ThreeSectorCycle c;
        c.a12 = 0.05 + 0.9 * rng.next_double();
        c.a23 = 0.05 + 0.9 * rng.next_double();
        c.a31 = 0.05 + 0.9 * rng.next_double();
        c.eta = 3.0 * rng.next_double();
        Eigen::Vector3d sales{0.2 + 2.0 * rng.next_double(), 0.2 + 2.0 * rng.next_double(),
                              0.2 + 2.0 * rng.next_double()};
        OilShock shock;
        shock.d_omega = 2.0 * rng.next_normal();
        shock.dz_tilde = Eigen::Vector3d{rng.next_normal(), rng.next_normal(), rng.next_normal()};

        const IONetwork net = cycle_network(c, sales);
        const Eigen::Vector3d via_matrix = to_level_change(net, employment_response(net, shock).dln_l);
        const Eigen::Vector3d via_formula = three_sector_analytic(c, shock);
        max_err = std::max(max_err, (via_matrix - via_formula).cwiseAbs().maxCoeff());
    }
    CHECK(max_err < 1e-10);
}

TEST_CASE("price invariance and scale invariance") {
    ThreeSectorCycle c{0.4, 0.3, 0.2, 0.5};
    const IONetwork net = cycle_network(c, Eigen::Vector3d{1.0, 2.0, 3.0});

    // Shocks never touch the price system.
    const Eigen::VectorXd p0 = equilibrium_prices(net.A, net.b);
    employment_response(net, {5.0, Eigen::Vector3d{1, 2, 3}});
    const Eigen::VectorXd p1 = equilibrium_prices(net.A, net.b);
    for (int i = 0; i < 3; ++i) CHECK(p0[i] == p1[i]);

    // Scaling sales and the shock together leaves log responses unchanged.
    const OilShock shock{1.5, Eigen::Vector3d{0.2, -0.1, 0.4}};
    const EmploymentResponse base = employment_response(net, shock);
    IONetwork scaled = net;
    scaled.sales *= 4.0;
    const OilShock scaled_shock{shock.d_omega * 4.0, shock.dz_tilde * 4.0};
    const EmploymentResponse resp = employment_response(scaled, scaled_shock);
    CHECK((resp.dln_l - base.dln_l).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("three_sector_analytic without linkages and its guard") {
    ThreeSectorCycle none{0.0, 0.0, 0.0, 0.25};
    OilShock shock{1.2, Eigen::Vector3d{0.1, 0.2, 0.3}};
    const Eigen::Vector3d dl = three_sector_analytic(none, shock);
    const double t_omega = 1.2 / (3.0 * 1.25);
    for (int i = 0; i < 3; ++i) {
        CHECK(dl[i] == doctest::Approx(t_omega + shock.dz_tilde[i]).epsilon(1e-14));
    }

    ThreeSectorCycle toobig{1.0, 1.0, 1.0, 0.0};
    CHECK_THROWS_AS(three_sector_analytic(toobig, shock), std::domain_error);
}

TEST_CASE("network validation catches broken economies") {
    ThreeSectorCycle c{0.5, 0.5, 0.5, 1.0};
    IONetwork net = cycle_network(c, Eigen::Vector3d::Ones());
    IONetwork bad = net;
    bad.alpha_l[0] = 0.7;  // breaks constant returns
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("constant returns"),
                         std::invalid_argument);
    bad = net;
    bad.beta[2] = 0.5;
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("sum to 1"), std::invalid_argument);
    bad = net;
    bad.sales[1] = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
