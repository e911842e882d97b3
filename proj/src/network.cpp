#include "kernoil/network.hpp"

#include <Eigen/LU>

#include <cmath>
#include <stdexcept>

namespace kernoil {

void IONetwork::validate() const {
    const Eigen::Index size = n();
    if (A.cols() != size || alpha_l.size() != size || beta.size() != size || b.size() != size ||
        sales.size() != size) {
        throw std::invalid_argument("network: inconsistent dimensions");
    }
    if (eta < 0.0) throw std::invalid_argument("network: eta must be nonnegative");
    for (Eigen::Index j = 0; j < size; ++j) {
        if (!(alpha_l[j] > 0.0)) {
            throw std::invalid_argument("network: labor share of sector " + std::to_string(j + 1) +
                                        " must be positive");
        }
        if (!(sales[j] > 0.0)) {
            throw std::invalid_argument("network: sales of sector " + std::to_string(j + 1) +
                                        " must be positive");
        }
        if (beta[j] < 0.0) {
            throw std::invalid_argument("network: consumption share of sector " +
                                        std::to_string(j + 1) + " is negative");
        }
        if ((A.row(j).array() < 0.0).any()) {
            throw std::invalid_argument("network: negative input share in sector " +
                                        std::to_string(j + 1));
        }
        // Constant returns: labor share plus input shares exhaust sales.
        if (std::abs(alpha_l[j] + A.row(j).sum() - 1.0) > 1e-9) {
            throw std::invalid_argument("network: sector " + std::to_string(j + 1) +
                                        " violates constant returns (alpha + sum a != 1)");
        }
    }
    if (std::abs(beta.sum() - 1.0) > 1e-9) {
        throw std::invalid_argument("network: consumption shares must sum to 1");
    }
    Eigen::MatrixXd rescaled(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
        for (Eigen::Index j = 0; j < size; ++j) rescaled(i, j) = A(i, j) * sales[i] / sales[j];
    }
    if (spectral_radius(rescaled) >= 1.0) {
        throw std::invalid_argument("network: rescaled input-output matrix is not a contraction");
    }
}

double spectral_radius(const Eigen::MatrixXd& m, double tol, int max_iter) {
    const Eigen::Index n = m.rows();
    if (n == 0) return 0.0;
    // Shift by the identity so periodic cycles cannot stall the iteration;
    // for a nonnegative matrix the Perron root shifts by exactly one.
    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd y = m * x + x;
        const double norm = y.lpNorm<1>();
        if (norm == 0.0) return 0.0;
        const double lambda_new = norm;
        x = y / norm;
        if (std::abs(lambda_new - lambda) < tol * std::max(1.0, lambda_new)) {
            return lambda_new - 1.0;
        }
        lambda = lambda_new;
    }
    return lambda - 1.0;
}

Eigen::MatrixXd a_hat(const IONetwork& net) {
    const Eigen::Index n = net.n();
    for (Eigen::Index j = 0; j < n; ++j) {
        if (!(net.sales[j] > 0.0)) {
            throw std::invalid_argument("a_hat: zero sales in sector " + std::to_string(j + 1));
        }
    }
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            out(i, j) = net.A(i, j) * net.sales[i] / net.sales[j];
        }
    }
    return out;
}

Eigen::MatrixXd h_hat(const Eigen::MatrixXd& a_hat_matrix) {
    const double rho = spectral_radius(a_hat_matrix);
    if (rho >= 1.0) {
        throw std::runtime_error("h_hat: economy is not productive (spectral radius " +
                                 std::to_string(rho) + " >= 1)");
    }
    const Eigen::Index n = a_hat_matrix.rows();
    return (Eigen::MatrixXd::Identity(n, n) - a_hat_matrix).partialPivLu().solve(
        Eigen::MatrixXd::Identity(n, n));
}

Eigen::VectorXd equilibrium_prices(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    const double rho = spectral_radius(A);
    if (rho >= 1.0) {
        throw std::runtime_error("equilibrium_prices: I - A is singular (spectral radius " +
                                 std::to_string(rho) + " >= 1)");
    }
    const Eigen::Index n = A.rows();
    return (Eigen::MatrixXd::Identity(n, n) - A).partialPivLu().solve(b);
}

double labor_supply(double omega, double eta) {
    const double l = (1.0 - omega * eta) / (1.0 + eta);
    if (l < 0.0 || l > 1.0) {
        throw std::domain_error("labor_supply: result " + std::to_string(l) +
                                " is outside [0, 1]");
    }
    return l;
}

EmploymentResponse employment_response(const IONetwork& net, const OilShock& shock) {
    net.validate();
    const Eigen::Index n = net.n();
    if (shock.dz_tilde.size() != n) {
        throw std::invalid_argument("employment_response: dz vector has wrong length");
    }
    const Eigen::MatrixXd hhat = h_hat(a_hat(net));

    EmploymentResponse resp;
    resp.own_income = net.beta * (shock.d_omega / (1.0 + net.eta));
    resp.own_income.array() /= net.sales.array();
    resp.own_demand = shock.dz_tilde.cwiseQuotient(net.sales);
    const Eigen::VectorXd v = resp.own_income + resp.own_demand;

    // Network channel: v picked up through the off-unit part of the multiplier.
    resp.network.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            acc += v[i] * (hhat(i, j) - (i == j ? 1.0 : 0.0));
        }
        resp.network[j] = acc;
    }
    resp.dln_l = hhat.transpose() * v;
    return resp;
}

Eigen::Vector3d three_sector_analytic(const ThreeSectorCycle& cycle, const OilShock& shock) {
    if (shock.dz_tilde.size() != 3) {
        throw std::invalid_argument("three_sector_analytic: dz vector must have 3 entries");
    }
    const double loop = cycle.a31 * cycle.a23 * cycle.a12;
    if (loop >= 1.0) {
        throw std::domain_error("three_sector_analytic: cycle product must be < 1");
    }
    const double amp = 1.0 / (1.0 - loop);
    const double t_omega = shock.d_omega / (3.0 * (1.0 + cycle.eta));
    const double dz1 = shock.dz_tilde[0];
    const double dz2 = shock.dz_tilde[1];
    const double dz3 = shock.dz_tilde[2];

    Eigen::Vector3d dy;
    dy[0] = amp * (t_omega * (1.0 + cycle.a31 + cycle.a31 * cycle.a23) +
                   dz1 + cycle.a31 * dz3 + cycle.a31 * cycle.a23 * dz2);
    dy[1] = amp * (t_omega * (1.0 + cycle.a12 + cycle.a12 * cycle.a31) +
                   dz2 + cycle.a12 * dz1 + cycle.a12 * cycle.a31 * dz3);
    dy[2] = amp * (t_omega * (1.0 + cycle.a23 + cycle.a23 * cycle.a12) +
                   dz3 + cycle.a23 * dz2 + cycle.a23 * cycle.a12 * dz1);
    return cycle.alpha_l().cwiseProduct(dy);
}

Eigen::Vector3d three_sector_prices(const ThreeSectorCycle& cycle) {
    const double loop = cycle.a31 * cycle.a23 * cycle.a12;
    if (loop >= 1.0) {
        throw std::domain_error("three_sector_prices: cycle product must be < 1");
    }
    const Eigen::Vector3d alpha = cycle.alpha_l();
    auto mu = [](double a, double al) { return std::pow(a, -a) * std::pow(al, -al); };
    const double mu1 = mu(cycle.a12, alpha[0]);
    const double mu2 = mu(cycle.a23, alpha[1]);
    const double mu3 = mu(cycle.a31, alpha[2]);

    const double expo = 1.0 / (1.0 - loop);
    Eigen::Vector3d p;
    p[0] = std::pow(mu1 * std::pow(mu2, cycle.a12) * std::pow(mu3, cycle.a12 * cycle.a23), expo);
    p[1] = std::pow(mu2 * std::pow(mu3, cycle.a23) * std::pow(mu1, cycle.a23 * cycle.a31), expo);
    p[2] = std::pow(mu3 * std::pow(mu1, cycle.a31) * std::pow(mu2, cycle.a31 * cycle.a12), expo);
    return p;
}

}  // namespace kernoil
