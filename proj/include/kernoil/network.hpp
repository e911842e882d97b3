#pragma once

#include <Eigen/Dense>

#include <string>

namespace kernoil {

/// Multisector input-output economy. A(i,j) is sector i's expenditure on
/// input j as a fraction of sector i's sales; rescaling by buyer sales gives
/// the propagation matrix a_hat. Sales are observed inputs, not solved for.
struct IONetwork {
    Eigen::MatrixXd A;        // n x n expenditure shares a_ij
    Eigen::VectorXd alpha_l;  // labor shares, constant returns with each row of A
    Eigen::VectorXd beta;     // consumption shares, sums to 1
    double eta = 0.0;         // leisure preference
    Eigen::VectorXd b;        // log productivity constants ln B_j
    Eigen::VectorXd sales;    // nominal sales p_j y_j

    Eigen::Index n() const { return A.rows(); }
    void validate() const;
};

/// Exogenous nominal changes induced by an oil-price move: household oil
/// income and the oil sector's input purchases.
struct OilShock {
    double d_omega = 0.0;
    Eigen::VectorXd dz_tilde;
};

/// Per-sector log employment change and its three-channel split.
struct EmploymentResponse {
    Eigen::VectorXd dln_l;
    Eigen::VectorXd own_income;
    Eigen::VectorXd own_demand;
    Eigen::VectorXd network;
};

/// Largest-modulus eigenvalue of a nonnegative matrix by power iteration.
double spectral_radius(const Eigen::MatrixXd& m, double tol = 1e-10, int max_iter = 10000);

/// a_hat(i,j) = A(i,j) * sales_i / sales_j.
Eigen::MatrixXd a_hat(const IONetwork& net);

/// Leontief-type multiplier (I - a_hat)^{-1}; requires spectral radius < 1.
Eigen::MatrixXd h_hat(const Eigen::MatrixXd& a_hat_matrix);

/// ln p = (I - A)^{-1} b; prices depend on the supply side only.
Eigen::VectorXd equilibrium_prices(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

/// l = (1 - omega * eta) / (1 + eta); throws when outside [0, 1].
double labor_supply(double omega, double eta);

EmploymentResponse employment_response(const IONetwork& net, const OilShock& shock);

/// Three-sector cycle: sector 1 buys from 2, 2 from 3, 3 from 1, with
/// consumption shares of one third and constant returns (alpha_i = 1 - a of
/// the input each sector buys).
struct ThreeSectorCycle {
    double a12 = 0.0;
    double a23 = 0.0;
    double a31 = 0.0;
    double eta = 0.0;

    Eigen::Vector3d alpha_l() const { return {1.0 - a12, 1.0 - a23, 1.0 - a31}; }
};

/// Closed-form level changes of sectoral employment, dl_i = alpha_i dY_i with
/// the cycle amplification 1 / (1 - a31 a23 a12).
Eigen::Vector3d three_sector_analytic(const ThreeSectorCycle& cycle, const OilShock& shock);

/// Closed-form equilibrium prices of the cycle, p_i = gamma_i^{1/(1 - a31 a23 a12)}
/// with the unit-cost constants mu_i = a^-a * alpha^-alpha.
Eigen::Vector3d three_sector_prices(const ThreeSectorCycle& cycle);

}  // namespace kernoil
