// Deterministic generator for the bundled Kern County fixture: a monthly
// 1990-2024 oil-market/employment dataset plus quarterly wages, written as
// the CSV inputs the pipeline ingests. Employment levels are anchored to the
// published QCEW head counts for Kern (Jan 1997, Dec 2009, Jan 2010,
// Dec 2024) so counterfactual level paths land on recognizable numbers; the
// rest of the panel is simulated from a fixed stable VAR whose recursive
// impact pattern mirrors the estimated oil-market responses (supply
// disruptions cut production and raise the price, oil-specific demand jumps
// the price and lifts local employment).

#include "kernoil/dates.hpp"
#include "kernoil/rng.hpp"
#include "kernoil/var.hpp"

#include <CLI11.hpp>
#include <Eigen/Dense>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

using namespace kernoil;

namespace {

struct Anchor {
    Month month;
    double level;
};

void write_series_csv(const std::filesystem::path& path, const std::string& column, Freq freq,
                      Month start, const std::vector<std::string>& cells) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << "date," << column << "\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        out << format_month(start.plus(static_cast<int>(i), freq)) << "," << cells[i] << "\n";
    }
}

std::string fmt(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generate the bundled Kern fixture dataset"};
    std::string out_dir = "fixtures/kern";
    std::uint64_t seed = 90210;
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "generator seed");
    CLI11_PARSE(app, argc, argv);

    const Month first{1990, 1};
    const Month last{2024, 12};
    const int T = months_between(first, last) + 1;  // 420
    const int burn = 240;

    // Deviation-form DGP: x = (d ln production, activity index, ln real
    // price, d ln employment).
    Eigen::MatrixXd a1(4, 4), a2(4, 4), impact(4, 4);
    a1 << -0.10, 0.0003, 0.020, 0.0,
           0.0,  1.20,  -5.0,   0.0,
           0.010, 0.0006, 1.25, 0.0,
           0.004, 0.0001, 0.008, 0.25;
    a2 << 0.0, 0.0, 0.0, 0.0,
          0.0, -0.27, 0.0, 0.0,
          0.0, 0.0, -0.30, 0.0,
          0.0, 0.0, 0.0, 0.05;
    impact << 0.018, 0.0, 0.0, 0.0,
              0.6,   6.0, 0.0, 0.0,
             -0.014, 0.009, 0.065, 0.0,
             -0.0009, 0.0006, 0.0028, 0.012;

    {
        VarModel probe;
        probe.p = 2;
        probe.intercept = Eigen::VectorXd::Zero(4);
        probe.coeffs = {a1, a2};
        probe.residuals = Eigen::MatrixXd::Zero(10, 4);
        probe.sigma_u = Eigen::MatrixXd::Identity(4, 4);
        const double rho = companion(probe).max_modulus();
        std::cout << "dgp spectral radius: " << rho << "\n";
        if (rho >= 0.99) {
            std::cerr << "error: generator DGP is too close to the unit circle\n";
            return 1;
        }
    }

    // Oil-specific demand runs persistently positive from 2010 on, the
    // fracking-era pattern that keeps the price elevated and employment
    // above its no-oil-shock counterfactual through the late window.
    const int tilt_start = burn + months_between(first, Month{2010, 1});
    const double tilt = 0.12;

    Rng rng(seed);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(T + burn, 4);
    for (int t = 2; t < T + burn; ++t) {
        Eigen::Vector4d w;
        for (int k = 0; k < 4; ++k) w[k] = rng.next_normal();
        if (t >= tilt_start) w[2] += tilt;
        x.row(t) = (a1 * x.row(t - 1).transpose() + a2 * x.row(t - 2).transpose() + impact * w)
                       .transpose();
    }
    const Eigen::MatrixXd dev = x.bottomRows(T);

    // Oil production: level path from mean growth 0.075 percent per month.
    std::vector<std::string> production(T);
    double prod_level = 60000.0;
    for (int t = 0; t < T; ++t) {
        if (t > 0) prod_level *= std::exp(0.00075 + dev(t, 0));
        production[t] = fmt(prod_level, 1);
    }

    // Real activity: deviation-from-trend index, used as-is.
    std::vector<std::string> activity(T);
    for (int t = 0; t < T; ++t) activity[t] = fmt(dev(t, 1), 2);

    // CPI: smooth trend with a small persistent wiggle.
    std::vector<std::string> cpi_cells(T);
    std::vector<double> cpi(T);
    double cpi_wiggle = 0.0;
    for (int t = 0; t < T; ++t) {
        cpi_wiggle = 0.95 * cpi_wiggle + 0.0012 * rng.next_normal();
        cpi[t] = 127.4 * std::exp(0.00217 * t + cpi_wiggle);
        cpi_cells[t] = fmt(cpi[t], 3);
    }

    // Nominal oil price: real price (deflated units) times CPI.
    std::vector<std::string> price(T);
    for (int t = 0; t < T; ++t) {
        const double real_price = std::exp(-1.65 + dev(t, 2));
        price[t] = fmt(real_price * cpi[t], 3);
    }

    // Employment: simulated growth recentered segment by segment so the
    // level path passes through the published anchors exactly.
    const std::vector<Anchor> anchors = {
        {{1990, 1}, 205000.0}, {{1997, 1}, 223913.0}, {{2009, 12}, 261258.0},
        {{2010, 1}, 266426.0}, {{2024, 12}, 341210.0},
    };
    std::vector<double> growth(T, 0.0);
    for (std::size_t a = 1; a < anchors.size(); ++a) {
        const int seg_first = months_between(first, anchors[a - 1].month) + 1;
        const int seg_last = months_between(first, anchors[a].month);
        const int len = seg_last - seg_first + 1;
        double sim_total = 0.0;
        for (int t = seg_first; t <= seg_last; ++t) sim_total += dev(t, 3);
        const double target = std::log(anchors[a].level / anchors[a - 1].level);
        const double adjust = (target - sim_total) / len;
        for (int t = seg_first; t <= seg_last; ++t) growth[t] = dev(t, 3) + adjust;
    }
    std::vector<std::string> employment(T);
    double log_level_acc = std::log(anchors.front().level);
    for (int t = 0; t < T; ++t) {
        if (t > 0) log_level_acc += growth[t];
        employment[t] = fmt(std::round(std::exp(log_level_acc)), 0);
    }

    // Quarterly average weekly wage: real wage growth loads negatively on
    // quarter-averaged oil-specific shocks, then reflated by quarterly CPI.
    const int n_q = T / 3;
    std::vector<std::string> wages(n_q);
    double real_wage = 3.10;
    for (int q = 0; q < n_q; ++q) {
        double zeta1 = 0.0, zeta3 = 0.0;
        for (int m = 0; m < 3; ++m) {
            // Quarter-averaged innovations proxied by the simulated shocks'
            // effect on the two oil variables.
            zeta1 += dev(3 * q + m, 0) / 3.0;
            zeta3 += dev(3 * q + m, 2) / 3.0;
        }
        if (q > 0) {
            const double g = 0.0017 - 0.010 * zeta3 + 0.004 * zeta1 + 0.004 * rng.next_normal();
            real_wage *= std::exp(g);
        }
        const double cpi_q = (cpi[3 * q] + cpi[3 * q + 1] + cpi[3 * q + 2]) / 3.0;
        wages[static_cast<std::size_t>(q)] = fmt(real_wage * cpi_q, 2);
    }

    const std::filesystem::path dir = out_dir;
    std::filesystem::create_directories(dir);
    write_series_csv(dir / "oil_production.csv", "production", Freq::monthly, first, production);
    write_series_csv(dir / "real_activity.csv", "activity", Freq::monthly, first, activity);
    write_series_csv(dir / "oil_price_nominal.csv", "price", Freq::monthly, first, price);
    write_series_csv(dir / "cpi.csv", "cpi", Freq::monthly, first, cpi_cells);
    write_series_csv(dir / "employment.csv", "employment", Freq::monthly, first, employment);
    write_series_csv(dir / "wages_nominal.csv", "wage", Freq::quarterly, first, wages);

    std::cout << "wrote " << T << " monthly rows and " << n_q << " quarterly rows to " << dir
              << "\n";
    std::cout << "employment " << format_month(first) << ": " << employment.front() << ", "
              << format_month(last) << ": " << employment.back() << "\n";
    return 0;
}
