#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pbkg/bessel.hpp"
#include "pbkg/config.hpp"
#include "pbkg/correlators.hpp"
#include "pbkg/errors.hpp"
#include "pbkg/field.hpp"
#include "pbkg/testfn.hpp"
#include "pbkg/verify.hpp"

namespace {

using namespace pbkg;

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::string format;
    std::uint64_t seed = 0;
    double tol = 0.0;
    bool seed_set = false, tol_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "config file (key=value with [sections])");
    cmd->add_option("--out", opts.out_path, "output path (default stdout)");
    cmd->add_option("--format", opts.format, "csv|json");
    cmd->add_option("--seed", opts.seed, "probe-state seed")->each([&](const std::string&) {
        opts.seed_set = true;
    });
    cmd->add_option("--tol", opts.tol, "tolerance override")->each([&](const std::string&) {
        opts.tol_set = true;
    });
}

RunConfig resolve_config(const CommonOpts& opts) {
    RunConfig config;
    if (!opts.config_path.empty()) config = load_config_file(opts.config_path);
    if (!opts.format.empty()) config.format = opts.format;
    if (!opts.out_path.empty()) config.out_path = opts.out_path;
    if (opts.seed_set) config.seed = opts.seed;
    if (opts.tol_set) {
        config.tol = opts.tol;
        config.quad.abs_tol = opts.tol;
    }
    config.validate();
    return config;
}

int cmd_verify(const CommonOpts& opts) {
    const RunConfig config = resolve_config(opts);
    const auto results = run_verify_suite(config);
    write_output(config.out_path, render_verify_report(results));
    return all_passed(results) ? 0 : 1;
}

int cmd_scan(const CommonOpts& opts, const std::string& thetas, double x_min, double x_max,
             double x_step) {
    const RunConfig config = resolve_config(opts);
    const auto theta_list = parse_angle_list(thetas);
    if (!(x_step > 0.0) || x_max < x_min) throw usage_error("scan: bad x range");
    Table table;
    table.columns = {"theta", "x", "re", "im", "err", "status"};
    for (double theta_value : theta_list) {
        const ThetaParam theta(theta_value);
        for (double x = x_min; x <= x_max + 1e-12; x += x_step) {
            std::vector<Table::Cell> row{theta_value, x};
            try {
                const auto res = f2_equal_time(theta, x, x, config.mass, config.quad);
                row.emplace_back(res.value.real());
                row.emplace_back(res.value.imag());
                row.emplace_back(res.abs_error_estimate);
                row.emplace_back(std::string("OK"));
            } catch (const divergence_error& e) {
                // divergent cell: report the measured log slope and whatever
                // finite part exists (see README for the column convention)
                const auto cutoffs = default_scan_cutoffs(config.mass);
                const auto scan = divergence_scan(theta, x, config.mass, cutoffs, config.quad);
                row.emplace_back(scan.slope);
                row.emplace_back(e.has_finite_part() ? e.finite_part().imag() : 0.0);
                row.emplace_back(scan.fit_residual);
                row.emplace_back(std::string("DIV"));
            }
            table.rows.push_back(std::move(row));
        }
    }
    write_output(config.out_path, table.render(config.format));
    return 0;
}

int cmd_smear(const CommonOpts& opts, const std::string& n_list_text,
              const std::string& y_list_text) {
    const RunConfig config = resolve_config(opts);
    const auto n_list = parse_int_list(n_list_text);
    const auto y_list = parse_double_list(y_list_text);
    if (n_list.empty() || y_list.empty()) throw usage_error("smear: empty lists");
    const TestFunction mother = TestFunction::bump(0.0, 1.0, 1.0);
    Table table;
    table.columns = {"n", "y", "re", "im", "oracle_im", "rel_dev"};
    for (double y : y_list) {
        const Complex oracle = Complex(0.0, 1.0) * config.mass *
                               bessel_k1(2.0 * config.mass * std::fabs(y)) /
                               (4.0 * M_PI * std::fabs(y));
        for (int n : n_list) {
            const auto member = delta_member(DeltaSequence(mother, n));
            const Complex v = smear_g2(member, y, config.mass, config.quad);
            table.rows.push_back({static_cast<double>(n), y, v.real(), v.imag(), oracle.imag(),
                                  std::abs(v - oracle) / std::abs(oracle)});
        }
    }
    write_output(config.out_path, table.render(config.format));
    return 0;
}

int cmd_divergence(const CommonOpts& opts, const std::string& thetas, double x) {
    const RunConfig config = resolve_config(opts);
    const auto theta_list = parse_angle_list(thetas);
    Table table;
    table.columns = {"theta", "slope", "intercept", "fit_residual", "expected_slope", "abs_dev"};
    const auto cutoffs = default_scan_cutoffs(config.mass);
    for (double theta_value : theta_list) {
        const ThetaParam theta(theta_value);
        const auto scan = divergence_scan(theta, x, config.mass, cutoffs, config.quad);
        const double expected = theta.cos_2theta() / (2.0 * M_PI);
        table.rows.push_back({theta_value, scan.slope, scan.intercept, scan.fit_residual,
                              expected, std::fabs(scan.slope - expected)});
    }
    write_output(config.out_path, table.render(config.format));
    return 0;
}

int cmd_lattice(const CommonOpts& opts, const std::string& dk_list_text, double k_max, double x,
                const std::string& theta_text) {
    const RunConfig config = resolve_config(opts);
    const auto dk_list = parse_double_list(dk_list_text);
    if (dk_list.empty()) throw usage_error("lattice: empty refinement list");
    const ThetaParam theta(theta_text.empty() ? config.theta : parse_angle(theta_text));
    Table table;
    table.columns = {"dk", "modes", "re", "im", "route_gap", "abs_err_vs_oracle", "order_est"};
    const Complex oracle =
        (theta.is_boundary() ? Complex(0.0, 1.0) : Complex(theta.cos_2theta(), theta.sin_2theta())) *
        bessel_k0(2.0 * config.mass * std::fabs(x)) / (2.0 * M_PI);
    std::vector<Complex> values;
    for (double dk : dk_list) {
        const int modes = 2 * static_cast<int>(std::llround(k_max / dk)) + 1;
        const ModeLattice lattice(modes, dk, config.mass, config.lattice_local_dim);
        const auto res = two_point_routes(theta, x, 0.0, x, 0.0, lattice);
        values.push_back(res.value);
        double order = 0.0;
        if (values.size() >= 3) {
            const auto n = values.size();
            const double d1 = std::abs(values[n - 2] - values[n - 3]);
            const double d2 = std::abs(values[n - 1] - values[n - 2]);
            if (d2 > 0.0) order = std::log2(d1 / d2);
        }
        table.rows.push_back({dk, static_cast<double>(modes), res.value.real(),
                              res.value.imag(), res.route_gap, std::abs(res.value - oracle),
                              order});
    }
    write_output(config.out_path, table.render(config.format));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-bosonic Klein-Gordon field laboratory"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string thetas = "0,0.125pi,0.25pi";
    std::string n_list = "4,8,16,32";
    std::string y_list = "0.5,1,2";
    std::string dk_list = "0.1,0.05,0.025";
    std::string theta_text;
    double x_min = 0.1, x_max = 3.0, x_step = 0.1;
    double div_x = 0.5, lat_x = 0.5, k_max = 40.0;

    auto* verify = app.add_subcommand("verify", "run the full identity/consistency suite");
    add_common(verify, opts);

    auto* scan = app.add_subcommand("scan", "equal-point two-point function over (theta, x)");
    add_common(scan, opts);
    scan->add_option("--thetas", thetas, "comma list of angles (accepts 0.25pi forms)");
    scan->add_option("--x-min", x_min);
    scan->add_option("--x-max", x_max);
    scan->add_option("--x-step", x_step);

    auto* smear = app.add_subcommand("smear", "delta-sequence smearing of the momentum kernel");
    add_common(smear, opts);
    smear->add_option("--n-list", n_list, "delta-sequence indices");
    smear->add_option("--y-list", y_list, "evaluation points");

    auto* divergence = app.add_subcommand("divergence", "log-divergence slopes over theta");
    add_common(divergence, opts);
    divergence->add_option("--thetas", thetas);
    divergence->add_option("--x", div_x);

    auto* lattice = app.add_subcommand("lattice", "lattice-to-continuum refinement study");
    add_common(lattice, opts);
    lattice->add_option("--dk-list", dk_list, "spacings, halving");
    lattice->add_option("--k-max", k_max, "fixed momentum window edge");
    lattice->add_option("--x", lat_x, "equal-point position");
    lattice->add_option("--theta", theta_text, "angle override (default: config angle)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return cmd_verify(opts);
        if (scan->parsed()) return cmd_scan(opts, thetas, x_min, x_max, x_step);
        if (smear->parsed()) return cmd_smear(opts, n_list, y_list);
        if (divergence->parsed()) return cmd_divergence(opts, thetas, div_x);
        if (lattice->parsed()) return cmd_lattice(opts, dk_list, k_max, lat_x, theta_text);
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
