// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion.  Exit code = number of
// failing criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "pbkg/bessel.hpp"
#include "pbkg/config.hpp"
#include "pbkg/correlators.hpp"
#include "pbkg/errors.hpp"
#include "pbkg/field.hpp"
#include "pbkg/modespace.hpp"
#include "pbkg/pseudoboson.hpp"
#include "pbkg/quadrature.hpp"
#include "pbkg/testfn.hpp"
#include "pbkg/verify.hpp"

using namespace pbkg;

namespace {

const Complex kI{0.0, 1.0};
const double kQuarterPi = M_PI / 4.0;
const double kTwoPi = 2.0 * M_PI;

struct Criterion {
    int id;
    std::string title;
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        detail << (ok ? "  ok:   " : "  FAIL: ") << what << "\n";
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

QuadSpec default_quad() {
    QuadSpec q;
    q.abs_tol = 1e-10;
    return q;
}

std::string fmt(double v) { return format_double(v); }

Criterion criterion_1_bessel_identity() {
    Criterion c{1, "boundary-angle two-point values match (i/2pi) K0(2m|x|) to 1e-8"};
    const auto start = std::chrono::steady_clock::now();
    const auto quad = default_quad();
    double worst = 0.0;
    for (double m : {0.5, 1.0, 2.0}) {
        for (double x : {0.1, 0.25, 0.5, 1.0, 2.0, 5.0}) {
            const auto res = f2_pi4(x, m, quad);
            worst = std::max(worst, res.rel_diff);
        }
    }
    const double elapsed = seconds_since(start);
    c.require(worst <= 1e-8, "max relative difference " + fmt(worst) + " <= 1e-8 over 18 points");
    c.require(elapsed < 5.0, "runtime " + fmt(elapsed) + " s < 5 s");
    return c;
}

Criterion criterion_2_divergence_dichotomy() {
    Criterion c{2, "log-divergence slope equals cos(2 theta)/(2 pi) within 1%"};
    const auto start = std::chrono::steady_clock::now();
    const auto quad = default_quad();
    const auto cutoffs = default_scan_cutoffs(1.0);
    double worst_rel = 0.0;
    for (double theta : {0.0, M_PI / 8.0, M_PI / 6.0, 0.2}) {
        const auto scan = divergence_scan(ThetaParam(theta), 0.5, 1.0, cutoffs, quad);
        const double expected = std::cos(2.0 * theta) / kTwoPi;
        worst_rel = std::max(worst_rel, std::fabs(scan.slope - expected) / expected);
    }
    const auto boundary = divergence_scan(ThetaParam(kQuarterPi), 0.5, 1.0, cutoffs, quad);
    const auto finite = f2_equal_point_split(ThetaParam(kQuarterPi), 0.5, 1.0, quad);
    const Complex oracle = kI * bessel_k0(1.0) / kTwoPi;
    const double elapsed = seconds_since(start);
    c.require(worst_rel <= 1e-2, "max slope deviation " + fmt(worst_rel) + " <= 1e-2");
    c.require(std::fabs(boundary.slope) <= 1e-3,
              "boundary slope " + fmt(boundary.slope) + " <= 1e-3");
    c.require(std::abs(finite.finite_part - oracle) <= 1e-8,
              "boundary finite part matches the criterion-1 value to 1e-8 (diff " +
                  fmt(std::abs(finite.finite_part - oracle)) + ")");
    c.require(elapsed < 10.0, "runtime " + fmt(elapsed) + " s < 10 s");
    return c;
}

Criterion criterion_3_bosonic_reduction() {
    Criterion c{3, "theta = 0 equal-time function reduces to the free kernel"};
    const auto quad = default_quad();
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> dist(-2.5, 2.5);
    double worst_pair = 0.0, worst_oracle = 0.0;
    for (int i = 0; i < 10; ++i) {
        double x = dist(rng), y = dist(rng);
        if (std::fabs(x - y) < 0.2) y += (y >= x ? 0.4 : -0.4);
        const double t = dist(rng);
        const auto f2 = f2_equal_time(ThetaParam(0.0), x, y, 1.0, quad);
        const auto dp = delta_plus(x, y, t, t, 1.0, quad);
        worst_pair = std::max(worst_pair, std::abs(f2.value - dp.value));
        const double oracle = bessel_k0(std::fabs(x - y)) / kTwoPi;
        worst_oracle = std::max({worst_oracle, std::abs(f2.value - oracle),
                                 std::abs(dp.value - oracle)});
    }
    c.require(worst_pair <= 1e-10,
              "two-point vs free kernel gap " + fmt(worst_pair) + " <= 1e-10 on 10 pairs");
    c.require(worst_oracle <= 1e-8,
              "both routes vs (1/2pi) K0(m|x-y|): " + fmt(worst_oracle) + " <= 1e-8");
    return c;
}

Criterion criterion_4_exact_algebra() {
    Criterion c{4, "deformed-pair matrix identities are exact at every truncation"};
    double ab = 0.0, quad_id = 0.0, mirror = 0.0;
    for (double theta : {0.1, 0.3, kQuarterPi, 0.7}) {
        for (int d : {2, 8, 32}) {
            const auto pb = pb_transform(ThetaParam(theta), d);
            const auto pb_neg = pb_transform(ThetaParam(-theta), d);
            const Eigen::MatrixXcd cc = truncated_annihilator(d);
            const Eigen::MatrixXcd cd = cc.adjoint();
            ab = std::max(ab, ((pb.A * pb.B - pb.B * pb.A) - (cc * cd - cd * cc))
                                  .cwiseAbs()
                                  .maxCoeff());
            quad_id = std::max(quad_id, ((pb.B.adjoint() * pb.B + pb.A.adjoint() * pb.A) -
                                         (cc * cd + cd * cc))
                                            .cwiseAbs()
                                            .maxCoeff());
            mirror = std::max(mirror, (pb.B.adjoint() - pb_neg.A).cwiseAbs().maxCoeff());
        }
    }
    c.require(ab <= 1e-13, "[A,B] - [C,C^dag] entrywise " + fmt(ab) + " <= 1e-13");
    c.require(quad_id <= 1e-13,
              "B^dag B + A^dag A - (C C^dag + C^dag C) " + fmt(quad_id) + " <= 1e-13");
    c.require(mirror <= 1e-13, "B^dag - A(-theta) " + fmt(mirror) + " <= 1e-13");

    const ModeLattice lattice(7, 0.5, 1.0, 3);
    const auto vac = vacuum(lattice);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    StateVector probe{lattice, Eigen::VectorXcd::Zero(static_cast<long>(lattice.state_dim()))};
    for (long i = 0; i < probe.amplitudes.size(); ++i) {
        bool safe = true;
        for (int j = 0; j < lattice.mode_count() && safe; ++j) {
            safe = probe.occupation(static_cast<std::uint64_t>(i), j) <= 1;
        }
        if (safe) probe.amplitudes[i] = Complex(dist(rng), dist(rng));
    }
    probe.amplitudes.normalize();
    double theta_dep = 0.0;
    for (const StateVector* state : {&vac, static_cast<const StateVector*>(&probe)}) {
        Complex first{};
        bool have_first = false;
        for (double theta : {0.0, 0.1, 0.3, kQuarterPi, 0.7}) {
            const auto h = hamiltonian_expectation(ThetaParam(theta), lattice, *state);
            if (!have_first) {
                first = h.deformed;
                have_first = true;
            }
            theta_dep = std::max(theta_dep, std::abs(h.deformed - first));
        }
    }
    c.require(theta_dep <= 1e-12,
              "Hamiltonian expectation theta-independent: " + fmt(theta_dep) + " <= 1e-12");
    return c;
}

Criterion criterion_5_biorthogonality() {
    Criterion c{5, "biorthogonal family, ladder relations, boundary guard, spectra"};
    const ThetaParam theta(0.2);
    const int d = 64, nmax = 5;
    const auto family = pb_family(theta, d, nmax);
    const double gram_defect =
        (gram_matrix(family) - Eigen::MatrixXcd::Identity(nmax + 1, nmax + 1))
            .cwiseAbs()
            .maxCoeff();
    c.require(gram_defect <= 1e-8, "Gram defect " + fmt(gram_defect) + " <= 1e-8");

    const auto pb = pb_transform(theta, d);
    double ladder = 0.0;
    for (int n = 1; n <= nmax; ++n) {
        ladder = std::max(ladder,
                          (pb.A * family.phis[n] - std::sqrt(double(n)) * family.phis[n - 1])
                              .norm());
        ladder = std::max(ladder, (pb.B * family.phis[n - 1] -
                                   std::sqrt(double(n)) * family.phis[n])
                                      .norm());
        ladder = std::max(ladder, (pb.B.adjoint() * family.psis[n] -
                                   std::sqrt(double(n)) * family.psis[n - 1])
                                      .norm());
    }
    c.require(ladder <= 1e-8, "ladder residuals " + fmt(ladder) + " <= 1e-8");

    bool boundary_raises = false;
    try {
        pb_vacua(ThetaParam(kQuarterPi), d);
    } catch (const non_normalizable_error&) {
        boundary_raises = true;
    }
    c.require(boundary_raises, "boundary angle raises non_normalizable_error");

    const auto h = swanson_hamiltonian(theta, d);
    const double freq = 1.0 / std::cos(0.4);
    double resid = 0.0;
    for (int n = 0; n <= 3; ++n) {
        resid = std::max(resid, (h * family.phis[n] - freq * (n + 0.5) * family.phis[n]).norm());
    }
    c.require(resid <= 1e-6, "Swanson eigen-residuals " + fmt(resid) + " <= 1e-6 for n <= 3");
    return c;
}

Criterion criterion_6_lattice_to_continuum() {
    Criterion c{6, "fixed-window lattice refinement toward (i/2pi) K0(1)"};
    const auto start = std::chrono::steady_clock::now();
    const ThetaParam theta(kQuarterPi);
    const Complex oracle = kI * bessel_k0(1.0) / kTwoPi;
    const double k_max = 40.0;
    std::vector<Complex> values;
    double worst_gap = 0.0;
    for (double dk : {0.1, 0.05, 0.025}) {
        const int modes = 2 * static_cast<int>(std::llround(k_max / dk)) + 1;
        const ModeLattice lattice(modes, dk, 1.0, 2);
        const auto res = two_point_routes(theta, 0.5, 0.0, 0.5, 0.0, lattice);
        values.push_back(res.value);
        worst_gap = std::max(worst_gap, res.route_gap);
        c.detail << "  info: dk=" << fmt(dk) << " M=" << modes << " value=("
                 << fmt(res.value.real()) << ", " << fmt(res.value.imag()) << ") |err vs oracle|="
                 << fmt(std::abs(res.value - oracle)) << "\n";
    }
    const double d1 = std::abs(values[1] - values[0]);
    const double d2 = std::abs(values[2] - values[1]);
    const double order = (d2 > 0.0) ? std::log2(d1 / d2) : 99.0;
    const double final_rel = std::abs(values.back() - oracle) / std::abs(oracle);
    const double elapsed = seconds_since(start);
    c.require(worst_gap <= 1e-12,
              "ladder and contraction routes agree: " + fmt(worst_gap) + " <= 1e-12");
    c.require(order >= 2.0, "observed order " + fmt(order) + " >= 2");
    c.require(final_rel <= 1e-2, "final relative error " + fmt(final_rel) + " <= 1e-2");
    c.require(elapsed < 60.0, "runtime " + fmt(elapsed) + " s < 60 s");
    return c;
}

Criterion criterion_7_one_point() {
    Criterion c{7, "one-point functions vanish on the lattice"};
    const ModeLattice lattice(7, 0.5, 1.0, 2);
    const auto vac = vacuum(lattice);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-kQuarterPi, kQuarterPi);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const ThetaParam theta(angle(rng));
        const double x = coord(rng), t = coord(rng);
        const FieldOperator phi(lattice, theta, FieldKind::phi, x, t);
        const FieldOperator pi(lattice, theta, FieldKind::pi, x, t);
        worst = std::max(worst, std::abs(inner(vac, apply_field(phi, vac))));
        worst = std::max(worst, std::abs(inner(vac, apply_field(pi, vac))));
    }
    c.require(worst <= 1e-14, "max |<e0, Phi e0>|, |<e0, Pi e0>| = " + fmt(worst) + " <= 1e-14");
    return c;
}

Criterion criterion_8_equal_time_structure() {
    Criterion c{8, "equal-time commutator structure on the lattice"};
    const ModeLattice lattice(9, 0.5, 1.0, 3);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> angle(-kQuarterPi, kQuarterPi);
    std::uniform_real_distribution<double> coord(-1.5, 1.5);

    double phi_phi = 0.0, phi_pi = 0.0, phidag_t0 = 0.0;
    for (int i = 0; i < 5; ++i) {
        const ThetaParam theta(angle(rng));
        const double x = coord(rng), y = coord(rng), t = coord(rng);
        const auto comm = equal_time_commutator_check(theta, x, y, t, lattice);
        phi_phi = std::max(phi_phi, std::abs(comm.phi_phi));
        phi_pi = std::max(phi_pi, std::abs(comm.phi_pi));
        const auto comm0 = equal_time_commutator_check(theta, x, y, 0.0, lattice);
        phidag_t0 = std::max(phidag_t0, std::abs(comm0.phi_phidag));
    }
    c.require(phi_phi <= 1e-12, "[Phi, Phi] = " + fmt(phi_phi) + " <= 1e-12");
    c.require(phidag_t0 <= 1e-12, "[Phi, Phi^dag] at t=0: " + fmt(phidag_t0) + " <= 1e-12");
    c.require(phi_pi <= 1e-10, "[Phi, Pi] vs i delta kernel: " + fmt(phi_pi) + " <= 1e-10");

    // boundary angle, t = 0.5: the mode-algebra kernel from the continuum
    // module must match the lattice mode sum within the lattice error
    const ThetaParam boundary(kQuarterPi);
    const auto local = equal_time_commutator_check(boundary, 0.5, 0.5, 0.5, lattice);
    const Complex small_sum = phi_phidag_kernel_mode_sum(boundary, 0.5, 0.5, 0.5, lattice);
    c.require(std::abs(local.phi_phidag - small_sum) <= 1e-12,
              "operator route equals the scalar mode sum: " +
                  fmt(std::abs(local.phi_phidag - small_sum)) + " <= 1e-12");

    const auto kernels = comm_kernels(boundary, 0.5, 0.5, 0.5, 1.0, default_quad());
    const ModeLattice fine(16001, 0.025, 1.0, 2);
    const ModeLattice coarse(8001, 0.05, 1.0, 2);
    const Complex fine_sum = phi_phidag_kernel_mode_sum(boundary, 0.5, 0.5, 0.5, fine);
    const Complex coarse_sum = phi_phidag_kernel_mode_sum(boundary, 0.5, 0.5, 0.5, coarse);
    const double lattice_err = 3.0 * std::abs(fine_sum - coarse_sum) +
                               2.0 / (fine.k_max() * 4.0 * M_PI) + 1e-4;
    c.require(std::abs(kernels.phi_mode - fine_sum) <= lattice_err,
              "continuum kernel vs fine lattice sum: " +
                  fmt(std::abs(kernels.phi_mode - fine_sum)) + " <= lattice error " +
                  fmt(lattice_err));
    return c;
}

Criterion criterion_9_smearing() {
    Criterion c{9, "delta-sequence smearing converges to i m K1(2m|y|)/(4 pi |y|)"};
    const auto start = std::chrono::steady_clock::now();
    const auto quad = default_quad();
    const TestFunction mother = TestFunction::bump(0.0, 1.0, 1.0);
    const double m = 1.0;
    bool shrinking = true;
    double worst_final = 0.0;
    for (double y : {0.5, 1.0, 2.0}) {
        const Complex oracle = kI * m * bessel_k1(2.0 * m * y) / (4.0 * M_PI * y);
        Complex prev{};
        double prev_gap = 0.0;
        Complex last{};
        bool first = true;
        for (int n : {4, 8, 16, 32}) {
            const Complex v = smear_g2(delta_member(DeltaSequence(mother, n)), y, m, quad);
            if (!first) {
                const double gap = std::abs(v - prev);
                if (prev_gap > 0.0) shrinking = shrinking && (gap < prev_gap);
                prev_gap = gap;
            }
            prev = v;
            last = v;
            first = false;
        }
        const double rel = std::abs(last - oracle) / std::abs(oracle);
        worst_final = std::max(worst_final, rel);
        c.detail << "  info: y=" << fmt(y) << " n=32 rel dev " << fmt(rel) << "\n";
    }
    c.require(shrinking, "increments shrink monotonically in n at every y");
    c.require(worst_final <= 1e-2, "n=32 within 1%: worst " + fmt(worst_final));

    double worst_g2 = 0.0;
    const auto schedule = default_regulator_schedule();
    for (double x : {0.5, 1.0, 2.0}) {
        const auto g2 = g2_pi4_regularized(x, m, schedule, quad);
        worst_g2 = std::max(worst_g2, std::abs(g2.extrapolated - g2.oracle) /
                                          std::abs(g2.oracle));
    }
    c.require(worst_g2 <= 1e-2,
              "regulated extrapolation within 1% of the same oracle: " + fmt(worst_g2));
    const double elapsed = seconds_since(start);
    c.require(elapsed < 30.0, "runtime " + fmt(elapsed) + " s < 30 s");
    return c;
}

Criterion criterion_10_reproducibility() {
    Criterion c{10, "verify suite is green and byte-identical across runs"};
    RunConfig config;
    config.seed = 1;
    const auto first = run_verify_suite(config);
    const auto second = run_verify_suite(config);
    const std::string report1 = render_verify_report(first);
    const std::string report2 = render_verify_report(second);
    c.require(all_passed(first), "verify suite exit status is success");
    c.require(report1 == report2, "two runs render byte-identical reports");

    const char* path1 = "acceptance_verify_run1.txt";
    const char* path2 = "acceptance_verify_run2.txt";
    {
        std::ofstream(path1, std::ios::binary) << report1;
        std::ofstream(path2, std::ios::binary) << report2;
    }
    std::ifstream in1(path1, std::ios::binary), in2(path2, std::ios::binary);
    std::stringstream buf1, buf2;
    buf1 << in1.rdbuf();
    buf2 << in2.rdbuf();
    c.require(buf1.str() == buf2.str() && !buf1.str().empty(),
              "written report files are byte-identical");
    std::remove(path1);
    std::remove(path2);
    return c;
}

} // namespace

int main() {
    std::vector<Criterion> results;
    results.push_back(criterion_1_bessel_identity());
    results.push_back(criterion_2_divergence_dichotomy());
    results.push_back(criterion_3_bosonic_reduction());
    results.push_back(criterion_4_exact_algebra());
    results.push_back(criterion_5_biorthogonality());
    results.push_back(criterion_6_lattice_to_continuum());
    results.push_back(criterion_7_one_point());
    results.push_back(criterion_8_equal_time_structure());
    results.push_back(criterion_9_smearing());
    results.push_back(criterion_10_reproducibility());

    int failures = 0;
    for (const auto& c : results) {
        std::printf("criterion %02d [%s] %s\n", c.id, c.pass ? "PASS" : "FAIL",
                    c.title.c_str());
        std::fputs(c.detail.str().c_str(), stdout);
        if (!c.pass) ++failures;
    }
    std::printf("acceptance: %d of %zu criteria passed\n", static_cast<int>(results.size()) - failures,
                results.size());
    return failures;
}
