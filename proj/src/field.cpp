#include "pbkg/field.hpp"

#include <cmath>
#include <string>

#include "pbkg/errors.hpp"

namespace pbkg {

namespace {

const Complex kI{0.0, 1.0};

Complex phase_factor(double k, double w, double x, double t) {
    const double phase = k * x - w * t;
    return Complex(std::cos(phase), std::sin(phase));
}

} // namespace

AlphaBeta alpha_beta(ThetaParam theta, double k, double omega_k, double x, double t) {
    const Complex e = phase_factor(k, omega_k, x, t);
    const double cs = std::cos(theta.value());
    const double sn = std::sin(theta.value());
    return AlphaBeta{cs * e + kI * sn * std::conj(e), cs * std::conj(e) + kI * sn * e};
}

FieldOperator::FieldOperator(const ModeLattice& lattice, ThetaParam theta, FieldKind kind,
                             double x, double t)
    : lattice_(lattice), theta_(theta), kind_(kind), x_(x), t_(t) {
    const int M = lattice_.mode_count();
    coeffs_.resize(static_cast<std::size_t>(M));
    for (int j = 0; j < M; ++j) {
        const double k = lattice_.mode(j);
        const double w = lattice_.mode_omega(j);
        const double phi_weight = std::sqrt(lattice_.spacing() / (4.0 * M_PI * w));
        const double pi_weight = std::sqrt(w * lattice_.spacing() / (4.0 * M_PI));
        auto& c = coeffs_[static_cast<std::size_t>(j)];
        switch (kind_) {
            case FieldKind::phi: {
                const auto ab = alpha_beta(theta_, k, w, x_, t_);
                c = {phi_weight * ab.alpha, phi_weight * ab.beta};
                break;
            }
            case FieldKind::pi: {
                const auto ab = alpha_beta(-theta_, k, w, x_, t_);
                c = {-kI * pi_weight * ab.alpha, kI * pi_weight * ab.beta};
                break;
            }
            case FieldKind::phi_dagger: {
                const auto ab = alpha_beta(theta_, k, w, x_, t_);
                c = {phi_weight * std::conj(ab.beta), phi_weight * std::conj(ab.alpha)};
                break;
            }
            case FieldKind::pi_dagger: {
                const auto ab = alpha_beta(-theta_, k, w, x_, t_);
                c = {std::conj(kI * pi_weight * ab.beta), std::conj(-kI * pi_weight * ab.alpha)};
                break;
            }
        }
    }
}

StateVector apply_field(const FieldOperator& op, const StateVector& state) {
    if (op.lattice() != state.lattice) {
        throw dimension_error("apply_field: operator and state lattices differ");
    }
    StateVector out{state.lattice, Eigen::VectorXcd::Zero(state.amplitudes.size())};
    for (int j = 0; j < op.lattice().mode_count(); ++j) {
        const auto& c = op.coefficients()[static_cast<std::size_t>(j)];
        accumulate_mode_op(state, j, c.annihilate, c.create, out.amplitudes);
    }
    return out;
}

namespace {

// Single-mode ladder application on a bare Fock vector: out += (ca c + cc c^dag) v.
void mini_mode_op(const Eigen::VectorXcd& v, Complex ca, Complex cc, Eigen::VectorXcd& out) {
    const int d = static_cast<int>(v.size());
    for (int n = 0; n + 1 < d; ++n) {
        const double w = std::sqrt(static_cast<double>(n + 1));
        out[n] += ca * w * v[n + 1];
        out[n + 1] += cc * w * v[n];
    }
}

Complex two_point_factorized(ThetaParam theta, double x, double t, double y, double s,
                             const ModeLattice& lattice) {
    // Cross-mode terms have vanishing vacuum expectation, so the vacuum
    // two-point function is a sum of single-mode double applications.
    const int d = lattice.local_dim();
    Complex total{0.0, 0.0};
    Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(d);
    e0[0] = Complex(1.0, 0.0);
    Eigen::VectorXcd v1(d), v2(d);
    for (int j = 0; j < lattice.mode_count(); ++j) {
        const double k = lattice.mode(j);
        const double w = lattice.mode_omega(j);
        const double weight = std::sqrt(lattice.spacing() / (4.0 * M_PI * w));
        const auto ab_first = alpha_beta(theta, k, w, x, t);
        const auto ab_second = alpha_beta(theta, k, w, y, s);
        v1.setZero();
        mini_mode_op(e0, weight * ab_second.alpha, weight * ab_second.beta, v1);
        v2.setZero();
        mini_mode_op(v1, weight * ab_first.alpha, weight * ab_first.beta, v2);
        total += v2[0]; // <e0 | . >
    }
    return total;
}

} // namespace

TwoPointResult two_point_routes(ThetaParam theta, double x, double t, double y, double s,
                                const ModeLattice& lattice) {
    Complex contraction{0.0, 0.0};
    for (int j = 0; j < lattice.mode_count(); ++j) {
        const double k = lattice.mode(j);
        const double w = lattice.mode_omega(j);
        const auto first = alpha_beta(theta, k, w, x, t);
        const auto second = alpha_beta(theta, k, w, y, s);
        contraction += lattice.spacing() / (4.0 * M_PI * w) * first.alpha * second.beta;
    }

    Complex state_route;
    bool dense = lattice.dense_capable();
    if (dense) {
        const auto vac = vacuum(lattice);
        const FieldOperator right(lattice, theta, FieldKind::phi, y, s);
        const FieldOperator left(lattice, theta, FieldKind::phi, x, t);
        state_route = inner(vac, apply_field(left, apply_field(right, vac)));
    } else {
        state_route = two_point_factorized(theta, x, t, y, s, lattice);
    }

    TwoPointResult out{state_route, contraction, std::abs(state_route - contraction), dense};
    if (out.route_gap > 1e-10 * std::max(1.0, std::abs(contraction))) {
        throw internal_consistency_error(
            "two_point: ladder and contraction routes disagree by " +
            std::to_string(out.route_gap));
    }
    return out;
}

Complex two_point(ThetaParam theta, double x, double t, double y, double s,
                  const ModeLattice& lattice) {
    return two_point_routes(theta, x, t, y, s, lattice).value;
}

double lattice_delta_kernel(const ModeLattice& lattice, double dx) {
    double sum = 0.0;
    for (int j = 0; j < lattice.mode_count(); ++j) sum += std::cos(lattice.mode(j) * dx);
    return sum * lattice.spacing() / (2.0 * M_PI);
}

Complex phi_phidag_kernel_mode_sum(ThetaParam theta, double x, double y, double t,
                                   const ModeLattice& lattice) {
    Complex sum{0.0, 0.0};
    for (int j = 0; j < lattice.mode_count(); ++j) {
        const double k = lattice.mode(j);
        const double w = lattice.mode_omega(j);
        const auto at_x = alpha_beta(theta, k, w, x, t);
        const auto at_y = alpha_beta(-theta, k, w, y, t);
        sum += lattice.spacing() / (4.0 * M_PI * w) *
               (at_x.alpha * at_y.beta - at_x.beta * at_y.alpha);
    }
    return sum;
}

namespace {

// kernel([F, G]) measured on a probe, plus the proportionality residual.
struct KernelMeasurement {
    Complex kernel;
    double residual;
};

KernelMeasurement measure_commutator(const FieldOperator& f, const FieldOperator& g,
                                     const StateVector& probe) {
    const StateVector fg = apply_field(f, apply_field(g, probe));
    const StateVector gf = apply_field(g, apply_field(f, probe));
    const Eigen::VectorXcd comm = fg.amplitudes - gf.amplitudes;
    const double norm2 = probe.amplitudes.squaredNorm();
    const Complex kernel = probe.amplitudes.dot(comm) / norm2;
    const double residual = (comm - kernel * probe.amplitudes).norm() / std::sqrt(norm2);
    return {kernel, residual};
}

} // namespace

EqualTimeCommutators equal_time_commutator_check(ThetaParam theta, double x, double y, double t,
                                                 const ModeLattice& lattice) {
    const FieldOperator phi_x(lattice, theta, FieldKind::phi, x, t);
    const FieldOperator phi_y(lattice, theta, FieldKind::phi, y, t);
    const FieldOperator pi_y(lattice, theta, FieldKind::pi, y, t);
    const FieldOperator phidag_y(lattice, theta, FieldKind::phi_dagger, y, t);

    std::vector<StateVector> probes;
    probes.push_back(vacuum(lattice));
    if (lattice.local_dim() >= 3) {
        // single-quantum probes stay clear of the truncation edge only when
        // a second quantum still fits
        std::vector<int> occ(static_cast<std::size_t>(lattice.mode_count()), 0);
        const int picks[] = {0, lattice.mode_count() / 2, lattice.mode_count() - 1};
        for (int j : picks) {
            occ.assign(occ.size(), 0);
            occ[static_cast<std::size_t>(j)] = 1;
            probes.push_back(basis_state(lattice, occ));
        }
    }

    EqualTimeCommutators out{};
    double worst_residual = 0.0;
    const auto measure_worst = [&](const FieldOperator& f, const FieldOperator& g) {
        KernelMeasurement vac_measure = measure_commutator(f, g, probes.front());
        for (std::size_t i = 1; i < probes.size(); ++i) {
            const auto m = measure_commutator(f, g, probes[i]);
            worst_residual = std::max(worst_residual, m.residual);
            worst_residual = std::max(worst_residual, std::abs(m.kernel - vac_measure.kernel));
        }
        worst_residual = std::max(worst_residual, vac_measure.residual);
        return vac_measure.kernel;
    };

    out.phi_pi = measure_worst(phi_x, pi_y) - kI * lattice_delta_kernel(lattice, x - y);
    out.phi_phi = measure_worst(phi_x, phi_y);
    out.phi_phidag = measure_worst(phi_x, phidag_y);
    out.proportionality_residual = worst_residual;
    return out;
}

HamiltonianExpectation hamiltonian_expectation(ThetaParam theta, const ModeLattice& lattice,
                                               const StateVector& probe) {
    if (probe.lattice != lattice) {
        throw dimension_error("hamiltonian_expectation: probe lattice mismatch");
    }
    const int d = lattice.local_dim();
    for (long idx = 0; idx < probe.amplitudes.size(); ++idx) {
        if (probe.amplitudes[idx] == Complex(0.0, 0.0)) continue;
        for (int j = 0; j < lattice.mode_count(); ++j) {
            if (probe.occupation(static_cast<std::uint64_t>(idx), j) == d - 1) {
                throw truncation_edge_error(
                    "hamiltonian_expectation: probe touches the truncation edge in mode " +
                    std::to_string(j));
            }
        }
    }

    const double cs = std::cos(theta.value());
    const double sn = std::sin(theta.value());
    Complex deformed{0.0, 0.0};
    Complex bosonic{0.0, 0.0};
    Eigen::VectorXcd work(probe.amplitudes.size());
    const auto norm2_of = [&](Complex ca, Complex cc, int j) {
        work.setZero();
        accumulate_mode_op(probe, j, ca, cc, work);
        return work.squaredNorm();
    };
    for (int j = 0; j < lattice.mode_count(); ++j) {
        const double w = lattice.mode_omega(j);
        const double factor = lattice.spacing() * w;
        // <p, X^dag X p> = |X p|^2 for X in {A, B, c, c^dag}
        const double a_sq = norm2_of(Complex(cs, 0.0), Complex(0.0, sn), j);
        const double b_sq = norm2_of(Complex(0.0, sn), Complex(cs, 0.0), j);
        const double c_sq = norm2_of(Complex(1.0, 0.0), Complex(0.0, 0.0), j);
        const double cd_sq = norm2_of(Complex(0.0, 0.0), Complex(1.0, 0.0), j);
        deformed += factor * (a_sq + b_sq);
        bosonic += factor * (c_sq + cd_sq);
    }
    return {deformed, bosonic};
}

ModeExtraction extract_mode(ThetaParam theta, int j, double t, const ModeLattice& lattice,
                            int xgrid_points) {
    if (j < 0 || j >= lattice.mode_count()) throw index_error("extract_mode: mode out of range");
    if (xgrid_points < 2 * lattice.mode_count()) {
        throw aliasing_error("extract_mode: xgrid must have at least 2M points to separate "
                             "all mode pairs over one period");
    }
    const double L = 2.0 * M_PI / lattice.spacing();
    const double dx = L / xgrid_points;
    const double kj = lattice.mode(j);
    const double wj = lattice.mode_omega(j);
    const int M = lattice.mode_count();

    // Coefficient tables of the quadrature Sum_r dx e^{-i k_j x_r + i w_j t}
    // (w_j Phi + i Pi)(x_r, t), and the mirrored one for B.
    std::vector<ModeCoefficient> ext_a(static_cast<std::size_t>(M), ModeCoefficient{});
    std::vector<ModeCoefficient> ext_b(static_cast<std::size_t>(M), ModeCoefficient{});
    for (int r = 0; r < xgrid_points; ++r) {
        const double x = r * dx;
        const Complex probe_a =
            dx * std::conj(phase_factor(kj, wj, x, t)); // e^{-i k_j x + i w_j t}
        const Complex probe_b = dx * phase_factor(kj, wj, x, t);
        const FieldOperator phi(lattice, theta, FieldKind::phi, x, t);
        const FieldOperator pi(lattice, theta, FieldKind::pi, x, t);
        for (int l = 0; l < M; ++l) {
            const auto& cphi = phi.coefficients()[static_cast<std::size_t>(l)];
            const auto& cpi = pi.coefficients()[static_cast<std::size_t>(l)];
            auto& ea = ext_a[static_cast<std::size_t>(l)];
            auto& eb = ext_b[static_cast<std::size_t>(l)];
            ea.annihilate += probe_a * (wj * cphi.annihilate + kI * cpi.annihilate);
            ea.create += probe_a * (wj * cphi.create + kI * cpi.create);
            eb.annihilate += probe_b * (wj * cphi.annihilate - kI * cpi.annihilate);
            eb.create += probe_b * (wj * cphi.create - kI * cpi.create);
        }
    }
    const double calib = 1.0 / (L * std::sqrt(wj * lattice.spacing() / M_PI));
    const double naive = 1.0 / (4.0 * M_PI * wj);

    // Targets: A = cos(theta) c_j + i sin(theta) c_j^dag, B the mirror.
    const Complex target_a_ann{std::cos(theta.value()), 0.0};
    const Complex target_a_cre = kI * std::sin(theta.value());
    const Complex target_b_ann = kI * std::sin(theta.value());
    const Complex target_b_cre{std::cos(theta.value()), 0.0};

    double a_defect = 0.0, b_defect = 0.0, alt_defect = 0.0;
    for (int l = 0; l < M; ++l) {
        const auto& ea = ext_a[static_cast<std::size_t>(l)];
        const auto& eb = ext_b[static_cast<std::size_t>(l)];
        const Complex want_a_ann = (l == j) ? target_a_ann : Complex{0.0, 0.0};
        const Complex want_a_cre = (l == j) ? target_a_cre : Complex{0.0, 0.0};
        const Complex want_b_ann = (l == j) ? target_b_ann : Complex{0.0, 0.0};
        const Complex want_b_cre = (l == j) ? target_b_cre : Complex{0.0, 0.0};
        a_defect = std::max({a_defect, std::abs(calib * ea.annihilate - want_a_ann),
                             std::abs(calib * ea.create - want_a_cre)});
        b_defect = std::max({b_defect, std::abs(calib * eb.annihilate - want_b_ann),
                             std::abs(calib * eb.create - want_b_cre)});
        alt_defect = std::max({alt_defect, std::abs(naive * ea.annihilate - want_a_ann),
                               std::abs(naive * ea.create - want_a_cre)});
    }
    ModeExtraction out{a_defect, b_defect, alt_defect,
                       std::fabs(1.0 - 2.0 * std::sqrt(M_PI * wj) * naive / calib)};
    return out;
}

} // namespace pbkg
