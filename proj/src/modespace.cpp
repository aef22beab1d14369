#include "pbkg/modespace.hpp"

#include <cmath>
#include <string>

#include "pbkg/errors.hpp"

namespace pbkg {

double omega(double k, double m) {
    if (!(m > 0.0)) throw parameter_error("omega: mass must be positive");
    return std::hypot(k, m);
}

DispersionValue dispersion(double k, double m) { return {k, m, omega(k, m)}; }

ModeLattice::ModeLattice(int M, double dk, double m, int d, std::uint64_t max_states)
    : M_(M), dk_(dk), m_(m), d_(d), max_states_(max_states) {
    if (M < 1 || M % 2 == 0) {
        throw parameter_error("ModeLattice: M must be a positive odd integer, got " +
                              std::to_string(M));
    }
    if (!(dk > 0.0)) throw parameter_error("ModeLattice: dk must be positive");
    if (!(m > 0.0)) throw parameter_error("ModeLattice: mass must be positive");
    if (d < 2) throw parameter_error("ModeLattice: local Fock dimension must be >= 2");

    modes_.resize(M_);
    const double half = 0.5 * (M_ - 1);
    for (int j = 0; j < M_; ++j) modes_[j] = (j - half) * dk_;

    // d^M with overflow guard; beyond the budget the lattice stays usable
    // for mode sums but refuses to allocate dense states.
    std::uint64_t dim = 1;
    dense_capable_ = true;
    for (int j = 0; j < M_; ++j) {
        if (dim > max_states_ / static_cast<std::uint64_t>(d_)) {
            dense_capable_ = false;
            break;
        }
        dim *= static_cast<std::uint64_t>(d_);
    }
    if (dense_capable_ && dim > max_states_) dense_capable_ = false;
    if (dense_capable_) state_dim_ = dim;
}

double ModeLattice::mode(int j) const {
    if (j < 0 || j >= M_) throw index_error("ModeLattice: mode index out of range");
    return modes_[static_cast<std::size_t>(j)];
}

double ModeLattice::mode_omega(int j) const { return omega(mode(j), m_); }

std::uint64_t ModeLattice::state_dim() const {
    if (!dense_capable_) {
        throw memory_budget_error("ModeLattice: d^M = " + std::to_string(d_) + "^" +
                                  std::to_string(M_) + " exceeds the state budget of " +
                                  std::to_string(max_states_) + " amplitudes");
    }
    return state_dim_;
}

bool ModeLattice::operator==(const ModeLattice& other) const noexcept {
    return M_ == other.M_ && dk_ == other.dk_ && m_ == other.m_ && d_ == other.d_;
}

int StateVector::occupation(std::uint64_t idx, int j) const {
    std::uint64_t stride = 1;
    for (int l = 0; l < j; ++l) stride *= static_cast<std::uint64_t>(lattice.local_dim());
    return static_cast<int>((idx / stride) % static_cast<std::uint64_t>(lattice.local_dim()));
}

StateVector vacuum(const ModeLattice& lattice) {
    StateVector state{lattice, Eigen::VectorXcd::Zero(static_cast<long>(lattice.state_dim()))};
    state.amplitudes[0] = Complex(1.0, 0.0);
    return state;
}

StateVector basis_state(const ModeLattice& lattice, const std::vector<int>& occupations) {
    if (static_cast<int>(occupations.size()) != lattice.mode_count()) {
        throw dimension_error("basis_state: need one occupation per mode");
    }
    std::uint64_t idx = 0;
    std::uint64_t stride = 1;
    for (int j = 0; j < lattice.mode_count(); ++j) {
        const int n = occupations[static_cast<std::size_t>(j)];
        if (n < 0 || n >= lattice.local_dim()) {
            throw parameter_error("basis_state: occupation outside [0, d)");
        }
        idx += stride * static_cast<std::uint64_t>(n);
        stride *= static_cast<std::uint64_t>(lattice.local_dim());
    }
    StateVector state{lattice, Eigen::VectorXcd::Zero(static_cast<long>(lattice.state_dim()))};
    state.amplitudes[static_cast<long>(idx)] = Complex(1.0, 0.0);
    return state;
}

namespace {

std::uint64_t mode_stride(const ModeLattice& lattice, int j) {
    if (j < 0 || j >= lattice.mode_count()) {
        throw index_error("mode index out of range: " + std::to_string(j));
    }
    std::uint64_t stride = 1;
    for (int l = 0; l < j; ++l) stride *= static_cast<std::uint64_t>(lattice.local_dim());
    return stride;
}

} // namespace

void accumulate_mode_op(const StateVector& state, int j, Complex ca, Complex cc,
                        Eigen::VectorXcd& out) {
    const std::uint64_t dim = static_cast<std::uint64_t>(state.amplitudes.size());
    const int d = state.lattice.local_dim();
    const std::uint64_t stride = mode_stride(state.lattice, j);
    const std::uint64_t block = stride * static_cast<std::uint64_t>(d);
    const Complex* in = state.amplitudes.data();
    Complex* dst = out.data();
    // (c psi)[n] = sqrt(n+1) psi[n+1], (c^dag psi)[n+1] = sqrt(n+1) psi[n];
    // the top level n = d-1 has no image under c^dag (truncation).
    for (std::uint64_t base = 0; base < dim; base += block) {
        for (int n = 0; n + 1 < d; ++n) {
            const double w = std::sqrt(static_cast<double>(n + 1));
            const std::uint64_t lo = base + stride * static_cast<std::uint64_t>(n);
            const std::uint64_t hi = lo + stride;
            if (ca != Complex(0.0, 0.0)) {
                for (std::uint64_t r = 0; r < stride; ++r) dst[lo + r] += ca * w * in[hi + r];
            }
            if (cc != Complex(0.0, 0.0)) {
                for (std::uint64_t r = 0; r < stride; ++r) dst[hi + r] += cc * w * in[lo + r];
            }
        }
    }
}

StateVector apply_annihilate(const StateVector& state, int j) {
    StateVector out{state.lattice, Eigen::VectorXcd::Zero(state.amplitudes.size())};
    accumulate_mode_op(state, j, Complex(1.0, 0.0), Complex(0.0, 0.0), out.amplitudes);
    return out;
}

StateVector apply_create(const StateVector& state, int j) {
    StateVector out{state.lattice, Eigen::VectorXcd::Zero(state.amplitudes.size())};
    accumulate_mode_op(state, j, Complex(0.0, 0.0), Complex(1.0, 0.0), out.amplitudes);
    return out;
}

Complex inner(const StateVector& a, const StateVector& b) {
    if (a.lattice != b.lattice || a.amplitudes.size() != b.amplitudes.size()) {
        throw dimension_error("inner: states live on different lattices");
    }
    return a.amplitudes.dot(b.amplitudes); // Eigen's dot conjugates the first factor
}

Eigen::MatrixXcd truncated_annihilator(int d) {
    if (d < 2) throw parameter_error("truncated_annihilator: d must be >= 2");
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 1; n < d; ++n) c(n - 1, n) = std::sqrt(static_cast<double>(n));
    return c;
}

Eigen::MatrixXcd single_mode_commutator(int d) {
    if (d < 2) throw parameter_error("single_mode_commutator: d must be >= 2");
    const Eigen::MatrixXcd c = truncated_annihilator(d);
    const Eigen::MatrixXcd cd = c.adjoint();
    return c * cd - cd * c;
}

} // namespace pbkg
