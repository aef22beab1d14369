#ifndef PBKG_MODESPACE_HPP
#define PBKG_MODESPACE_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace pbkg {

using Complex = std::complex<double>;

/// Relativistic dispersion sqrt(k^2 + m^2).  Throws parameter_error for m <= 0.
double omega(double k, double m);

/// Momentum, mass, and energy bundled; omega >= m > 0 and even in k.
struct DispersionValue {
    double k;
    double m;
    double omega;
};
DispersionValue dispersion(double k, double m);

/// Symmetric uniform momentum grid with a per-mode Fock truncation.
///
/// Modes are k_j = (j - (M-1)/2) * dk, j = 0..M-1, so M must be odd: the grid
/// then contains k = 0 and is exactly mirror symmetric, which the parity
/// arguments downstream rely on.  The truncation d is the local Fock
/// dimension of every mode.
///
/// The memory budget guards *state allocation*, not lattice construction:
/// lattices far too large for a dense tensor-product state are still valid
/// carriers for mode sums and factorized vacuum expectations.
class ModeLattice {
public:
    static constexpr std::uint64_t kDefaultMaxStates = std::uint64_t(1) << 22;

    ModeLattice(int M, double dk, double m, int d = 2,
                std::uint64_t max_states = kDefaultMaxStates);

    int mode_count() const noexcept { return M_; }
    double spacing() const noexcept { return dk_; }
    double mass() const noexcept { return m_; }
    int local_dim() const noexcept { return d_; }
    std::uint64_t max_states() const noexcept { return max_states_; }

    double mode(int j) const;           // k_j, throws index_error out of range
    double mode_omega(int j) const;     // omega(k_j, m)
    const std::vector<double>& modes() const noexcept { return modes_; }
    double k_max() const noexcept { return modes_.back(); }

    /// True when d^M fits the state budget (dense StateVector allowed).
    bool dense_capable() const noexcept { return dense_capable_; }
    /// d^M; throws memory_budget_error when it exceeds the budget.
    std::uint64_t state_dim() const;

    bool operator==(const ModeLattice& other) const noexcept;
    bool operator!=(const ModeLattice& other) const noexcept { return !(*this == other); }

private:
    int M_;
    double dk_;
    double m_;
    int d_;
    std::uint64_t max_states_;
    std::uint64_t state_dim_ = 0; // valid only when dense_capable_
    bool dense_capable_ = false;
    std::vector<double> modes_;
};

/// Dense complex amplitude vector over the tensor product of truncated
/// per-mode Fock spaces.  Mode j has stride d^j in the flat index.
struct StateVector {
    ModeLattice lattice;
    Eigen::VectorXcd amplitudes;

    /// Occupation of mode j in flat basis index idx.
    int occupation(std::uint64_t idx, int j) const;
};

/// The normalized state annihilated by every mode; amplitude 1 on the
/// all-zeros occupation index.  Throws memory_budget_error when d^M does not
/// fit the lattice's state budget.
StateVector vacuum(const ModeLattice& lattice);

/// Basis state with the given occupation per mode (all others zero).
StateVector basis_state(const ModeLattice& lattice, const std::vector<int>& occupations);

/// Ladder action on the j-th tensor factor.  annihilate maps n -> n-1 with
/// weight sqrt(n); create maps n -> n+1 with weight sqrt(n+1) and kills the
/// top level n = d-1 (truncation).  Both are linear and leave the input
/// untouched.  Throws index_error for j out of range.
StateVector apply_annihilate(const StateVector& state, int j);
StateVector apply_create(const StateVector& state, int j);

/// out += ca * annihilate_j(state) + cc * create_j(state), one fused pass.
/// This is the kernel every field/Hamiltonian application goes through.
void accumulate_mode_op(const StateVector& state, int j, Complex ca, Complex cc,
                        Eigen::VectorXcd& out);

/// Hilbert inner product, conjugate-linear in the first argument.
/// Throws dimension_error when the lattices differ.
Complex inner(const StateVector& a, const StateVector& b);

/// Matrix of c c^dag - c^dag c in the d-dimensional number basis:
/// diag(1, ..., 1, 1-d).  Throws parameter_error for d < 2.
Eigen::MatrixXcd single_mode_commutator(int d);

/// Truncated annihilator as a dense d x d matrix (subdiagonal sqrt(n)).
Eigen::MatrixXcd truncated_annihilator(int d);

} // namespace pbkg

#endif
