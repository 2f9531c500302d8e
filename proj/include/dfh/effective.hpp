#pragma once

#include "dfh/layout.hpp"
#include "dfh/tensor.hpp"

namespace dfh {

// Qubit register for the atoms; atom 0 is the leftmost tensor factor.
// Basis per atom: |g> = 0, |e> = 1; sigma = |g><e|, sigma_z = |e><e| - |g><g|.
struct AtomRegister {
  int n_atoms = 1;
  int dim() const { return 1 << n_atoms; }
  Mat sigma(int j) const;
  Mat sigma_z(int j) const;
  Mat identity() const { return Mat::Identity(dim(), dim()); }
};

// Truncated Fock spaces of the right/left-going time-bin modes.
// d_left = 0 means unidirectional (no left bin factor at all).
struct BinRegister {
  int d_right = 2;
  int d_left = 0;
  bool bidirectional() const { return d_left > 0; }
  int dim() const { return d_right * (d_left > 0 ? d_left : 1); }
  std::vector<int> factor_dims() const;
};

// Truncated ladder operator; [b, b^dag] = 1 except on the top Fock level.
Mat annihilator(int d);

struct CollectiveOps {
  Mat S;        // sum_points e^{-i phi} sigma_atom  (right-going)
  Mat S_prime;  // conjugated phases                 (left-going)
};
CollectiveOps collective_ops(const Layout& layout, const AtomRegister& atoms);

// (1/sqrt(dt)) (sqrt(gamma) S b^dag + sqrt(gamma') S' b'^dag + H.c.) on atoms x bins.
Mat averaged_interaction(const Layout& layout, const AtomRegister& atoms,
                         const BinRegister& bins, double dt);

// Atoms-only coarse-grained second-order Hamiltonian:
// (i/2) sum_{nu > nu'} (gamma S_nu'^dag S_nu + gamma' S'_nu^dag S'_nu' - H.c.).
Mat effective_atoms(const Layout& layout, const AtomRegister& atoms);

// Same operator embedded on atoms x bins (identity on the bin factors).
Mat second_order_H(const Layout& layout, const AtomRegister& atoms,
                   const BinRegister& bins);

struct CouplingMatrixJ {
  Mat J;  // n_atoms x n_atoms, angular frequency units
  Mat K;  // dimensionless right-going part: J = gamma K + gamma' K*
};
CouplingMatrixJ coupling_matrix(const Layout& layout);

// Reassemble sum_{jj'} J_jj' sigma_j^dag sigma_j' + H.c. on the atom register.
Mat hamiltonian_from_coupling(const Mat& J, const AtomRegister& atoms);

// Coefficient of sigma_z in the effective Hamiltonian of a single
// multi-point decoherence-free atom (its residual level shift).
double lamb_shift_check(const Layout& layout);

// Second-order step expansion 1 - i(V + H)dt - (dt^2/2) V^2; diagnostic only,
// not exactly unitary.
Mat magnus_step_unitary(const Layout& layout, const AtomRegister& atoms,
                        const BinRegister& bins, double dt);

}  // namespace dfh
