#pragma once

#include "dfh/effective.hpp"
#include "dfh/tensor.hpp"

namespace dfh {

// Far-detuned discrete modes coupled to the atom register: the contrast case
// where the interaction time-averages to zero and only a weak second-order
// (dispersive) atom-atom coupling survives.
struct ModeSet {
  Eigen::VectorXd detunings;  // Delta_k, angular frequency; all nonzero
  Mat couplings;              // g_jk, atoms x modes, angular frequency
  int d = 2;                  // Fock truncation per mode

  int n_modes() const { return static_cast<int>(detunings.size()); }
  int dim() const;  // d^n_modes
};

// True when every detuning dominates every coupling: min|Delta| >= 20 max|g|.
bool is_dispersive(const ModeSet& modes);

// Time average (1/dt) \int_{t0}^{t0+dt} V(s) ds of the rotating-frame coupling
//   V(s) = sum_jk g_jk e^{-i Delta_k s} sigma_j^dag a_k + H.c.
// evaluated analytically per mode, assembled on atoms (x) modes. Warns when
// the window is shorter than a full period of the slowest detuning.
Mat windowed_average(const ModeSet& modes, const AtomRegister& atoms,
                     double t0, double dt);

// Second-order atom-only Hamiltonian left after the average washes out:
//   H = -sum_{j,j'} sum_k (g_jk conj(g_j'k) / (2 Delta_k)) sigma_j'^dag sigma_j + H.c.
// (vacuum field sector; cross-mode pairs annihilate the vacuum, so exactly
// degenerate detunings need no special casing). Warns outside the dispersive
// regime.
Mat dispersive_heff(const ModeSet& modes, const AtomRegister& atoms);

// Rotating-frame generator of the exact model on atoms (x) modes:
//   sum_k Delta_k a_k^dag a_k + sum_jk (g_jk sigma_j^dag a_k + H.c.)
Mat full_hamiltonian(const ModeSet& modes, const AtomRegister& atoms);

}  // namespace dfh
