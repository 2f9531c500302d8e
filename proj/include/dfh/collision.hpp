#pragma once

// Discrete-time stream engine: the waveguide is consumed as a train of short
// bins, and each coarse step is a cascade of point-local subcollisions.

#include <vector>

#include "dfh/effective.hpp"
#include "dfh/layout.hpp"
#include "dfh/tensor.hpp"

namespace dfh {

// One point-local interaction term within a coarse step.  Hermitian, acts on
// the joint atoms x bin space and carries the 1/sqrt(dt) scaling already.
struct SubcollisionGen {
  enum class Dir { Right, Left };
  int slot = 0;    // time slot within the step, 0 = applied first
  int point = 0;   // coupling-point index the term belongs to
  Dir dir = Dir::Right;
  Mat generator;
};

std::vector<SubcollisionGen> subcollision_generators(const Layout& layout,
                                                     const AtomRegister& atoms,
                                                     const BinRegister& bins,
                                                     double dt);

// Per-slot sums of the above (a right-moving bin meets point nu in slot nu; a
// left-moving bin traverses the points in reverse, so slot s also carries the
// counter-propagating term of point n-1-s).
std::vector<Mat> slot_generators(const Layout& layout, const AtomRegister& atoms,
                                 const BinRegister& bins, double dt);

// Ordered product of the slot exponentials, slot 0 applied first.
Mat cascaded_unitary(const Layout& layout, const AtomRegister& atoms,
                     const BinRegister& bins, double dt);

// Single exponential of the time-averaged interaction (no ordering).
Mat simultaneous_unitary(const Layout& layout, const AtomRegister& atoms,
                         const BinRegister& bins, double dt);

// Second-order (commutator) part of the ordered product, assembled directly
// from the slot generators:  (i/2) sum_{v>v'} [G_v', G_v].  The step length
// cancels.  Built with one extra bin level of headroom and projected back, so
// truncation artifacts at the top level do not contaminate the result.
Mat commutator_assembly(const Layout& layout, const AtomRegister& atoms,
                        const BinRegister& bins);

// Closed form for the part of commutator_assembly not captured by the
// atoms-only Hamiltonian.  Exact for arbitrary layouts:
//   sum_j sz_j (x) [ D_j (gr nR + gl nL)
//                    + (i/2) sqrt(gr*gl) (C_j bR^dag bL - conj(C_j) bR bL^dag) ]
// with D_j = sum_{p<q, same atom} sin(phi_q - phi_p) and C_j summing
// sign(s) e^{-i(phi_p+phi_q)} over ordered same-atom point pairs (p,q),
// s = (p+1)+(q+1), sign -1 for s <= n, +1 for s >= n+2, dropped at s = n+1.
// D_j vanishes when same-atom spacings are multiples of pi; C_j vanishes for
// palindromic or fully one-sided layouts but not when a same-atom pair
// straddles the midpoint of the slot order.  The whole residual kills vacuum
// bins, so it never feeds back into the reduced atom dynamics.
Mat assembly_residual(const Layout& layout, const AtomRegister& atoms,
                      const BinRegister& bins);

struct MagnusReport {
  double err2 = 0.0;   // cascade vs exp(-i H dt), vacuum-bin input columns
  double order = 0.0;  // log2 of the err2 ratio between dt and dt/2
};

// Requires a decoherence-free layout (the comparison is only meaningful when
// the first-order term cancels).  The error norm is taken over the columns
// whose input bins are in vacuum — the only columns the stream ever feeds —
// which also makes the number independent of the bin truncation depth.
MagnusReport magnus_consistency(const Layout& layout, const AtomRegister& atoms,
                                const BinRegister& bins, double dt);

enum class Engine { Cascaded, Simultaneous, MagnusLinear, Effective };

struct SimConfig {
  Layout layout;
  AtomRegister atoms{1};
  BinRegister bins{2, 0};
  double dt = 0.01;
  int steps = 100;
  Mat initial_atom_state;  // density matrix, dimension 2^n_atoms
  Engine engine = Engine::Cascaded;
  bool reference_effective = false;  // also evolve exp(-i H dt) and record distance
  bool record_bin_deviation = false;
  Vec right_bin_state;  // per-step fresh bin state; empty = vacuum
  Vec left_bin_state;
};

Mat pure_state(const Vec& psi);

struct Trajectory {
  std::vector<double> times;                // steps+1 entries
  std::vector<Mat> states;                  // atom density matrices
  Eigen::MatrixXd populations;              // (steps+1) x n_atoms, excited-state
  std::vector<double> purity;               // Tr rho^2
  std::vector<double> ref_distance;         // empty unless reference requested
  std::vector<double> bin_vacuum_dev;       // per-step outgoing-bin deviation
};

// Repeated-interaction evolution: each step adjoins fresh vacuum bins, applies
// the engine's step operator, and traces the bins back out.
Trajectory run_stream(const SimConfig& cfg);

// Mediator-phase sensitivity probe for the braided two-atom scheme, run on the
// compiled gate decomposition with the phase kick set to phi_m instead of pi.
// Each step uses a fresh mediator qubit in |0>, which is traced out afterward;
// any mediator-atom entanglement left behind shows up as purity loss.
struct ProbeConfig {
  double phi_m = M_PI;
  double gamma_dt = 1e-5;
  int steps = 50;
  Mat initial_atom_state;  // two-atom density matrix; empty = |e,g>
};

Trajectory purity_probe(const ProbeConfig& cfg);

}  // namespace dfh
