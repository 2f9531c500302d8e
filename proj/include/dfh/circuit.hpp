#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "dfh/layout.hpp"
#include "dfh/tensor.hpp"

namespace dfh {

// Gate-level view of one coarse collision step: the mediator qubit M plays
// the role of the travelling bin, and the cascade of point couplings becomes
// a short sequence of two-qubit exchange gates and single-qubit phase kicks.

// Qubit labels. M is always qubit 0 (the leftmost tensor factor); atom j is
// qubit 1 + j.
inline constexpr int qubit_m = 0;
inline constexpr int qubit_a0 = 1;
inline constexpr int qubit_a1 = 2;

struct Gate {
  enum class Kind { XY, PhaseZ, U4 };
  Kind kind = Kind::XY;
  std::vector<int> targets;  // XY/U4: {a, b} with a the leftmost factor; PhaseZ: {a}
  double param = 0.0;        // XY: delta (matrix uses pi*delta); PhaseZ: angle
  Mat custom;                // U4 only: explicit 4x4 unitary on (a, b)
};

struct Circuit {
  int n_qubits = 3;  // M, A0, A1 unless compiled from a larger layout
  std::vector<Gate> gates;
};

// Parametric exchange ("parametric iSWAP"): 4x4, identity at the corners,
// inner block [[cos(pi d), -i sin(pi d)], [-i sin(pi d), cos(pi d)]].
Mat xy_matrix(double delta);

// diag(1, e^{i theta}).
Mat phase_z_matrix(double theta);

// Compile one coarse step of the braided two-atom scheme:
//   [XY(M,A0), XY(M,A1), PhaseZ(kick) on M, XY(M,A0), XY(M,A1), PhaseZ(kick) on M]
// with delta = sqrt(gamma*dt)/pi. The half-wave kick (kick = pi, the default)
// makes the second pass undo the mediator excitation exactly, leaving a pure
// atom-atom exchange. gamma*dt must lie in (0, 0.25] so sin(pi*delta) stays
// small enough for the exchange interpretation; pass allow_large = true to
// lift the upper bound.
Circuit compile_braided(double gamma, double dt,
                        double phase_kick = std::numbers::pi,
                        bool allow_large = false);

// Ordered product of the gates embedded on the full register (first gate acts
// first). Qubit 0 = M is the leftmost tensor factor. Throws on malformed
// gates: wrong target count, out-of-range or repeated targets, XY not
// touching M, or a U4 block that is not a 4x4 unitary.
Mat circuit_unitary(const Circuit& c);

// Number of repetitions after which the compiled step approximates a full
// iSWAP between the atoms: floor(1 / (gamma*dt)).
long iswap_iterations(double gamma, double dt);

// Largest matrix element that flips the mediator: with M the leftmost qubit,
// the 8x8 splits into four 4x4 blocks indexed by M's initial/final state, and
// this is the max over the two off-diagonal blocks. Zero means the unitary is
// block-diagonal, acting on the atoms alone.
double mediator_flip_weight(const Mat& u);

// Portable gate-list text:
//   qubits <n>
//   # q[0]=M q[1]=A0 ... (mapping comment)
//   xy q[a],q[b] delta=<float>
//   rz q[a] theta=<float>
//   u4 q[a],q[b] m=<32 comma-separated floats, row-major re,im>
// Floats carry 17 significant digits so emit/parse round-trips losslessly.
std::string emit_text(const Circuit& c);

// Inverse of emit_text. Throws std::invalid_argument with a line-numbered
// message on malformed input.
Circuit parse_text(const std::string& text);

// General compiler for one-way layouts: one u4 gate per coupling point, in
// waveguide order, each the exact exponential of that point's mediator-atom
// exchange over one step. No phase-kick simplification is applied. Throws on
// two-way layouts (gamma_left > 0).
Circuit compile_layout(const Layout& layout, double dt);

}  // namespace dfh
