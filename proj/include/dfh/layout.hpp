#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dfh/tensor.hpp"

namespace dfh {

struct CouplingPoint {
  int atom = 0;       // 0-based atom index j
  int leg = 0;        // within-atom index, ordered by position along the guide
  double phase = 0.0;      // reduced to [0, 2pi) for comparisons
  double raw_phase = 0.0;  // as given / k0*x, kept for reporting
};

// Ordered coupling points along the waveguide (index nu = 0..size()-1),
// plus the right/left-going decay rates.
struct Layout {
  std::vector<CouplingPoint> points;
  int n_atoms = 0;
  double gamma_right = 1.0;
  double gamma_left = 0.0;

  int size() const { return static_cast<int>(points.size()); }
  bool bidirectional() const { return gamma_left > 0.0; }
  std::vector<int> atom_points(int j) const;  // nu indices of atom j, ascending

  // atom_of_phase: ordered {atom, phase} pairs in nu order.
  static Layout from_phases(const std::vector<std::pair<int, double>>& atom_of_phase,
                            double gamma_right, double gamma_left);
};

struct PositionedPoint {
  int atom;
  double x;
};

Layout phases_from_positions(double k0, std::vector<PositionedPoint> positions,
                             double gamma_right = 1.0, double gamma_left = 0.0);

struct DfReport {
  std::vector<double> per_atom_residual;  // |sum_l exp(-i phi_jl)| per atom
  bool is_df = false;
  double tolerance = tol::df_default;
  // |residual(phases)| vs |residual(conjugated phases)| gap, zero by symmetry
  double conjugate_residual_gap = 0.0;
};

DfReport df_residual(const Layout& layout, double tolerance = tol::df_default);

enum class TwoAtomClass { Serial, Nested, Braided, Other };
const char* to_string(TwoAtomClass c);

TwoAtomClass classify_two_atom(const Layout& layout);

// True iff a point of another atom lies strictly between atom j's outermost points.
bool is_interleaved(const Layout& layout, int j);

// Sectioned plain-text layout format:
//   k0=<float>                     (required iff points use x=)
//   gamma_right=<float>            (default 1.0)
//   gamma_left=<float>             (default 0.0)
//   point atom=<j> x=<float>       -- or --   point atom=<j> phase=<float>
// '#' comments and blank lines ignored; x= and phase= forms must not be mixed.
Layout parse_layout_text(std::istream& in);
Layout parse_layout_file(const std::string& path);
std::string format_layout_text(const Layout& layout);

}  // namespace dfh
