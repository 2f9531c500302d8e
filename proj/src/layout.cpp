#include "dfh/layout.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dfh {

namespace {

double reduce_phase(double raw) {
  double p = std::fmod(raw, 2.0 * M_PI);
  if (p < 0.0) p += 2.0 * M_PI;
  return p;
}

void validate(Layout& lay) {
  if (lay.points.empty()) throw std::invalid_argument("layout: no coupling points");
  if (lay.gamma_right < 0.0 || lay.gamma_left < 0.0)
    throw std::invalid_argument("layout: negative decay rate");
  int max_atom = -1;
  for (const auto& p : lay.points) {
    if (p.atom < 0) throw std::invalid_argument("layout: negative atom index");
    max_atom = std::max(max_atom, p.atom);
  }
  lay.n_atoms = max_atom + 1;
  std::vector<int> counts(lay.n_atoms, 0);
  for (auto& p : lay.points) {
    p.leg = counts[p.atom]++;
    p.phase = reduce_phase(p.raw_phase);
  }
  for (int j = 0; j < lay.n_atoms; ++j)
    if (counts[j] == 0)
      throw std::invalid_argument("layout: atom numbering has gaps (atom " +
                                  std::to_string(j) + " missing)");
}

}  // namespace

std::vector<int> Layout::atom_points(int j) const {
  std::vector<int> out;
  for (int nu = 0; nu < size(); ++nu)
    if (points[nu].atom == j) out.push_back(nu);
  return out;
}

Layout Layout::from_phases(const std::vector<std::pair<int, double>>& atom_of_phase,
                           double gamma_right, double gamma_left) {
  Layout lay;
  lay.gamma_right = gamma_right;
  lay.gamma_left = gamma_left;
  for (const auto& [atom, phase] : atom_of_phase)
    lay.points.push_back({atom, 0, 0.0, phase});
  validate(lay);
  return lay;
}

Layout phases_from_positions(double k0, std::vector<PositionedPoint> positions,
                             double gamma_right, double gamma_left) {
  if (k0 <= 0.0) throw std::invalid_argument("phases_from_positions: k0 must be > 0");
  std::stable_sort(positions.begin(), positions.end(),
                   [](const auto& a, const auto& b) { return a.x < b.x; });
  for (size_t i = 1; i < positions.size(); ++i)
    if (positions[i].x == positions[i - 1].x)
      throw std::invalid_argument("phases_from_positions: duplicate position x=" +
                                  std::to_string(positions[i].x));
  Layout lay;
  lay.gamma_right = gamma_right;
  lay.gamma_left = gamma_left;
  for (const auto& p : positions) lay.points.push_back({p.atom, 0, 0.0, k0 * p.x});
  validate(lay);
  return lay;
}

DfReport df_residual(const Layout& layout, double tolerance) {
  DfReport rep;
  rep.tolerance = tolerance;
  rep.is_df = true;
  for (int j = 0; j < layout.n_atoms; ++j) {
    Complex sum = 0.0, sum_conj = 0.0;
    for (int nu : layout.atom_points(j)) {
      sum += std::exp(Complex(0.0, -layout.points[nu].raw_phase));
      sum_conj += std::exp(Complex(0.0, +layout.points[nu].raw_phase));
    }
    rep.per_atom_residual.push_back(std::abs(sum));
    rep.conjugate_residual_gap =
        std::max(rep.conjugate_residual_gap, std::abs(std::abs(sum) - std::abs(sum_conj)));
    if (std::abs(sum) > tolerance) rep.is_df = false;
  }
  return rep;
}

const char* to_string(TwoAtomClass c) {
  switch (c) {
    case TwoAtomClass::Serial: return "serial";
    case TwoAtomClass::Nested: return "nested";
    case TwoAtomClass::Braided: return "braided";
    default: return "other";
  }
}

TwoAtomClass classify_two_atom(const Layout& layout) {
  if (layout.n_atoms != 2)
    throw std::invalid_argument("classify_two_atom: layout must have exactly 2 atoms");
  if (layout.atom_points(0).size() != 2 || layout.atom_points(1).size() != 2)
    return TwoAtomClass::Other;
  std::string pattern;
  for (const auto& p : layout.points) pattern += static_cast<char>('0' + p.atom);
  if (pattern == "0011" || pattern == "1100") return TwoAtomClass::Serial;
  if (pattern == "0110" || pattern == "1001") return TwoAtomClass::Nested;
  if (pattern == "0101" || pattern == "1010") return TwoAtomClass::Braided;
  return TwoAtomClass::Other;
}

bool is_interleaved(const Layout& layout, int j) {
  if (j < 0 || j >= layout.n_atoms)
    throw std::invalid_argument("is_interleaved: atom index out of range");
  auto pts = layout.atom_points(j);
  if (pts.size() < 2) return false;
  for (int nu = pts.front() + 1; nu < pts.back(); ++nu)
    if (layout.points[nu].atom != j) return true;
  return false;
}

namespace {

[[noreturn]] void parse_fail(int line_no, const std::string& msg) {
  throw std::invalid_argument("line " + std::to_string(line_no) + ": " + msg);
}

double parse_double(const std::string& s, int line_no) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    parse_fail(line_no, "bad number '" + s + "'");
  }
  if (used != s.size()) parse_fail(line_no, "trailing characters in number '" + s + "'");
  return v;
}

}  // namespace

Layout parse_layout_text(std::istream& in) {
  double k0 = 0.0, gr = 1.0, gl = 0.0;
  bool have_k0 = false;
  int x_form = 0, phase_form = 0;
  std::vector<PositionedPoint> xs;
  std::vector<std::pair<int, double>> phases;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;

    if (tok.rfind("k0=", 0) == 0) {
      k0 = parse_double(tok.substr(3), line_no);
      have_k0 = true;
    } else if (tok.rfind("gamma_right=", 0) == 0) {
      gr = parse_double(tok.substr(12), line_no);
    } else if (tok.rfind("gamma_left=", 0) == 0) {
      gl = parse_double(tok.substr(11), line_no);
    } else if (tok == "point") {
      int atom = -1;
      bool have_x = false, have_phase = false;
      double x = 0.0, phase = 0.0;
      std::string field;
      while (ls >> field) {
        if (field.rfind("atom=", 0) == 0) {
          atom = static_cast<int>(parse_double(field.substr(5), line_no));
        } else if (field.rfind("x=", 0) == 0) {
          x = parse_double(field.substr(2), line_no);
          have_x = true;
        } else if (field.rfind("phase=", 0) == 0) {
          phase = parse_double(field.substr(6), line_no);
          have_phase = true;
        } else {
          parse_fail(line_no, "unknown point field '" + field + "'");
        }
      }
      if (atom < 0) parse_fail(line_no, "point missing atom=");
      if (have_x == have_phase)
        parse_fail(line_no, "point needs exactly one of x= or phase=");
      if (have_x) {
        ++x_form;
        xs.push_back({atom, x});
      } else {
        ++phase_form;
        phases.emplace_back(atom, phase);
      }
    } else {
      parse_fail(line_no, "unknown directive '" + tok + "'");
    }
  }

  if (x_form > 0 && phase_form > 0)
    throw std::invalid_argument("layout mixes x= and phase= point forms");
  if (x_form == 0 && phase_form == 0) throw std::invalid_argument("layout has no points");
  try {
    if (x_form > 0) {
      if (!have_k0) throw std::invalid_argument("x= points require k0=");
      return phases_from_positions(k0, xs, gr, gl);
    }
    return Layout::from_phases(phases, gr, gl);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("layout: ") + e.what());
  }
}

Layout parse_layout_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open layout file " + path);
  return parse_layout_text(in);
}

std::string format_layout_text(const Layout& layout) {
  std::ostringstream out;
  out.precision(17);
  out << "gamma_right=" << layout.gamma_right << "\n";
  out << "gamma_left=" << layout.gamma_left << "\n";
  for (const auto& p : layout.points)
    out << "point atom=" << p.atom << " phase=" << p.raw_phase << "\n";
  return out.str();
}

}  // namespace dfh
