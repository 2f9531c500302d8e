#include "dfh/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dfh {

namespace {

constexpr double pi = std::numbers::pi;

Mat lower2() {
  Mat s = Mat::Zero(2, 2);
  s(0, 1) = 1.0;  // |g><e| with g = 0, e = 1
  return s;
}

std::string qubit_name(int q) {
  return q == qubit_m ? std::string("M") : "A" + std::to_string(q - 1);
}

// Embed a 4x4 two-qubit gate on (a, b) — a the leftmost factor of g — into
// the full register, qubit 0 leftmost.
Mat embed_two(const Mat& g, int a, int b, int n) {
  std::vector<int> order{a, b};
  for (int q = 0; q < n; ++q)
    if (q != a && q != b) order.push_back(q);
  const long rest = 1L << (n - 2);
  Mat big = kron(g, Mat::Identity(rest, rest));
  std::vector<int> dims(n, 2), perm(n);
  for (int q = 0; q < n; ++q)
    perm[q] = static_cast<int>(std::find(order.begin(), order.end(), q) -
                               order.begin());
  return permute_factors(big, dims, perm);
}

Mat embed_one(const Mat& g, int a, int n) {
  Mat out = Mat::Identity(1, 1);
  for (int q = 0; q < n; ++q)
    out = kron(out, q == a ? g : Mat::Identity(2, 2));
  return out;
}

void check_targets(const Gate& g, int n_qubits) {
  const std::size_t want = g.kind == Gate::Kind::PhaseZ ? 1 : 2;
  if (g.targets.size() != want)
    throw std::invalid_argument("gate has the wrong number of targets");
  for (int t : g.targets)
    if (t < 0 || t >= n_qubits)
      throw std::invalid_argument("gate target out of range");
  if (want == 2 && g.targets[0] == g.targets[1])
    throw std::invalid_argument("gate targets must be distinct");
  if (g.kind == Gate::Kind::XY && g.targets[0] != qubit_m &&
      g.targets[1] != qubit_m)
    throw std::invalid_argument("exchange gates must act on the mediator");
  if (g.kind == Gate::Kind::U4) {
    if (g.custom.rows() != 4 || g.custom.cols() != 4)
      throw std::invalid_argument("u4 gate needs a 4x4 matrix");
    if (!is_unitary(g.custom))
      throw std::invalid_argument("u4 gate matrix is not unitary");
  }
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

[[noreturn]] void parse_fail(int line_no, const std::string& what) {
  throw std::invalid_argument("line " + std::to_string(line_no) + ": " + what);
}

// "q[3]" -> 3; "q[1],q[2]" -> {1, 2}
std::vector<int> parse_qubits(const std::string& token, std::size_t count,
                              int line_no) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < token.size()) {
    if (token.compare(pos, 2, "q[") != 0)
      parse_fail(line_no, "expected q[<index>] in '" + token + "'");
    std::size_t close = token.find(']', pos + 2);
    if (close == std::string::npos)
      parse_fail(line_no, "missing ']' in '" + token + "'");
    const std::string num = token.substr(pos + 2, close - pos - 2);
    try {
      std::size_t used = 0;
      int q = std::stoi(num, &used);
      if (used != num.size() || q < 0) throw std::invalid_argument(num);
      out.push_back(q);
    } catch (const std::exception&) {
      parse_fail(line_no, "bad qubit index '" + num + "'");
    }
    pos = close + 1;
    if (pos < token.size()) {
      if (token[pos] != ',') parse_fail(line_no, "expected ',' between qubits");
      ++pos;
    }
  }
  if (out.size() != count)
    parse_fail(line_no, "expected " + std::to_string(count) + " qubit(s)");
  return out;
}

double parse_keyed_float(const std::string& token, const std::string& key,
                         int line_no) {
  if (token.compare(0, key.size() + 1, key + "=") != 0)
    parse_fail(line_no, "expected " + key + "=<value>, got '" + token + "'");
  const std::string num = token.substr(key.size() + 1);
  try {
    std::size_t used = 0;
    double v = std::stod(num, &used);
    if (used != num.size()) throw std::invalid_argument(num);
    return v;
  } catch (const std::exception&) {
    parse_fail(line_no, "bad float '" + num + "'");
  }
}

Mat parse_u4_block(const std::string& token, int line_no) {
  if (token.compare(0, 2, "m=") != 0)
    parse_fail(line_no, "expected m=<32 floats>, got '" + token + "'");
  std::vector<double> vals;
  std::stringstream ss(token.substr(2));
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(piece, &used));
      if (used != piece.size()) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      parse_fail(line_no, "bad float '" + piece + "' in u4 block");
    }
  }
  if (vals.size() != 32)
    parse_fail(line_no, "u4 block needs 32 floats, got " +
                            std::to_string(vals.size()));
  Mat m(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      m(r, c) = Complex(vals[2 * (4 * r + c)], vals[2 * (4 * r + c) + 1]);
  return m;
}

}  // namespace

Mat xy_matrix(double delta) {
  const double c = std::cos(pi * delta), s = std::sin(pi * delta);
  Mat m = Mat::Identity(4, 4);
  m(1, 1) = c;
  m(2, 2) = c;
  m(1, 2) = Complex(0.0, -s);
  m(2, 1) = Complex(0.0, -s);
  return m;
}

Mat phase_z_matrix(double theta) {
  Mat m = Mat::Identity(2, 2);
  m(1, 1) = std::exp(Complex(0.0, theta));
  return m;
}

Circuit compile_braided(double gamma, double dt, double phase_kick,
                        bool allow_large) {
  if (!(gamma > 0.0) || !(dt > 0.0))
    throw std::invalid_argument("compile_braided: gamma and dt must be positive");
  const double gd = gamma * dt;
  if (gd > 0.25 && !allow_large)
    throw std::invalid_argument(
        "compile_braided: gamma*dt above 0.25 leaves the weak-exchange regime "
        "(pass allow_large to override)");
  const double delta = std::sqrt(gd) / pi;
  Circuit c;
  c.n_qubits = 3;
  const Gate xy0{Gate::Kind::XY, {qubit_m, qubit_a0}, delta, {}};
  const Gate xy1{Gate::Kind::XY, {qubit_m, qubit_a1}, delta, {}};
  const Gate kick{Gate::Kind::PhaseZ, {qubit_m}, phase_kick, {}};
  c.gates = {xy0, xy1, kick, xy0, xy1, kick};
  return c;
}

Mat circuit_unitary(const Circuit& c) {
  if (c.n_qubits < 1)
    throw std::invalid_argument("circuit needs at least one qubit");
  const long dim = 1L << c.n_qubits;
  if (dim > dim_cap())
    throw std::invalid_argument("circuit dimension exceeds the dimension cap");
  Mat u = Mat::Identity(dim, dim);
  for (const Gate& g : c.gates) {
    check_targets(g, c.n_qubits);
    Mat step;
    switch (g.kind) {
      case Gate::Kind::XY:
        step = embed_two(xy_matrix(g.param), g.targets[0], g.targets[1],
                         c.n_qubits);
        break;
      case Gate::Kind::PhaseZ:
        step = embed_one(phase_z_matrix(g.param), g.targets[0], c.n_qubits);
        break;
      case Gate::Kind::U4:
        step = embed_two(g.custom, g.targets[0], g.targets[1], c.n_qubits);
        break;
    }
    u = step * u;  // first gate listed acts first
  }
  return u;
}

long iswap_iterations(double gamma, double dt) {
  if (!(gamma * dt > 0.0))
    throw std::invalid_argument("iswap_iterations: gamma*dt must be positive");
  return static_cast<long>(std::floor(1.0 / (gamma * dt)));
}

double mediator_flip_weight(const Mat& u) {
  if (u.rows() != u.cols() || u.rows() < 2 || u.rows() % 2 != 0)
    throw std::invalid_argument(
        "mediator_flip_weight: need a square matrix of even dimension");
  const long h = u.rows() / 2;
  return std::max(max_abs(u.block(0, h, h, h)), max_abs(u.block(h, 0, h, h)));
}

std::string emit_text(const Circuit& c) {
  std::string out = "qubits " + std::to_string(c.n_qubits) + "\n#";
  for (int q = 0; q < c.n_qubits; ++q)
    out += " q[" + std::to_string(q) + "]=" + qubit_name(q);
  out += "\n";
  for (const Gate& g : c.gates) {
    check_targets(g, c.n_qubits);
    switch (g.kind) {
      case Gate::Kind::XY:
        out += "xy q[" + std::to_string(g.targets[0]) + "],q[" +
               std::to_string(g.targets[1]) + "] delta=" + fmt17(g.param);
        break;
      case Gate::Kind::PhaseZ:
        out += "rz q[" + std::to_string(g.targets[0]) +
               "] theta=" + fmt17(g.param);
        break;
      case Gate::Kind::U4: {
        out += "u4 q[" + std::to_string(g.targets[0]) + "],q[" +
               std::to_string(g.targets[1]) + "] m=";
        for (int r = 0; r < 4; ++r)
          for (int col = 0; col < 4; ++col) {
            if (r != 0 || col != 0) out += ",";
            out += fmt17(g.custom(r, col).real()) + "," +
                   fmt17(g.custom(r, col).imag());
          }
        break;
      }
    }
    out += "\n";
  }
  return out;
}

Circuit parse_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool have_header = false;
  Circuit c;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string op;
    if (!(ls >> op) || op[0] == '#') continue;
    std::string tgt, arg, extra;
    if (op == "qubits") {
      if (have_header) parse_fail(line_no, "duplicate qubits header");
      int n = 0;
      if (!(ls >> n) || n < 1) parse_fail(line_no, "bad qubit count");
      if (ls >> extra) parse_fail(line_no, "trailing text '" + extra + "'");
      c.n_qubits = n;
      have_header = true;
      continue;
    }
    if (!have_header) parse_fail(line_no, "expected 'qubits <n>' header first");
    if (!(ls >> tgt >> arg))
      parse_fail(line_no, "gate line needs targets and a parameter");
    if (ls >> extra) parse_fail(line_no, "trailing text '" + extra + "'");
    Gate g;
    if (op == "xy") {
      g.kind = Gate::Kind::XY;
      g.targets = parse_qubits(tgt, 2, line_no);
      g.param = parse_keyed_float(arg, "delta", line_no);
    } else if (op == "rz") {
      g.kind = Gate::Kind::PhaseZ;
      g.targets = parse_qubits(tgt, 1, line_no);
      g.param = parse_keyed_float(arg, "theta", line_no);
    } else if (op == "u4") {
      g.kind = Gate::Kind::U4;
      g.targets = parse_qubits(tgt, 2, line_no);
      g.custom = parse_u4_block(arg, line_no);
    } else {
      parse_fail(line_no, "unknown gate '" + op + "'");
    }
    for (int t : g.targets)
      if (t >= c.n_qubits) parse_fail(line_no, "qubit index out of range");
    c.gates.push_back(g);
  }
  if (!have_header) parse_fail(line_no ? line_no : 1, "missing qubits header");
  return c;
}

Circuit compile_layout(const Layout& layout, double dt) {
  if (layout.gamma_left > 0.0)
    throw std::invalid_argument(
        "compile_layout: only one-way layouts compile to mediator circuits");
  if (!(dt > 0.0)) throw std::invalid_argument("compile_layout: dt must be positive");
  const double theta = std::sqrt(layout.gamma_right * dt);
  const Mat sm = lower2(), sp = sm.adjoint();
  Circuit c;
  c.n_qubits = 1 + layout.n_atoms;
  for (const CouplingPoint& p : layout.points) {
    const Complex ph = std::exp(Complex(0.0, -p.raw_phase));
    Mat h2 = ph * kron(sp, sm);  // mediator absorbs the emitted excitation
    h2 += h2.adjoint().eval();
    Gate g;
    g.kind = Gate::Kind::U4;
    g.targets = {qubit_m, 1 + p.atom};
    g.custom = expm_generator(h2, theta);
    c.gates.push_back(g);
  }
  return c;
}

}  // namespace dfh
