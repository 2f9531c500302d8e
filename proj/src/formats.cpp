#include "dfh/formats.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dfh {

namespace {

std::string sci17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17e", v);
  return buf;
}

[[noreturn]] void line_fail(int line_no, const std::string& what) {
  throw std::invalid_argument("line " + std::to_string(line_no) + ": " + what);
}

double to_double(const std::string& s, int line_no) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    line_fail(line_no, "bad float '" + s + "'");
  }
}

int to_int(const std::string& s, int line_no) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    line_fail(line_no, "bad integer '" + s + "'");
  }
}

}  // namespace

std::string format_trajectory_csv(const Trajectory& t) {
  const int n_atoms = static_cast<int>(t.populations.cols());
  const bool with_ref = !t.ref_distance.empty();
  std::string out = "t";
  for (int j = 0; j < n_atoms; ++j) out += ",pop_" + std::to_string(j);
  out += ",purity";
  if (with_ref) out += ",ref_distance";
  out += "\n";
  for (std::size_t k = 0; k < t.times.size(); ++k) {
    out += sci17(t.times[k]);
    for (int j = 0; j < n_atoms; ++j)
      out += "," + sci17(t.populations(static_cast<int>(k), j));
    out += "," + sci17(t.purity[k]);
    if (with_ref) out += "," + sci17(t.ref_distance[k]);
    out += "\n";
  }
  return out;
}

std::string format_matrix_csv(const Mat& m) {
  std::string out;
  for (long r = 0; r < m.rows(); ++r) {
    for (long c = 0; c < m.cols(); ++c) {
      if (c) out += ",";
      out += sci17(m(r, c).real()) + "," + sci17(m(r, c).imag());
    }
    out += "\n";
  }
  return out;
}

SimParams parse_sim_params(std::istream& in) {
  SimParams p;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string token;
    if (!(ls >> token) || token[0] == '#') continue;
    std::string extra;
    if (ls >> extra) line_fail(line_no, "one key=value per line");
    const auto eq = token.find('=');
    if (eq == std::string::npos)
      line_fail(line_no, "expected key=value, got '" + token + "'");
    const std::string key = token.substr(0, eq), val = token.substr(eq + 1);
    if (key == "dt") {
      p.dt = to_double(val, line_no);
    } else if (key == "steps") {
      p.steps = to_int(val, line_no);
    } else if (key == "initial") {
      p.initial = val;
    } else if (key == "d_right") {
      p.d_right = to_int(val, line_no);
    } else if (key == "d_left") {
      p.d_left = to_int(val, line_no);
    } else if (key == "engine") {
      try {
        p.engine = engine_from_name(val);
      } catch (const std::invalid_argument& e) {
        line_fail(line_no, e.what());
      }
    } else if (key == "reference") {
      if (val == "effective")
        p.reference = true;
      else if (val == "none")
        p.reference = false;
      else
        line_fail(line_no, "reference must be none or effective");
    } else if (key == "record_bins") {
      if (val == "0" || val == "1" || val == "true" || val == "false")
        p.record_bins = val == "1" || val == "true";
      else
        line_fail(line_no, "record_bins must be 0/1 or true/false");
    } else {
      line_fail(line_no, "unknown key '" + key + "'");
    }
  }
  return p;
}

SimParams parse_sim_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  return parse_sim_params(in);
}

Engine engine_from_name(const std::string& name) {
  if (name == "cascaded") return Engine::Cascaded;
  if (name == "simultaneous") return Engine::Simultaneous;
  if (name == "magnus") return Engine::MagnusLinear;
  if (name == "effective") return Engine::Effective;
  throw std::invalid_argument(
      "unknown engine '" + name +
      "' (expected cascaded, simultaneous, magnus, or effective)");
}

const char* to_string(Engine e) {
  switch (e) {
    case Engine::Cascaded: return "cascaded";
    case Engine::Simultaneous: return "simultaneous";
    case Engine::MagnusLinear: return "magnus";
    case Engine::Effective: return "effective";
  }
  return "?";
}

int basis_index(const std::string& label, int n_atoms) {
  if (static_cast<int>(label.size()) != n_atoms)
    throw std::invalid_argument("basis label '" + label + "' needs one "
                                "character per atom (" +
                                std::to_string(n_atoms) + ")");
  int idx = 0;
  for (char c : label) {
    if (c != 'g' && c != 'e')
      throw std::invalid_argument("basis label characters must be g or e");
    idx = 2 * idx + (c == 'e' ? 1 : 0);
  }
  return idx;
}

}  // namespace dfh
