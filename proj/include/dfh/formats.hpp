#pragma once

#include <iosfwd>
#include <string>

#include "dfh/collision.hpp"

namespace dfh {

// Trajectory CSV: header `t,pop_0,...,pop_{n-1},purity[,ref_distance]`, one
// row per recorded step, full double precision scientific notation. The
// ref_distance column appears only when the run tracked a reference.
std::string format_trajectory_csv(const Trajectory& t);

// Row-major matrix CSV: each entry contributes a `re,im` pair.
std::string format_matrix_csv(const Mat& m);

// Simulation parameters, plain key=value text ('#' comments, blank lines ok):
//   dt=<float>           coarse step, units 1/gamma      (default 0.01)
//   steps=<int>          number of collisions            (default 100)
//   initial=<label>      basis label, one char per atom from {g, e},
//                        atom 0 first                    (default all-g
//                        with the first atom excited, written per run)
//   d_right=<int>        right bin truncation            (default 2)
//   d_left=<int>         left bin truncation, 0 = none   (default 0)
//   engine=<name>        cascaded|simultaneous|magnus|effective
//   reference=<name>     none|effective
//   record_bins=<0|1>    record outgoing-bin deviation   (default 0)
struct SimParams {
  double dt = 0.01;
  int steps = 100;
  std::string initial;  // empty = first atom excited, rest ground
  int d_right = 2;
  int d_left = 0;
  Engine engine = Engine::Cascaded;
  bool reference = false;
  bool record_bins = false;
};

SimParams parse_sim_params(std::istream& in);
SimParams parse_sim_params_file(const std::string& path);

// "cascaded" | "simultaneous" | "magnus" | "effective"
Engine engine_from_name(const std::string& name);
const char* to_string(Engine e);

// Basis label -> computational index: atom 0 is the leftmost character and the
// leftmost tensor factor; 'e' = 1, 'g' = 0 (e.g. "eg" -> 2 for two atoms).
int basis_index(const std::string& label, int n_atoms);

}  // namespace dfh
