#include "dfh/dispersive.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace dfh {

namespace {

void check_modes(const ModeSet& modes, const AtomRegister& atoms) {
  if (modes.couplings.rows() != atoms.n_atoms)
    throw std::invalid_argument("mode couplings row count must match the atoms");
  if (modes.couplings.cols() != modes.n_modes())
    throw std::invalid_argument("mode couplings column count must match the detunings");
  if (modes.d < 2) throw std::invalid_argument("mode truncation needs at least two levels");
  for (int k = 0; k < modes.n_modes(); ++k)
    if (modes.detunings[k] == 0.0)
      throw std::invalid_argument(
          "zero detuning makes the averaged term singular");
  if (static_cast<long>(atoms.dim()) * modes.dim() > dim_cap())
    throw std::invalid_argument("joint dimension exceeds the dimension cap");
}

// a_k embedded on the mode factors alone (modes ordered as listed).
Mat mode_annihilator(const ModeSet& modes, int k) {
  Mat out = Mat::Identity(1, 1);
  const Mat a = annihilator(modes.d);
  const Mat eye = Mat::Identity(modes.d, modes.d);
  for (int m = 0; m < modes.n_modes(); ++m) out = kron(out, m == k ? a : eye);
  return out;
}

}  // namespace

int ModeSet::dim() const {
  long out = 1;
  for (int m = 0; m < n_modes(); ++m) out *= d;
  return static_cast<int>(out);
}

bool is_dispersive(const ModeSet& modes) {
  if (modes.n_modes() == 0) return true;
  const double dmin = modes.detunings.cwiseAbs().minCoeff();
  const double gmax = modes.couplings.size()
                          ? modes.couplings.cwiseAbs().maxCoeff()
                          : 0.0;
  return dmin >= 20.0 * gmax;
}

Mat windowed_average(const ModeSet& modes, const AtomRegister& atoms,
                     double t0, double dt) {
  check_modes(modes, atoms);
  if (!(dt > 0.0)) throw std::invalid_argument("window length must be positive");
  if (modes.n_modes() &&
      modes.detunings.cwiseAbs().minCoeff() * dt < 2.0 * M_PI)
    std::cerr << "warning: averaging window is shorter than a full period of "
                 "the slowest detuning; the average will not be small\n";
  const long dim = static_cast<long>(atoms.dim()) * modes.dim();
  Mat out = Mat::Zero(dim, dim);
  for (int k = 0; k < modes.n_modes(); ++k) {
    const double delta = modes.detunings[k];
    // (1/dt) \int e^{-i delta s} ds over [t0, t0+dt]
    const Complex w = (std::exp(Complex(0.0, -delta * (t0 + dt))) -
                       std::exp(Complex(0.0, -delta * t0))) /
                      Complex(0.0, -delta * dt);
    const Mat a_k = mode_annihilator(modes, k);
    for (int j = 0; j < atoms.n_atoms; ++j) {
      Mat term = modes.couplings(j, k) * w *
                 kron(Mat(atoms.sigma(j).adjoint()), a_k);
      out += term + Mat(term.adjoint());
    }
  }
  return out;
}

Mat dispersive_heff(const ModeSet& modes, const AtomRegister& atoms) {
  check_modes(modes, atoms);
  if (!is_dispersive(modes))
    std::cerr << "warning: detunings do not dominate the couplings; the "
                 "second-order reduction is unreliable here\n";
  Mat h = Mat::Zero(atoms.dim(), atoms.dim());
  for (int k = 0; k < modes.n_modes(); ++k)
    for (int j = 0; j < atoms.n_atoms; ++j)
      for (int jp = 0; jp < atoms.n_atoms; ++jp) {
        const Complex c = -modes.couplings(j, k) *
                          std::conj(modes.couplings(jp, k)) /
                          (2.0 * modes.detunings[k]);
        Mat term = c * Mat(atoms.sigma(jp).adjoint() * atoms.sigma(j));
        h += term + Mat(term.adjoint());
      }
  return h;
}

Mat full_hamiltonian(const ModeSet& modes, const AtomRegister& atoms) {
  check_modes(modes, atoms);
  const long dim = static_cast<long>(atoms.dim()) * modes.dim();
  Mat h = Mat::Zero(dim, dim);
  const Mat atom_eye = atoms.identity();
  for (int k = 0; k < modes.n_modes(); ++k) {
    const Mat a_k = mode_annihilator(modes, k);
    h += modes.detunings[k] * kron(atom_eye, Mat(a_k.adjoint() * a_k));
    for (int j = 0; j < atoms.n_atoms; ++j) {
      Mat term = modes.couplings(j, k) *
                 kron(Mat(atoms.sigma(j).adjoint()), a_k);
      h += term + Mat(term.adjoint());
    }
  }
  return h;
}

}  // namespace dfh
