#include "dfh/effective.hpp"

#include <cmath>
#include <stdexcept>

namespace dfh {

namespace {

const Mat kSigma = (Mat(2, 2) << 0, 1, 0, 0).finished();        // |g><e|
const Mat kSigmaZ = (Mat(2, 2) << -1, 0, 0, 1).finished();      // |e><e| - |g><g|

Mat atom_embedded(int n_atoms, int j, const Mat& op) {
  if (j < 0 || j >= n_atoms) throw std::invalid_argument("atom index out of range");
  std::vector<Mat> factors;
  for (int a = 0; a < n_atoms; ++a)
    factors.push_back(a == j ? op : Mat::Identity(2, 2));
  return kron_all(factors);
}

}  // namespace

Mat AtomRegister::sigma(int j) const { return atom_embedded(n_atoms, j, kSigma); }
Mat AtomRegister::sigma_z(int j) const { return atom_embedded(n_atoms, j, kSigmaZ); }

std::vector<int> BinRegister::factor_dims() const {
  if (d_right < 2) throw std::invalid_argument("bin register needs d_right >= 2");
  if (d_left > 0 && d_left < 2)
    throw std::invalid_argument("bin register needs d_left >= 2 when present");
  std::vector<int> dims{d_right};
  if (d_left > 0) dims.push_back(d_left);
  return dims;
}

Mat annihilator(int d) {
  if (d < 2) throw std::invalid_argument("annihilator: dimension must be >= 2");
  Mat b = Mat::Zero(d, d);
  for (int k = 1; k < d; ++k) b(k - 1, k) = std::sqrt(static_cast<double>(k));
  return b;
}

CollectiveOps collective_ops(const Layout& layout, const AtomRegister& atoms) {
  if (atoms.n_atoms != layout.n_atoms)
    throw std::invalid_argument("collective_ops: register/layout atom count mismatch");
  Mat S = Mat::Zero(atoms.dim(), atoms.dim());
  Mat Sp = Mat::Zero(atoms.dim(), atoms.dim());
  for (const auto& p : layout.points) {
    Mat s = atoms.sigma(p.atom);
    S += std::exp(Complex(0.0, -p.raw_phase)) * s;
    Sp += std::exp(Complex(0.0, +p.raw_phase)) * s;
  }
  return {S, Sp};
}

Mat averaged_interaction(const Layout& layout, const AtomRegister& atoms,
                         const BinRegister& bins, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("averaged_interaction: dt must be > 0");
  if (layout.bidirectional() && !bins.bidirectional())
    throw std::invalid_argument("averaged_interaction: bidirectional layout needs a left bin");
  auto ops = collective_ops(layout, atoms);
  const Mat br_dag = Mat(annihilator(bins.d_right).adjoint());
  Mat v;
  if (bins.bidirectional()) {
    const Mat bl_dag = Mat(annihilator(bins.d_left).adjoint());
    v = std::sqrt(layout.gamma_right) *
            kron_all({ops.S, br_dag, Mat::Identity(bins.d_left, bins.d_left)}) +
        std::sqrt(layout.gamma_left) *
            kron_all({ops.S_prime, Mat::Identity(bins.d_right, bins.d_right), bl_dag});
  } else {
    v = std::sqrt(layout.gamma_right) * kron(ops.S, br_dag);
  }
  v /= std::sqrt(dt);
  return v + Mat(v.adjoint());
}

Mat effective_atoms(const Layout& layout, const AtomRegister& atoms) {
  if (atoms.n_atoms != layout.n_atoms)
    throw std::invalid_argument("effective_atoms: register/layout atom count mismatch");
  const int N = layout.size();
  Mat H = Mat::Zero(atoms.dim(), atoms.dim());
  for (int nu = 0; nu < N; ++nu) {
    const Mat s_nu = atoms.sigma(layout.points[nu].atom);
    for (int nup = 0; nup < nu; ++nup) {
      const Mat s_nup = atoms.sigma(layout.points[nup].atom);
      const double ph_nu = layout.points[nu].raw_phase;
      const double ph_nup = layout.points[nup].raw_phase;
      // gamma S_nu'^dag S_nu + gamma' S'_nu^dag S'_nu'
      Mat x = layout.gamma_right * std::exp(Complex(0.0, ph_nup - ph_nu)) *
                  Mat(s_nup.adjoint() * s_nu) +
              layout.gamma_left * std::exp(Complex(0.0, -ph_nu + ph_nup)) *
                  Mat(s_nu.adjoint() * s_nup);
      H += Complex(0.0, 0.5) * (x - Mat(x.adjoint()));
    }
  }
  return H;
}

Mat second_order_H(const Layout& layout, const AtomRegister& atoms,
                   const BinRegister& bins) {
  return kron(effective_atoms(layout, atoms), Mat::Identity(bins.dim(), bins.dim()));
}

CouplingMatrixJ coupling_matrix(const Layout& layout) {
  const int n = layout.n_atoms;
  CouplingMatrixJ out;
  out.J = Mat::Zero(n, n);
  out.K = Mat::Zero(n, n);
  const double gp = layout.gamma_right, gm = layout.gamma_left;
  for (int q = 0; q < layout.size(); ++q)
    for (int p = 0; p < q; ++p) {
      // later point q belongs to the second index atom
      const int j = layout.points[p].atom, jp = layout.points[q].atom;
      const double dphi = layout.points[q].raw_phase - layout.points[p].raw_phase;
      out.J(j, jp) += Complex((gp + gm) / 2.0 * std::sin(dphi),
                              (gp - gm) / 2.0 * std::cos(dphi));
      out.K(j, jp) += 0.5 * std::exp(Complex(0.0, -dphi + M_PI / 2.0));
    }
  return out;
}

Mat hamiltonian_from_coupling(const Mat& J, const AtomRegister& atoms) {
  if (J.rows() != atoms.n_atoms || J.cols() != atoms.n_atoms)
    throw std::invalid_argument("hamiltonian_from_coupling: J size mismatch");
  Mat H = Mat::Zero(atoms.dim(), atoms.dim());
  for (int j = 0; j < atoms.n_atoms; ++j)
    for (int jp = 0; jp < atoms.n_atoms; ++jp) {
      Mat term = J(j, jp) * Mat(atoms.sigma(j).adjoint() * atoms.sigma(jp));
      H += term + Mat(term.adjoint());
    }
  return H;
}

double lamb_shift_check(const Layout& layout) {
  if (layout.n_atoms != 1)
    throw std::invalid_argument("lamb_shift_check: needs a single atom");
  if (layout.size() < 2)
    throw std::invalid_argument("lamb_shift_check: needs at least two coupling points");
  if (layout.gamma_left != 0.0)
    throw std::invalid_argument("lamb_shift_check: defined for one-way coupling only");
  if (!df_residual(layout).is_df)
    throw std::invalid_argument("lamb_shift_check: layout is not decoherence-free");
  AtomRegister atoms{1};
  Mat H = effective_atoms(layout, atoms);
  // H = c0 I + cz sigma_z with sigma_z = diag(-1, +1)
  return ((H(1, 1) - H(0, 0)) / 2.0).real();
}

Mat magnus_step_unitary(const Layout& layout, const AtomRegister& atoms,
                        const BinRegister& bins, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("magnus_step_unitary: dt must be > 0");
  const Mat v = averaged_interaction(layout, atoms, bins, dt);
  const Mat h = second_order_H(layout, atoms, bins);
  const long d = v.rows();
  return Mat::Identity(d, d) - Complex(0.0, dt) * (v + h) - (dt * dt / 2.0) * v * v;
}

}  // namespace dfh
