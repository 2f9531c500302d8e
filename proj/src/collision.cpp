#include "dfh/collision.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "dfh/circuit.hpp"

namespace dfh {

namespace {

// Validate a density matrix and return it normalized to unit trace.
Mat checked_density(const Mat& rho, int dim, const char* what) {
  if (rho.rows() != dim || rho.cols() != dim)
    throw std::invalid_argument(std::string(what) + " has the wrong dimension");
  if (!is_hermitian(rho, 1e-9))
    throw std::invalid_argument(std::string(what) + " is not Hermitian");
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > 1e-6)
    throw std::invalid_argument(std::string(what) + " is not trace-normalized");
  return rho / tr;
}

void check_bins(const Layout& layout, const BinRegister& bins) {
  if (layout.gamma_left > 0.0 && !bins.bidirectional())
    throw std::invalid_argument(
        "layout couples to the left-moving field but no left bin was given");
  if (bins.d_right < 2)
    throw std::invalid_argument("right bin needs at least two levels");
}

Mat right_term(const Layout& layout, const AtomRegister& atoms,
               const BinRegister& bins, double dt, int point) {
  const auto& p = layout.points[point];
  Mat bdag = Mat(annihilator(bins.d_right).adjoint());
  Mat op = std::sqrt(layout.gamma_right / dt) *
           std::exp(Complex(0.0, -p.raw_phase)) *
           kron(atoms.sigma(p.atom), bdag);
  if (bins.bidirectional())
    op = kron(op, Mat::Identity(bins.d_left, bins.d_left));
  return op + Mat(op.adjoint());
}

Mat left_term(const Layout& layout, const AtomRegister& atoms,
              const BinRegister& bins, double dt, int point) {
  const auto& p = layout.points[point];
  Mat bdag = Mat(annihilator(bins.d_left).adjoint());
  Mat op = std::sqrt(layout.gamma_left / dt) *
           std::exp(Complex(0.0, +p.raw_phase)) *
           kron(atoms.sigma(p.atom),
                kron(Mat::Identity(bins.d_right, bins.d_right), bdag));
  return op + Mat(op.adjoint());
}

Mat vacuum_projector(int dim) {
  Mat p = Mat::Zero(dim, dim);
  p(0, 0) = 1.0;
  return p;
}

}  // namespace

std::vector<SubcollisionGen> subcollision_generators(const Layout& layout,
                                                     const AtomRegister& atoms,
                                                     const BinRegister& bins,
                                                     double dt) {
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
  check_bins(layout, bins);
  const int n = layout.size();
  std::vector<SubcollisionGen> out;
  for (int s = 0; s < n; ++s) {
    out.push_back({s, s, SubcollisionGen::Dir::Right,
                   right_term(layout, atoms, bins, dt, s)});
    if (bins.bidirectional()) {
      int mu = n - 1 - s;  // the left-moving bin meets the points in reverse
      out.push_back({s, mu, SubcollisionGen::Dir::Left,
                     left_term(layout, atoms, bins, dt, mu)});
    }
  }
  return out;
}

std::vector<Mat> slot_generators(const Layout& layout, const AtomRegister& atoms,
                                 const BinRegister& bins, double dt) {
  auto gens = subcollision_generators(layout, atoms, bins, dt);
  const int dim = atoms.dim() * bins.dim();
  std::vector<Mat> slots(layout.size(), Mat::Zero(dim, dim));
  for (const auto& g : gens) slots[g.slot] += g.generator;
  return slots;
}

Mat cascaded_unitary(const Layout& layout, const AtomRegister& atoms,
                     const BinRegister& bins, double dt) {
  auto slots = slot_generators(layout, atoms, bins, dt);
  const int dim = atoms.dim() * bins.dim();
  Mat u = Mat::Identity(dim, dim);
  for (const auto& g : slots) u = expm_generator(g, dt) * u;
  return u;
}

Mat simultaneous_unitary(const Layout& layout, const AtomRegister& atoms,
                         const BinRegister& bins, double dt) {
  return expm_generator(averaged_interaction(layout, atoms, bins, dt), dt);
}

Mat commutator_assembly(const Layout& layout, const AtomRegister& atoms,
                        const BinRegister& bins) {
  check_bins(layout, bins);
  BinRegister head{bins.d_right + 1,
                   bins.bidirectional() ? bins.d_left + 1 : 0};
  auto slots = slot_generators(layout, atoms, head, 1.0);
  const int hdim = atoms.dim() * head.dim();
  Mat h = Mat::Zero(hdim, hdim);
  const Complex half_i(0.0, 0.5);
  for (size_t v = 0; v < slots.size(); ++v)
    for (size_t vp = 0; vp < v; ++vp)
      h += half_i * (slots[vp] * slots[v] - slots[v] * slots[vp]);

  // drop the headroom level of each bin
  std::vector<int> keep;
  keep.reserve(atoms.dim() * bins.dim());
  const int dl = bins.bidirectional() ? bins.d_left : 1;
  const int hl = bins.bidirectional() ? head.d_left : 1;
  for (int a = 0; a < atoms.dim(); ++a)
    for (int k = 0; k < bins.d_right; ++k)
      for (int kp = 0; kp < dl; ++kp)
        keep.push_back((a * head.d_right + k) * hl + kp);
  Mat out(keep.size(), keep.size());
  for (size_t i = 0; i < keep.size(); ++i)
    for (size_t j = 0; j < keep.size(); ++j) out(i, j) = h(keep[i], keep[j]);
  return out;
}

Mat assembly_residual(const Layout& layout, const AtomRegister& atoms,
                      const BinRegister& bins) {
  const int dim = atoms.dim() * bins.dim();
  Mat out = Mat::Zero(dim, dim);
  const int n = layout.size();
  const bool two_way = bins.bidirectional();

  Mat br = annihilator(bins.d_right);
  Mat num_r = Mat(br.adjoint()) * br;
  Mat shift_r = two_way
                    ? kron(num_r, Mat::Identity(bins.d_left, bins.d_left))
                    : num_r;
  Mat shift_l, up, down;
  if (two_way) {
    Mat bl = annihilator(bins.d_left);
    shift_l = kron(Mat::Identity(bins.d_right, bins.d_right),
                   Mat(Mat(bl.adjoint()) * bl));
    up = kron(Mat(br.adjoint()), bl);  // right-bin raise, left-bin lower
    down = kron(br, Mat(bl.adjoint()));
  }
  const double cross_scale =
      two_way ? 0.5 * std::sqrt(layout.gamma_right * layout.gamma_left) : 0.0;

  for (int j = 0; j < atoms.n_atoms; ++j) {
    double d_sum = 0.0;
    Complex c(0.0, 0.0);
    for (int p = 0; p < n; ++p) {
      if (layout.points[p].atom != j) continue;
      for (int q = 0; q < n; ++q) {
        if (layout.points[q].atom != j) continue;
        if (p < q)
          d_sum += std::sin(layout.points[q].raw_phase -
                            layout.points[p].raw_phase);
        int s = (p + 1) + (q + 1);
        if (s == n + 1) continue;
        double sign = (s <= n) ? -1.0 : +1.0;
        c += sign * std::exp(Complex(
                        0.0, -(layout.points[p].raw_phase +
                               layout.points[q].raw_phase)));
      }
    }
    Mat bin_op = layout.gamma_right * d_sum * shift_r;
    if (two_way) {
      bin_op += layout.gamma_left * d_sum * shift_l;
      bin_op += Complex(0.0, cross_scale) * (c * up - std::conj(c) * down);
    }
    out += kron(atoms.sigma_z(j), bin_op);
  }
  return out;
}

MagnusReport magnus_consistency(const Layout& layout, const AtomRegister& atoms,
                                const BinRegister& bins, double dt) {
  auto df = df_residual(layout);
  if (!df.is_df)
    throw std::invalid_argument(
        "step-size consistency is only defined for decoherence-free layouts");
  Mat h = second_order_H(layout, atoms, bins);
  auto vacuum_column_err = [&](double step) {
    Mat diff = cascaded_unitary(layout, atoms, bins, step) -
               expm_generator(h, step);
    double worst = 0.0;
    for (int a = 0; a < atoms.dim(); ++a)
      worst = std::max(worst, diff.col(a * bins.dim()).cwiseAbs().maxCoeff());
    return worst;
  };
  MagnusReport rep;
  rep.err2 = vacuum_column_err(dt);
  double half = vacuum_column_err(dt / 2.0);
  rep.order = (rep.err2 < 1e-15 && half < 1e-15)
                  ? 0.0  // both sides identical; no scaling to measure
                  : std::log2(rep.err2 / half);
  return rep;
}

Mat pure_state(const Vec& psi) {
  double nrm = psi.norm();
  if (nrm <= 0.0) throw std::invalid_argument("zero state vector");
  Vec v = psi / nrm;
  return v * v.adjoint();
}

Trajectory run_stream(const SimConfig& cfg) {
  const Layout& lay = cfg.layout;
  const AtomRegister& atoms = cfg.atoms;
  if (cfg.dt <= 0.0) throw std::invalid_argument("dt must be positive");
  if (cfg.steps < 0) throw std::invalid_argument("steps must be non-negative");
  Mat rho = checked_density(cfg.initial_atom_state, atoms.dim(), "initial state");
  if (std::max(lay.gamma_right, lay.gamma_left) * cfg.dt > 0.1)
    std::cerr << "warning: gamma*dt exceeds 0.1; the coarse step is outside "
                 "the regime the stream model is built for\n";
  if (cfg.engine != Engine::Effective && !df_residual(lay).is_df)
    std::cerr << "warning: layout is not decoherence-free; the reduced atom "
                 "dynamics will generally be non-unitary\n";
  if (cfg.engine != Engine::Effective &&
      atoms.dim() * cfg.bins.dim() > dim_cap())
    throw std::invalid_argument("joint dimension exceeds the dimension cap");

  const int da = atoms.dim();

  Mat step_op;           // joint-space step (engines with bins)
  Mat atom_step;         // atoms-only step (effective engine / reference)
  bool renormalize = false;
  const bool uses_bins = cfg.engine != Engine::Effective;
  if (uses_bins) {
    check_bins(lay, cfg.bins);
    if (cfg.left_bin_state.size() && !cfg.bins.bidirectional())
      throw std::invalid_argument(
          "left bin state given but the bin register has no left channel");
  }
  switch (cfg.engine) {
    case Engine::Cascaded:
      step_op = cascaded_unitary(lay, atoms, cfg.bins, cfg.dt);
      break;
    case Engine::Simultaneous:
      step_op = simultaneous_unitary(lay, atoms, cfg.bins, cfg.dt);
      break;
    case Engine::MagnusLinear:
      step_op = magnus_step_unitary(lay, atoms, cfg.bins, cfg.dt);
      renormalize = true;
      break;
    case Engine::Effective:
      break;
  }
  if (cfg.engine == Engine::Effective || cfg.reference_effective)
    atom_step = expm_generator(effective_atoms(lay, atoms), cfg.dt);

  Mat vac;  // fresh-bin state adjoined every step (vacuum unless overridden)
  std::vector<int> dims{da};
  std::vector<int> bin_keep;
  if (uses_bins) {
    Vec r = cfg.right_bin_state.size() ? cfg.right_bin_state
                                       : basis_state(cfg.bins.d_right, 0);
    if (r.size() != cfg.bins.d_right)
      throw std::invalid_argument("right bin state dimension mismatch");
    vac = pure_state(r);
    dims.push_back(cfg.bins.d_right);
    bin_keep.push_back(1);
    if (cfg.bins.bidirectional()) {
      Vec l = cfg.left_bin_state.size() ? cfg.left_bin_state
                                        : basis_state(cfg.bins.d_left, 0);
      if (l.size() != cfg.bins.d_left)
        throw std::invalid_argument("left bin state dimension mismatch");
      vac = kron(vac, pure_state(l));
      dims.push_back(cfg.bins.d_left);
      bin_keep.push_back(2);
    }
  }

  std::vector<Mat> pop_ops;
  for (int j = 0; j < atoms.n_atoms; ++j)
    pop_ops.push_back(Mat(atoms.sigma(j).adjoint()) * atoms.sigma(j));

  Trajectory out;
  out.populations.resize(cfg.steps + 1, atoms.n_atoms);
  Mat rho_ref = rho;
  auto record = [&](int k) {
    out.times.push_back(k * cfg.dt);
    out.states.push_back(rho);
    for (int j = 0; j < atoms.n_atoms; ++j)
      out.populations(k, j) = (rho * pop_ops[j]).trace().real();
    out.purity.push_back((rho * rho).trace().real());
    if (cfg.reference_effective)
      out.ref_distance.push_back(metrics(rho, rho_ref).trace_distance);
  };
  record(0);

  for (int k = 1; k <= cfg.steps; ++k) {
    if (uses_bins) {
      Mat joint = kron(rho, vac);
      joint = step_op * joint * Mat(step_op.adjoint());
      if (renormalize) joint /= joint.trace().real();
      if (cfg.record_bin_deviation) {
        Mat binm = partial_trace(joint, dims, bin_keep);
        out.bin_vacuum_dev.push_back(max_abs(binm - vac));
      }
      rho = partial_trace(joint, dims, {0});
    } else {
      rho = atom_step * rho * Mat(atom_step.adjoint());
    }
    if (cfg.reference_effective)
      rho_ref = atom_step * rho_ref * Mat(atom_step.adjoint());
    record(k);
  }
  return out;
}

Trajectory purity_probe(const ProbeConfig& cfg) {
  if (cfg.steps < 0) throw std::invalid_argument("steps must be non-negative");
  // compile_braided validates gamma_dt and builds the gate sequence with the
  // requested mediator kick; kick = pi reproduces the exchange-only step.
  const Mat u = circuit_unitary(compile_braided(1.0, cfg.gamma_dt, cfg.phi_m));
  AtomRegister atoms{2};
  Mat rho = cfg.initial_atom_state.size()
                ? checked_density(cfg.initial_atom_state, 4, "initial state")
                : pure_state(basis_state(4, 2));  // |e, g>
  const Mat m0 = projector(basis_state(2, 0));    // fresh mediator each step
  const std::vector<int> dims{2, 2, 2};
  std::vector<Mat> pop_ops;
  for (int j = 0; j < 2; ++j)
    pop_ops.push_back(Mat(atoms.sigma(j).adjoint() * atoms.sigma(j)));

  Trajectory out;
  out.populations.resize(cfg.steps + 1, 2);
  auto record = [&](int k) {
    out.times.push_back(k * cfg.gamma_dt);
    out.states.push_back(rho);
    for (int j = 0; j < 2; ++j)
      out.populations(k, j) = (rho * pop_ops[j]).trace().real();
    out.purity.push_back((rho * rho).trace().real());
  };
  record(0);
  for (int k = 1; k <= cfg.steps; ++k) {
    Mat joint = kron(m0, rho);  // mediator is the leftmost circuit factor
    joint = u * joint * Mat(u.adjoint());
    rho = partial_trace(joint, dims, {1, 2});
    record(k);
  }
  return out;
}

}  // namespace dfh
