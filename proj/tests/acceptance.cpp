// End-to-end acceptance gate.  Each criterion prints exactly one line:
//   criterion N: PASS — <measured values>
//   criterion N: FAIL — <measured values>
// and the process exit code is the number of failing criteria.  Run with no
// arguments to evaluate all ten; pass criterion numbers to select a subset.
//
// Every tolerance is pinned here as a named constant.  Three clauses are
// expected to fail on the current discrete model and are reported honestly:
// the stream's outgoing-bin purity floor (criterion 4), the two-way assembly
// identity for generic non-palindromic layouts (criterion 6), and the exact
// mediator block-diagonality of the compiled step (criterion 8).  Each FAIL
// line carries the measured value and, where known, the scaling law it obeys.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "dfh/circuit.hpp"
#include "dfh/collision.hpp"
#include "dfh/dispersive.hpp"

using namespace dfh;

namespace {

constexpr double kPi = M_PI;

// Pinned acceptance tolerances.
namespace bound {
constexpr double exact = 1e-12;        // exact operator identities
constexpr double decouple = 1e-13;     // vanishing coupling entries
constexpr double bin_vacuum = 1e-9;    // outgoing-bin deviation per step
constexpr double purity_loss = 1e-8;   // 1 - purity along the stream
constexpr double stream_dist = 0.02;   // trace distance to the coarse model
constexpr double swap_pop = 0.99;      // population transfer at the half period
constexpr double sine_lo = 0.86;       // three-point sine sum window
constexpr double sine_hi = 0.88;
constexpr double order_fit = 1.5;      // least-squares convergence order
constexpr double order_lo = 1.3;       // pairwise log2 ratios
constexpr double order_hi = 2.2;
constexpr double iter_dist = 0.05;     // 100-iteration circuit endpoint
constexpr double kick_loss = 1e-6;     // purity drop for a quarter-wave kick
constexpr double kick_keep = 1e-10;    // purity retention for half-wave kicks
constexpr double disp_dev_scale = 5.0; // x (g/Delta)^2
constexpr double halving_lo = 0.4;     // windowed-average ratio on doubling
constexpr double halving_hi = 0.6;
constexpr double splitting_rel = 0.01; // exchange splitting vs g^2/Delta
}  // namespace bound

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Line {
  bool pass = true;
  std::string detail;
  void clause(const std::string& text, bool ok) {
    if (!detail.empty()) detail += ", ";
    detail += text;
    if (!ok) detail += " [VIOLATED]";
    pass = pass && ok;
  }
  void note(const std::string& text) {
    if (!detail.empty()) detail += ", ";
    detail += text;
  }
};

double identity_gap(const Mat& u) {
  return max_abs(u - Mat::Identity(u.rows(), u.cols()));
}

Layout braided_half(double gamma, double gamma_left = 0.0) {
  return Layout::from_phases({{0, 0.0}, {1, 0.0}, {0, kPi}, {1, kPi}}, gamma,
                             gamma_left);
}

Layout braided_quarter(double gamma, double gamma_left = 0.0) {
  return Layout::from_phases(
      {{0, 0.0}, {1, kPi / 2}, {0, kPi}, {1, 3 * kPi / 2}}, gamma, gamma_left);
}

Mat mediator_first(const Mat& u, int n_atoms) {
  std::vector<int> dims(n_atoms + 1, 2), perm(n_atoms + 1);
  perm[0] = n_atoms;
  for (int j = 0; j < n_atoms; ++j) perm[1 + j] = j;
  return permute_factors(u, dims, perm);
}

// --- criterion 1: silent layouts reproduce the identity exactly ------------

Line criterion_1() {
  Line line;
  AtomRegister one{1}, two{2};
  BinRegister uni{2, 0}, bi{2, 2};
  double worst = 0.0;
  for (double dt : {0.05, 0.25}) {
    Layout single_u = Layout::from_phases({{0, 0.4}, {0, 0.4 + kPi}}, 1.0, 0.0);
    Layout single_b = Layout::from_phases({{0, 0.4}, {0, 0.4 + kPi}}, 1.0, 0.7);
    Layout serial_u = Layout::from_phases(
        {{0, 0.0}, {0, kPi}, {1, 2 * kPi}, {1, 3 * kPi}}, 1.0, 0.0);
    Layout serial_b = Layout::from_phases(
        {{0, 0.0}, {0, kPi}, {1, 2 * kPi}, {1, 3 * kPi}}, 1.0, 0.6);
    Layout nested_u = Layout::from_phases(
        {{0, 0.0}, {1, kPi}, {1, 2 * kPi}, {0, 3 * kPi}}, 1.0, 0.0);
    Layout nested_b = Layout::from_phases(
        {{0, 0.0}, {1, kPi}, {1, 2 * kPi}, {0, 3 * kPi}}, 1.0, 0.6);
    worst = std::max(worst, identity_gap(cascaded_unitary(single_u, one, uni, dt)));
    worst = std::max(worst, identity_gap(cascaded_unitary(single_b, one, bi, dt)));
    worst = std::max(worst, identity_gap(cascaded_unitary(serial_u, two, uni, dt)));
    worst = std::max(worst, identity_gap(cascaded_unitary(serial_b, two, bi, dt)));
    worst = std::max(worst, identity_gap(cascaded_unitary(nested_u, two, uni, dt)));
    worst = std::max(worst, identity_gap(cascaded_unitary(nested_b, two, bi, dt)));
  }
  line.clause("max ||U - 1|| = " + num(worst) + " (<= " + num(bound::exact) + ")",
              worst <= bound::exact);
  return line;
}

// --- criterion 2: braided quarter-wave exchange spectrum -------------------

Line criterion_2() {
  Line line;
  AtomRegister two{2};
  BinRegister uni{2, 0};

  Layout lay = braided_quarter(1.0);
  Mat h = effective_atoms(lay, two);
  const double tie = max_abs(second_order_H(lay, two, uni) -
                             kron(h, Mat::Identity(2, 2)));
  line.clause("coarse generator factorizes over the bins (gap " + num(tie) + ")",
              tie <= bound::exact);

  // single-excitation block: basis {|ge>, |eg>} = indices {1, 2}
  Mat blk(2, 2);
  blk << h(1, 1), h(1, 2), h(2, 1), h(2, 2);
  Eigen::SelfAdjointEigenSolver<Mat> es(blk);
  const double e0 = es.eigenvalues()(0), e1 = es.eigenvalues()(1);
  line.clause("one-way eigenvalues " + num(e0) + ", " + num(e1) + " vs -+gamma",
              std::abs(e0 + 1.0) <= bound::exact &&
                  std::abs(e1 - 1.0) <= bound::exact);

  CouplingMatrixJ cm = coupling_matrix(lay);
  const double jsum = std::abs(cm.J(0, 1)) + std::abs(cm.J(1, 0));
  line.clause("|J01| + |J10| = " + num(jsum), std::abs(jsum - 1.0) <= bound::exact);
  const double rebuild = max_abs(hamiltonian_from_coupling(cm.J, two) - h);
  line.clause("J reconstructs the generator (gap " + num(rebuild) + ")",
              rebuild <= bound::exact);

  const double cap_gamma = 0.9;  // isotropic two-way total rate
  Mat hb = effective_atoms(braided_quarter(cap_gamma / 2, cap_gamma / 2), two);
  Mat blkb(2, 2);
  blkb << hb(1, 1), hb(1, 2), hb(2, 1), hb(2, 2);
  Eigen::SelfAdjointEigenSolver<Mat> esb(blkb);
  line.clause("isotropic eigenvalues " + num(esb.eigenvalues()(0)) + ", " +
                  num(esb.eigenvalues()(1)) + " vs -+Gamma",
              std::abs(esb.eigenvalues()(0) + cap_gamma) <= bound::exact &&
                  std::abs(esb.eigenvalues()(1) - cap_gamma) <= bound::exact);
  return line;
}

// --- criterion 3: convergence order of the coarse step ---------------------

Line criterion_3() {
  Line line;
  AtomRegister two{2};
  BinRegister uni{2, 0};
  Layout lay = braided_half(1.0);
  const std::vector<double> dts{1e-2, 5e-3, 2.5e-3};
  std::vector<double> errs;
  for (double dt : dts)
    errs.push_back(magnus_consistency(lay, two, uni, dt).err2);

  // least-squares slope of ln(err) vs ln(dt)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < dts.size(); ++i) {
    const double x = std::log(dts[i]), y = std::log(errs[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double n = static_cast<double>(dts.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double r01 = std::log2(errs[0] / errs[1]);
  const double r12 = std::log2(errs[1] / errs[2]);

  line.note("err = {" + num(errs[0]) + ", " + num(errs[1]) + ", " + num(errs[2]) +
            "}");
  line.clause("fitted order " + num(slope) + " (>= " + num(bound::order_fit) + ")",
              slope >= bound::order_fit);
  line.clause("log2 ratios " + num(r01) + ", " + num(r12) + " in [" +
                  num(bound::order_lo) + ", " + num(bound::order_hi) + "]",
              r01 >= bound::order_lo && r01 <= bound::order_hi &&
                  r12 >= bound::order_lo && r12 <= bound::order_hi);
  return line;
}

// --- criterion 4: stream-level silent-coupling property --------------------

Line criterion_4() {
  Line line;
  SimConfig cfg;
  cfg.layout = braided_half(1.0);
  cfg.atoms = AtomRegister{2};
  cfg.bins = BinRegister{2, 0};
  cfg.dt = 0.01;
  cfg.steps = 315;  // covers gamma*t in [0, pi]
  cfg.initial_atom_state = pure_state(basis_state(4, 2));  // |e, g>
  cfg.reference_effective = true;
  cfg.record_bin_deviation = true;
  Trajectory tr = run_stream(cfg);

  const double worst_bin =
      *std::max_element(tr.bin_vacuum_dev.begin(), tr.bin_vacuum_dev.end());
  const double min_purity = *std::min_element(tr.purity.begin(), tr.purity.end());
  const double worst_dist =
      *std::max_element(tr.ref_distance.begin(), tr.ref_distance.end());
  double swap = 0.0;
  for (int k = 0; k <= cfg.steps; ++k)
    swap = std::max(swap, tr.populations(k, 1));

  line.clause("bin deviation " + num(worst_bin) + " (<= " + num(bound::bin_vacuum) +
                  "; scales as (gamma dt)^3 / dt)",
              worst_bin <= bound::bin_vacuum);
  line.clause("min purity " + num(min_purity) + " (>= 1 - " +
                  num(bound::purity_loss) + ")",
              min_purity >= 1.0 - bound::purity_loss);
  line.clause("max distance to coarse model " + num(worst_dist) + " (<= " +
                  num(bound::stream_dist) + ")",
              worst_dist <= bound::stream_dist);
  line.clause("peak swapped population " + num(swap) + " (>= " +
                  num(bound::swap_pop) + ")",
              swap >= bound::swap_pop);
  return line;
}

// --- criterion 5: three-point residual shift and extra-atom decoupling -----

Line criterion_5() {
  Line line;
  Layout tri =
      Layout::from_phases({{0, 0.0}, {0, 2 * kPi / 3}, {0, 4 * kPi / 3}}, 1.0, 0.0);
  const double shift = lamb_shift_check(tri);
  const double sine_sum = 2.0 * shift;  // gamma = 1
  const double target = std::sqrt(3.0) / 2.0;
  line.clause("sine sum " + num(sine_sum) + " vs sqrt(3)/2 (gap " +
                  num(std::abs(sine_sum - target)) + ")",
              std::abs(sine_sum - target) <= bound::exact);
  line.clause("sine sum in [" + num(bound::sine_lo) + ", " + num(bound::sine_hi) +
                  "]",
              sine_sum >= bound::sine_lo && sine_sum <= bound::sine_hi);

  double worst = 0.0;
  for (double gl : {0.0, 0.35}) {
    Layout ext = Layout::from_phases({{0, 0.0},
                                      {0, 2 * kPi / 3},
                                      {0, 4 * kPi / 3},
                                      {1, 5.0},
                                      {1, 5.0 + kPi}},
                                     1.0, gl);
    Mat J = coupling_matrix(ext).J;
    worst = std::max({worst, std::abs(J(0, 1)), std::abs(J(1, 0))});
  }
  line.clause("trailing-atom coupling " + num(worst) + " (<= " +
                  num(bound::decouple) + ")",
              worst <= bound::decouple);
  return line;
}

// --- random decoherence-free layout generator for criteria 6 and 7 ---------

Layout random_df_layout(std::mt19937& rng, int n_atoms, double gamma,
                        double gamma_left) {
  std::uniform_real_distribution<double> phase(0.0, 2 * kPi);
  std::uniform_int_distribution<int> odd(0, 2);
  std::vector<std::pair<int, double>> pts;
  for (int j = 0; j < n_atoms; ++j) {
    const double b = phase(rng);
    pts.emplace_back(j, b);
    pts.emplace_back(j, b + (2 * odd(rng) + 1) * kPi);
  }
  std::shuffle(pts.begin(), pts.end(), rng);
  return Layout::from_phases(pts, gamma, gamma_left);
}

// --- criterion 6: assembled commutator sum vs coarse generator -------------

Line criterion_6() {
  Line line;
  std::mt19937 rng(20260816u);
  std::uniform_real_distribution<double> rate(0.3, 1.0);
  double worst_uni = 0.0, worst_bi = 0.0, worst_closed = 0.0, worst_vac = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int n_atoms = 2 + t % 3;
    AtomRegister atoms{n_atoms};

    Layout uni_lay = random_df_layout(rng, n_atoms, 1.0, 0.0);
    BinRegister uni{2, 0};
    worst_uni = std::max(worst_uni,
                         max_abs(commutator_assembly(uni_lay, atoms, uni) -
                                 second_order_H(uni_lay, atoms, uni)));

    Layout bi_lay = random_df_layout(rng, n_atoms, 1.0, rate(rng));
    BinRegister bi{2, 2};
    const Mat diff = commutator_assembly(bi_lay, atoms, bi) -
                     second_order_H(bi_lay, atoms, bi);
    worst_bi = std::max(worst_bi, max_abs(diff));
    worst_closed = std::max(
        worst_closed, max_abs(diff - assembly_residual(bi_lay, atoms, bi)));
    for (int a = 0; a < atoms.dim(); ++a)
      worst_vac =
          std::max(worst_vac, diff.col(a * bi.dim()).cwiseAbs().maxCoeff());
  }
  line.clause("one-way gap " + num(worst_uni) + " (<= " + num(bound::exact) + ")",
              worst_uni <= bound::exact);
  line.clause("two-way gap " + num(worst_bi) + " (<= " + num(bound::exact) +
                  "; generic layouts leave a bin-side remainder)",
              worst_bi <= bound::exact);
  line.note("remainder matches its closed form to " + num(worst_closed) +
            " and kills vacuum bins to " + num(worst_vac));
  return line;
}

// --- criterion 7: non-interleaved atom decoupling, chiral rates ------------

Line criterion_7() {
  Line line;
  std::mt19937 rng(20260817u);
  std::uniform_real_distribution<double> phase(0.0, 2 * kPi);
  std::uniform_real_distribution<double> g_right(0.5, 1.5);
  std::uniform_real_distribution<double> g_left(0.1, 1.2);
  double worst_row = 0.0, worst_split = 0.0;
  for (int t = 0; t < 10; ++t) {
    const double b0 = phase(rng), b1 = phase(rng), b2 = phase(rng);
    std::vector<std::pair<int, double>> pair{
        {0, b0}, {1, b1}, {0, b0 + kPi}, {1, b1 + kPi}};
    std::shuffle(pair.begin(), pair.end(), rng);
    std::vector<std::pair<int, double>> pts;
    const bool lone_first = t % 2 == 0;
    if (lone_first) {
      pts.emplace_back(2, b2);
      pts.emplace_back(2, b2 + 3 * kPi);
    }
    pts.insert(pts.end(), pair.begin(), pair.end());
    if (!lone_first) {
      pts.emplace_back(2, b2);
      pts.emplace_back(2, b2 + 3 * kPi);
    }
    const double gl = (t % 3 == 0) ? 0.0 : g_left(rng);
    Layout lay = Layout::from_phases(pts, g_right(rng), gl);

    CouplingMatrixJ cm = coupling_matrix(lay);
    for (int j = 0; j < 3; ++j) {
      if (j == 2) continue;
      worst_row = std::max({worst_row, std::abs(cm.J(2, j)), std::abs(cm.J(j, 2))});
    }
    worst_split = std::max(
        worst_split, max_abs(cm.J - (lay.gamma_right * cm.K +
                                     lay.gamma_left * cm.K.conjugate())));
  }
  line.clause("lone-atom coupling entries " + num(worst_row) + " (<= " +
                  num(bound::decouple) + ")",
              worst_row <= bound::decouple);
  line.clause("rate decomposition gap " + num(worst_split) + " (<= " +
                  num(bound::decouple) + ")",
              worst_split <= bound::decouple);
  return line;
}

// --- criterion 8: compiled circuit vs collision step, and its iteration ----

Line criterion_8() {
  Line line;
  AtomRegister two{2};
  BinRegister uni{2, 0};
  Layout lay = braided_half(1.0);

  double worst_eq = 0.0;
  std::vector<double> flips;
  for (double gdt : {0.25, 0.01, 1e-4}) {
    Mat u = circuit_unitary(compile_braided(1.0, gdt));
    Mat casc = mediator_first(cascaded_unitary(lay, two, uni, gdt), 2);
    worst_eq = std::max(worst_eq, max_abs_up_to_phase(u, casc));
    flips.push_back(mediator_flip_weight(u));
  }
  const double exponent = std::log(flips[1] / flips[2]) / std::log(100.0);
  line.clause("circuit vs collision step " + num(worst_eq) + " (<= " +
                  num(bound::exact) + ")",
              worst_eq <= bound::exact);
  line.clause("mediator flip weight {" + num(flips[0]) + ", " + num(flips[1]) +
                  ", " + num(flips[2]) + "} (<= " + num(bound::exact) +
                  "; measured power law (gamma dt)^" + num(exponent) + ")",
              *std::max_element(flips.begin(), flips.end()) <= bound::exact);

  // frame that maps the compiled scheme's exchange onto sigma0^dag sigma1 + H.c.
  Mat g4 = Mat::Identity(4, 4);
  g4(1, 1) = Complex(0.0, 1.0);
  g4(3, 3) = Complex(0.0, 1.0);
  Mat hx = Mat(two.sigma(0).adjoint() * two.sigma(1));
  hx += Mat(hx.adjoint());
  const double frame_gap =
      max_abs(g4 * effective_atoms(lay, two) * g4.adjoint() - hx);
  line.clause("frame identity gap " + num(frame_gap), frame_gap <= bound::exact);

  ProbeConfig pc;
  pc.phi_m = kPi;
  pc.gamma_dt = 0.01;
  pc.steps = static_cast<int>(iswap_iterations(1.0, 0.01));
  Trajectory tr = purity_probe(pc);
  const Mat rho = tr.states.back();
  const Mat target = projector(expm_generator(hx, 1.0) * basis_state(4, 2));
  const double aligned = metrics(Mat(g4 * rho * g4.adjoint()), target).trace_distance;
  const double unaligned = metrics(rho, target).trace_distance;
  line.clause("100-iteration endpoint distance " + num(aligned) + " (<= " +
                  num(bound::iter_dist) + "; " + num(unaligned) +
                  " before the frame)",
              aligned <= bound::iter_dist);
  return line;
}

// --- criterion 9: the half-wave kick is what protects the atoms ------------

Line criterion_9() {
  Line line;
  auto floor_of = [](double phi_m) {
    ProbeConfig pc;
    pc.phi_m = phi_m;
    Trajectory tr = purity_probe(pc);
    return *std::min_element(tr.purity.begin(), tr.purity.end());
  };
  const double quarter = floor_of(kPi / 2);
  const double half = floor_of(kPi);
  const double triple = floor_of(3 * kPi);
  line.clause("quarter-wave kick purity floor " + num(quarter) + " (< 1 - " +
                  num(bound::kick_loss) + ")",
              quarter < 1.0 - bound::kick_loss);
  line.clause("half-wave kick purity floors " + num(half) + ", " + num(triple) +
                  " (>= 1 - " + num(bound::kick_keep) + ")",
              half >= 1.0 - bound::kick_keep && triple >= 1.0 - bound::kick_keep);
  return line;
}

// --- criterion 10: far-detuned mode contrast --------------------------------

Line criterion_10() {
  Line line;
  const double g = 1.0, delta = 100.0;
  AtomRegister one{1}, two{2};

  ModeSet mode;
  mode.detunings = Eigen::VectorXd::Constant(1, delta);
  mode.couplings = Mat::Constant(1, 1, Complex(g, 0.0));
  mode.d = 5;

  Mat h_full = full_hamiltonian(mode, one);
  Vec psi = Vec::Zero(h_full.rows());
  psi(mode.d) = 1.0;  // |e, 0>
  const double tau = 2 * kPi / std::sqrt(delta * delta + 4 * g * g) / 64.0;
  const Mat u = expm_generator(h_full, tau);
  double worst = 0.0;
  for (double t = 0.0; t * delta <= 1e4; t += tau) {
    Mat rho = partial_trace(projector(psi), {2, mode.d}, {0});
    worst = std::max(worst, 1.0 - rho(1, 1).real());
    psi = u * psi;
  }
  const double dev_bound = bound::disp_dev_scale * std::pow(g / delta, 2);
  line.clause("population deviation " + num(worst) + " (<= " + num(dev_bound) + ")",
              worst <= dev_bound);

  ModeSet trio;
  trio.detunings.resize(3);
  for (int i = 0; i < 3; ++i)
    trio.detunings(i) = 2 * kPi * (20.0 + 12.0 * i + 1.0 / 3.0);
  trio.couplings = Mat::Constant(1, 3, Complex(g, 0.0));
  trio.d = 2;
  ModeSet doubled = trio;
  doubled.detunings *= 2.0;
  const double n0 = max_abs(windowed_average(trio, one, 0.0, 1.0));
  const double n1 = max_abs(windowed_average(doubled, one, 0.0, 1.0));
  const double ratio = n1 / n0;
  line.clause("detuning-doubling ratio " + num(ratio) + " (in [" +
                  num(bound::halving_lo) + ", " + num(bound::halving_hi) + "])",
              ratio >= bound::halving_lo && ratio <= bound::halving_hi);

  const double j_exact = (std::sqrt(delta * delta + 8 * g * g) - delta) / 4.0;
  const double j_pred = g * g / delta;
  const double rel = std::abs(j_exact - j_pred) / j_pred;
  line.clause("exchange splitting relative error " + num(rel) + " (<= " +
                  num(bound::splitting_rel) + ")",
              rel <= bound::splitting_rel);
  ModeSet shared = mode;
  shared.couplings = Mat::Constant(2, 1, Complex(g, 0.0));
  const double j_eff = std::abs(dispersive_heff(shared, two)(1, 2));
  line.clause("averaged-model exchange " + num(j_eff) + " vs " + num(j_pred),
              std::abs(j_eff - j_pred) / j_pred <= bound::splitting_rel);
  return line;
}

}  // namespace

int main(int argc, char** argv) {
  using Criterion = Line (*)();
  const std::vector<Criterion> all{criterion_1, criterion_2, criterion_3,
                                   criterion_4, criterion_5, criterion_6,
                                   criterion_7, criterion_8, criterion_9,
                                   criterion_10};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > static_cast<int>(all.size())) {
      std::fprintf(stderr, "unknown criterion: %s\n", argv[i]);
      return 99;
    }
    selected.push_back(k);
  }
  if (selected.empty())
    for (int k = 1; k <= static_cast<int>(all.size()); ++k) selected.push_back(k);

  int failures = 0;
  for (int k : selected) {
    Line line = all[static_cast<size_t>(k - 1)]();
    std::printf("criterion %d: %s — %s\n", k, line.pass ? "PASS" : "FAIL",
                line.detail.c_str());
    if (!line.pass) ++failures;
  }
  return failures;
}
