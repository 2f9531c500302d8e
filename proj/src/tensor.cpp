#include "dfh/tensor.hpp"

#include <Eigen/Eigenvalues>
#include <numeric>
#include <stdexcept>

namespace dfh {

int& dim_cap() {
  static int cap = 4096;
  return cap;
}

double max_abs(const Mat& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Mat& a, double tolerance) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a - a.adjoint()) <= tolerance;
}

bool is_unitary(const Mat& u, double tolerance) {
  if (u.rows() != u.cols()) return false;
  Mat g = u.adjoint() * u;
  g -= Mat::Identity(u.rows(), u.cols());
  return max_abs(g) <= tolerance;
}

Mat kron(const Mat& a, const Mat& b) {
  const long dim = static_cast<long>(a.rows()) * b.rows();
  if (a.rows() != a.cols() || b.rows() != b.cols())
    throw std::invalid_argument("kron: factors must be square");
  if (dim > dim_cap())
    throw std::runtime_error("kron: dimension " + std::to_string(dim) +
                             " exceeds cap " + std::to_string(dim_cap()));
  Mat out(dim, dim);
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat kron_all(const std::vector<Mat>& factors) {
  Mat out = Mat::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

Mat expm_generator(const Mat& h, double t) {
  if (!is_hermitian(h))
    throw std::invalid_argument("expm_generator: generator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es((h + Mat(h.adjoint())) / 2.0);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("expm_generator: eigendecomposition failed");
  Vec phases(h.rows());
  for (long k = 0; k < h.rows(); ++k)
    phases(k) = std::exp(Complex(0.0, -es.eigenvalues()(k) * t));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

struct FactorSplit {
  std::vector<int> keep, traced;
  std::vector<long> keep_dims, traced_dims;
  long dk = 1, dt = 1;
};

FactorSplit split_factors(const std::vector<int>& dims, const std::vector<int>& keep,
                          long full_dim) {
  long prod = 1;
  for (int d : dims) {
    if (d <= 0) throw std::invalid_argument("partial_trace: nonpositive factor dim");
    prod *= d;
  }
  if (prod != full_dim)
    throw std::invalid_argument("partial_trace: factor dims do not multiply to matrix dim");
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set empty");
  std::vector<bool> kept(dims.size(), false);
  for (int k : keep) {
    if (k < 0 || k >= static_cast<int>(dims.size()))
      throw std::invalid_argument("partial_trace: keep index out of range");
    if (kept[k]) throw std::invalid_argument("partial_trace: duplicate keep index");
    kept[k] = true;
  }
  FactorSplit s;
  for (int i = 0; i < static_cast<int>(dims.size()); ++i) {
    if (kept[i]) {
      s.keep.push_back(i);
      s.keep_dims.push_back(dims[i]);
      s.dk *= dims[i];
    } else {
      s.traced.push_back(i);
      s.traced_dims.push_back(dims[i]);
      s.dt *= dims[i];
    }
  }
  return s;
}

// Mixed-radix composition of a kept index and a traced index into a full index.
long compose_index(const FactorSplit& s, const std::vector<int>& dims, long ik, long it) {
  std::vector<long> digit(dims.size(), 0);
  for (int f = static_cast<int>(s.keep.size()) - 1; f >= 0; --f) {
    digit[s.keep[f]] = ik % s.keep_dims[f];
    ik /= s.keep_dims[f];
  }
  for (int f = static_cast<int>(s.traced.size()) - 1; f >= 0; --f) {
    digit[s.traced[f]] = it % s.traced_dims[f];
    it /= s.traced_dims[f];
  }
  long idx = 0;
  for (size_t f = 0; f < dims.size(); ++f) idx = idx * dims[f] + digit[f];
  return idx;
}

}  // namespace

Mat partial_trace(const Mat& rho, const std::vector<int>& dims,
                  const std::vector<int>& keep) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("partial_trace: not square");
  FactorSplit s = split_factors(dims, keep, rho.rows());
  Mat out = Mat::Zero(s.dk, s.dk);
  for (long rk = 0; rk < s.dk; ++rk)
    for (long ck = 0; ck < s.dk; ++ck) {
      Complex acc = 0.0;
      for (long t = 0; t < s.dt; ++t)
        acc += rho(compose_index(s, dims, rk, t), compose_index(s, dims, ck, t));
      out(rk, ck) = acc;
    }
  return out;
}

namespace {

// Hermitian PSD square root with negative-eigenvalue clamping (roundoff guard).
Mat sqrt_psd(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es((a + Mat(a.adjoint())) / 2.0);
  Vec roots(a.rows());
  for (long k = 0; k < a.rows(); ++k)
    roots(k) = std::sqrt(std::max(0.0, es.eigenvalues()(k)));
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

StateMetrics metrics(const Mat& rho, const Mat& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw std::invalid_argument("metrics: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat((rho - sigma + (rho - sigma).adjoint()) / 2.0));
  double td = 0.0;
  for (long k = 0; k < rho.rows(); ++k) td += std::abs(es.eigenvalues()(k));
  td /= 2.0;

  Mat sr = sqrt_psd(rho);
  Eigen::SelfAdjointEigenSolver<Mat> fs(Mat(sr * sigma * sr));
  double root_sum = 0.0;
  for (long k = 0; k < rho.rows(); ++k)
    root_sum += std::sqrt(std::max(0.0, fs.eigenvalues()(k)));
  return {td, root_sum * root_sum};
}

Mat permute_factors(const Mat& a, const std::vector<int>& dims,
                    const std::vector<int>& perm) {
  if (perm.size() != dims.size())
    throw std::invalid_argument("permute_factors: perm/dims size mismatch");
  long full = 1;
  for (int d : dims) full *= d;
  if (full != a.rows() || a.rows() != a.cols())
    throw std::invalid_argument("permute_factors: dims do not match matrix");
  const int m = static_cast<int>(dims.size());
  std::vector<int> new_dims(m);
  std::vector<bool> seen(m, false);
  for (int i = 0; i < m; ++i) {
    if (perm[i] < 0 || perm[i] >= m || seen[perm[i]])
      throw std::invalid_argument("permute_factors: invalid permutation");
    seen[perm[i]] = true;
    new_dims[i] = dims[perm[i]];
  }
  // map: new multi-index digits -> old flat index
  std::vector<long> map(full);
  for (long idx = 0; idx < full; ++idx) {
    long rem = idx;
    std::vector<long> digit(m);
    for (int f = m - 1; f >= 0; --f) {
      digit[f] = rem % new_dims[f];
      rem /= new_dims[f];
    }
    long old_idx = 0;
    std::vector<long> old_digit(m);
    for (int f = 0; f < m; ++f) old_digit[perm[f]] = digit[f];
    for (int f = 0; f < m; ++f) old_idx = old_idx * dims[f] + old_digit[f];
    map[idx] = old_idx;
  }
  Mat out(full, full);
  for (long r = 0; r < full; ++r)
    for (long c = 0; c < full; ++c) out(r, c) = a(map[r], map[c]);
  return out;
}

Vec basis_state(int dim, int k) {
  if (k < 0 || k >= dim) throw std::invalid_argument("basis_state: index out of range");
  Vec v = Vec::Zero(dim);
  v(k) = 1.0;
  return v;
}

Mat projector(const Vec& v) { return v * v.adjoint(); }

double max_abs_up_to_phase(const Mat& u, const Mat& v) {
  Complex tr = (u.adjoint() * v).trace();
  Complex phase = std::abs(tr) > 0 ? tr / std::abs(tr) : Complex(1.0, 0.0);
  return max_abs(u * phase - v);
}

}  // namespace dfh
