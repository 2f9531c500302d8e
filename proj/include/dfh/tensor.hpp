#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace dfh {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

namespace tol {
// Central tolerance table; every test and verification path references these.
inline constexpr double structural = 1e-12;  // Hermiticity, exact operator identities
inline constexpr double unitary = 1e-10;     // ||U^dag U - 1||_max for Unitary-tagged results
inline constexpr double trace = 1e-10;       // |Tr rho - 1| for density matrices
inline constexpr double df_default = 1e-9;   // DF-condition residual threshold
}  // namespace tol

// Configurable Hilbert-space dimension cap for tensor products (dense algebra guard).
int& dim_cap();

double max_abs(const Mat& a);
bool is_hermitian(const Mat& a, double tolerance = tol::structural);
bool is_unitary(const Mat& u, double tolerance = tol::unitary);

Mat kron(const Mat& a, const Mat& b);
Mat kron_all(const std::vector<Mat>& factors);

// exp(-i h t) for Hermitian h via spectral decomposition; unitary to roundoff.
Mat expm_generator(const Mat& h, double t);

// Reduce over the factors not listed in `keep` (factor order matches `dims`).
Mat partial_trace(const Mat& rho, const std::vector<int>& dims,
                  const std::vector<int>& keep);

struct StateMetrics {
  double trace_distance;
  double fidelity;
};
StateMetrics metrics(const Mat& rho, const Mat& sigma);

// Reorder tensor factors of an operator: factor i of the result is factor perm[i]
// of the input.
Mat permute_factors(const Mat& a, const std::vector<int>& dims,
                    const std::vector<int>& perm);

Vec basis_state(int dim, int k);
Mat projector(const Vec& v);

// max |u - e^{i theta} v| minimized over the global phase theta.
double max_abs_up_to_phase(const Mat& u, const Mat& v);

}  // namespace dfh
