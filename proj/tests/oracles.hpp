#pragma once

// Test-only reference computations. Nothing here calls into the library's
// spectral or measurement code: operators are assembled from explicit
// Kronecker products, exponentials from power series, and two-point
// statistics from explicit projector products.

#include "scramble/types.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using Mat = scramble::CMatrix<double>;
using Cplx = std::complex<double>;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Mat sx() { Mat m(2, 2); m << 0, 1, 1, 0; return m; }
inline Mat sy() { Mat m(2, 2); m << 0, Cplx(0, -1), Cplx(0, 1), 0; return m; }
inline Mat sz() { Mat m(2, 2); m << 1, 0, 0, -1; return m; }
inline Mat id2() { return Mat::Identity(2, 2); }

/// op on `site` (1-based, leftmost factor first) of an L-site chain.
inline Mat local(const Mat& op, int site, int sites) {
  Mat out = Mat::Identity(1, 1);
  for (int i = 1; i <= sites; ++i) out = kron(out, i == site ? op : id2());
  return out;
}

/// exp(s A) by direct power-series summation.
inline Mat series_exp(const Mat& a, Cplx s, int terms = 80) {
  Mat result = Mat::Identity(a.rows(), a.cols());
  Mat term = result;
  for (int k = 1; k < terms; ++k) {
    term = (term * a * s / double(k)).eval();
    result += term;
  }
  return result;
}

inline Mat random_hermitian(Eigen::Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal;
  Mat a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Cplx(normal(rng), normal(rng));
  return scale * (a + a.adjoint()) / 2.0;
}

/// Haar-ish unitary from the QR decomposition of a complex Gaussian matrix.
inline Mat random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Mat a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Cplx(normal(rng), normal(rng));
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) q.col(j) *= std::polar(1.0, std::arg(r(j, j)));
  return q;
}

/// Sum of outer products of the given columns.
inline Mat projector(const Mat& basis, const std::vector<Eigen::Index>& cols) {
  Mat p = Mat::Zero(basis.rows(), basis.rows());
  for (auto c : cols) p += basis.col(c) * basis.col(c).adjoint();
  return p;
}

/// Brute-force G(u) from explicit projectors: clusters[a] lists basis columns
/// of eigenvalue values[a]; sum over (m, n) of Tr(Pi_m U Pi_n rho Pi_n U^dag) e^{-iu(O_m - O_n)}.
inline Cplx brute_force_characteristic(const Mat& rho, const Mat& u_tau, const Mat& basis,
                                       const std::vector<std::vector<Eigen::Index>>& clusters,
                                       const std::vector<double>& values, double u) {
  std::vector<Mat> pis;
  for (const auto& c : clusters) pis.push_back(projector(basis, c));
  Cplx g = 0;
  for (std::size_t n = 0; n < pis.size(); ++n) {
    const Mat evolved = u_tau * pis[n] * rho * pis[n] * u_tau.adjoint();
    for (std::size_t m = 0; m < pis.size(); ++m)
      g += (pis[m] * evolved).trace() * std::polar(1.0, -u * (values[m] - values[n]));
  }
  return g;
}

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
