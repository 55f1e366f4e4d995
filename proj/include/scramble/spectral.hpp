#pragma once

// Hermitian eigendecomposition and the matrix functions built on it.

#include "scramble/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace scramble {

/// Eigenvalues in ascending order with a unitary matrix of column eigenvectors.
template <typename Real = double>
struct SpectralDecomposition {
  RVector<Real> eigenvalues;
  CMatrix<Real> eigenvectors;

  Index source_dim() const { return eigenvectors.rows(); }
  Real spectral_range() const {
    return eigenvalues.size() ? eigenvalues(eigenvalues.size() - 1) - eigenvalues(0) : Real(0);
  }
};

template <typename Real>
SpectralDecomposition<Real> eig_hermitian(const CMatrix<Real>& a) {
  detail::require_hermitian(a, Real(1e-10), "eig_hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(a, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw IdentityViolation("eig_hermitian: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Eigenvalues only; several times faster than the full decomposition.
template <typename Real>
RVector<Real> eigenvalues_hermitian(const CMatrix<Real>& a) {
  detail::require_hermitian(a, Real(1e-10), "eigenvalues_hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw IdentityViolation("eigenvalues_hermitian: eigensolver did not converge");
  return solver.eigenvalues();
}

/// V diag(d) V^dagger for a complex diagonal d.
template <typename Real>
CMatrix<Real> spectral_sum(const SpectralDecomposition<Real>& dec, const CVector<Real>& d) {
  return dec.eigenvectors * d.asDiagonal() * dec.eigenvectors.adjoint();
}

template <typename Real>
CMatrix<Real> reconstruct(const SpectralDecomposition<Real>& dec) {
  return spectral_sum<Real>(dec, dec.eigenvalues.template cast<Complex<Real>>());
}

/// f(A) = V f(lambda) V^dagger. Throws DomainError when f is not finite at an
/// eigenvalue (log of a non-positive eigenvalue, for instance).
template <typename Real, typename F>
CMatrix<Real> matrix_function(const SpectralDecomposition<Real>& dec, F&& f) {
  CVector<Real> d(dec.eigenvalues.size());
  for (Index i = 0; i < d.size(); ++i) {
    const Real lambda = dec.eigenvalues(i);
    const Real value = f(lambda);
    if (!std::isfinite(value)) {
      std::ostringstream msg;
      msg << "matrix_function: function undefined at eigenvalue " << lambda;
      throw DomainError(msg.str());
    }
    d(i) = value;
  }
  return spectral_sum(dec, d);
}

template <typename Real, typename F>
CMatrix<Real> matrix_function(const CMatrix<Real>& a, F&& f) {
  return matrix_function(eig_hermitian(a), std::forward<F>(f));
}

/// exp(-i H t), reusing a precomputed decomposition of H.
template <typename Real>
CMatrix<Real> propagator(const SpectralDecomposition<Real>& dec, Real t) {
  CVector<Real> phases(dec.eigenvalues.size());
  for (Index i = 0; i < phases.size(); ++i) phases(i) = std::polar(Real(1), -dec.eigenvalues(i) * t);
  return spectral_sum(dec, phases);
}

template <typename Real>
CMatrix<Real> propagator(const CMatrix<Real>& h, Real t) {
  return propagator(eig_hermitian(h), t);
}

/// exp(+i u O). Note the sign, opposite to the propagator.
template <typename Real>
CMatrix<Real> operator_exponential(const SpectralDecomposition<Real>& dec, Real u) {
  return propagator(dec, -u);
}

template <typename Real>
CMatrix<Real> operator_exponential(const CMatrix<Real>& o, Real u) {
  return operator_exponential(eig_hermitian(o), u);
}

/// Hermitian, unit-trace, positive semidefinite matrix.
template <typename Real = double>
class DensityMatrix {
 public:
  /// Validates the state invariants to `tol`.
  static DensityMatrix from_matrix(CMatrix<Real> m, Real tol = Real(1e-12)) {
    detail::require_square(m, "DensityMatrix");
    detail::require(hermiticity_defect(m) <= tol, "DensityMatrix: not Hermitian");
    detail::require(std::abs(m.trace() - Complex<Real>(1)) <= tol, "DensityMatrix: trace is not 1");
    const RVector<Real> ev = eigenvalues_hermitian(m);
    detail::require(ev.minCoeff() >= -tol, "DensityMatrix: negative eigenvalue");
    return DensityMatrix(std::move(m));
  }

  static DensityMatrix maximally_mixed(Index dim) {
    return DensityMatrix(CMatrix<Real>::Identity(dim, dim) / Complex<Real>(Real(dim)));
  }

  const CMatrix<Real>& matrix() const { return matrix_; }
  Index dim() const { return matrix_.rows(); }

 private:
  explicit DensityMatrix(CMatrix<Real> m) : matrix_(std::move(m)) {}
  template <typename R>
  friend DensityMatrix<R> thermal_state(const SpectralDecomposition<R>& dec, R beta);

  CMatrix<Real> matrix_;
};

/// exp(-beta H0) / Z, with the ground energy subtracted before exponentiating.
template <typename Real>
DensityMatrix<Real> thermal_state(const SpectralDecomposition<Real>& dec, Real beta) {
  detail::require(std::isfinite(beta) && beta >= 0, "thermal_state: beta must be finite and >= 0");
  const Real ground = dec.eigenvalues.minCoeff();
  RVector<Real> weights = (-beta * (dec.eigenvalues.array() - ground)).exp().matrix();
  weights /= weights.sum();
  CMatrix<Real> rho = spectral_sum<Real>(dec, weights.template cast<Complex<Real>>());
  rho = (Real(0.5) * (rho + rho.adjoint())).eval();
  return DensityMatrix<Real>(std::move(rho));
}

template <typename Real>
DensityMatrix<Real> thermal_state(const CMatrix<Real>& h0, Real beta) {
  return thermal_state(eig_hermitian(h0), beta);
}

/// Eigenspaces of an observable, grouped into clusters of (numerically)
/// degenerate eigenvalues. Clusters are contiguous index ranges of the
/// ascending spectrum held in `basis`.
template <typename Real = double>
struct ProjectorFamily {
  struct Cluster {
    Real value;               // multiplicity-weighted mean eigenvalue
    CMatrix<Real> projector;  // sum of the cluster's eigenvector outer products
    Index multiplicity;
    Index offset;             // first column of the cluster in `basis`
  };

  std::vector<Cluster> clusters;
  Real cluster_tol;
  CMatrix<Real> basis;  // eigenvectors of the observable, ascending eigenvalues

  Index size() const { return Index(clusters.size()); }
  Index dim() const { return basis.rows(); }
  Real spectral_range() const {
    return clusters.empty() ? Real(0) : clusters.back().value - clusters.front().value;
  }
  RVector<Real> values() const {
    RVector<Real> v(size());
    for (Index a = 0; a < size(); ++a) v(a) = clusters[a].value;
    return v;
  }
};

template <typename Real>
Real default_cluster_tol(const SpectralDecomposition<Real>& dec) {
  return Real(1e-8) * std::max(Real(1), dec.spectral_range());
}

/// Greedy gap clustering on the sorted spectrum: an eigenvalue joins the
/// current cluster when its gap to the previous eigenvalue is <= cluster_tol.
template <typename Real>
ProjectorFamily<Real> spectral_projectors(const SpectralDecomposition<Real>& dec, Real cluster_tol) {
  detail::require(cluster_tol > 0, "spectral_projectors: cluster_tol must be positive");
  ProjectorFamily<Real> family{{}, cluster_tol, dec.eigenvectors};
  const Index n = dec.eigenvalues.size();
  Index start = 0;
  for (Index i = 1; i <= n; ++i) {
    if (i < n && dec.eigenvalues(i) - dec.eigenvalues(i - 1) <= cluster_tol) continue;
    const Index count = i - start;
    const auto block = dec.eigenvectors.middleCols(start, count);
    family.clusters.push_back({dec.eigenvalues.segment(start, count).mean(), block * block.adjoint(), count, start});
    start = i;
  }
  return family;
}

template <typename Real>
ProjectorFamily<Real> spectral_projectors(const CMatrix<Real>& o, Real cluster_tol) {
  return spectral_projectors(eig_hermitian(o), cluster_tol);
}

template <typename Real>
ProjectorFamily<Real> spectral_projectors(const CMatrix<Real>& o) {
  const auto dec = eig_hermitian(o);
  return spectral_projectors(dec, default_cluster_tol(dec));
}

/// Trace norm of a Hermitian matrix: sum of |eigenvalues|.
template <typename Real>
Real trace_norm_hermitian(const CMatrix<Real>& a) {
  return eigenvalues_hermitian(a).cwiseAbs().sum();
}

}  // namespace scramble
