#pragma once

// Definition-level OTOCs and commutator measures of scrambling.

#include "scramble/spectral.hpp"
#include "scramble/types.hpp"

#include <cmath>

namespace scramble {

/// OTOC value at one forward-evolution duration, with C = 2 (1 - Re F).
template <typename Real = double>
struct OtocPoint {
  Real tau;
  Complex<Real> value;
  Real c_value;
};

/// W_tau = exp(i tau H) W exp(-i tau H).
template <typename Real>
CMatrix<Real> heisenberg_wingflap(const CMatrix<Real>& w, const SpectralDecomposition<Real>& h, Real tau) {
  detail::require_unitary(w, Real(1e-8), "heisenberg_wingflap");
  detail::require_same_dim(w, h.eigenvectors, "heisenberg_wingflap");
  // In the eigenbasis of H the conjugation is an elementwise phase.
  CMatrix<Real> rotated = h.eigenvectors.adjoint() * w * h.eigenvectors;
  const Index n = rotated.rows();
  CVector<Real> phase(n);
  for (Index i = 0; i < n; ++i) phase(i) = std::polar(Real(1), tau * h.eigenvalues(i));
  rotated = phase.asDiagonal() * rotated * phase.conjugate().asDiagonal();
  return h.eigenvectors * rotated * h.eigenvectors.adjoint();
}

template <typename Real>
CMatrix<Real> heisenberg_wingflap(const CMatrix<Real>& w, const CMatrix<Real>& h, Real tau) {
  return heisenberg_wingflap(w, eig_hermitian(h), tau);
}

/// Tr(rho W_tau^dagger V^dagger W_tau V) for an already evolved W_tau.
template <typename Real>
Complex<Real> otoc_from_heisenberg(const DensityMatrix<Real>& rho, const CMatrix<Real>& w_tau,
                                   const CMatrix<Real>& v) {
  detail::require_same_dim(rho.matrix(), w_tau, "otoc");
  detail::require_same_dim(rho.matrix(), v, "otoc");
  const CMatrix<Real> product = w_tau.adjoint() * v.adjoint() * w_tau * v;
  return trace_of_product(rho.matrix(), product);
}

template <typename Real>
Complex<Real> otoc(const DensityMatrix<Real>& rho, const CMatrix<Real>& w, const CMatrix<Real>& v,
                   const SpectralDecomposition<Real>& h, Real tau) {
  detail::require_unitary(v, Real(1e-8), "otoc");
  return otoc_from_heisenberg(rho, heisenberg_wingflap(w, h, tau), v);
}

template <typename Real>
Complex<Real> otoc(const DensityMatrix<Real>& rho, const CMatrix<Real>& w, const CMatrix<Real>& v,
                   const CMatrix<Real>& h, Real tau) {
  return otoc(rho, w, v, eig_hermitian(h), tau);
}

template <typename Real>
OtocPoint<Real> otoc_point(const DensityMatrix<Real>& rho, const CMatrix<Real>& w, const CMatrix<Real>& v,
                           const SpectralDecomposition<Real>& h, Real tau) {
  const Complex<Real> f = otoc(rho, w, v, h, tau);
  return {tau, f, Real(2) * (Real(1) - f.real())};
}

/// <[W_tau, V]^dagger [W_tau, V]>_rho computed from the commutator itself.
template <typename Real>
Real commutator_measure(const DensityMatrix<Real>& rho, const CMatrix<Real>& w, const CMatrix<Real>& v,
                        const SpectralDecomposition<Real>& h, Real tau) {
  detail::require_same_dim(rho.matrix(), v, "commutator_measure");
  const CMatrix<Real> w_tau = heisenberg_wingflap(w, h, tau);
  const CMatrix<Real> c = commutator<Real>(w_tau, v);
  const CMatrix<Real> c2 = c.adjoint() * c;
  return trace_of_product(rho.matrix(), c2).real();
}

template <typename Real>
Real commutator_measure(const DensityMatrix<Real>& rho, const CMatrix<Real>& w, const CMatrix<Real>& v,
                        const CMatrix<Real>& h, Real tau) {
  return commutator_measure(rho, w, v, eig_hermitian(h), tau);
}

/// <[W_tau, O]^dagger [W_tau, O]>_rho. Evaluates both
/// Tr([W,O]^dagger [W,O] rho) and Tr((W^dagger O W - O)^2 rho), throws
/// IdentityViolation if they differ by more than 1e-10 (relative to scale),
/// and returns the second form.
template <typename Real>
Real square_commutator_expectation(const CMatrix<Real>& w_tau, const CMatrix<Real>& o,
                                   const DensityMatrix<Real>& rho) {
  detail::require_same_dim(rho.matrix(), w_tau, "square_commutator_expectation");
  detail::require_same_dim(rho.matrix(), o, "square_commutator_expectation");
  detail::require_hermitian(o, Real(1e-10), "square_commutator_expectation");
  const CMatrix<Real> c = commutator<Real>(w_tau, o);
  const CMatrix<Real> c2 = c.adjoint() * c;
  const Real via_commutator = trace_of_product(rho.matrix(), c2).real();

  const CMatrix<Real> shifted = w_tau.adjoint() * o * w_tau - o;
  const CMatrix<Real> shifted2 = shifted * shifted;
  const Real via_conjugation = trace_of_product(rho.matrix(), shifted2).real();

  if (std::abs(via_commutator - via_conjugation) > Real(1e-10) * std::max(Real(1), std::abs(via_conjugation)))
    throw IdentityViolation("square_commutator_expectation: commutator and conjugation forms disagree");
  return via_conjugation;
}

/// Tr(U^dagger H0 U H0) - Tr(H0^2); never positive.
template <typename Real>
Real infinite_temperature_otoc(const CMatrix<Real>& u_tau, const CMatrix<Real>& h0) {
  detail::require_same_dim(u_tau, h0, "infinite_temperature_otoc");
  const CMatrix<Real> conjugated = u_tau.adjoint() * h0 * u_tau;
  return (trace_of_product(conjugated, h0) - trace_of_product(h0, h0)).real();
}

}  // namespace scramble
