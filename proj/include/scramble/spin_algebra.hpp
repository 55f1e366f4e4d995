#pragma once

// Operators on open spin-1/2 chains.
//
// Basis convention: the computational basis is the sigma_z eigenbasis, with
// |0> = spin up (sigma_z = +1). Site 1 is the leftmost, slowest-varying tensor
// factor, so for a basis index b the spin on site i is bit (L - i) of b.
// Sites are 1-based throughout.

#include "scramble/types.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace scramble {

/// Largest chain length handled by the dense backend (dimension 16384).
inline constexpr int kMaxSites = 14;

template <typename Real = double>
struct SpinOperator {
  CMatrix<Real> matrix;
  int sites = 1;

  Index dim() const { return matrix.rows(); }
};

enum class Axis { x, y, z };

/// Chain length, couplings and wing-flap placement of a spin-chain experiment.
struct ChainSpec {
  int length = 9;
  double g = 0.90450849;
  double J = 1.0;
  double h = 0.8090169;
  int site = 5;
  double theta = 1.5707963267948966;

  void validate() const {
    detail::require(length >= 1, "chain length must be >= 1");
    detail::require(length <= kMaxSites, "chain length exceeds the dense-method cap of " +
                                             std::to_string(kMaxSites) + " sites");
    detail::require(site >= 1 && site <= length, "wing-flap site must lie in [1, L]");
  }
};

namespace detail {

inline void require_chain_length(int sites, int minimum) {
  require(sites >= minimum, "chain length must be >= " + std::to_string(minimum));
  require(sites <= kMaxSites, "chain length " + std::to_string(sites) +
                                  " exceeds the dense-method cap of " + std::to_string(kMaxSites) + " sites");
}

inline Index chain_dim(int sites) { return Index(1) << sites; }

/// sigma_z eigenvalue (+1 / -1) of `site` in computational basis state `b`.
inline int z_value(Index b, int site, int sites) { return ((b >> (sites - site)) & 1) ? -1 : 1; }

}  // namespace detail

template <typename Real = double>
SpinOperator<Real> pauli(Axis axis) {
  using C = Complex<Real>;
  CMatrix<Real> m(2, 2);
  switch (axis) {
    case Axis::x: m << C(0), C(1), C(1), C(0); break;
    case Axis::y: m << C(0), C(0, -1), C(0, 1), C(0); break;
    case Axis::z: m << C(1), C(0), C(0), C(-1); break;
  }
  return {std::move(m), 1};
}

/// 1^{(site-1)} (x) op (x) 1^{(L-site)}.
template <typename Real>
SpinOperator<Real> embed_local(const SpinOperator<Real>& op, int site, int sites) {
  detail::require(op.sites == 1 && op.dim() == 2, "embed_local: operator must act on a single site");
  detail::require_chain_length(sites, 1);
  detail::require(site >= 1 && site <= sites, "embed_local: site out of range");
  const Index right = Index(1) << (sites - site);
  const Index left = Index(1) << (site - 1);
  const Index n = detail::chain_dim(sites);
  CMatrix<Real> out = CMatrix<Real>::Zero(n, n);
  for (Index a = 0; a < left; ++a)
    for (Index p = 0; p < 2; ++p)
      for (Index q = 0; q < 2; ++q) {
        const auto value = op.matrix(p, q);
        if (value == Complex<Real>(0)) continue;
        for (Index r = 0; r < right; ++r)
          out(a * 2 * right + p * right + r, a * 2 * right + q * right + r) = value;
      }
  return {std::move(out), sites};
}

/// Transverse field g * sum_i sigma_x^i.
template <typename Real = double>
SpinOperator<Real> build_h0(int sites, Real g) {
  detail::require_chain_length(sites, 1);
  const Index n = detail::chain_dim(sites);
  CMatrix<Real> out = CMatrix<Real>::Zero(n, n);
  // sigma_x^i flips bit (L - i)
  for (int site = 1; site <= sites; ++site) {
    const Index mask = Index(1) << (sites - site);
    for (Index b = 0; b < n; ++b) out(b ^ mask, b) += g;
  }
  return {std::move(out), sites};
}

/// Ising coupling J * sum_{i<L} sigma_z^i sigma_z^{i+1}.
template <typename Real = double>
SpinOperator<Real> build_h1(int sites, Real J) {
  detail::require_chain_length(sites, 2);
  const Index n = detail::chain_dim(sites);
  CMatrix<Real> out = CMatrix<Real>::Zero(n, n);
  for (Index b = 0; b < n; ++b) {
    Real e = 0;
    for (int i = 1; i < sites; ++i)
      e += J * detail::z_value(b, i, sites) * detail::z_value(b, i + 1, sites);
    out(b, b) = e;
  }
  return {std::move(out), sites};
}

/// Ising coupling plus longitudinal fields, taken literally:
/// J sum_{i<L} z_i z_{i+1} + h sum_{i<L} z_i + (h - J)(z_1 + z_L).
/// Note the bulk field sum stops at site L-1.
template <typename Real = double>
SpinOperator<Real> build_h2(int sites, Real J, Real h) {
  detail::require_chain_length(sites, 2);
  const Index n = detail::chain_dim(sites);
  CMatrix<Real> out = CMatrix<Real>::Zero(n, n);
  for (Index b = 0; b < n; ++b) {
    Real e = 0;
    for (int i = 1; i < sites; ++i) {
      e += J * detail::z_value(b, i, sites) * detail::z_value(b, i + 1, sites);
      e += h * detail::z_value(b, i, sites);
    }
    e += (h - J) * (detail::z_value(b, 1, sites) + detail::z_value(b, sites, sites));
    out(b, b) = e;
  }
  return {std::move(out), sites};
}

/// W = exp(-i theta sigma_x^site) = cos(theta) 1 - i sin(theta) sigma_x^site.
template <typename Real = double>
SpinOperator<Real> build_wingflap(int sites, int site, Real theta) {
  detail::require_chain_length(sites, 1);
  detail::require(site >= 1 && site <= sites, "build_wingflap: site out of range");
  const Index n = detail::chain_dim(sites);
  CMatrix<Real> out = CMatrix<Real>::Identity(n, n) * Complex<Real>(std::cos(theta));
  const Index mask = Index(1) << (sites - site);
  const Complex<Real> off(0, -std::sin(theta));
  for (Index b = 0; b < n; ++b) out(b ^ mask, b) += off;
  return {std::move(out), sites};
}

// Text serialization: first line "L <sites>", then 2^L lines, each holding one
// matrix row as whitespace-separated "re im" pairs (row-major), printed with
// max_digits10 so that reading back is bit-exact.

template <typename Real>
void write_operator(std::ostream& os, const SpinOperator<Real>& op) {
  os << "L " << op.sites << '\n' << std::setprecision(std::numeric_limits<Real>::max_digits10);
  for (Index i = 0; i < op.dim(); ++i) {
    for (Index j = 0; j < op.dim(); ++j) {
      if (j) os << ' ';
      os << op.matrix(i, j).real() << ' ' << op.matrix(i, j).imag();
    }
    os << '\n';
  }
}

template <typename Real = double>
SpinOperator<Real> read_operator(std::istream& is) {
  std::string tag;
  int sites = 0;
  if (!(is >> tag >> sites) || tag != "L") throw PreconditionError("read_operator: missing 'L <sites>' header");
  detail::require_chain_length(sites, 1);
  const Index n = detail::chain_dim(sites);
  CMatrix<Real> m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      Real re, im;
      if (!(is >> re >> im)) throw PreconditionError("read_operator: truncated matrix data");
      m(i, j) = {re, im};
    }
  return {std::move(m), sites};
}

}  // namespace scramble
