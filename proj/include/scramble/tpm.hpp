#pragma once

// Two-point measurement statistics of an observable O around a unitary U_tau,
// and the thermodynamic quantities derived from them.
//
// Measurements are Lueders projections onto the eigenspaces of O, so
// degenerate observables are handled exactly. The initial state must commute
// with O.

#include "scramble/scrambling.hpp"
#include "scramble/spectral.hpp"
#include "scramble/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

namespace scramble {

/// Initial cluster columns with p_n at or below this are marked unvisited.
inline constexpr double kUnvisitedFloor = 1e-14;

/// Conditional probabilities P[m|n] over eigenvalue clusters of O
/// (rows: final cluster m, columns: initial cluster n) and p_n.
template <typename Real = double>
struct TransitionMatrix {
  RMatrix<Real> entries;
  RVector<Real> initial_probs;
  std::vector<bool> visited;

  Index clusters() const { return initial_probs.size(); }
};

/// Discrete distribution of Delta O on a strictly increasing support.
template <typename Real = double>
struct OutcomeDistribution {
  RVector<Real> support;
  RVector<Real> probs;
  Real merge_tol;
};

template <typename Real = double>
struct Moments {
  Real mean;
  Real second_moment;
  Real variance;
};

template <typename Real>
Real default_merge_tol(const ProjectorFamily<Real>& projs) {
  return Real(1e-9) * std::max(Real(1), projs.spectral_range());
}

/// A prepared (state, observable) pair. Construction checks [rho, O] = 0 and
/// moves rho into the eigenbasis of O once, so repeated evaluation over many
/// U_tau only costs the basis change of U_tau.
template <typename Real = double>
class TwoPointMeasurement {
 public:
  TwoPointMeasurement(const DensityMatrix<Real>& rho, ProjectorFamily<Real> projs)
      : projs_(std::move(projs)) {
    detail::require_same_dim(rho.matrix(), projs_.basis, "TwoPointMeasurement");
    CMatrix<Real> o = CMatrix<Real>::Zero(projs_.dim(), projs_.dim());
    for (const auto& c : projs_.clusters) o += c.value * c.projector;
    detail::require(max_abs(commutator<Real>(rho.matrix(), o)) <= Real(1e-8),
                    "two-point measurement: the state does not commute with the measured observable");

    rho_frame_ = projs_.basis.adjoint() * rho.matrix() * projs_.basis;
    const CMatrix<Real> off = rho_frame_ - CMatrix<Real>(rho_frame_.diagonal().asDiagonal());
    diagonal_state_ = max_abs(off) <= Real(1e-15);

    p_.resize(projs_.size());
    for (Index a = 0; a < projs_.size(); ++a) {
      const auto& c = projs_.clusters[a];
      p_(a) = rho_frame_.diagonal().segment(c.offset, c.multiplicity).real().sum();
    }
  }

  const ProjectorFamily<Real>& projectors() const { return projs_; }
  const RVector<Real>& initial_probs() const { return p_; }

  /// R^dagger U R, with R the eigenbasis of O.
  CMatrix<Real> to_frame(const CMatrix<Real>& u) const { return projs_.basis.adjoint() * u * projs_.basis; }

  TransitionMatrix<Real> transitions(const CMatrix<Real>& u_tau) const {
    detail::require_same_dim(u_tau, projs_.basis, "transition_matrix");
    detail::require_unitary(u_tau, Real(1e-8), "transition_matrix");
    return transitions_in_frame(to_frame(u_tau));
  }

  /// Same as transitions() for a U_tau already expressed in the eigenbasis of O.
  TransitionMatrix<Real> transitions_in_frame(const CMatrix<Real>& u_frame) const {
    // Tr(Pi_m U Pi_n rho Pi_n U^dagger) = sum_{i in m, j in n} (U rho)_ij conj(U_ij)
    // because rho is block diagonal in this frame.
    const CMatrix<Real> u_rho =
        diagonal_state_ ? CMatrix<Real>(u_frame * rho_frame_.diagonal().asDiagonal()) : CMatrix<Real>(u_frame * rho_frame_);
    const RMatrix<Real> weight = u_rho.cwiseProduct(u_frame.conjugate()).real();

    const Index k = projs_.size();
    TransitionMatrix<Real> t{RMatrix<Real>::Zero(k, k), p_, std::vector<bool>(std::size_t(k))};
    for (Index n = 0; n < k; ++n) {
      t.visited[std::size_t(n)] = p_(n) > Real(kUnvisitedFloor);
      if (!t.visited[std::size_t(n)]) continue;
      const auto& cn = projs_.clusters[n];
      for (Index m = 0; m < k; ++m) {
        const auto& cm = projs_.clusters[m];
        t.entries(m, n) = weight.block(cm.offset, cn.offset, cm.multiplicity, cn.multiplicity).sum() / p_(n);
      }
    }
    return t;
  }

  OutcomeDistribution<Real> distribution(const CMatrix<Real>& u_tau, Real merge_tol) const {
    return distribution_from(transitions(u_tau), merge_tol);
  }

  OutcomeDistribution<Real> distribution_in_frame(const CMatrix<Real>& u_frame, Real merge_tol) const {
    return distribution_from(transitions_in_frame(u_frame), merge_tol);
  }

  /// p(Delta O) = sum_{m,n} delta(Delta O - O_m + O_n) P[m|n] p_n, with
  /// support points closer than merge_tol merged.
  OutcomeDistribution<Real> distribution_from(const TransitionMatrix<Real>& t, Real merge_tol) const {
    detail::require(merge_tol > 0, "tpm_distribution: merge_tol must be positive");
    std::vector<std::pair<Real, Real>> mass;
    const Index k = projs_.size();
    for (Index n = 0; n < k; ++n) {
      if (!t.visited[std::size_t(n)]) continue;
      for (Index m = 0; m < k; ++m)
        mass.emplace_back(projs_.clusters[m].value - projs_.clusters[n].value, t.entries(m, n) * p_(n));
    }
    std::sort(mass.begin(), mass.end());

    std::vector<Real> support, probs;
    std::size_t i = 0;
    while (i < mass.size()) {
      std::size_t j = i + 1;
      while (j < mass.size() && mass[j].first - mass[j - 1].first < merge_tol) ++j;
      Real value = 0, p = 0;
      for (std::size_t q = i; q < j; ++q) {
        value += mass[q].first;
        p += mass[q].second;
      }
      support.push_back(value / Real(j - i));
      probs.push_back(p);
      i = j;
    }
    OutcomeDistribution<Real> dist{Eigen::Map<RVector<Real>>(support.data(), Index(support.size())),
                                   Eigen::Map<RVector<Real>>(probs.data(), Index(probs.size())), merge_tol};
    const Real total = dist.probs.sum();
    if (total > 0) dist.probs /= total;
    return dist;
  }

 private:
  ProjectorFamily<Real> projs_;
  CMatrix<Real> rho_frame_;
  RVector<Real> p_;
  bool diagonal_state_ = false;
};

template <typename Real>
TransitionMatrix<Real> transition_matrix(const DensityMatrix<Real>& rho, const ProjectorFamily<Real>& projs,
                                         const CMatrix<Real>& u_tau) {
  return TwoPointMeasurement<Real>(rho, projs).transitions(u_tau);
}

template <typename Real>
OutcomeDistribution<Real> tpm_distribution(const DensityMatrix<Real>& rho, const CMatrix<Real>& o,
                                           const CMatrix<Real>& u_tau, Real cluster_tol, Real merge_tol) {
  TwoPointMeasurement<Real> tpm(rho, spectral_projectors(o, cluster_tol));
  return tpm.distribution(u_tau, merge_tol);
}

/// Uses the default cluster and merge tolerances.
template <typename Real>
OutcomeDistribution<Real> tpm_distribution(const DensityMatrix<Real>& rho, const CMatrix<Real>& o,
                                           const CMatrix<Real>& u_tau) {
  TwoPointMeasurement<Real> tpm(rho, spectral_projectors(o));
  return tpm.distribution(u_tau, default_merge_tol(tpm.projectors()));
}

/// G(u) = sum_j p_j exp(-i u Delta O_j).
template <typename Real>
Complex<Real> characteristic_function(const OutcomeDistribution<Real>& dist, Real u) {
  Complex<Real> g(0);
  for (Index j = 0; j < dist.support.size(); ++j) g += dist.probs(j) * std::polar(Real(1), -u * dist.support(j));
  return g;
}

template <typename Real = double>
struct OtocIdentity {
  Complex<Real> f;
  Complex<Real> g;
  Real gap;
};

/// F = otoc(rho, W, exp(iuO), H, tau) against G(u) of the TPM distribution
/// around U_tau = W_tau.
template <typename Real>
OtocIdentity<Real> verify_otoc_identity(const DensityMatrix<Real>& rho, const CMatrix<Real>& o,
                                        const CMatrix<Real>& w, const CMatrix<Real>& h, Real tau, Real u) {
  const auto h_dec = eig_hermitian(h);
  const auto o_dec = eig_hermitian(o);
  const CMatrix<Real> w_tau = heisenberg_wingflap(w, h_dec, tau);
  const Complex<Real> f = otoc_from_heisenberg(rho, w_tau, operator_exponential(o_dec, u));

  TwoPointMeasurement<Real> tpm(rho, spectral_projectors(o_dec, default_cluster_tol(o_dec)));
  const Complex<Real> g = characteristic_function(tpm.distribution(w_tau, default_merge_tol(tpm.projectors())), u);
  return {f, g, std::abs(f - g)};
}

template <typename Real>
Moments<Real> moments(const OutcomeDistribution<Real>& dist) {
  const Real mean = dist.probs.dot(dist.support);
  const Real second = dist.probs.dot(dist.support.cwiseAbs2());
  return {mean, second, second - mean * mean};
}

namespace detail {

/// Tr(sigma ln sigma - sigma log_rho) with ln rho supplied.
template <typename Real>
Real relative_entropy_with_log(const CMatrix<Real>& sigma, const CMatrix<Real>& log_rho) {
  const RVector<Real> ev = eigenvalues_hermitian(sigma);
  Real entropy_term = 0;
  for (Index i = 0; i < ev.size(); ++i)
    if (ev(i) > Real(kUnvisitedFloor)) entropy_term += ev(i) * std::log(ev(i));
  return entropy_term - trace_of_product(sigma, log_rho).real();
}

template <typename Real>
CMatrix<Real> log_full_rank_state(const CMatrix<Real>& rho) {
  const auto dec = eig_hermitian(rho);
  if (dec.eigenvalues.minCoeff() <= Real(kUnvisitedFloor))
    throw DomainError("relative_entropy: reference state is singular");
  return matrix_function(dec, [](Real x) { return std::log(x); });
}

}  // namespace detail

/// S[rho_tau || rho] = Tr(rho_tau ln rho_tau - rho_tau ln rho).
/// Eigenvalues of rho_tau below 1e-14 contribute nothing to the first term.
template <typename Real>
Real relative_entropy(const DensityMatrix<Real>& rho_tau, const DensityMatrix<Real>& rho) {
  detail::require_same_dim(rho_tau.matrix(), rho.matrix(), "relative_entropy");
  return detail::relative_entropy_with_log(rho_tau.matrix(), detail::log_full_rank_state(rho.matrix()));
}

template <typename Real = double>
struct DissipationCheck {
  Real mean_w;
  Real s_rel;
  Real gap;
};

/// gap = |<w> - S/beta|. At beta = 0 the gap is max(|<w>|, |S|), both of
/// which vanish for the maximally mixed state.
template <typename Real>
Real dissipation_gap(Real mean_w, Real s_rel, Real beta) {
  if (beta > 0) return std::abs(mean_w - s_rel / beta);
  return std::max(std::abs(mean_w), std::abs(s_rel));
}

template <typename Real>
DissipationCheck<Real> dissipation_check(const DensityMatrix<Real>& rho, Real beta, const CMatrix<Real>& h0,
                                         const CMatrix<Real>& u_tau) {
  TwoPointMeasurement<Real> tpm(rho, spectral_projectors(h0));
  const Real mean_w = moments(tpm.distribution(u_tau, default_merge_tol(tpm.projectors()))).mean;
  const auto rho_tau = DensityMatrix<Real>::from_matrix(u_tau * rho.matrix() * u_tau.adjoint(), Real(1e-10));
  const Real s = relative_entropy(rho_tau, rho);
  return {mean_w, s, dissipation_gap(mean_w, s, beta)};
}

template <typename Real = double>
struct PinskerCheck {
  Real s;
  Real bound;
  Real slack;
};

/// S[rho_tau||rho] against |rho_tau - rho|_1^2 / 2.
template <typename Real>
PinskerCheck<Real> pinsker_gap(const DensityMatrix<Real>& rho_tau, const DensityMatrix<Real>& rho) {
  const Real s = relative_entropy(rho_tau, rho);
  const CMatrix<Real> diff = rho_tau.matrix() - rho.matrix();
  const Real norm = trace_norm_hermitian(diff);
  const Real bound = norm * norm / Real(2);
  return {s, bound, s - bound};
}

/// sum_j p_j exp(-beta w_j); equals 1 for a thermal initial state of H0.
template <typename Real>
Real jarzynski_check(const OutcomeDistribution<Real>& dist, Real beta) {
  return dist.probs.dot((-beta * dist.support.array()).exp().matrix());
}

/// <w> - beta var(w) / 2, signed.
template <typename Real>
Real linear_response_gap(const Moments<Real>& m, Real beta) {
  return m.mean - beta * m.variance / Real(2);
}

/// Tr((U^dagger H0 U - H0)(H0 + c 1)); independent of c.
template <typename Real>
Real service_state_work(const CMatrix<Real>& u_tau, const CMatrix<Real>& h0, Real c) {
  detail::require_same_dim(u_tau, h0, "service_state_work");
  const CMatrix<Real> work_op = u_tau.adjoint() * h0 * u_tau - h0;
  const CMatrix<Real> service = h0 + c * CMatrix<Real>::Identity(h0.rows(), h0.cols());
  return trace_of_product(work_op, service).real();
}

}  // namespace scramble
