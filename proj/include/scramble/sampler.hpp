#pragma once

// Shot-by-shot emulation of the two-point measurement protocol.
//
// Each shot draws the initial cluster n from p_n and the final cluster m from
// column n of the cluster-level transition matrix. For [rho, O] = 0 this has
// the same cluster statistics as collapsing and evolving a state vector.
//
// Random numbers: shot i consumes draws 2i and 2i+1 of the SplitMix64 stream
// seeded with `seed` (Steele, Lea & Flood 2014). Draw k is a pure function of
// (seed, k), so any shot can be generated independently and results do not
// depend on execution order or thread count. A draw maps to [0, 1) through its
// top 53 bits.

#include "scramble/tpm.hpp"
#include "scramble/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace scramble {

/// k-th output of the SplitMix64 generator started from `seed`.
inline std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed + (k + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline double uniform01(std::uint64_t seed, std::uint64_t k) {
  return double(splitmix64(seed, k) >> 11) * 0x1.0p-53;
}

template <typename Real = double>
struct ShotRecord {
  Index initial_cluster;
  Index final_cluster;
  Real delta_o;

  friend bool operator==(const ShotRecord&, const ShotRecord&) = default;
};

/// Precomputed inverse-CDF tables for one (state, observable, U_tau).
template <typename Real = double>
class ShotSampler {
 public:
  ShotSampler(const TransitionMatrix<Real>& t, RVector<Real> values) : values_(std::move(values)) {
    const Index k = t.clusters();
    detail::require(values_.size() == k, "ShotSampler: cluster values do not match transition matrix");
    initial_ = cumulative(t.initial_probs, t.visited);
    columns_.resize(std::size_t(k));
    for (Index n = 0; n < k; ++n)
      if (t.visited[std::size_t(n)]) columns_[std::size_t(n)] = cumulative(t.entries.col(n), {});
  }

  ShotRecord<Real> draw(std::uint64_t seed, std::uint64_t shot) const {
    const Index n = pick(initial_, uniform01(seed, 2 * shot));
    const Index m = pick(columns_[std::size_t(n)], uniform01(seed, 2 * shot + 1));
    return {n, m, values_(m) - values_(n)};
  }

  std::vector<ShotRecord<Real>> run(std::int64_t shots, std::uint64_t seed) const {
    detail::require(shots >= 1, "sample_protocol: shots must be >= 1");
    std::vector<ShotRecord<Real>> records(static_cast<std::size_t>(shots));
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < shots; ++i) records[std::size_t(i)] = draw(seed, std::uint64_t(i));
    return records;
  }

 private:
  struct Cdf {
    std::vector<Real> cumulative;
    Index last_positive = 0;
  };

  template <typename Vec>
  static Cdf cumulative(const Vec& p, const std::vector<bool>& mask) {
    Cdf cdf;
    Real running = 0;
    for (Index i = 0; i < p.size(); ++i) {
      const bool allowed = mask.empty() || mask[std::size_t(i)];
      const Real w = allowed ? std::max(Real(0), p(i)) : Real(0);
      if (w > 0) cdf.last_positive = i;
      running += w;
      cdf.cumulative.push_back(running);
    }
    for (auto& c : cdf.cumulative) c /= running;
    return cdf;
  }

  static Index pick(const Cdf& cdf, double u) {
    const auto it = std::upper_bound(cdf.cumulative.begin(), cdf.cumulative.end(), Real(u));
    const Index i = Index(it - cdf.cumulative.begin());
    return std::min(i, cdf.last_positive);
  }

  RVector<Real> values_;
  Cdf initial_;
  std::vector<Cdf> columns_;
};

template <typename Real>
std::vector<ShotRecord<Real>> sample_protocol(const TwoPointMeasurement<Real>& tpm, const CMatrix<Real>& u_tau,
                                              std::int64_t shots, std::uint64_t seed) {
  return ShotSampler<Real>(tpm.transitions(u_tau), tpm.projectors().values()).run(shots, seed);
}

template <typename Real>
std::vector<ShotRecord<Real>> sample_protocol(const DensityMatrix<Real>& rho, const CMatrix<Real>& o,
                                              const CMatrix<Real>& u_tau, std::int64_t shots, std::uint64_t seed) {
  return sample_protocol(TwoPointMeasurement<Real>(rho, spectral_projectors(o)), u_tau, shots, seed);
}

/// Histogram of observed Delta O values.
template <typename Real = double>
struct EmpiricalDistribution {
  RVector<Real> support;
  std::vector<std::uint64_t> counts;
  std::uint64_t shots = 0;
  std::optional<std::uint64_t> seed;
  Real merge_tol = Real(1e-9);

  Real probability(Index j) const { return Real(counts[std::size_t(j)]) / Real(shots); }
};

/// Values closer than merge_tol (after sorting) share a bin. The default
/// scales 1e-9 by the spread of the observed values.
template <typename Real>
EmpiricalDistribution<Real> empirical_distribution(const std::vector<ShotRecord<Real>>& records,
                                                   std::optional<Real> merge_tol = std::nullopt,
                                                   std::optional<std::uint64_t> seed = std::nullopt) {
  detail::require(!records.empty(), "empirical_distribution: no records");
  std::vector<Real> values;
  values.reserve(records.size());
  for (const auto& r : records) values.push_back(r.delta_o);
  std::sort(values.begin(), values.end());
  const Real tol = merge_tol.value_or(Real(1e-9) * std::max(Real(1), values.back() - values.front()));

  std::vector<Real> support;
  std::vector<std::uint64_t> counts;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i == 0 || values[i] - values[i - 1] >= tol) {
      support.push_back(values[i]);
      counts.push_back(0);
    }
    ++counts.back();
  }
  return {Eigen::Map<RVector<Real>>(support.data(), Index(support.size())), std::move(counts),
          std::uint64_t(records.size()), seed, tol};
}

template <typename Real = double>
struct EmpiricalCharacteristic {
  Complex<Real> value;
  Real std_error;
};

/// Sample mean of exp(-i u Delta O) with its standard error, taken as the
/// root-mean-square deviation of the complex summands over sqrt(N). This
/// bounds the standard error of both the real and the imaginary part.
template <typename Real>
EmpiricalCharacteristic<Real> empirical_characteristic(const std::vector<ShotRecord<Real>>& records, Real u) {
  detail::require(!records.empty(), "empirical_characteristic: no records");
  if (u == Real(0)) return {Complex<Real>(1, 0), Real(0)};
  const Real n = Real(records.size());
  Complex<Real> sum(0);
  for (const auto& r : records) sum += std::polar(Real(1), -u * r.delta_o);
  const Complex<Real> mean = sum / n;
  Real sq = 0;
  for (const auto& r : records) sq += std::norm(std::polar(Real(1), -u * r.delta_o) - mean);
  const Real sample_sd = records.size() > 1 ? std::sqrt(sq / (n - 1)) : Real(0);
  return {mean, sample_sd / std::sqrt(n)};
}

/// Half the L1 distance between the empirical and exact distributions over
/// the union of their supports, aligned with the exact merge tolerance.
template <typename Real>
Real total_variation_distance(const EmpiricalDistribution<Real>& emp, const OutcomeDistribution<Real>& exact) {
  std::vector<std::pair<Real, Real>> points;  // (value, empirical - exact)
  for (Index j = 0; j < emp.support.size(); ++j) points.emplace_back(emp.support(j), emp.probability(j));
  for (Index j = 0; j < exact.support.size(); ++j) points.emplace_back(exact.support(j), -exact.probs(j));
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  const Real tol = std::max(exact.merge_tol, emp.merge_tol);
  Real total = 0;
  std::size_t i = 0;
  while (i < points.size()) {
    Real diff = points[i].second;
    std::size_t j = i + 1;
    while (j < points.size() && points[j].first - points[j - 1].first < tol) diff += points[j++].second;
    total += std::abs(diff);
    i = j;
  }
  return total / Real(2);
}

}  // namespace scramble
