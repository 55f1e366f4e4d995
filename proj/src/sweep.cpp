#include "scramble/experiment.hpp"
#include "scramble/scramble.hpp"

#include <cmath>
#include <exception>
#include <sstream>

namespace scramble::experiment {

namespace {

using Mat = CMatrix<double>;
using Vec = CVector<double>;
using RVec = RVector<double>;

Mat build_hamiltonian(const ExperimentConfig& c) {
  const auto& ch = c.chain;
  Mat h = build_h0(ch.length, ch.g).matrix;
  switch (c.model) {
    case Model::integrable: h += build_h1(ch.length, ch.J).matrix; break;
    case Model::ergodic: h += build_h2(ch.length, ch.J, ch.h).matrix; break;
    case Model::custom:
      if (ch.length >= 2) h += build_h1(ch.length, ch.J).matrix;
      for (int i = 1; i <= ch.length; ++i)
        h += ch.h * embed_local(pauli<double>(Axis::z), i, ch.length).matrix;
      break;
  }
  return h;
}

double forward_duration(const ExperimentConfig& c, double tau) {
  return c.flap_time_convention == FlapConvention::midpoint_tau_half ? tau / 2 : tau;
}

/// Everything that stays fixed along the tau grid, expressed in the
/// eigenbasis of H0 (the measured observable). In that frame H0, rho and
/// V = exp(iuH0) are diagonal.
struct SweepContext {
  TwoPointMeasurement<double> tpm;
  RVec energies;       // eigenvalues of H0
  RVec weights;        // thermal populations
  Vec v_diag;          // exp(i u H0)
  Mat log_rho;         // ln rho
  double entropy_term; // Tr(rho ln rho)
  double merge_tol;
  Mat h_to_frame;      // R^dagger Q with Q the eigenbasis of H
  RVec h_energies;
  Mat w_h;             // W in the eigenbasis of H
  RVec values;         // cluster representatives
};

SweepContext prepare(const ExperimentConfig& c) {
  const auto& ch = c.chain;
  const Mat h0 = build_h0(ch.length, ch.g).matrix;
  const Mat w = build_wingflap(ch.length, ch.site, ch.theta).matrix;
  const auto h0_dec = eig_hermitian(h0);
  const auto h_dec = eig_hermitian(build_hamiltonian(c));
  const auto rho = thermal_state(h0_dec, c.beta);
  auto projs = spectral_projectors(h0_dec, default_cluster_tol(h0_dec));
  const double merge_tol = default_merge_tol(projs);
  const Mat& r = projs.basis;

  const Mat rho_frame = r.adjoint() * rho.matrix() * r;
  const RVec weights = rho_frame.diagonal().real();
  const Mat log_rho = r.adjoint() * detail::log_full_rank_state(rho.matrix()) * r;

  double entropy_term = 0;
  for (Index i = 0; i < weights.size(); ++i)
    if (weights(i) > kUnvisitedFloor) entropy_term += weights(i) * std::log(weights(i));

  Vec v_diag(h0_dec.eigenvalues.size());
  for (Index i = 0; i < v_diag.size(); ++i) v_diag(i) = std::polar(1.0, c.u * h0_dec.eigenvalues(i));

  Mat h_to_frame = r.adjoint() * h_dec.eigenvectors;
  TwoPointMeasurement<double> tpm(rho, std::move(projs));
  RVec values = tpm.projectors().values();
  return {std::move(tpm),
          h0_dec.eigenvalues,
          weights,
          std::move(v_diag),
          log_rho,
          entropy_term,
          merge_tol,
          std::move(h_to_frame),
          h_dec.eigenvalues,
          h_dec.eigenvectors.adjoint() * w * h_dec.eigenvectors,
          std::move(values)};
}

SweepRow evaluate(const ExperimentConfig& c, const SweepContext& ctx, std::size_t index, double tau) {
  const double t = forward_duration(c, tau);
  const Index n = ctx.energies.size();

  // W_tau in the frame: K (D W_H D^dagger) K^dagger with D = exp(i t E_H).
  Vec phase(n);
  for (Index i = 0; i < n; ++i) phase(i) = std::polar(1.0, t * ctx.h_energies(i));
  const Mat evolved = phase.asDiagonal() * ctx.w_h * phase.conjugate().asDiagonal();
  const Mat u = ctx.h_to_frame * evolved * ctx.h_to_frame.adjoint();

  SweepRow row{};
  row.tau = tau;

  // F = Tr(rho U^dagger V^dagger U V)
  const Mat vu = ctx.v_diag.conjugate().asDiagonal() * u;
  const Mat z = u.adjoint() * vu;
  std::complex<double> f(0);
  for (Index i = 0; i < n; ++i) f += ctx.weights(i) * z(i, i) * ctx.v_diag(i);
  row.re_F = f.real();
  row.im_F = f.imag();

  // C = <[U, V]^dagger [U, V]>; [U, V]_mn = U_mn (v_n - v_m)
  double c_measure = 0;
  for (Index col = 0; col < n; ++col) {
    double s = 0;
    for (Index m = 0; m < n; ++m) s += std::norm(u(m, col) * (ctx.v_diag(col) - ctx.v_diag(m)));
    c_measure += ctx.weights(col) * s;
  }
  row.C = c_measure;
  row.commutator_gap = std::abs(c_measure - 2 * (1 - f.real()));

  // <(U^dagger H0 U - H0)^2>
  Mat a = u.adjoint() * (ctx.energies.cast<std::complex<double>>().asDiagonal() * u);
  a.diagonal() -= ctx.energies.cast<std::complex<double>>();
  row.square_commutator = ctx.weights.dot(a.cwiseAbs2().colwise().sum().transpose());

  const auto transitions = ctx.tpm.transitions_in_frame(u);
  const auto dist = ctx.tpm.distribution_from(transitions, ctx.merge_tol);
  const auto m = moments(dist);
  row.mean_w = m.mean;
  row.second_moment_w = m.second_moment;
  row.variance_w = m.variance;
  row.otoc_gap = std::abs(f - characteristic_function(dist, c.u));
  row.jarzynski = jarzynski_check(dist, c.beta);
  row.linear_response_gap = linear_response_gap(m, c.beta);

  // rho_tau = U rho U^dagger; Tr(rho_tau ln rho_tau) = Tr(rho ln rho) by unitary invariance.
  Mat rho_tau = u * ctx.weights.cast<std::complex<double>>().asDiagonal() * u.adjoint();
  rho_tau = (0.5 * (rho_tau + rho_tau.adjoint())).eval();
  row.rel_entropy = ctx.entropy_term - trace_of_product(rho_tau, ctx.log_rho).real();
  row.dissipation_gap = dissipation_gap(m.mean, row.rel_entropy, c.beta);

  Mat diff = rho_tau;
  diff.diagonal() -= ctx.weights.cast<std::complex<double>>();
  const double norm = trace_norm_hermitian(diff);
  row.pinsker_slack = row.rel_entropy - norm * norm / 2;

  if (c.shots) {
    const std::uint64_t seed = splitmix64(c.seed.value_or(0), index);
    const auto records = ShotSampler<double>(transitions, ctx.values).run(*c.shots, seed);
    const auto g = empirical_characteristic(records, c.u);
    const auto emp = empirical_distribution(records, std::optional<double>(ctx.merge_tol), std::optional(seed));
    row.empirical = EmpiricalColumns{g.value.real(), g.value.imag(), g.std_error, total_variation_distance(emp, dist)};
  }
  return row;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  const SweepContext ctx = prepare(config);
  const auto taus = config.tau_grid.values();

  SweepResult result{config, std::vector<SweepRow>(taus.size())};
  std::vector<std::string> errors(taus.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < taus.size(); ++i) {
    try {
      result.rows[i] = evaluate(config, ctx, i, taus[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (std::size_t i = 0; i < taus.size(); ++i)
    if (!errors[i].empty()) {
      std::ostringstream msg;
      msg << "grid point " << i << " (tau = " << taus[i] << "): " << errors[i];
      throw IdentityViolation(msg.str());
    }
  return result;
}

std::vector<IdentityViolationReport> check_identities(const SweepResult& result, const IdentityTolerances& tol) {
  std::vector<IdentityViolationReport> out;
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& r = result.rows[i];
    auto flag = [&](bool bad, const char* name, double value) {
      if (bad || !std::isfinite(value)) out.push_back({i, r.tau, name, value});
    };
    flag(r.otoc_gap > tol.otoc, "otoc_characteristic_function", r.otoc_gap);
    const double eq11 = std::abs(r.second_moment_w - r.square_commutator);
    flag(eq11 > tol.second_moment, "second_moment_square_commutator", eq11);
    flag(r.dissipation_gap > tol.dissipation, "mean_work_relative_entropy", r.dissipation_gap);
    flag(std::abs(r.jarzynski - 1) > tol.jarzynski, "jarzynski", r.jarzynski - 1);
    flag(r.pinsker_slack < -tol.pinsker, "pinsker", r.pinsker_slack);
  }
  return out;
}

}  // namespace scramble::experiment
