#include "oracles.hpp"
#include "scramble/spectral.hpp"
#include "scramble/spin_algebra.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace scramble;
using oracle::Cplx;
using oracle::Mat;

namespace {

void check_family(const ProjectorFamily<double>& f) {
  const Eigen::Index n = f.dim();
  Mat sum = Mat::Zero(n, n);
  Eigen::Index mult = 0;
  for (std::size_t a = 0; a < f.clusters.size(); ++a) {
    const Mat& p = f.clusters[a].projector;
    CHECK(hermiticity_defect(p) <= 1e-10);
    CHECK(oracle::max_abs(p * p - p) <= 1e-10);
    for (std::size_t b = a + 1; b < f.clusters.size(); ++b)
      CHECK(oracle::max_abs(p * f.clusters[b].projector) <= 1e-10);
    sum += p;
    mult += f.clusters[a].multiplicity;
  }
  CHECK(oracle::max_abs(sum - Mat::Identity(n, n)) <= 1e-10);
  CHECK(mult == n);
}

}  // namespace

TEST_CASE("eig_hermitian on simple inputs") {
  const auto dx = eig_hermitian(oracle::sx());
  CHECK(dx.eigenvalues(0) == doctest::Approx(-1));
  CHECK(dx.eigenvalues(1) == doctest::Approx(1));

  Mat d = Mat::Zero(3, 3);
  d.diagonal() << 3, 1, 2;
  const auto dd = eig_hermitian(d);
  CHECK(dd.eigenvalues(0) == doctest::Approx(1));
  CHECK(dd.eigenvalues(1) == doctest::Approx(2));
  CHECK(dd.eigenvalues(2) == doctest::Approx(3));
  // Each eigenvector is a (phased) unit vector.
  CHECK(std::abs(dd.eigenvectors(1, 0)) == doctest::Approx(1));
  CHECK(std::abs(dd.eigenvectors(2, 1)) == doctest::Approx(1));
  CHECK(std::abs(dd.eigenvectors(0, 2)) == doctest::Approx(1));
  CHECK(dd.source_dim() == 3);

  Mat bad = Mat::Zero(2, 2);
  bad(0, 1) = 1;
  CHECK_THROWS_AS(eig_hermitian(bad), PreconditionError);
}

TEST_CASE("eig_hermitian reconstruction and unitarity (random)") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Index n = 2 + trial % 15;
    const Mat a = oracle::random_hermitian(n, rng, 1.0 + trial);
    const auto dec = eig_hermitian(a);
    const double scale = std::max(1.0, dec.eigenvalues.cwiseAbs().maxCoeff());
    CHECK(oracle::max_abs(reconstruct(dec) - a) <= 1e-10 * scale);
    CHECK(unitarity_defect(dec.eigenvectors) <= 1e-10);
    for (Eigen::Index i = 1; i < n; ++i) CHECK(dec.eigenvalues(i) >= dec.eigenvalues(i - 1));
  }
}

TEST_CASE("propagator") {
  std::mt19937_64 rng(2);
  const Mat h = oracle::random_hermitian(6, rng);
  CHECK(oracle::max_abs(propagator(h, 0.0) - Mat::Identity(6, 6)) <= 1e-12);

  const Mat uz = propagator<double>(oracle::sz(), std::numbers::pi);
  CHECK(oracle::max_abs(uz + Mat::Identity(2, 2)) <= 1e-12);

  const Mat h1 = build_h1(3, 1.0).matrix;
  const Mat u = propagator(h1, 0.7);
  CHECK(unitarity_defect(u) <= 1e-10);
  CHECK(oracle::max_abs(u - oracle::series_exp(h1, {0, -0.7})) <= 1e-8);

  const Mat hx = build_h0(3, 0.9).matrix + build_h2(3, 1.0, 0.8).matrix;
  CHECK(oracle::max_abs(propagator(hx, 0.45) - oracle::series_exp(hx, {0, -0.45})) <= 1e-8);
}

TEST_CASE("propagator group and inverse laws (random)") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> time(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat h = oracle::random_hermitian(2 + trial % 7, rng);
    const auto dec = eig_hermitian(h);
    const double s = time(rng), t = time(rng);
    CHECK(oracle::max_abs(propagator(dec, s) * propagator(dec, t) - propagator(dec, s + t)) <= 1e-10);
    CHECK(oracle::max_abs(propagator(dec, t).adjoint() - propagator(dec, -t)) <= 1e-12);
  }
}

TEST_CASE("operator_exponential uses exp(+iuO)") {
  std::mt19937_64 rng(4);
  const Mat o = oracle::random_hermitian(4, rng);
  CHECK(oracle::max_abs(operator_exponential(o, 0.0) - Mat::Identity(4, 4)) <= 1e-12);
  CHECK(oracle::max_abs(operator_exponential<double>(oracle::sx(), std::numbers::pi / 2) -
                        Mat(Cplx(0, 1) * oracle::sx())) <= 1e-12);
  CHECK(oracle::max_abs(operator_exponential(o, 0.8) - oracle::series_exp(o, {0, 0.8})) <= 1e-9);

  const Mat v = operator_exponential(build_h0(9, 0.90450849).matrix, 1.0);
  const Mat w = build_wingflap(9, 5, std::numbers::pi / 2).matrix;
  CHECK(unitarity_defect(v) <= 1e-10);
  CHECK(oracle::max_abs(v * w - w * v) <= 1e-10);

  Mat bad = Mat::Zero(2, 2);
  bad(1, 0) = 1;
  CHECK_THROWS_AS(operator_exponential(bad, 1.0), PreconditionError);
}

TEST_CASE("thermal_state") {
  std::mt19937_64 rng(5);
  const Mat h = oracle::random_hermitian(8, rng);
  const auto rho0 = thermal_state(h, 0.0);
  CHECK(oracle::max_abs(rho0.matrix() - Mat::Identity(8, 8) / 8.0) <= 1e-14);

  const auto rz = thermal_state<double>(oracle::sz(), 1.0);
  const double z = std::exp(-1.0) + std::exp(1.0);
  CHECK(std::abs(rz.matrix()(0, 0) - std::exp(-1.0) / z) <= 1e-14);
  CHECK(std::abs(rz.matrix()(1, 1) - std::exp(1.0) / z) <= 1e-14);
  CHECK(std::abs(rz.matrix()(0, 1)) <= 1e-14);

  const Mat h0 = build_h0(9, 0.90450849).matrix;
  const auto rho = thermal_state(h0, 0.1);
  CHECK(std::abs(rho.matrix().trace() - Cplx(1)) <= 1e-12);
  CHECK(oracle::max_abs(rho.matrix() * h0 - h0 * rho.matrix()) <= 1e-12);
  CHECK(hermiticity_defect(rho.matrix()) <= 1e-12);

  // Large beta does not overflow thanks to the ground-energy shift.
  const auto cold = thermal_state(h0, 500.0);
  CHECK(std::abs(cold.matrix().trace() - Cplx(1)) <= 1e-12);
  CHECK(cold.matrix().allFinite());

  // Agrees with the series exponential (moderate beta).
  const Mat small = build_h0(3, 0.6).matrix + build_h1(3, 1.0).matrix;
  Mat gibbs = oracle::series_exp(small, -0.4);
  gibbs /= gibbs.trace();
  CHECK(oracle::max_abs(thermal_state(small, 0.4).matrix() - gibbs) <= 1e-12);

  CHECK_THROWS_AS(thermal_state(h, -1.0), PreconditionError);
  CHECK_THROWS_AS(thermal_state(h, std::numeric_limits<double>::infinity()), PreconditionError);
}

TEST_CASE("DensityMatrix validation") {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 1;
  CHECK_NOTHROW(DensityMatrix<double>::from_matrix(m));
  m(0, 0) = 2;
  CHECK_THROWS_AS(DensityMatrix<double>::from_matrix(m), PreconditionError);
  Mat neg = Mat::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix<double>::from_matrix(neg), PreconditionError);
}

TEST_CASE("spectral_projectors groups degenerate eigenvalues") {
  const auto f = spectral_projectors(build_h0(3, 1.0).matrix, 1e-8);
  REQUIRE(f.size() == 4);
  const double values[] = {-3, -1, 1, 3};
  const Eigen::Index mult[] = {1, 3, 3, 1};
  for (int a = 0; a < 4; ++a) {
    CHECK(f.clusters[std::size_t(a)].value == doctest::Approx(values[a]).epsilon(1e-12));
    CHECK(f.clusters[std::size_t(a)].multiplicity == mult[a]);
  }
  check_family(f);

  const auto fz = spectral_projectors<double>(oracle::sz(), 1e-8);
  REQUIRE(fz.size() == 2);
  Mat down = Mat::Zero(2, 2), up = Mat::Zero(2, 2);
  down(1, 1) = 1;
  up(0, 0) = 1;
  CHECK(oracle::max_abs(fz.clusters[0].projector - down) <= 1e-12);
  CHECK(oracle::max_abs(fz.clusters[1].projector - up) <= 1e-12);

  const auto fi = spectral_projectors<double>(Mat::Identity(4, 4), 1e-8);
  REQUIRE(fi.size() == 1);
  CHECK(fi.clusters[0].multiplicity == 4);
  CHECK(oracle::max_abs(fi.clusters[0].projector - Mat::Identity(4, 4)) <= 1e-12);

  CHECK_THROWS_AS(spectral_projectors<double>(oracle::sz(), 0.0), PreconditionError);
  CHECK_THROWS_AS(spectral_projectors<double>(oracle::sz(), -1.0), PreconditionError);
}

TEST_CASE("spectral_projectors invariants and spectral theorem (random)") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 15; ++trial) {
    const Mat o = oracle::random_hermitian(2 + trial % 9, rng);
    const auto f = spectral_projectors(o);
    check_family(f);
    Mat sum = Mat::Zero(o.rows(), o.cols());
    for (const auto& c : f.clusters) sum += c.value * c.projector;
    CHECK(oracle::max_abs(sum - o) <= 1e-10);
  }
  // Degenerate observable built from explicit projectors.
  const Mat o = build_h0(4, 0.5).matrix + 2.0 * build_h1(4, 1.0).matrix;
  const auto f = spectral_projectors(o);
  check_family(f);
  Mat sum = Mat::Zero(o.rows(), o.cols());
  for (const auto& c : f.clusters) sum += c.value * c.projector;
  CHECK(oracle::max_abs(sum - o) <= 1e-10);
}

TEST_CASE("matrix_function") {
  std::mt19937_64 rng(7);
  const Mat a = oracle::random_hermitian(5, rng);
  CHECK(oracle::max_abs(matrix_function(a, [](double x) { return x; }) - a) <= 1e-12);

  Mat d = Mat::Zero(2, 2);
  d.diagonal() << 1, std::exp(1.0);
  Mat expected = Mat::Zero(2, 2);
  expected(1, 1) = 1;
  CHECK(oracle::max_abs(matrix_function(d, [](double x) { return std::log(x); }) - expected) <= 1e-14);

  // ln of a Gibbs state is -beta H0 - ln Z.
  const Mat h0 = build_h0(4, 0.9).matrix;
  const double beta = 0.3;
  const auto rho = thermal_state(h0, beta);
  const auto dec = eig_hermitian(h0);
  double z = 0;
  for (Eigen::Index i = 0; i < dec.eigenvalues.size(); ++i) z += std::exp(-beta * dec.eigenvalues(i));
  const Mat log_rho = matrix_function(rho.matrix(), [](double x) { return std::log(x); });
  CHECK(oracle::max_abs(log_rho - (-beta * h0 - std::log(z) * Mat::Identity(16, 16))) <= 1e-10);

  Mat singular = Mat::Zero(2, 2);
  singular(0, 0) = 1;
  CHECK_THROWS_AS(matrix_function(singular, [](double x) { return std::log(x); }), DomainError);
  CHECK_THROWS_AS(matrix_function<double>(-Mat(Mat::Identity(2, 2)), [](double x) { return std::sqrt(x); }),
                  DomainError);
}

TEST_CASE("trace norm") {
  Mat d = Mat::Zero(3, 3);
  d.diagonal() << 0.5, -0.25, 0;
  CHECK(trace_norm_hermitian(d) == doctest::Approx(0.75));
}
