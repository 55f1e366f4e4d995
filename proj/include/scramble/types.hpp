#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace scramble {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

/// Raised when an input violates an operation's precondition
/// (non-Hermitian generator, site out of range, dimension mismatch, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a scalar function is evaluated outside its domain on a spectrum.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when two routes to the same quantity disagree beyond tolerance.
class IdentityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real max_abs(
    const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real hermiticity_defect(
    const Eigen::MatrixBase<Derived>& a) {
  return max_abs(a - a.adjoint());
}

template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real unitarity_defect(
    const Eigen::MatrixBase<Derived>& u) {
  using Plain = typename Derived::PlainObject;
  return max_abs(u.adjoint() * u - Plain::Identity(u.rows(), u.cols()));
}

template <typename Real>
CMatrix<Real> commutator(const CMatrix<Real>& a, const CMatrix<Real>& b) {
  return a * b - b * a;
}

/// Tr(A B) without forming the product.
template <typename Real>
Complex<Real> trace_of_product(const CMatrix<Real>& a, const CMatrix<Real>& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

template <typename Real>
void require_square(const CMatrix<Real>& a, const char* what) {
  require(a.rows() == a.cols() && a.rows() > 0, std::string(what) + ": matrix must be square and non-empty");
}

template <typename Real>
void require_same_dim(const CMatrix<Real>& a, const CMatrix<Real>& b, const char* what) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), std::string(what) + ": dimension mismatch");
}

template <typename Real>
void require_hermitian(const CMatrix<Real>& a, Real tol, const char* what) {
  require_square(a, what);
  const Real scale = std::max(Real(1), max_abs(a));
  require(hermiticity_defect(a) <= tol * scale, std::string(what) + ": operator is not Hermitian");
}

template <typename Real>
void require_unitary(const CMatrix<Real>& u, Real tol, const char* what) {
  require_square(u, what);
  require(unitarity_defect(u) <= tol, std::string(what) + ": operator is not unitary");
}

}  // namespace detail
}  // namespace scramble
