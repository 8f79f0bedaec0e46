#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "opmeans/matrix.hpp"

namespace opmeans {

// Eigen-reconstruction tolerance (relative, Frobenius).
inline constexpr double kEigTol = 1e-12;
// Default tolerance of the Loewner order predicate.
inline constexpr double kLoewnerTol = 1e-9;
// Semidefiniteness slack: lambda_min >= -kPsdTol * (1 + |H|_F). Also the
// relative threshold below which a positive matrix counts as singular.
inline constexpr double kPsdTol = 1e-12;
// Hermitian symmetry required of matrices read from files.
inline constexpr double kHermitianReadTol = 1e-12;
inline constexpr int kMaxJacobiSweeps = 100;

using ScalarFn = std::function<double(double)>;

// Dense complex Hermitian matrix. Only the upper triangle is ever written;
// the lower triangle is its conjugate mirror and the diagonal is real, so
// symmetry is exact.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(std::size_t n) : m_(n) {}

  static HermitianMatrix from_upper(const CMatrix& m);
  // Rejects input whose symmetry defect exceeds tol * max(1, max |m_ij|).
  static HermitianMatrix checked(const CMatrix& m, double tol = kHermitianReadTol);
  static HermitianMatrix identity(std::size_t n);
  static HermitianMatrix diagonal(std::span<const double> d);
  static HermitianMatrix scalar(std::size_t n, double c);
  // h h^*
  static HermitianMatrix outer(std::span<const cplx> h);

  std::size_t dim() const { return m_.dim(); }
  cplx operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  void set(std::size_t i, std::size_t j, cplx v);
  const CMatrix& matrix() const { return m_; }
  double frobenius() const { return m_.frobenius(); }

  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator-=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s);

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }
  friend bool operator==(const HermitianMatrix&, const HermitianMatrix&) = default;

 private:
  CMatrix m_;
};

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // eigenvectors in columns

  double min() const { return values.front(); }
  double max() const { return values.back(); }
};

// Cyclic complex Jacobi. Throws NonConvergence after kMaxJacobiSweeps.
EigenDecomposition eigh(const HermitianMatrix& h);

// U diag(f(lambda)) U^*. Throws DomainError if f returns a non-finite value
// at any eigenvalue.
HermitianMatrix apply_fn(const EigenDecomposition& e, const ScalarFn& f);
HermitianMatrix apply_fn(const HermitianMatrix& h, const ScalarFn& f);

double min_eigenvalue(const HermitianMatrix& h);
double operator_norm(const HermitianMatrix& h);

// max(0, -lambda_min(B - A)) / (1 + |B - A|_F); zero when A <= B exactly.
double loewner_violation(const HermitianMatrix& a, const HermitianMatrix& b);
bool loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b, double tol = kLoewnerTol);
// max(0, -lambda_min(B - A)) / (1 + max(|A|_F, |B|_F)); for inequalities that
// are tight or nearly so, where roundoff scales with the operands.
double scaled_loewner_violation(const HermitianMatrix& a, const HermitianMatrix& b);

// C A C^*, Hermitian by construction.
HermitianMatrix congruence(const CMatrix& c, const HermitianMatrix& a);

// |a - b|_F / (1 + |a|_F)
double relative_residual(const HermitianMatrix& a, const HermitianMatrix& b);

// Positive definite matrix. Keeps the eigendecomposition computed while
// checking definiteness so square roots and inverses reuse it.
class PositiveMatrix {
 public:
  explicit PositiveMatrix(HermitianMatrix h);

  static PositiveMatrix identity(std::size_t n);

  const HermitianMatrix& hermitian() const { return h_; }
  operator const HermitianMatrix&() const { return h_; }
  const EigenDecomposition& eigen() const { return eig_; }
  double min_eigenvalue() const { return eig_.min(); }
  double condition() const { return eig_.max() / eig_.min(); }
  std::size_t dim() const { return h_.dim(); }

  HermitianMatrix sqrt() const;
  HermitianMatrix inv_sqrt() const;
  HermitianMatrix inverse() const;
  HermitianMatrix log() const;

 private:
  HermitianMatrix h_;
  EigenDecomposition eig_;
};

// Positive semidefinite matrix: lambda_min >= -kPsdTol * (1 + |H|_F).
class PsdMatrix {
 public:
  explicit PsdMatrix(HermitianMatrix h);
  PsdMatrix(const PositiveMatrix& p) : h_(p.hermitian()), eig_(p.eigen()) {}  // NOLINT

  const HermitianMatrix& hermitian() const { return h_; }
  operator const HermitianMatrix&() const { return h_; }
  const EigenDecomposition& eigen() const { return eig_; }
  double min_eigenvalue() const { return eig_.min(); }
  std::size_t dim() const { return h_.dim(); }

 private:
  HermitianMatrix h_;
  EigenDecomposition eig_;
};

// A << B  iff  log A <= log B.
bool chaotic_leq(const PositiveMatrix& a, const PositiveMatrix& b, double tol = kLoewnerTol);

}  // namespace opmeans
