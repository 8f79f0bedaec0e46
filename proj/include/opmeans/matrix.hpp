#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace opmeans {

using cplx = std::complex<double>;

// Dense square complex matrix, row-major.
class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(std::size_t n) : n_(n), a_(n * n) {}

  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const double> d);

  std::size_t dim() const { return n_; }
  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  std::span<const cplx> data() const { return a_; }

  CMatrix adjoint() const;
  double frobenius() const;
  // max_ij |a_ij - conj(a_ji)|
  double hermitian_defect() const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(cplx s);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<cplx> a_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator*(CMatrix a, cplx s);
CMatrix operator*(cplx s, CMatrix a);

// Gaussian elimination with partial pivoting. Throws DomainError when a
// pivot vanishes.
CMatrix inverse(const CMatrix& a);

std::vector<cplx> operator*(const CMatrix& a, std::span<const cplx> x);

void require_same_dim(std::size_t a, std::size_t b, const char* what);

}  // namespace opmeans
