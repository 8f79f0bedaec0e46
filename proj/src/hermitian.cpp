#include "opmeans/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "opmeans/errors.hpp"

namespace opmeans {

HermitianMatrix HermitianMatrix::from_upper(const CMatrix& m) {
  HermitianMatrix h(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i; j < m.dim(); ++j) h.set(i, j, m(i, j));
  return h;
}

HermitianMatrix HermitianMatrix::checked(const CMatrix& m, double tol) {
  double scale = 1.0;
  for (const cplx& z : m.data()) scale = std::max(scale, std::abs(z));
  for (std::size_t i = 0; i < m.dim(); ++i)
    if (std::abs(m(i, i).imag()) > tol * scale)
      throw FormatError("matrix diagonal is not real");
  if (m.hermitian_defect() > tol * scale) throw FormatError("matrix is not Hermitian");
  return from_upper(m);
}

HermitianMatrix HermitianMatrix::identity(std::size_t n) { return scalar(n, 1.0); }

HermitianMatrix HermitianMatrix::scalar(std::size_t n, double c) {
  HermitianMatrix h(n);
  for (std::size_t i = 0; i < n; ++i) h.set(i, i, c);
  return h;
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  HermitianMatrix h(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) h.set(i, i, d[i]);
  return h;
}

HermitianMatrix HermitianMatrix::outer(std::span<const cplx> v) {
  HermitianMatrix h(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i; j < v.size(); ++j) h.set(i, j, v[i] * std::conj(v[j]));
  return h;
}

void HermitianMatrix::set(std::size_t i, std::size_t j, cplx v) {
  if (i > j) {
    std::swap(i, j);
    v = std::conj(v);
  }
  if (i == j) {
    m_(i, i) = v.real();
  } else {
    m_(i, j) = v;
    m_(j, i) = std::conj(v);
  }
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  m_ += o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
  m_ -= o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

namespace {

double off_diagonal_norm(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Zeroes a(p,q) with the unitary G = diag(1, conj(phase)) * R(c, s) acting on
// rows and columns p, q: a <- G^* a G, v <- v G.
void rotate(CMatrix& a, CMatrix& v, std::size_t p, std::size_t q) {
  const cplx b = a(p, q);
  const double mag = std::abs(b);
  if (mag == 0.0) return;
  const cplx phase = b / mag;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * mag);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const cplx gpp = c;
  const cplx gpq = s;
  const cplx gqp = -s * std::conj(phase);
  const cplx gqq = c * std::conj(phase);

  const std::size_t n = a.dim();
  for (std::size_t k = 0; k < n; ++k) {
    const cplx akp = a(k, p);
    const cplx akq = a(k, q);
    a(k, p) = akp * gpp + akq * gqp;
    a(k, q) = akp * gpq + akq * gqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const cplx apk = a(p, k);
    const cplx aqk = a(q, k);
    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = app - t * mag;
  a(q, q) = aqq + t * mag;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx vkp = v(k, p);
    const cplx vkq = v(k, q);
    v(k, p) = vkp * gpp + vkq * gqp;
    v(k, q) = vkp * gpq + vkq * gqq;
  }
}

}  // namespace

EigenDecomposition eigh(const HermitianMatrix& h) {
  const std::size_t n = h.dim();
  CMatrix a = h.matrix();
  CMatrix v = CMatrix::identity(n);
  const double scale = a.frobenius();

  int sweep = 0;
  while (off_diagonal_norm(a) > 1e-15 * scale) {
    if (++sweep > kMaxJacobiSweeps)
      throw NonConvergence("eigh: Jacobi iteration exceeded " + std::to_string(kMaxJacobiSweeps) +
                           " sweeps");
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  EigenDecomposition e{std::vector<double>(n), CMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    e.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) e.vectors(i, k) = v(i, order[k]);
  }
  return e;
}

HermitianMatrix apply_fn(const EigenDecomposition& e, const ScalarFn& f) {
  const std::size_t n = e.values.size();
  std::vector<double> fv(n);
  for (std::size_t k = 0; k < n; ++k) {
    fv[k] = f(e.values[k]);
    if (!std::isfinite(fv[k])) {
      std::ostringstream msg;
      msg << "apply_fn: function undefined at eigenvalue " << e.values[k];
      throw DomainError(msg.str());
    }
  }
  HermitianMatrix r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += e.vectors(i, k) * fv[k] * std::conj(e.vectors(j, k));
      r.set(i, j, s);
    }
  return r;
}

HermitianMatrix apply_fn(const HermitianMatrix& h, const ScalarFn& f) { return apply_fn(eigh(h), f); }

double min_eigenvalue(const HermitianMatrix& h) { return eigh(h).min(); }

double operator_norm(const HermitianMatrix& h) {
  const auto e = eigh(h);
  return std::max(std::abs(e.min()), std::abs(e.max()));
}

double loewner_violation(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "loewner_leq");
  const HermitianMatrix d = b - a;
  const double lmin = min_eigenvalue(d);
  return std::max(0.0, -lmin) / (1.0 + d.frobenius());
}

double scaled_loewner_violation(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "scaled_loewner_violation");
  const double lmin = min_eigenvalue(b - a);
  return std::max(0.0, -lmin) / (1.0 + std::max(a.frobenius(), b.frobenius()));
}

bool loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b, double tol) {
  return loewner_violation(a, b) <= tol;
}

HermitianMatrix congruence(const CMatrix& c, const HermitianMatrix& a) {
  require_same_dim(c.dim(), a.dim(), "congruence");
  return HermitianMatrix::from_upper(c * a.matrix() * c.adjoint());
}

double relative_residual(const HermitianMatrix& a, const HermitianMatrix& b) {
  return (a - b).frobenius() / (1.0 + a.frobenius());
}

PositiveMatrix::PositiveMatrix(HermitianMatrix h) : h_(std::move(h)), eig_(eigh(h_)) {
  if (!(eig_.min() > 0.0)) {
    std::ostringstream msg;
    msg << "matrix is not positive definite (lambda_min = " << eig_.min() << ")";
    throw DomainError(msg.str());
  }
}

PositiveMatrix PositiveMatrix::identity(std::size_t n) {
  return PositiveMatrix(HermitianMatrix::identity(n));
}

HermitianMatrix PositiveMatrix::sqrt() const {
  return apply_fn(eig_, [](double t) { return std::sqrt(t); });
}

HermitianMatrix PositiveMatrix::inv_sqrt() const {
  return apply_fn(eig_, [](double t) { return 1.0 / std::sqrt(t); });
}

HermitianMatrix PositiveMatrix::inverse() const {
  return apply_fn(eig_, [](double t) { return 1.0 / t; });
}

HermitianMatrix PositiveMatrix::log() const {
  return apply_fn(eig_, [](double t) { return std::log(t); });
}

PsdMatrix::PsdMatrix(HermitianMatrix h) : h_(std::move(h)), eig_(eigh(h_)) {
  if (!(eig_.min() >= -kPsdTol * (1.0 + h_.frobenius()))) {
    std::ostringstream msg;
    msg << "matrix is not positive semidefinite (lambda_min = " << eig_.min() << ")";
    throw DomainError(msg.str());
  }
}

bool chaotic_leq(const PositiveMatrix& a, const PositiveMatrix& b, double tol) {
  return loewner_leq(a.log(), b.log(), tol);
}

}  // namespace opmeans
