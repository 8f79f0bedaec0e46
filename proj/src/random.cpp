#include "opmeans/random.hpp"

#include <cmath>

#include "opmeans/errors.hpp"

namespace opmeans {

Rng trial_rng(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

CMatrix random_ginibre(Rng& rng, std::size_t n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  return g;
}

CMatrix random_unitary(Rng& rng, std::size_t n) {
  CMatrix q = random_ginibre(rng, n);
  // Modified Gram-Schmidt on columns; the implied R has a positive diagonal,
  // which makes the result Haar distributed.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      cplx dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(q(i, k)) * q(i, j);
      for (std::size_t i = 0; i < n; ++i) q(i, j) -= dot * q(i, k);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(q(i, j));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= norm;
  }
  return q;
}

std::vector<cplx> random_unit_vector(Rng& rng, std::size_t n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<cplx> v(n);
  double norm = 0.0;
  for (cplx& z : v) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = cplx(re, im);
    norm += std::norm(z);
  }
  norm = std::sqrt(norm);
  for (cplx& z : v) z /= norm;
  return v;
}

PositiveMatrix random_pd_in_basis(Rng& rng, const CMatrix& basis, double lo, double hi) {
  const std::size_t n = basis.dim();
  std::vector<double> d(n);
  for (double& x : d) x = log_uniform(rng, lo, hi);
  return PositiveMatrix(congruence(basis, HermitianMatrix::diagonal(d)));
}

PositiveMatrix random_pd(Rng& rng, std::size_t n, double lo, double hi) {
  const CMatrix q = random_unitary(rng, n);
  return random_pd_in_basis(rng, q, lo, hi);
}

PositiveMatrix random_pd(std::size_t n, std::uint64_t seed, double cond_max) {
  if (n < 1) throw InvalidArgument("random_pd: dimension must be at least 1");
  if (!(cond_max >= 1.0)) throw InvalidArgument("random_pd: cond_max must be >= 1");
  Rng rng(seed);
  const double r = std::sqrt(cond_max);
  return random_pd(rng, n, 1.0 / r, r);
}

HermitianMatrix random_psd(Rng& rng, std::size_t n, std::size_t rank, double scale) {
  std::normal_distribution<double> normal(0.0, 1.0);
  HermitianMatrix acc(n);
  std::vector<std::vector<cplx>> cols(rank, std::vector<cplx>(n));
  double total = 0.0;
  for (auto& c : cols)
    for (cplx& z : c) {
      const double re = normal(rng);
      const double im = normal(rng);
      z = cplx(re, im);
      total += std::norm(z);
    }
  const double s = total > 0.0 ? scale / total : 0.0;
  for (const auto& c : cols) acc += HermitianMatrix::outer(c) * s;
  return acc;
}

HermitianMatrix random_invertible_hermitian(Rng& rng, std::size_t n, double lo, double hi) {
  const CMatrix q = random_unitary(rng, n);
  std::vector<double> d(n);
  for (double& x : d) {
    x = log_uniform(rng, lo, hi);
    if (uniform(rng, 0.0, 1.0) < 0.5) x = -x;
  }
  return congruence(q, HermitianMatrix::diagonal(d));
}

CMatrix random_invertible(Rng& rng, std::size_t n, double lo, double hi) {
  const CMatrix u = random_unitary(rng, n);
  const CMatrix v = random_unitary(rng, n);
  std::vector<double> s(n);
  for (double& x : s) x = log_uniform(rng, lo, hi);
  return u * CMatrix::diagonal(s) * v;
}

}  // namespace opmeans
