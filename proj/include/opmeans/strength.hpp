#pragma once

#include <span>
#include <vector>

#include "opmeans/harness.hpp"
#include "opmeans/hermitian.hpp"
#include "opmeans/ka_means.hpp"

namespace opmeans {

// A positive semidefinite and P = h h^* for a unit vector h.
class StrengthQuery {
 public:
  // Throws InvalidArgument unless | |h| - 1 | <= 1e-12, DimensionMismatch on size.
  StrengthQuery(PsdMatrix a, std::vector<cplx> h);

  const PsdMatrix& a() const { return a_; }
  std::span<const cplx> h() const { return h_; }
  HermitianMatrix projection() const { return HermitianMatrix::outer(h_); }

 private:
  PsdMatrix a_;
  std::vector<cplx> h_;
};

// Components of h in the numerical null space of A larger than this mean
// h is not in the range of A^{1/2}.
inline constexpr double kRangeTol = 1e-10;

// sup{t >= 0 : tP <= A} = 1 / <A^+ h, h> when h lies in the range of
// A^{1/2}, 0 otherwise.
double strength(const StrengthQuery& q);
// Bisection on [0, lambda_max(A)] with the Loewner predicate as oracle.
double strength_bruteforce(const StrengthQuery& q, double tol = 1e-12);

struct E36Result {
  double lambda = 0.0;
  double f_lambda = 0.0;
  // max(|A sigma P - f(lambda) P|_F, |P sigma A - f(lambda) P|_F)
  double residual = 0.0;
  bool holds(double tol) const { return residual <= tol * (1.0 + f_lambda); }
};

// Throws PreconditionError unless f(0+) = 0.
E36Result verify_e36(const MeanSpec& s, const PositiveMatrix& a, std::span<const cplx> h);

LawProbe strength_oracle_probe(const SearchOptions& opts);                 // strength-oracle
LawProbe strength_order_probe(const SearchOptions& opts);                  // strength-order
LawProbe e36_probe(const MeanSpec& s, const SearchOptions& opts);          // e36

}  // namespace opmeans
