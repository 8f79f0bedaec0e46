#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "opmeans/hermitian.hpp"

namespace opmeans {

// Representing function f of a mean: f(t) I = I sigma (t I), normalized so
// that f(1) = 1.
class RepFn {
 public:
  enum class Kind {
    Arithmetic,  // (1 + t) / 2
    Harmonic,    // 2t / (1 + t)
    Geometric,   // sqrt(t)
    Power,       // ((1 + t^p) / 2)^(1/p), p != 0
    Monomial,    // t^q; q = 1 and q = 0 are the trivial means, q = 2 is not a mean
    Tabulated,   // monotone cubic through (t_k, f_k)
    Transpose,   // t f(1/t)
    Adjoint,     // 1 / f(1/t)
  };

  static RepFn arithmetic();
  static RepFn harmonic();
  static RepFn geometric();
  static RepFn power(double p);
  static RepFn monomial(double q);
  static RepFn tabulated(std::vector<double> t, std::vector<double> f);

  // arith | harm | geom | power:P | mono:Q
  static RepFn parse(std::string_view spec);
  static RepFn from_json(const nlohmann::json& j);

  Kind kind() const { return kind_; }
  double exponent() const { return p_; }
  const RepFn* inner() const { return inner_.get(); }

  // Throws DomainError for t <= 0 or t outside a tabulation.
  double operator()(double t) const;
  double derivative(double t) const;
  std::string label() const;
  nlohmann::json to_json() const;

  friend RepFn transpose_repfn(const RepFn& f);
  friend RepFn adjoint_repfn(const RepFn& f);

 private:
  struct Table {
    std::vector<double> t, f, slope;
  };

  RepFn(Kind k, double p) : kind_(k), p_(p) {}

  Kind kind_;
  double p_ = 0.0;
  std::shared_ptr<const Table> table_;
  std::shared_ptr<const RepFn> inner_;
};

double eval_repfn(const RepFn& f, double t);
// Text that RepFn::parse maps back to f: the label when parseable, JSON otherwise.
std::string spec_string(const RepFn& f);
RepFn transpose_repfn(const RepFn& f);
RepFn adjoint_repfn(const RepFn& f);

// f(0+), extrapolated from samples at 1e-14, 1e-13, 1e-12 by Aitken's
// delta-squared process and snapped to 0 below 1e-12. Throws DomainError if
// the samples do not converge.
double limit_at_zero(const RepFn& f);
// f^{-1}(y) for strictly increasing f by bracketing and log-space bisection.
// Throws InverseDomainError when y is outside the range of f.
double invert_repfn(const RepFn& f, double y);

std::vector<double> logspace(double lo_exp, double hi_exp, std::size_t n);
// 200 log-spaced points on [1e-3, 1e3].
std::vector<double> standard_grid();

bool check_symmetry(const RepFn& f, const std::vector<double>& grid, double tol);
bool check_self_adjoint(const RepFn& f, const std::vector<double>& grid, double tol);
// Symmetric and self-adjoint on the grid, and then f(t)^2 = t.
bool geom_uniqueness_check(const RepFn& f, const std::vector<double>& grid, double tol);

// L_ij = (f(t_i) - f(t_j)) / (t_i - t_j), L_ii = f'(t_i).
HermitianMatrix loewner_matrix(const RepFn& f, const std::vector<double>& grid);
// PSD test of the Loewner matrix: lambda_min >= -tol (1 + |L|_F). A
// necessary condition for operator monotonicity.
bool loewner_certify_monotone(const RepFn& f, const std::vector<double>& grid, double tol = 1e-6);

struct FunceqRow {
  double c;
  double max_residual;  // max_t |f(c^2 t) - c f(t)| / (1 + |f(t)|)
  bool candidate;       // max_residual <= tol
};
std::vector<FunceqRow> funceq_scan(const RepFn& f, const std::vector<double>& c_grid,
                                   const std::vector<double>& t_grid, double tol);

// Open interval (lo, hi); infinite ends allowed.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool contains(double x) const { return x > lo && x < hi; }
};

// Strictly monotone scalar function with closed-form (or numeric) inverse.
class ScalarMap {
 public:
  enum class Kind {
    PowerAffine,  // a t^p + b
    LogAffine,    // a log t + b
    Exp,
    Reciprocal,
    Identity,
    RepInverse,  // f^{-1} for a representing function f
    Composite,   // stages applied left to right
  };

  static ScalarMap power_affine(double a, double p, double b);
  static ScalarMap log_affine(double a, double b);
  static ScalarMap scale(double c) { return power_affine(c, 1.0, 0.0); }
  static ScalarMap exp();
  static ScalarMap reciprocal();
  static ScalarMap identity();
  static ScalarMap rep_inverse(const RepFn& f);
  static ScalarMap composite(std::vector<ScalarMap> stages);

  // id | exp | log | recip | square | scale:C | pow:P | pow:A,P,B | log:A,B |
  // inv:REPFN | cmp:S1;S2;...
  static ScalarMap parse(std::string_view spec);
  static ScalarMap from_json(const nlohmann::json& j);

  Kind kind() const { return kind_; }
  // Throws DomainError outside domain().
  double operator()(double t) const;
  // Throws InverseDomainError outside range().
  double inverse(double y) const;
  bool increasing() const;
  Interval domain() const;
  Interval range() const;
  bool onto_reals() const;

  std::string label() const;
  nlohmann::json to_json() const;

 private:
  explicit ScalarMap(Kind k) : kind_(k) {}

  Kind kind_;
  double a_ = 1.0, p_ = 1.0, b_ = 0.0;
  std::shared_ptr<const RepFn> rep_;
  std::vector<ScalarMap> stages_;
};

std::string spec_string(const ScalarMap& phi);

// phi(H) and phi^{-1}(H) by function calculus.
HermitianMatrix apply_map(const HermitianMatrix& h, const ScalarMap& phi);
HermitianMatrix apply_map_inverse(const HermitianMatrix& h, const ScalarMap& phi);

// Tests phi^{-1}((phi(l t) + phi(l s)) / 2) = l phi^{-1}((phi(t) + phi(s)) / 2)
// on random l, t, s in [0.1, 10].
bool qa_homogeneity_check(const ScalarMap& phi, std::size_t trials, double tol,
                          std::uint64_t seed = 1);

}  // namespace opmeans
