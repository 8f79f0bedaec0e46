#include "opmeans/strength.hpp"

#include <algorithm>
#include <cmath>

#include "opmeans/errors.hpp"

namespace opmeans {

namespace {

double norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const cplx& x : v) s += std::norm(x);
  return std::sqrt(s);
}

std::vector<cplx> column(const LawInstance& in, std::string_view name) {
  // Vectors are stored as the first column of an otherwise zero matrix.
  const CMatrix& m = in.at(name);
  std::vector<cplx> v(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) v[i] = m(i, 0);
  return v;
}

CMatrix as_column(std::span<const cplx> v) {
  CMatrix m(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

}  // namespace

StrengthQuery::StrengthQuery(PsdMatrix a, std::vector<cplx> h) : a_(std::move(a)), h_(std::move(h)) {
  require_same_dim(a_.dim(), h_.size(), "strength query");
  if (std::abs(norm(h_) - 1.0) > 1e-12) throw InvalidArgument("strength query: h must be a unit vector");
}

double strength(const StrengthQuery& q) {
  const EigenDecomposition& e = q.a().eigen();
  const std::size_t n = e.values.size();
  const double cut = kPsdTol * std::max(e.max(), 0.0);
  double null2 = 0.0;
  double quad = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    cplx c = 0.0;
    for (std::size_t i = 0; i < n; ++i) c += std::conj(e.vectors(i, k)) * q.h()[i];
    if (e.values[k] > cut)
      quad += std::norm(c) / e.values[k];
    else
      null2 += std::norm(c);
  }
  if (std::sqrt(null2) > kRangeTol || quad == 0.0) return 0.0;
  return 1.0 / quad;
}

double strength_bruteforce(const StrengthQuery& q, double tol) {
  const HermitianMatrix& a = q.a();
  const HermitianMatrix p = q.projection();
  const auto fits = [&](double t) { return loewner_leq(p * t, a, 1e-14); };
  double lo = 0.0;
  double hi = std::max(q.a().eigen().max(), 0.0);
  if (fits(hi)) return hi;
  for (int it = 0; it < 200 && hi - lo > tol * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (fits(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

E36Result verify_e36(const MeanSpec& s, const PositiveMatrix& a, std::span<const cplx> h) {
  if (!vanishes_at_zero(s.f))
    throw PreconditionError("mean " + s.label + " does not satisfy f(0) = 0");
  const StrengthQuery q(PsdMatrix(a), std::vector<cplx>(h.begin(), h.end()));
  const PsdMatrix p(q.projection());
  E36Result r;
  r.lambda = strength(q);
  r.f_lambda = s.f(r.lambda);
  const HermitianMatrix target = p.hermitian() * r.f_lambda;
  const double left = (ka_mean_ext(s, a, p) - target).frobenius();
  const double right = (ka_mean_ext(transpose_mean(s), a, p) - target).frobenius();
  r.residual = std::max(left, right);
  return r;
}

LawProbe strength_oracle_probe(const SearchOptions& opts) {
  LawProbe p;
  p.law = "strength-oracle";
  p.mean = "strength";
  p.perturbation = Perturbation::None;
  p.sample = [opts](Rng& rng, std::size_t n) {
    LawInstance inst;
    const int variant = static_cast<int>(uniform(rng, 0.0, 3.0));
    HermitianMatrix a = variant == 0 ? sample_pd(rng, n, opts).hermitian()
                                     : random_psd(rng, n, n - 1, log_uniform(rng, 1e-2, 1e2));
    std::vector<cplx> h = random_unit_vector(rng, n);
    if (variant == 2) {
      // h in the range of A
      h = a.matrix() * std::span<const cplx>(h);
      const double nh = norm(h);
      for (cplx& x : h) x /= nh;
    }
    inst.add("A", a);
    inst.add("h", as_column(h));
    return inst;
  };
  p.residual = [](const LawInstance& in) {
    const StrengthQuery q(PsdMatrix(in.hermitian("A")), column(in, "h"));
    const double s = strength(q);
    return std::abs(s - strength_bruteforce(q)) / (1.0 + s);
  };
  return p;
}

LawProbe strength_order_probe(const SearchOptions& opts) {
  LawProbe p;
  p.law = "strength-order";
  p.mean = "strength";
  p.perturbation = Perturbation::None;
  p.sample = [opts](Rng& rng, std::size_t n) {
    LawInstance inst;
    const PositiveMatrix a = sample_pd(rng, n, opts);
    inst.add("A", a.hermitian());
    inst.add("B", a.hermitian() + random_psd(rng, n, 1, log_uniform(rng, 1e-2, 1e2)));
    inst.add("h", as_column(random_unit_vector(rng, n)));
    return inst;
  };
  p.residual = [](const LawInstance& in) {
    const std::vector<cplx> h = column(in, "h");
    const double la = strength(StrengthQuery(PsdMatrix(in.hermitian("A")), h));
    const double lb = strength(StrengthQuery(PsdMatrix(in.hermitian("B")), h));
    return std::max(0.0, la - lb) / (1.0 + lb);
  };
  return p;
}

LawProbe e36_probe(const MeanSpec& s, const SearchOptions& opts) {
  if (!vanishes_at_zero(s.f))
    throw PreconditionError("mean " + s.label + " does not satisfy f(0) = 0");
  LawProbe p;
  p.law = "e36";
  p.mean = s.label;
  p.context = {{"mean", s.spec()}};
  p.perturbation = Perturbation::None;
  p.sample = [opts](Rng& rng, std::size_t n) {
    LawInstance inst;
    inst.add("A", sample_pd(rng, n, opts).hermitian());
    inst.add("h", as_column(random_unit_vector(rng, n)));
    return inst;
  };
  p.residual = [s](const LawInstance& in) {
    const E36Result r = verify_e36(s, in.positive("A"), column(in, "h"));
    return r.residual / (1.0 + r.f_lambda);
  };
  return p;
}

}  // namespace opmeans
