#include <cmath>

#include "doctest.h"
#include "opmeans/errors.hpp"
#include "opmeans/ka_means.hpp"
#include "opmeans/random.hpp"

using namespace opmeans;

namespace {

PositiveMatrix pd(std::initializer_list<double> d) {
  std::vector<double> v(d);
  return PositiveMatrix(HermitianMatrix::diagonal(v));
}

SearchOptions small(std::size_t trials, std::uint64_t seed = 42) {
  SearchOptions o;
  o.trials = trials;
  o.seed = seed;
  return o;
}

const LawReport& law(const AxiomReport& r, const std::string& id) {
  for (const auto& l : r.laws)
    if (l.law == id) return l;
  FAIL("missing law " << id);
  return r.laws.front();
}

}  // namespace

TEST_CASE("closed forms") {
  const PositiveMatrix a = pd({1, 1});
  const PositiveMatrix b = pd({4, 9});
  CHECK(relative_residual(pd({2, 3}).hermitian(), ka_mean(MeanSpec::parse("geom"), a, b).hermitian()) < 1e-15);
  CHECK(relative_residual(pd({2.5, 5}).hermitian(), ka_mean(MeanSpec::parse("arith"), a, b).hermitian()) < 1e-15);
  CHECK(relative_residual(pd({1.6, 1.8}).hermitian(), ka_mean(MeanSpec::parse("harm"), a, b).hermitian()) < 1e-15);
}

TEST_CASE("every builtin mean maps (I, I) to I and is homogeneous") {
  Rng rng = trial_rng(1, 0);
  const PositiveMatrix a = random_pd(rng, 4, 0.1, 10);
  const PositiveMatrix b = random_pd(rng, 4, 0.1, 10);
  for (const MeanSpec& s : builtin_means()) {
    CAPTURE(s.label);
    const auto i = PositiveMatrix::identity(3);
    CHECK(relative_residual(i.hermitian(), ka_mean(s, i, i).hermitian()) <= kNormalizationTol);
    const PositiveMatrix m = ka_mean(s, a, b);
    const PositiveMatrix m3 = ka_mean(s, PositiveMatrix(3.0 * a.hermitian()), PositiveMatrix(3.0 * b.hermitian()));
    CHECK(relative_residual(3.0 * m.hermitian(), m3.hermitian()) < 1e-12);
  }
}

TEST_CASE("mean of a matrix with itself") {
  Rng rng = trial_rng(2, 0);
  const PositiveMatrix a = random_pd(rng, 5, 1e-2, 1e2);
  for (const MeanSpec& s : builtin_means()) {
    CAPTURE(s.label);
    CHECK(relative_residual(a.hermitian(), ka_mean(s, a, a).hermitian()) < 1e-11);
  }
}

TEST_CASE("geometric mean solves the Riccati equation and is symmetric") {
  Rng rng = trial_rng(3, 0);
  const MeanSpec g = MeanSpec::parse("geom");
  for (int k = 0; k < 20; ++k) {
    const PositiveMatrix a = random_pd(rng, 4, 1e-2, 1e2);
    const PositiveMatrix b = random_pd(rng, 4, 1e-2, 1e2);
    const PositiveMatrix m = ka_mean(g, a, b);
    const HermitianMatrix r = HermitianMatrix::from_upper(m.hermitian().matrix() * a.inverse().matrix() *
                                                          m.hermitian().matrix());
    CHECK((r - b.hermitian()).frobenius() <= 1e-9 * b.hermitian().frobenius());
    CHECK(relative_residual(m.hermitian(), ka_mean(g, b, a).hermitian()) < 1e-10);
  }
}

TEST_CASE("transpose and adjoint means") {
  Rng rng = trial_rng(4, 0);
  const PositiveMatrix a = random_pd(rng, 3, 0.1, 10);
  const PositiveMatrix b = random_pd(rng, 3, 0.1, 10);
  const MeanSpec p = MeanSpec::parse("power:0.3");
  const MeanSpec pt = transpose_mean(p);
  CHECK(relative_residual(ka_mean(p, b, a).hermitian(), ka_mean(pt, a, b).hermitian()) < 1e-10);
  const MeanSpec arith = MeanSpec::parse("arith");
  const MeanSpec adj = adjoint_mean(arith);
  const PositiveMatrix inner = ka_mean(arith, PositiveMatrix(a.inverse()), PositiveMatrix(b.inverse()));
  CHECK(relative_residual(inner.inverse(), ka_mean(adj, a, b).hermitian()) < 1e-10);
  CHECK(relative_residual(ka_mean(MeanSpec::parse("harm"), a, b).hermitian(), ka_mean(adj, a, b).hermitian()) <
        1e-10);
}

TEST_CASE("domain checks") {
  CHECK_THROWS_AS(ka_mean(MeanSpec::parse("geom"), pd({1, 1}), pd({1, 1, 1})), DimensionMismatch);
  CHECK_THROWS_AS(ka_mean(MeanSpec::parse("geom"), pd({1, 1e-14}), pd({1, 1})), DomainError);
}

TEST_CASE("extension to a singular second argument") {
  const PositiveMatrix a = pd({2, 3});
  const PsdMatrix zero(HermitianMatrix(2));
  CHECK(ka_mean_ext(MeanSpec::parse("harm"), a, zero).frobenius() < 1e-12);

  Rng rng = trial_rng(5, 0);
  const PositiveMatrix a4 = random_pd(rng, 4, 0.5, 2);
  const PsdMatrix s(random_psd(rng, 4, 2, 3.0));
  const HermitianMatrix expect = 0.5 * (a4.hermitian() + s.hermitian());
  CHECK(relative_residual(expect, ka_mean_ext(MeanSpec::parse("arith"), a4, s)) < 1e-12);

  std::vector<cplx> h{cplx(0.6, 0.0), cplx(0.0, 0.8)};
  const HermitianMatrix p = HermitianMatrix::outer(h);
  const HermitianMatrix m = ka_mean_ext(MeanSpec::parse("geom"), PositiveMatrix(HermitianMatrix::scalar(2, 4.0)),
                                        PsdMatrix(p));
  CHECK(relative_residual(2.0 * p, m) < 1e-10);
}

TEST_CASE("extension is continuous from above") {
  Rng rng = trial_rng(6, 0);
  const PositiveMatrix a = random_pd(rng, 3, 0.5, 2);
  const PsdMatrix b(random_psd(rng, 3, 2, 2.0));
  for (const MeanSpec& s : builtin_means()) {
    CAPTURE(s.label);
    const HermitianMatrix m0 = ka_mean_ext(s, a, b);
    double prev = 1e300;
    for (double eps : {1e-2, 1e-4, 1e-6}) {
      const PsdMatrix be(b.hermitian() + HermitianMatrix::scalar(3, eps));
      const double d = (ka_mean_ext(s, a, be) - m0).frobenius();
      CHECK(d <= prev);
      prev = d;
    }
    CHECK(prev < 1e-2);
  }
}

TEST_CASE("axioms hold for the builtin means") {
  for (const MeanSpec& s : builtin_means()) {
    CAPTURE(s.label);
    const AxiomReport r = verify_axioms(s, small(100));
    CHECK(r.passed());
    for (const auto& l : r.laws) CHECK(l.verdict == Verdict::HoldsAtTolerance);
  }
}

TEST_CASE("t^2 fails monotonicity with a recorded witness") {
  const MeanSpec fake = MeanSpec::of(RepFn::monomial(2.0));
  const AxiomReport r = verify_axioms(fake, small(200));
  CHECK_FALSE(r.passed());
  const LawReport& a = law(r, "axiom-a");
  CHECK(a.verdict == Verdict::Falsified);
  REQUIRE_FALSE(a.failures.empty());
  const Counterexample& cx = a.failures.front();
  CHECK(cx.residual > cx.tol);
  CHECK(replay_residual(monotonicity_probe(fake, small(200)), cx) == cx.residual);
}

TEST_CASE("operator monotonicity search") {
  const auto w = opmono_falsify(RepFn::parse("power:2"), small(1000));
  REQUIRE(w.has_value());
  CHECK(w->residual > 0.0);
  CHECK(w->law == "opmono");
  CHECK_FALSE(opmono_falsify(RepFn::parse("power:0.5"), small(2000)).has_value());
  CHECK_FALSE(opmono_falsify(RepFn::parse("power:-1"), small(2000)).has_value());
}

TEST_CASE("formula probes") {
  const SearchOptions o = small(200);
  CHECK(run_probe(riccati_probe(o), o).verdict == Verdict::HoldsAtTolerance);
  CHECK(run_probe(harmonic_formula_probe(o), o).verdict == Verdict::HoldsAtTolerance);
  CHECK(run_probe(arithmetic_formula_probe(o), o).verdict == Verdict::HoldsAtTolerance);
  for (const MeanSpec& s : builtin_means()) {
    CAPTURE(s.label);
    CHECK(run_probe(scalar_slice_probe(s, o), o).verdict == Verdict::HoldsAtTolerance);
    CHECK(run_probe(transpose_law_probe(s, o), o).verdict == Verdict::HoldsAtTolerance);
    CHECK(run_probe(adjoint_law_probe(s, o), o).verdict == Verdict::HoldsAtTolerance);
  }
}

TEST_CASE("probe runs are deterministic and thread-count independent") {
  SearchOptions o = small(60, 7);
  const LawProbe p = congruence_probe(MeanSpec::parse("power:0.5"), o);
  const auto r1 = to_json(run_probe(p, o)).dump();
  const auto r2 = to_json(run_probe(p, o)).dump();
  o.threads = 3;
  const auto r3 = to_json(run_probe(p, o)).dump();
  CHECK(r1 == r2);
  CHECK(r1 == r3);
}
