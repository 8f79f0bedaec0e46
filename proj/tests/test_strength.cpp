#include <cmath>

#include "doctest.h"
#include "opmeans/errors.hpp"
#include "opmeans/ka_means.hpp"
#include "opmeans/random.hpp"
#include "opmeans/strength.hpp"

using namespace opmeans;

namespace {

PsdMatrix psd(std::initializer_list<double> d) {
  std::vector<double> v(d);
  return PsdMatrix(HermitianMatrix::diagonal(v));
}

const double r2 = 1.0 / std::sqrt(2.0);

}  // namespace

TEST_CASE("strength closed form") {
  CHECK(strength(StrengthQuery(psd({2, 3}), {1.0, 0.0})) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(strength(StrengthQuery(psd({2, 3}), {r2, r2})) == doctest::Approx(2.4).epsilon(1e-14));
  CHECK(strength(StrengthQuery(psd({1, 0}), {0.0, 1.0})) == 0.0);
  CHECK(strength(StrengthQuery(psd({1, 1}), {cplx(0.6, 0.0), cplx(0.0, 0.8)})) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(strength(StrengthQuery(psd({4, 4, 4}), {0.0, r2, r2})) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("bisection oracle") {
  CHECK(strength_bruteforce(StrengthQuery(psd({2, 3}), {r2, r2})) == doctest::Approx(2.4).epsilon(1e-9));
  CHECK(strength_bruteforce(StrengthQuery(psd({1, 1}), {1.0, 0.0})) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(strength_bruteforce(StrengthQuery(psd({4, 4}), {r2, r2})) == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(strength_bruteforce(StrengthQuery(psd({1, 0}), {0.0, 1.0})) < 1e-9);
}

TEST_CASE("query validation") {
  CHECK_THROWS_AS(StrengthQuery(psd({1, 1}), {1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(StrengthQuery(psd({1, 1}), {1.0, 0.0, 0.0}), DimensionMismatch);
}

TEST_CASE("homogeneity and range behaviour") {
  Rng rng = trial_rng(8, 0);
  for (int k = 0; k < 30; ++k) {
    const std::size_t n = 2 + k % 4;
    const PositiveMatrix a = random_pd(rng, n, 0.1, 10);
    const auto h = random_unit_vector(rng, n);
    const double l = strength(StrengthQuery(a, h));
    CHECK(strength(StrengthQuery(PsdMatrix(PositiveMatrix(3.0 * a.hermitian())), h)) ==
          doctest::Approx(3.0 * l).epsilon(1e-12));
    CHECK(std::abs(strength_bruteforce(StrengthQuery(a, h)) - l) <= 1e-7 * (1.0 + l));
    CHECK(l <= a.eigen().max() * (1 + 1e-12));
    CHECK(l >= a.min_eigenvalue() * (1 - 1e-12));
  }
  const HermitianMatrix rank1 = HermitianMatrix::outer(std::vector<cplx>{r2, r2});
  CHECK(strength(StrengthQuery(PsdMatrix(5.0 * rank1), {r2, r2})) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(strength(StrengthQuery(PsdMatrix(5.0 * rank1), {r2, -r2})) == 0.0);
}

TEST_CASE("mean against a projection") {
  const MeanSpec g = MeanSpec::parse("geom");
  const E36Result r = verify_e36(g, PositiveMatrix(HermitianMatrix::scalar(2, 4.0)), std::vector<cplx>{r2, r2});
  CHECK(r.lambda == doctest::Approx(4.0));
  CHECK(r.f_lambda == doctest::Approx(2.0));
  CHECK(r.residual <= 1e-10);

  std::vector<double> d{2, 3};
  const E36Result h = verify_e36(MeanSpec::parse("harm"), PositiveMatrix(HermitianMatrix::diagonal(d)),
                                 std::vector<cplx>{1.0, 0.0});
  CHECK(h.f_lambda == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(h.residual <= 1e-9);
  CHECK(h.holds(1e-9));

  CHECK_THROWS_AS(verify_e36(MeanSpec::parse("arith"), PositiveMatrix(HermitianMatrix::scalar(2, 1.0)),
                             std::vector<cplx>{1.0, 0.0}),
                  PreconditionError);
  CHECK_THROWS_AS(verify_e36(MeanSpec::parse("power:0.5"), PositiveMatrix(HermitianMatrix::scalar(2, 1.0)),
                             std::vector<cplx>{1.0, 0.0}),
                  PreconditionError);
  CHECK_THROWS_AS(e36_probe(MeanSpec::parse("arith"), SearchOptions{}), PreconditionError);
}

TEST_CASE("strength probes") {
  SearchOptions o;
  o.trials = 200;
  CHECK(run_probe(strength_oracle_probe(o), o).verdict == Verdict::HoldsAtTolerance);
  CHECK(run_probe(strength_order_probe(o), o).verdict == Verdict::HoldsAtTolerance);
  for (const char* m : {"geom", "harm", "power:-0.5"}) {
    CAPTURE(m);
    CHECK(run_probe(e36_probe(MeanSpec::parse(m), o), o).verdict == Verdict::HoldsAtTolerance);
  }
}
