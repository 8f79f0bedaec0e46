#include <cmath>

#include "doctest.h"
#include "opmeans/errors.hpp"
#include "opmeans/ka_means.hpp"
#include "opmeans/law_lab.hpp"
#include "opmeans/random.hpp"
#include "opmeans/suites.hpp"

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

const MeanSpec arith = MeanSpec::parse("arith");
const MeanSpec harm = MeanSpec::parse("harm");
const MeanSpec geom = MeanSpec::parse("geom");

}  // namespace

TEST_CASE("diamond operation") {
  const PositiveMatrix x = pd({1, 2});
  const PositiveMatrix y = pd({3, 4});
  CHECK(relative_residual(pd({4, 6}).hermitian(), diamond(arith, ScalarMap::scale(2), x, y).hermitian()) < 1e-15);
  CHECK(relative_residual(pd({0.75, 4.0 / 3.0}).hermitian(),
                          diamond(harm, ScalarMap::scale(0.5), x, y).hermitian()) < 1e-14);
}

TEST_CASE("mediality and the two-variable law") {
  for (const MeanSpec& s : {arith, harm}) {
    CAPTURE(s.label);
    CHECK(mediality_check(s, small(200)).verdict == Verdict::HoldsAtTolerance);
    CHECK(two_var_law_check(s, small(200)).verdict == Verdict::HoldsAtTolerance);
  }
  for (const char* m : {"geom", "power:0.5"}) {
    CAPTURE(m);
    const LawReport med = mediality_check(MeanSpec::parse(m), small(200));
    REQUIRE(med.verdict == Verdict::Falsified);
    CHECK(med.failures.front().dim == 2);
    const LawReport e71 = two_var_law_check(MeanSpec::parse(m), small(200));
    REQUIRE(e71.verdict == Verdict::Falsified);
    CHECK(e71.failures.front().dim == 2);
  }
}

TEST_CASE("associativity") {
  CHECK(global_assoc_check(arith, ScalarMap::scale(2), small(200)).verdict == Verdict::HoldsAtTolerance);
  CHECK(global_assoc_check(harm, ScalarMap::scale(0.5), small(200)).verdict == Verdict::HoldsAtTolerance);
  const LawReport g = global_assoc_check(geom, ScalarMap::parse("square"), small(200));
  REQUIRE(g.verdict == Verdict::Falsified);
  CHECK(g.failures.front().dim == 2);
}

TEST_CASE("restricted associativity") {
  CHECK(restricted_assoc_check(arith, ScalarMap::scale(2), small(200)).verdict == Verdict::HoldsAtTolerance);
  for (double c : {2.0, 3.0})
    CHECK(restricted_assoc_check(geom, ScalarMap::power_affine(c, 2, 0), small(200)).verdict ==
          Verdict::HoldsAtTolerance);
  const MeanSpec p = MeanSpec::parse("power:0.5");
  CHECK(restricted_assoc_check(p, ScalarMap::rep_inverse(p.f), small(200)).verdict == Verdict::HoldsAtTolerance);
}

TEST_CASE("arithmetization") {
  CHECK(arithmetization_check(arith, ScalarMap::identity(), small(200)).verdict == Verdict::HoldsAtTolerance);
  CHECK(arithmetization_check(harm, ScalarMap::reciprocal(), small(200)).verdict == Verdict::HoldsAtTolerance);
  CHECK(arithmetization_check(geom, ScalarMap::parse("log"), small(200)).verdict == Verdict::Falsified);
  CHECK(arithmetization_check(geom, ScalarMap::parse("log"), small(200), true).verdict ==
        Verdict::HoldsAtTolerance);
}

TEST_CASE("geometric mean transported by a scalar map") {
  const GeoTransformReport id = geo_transform_check(ScalarMap::identity(), small(100));
  CHECK(id.monotonicity.verdict == Verdict::HoldsAtTolerance);
  CHECK(id.deviation.verdict == Verdict::HoldsAtTolerance);
  CHECK(geo_transform_check(ScalarMap::exp(), small(200)).monotonicity.verdict == Verdict::Falsified);
  const PositiveMatrix a = pd({1, 4});
  const PositiveMatrix b = pd({9, 1});
  CHECK(relative_residual(pd({3, 2}).hermitian(), geo_transform(ScalarMap::parse("square"), a, b).hermitian()) <
        1e-14);
}

TEST_CASE("norm order") {
  const NormOrderResult ab = norm_order_check(pd({2, 1}), pd({1, 2}), 200, 1e-9, 1);
  const NormOrderResult ba = norm_order_check(pd({1, 2}), pd({2, 1}), 200, 1e-9, 1);
  CHECK(ab.certifies_not_leq());
  CHECK(ba.certifies_not_leq());

  Rng rng = trial_rng(31, 0);
  for (int k = 0; k < 20; ++k) {
    const PositiveMatrix a = random_pd(rng, 3, 0.1, 10);
    const PositiveMatrix b(a.hermitian() + random_psd(rng, 3, 2, 1.0));
    const NormOrderResult r = norm_order_check(a, b, 200, 1e-9, k);
    CHECK_FALSE(r.certifies_not_leq());
    CHECK(r.samples == 200);
  }
  const PositiveMatrix a = random_pd(rng, 3, 0.1, 10);
  CHECK(norm_order_check(a, a, 200, 1e-12, 0).max_excess <= 1e-12);
}

TEST_CASE("persisted witnesses replay bit for bit") {
  const LawReport r = mediality_check(geom, small(50, 9));
  REQUIRE_FALSE(r.failures.empty());
  const Counterexample& cx = r.failures.front();
  const Counterexample back = counterexample_from_json(nlohmann::json::parse(to_json(cx).dump()));
  CHECK(to_json(back).dump() == to_json(cx).dump());
  CHECK(replay(back) == cx.residual);
  const Counterexample regen = regenerate(probe_for(cx.law, cx.context, recorded_options(cx)), cx);
  CHECK(to_json(regen).dump() == to_json(cx).dump());
  CHECK(counterexample_filename(cx) == "mediality__geom__s9__t" + std::to_string(cx.trial) + ".json");
}

TEST_CASE("reports are deterministic") {
  CHECK(to_json(two_var_law_check(geom, small(30, 5))).dump() ==
        to_json(two_var_law_check(geom, small(30, 5))).dump());
  CHECK(csv_row(mediality_check(harm, small(30, 5))) == csv_row(mediality_check(harm, small(30, 5))));
}

TEST_CASE("commuting inputs reduce to scalar identities") {
  const PositiveMatrix a = pd({1, 4}), b = pd({9, 16}), c = pd({2, 3}), d = pd({5, 7});
  const auto m = [](const PositiveMatrix& x, const PositiveMatrix& y) { return ka_mean(geom, x, y); };
  const PositiveMatrix lhs = m(m(a, b), m(c, d));
  const PositiveMatrix rhs = m(m(a, c), m(b, d));
  CHECK(relative_residual(lhs.hermitian(), rhs.hermitian()) < 1e-14);
}

TEST_CASE("probe registry") {
  CHECK(probe_for("mediality", {{"mean", "geom"}}, small(1)).law == "mediality");
  CHECK(probe_for("opmono", {{"fn", "power:2"}}, small(1)).context.at("fn") == "power:2");
  CHECK_THROWS(probe_for("no-such-law", {}, small(1)));
}

TEST_CASE("expectations") {
  CHECK(expectation_for("mediality", {{"mean", "arith"}}) == Expect::Hold);
  CHECK(expectation_for("mediality", {{"mean", "geom"}}) == Expect::Fail);
  CHECK(expectation_for("opmono", {{"fn", "power:2"}}) == Expect::Fail);
  CHECK(expectation_for("opmono", {{"fn", "power:-1"}}) == Expect::Hold);
  CHECK(expectation_for("e65", {{"mean", "geom"}, {"g", "pow:3,2,0"}}) == Expect::Hold);
  CHECK(expectation_for("assoc", {{"mean", "geom"}, {"g", "pow:1,2,0"}}) == Expect::Fail);
  CHECK(expectation_met(Expect::Fail, Verdict::Falsified));
  CHECK_FALSE(expectation_met(Expect::Hold, Verdict::Falsified));
  CHECK(expectation_met(Expect::Finding, Verdict::Falsified));
}
