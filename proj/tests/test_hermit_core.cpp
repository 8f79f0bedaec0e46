#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "opmeans/errors.hpp"
#include "opmeans/format.hpp"
#include "opmeans/hermitian.hpp"
#include "opmeans/matrix_io.hpp"
#include "opmeans/random.hpp"

using namespace opmeans;

namespace {

HermitianMatrix diag(std::initializer_list<double> d) {
  std::vector<double> v(d);
  return HermitianMatrix::diagonal(v);
}

HermitianMatrix real2(double a, double b, double c) {
  HermitianMatrix h(2);
  h.set(0, 0, a);
  h.set(0, 1, b);
  h.set(1, 1, c);
  return h;
}

double reconstruction_error(const HermitianMatrix& h) {
  const auto e = eigh(h);
  return relative_residual(h, apply_fn(e, [](double t) { return t; }));
}

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("opmeans_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("eigh of small explicit matrices") {
  const auto e = eigh(real2(2, 1, 2));
  CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e.values[1] == doctest::Approx(3.0).epsilon(1e-14));

  HermitianMatrix c(2);
  c.set(0, 0, 1.0);
  c.set(0, 1, cplx(0.0, 1.0));
  c.set(1, 1, 1.0);
  const auto ec = eigh(c);
  CHECK(std::abs(ec.values[0]) < 1e-14);
  CHECK(ec.values[1] == doctest::Approx(2.0).epsilon(1e-14));

  const auto d = eigh(diag({3, -1, 2}));
  CHECK(d.values == std::vector<double>{-1, 2, 3});
}

TEST_CASE("eigh reconstructs random Hermitian matrices and has unitary eigenvectors") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng = trial_rng(7, s);
    const std::size_t n = 2 + s % 5;
    const CMatrix g = random_ginibre(rng, n);
    const HermitianMatrix h = HermitianMatrix::from_upper(g + g.adjoint());
    CHECK(reconstruction_error(h) < kEigTol);
    const auto e = eigh(h);
    const CMatrix u = e.vectors.adjoint() * e.vectors;
    CHECK((u - CMatrix::identity(n)).frobenius() < 1e-12);
    for (std::size_t k = 1; k < n; ++k) CHECK(e.values[k - 1] <= e.values[k]);
  }
}

TEST_CASE("apply_fn") {
  const HermitianMatrix a = real2(2, 1, 2);
  const HermitianMatrix sq = apply_fn(a, [](double t) { return std::sqrt(t); });
  const HermitianMatrix back = HermitianMatrix::from_upper(sq.matrix() * sq.matrix());
  CHECK(relative_residual(a, back) < 1e-14);

  CHECK_THROWS_AS(apply_fn(diag({1, -1}), [](double t) { return std::log(t); }), DomainError);

  const HermitianMatrix e = apply_fn(diag({0, std::log(2.0)}), [](double t) { return std::exp(t); });
  CHECK(relative_residual(diag({1, 2}), e) < 1e-15);
}

TEST_CASE("Loewner order") {
  CHECK(loewner_leq(diag({1, 2}), diag({1, 3})));
  CHECK_FALSE(loewner_leq(diag({2, 1}), diag({1, 2})));
  CHECK_FALSE(loewner_leq(diag({1, 2}), diag({2, 1})));
  CHECK(loewner_violation(diag({1, 1}), diag({1, 1})) == 0.0);

  // A <= B while A^2 <= B^2 fails: t^2 is not operator monotone.
  const HermitianMatrix a = real2(1, 0, 0);
  const HermitianMatrix b = real2(2, 1, 1);
  CHECK(loewner_leq(a, b));
  const auto sq = [](double t) { return t * t; };
  CHECK_FALSE(loewner_leq(apply_fn(a, sq), apply_fn(b, sq)));
}

TEST_CASE("chaotic order is implied by the Loewner order") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    Rng rng = trial_rng(3, s);
    const PositiveMatrix a = random_pd(rng, 3, 0.1, 10);
    const HermitianMatrix p = random_psd(rng, 3, 1, 1.0);
    const PositiveMatrix b(a.hermitian() + p);
    CHECK(chaotic_leq(a, b));
  }
}

TEST_CASE("congruence") {
  Rng rng = trial_rng(11, 0);
  const PositiveMatrix a = random_pd(rng, 4, 0.1, 10);
  const CMatrix c = random_invertible(rng, 4, 0.5, 2);
  const HermitianMatrix h = congruence(c, a);
  CHECK(h.matrix().hermitian_defect() == 0.0);
  CHECK(min_eigenvalue(h) > 0.0);
  CHECK(relative_residual(congruence(CMatrix::identity(4), a), a.hermitian()) == 0.0);
}

TEST_CASE("PositiveMatrix and PsdMatrix validation") {
  CHECK_THROWS_AS(PositiveMatrix(diag({1, 0})), DomainError);
  CHECK_THROWS_AS(PositiveMatrix(diag({1, -1})), DomainError);
  CHECK_NOTHROW(PsdMatrix(diag({1, 0})));
  CHECK_THROWS_AS(PsdMatrix(diag({1, -1e-3})), DomainError);

  const PositiveMatrix p(real2(2, 1, 2));
  CHECK(p.condition() == doctest::Approx(3.0));
  const HermitianMatrix prod = HermitianMatrix::from_upper(p.inverse().matrix() * p.hermitian().matrix());
  CHECK(relative_residual(HermitianMatrix::identity(2), prod) < 1e-14);
  const HermitianMatrix isq = p.inv_sqrt();
  const HermitianMatrix sq = p.sqrt();
  CHECK(relative_residual(HermitianMatrix::identity(2), HermitianMatrix::from_upper(isq.matrix() * sq.matrix())) <
        1e-14);
}

TEST_CASE("random generators are deterministic per seed") {
  const PositiveMatrix a = random_pd(4, 99, 100.0);
  const PositiveMatrix b = random_pd(4, 99, 100.0);
  CHECK(a.hermitian() == b.hermitian());
  CHECK(a.condition() <= 100.0 * (1 + 1e-12));
  CHECK_FALSE(a.hermitian() == random_pd(4, 100, 100.0).hermitian());

  const PositiveMatrix one = random_pd(3, 5, 1.0);
  CHECK(relative_residual(HermitianMatrix::identity(3), one.hermitian()) < 1e-14);

  Rng r1 = trial_rng(42, 17), r2 = trial_rng(42, 17), r3 = trial_rng(42, 17, 1);
  CHECK(r1() == r2());
  CHECK_FALSE(trial_rng(42, 17)() == r3());

  CHECK_THROWS_AS(random_pd(3, 1, 0.5), InvalidArgument);
}

TEST_CASE("random_unitary and random_psd") {
  Rng rng = trial_rng(5, 0);
  const CMatrix u = random_unitary(rng, 5);
  CHECK((u.adjoint() * u - CMatrix::identity(5)).frobenius() < 1e-12);
  const HermitianMatrix p = random_psd(rng, 5, 2, 3.0);
  const auto e = eigh(p);
  CHECK(std::abs(e.values[0]) < 1e-12);
  CHECK(std::abs(e.values[2]) < 1e-12);
  CHECK(e.values[3] > 1e-6);
}

TEST_CASE("matrix JSON round trip") {
  HermitianMatrix h(2);
  h.set(0, 0, 0.1);
  h.set(0, 1, cplx(1.0 / 3.0, -2.5e-17));
  h.set(1, 1, 7.0);
  const auto dir = temp_dir("io");
  write_matrix(dir / "h.json", h);
  CHECK(read_matrix(dir / "h.json") == h);

  const auto j = nlohmann::json::parse(R"({"n": 2, "re": [[1, 2], [2, 5]]})");
  CHECK(hermitian_from_json(j) == real2(1, 2, 5));

  CHECK_THROWS_AS(hermitian_from_json(nlohmann::json::parse(R"({"n": 2, "re": [[1, 2], [3, 5]]})")),
                  FormatError);
  CHECK_THROWS_AS(hermitian_from_json(nlohmann::json::parse(R"({"n": 3, "re": [[1, 2], [2, 5]]})")),
                  FormatError);
  CHECK_THROWS_AS(read_matrix(dir / "missing.json"), FormatError);
  {
    std::ofstream(dir / "bad.json") << "{not json";
  }
  CHECK_THROWS_AS(read_matrix(dir / "bad.json"), FormatError);
}

TEST_CASE("format_double round trips") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5})
    CHECK(parse_double(format_double(x)) == x);
  CHECK_THROWS_AS(parse_double("1.5x"), InvalidArgument);
}

TEST_CASE("Hermitian invariants hold under arithmetic") {
  Rng rng = trial_rng(9, 0);
  const PositiveMatrix a = random_pd(rng, 3, 0.5, 2);
  const PositiveMatrix b = random_pd(rng, 3, 0.5, 2);
  const HermitianMatrix s = a.hermitian() - 2.0 * b.hermitian();
  CHECK(s.matrix().hermitian_defect() == 0.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(s(i, i).imag() == 0.0);
}
