// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "opmeans/cli.hpp"
#include "opmeans/errors.hpp"
#include "opmeans/ka_means.hpp"
#include "opmeans/law_lab.hpp"
#include "opmeans/matrix_io.hpp"
#include "opmeans/qa_means.hpp"
#include "opmeans/strength.hpp"

using namespace opmeans;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::vector<std::string> notes;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back(what);
    }
  }
};

SearchOptions opts(std::size_t trials, double tol) {
  SearchOptions o;
  o.trials = trials;
  o.tol = tol;
  o.seed = 42;
  return o;
}

bool holds(const LawReport& r, std::size_t trials) {
  return r.verdict == Verdict::HoldsAtTolerance && r.completed == trials && r.failure_count == 0;
}

std::string describe(const LawReport& r) {
  std::ostringstream s;
  s << r.law << "[" << r.mean << "] " << to_string(r.verdict) << " max_residual=" << r.max_residual
    << " completed=" << r.completed << "/" << r.trials;
  return s.str();
}

const fs::path& scratch() {
  static const fs::path p = [] {
    fs::path d = fs::temp_directory_path() / "opmeans_acceptance";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return p;
}

// Falsified with a 2x2 witness that survives a write/read/replay cycle.
bool persisted_2x2_witness(const LawReport& r) {
  if (r.verdict != Verdict::Falsified || r.failures.empty()) return false;
  const Counterexample& cx = r.failures.front();
  if (cx.dim != 2) return false;
  const fs::path file = scratch() / (r.law + "__" + r.mean + ".json");
  write_text_file(file, to_json(cx).dump(2));
  const Counterexample back = counterexample_from_json(read_json_file(file));
  const double again = replay(back);
  return again > back.tol && again == cx.residual;
}

const std::vector<const char*> kAxiomMeans{"arith", "harm", "geom", "power:0.5", "power:-0.5"};

Check axioms() {
  Check c;
  for (const char* m : kAxiomMeans) {
    const SearchOptions o = opts(1000, 1e-9);
    const AxiomReport r = verify_axioms(MeanSpec::parse(m), o);
    c.require(r.passed(), std::string("verify_axioms ") + m);
    for (const LawReport& l : r.laws) {
      const std::size_t expected = l.law == "normalization" ? l.trials : o.trials;
      c.require(holds(l, expected), describe(l));
    }
  }
  return c;
}

Check formulas() {
  Check c;
  const SearchOptions ric = opts(1000, 1e-9);
  const LawReport r = run_probe(riccati_probe(ric), ric);
  c.require(holds(r, 1000), describe(r));
  const SearchOptions h = opts(1000, 1e-10);
  const LawReport hr = run_probe(harmonic_formula_probe(h), h);
  c.require(holds(hr, 1000), describe(hr));
  const SearchOptions s = opts(1000, 1e-12);
  for (const MeanSpec& m : builtin_means()) {
    const LawReport sr = run_probe(scalar_slice_probe(m, s), s);
    c.require(holds(sr, 1000), describe(sr));
  }
  return c;
}

Check duality() {
  Check c;
  const SearchOptions o = opts(500, 1e-9);
  for (const MeanSpec& m : builtin_means()) {
    const LawReport t = run_probe(transpose_law_probe(m, o), o);
    c.require(holds(t, 500), describe(t));
    const LawReport a = run_probe(adjoint_law_probe(m, o), o);
    c.require(holds(a, 500), describe(a));
  }
  return c;
}

Check strength_criterion() {
  Check c;
  const SearchOptions q = opts(1000, 1e-7);
  const LawReport r = run_probe(strength_oracle_probe(q), q);
  c.require(holds(r, 1000), describe(r));
  const SearchOptions e = opts(500, 1e-8);
  for (const char* m : {"geom", "harm"}) {
    const LawReport er = run_probe(e36_probe(MeanSpec::parse(m), e), e);
    c.require(holds(er, 500), describe(er));
  }
  bool rejected = false;
  try {
    verify_e36(MeanSpec::parse("arith"), PositiveMatrix::identity(2), std::vector<cplx>{1.0, 0.0});
  } catch (const PreconditionError&) {
    rejected = true;
  }
  c.require(rejected, "arith accepted by verify_e36");
  return c;
}

Check characterization() {
  Check c;
  const SearchOptions o = opts(1000, 1e-9);
  for (const char* m : {"arith", "harm"}) {
    const LawReport med = mediality_check(MeanSpec::parse(m), o);
    c.require(holds(med, 1000), describe(med));
    const LawReport e71 = two_var_law_check(MeanSpec::parse(m), o);
    c.require(holds(e71, 1000), describe(e71));
  }
  for (const char* m : {"geom", "power:0.5"}) {
    const LawReport med = mediality_check(MeanSpec::parse(m), o);
    c.require(persisted_2x2_witness(med), describe(med));
    const LawReport e71 = two_var_law_check(MeanSpec::parse(m), o);
    c.require(persisted_2x2_witness(e71), describe(e71));
  }
  return c;
}

Check associativity() {
  Check c;
  const SearchOptions o = opts(1000, 1e-9);
  const LawReport sum = global_assoc_check(MeanSpec::parse("arith"), ScalarMap::scale(2.0), o);
  c.require(holds(sum, 1000), describe(sum));
  const LawReport par = global_assoc_check(MeanSpec::parse("harm"), ScalarMap::scale(0.5), o);
  c.require(holds(par, 1000), describe(par));
  const LawReport sq = global_assoc_check(MeanSpec::parse("geom"), ScalarMap::parse("square"), o);
  c.require(persisted_2x2_witness(sq), describe(sq));
  for (double k : {2.0, 3.0}) {
    const LawReport r = restricted_assoc_check(MeanSpec::parse("geom"), ScalarMap::power_affine(k, 2.0, 0.0), o);
    c.require(holds(r, 1000), describe(r));
  }
  return c;
}

Check opmono() {
  Check c;
  const auto grid = logspace(-2, 2, 12);
  for (double p : {-2.0, -1.5, 1.5, 2.0}) {
    const RepFn f = RepFn::power(p);
    const auto w = opmono_falsify(f, opts(1000, 1e-9));
    c.require(w.has_value() && w->residual > 1e-9, "no witness for " + f.label());
    c.require(!loewner_certify_monotone(f, grid), "Loewner screen accepts " + f.label());
  }
  for (double p : {-1.0, -0.5, 0.5, 1.0}) {
    const RepFn f = RepFn::power(p);
    const auto w = opmono_falsify(f, opts(10000, 1e-9));
    c.require(!w.has_value(), "spurious witness for " + f.label());
    c.require(loewner_certify_monotone(f, grid), "Loewner screen rejects " + f.label());
  }
  return c;
}

Check quasi_arithmetic() {
  Check c;
  const SearchOptions o = opts(500, 1e-9);
  for (const char* phi : {"id", "recip", "log"}) {
    const ScalarMap p = ScalarMap::parse(phi);
    const QaAxiomsReport r = qa_axioms_check(qa_evaluator(QaSpec(p)), p, o);
    c.require(r.passes(), std::string("qa axioms fail for ") + phi + ": " + r.first_failure());
  }
  for (const char* m : {"geom", "le", "harm"}) {
    const NonexReport r = nonex_probe(parse_evaluator(m), o);
    c.require(r.witnessed, std::string("no (iii) witness for ") + m);
  }
  return c;
}

Check norm_order() {
  Check c;
  const SearchOptions o = opts(500, 1e-9);
  const LawReport r = run_probe(norm_order_probe(o, 200), o);
  c.require(holds(r, 500), describe(r));
  std::vector<double> d1{2, 1}, d2{1, 2};
  const PositiveMatrix a(HermitianMatrix::diagonal(d1)), b(HermitianMatrix::diagonal(d2));
  c.require(norm_order_check(a, b, 200, 1e-9, 42).certifies_not_leq(), "diag(2,1) <= diag(1,2) not refuted");
  c.require(norm_order_check(b, a, 200, 1e-9, 42).certifies_not_leq(), "diag(1,2) <= diag(2,1) not refuted");
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Check determinism() {
  Check c;
  std::vector<std::string> reports[2];
  for (int k = 0; k < 2; ++k) {
    const fs::path out = scratch() / ("verify_all_" + std::to_string(k));
    std::ostringstream so, se;
    const int code = run_cli({"opmeans", "verify", "--suite", "all", "--seed", "42", "--out", out.string()}, so, se);
    c.require(code == kExitOk, "verify --suite all exit " + std::to_string(code) + ": " + se.str());
    reports[k] = {slurp(out / "report.json"), slurp(out / "report.csv")};
  }
  c.require(!reports[0][0].empty(), "empty report.json");
  c.require(reports[0][0] == reports[1][0], "report.json differs between runs");
  c.require(reports[0][1] == reports[1][1], "report.csv differs between runs");
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
      {"1 axiom suite", axioms},
      {"2 formula cross-checks", formulas},
      {"3 duality", duality},
      {"4 strength", strength_criterion},
      {"5 characterization laws", characterization},
      {"6 associativity", associativity},
      {"7 operator monotonicity boundary", opmono},
      {"8 quasi-arithmetic suite", quasi_arithmetic},
      {"9 norm-order lemma", norm_order},
      {"10 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
      c = run();
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %s (%.1fs)\n", c.ok ? "PASS" : "FAIL", name.c_str(), secs);
    for (const auto& n : c.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    if (!c.ok) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
