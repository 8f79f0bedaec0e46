#include "opmeans/suites.hpp"

#include <algorithm>
#include <cmath>

#include "opmeans/errors.hpp"
#include "opmeans/format.hpp"
#include "opmeans/qa_means.hpp"
#include "opmeans/strength.hpp"

namespace opmeans {

using nlohmann::json;

std::string to_string(Expect e) {
  switch (e) {
    case Expect::Hold:
      return "hold";
    case Expect::Fail:
      return "fail";
    case Expect::Finding:
      return "finding";
  }
  return "";
}

bool expectation_met(Expect e, Verdict v) {
  switch (e) {
    case Expect::Hold:
      return v == Verdict::HoldsAtTolerance;
    case Expect::Fail:
      return v == Verdict::Falsified;
    case Expect::Finding:
      return true;
  }
  return false;
}

Family family_of(const RepFn& f) {
  const std::vector<double> grid = logspace(-2.0, 2.0, 41);
  const auto matches = [&](auto&& ref) {
    for (double t : grid) {
      const double v = f(t);
      if (std::abs(v - ref(t)) > 1e-12 * (1.0 + std::abs(v))) return false;
    }
    return true;
  };
  try {
    if (matches([](double t) { return (1.0 + t) / 2.0; })) return Family::Arithmetic;
    if (matches([](double t) { return 2.0 * t / (1.0 + t); })) return Family::Harmonic;
    if (matches([](double) { return 1.0; })) return Family::LeftTrivial;
    if (matches([](double t) { return t; })) return Family::RightTrivial;
  } catch (const DomainError&) {
  }
  return Family::Other;
}

std::optional<bool> expected_operator_monotone(const RepFn& f) {
  switch (f.kind()) {
    case RepFn::Kind::Arithmetic:
    case RepFn::Kind::Harmonic:
    case RepFn::Kind::Geometric:
      return true;
    case RepFn::Kind::Power:
      return std::abs(f.exponent()) <= 1.0;
    case RepFn::Kind::Monomial:
      return f.exponent() >= 0.0 && f.exponent() <= 1.0;
    case RepFn::Kind::Transpose:
    case RepFn::Kind::Adjoint:
      return expected_operator_monotone(*f.inner());
    case RepFn::Kind::Tabulated: {
      std::vector<double> grid;
      for (double t : logspace(-3.0, 3.0, 61)) {
        try {
          f(t);
          grid.push_back(t);
        } catch (const DomainError&) {
        }
      }
      if (grid.size() < 8) return std::nullopt;
      return loewner_certify_monotone(f, grid);
    }
  }
  return std::nullopt;
}

namespace {

bool affine_harmonic(const RepFn& f) { return family_of(f) != Family::Other; }

std::optional<std::string> get(const ProbeContext& ctx, const char* key) {
  const auto it = ctx.find(key);
  if (it == ctx.end()) return std::nullopt;
  return it->second;
}

bool same_map(const ScalarMap& a, const std::string& spec) { return spec_string(a) == spec; }

}  // namespace

std::optional<ScalarMap> default_g(const std::string& law, const MeanSpec& s) {
  switch (family_of(s.f)) {
    case Family::Arithmetic:
      return ScalarMap::scale(2.0);
    case Family::Harmonic:
      return ScalarMap::scale(0.5);
    default:
      break;
  }
  if (s.f.kind() == RepFn::Kind::Geometric)
    return law == "assoc" ? ScalarMap::power_affine(1.0, 2.0, 0.0) : ScalarMap::power_affine(2.0, 2.0, 0.0);
  if (s.f.kind() == RepFn::Kind::Power)
    return law == "assoc" ? ScalarMap::scale(std::pow(2.0, 1.0 / s.f.exponent())) : ScalarMap::rep_inverse(s.f);
  return std::nullopt;
}

Expect expectation_for(const std::string& law, const ProbeContext& ctx) {
  const auto mean = get(ctx, "mean");
  const std::optional<MeanSpec> s = mean ? std::optional<MeanSpec>(MeanSpec::parse(*mean)) : std::nullopt;
  const auto ka = [&]() -> std::optional<bool> { return s ? expected_operator_monotone(s->f) : std::nullopt; };

  if (law == "axiom-a") return ka() == true ? Expect::Hold : ka() == false ? Expect::Fail : Expect::Finding;
  if (law == "axiom-b" || law == "axiom-b-eq" || law == "continuity")
    return ka() == true ? Expect::Hold : Expect::Finding;
  if (law == "normalization" || law == "transpose-law" || law == "adjoint-law" || law == "scalar-slice" ||
      law == "riccati" || law == "harmonic-formula" || law == "arithmetic-formula" || law == "strength-oracle" ||
      law == "strength-order" || law == "e36" || law == "norm-order" || law == "norm-order-converse")
    return Expect::Hold;
  if (law == "opmono") {
    const auto m = expected_operator_monotone(RepFn::parse(*get(ctx, "fn")));
    return m == true ? Expect::Hold : m == false ? Expect::Fail : Expect::Finding;
  }
  if (law == "mediality" || law == "e71") {
    if (!s || ka() != true) return Expect::Finding;
    return affine_harmonic(s->f) ? Expect::Hold : Expect::Fail;
  }
  if (law == "e65" || law == "assoc") {
    if (!s) return Expect::Finding;
    const auto g = get(ctx, "g");
    const auto dg = default_g(law, *s);
    if (g && law == "e65" && s->f.kind() == RepFn::Kind::Geometric) {
      const ScalarMap gm = ScalarMap::parse(*g);
      const double c = gm(1.0);
      if (c > 0.0 && spec_string(ScalarMap::power_affine(c, 2.0, 0.0)) == spec_string(gm)) return Expect::Hold;
    }
    if (!g || !dg || !same_map(*dg, *g)) return Expect::Finding;
    if (law == "e65") return Expect::Hold;
    return affine_harmonic(s->f) ? Expect::Hold : Expect::Fail;
  }
  if (law == "arithmetization") {
    if (!s) return Expect::Finding;
    const auto phi = get(ctx, "phi");
    const bool commuting = get(ctx, "commuting") == std::optional<std::string>("1");
    const Family fam = family_of(s->f);
    if (fam == Family::Arithmetic && phi == "id") return Expect::Hold;
    if (fam == Family::Harmonic && phi == "recip") return Expect::Hold;
    if (s->f.kind() == RepFn::Kind::Geometric && phi == "log:1,0") return commuting ? Expect::Hold : Expect::Fail;
    return Expect::Finding;
  }
  if (law == "geo-transform") {
    const auto phi = get(ctx, "phi");
    if (phi == "id") return Expect::Hold;
    if (phi == "exp") return Expect::Fail;
    return Expect::Finding;
  }
  if (law == "geo-transform-deviation") return get(ctx, "phi") == "id" ? Expect::Hold : Expect::Finding;
  if (law == "nonex") return Expect::Fail;
  if (law.starts_with("qa-")) {
    const auto ev = get(ctx, "evaluator");
    const auto phi = get(ctx, "phi");
    if (law == "qa-iii-onto") return Expect::Finding;
    if (!ev) return Expect::Finding;
    const bool qa_matches = (ev->starts_with("qa:") && phi && ev->substr(3) == *phi) || (*ev == "le" && phi == "log:1,0");
    if (law == "qa-i" || law == "qa-ii") return qa_matches ? Expect::Hold : Expect::Finding;
    return qa_matches ? Expect::Hold : Expect::Finding;
  }
  return Expect::Finding;
}

bool SuiteResult::all_met() const {
  return std::all_of(entries.begin(), entries.end(), [](const SuiteEntry& e) { return e.met(); });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"axioms", "duality", "mediality", "e65",    "e71", "assoc",
                                                 "e36",    "norm-order", "qa",     "opmono", "all"};
  return names;
}

namespace {

class Runner {
 public:
  explicit Runner(const SuiteConfig& cfg) : cfg_(cfg) {}

  void probe(const LawProbe& p, const SearchOptions& opts) {
    add(run_probe(p, opts), expectation_for(p.law, p.context));
  }
  void probe(const LawProbe& p) { probe(p, cfg_.opts); }
  void add(LawReport r, Expect e) { res_.entries.push_back({std::move(r), e}); }
  SuiteResult take() { return std::move(res_); }

 private:
  const SuiteConfig& cfg_;
  SuiteResult res_;
};

std::vector<MeanSpec> selected_means(const SuiteConfig& cfg) {
  if (cfg.mean) return {MeanSpec::parse(*cfg.mean)};
  return builtin_means();
}

void suite_axioms(const SuiteConfig& cfg, Runner& run) {
  const SearchOptions& o = cfg.opts;
  for (const MeanSpec& s : selected_means(cfg)) {
    for (const LawReport& r : verify_axioms(s, o).laws) {
      ProbeContext ctx{{"mean", s.spec()}};
      run.add(r, expectation_for(r.law, ctx));
    }
  }
}

void suite_duality(const SuiteConfig& cfg, Runner& run) {
  const SearchOptions& o = cfg.opts;
  for (const MeanSpec& s : selected_means(cfg)) {
    run.probe(transpose_law_probe(s, o));
    run.probe(adjoint_law_probe(s, o));
    run.probe(scalar_slice_probe(s, o));
  }
  if (!cfg.mean) {
    run.probe(riccati_probe(o));
    run.probe(harmonic_formula_probe(o));
    run.probe(arithmetic_formula_probe(o));
  }
}

void suite_mediality(const SuiteConfig& cfg, Runner& run) {
  for (const MeanSpec& s : selected_means(cfg)) run.probe(mediality_probe(s, cfg.opts));
}

void suite_e71(const SuiteConfig& cfg, Runner& run) {
  for (const MeanSpec& s : selected_means(cfg)) run.probe(two_var_law_probe(s, cfg.opts));
}

void suite_assoc_like(const SuiteConfig& cfg, Runner& run, const std::string& law) {
  std::vector<std::pair<MeanSpec, ScalarMap>> cases;
  if (cfg.mean || cfg.g) {
    const MeanSpec s = MeanSpec::parse(cfg.mean.value_or("geom"));
    std::optional<ScalarMap> g = cfg.g ? std::optional<ScalarMap>(ScalarMap::parse(*cfg.g)) : default_g(law, s);
    if (!g) throw InvalidArgument("no default g for mean " + s.label + "; pass --g");
    cases.emplace_back(s, *g);
  } else {
    const MeanSpec a = MeanSpec::parse("arith"), h = MeanSpec::parse("harm"), g = MeanSpec::parse("geom");
    if (law == "e65") {
      cases.emplace_back(a, ScalarMap::scale(2.0));
      cases.emplace_back(h, ScalarMap::scale(0.5));
      cases.emplace_back(g, ScalarMap::power_affine(2.0, 2.0, 0.0));
      cases.emplace_back(g, ScalarMap::power_affine(3.0, 2.0, 0.0));
      const MeanSpec p = MeanSpec::parse("power:0.5");
      cases.emplace_back(p, ScalarMap::rep_inverse(p.f));
    } else {
      cases.emplace_back(a, ScalarMap::scale(2.0));
      cases.emplace_back(h, ScalarMap::scale(0.5));
      cases.emplace_back(g, ScalarMap::power_affine(1.0, 2.0, 0.0));
      const MeanSpec p = MeanSpec::parse("power:0.5");
      cases.emplace_back(p, *default_g(law, p));
    }
  }
  for (const auto& [s, g] : cases)
    run.probe(law == "e65" ? restricted_assoc_probe(s, g, cfg.opts) : global_assoc_probe(s, g, cfg.opts));
}

void suite_e36(const SuiteConfig& cfg, Runner& run) {
  SearchOptions o = cfg.opts;
  if (cfg.mean) {
    run.probe(e36_probe(MeanSpec::parse(*cfg.mean), o));  // PreconditionError propagates
    return;
  }
  run.probe(strength_oracle_probe(o));
  run.probe(strength_order_probe(o));
  run.probe(e36_probe(MeanSpec::parse("geom"), o));
  run.probe(e36_probe(MeanSpec::parse("harm"), o));
  // The precondition gate itself: f(0) = 1/2 for the arithmetic mean.
  LawReport gate;
  gate.law = "e36-precondition";
  gate.mean = "arith";
  gate.seed = o.seed;
  gate.tol = o.tol;
  gate.trials = gate.completed = 1;
  try {
    e36_probe(MeanSpec::parse("arith"), o);
    gate.verdict = Verdict::HoldsAtTolerance;
  } catch (const PreconditionError&) {
    gate.failure_count = 1;
    gate.max_residual = 0.5;
    gate.verdict = Verdict::Falsified;
  }
  run.add(gate, Expect::Fail);
}

LawProbe norm_order_converse_probe(const SearchOptions& opts, std::size_t samples) {
  LawProbe p;
  p.law = "norm-order-converse";
  p.mean = "geom";
  p.context = {{"samples", std::to_string(samples)}};
  p.perturbation = Perturbation::None;
  p.sample = [opts](Rng& rng, std::size_t n) {
    LawInstance inst;
    const PositiveMatrix a = sample_pd(rng, n, opts);
    const PositiveMatrix b = sample_pd(rng, n, opts);
    if (loewner_violation(a, b) <= 1e-6) throw DomainError("pair is ordered");
    inst.add("A", a.hermitian());
    inst.add("B", b.hermitian());
    inst.params["x_seed"] = std::floor(uniform(rng, 0.0, 4294967296.0));
    return inst;
  };
  // 0 when an explicit X certifies that A <= B fails.
  p.residual = [samples, tol = opts.tol](const LawInstance& in) {
    const NormOrderResult r = norm_order_check(in.positive("A"), in.positive("B"), samples, tol,
                                               static_cast<std::uint64_t>(in.param("x_seed")));
    return r.certifies_not_leq() ? 0.0 : 1.0;
  };
  return p;
}

void suite_norm_order(const SuiteConfig& cfg, Runner& run) {
  SearchOptions o = cfg.opts;
  o.trials = std::min<std::size_t>(o.trials, 500);
  run.probe(norm_order_probe(o, 200), o);
  SearchOptions c = o;
  c.trials = std::min<std::size_t>(o.trials, 100);
  run.probe(norm_order_converse_probe(c, 200), c);
}

LawReport aggregate_nonex(const NonexReport& nr, const MeanEvaluator& m, const SearchOptions& o) {
  LawReport agg;
  agg.law = "nonex";
  agg.mean = m.label;
  agg.seed = o.seed;
  agg.tol = o.tol;
  for (const LawReport* r : nr.suite.all()) {
    agg.trials += r->trials;
    agg.completed += r->completed;
    agg.skipped += r->skipped;
    agg.failure_count += r->failure_count;
    agg.max_residual = std::max(agg.max_residual, r->max_residual);
    if (agg.failures.empty() && !r->failures.empty()) agg.failures = r->failures;
  }
  agg.verdict = nr.witnessed ? Verdict::Falsified : Verdict::Inconclusive;
  return agg;
}

void suite_qa(const SuiteConfig& cfg, Runner& run) {
  SearchOptions o = cfg.opts;
  o.trials = std::min<std::size_t>(o.trials, 500);
  const auto axioms = [&](const MeanEvaluator& m, const ScalarMap& phi) {
    const QaAxiomsReport rep = qa_axioms_check(m, phi, o);
    const ProbeContext ctx{{"evaluator", m.spec}, {"phi", spec_string(phi)}};
    for (const LawReport* r : rep.all()) run.add(*r, expectation_for(r->law, ctx));
  };
  const auto nonex = [&](const MeanEvaluator& m) {
    run.add(aggregate_nonex(nonex_probe(m, o), m, o), Expect::Fail);
  };
  if (cfg.mean) {
    const MeanEvaluator m = parse_evaluator(*cfg.mean);
    axioms(m, ScalarMap::parse(cfg.phi.value_or("id")));
    if (!cfg.phi || *cfg.phi == "id") nonex(m);
    return;
  }
  axioms(parse_evaluator("qa:id"), ScalarMap::identity());
  axioms(parse_evaluator("qa:recip"), ScalarMap::reciprocal());
  axioms(parse_evaluator("qa:log"), ScalarMap::log_affine(1.0, 0.0));
  axioms(log_euclidean_evaluator(), ScalarMap::log_affine(1.0, 0.0));
  for (const char* m : {"geom", "le", "harm"}) nonex(parse_evaluator(m));
  // Transform laws.
  run.probe(arithmetization_probe(MeanSpec::parse("harm"), ScalarMap::reciprocal(), cfg.opts));
  run.probe(arithmetization_probe(MeanSpec::parse("arith"), ScalarMap::identity(), cfg.opts));
  run.probe(arithmetization_probe(MeanSpec::parse("geom"), ScalarMap::log_affine(1.0, 0.0), cfg.opts));
  run.probe(arithmetization_probe(MeanSpec::parse("geom"), ScalarMap::log_affine(1.0, 0.0), cfg.opts, true));
  for (const ScalarMap& phi : {ScalarMap::identity(), ScalarMap::exp(), ScalarMap::power_affine(1.0, 2.0, 0.0)}) {
    run.probe(geo_transform_probe(phi, cfg.opts));
    run.probe(geo_transform_deviation_probe(phi, cfg.opts));
  }
}

void suite_opmono(const SuiteConfig& cfg, Runner& run) {
  std::vector<RepFn> fns;
  if (cfg.fn || cfg.mean)
    fns.push_back(RepFn::parse(cfg.fn ? *cfg.fn : *cfg.mean));
  else
    for (double p : {-2.0, -1.5, -1.0, -0.5, 0.5, 1.0, 1.5, 2.0}) fns.push_back(RepFn::power(p));
  for (const RepFn& f : fns) {
    const LawProbe p = opmono_probe(f, cfg.opts);
    SearchOptions o = cfg.opts;
    // Absence of a witness is the claim for monotone functions; search longer.
    if (expectation_for(p.law, p.context) == Expect::Hold) o.trials *= 10;
    run.probe(p, o);
  }
}

}  // namespace

SuiteResult run_suite(const SuiteConfig& cfg) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), cfg.suite) == names.end())
    throw InvalidArgument("unknown suite '" + cfg.suite + "'");
  Runner run(cfg);
  const bool all = cfg.suite == "all";
  if (all || cfg.suite == "axioms") suite_axioms(cfg, run);
  if (all || cfg.suite == "duality") suite_duality(cfg, run);
  if (all || cfg.suite == "mediality") suite_mediality(cfg, run);
  if (all || cfg.suite == "e65") suite_assoc_like(cfg, run, "e65");
  if (all || cfg.suite == "e71") suite_e71(cfg, run);
  if (all || cfg.suite == "assoc") suite_assoc_like(cfg, run, "assoc");
  if (all || cfg.suite == "e36") suite_e36(cfg, run);
  if (all || cfg.suite == "norm-order") suite_norm_order(cfg, run);
  if (all || cfg.suite == "qa") suite_qa(cfg, run);
  if (all || cfg.suite == "opmono") suite_opmono(cfg, run);
  return run.take();
}

json suite_report_json(const SuiteConfig& cfg, const SuiteResult& res) {
  json entries = json::array();
  for (const SuiteEntry& e : res.entries) {
    json j = to_json(e.report);
    j["expected"] = to_string(e.expect);
    j["expectation_met"] = e.met();
    entries.push_back(std::move(j));
  }
  json config = {{"suite", cfg.suite},
                 {"seed", cfg.opts.seed},
                 {"trials", cfg.opts.trials},
                 {"dims", {cfg.opts.dim_lo, cfg.opts.dim_hi}},
                 {"tol", cfg.opts.tol}};
  if (cfg.mean) config["mean"] = *cfg.mean;
  if (cfg.fn) config["fn"] = *cfg.fn;
  if (cfg.g) config["g"] = *cfg.g;
  if (cfg.phi) config["phi"] = *cfg.phi;
  return json{{"schema", 1}, {"config", config}, {"all_expectations_met", res.all_met()}, {"reports", entries}};
}

std::string suite_report_csv(const SuiteResult& res) {
  std::string out = csv_header();
  for (const SuiteEntry& e : res.entries) out += csv_row(e.report);
  return out;
}

std::string counterexample_filename(const Counterexample& cx) {
  std::string name = cx.law + "__" + cx.mean;
  for (const char* key : {"g", "phi", "commuting"})
    if (const auto it = cx.context.find(key); it != cx.context.end()) name += "__" + std::string(key) + "-" + it->second;
  name += "__s" + std::to_string(cx.seed) + "__t" + std::to_string(cx.trial);
  for (char& c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-')) c = '_';
  return name + ".json";
}

}  // namespace opmeans
