#include "opmeans/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "opmeans/errors.hpp"
#include "opmeans/format.hpp"
#include "opmeans/law_lab.hpp"
#include "opmeans/matrix_io.hpp"
#include "opmeans/qa_means.hpp"
#include "opmeans/suites.hpp"

namespace opmeans {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::optional<std::string> mean, fn, g, phi;
  std::string dims = "2..6";
  std::size_t trials = 1000;
  std::optional<std::uint64_t> seed;
  double tol = 1e-9;
  std::string out = "out";
  unsigned threads = 1;
};

void add_search_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--mean", c.mean, "arith | harm | geom | power:P | mono:Q | qa:MAP | le");
  cmd->add_option("--fn", c.fn, "representing function for opmono");
  cmd->add_option("--g", c.g, "scalar map g of the associativity laws");
  cmd->add_option("--phi", c.phi, "scalar map phi");
  cmd->add_option("--dims", c.dims, "dimension range A..B")->capture_default_str();
  cmd->add_option("--trials", c.trials, "trials per law")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "RNG seed")->required();
  cmd->add_option("--tol", c.tol, "residual tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "output directory")->capture_default_str();
  cmd->add_option("--threads", c.threads, "worker threads")->capture_default_str()->check(CLI::Range(1u, 256u));
}

SearchOptions search_options(const Common& c) {
  SearchOptions o;
  const auto sep = c.dims.find("..");
  if (sep == std::string::npos) {
    o.dim_lo = o.dim_hi = static_cast<std::size_t>(parse_double(c.dims));
  } else {
    o.dim_lo = static_cast<std::size_t>(parse_double(c.dims.substr(0, sep)));
    o.dim_hi = static_cast<std::size_t>(parse_double(c.dims.substr(sep + 2)));
  }
  if (o.dim_lo < 2 || o.dim_hi < o.dim_lo || o.dim_hi > 64)
    throw InvalidArgument("--dims must be A..B with 2 <= A <= B <= 64");
  o.trials = c.trials;
  o.seed = *c.seed;
  o.tol = c.tol;
  o.threads = c.threads;
  return o;
}

std::string join_values(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_double(v[i]);
  return s;
}

fs::path persist(const Counterexample& cx, const fs::path& dir) {
  const fs::path path = dir / "counterexamples" / counterexample_filename(cx);
  write_text_file(path, to_json(cx).dump(2) + "\n");
  return path;
}

int cmd_eval(const std::string& mean, const std::string& a_path, const std::string& b_path, const std::string& out_dir,
             std::ostream& out) {
  const MeanEvaluator m = parse_evaluator(mean);
  const PositiveMatrix a(read_matrix(a_path));
  const PositiveMatrix b(read_matrix(b_path));
  require_same_dim(a.dim(), b.dim(), "eval");
  const PositiveMatrix r = m.eval(a, b);
  const fs::path path = fs::path(out_dir) / "result.json";
  write_matrix(path, r.hermitian());
  out << "A eigenvalues: " << join_values(a.eigen().values) << "\n";
  out << "B eigenvalues: " << join_values(b.eigen().values) << "\n";
  out << m.label << " eigenvalues: " << join_values(r.eigen().values) << "\n";
  out << "wrote " << path.generic_string() << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& suite, const Common& c, std::ostream& out) {
  SuiteConfig cfg;
  cfg.suite = suite;
  cfg.mean = c.mean;
  cfg.fn = c.fn;
  cfg.g = c.g;
  cfg.phi = c.phi;
  cfg.opts = search_options(c);
  const SuiteResult res = run_suite(cfg);
  const fs::path dir(c.out);
  write_text_file(dir / "report.json", suite_report_json(cfg, res).dump(2) + "\n");
  write_text_file(dir / "report.csv", suite_report_csv(res));
  std::size_t unexpected = 0;
  for (const SuiteEntry& e : res.entries) {
    std::vector<fs::path> files;
    for (const Counterexample& cx : e.report.failures) files.push_back(persist(cx, dir));
    out << e.report.law << " " << e.report.mean << ": " << to_string(e.report.verdict) << " (expected "
        << to_string(e.expect) << ", " << e.report.completed << " trials, max residual "
        << format_double(e.report.max_residual) << ")" << (e.met() ? "" : " UNEXPECTED") << "\n";
    if (!e.met()) {
      ++unexpected;
      for (const fs::path& f : files) out << "  counterexample: " << f.generic_string() << "\n";
    }
  }
  out << "report: " << (dir / "report.json").generic_string() << "\n";
  if (unexpected == 0) {
    out << "all " << res.entries.size() << " expectations met\n";
    return kExitOk;
  }
  out << unexpected << " of " << res.entries.size() << " verdicts unexpected\n";
  return kExitRegression;
}

int falsify_funceq(const Common& c, std::ostream& out) {
  const RepFn f = RepFn::parse(c.fn ? *c.fn : c.mean.value_or("geom"));
  const std::vector<double> cs = {0.25, 0.5, 2.0, 3.0, 4.0, 10.0};
  const auto rows = funceq_scan(f, cs, standard_grid(), c.tol);
  const FunceqRow* worst = nullptr;
  for (const FunceqRow& r : rows) {
    out << "c=" << format_double(r.c) << " max_residual=" << format_double(r.max_residual)
        << (r.candidate ? " candidate" : "") << "\n";
    if (!r.candidate && (!worst || r.max_residual > worst->max_residual)) worst = &r;
  }
  if (worst) {
    Counterexample cx;
    cx.law = "funceq";
    cx.mean = f.label();
    cx.context = {{"fn", spec_string(f)}};
    cx.seed = *c.seed;
    cx.tol = c.tol;
    cx.instance.params["c"] = worst->c;
    cx.residual = worst->max_residual;
    const fs::path path = persist(cx, c.out);
    out << "witness: " << path.generic_string() << " residual " << format_double(cx.residual) << "\n";
    return kExitOk;
  }
  out << "none\n";
  return f.kind() == RepFn::Kind::Geometric ? kExitOk : kExitBudget;
}

ProbeContext falsify_context(const std::string& law, const Common& c) {
  ProbeContext ctx;
  if (law == "opmono") {
    if (!c.fn && !c.mean) throw InvalidArgument("opmono needs --fn");
    ctx["fn"] = spec_string(RepFn::parse(c.fn ? *c.fn : *c.mean));
    return ctx;
  }
  if (law.starts_with("qa-")) {
    ctx["evaluator"] = parse_evaluator(c.mean.value_or("geom")).spec;
    ctx["phi"] = spec_string(ScalarMap::parse(c.phi.value_or("id")));
    return ctx;
  }
  if (law.starts_with("geo-transform")) {
    ctx["phi"] = spec_string(ScalarMap::parse(c.phi.value_or("exp")));
    return ctx;
  }
  const MeanSpec s = MeanSpec::parse(c.mean.value_or("geom"));
  ctx["mean"] = s.spec();
  if (law == "e65" || law == "assoc") {
    const std::optional<ScalarMap> g = c.g ? std::optional<ScalarMap>(ScalarMap::parse(*c.g)) : default_g(law, s);
    if (!g) throw InvalidArgument("no default g for " + s.label + "; pass --g");
    ctx["g"] = spec_string(*g);
  }
  if (law == "arithmetization") {
    ctx["phi"] = spec_string(ScalarMap::parse(c.phi.value_or("log")));
    ctx["commuting"] = "0";
  }
  if (law == "norm-order") ctx["samples"] = "200";
  return ctx;
}

int cmd_falsify(const std::string& law, const Common& c, std::ostream& out) {
  if (law == "funceq") return falsify_funceq(c, out);
  SearchOptions o = search_options(c);
  o.stop_at_first = true;
  o.max_witnesses = 1;
  std::optional<Counterexample> cx;
  Expect expect;
  if (law == "qa-nonex") {
    const MeanEvaluator m = parse_evaluator(c.mean.value_or("geom"));
    const NonexReport nr = nonex_probe(m, o);
    for (const LawReport* r : nr.suite.all())
      if (!cx && !r->failures.empty()) cx = r->failures.front();
    expect = Expect::Fail;
  } else {
    const ProbeContext ctx = falsify_context(law, c);
    const LawReport rep = run_probe(probe_for(law, ctx, o), o);
    if (!rep.failures.empty()) cx = rep.failures.front();
    expect = expectation_for(law, ctx);
  }
  if (cx) {
    const fs::path path = persist(*cx, c.out);
    out << "witness: " << path.generic_string() << " law " << cx->law << " mean " << cx->mean << " trial " << cx->trial
        << " dim " << cx->dim << " residual " << format_double(cx->residual) << "\n";
    return kExitOk;
  }
  out << "none\n";
  return expect == Expect::Fail ? kExitBudget : kExitOk;
}

int cmd_replay(const std::string& file, bool regen, std::ostream& out) {
  const Counterexample cx = counterexample_from_json(read_json_file(file));
  const auto agree = [&](double r) { return std::abs(r - cx.residual) <= 1e-12 * (1.0 + std::abs(cx.residual)); };
  double r;
  if (cx.law == "funceq") {
    const RepFn f = RepFn::parse(cx.context.at("fn"));
    r = funceq_scan(f, {cx.instance.param("c")}, standard_grid(), cx.tol).front().max_residual;
  } else {
    r = replay(cx);
  }
  out << cx.law << " " << cx.mean << ": stored residual " << format_double(cx.residual) << ", replayed "
      << format_double(r) << "\n";
  bool ok = agree(r);
  if (regen && cx.law != "funceq") {
    const Counterexample again = regenerate(probe_for(cx.law, cx.context, recorded_options(cx)), cx);
    out << "regenerated from seed " << cx.seed << " trial " << cx.trial << ": residual "
        << format_double(again.residual) << "\n";
    ok = ok && agree(again.residual);
  }
  out << (ok ? "replay matches" : "replay MISMATCH") << "\n";
  return ok ? kExitOk : kExitRegression;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Operator means: evaluation, law verification and counterexample search"};
  app.require_subcommand(1);

  std::string eval_mean, a_path, b_path, eval_out = "out";
  CLI::App* eval = app.add_subcommand("eval", "evaluate a mean of two matrix files");
  eval->add_option("--mean", eval_mean, "mean")->required();
  eval->add_option("A", a_path, "first matrix (JSON)")->required();
  eval->add_option("B", b_path, "second matrix (JSON)")->required();
  eval->add_option("--out", eval_out, "output directory")->capture_default_str();

  Common vc;
  std::string suite;
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite, "axioms | duality | mediality | e65 | e71 | assoc | e36 | norm-order | qa | opmono | all")
      ->required()
      ->check(CLI::IsMember(suite_names()));
  add_search_flags(verify, vc);

  Common fc;
  std::string law;
  CLI::App* falsify = app.add_subcommand("falsify", "search for a counterexample to one law");
  falsify->add_option("--law", law, "opmono | assoc | mediality | e71 | e65 | funceq | geo-transform | qa-nonex | ...")
      ->required();
  add_search_flags(falsify, fc);

  std::string replay_file;
  bool regen = false;
  CLI::App* replay_cmd = app.add_subcommand("replay", "recompute the residual of a persisted counterexample");
  replay_cmd->add_option("FILE", replay_file, "counterexample JSON")->required();
  replay_cmd->add_flag("--regenerate", regen, "also rerun the sampling and refinement from the seed");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (!app.get_subcommands().empty())
      err << app.get_subcommands().front()->help();
    else
      err << app.help();
    return kExitUsage;
  }

  try {
    if (*eval) return cmd_eval(eval_mean, a_path, b_path, eval_out, out);
    if (*verify) return cmd_verify(suite, vc, out);
    if (*falsify) return cmd_falsify(law, fc, out);
    if (*replay_cmd) return cmd_replay(replay_file, regen, out);
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const PreconditionError& e) {
    err << "precondition: " << e.what() << "\n";
    return kExitDomain;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const DimensionMismatch& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const NonConvergence& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFormat;
  }
  return kExitUsage;
}

}  // namespace opmeans
