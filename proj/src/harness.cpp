#include "opmeans/harness.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <thread>

#include "opmeans/errors.hpp"
#include "opmeans/format.hpp"
#include "opmeans/matrix_io.hpp"

namespace opmeans {

using nlohmann::json;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::HoldsAtTolerance:
      return "holds-at-tolerance";
    case Verdict::Falsified:
      return "falsified";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "";
}

const CMatrix& LawInstance::at(std::string_view name) const {
  for (const NamedMatrix& m : matrices)
    if (m.name == name) return m.value;
  throw InvalidArgument("law instance has no matrix '" + std::string(name) + "'");
}

HermitianMatrix LawInstance::hermitian(std::string_view name) const {
  return HermitianMatrix::from_upper(at(name));
}

PositiveMatrix LawInstance::positive(std::string_view name) const {
  return PositiveMatrix(hermitian(name));
}

double LawInstance::param(std::string_view name) const {
  const auto it = params.find(std::string(name));
  if (it == params.end()) throw InvalidArgument("law instance has no parameter '" + std::string(name) + "'");
  return it->second;
}

std::size_t trial_dim(const SearchOptions& opts, std::uint64_t trial) {
  const std::size_t span = opts.dim_hi >= opts.dim_lo ? opts.dim_hi - opts.dim_lo + 1 : 1;
  return opts.dim_lo + static_cast<std::size_t>(trial % span);
}

PositiveMatrix sample_pd(Rng& rng, std::size_t n, const SearchOptions& opts) {
  return random_pd(rng, n, opts.spectrum_lo, opts.spectrum_hi);
}

namespace {

struct TrialOutcome {
  bool evaluated = false;
  double residual = 0.0;
  LawInstance instance;
};

std::optional<double> try_residual(const LawProbe& probe, const LawInstance& inst) {
  try {
    const double r = probe.residual(inst);
    if (std::isnan(r)) return std::nullopt;
    return r;
  } catch (const DomainError&) {
    return std::nullopt;
  } catch (const NonConvergence&) {
    return std::nullopt;
  }
}

TrialOutcome run_trial(const LawProbe& probe, const SearchOptions& opts, std::uint64_t trial, std::size_t n) {
  TrialOutcome out;
  Rng rng = trial_rng(opts.seed, trial);
  try {
    out.instance = probe.sample(rng, n);
  } catch (const DomainError&) {
    return out;
  }
  if (const auto r = try_residual(probe, out.instance)) {
    out.evaluated = true;
    out.residual = *r;
  }
  return out;
}

bool is_hermitian(const CMatrix& m) { return m.hermitian_defect() == 0.0; }

LawInstance perturb(const LawInstance& inst, Perturbation mode, Rng& rng, double step, int step_index) {
  LawInstance out = inst;
  const std::size_t n = inst.dim();
  if (n == 0 || inst.matrices.empty()) return out;
  const auto make_t = [&] {
    CMatrix t = random_ginibre(rng, n) * cplx(step / std::sqrt(static_cast<double>(n)));
    t += CMatrix::identity(n);
    return t;
  };
  const auto apply = [](const CMatrix& t, CMatrix& m) {
    m = is_hermitian(m) ? congruence(t, HermitianMatrix::from_upper(m)).matrix() : t * m;
  };
  if (mode == Perturbation::Joint) {
    const CMatrix t = make_t();
    for (NamedMatrix& m : out.matrices) apply(t, m.value);
  } else {
    const std::size_t k = static_cast<std::size_t>(step_index) % out.matrices.size();
    apply(make_t(), out.matrices[k].value);
  }
  return out;
}

// Hill climbing on the residual; the refined instance violates the law at
// least as strongly as the sampled one.
std::pair<LawInstance, double> refine(const LawProbe& probe, const SearchOptions& opts,
                                      std::uint64_t trial, LawInstance inst, double residual) {
  if (probe.perturbation == Perturbation::None || opts.refine_steps <= 0 || !std::isfinite(residual))
    return {std::move(inst), residual};
  Rng rng = trial_rng(opts.seed, trial, 1);
  double step = 0.05;
  for (int s = 0; s < opts.refine_steps; ++s) {
    LawInstance cand;
    try {
      cand = perturb(inst, probe.perturbation, rng, step, s);
    } catch (const Error&) {
      continue;
    }
    const auto r = try_residual(probe, cand);
    if (r && *r > residual && std::isfinite(*r)) {
      inst = std::move(cand);
      residual = *r;
      step = std::min(step * 1.5, 0.5);
    } else {
      step = std::max(step * 0.7, 1e-4);
    }
  }
  return {std::move(inst), residual};
}

Counterexample make_counterexample(const LawProbe& probe, const SearchOptions& opts,
                                   std::uint64_t trial, LawInstance inst, double residual) {
  auto [refined, r] = refine(probe, opts, trial, std::move(inst), residual);
  Counterexample cx;
  cx.law = probe.law;
  cx.mean = probe.mean;
  cx.context = probe.context;
  cx.seed = opts.seed;
  cx.trial = trial;
  cx.dim = refined.dim();
  cx.tol = opts.tol;
  cx.spectrum_lo = opts.spectrum_lo;
  cx.spectrum_hi = opts.spectrum_hi;
  cx.refine_steps = probe.perturbation == Perturbation::None ? 0 : opts.refine_steps;
  cx.instance = std::move(refined);
  cx.residual = r;
  return cx;
}

}  // namespace

LawReport run_probe(const LawProbe& probe, const SearchOptions& opts) {
  LawReport rep;
  rep.law = probe.law;
  rep.mean = probe.mean;
  rep.seed = opts.seed;
  rep.tol = opts.tol;
  rep.trials = opts.trials;

  const unsigned threads = std::max(1u, opts.threads);
  const std::size_t block = threads == 1 ? 1 : threads * 8;
  std::vector<TrialOutcome> outcomes;
  for (std::size_t start = 0; start < opts.trials; start += block) {
    const std::size_t end = std::min(opts.trials, start + block);
    outcomes.assign(end - start, {});
    if (threads == 1) {
      for (std::size_t t = start; t < end; ++t) outcomes[t - start] = run_trial(probe, opts, t, trial_dim(opts, t));
    } else {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
          for (std::size_t t = start + w; t < end; t += threads) outcomes[t - start] = run_trial(probe, opts, t, trial_dim(opts, t));
        });
    }
    // Merge strictly in trial order.
    bool stop = false;
    for (std::size_t t = start; t < end && !stop; ++t) {
      TrialOutcome& o = outcomes[t - start];
      if (!o.evaluated) {
        ++rep.skipped;
        continue;
      }
      ++rep.completed;
      rep.max_residual = std::max(rep.max_residual, o.residual);
      if (o.residual > opts.tol) {
        ++rep.failure_count;
        if (rep.failures.size() < opts.max_witnesses)
          rep.failures.push_back(make_counterexample(probe, opts, t, std::move(o.instance), o.residual));
        stop = opts.stop_at_first;
      }
    }
    if (stop) {
      rep.trials = rep.completed + rep.skipped;
      break;
    }
  }
  if (rep.failure_count > 0) {
    rep.verdict = Verdict::Falsified;
    for (const Counterexample& cx : rep.failures) rep.max_residual = std::max(rep.max_residual, cx.residual);
  } else {
    rep.verdict = rep.completed > 0 ? Verdict::HoldsAtTolerance : Verdict::Inconclusive;
  }
  return rep;
}

double replay_residual(const LawProbe& probe, const Counterexample& cx) {
  return probe.residual(cx.instance);
}

SearchOptions recorded_options(const Counterexample& cx) {
  SearchOptions o;
  o.seed = cx.seed;
  o.tol = cx.tol;
  o.spectrum_lo = cx.spectrum_lo;
  o.spectrum_hi = cx.spectrum_hi;
  o.refine_steps = cx.refine_steps;
  o.dim_lo = o.dim_hi = cx.dim;
  return o;
}

Counterexample regenerate(const LawProbe& probe, const Counterexample& cx) {
  const SearchOptions o = recorded_options(cx);
  TrialOutcome t = run_trial(probe, o, cx.trial, cx.dim);
  if (!t.evaluated) throw DomainError("regenerate: trial no longer evaluates");
  return make_counterexample(probe, o, cx.trial, std::move(t.instance), t.residual);
}

json to_json(const Counterexample& cx) {
  json mats = json::array();
  for (const NamedMatrix& m : cx.instance.matrices) {
    json jm = matrix_to_json(m.value);
    jm["name"] = m.name;
    mats.push_back(std::move(jm));
  }
  return json{{"schema", 1},
              {"law", cx.law},
              {"mean", cx.mean},
              {"context", cx.context},
              {"seed", cx.seed},
              {"trial", cx.trial},
              {"dim", cx.dim},
              {"tol", cx.tol},
              {"spectrum", {cx.spectrum_lo, cx.spectrum_hi}},
              {"refine_steps", cx.refine_steps},
              {"matrices", std::move(mats)},
              {"params", cx.instance.params},
              {"residual", cx.residual}};
}

Counterexample counterexample_from_json(const json& j) {
  try {
    Counterexample cx;
    cx.law = j.at("law").get<std::string>();
    cx.mean = j.value("mean", std::string{});
    if (j.contains("context")) cx.context = j.at("context").get<ProbeContext>();
    cx.seed = j.at("seed").get<std::uint64_t>();
    cx.trial = j.value("trial", std::uint64_t{0});
    cx.dim = j.value("dim", std::size_t{0});
    cx.tol = j.value("tol", 0.0);
    cx.refine_steps = j.value("refine_steps", 0);
    if (j.contains("spectrum")) {
      cx.spectrum_lo = j.at("spectrum").at(0).get<double>();
      cx.spectrum_hi = j.at("spectrum").at(1).get<double>();
    }
    for (const json& jm : j.at("matrices"))
      cx.instance.matrices.push_back({jm.at("name").get<std::string>(), matrix_from_json(jm)});
    if (j.contains("params")) cx.instance.params = j.at("params").get<std::map<std::string, double>>();
    cx.residual = j.at("residual").get<double>();
    return cx;
  } catch (const json::exception& e) {
    throw FormatError(std::string("counterexample: ") + e.what());
  }
}

json to_json(const LawReport& r) {
  json cxs = json::array();
  for (const Counterexample& cx : r.failures) cxs.push_back(to_json(cx));
  return json{{"law", r.law},
              {"mean", r.mean},
              {"seed", r.seed},
              {"tol", r.tol},
              {"trials", r.trials},
              {"completed", r.completed},
              {"skipped", r.skipped},
              {"failures", r.failure_count},
              {"max_residual", r.max_residual},
              {"verdict", to_string(r.verdict)},
              {"counterexamples", std::move(cxs)}};
}

std::string csv_header() { return "law,mean,trials,failures,max_residual,verdict\n"; }

std::string csv_row(const LawReport& r) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  return quote(r.law) + "," + quote(r.mean) + "," + std::to_string(r.trials) + "," +
         std::to_string(r.failure_count) + "," + format_double(r.max_residual) + "," +
         to_string(r.verdict) + "\n";
}

}  // namespace opmeans
