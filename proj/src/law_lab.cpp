#include "opmeans/law_lab.hpp"

#include <algorithm>
#include <cmath>

#include "opmeans/errors.hpp"
#include "opmeans/strength.hpp"

namespace opmeans {

namespace {

const MeanSpec& geometric_mean() {
  static const MeanSpec g = MeanSpec::of(RepFn::geometric());
  return g;
}

LawProbe mean_probe(std::string law, const MeanSpec& s) {
  LawProbe p;
  p.law = std::move(law);
  p.mean = s.label;
  p.context = {{"mean", s.spec()}};
  return p;
}

std::function<LawInstance(Rng&, std::size_t)> pd_sampler(std::vector<std::string> names, SearchOptions opts) {
  return [names = std::move(names), opts](Rng& rng, std::size_t n) {
    LawInstance inst;
    for (const std::string& name : names) inst.add(name, sample_pd(rng, n, opts).hermitian());
    return inst;
  };
}

// The geo-transform applies phi to the spectrum, so exponential maps need a
// narrow range.
SearchOptions geo_options(SearchOptions opts) {
  opts.spectrum_lo = std::max(opts.spectrum_lo, 0.1);
  opts.spectrum_hi = std::min(opts.spectrum_hi, 10.0);
  return opts;
}

PositiveMatrix positive_image(const HermitianMatrix& h, const ScalarMap& phi) {
  return PositiveMatrix(apply_map(h, phi));
}

}  // namespace

PositiveMatrix diamond(const MeanSpec& s, const ScalarMap& g, const PositiveMatrix& x, const PositiveMatrix& y) {
  return positive_image(ka_mean(s, x, y), g);
}

LawProbe mediality_probe(const MeanSpec& s, const SearchOptions& opts) {
  LawProbe p = mean_probe("mediality", s);
  p.sample = pd_sampler({"A", "B", "C", "D"}, opts);
  p.residual = [s](const LawInstance& in) {
    const PositiveMatrix a = in.positive("A"), b = in.positive("B"), c = in.positive("C"), d = in.positive("D");
    const PositiveMatrix lhs = ka_mean(s, ka_mean(s, a, b), ka_mean(s, c, d));
    const PositiveMatrix rhs = ka_mean(s, ka_mean(s, a, c), ka_mean(s, b, d));
    return relative_residual(lhs, rhs);
  };
  return p;
}

LawProbe restricted_assoc_probe(const MeanSpec& s, const ScalarMap& g, const SearchOptions& opts) {
  LawProbe p = mean_probe("e65", s);
  p.context["g"] = spec_string(g);
  p.sample = pd_sampler({"A", "B"}, opts);
  p.residual = [s, g](const LawInstance& in) {
    const PositiveMatrix a = in.positive("A"), b = in.positive("B");
    const PositiveMatrix i = PositiveMatrix::identity(a.dim());
    const PositiveMatrix lhs = diamond(s, g, diamond(s, g, a, i), b);
    const PositiveMatrix rhs = diamond(s, g, a, diamond(s, g, i, b));
    return relative_residual(lhs, rhs);
  };
  return p;
}

LawProbe global_assoc_probe(const MeanSpec& s, const ScalarMap& g, const SearchOptions& opts) {
  LawProbe p = mean_probe("assoc", s);
  p.context["g"] = spec_string(g);
  p.sample = pd_sampler({"A", "B", "C"}, opts);
  p.residual = [s, g](const LawInstance& in) {
    const PositiveMatrix a = in.positive("A"), b = in.positive("B"), c = in.positive("C");
    const PositiveMatrix lhs = diamond(s, g, diamond(s, g, a, b), c);
    const PositiveMatrix rhs = diamond(s, g, a, diamond(s, g, b, c));
    return relative_residual(lhs, rhs);
  };
  return p;
}

LawProbe two_var_law_probe(const MeanSpec& s, const SearchOptions& opts) {
  LawProbe p = mean_probe("e71", s);
  p.sample = pd_sampler({"A", "B"}, opts);
  p.residual = [s](const LawInstance& in) {
    const PositiveMatrix a = in.positive("A"), b = in.positive("B");
    const PositiveMatrix i = PositiveMatrix::identity(a.dim());
    const PositiveMatrix lhs = ka_mean(s, ka_mean(s, a, a), ka_mean(s, i, b));
    const PositiveMatrix rhs = ka_mean(s, ka_mean(s, a, i), ka_mean(s, a, b));
    return relative_residual(lhs, rhs);
  };
  return p;
}

LawProbe arithmetization_probe(const MeanSpec& s, const ScalarMap& phi, const SearchOptions& opts, bool commuting) {
  LawProbe p = mean_probe("arithmetization", s);
  p.context["phi"] = spec_string(phi);
  p.context["commuting"] = commuting ? "1" : "0";
  if (commuting) {
    p.perturbation = Perturbation::None;
    p.sample = [opts](Rng& rng, std::size_t n) {
      const CMatrix u = random_unitary(rng, n);
      LawInstance inst;
      inst.add("A", random_pd_in_basis(rng, u, opts.spectrum_lo, opts.spectrum_hi).hermitian());
      inst.add("B", random_pd_in_basis(rng, u, opts.spectrum_lo, opts.spectrum_hi).hermitian());
      return inst;
    };
  } else {
    p.sample = pd_sampler({"A", "B"}, opts);
  }
  p.residual = [s, phi](const LawInstance& in) {
    const PositiveMatrix a = in.positive("A"), b = in.positive("B");
    const HermitianMatrix mid = (apply_map(a, phi) + apply_map(b, phi)) * 0.5;
    return relative_residual(mid, apply_map(ka_mean(s, a, b), phi));
  };
  return p;
}

PositiveMatrix geo_transform(const ScalarMap& phi, const PositiveMatrix& a, const PositiveMatrix& b) {
  const PositiveMatrix g = ka_mean(geometric_mean(), positive_image(a, phi), positive_image(b, phi));
  return PositiveMatrix(apply_map_inverse(g, phi));
}

LawProbe geo_transform_probe(const ScalarMap& phi, const SearchOptions& opts) {
  LawProbe p;
  p.law = "geo-transform";
  p.mean = "tau:" + phi.label();
  p.context = {{"phi", spec_string(phi)}};
  p.perturbation = Perturbation::Joint;
  const SearchOptions g = geo_options(opts);
  p.sample = [g](Rng& rng, std::size_t n) {
    LawInstance inst;
    const PositiveMatrix a = sample_pd(rng, n, g);
    const PositiveMatrix b = sample_pd(rng, n, g);
    const double span = g.spectrum_hi - g.spectrum_lo;
    inst.add("A", a.hermitian());
    inst.add("B", b.hermitian());
    inst.add("C", a.hermitian() + random_psd(rng, n, 1, log_uniform(rng, 1e-2, 1.0) * span));
    inst.add("D", b.hermitian());
    return inst;
  };
  p.residual = [phi](const LawInstance& in) {
    return loewner_violation(geo_transform(phi, in.positive("A"), in.positive("B")),
                             geo_transform(phi, in.positive("C"), in.positive("D")));
  };
  return p;
}

LawProbe geo_transform_deviation_probe(const ScalarMap& phi, const SearchOptions& opts) {
  LawProbe p;
  p.law = "geo-transform-deviation";
  p.mean = "tau:" + phi.label();
  p.context = {{"phi", spec_string(phi)}};
  p.perturbation = Perturbation::None;
  p.sample = pd_sampler({"A", "B"}, geo_options(opts));
  p.residual = [phi](const LawInstance& in) {
    const PositiveMatrix a = in.positive("A"), b = in.positive("B");
    return relative_residual(ka_mean(geometric_mean(), a, b), geo_transform(phi, a, b));
  };
  return p;
}

LawReport mediality_check(const MeanSpec& s, const SearchOptions& opts) {
  return run_probe(mediality_probe(s, opts), opts);
}
LawReport restricted_assoc_check(const MeanSpec& s, const ScalarMap& g, const SearchOptions& opts) {
  return run_probe(restricted_assoc_probe(s, g, opts), opts);
}
LawReport global_assoc_check(const MeanSpec& s, const ScalarMap& g, const SearchOptions& opts) {
  return run_probe(global_assoc_probe(s, g, opts), opts);
}
LawReport two_var_law_check(const MeanSpec& s, const SearchOptions& opts) {
  return run_probe(two_var_law_probe(s, opts), opts);
}
LawReport arithmetization_check(const MeanSpec& s, const ScalarMap& phi, const SearchOptions& opts, bool commuting) {
  return run_probe(arithmetization_probe(s, phi, opts, commuting), opts);
}

GeoTransformReport geo_transform_check(const ScalarMap& phi, const SearchOptions& opts) {
  return {run_probe(geo_transform_probe(phi, opts), opts), run_probe(geo_transform_deviation_probe(phi, opts), opts)};
}

NormOrderResult norm_order_check(const PositiveMatrix& a, const PositiveMatrix& b, std::size_t samples, double tol,
                                 std::uint64_t seed) {
  require_same_dim(a.dim(), b.dim(), "norm_order_check");
  const std::size_t n = a.dim();
  NormOrderResult res;
  const auto probe = [&](const PositiveMatrix& x) {
    const double na = operator_norm(ka_mean(geometric_mean(), a, x));
    const double nb = operator_norm(ka_mean(geometric_mean(), b, x));
    const double excess = (na - nb) / (1.0 + nb);
    ++res.samples;
    res.max_excess = std::max(res.max_excess, excess);
    if (excess > tol && !res.witness) res.witness = x.hermitian();
  };
  const EigenDecomposition e = eigh(a.inverse() - b.inverse());
  std::vector<cplx> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = e.vectors(i, 0);
  probe(PositiveMatrix(HermitianMatrix::outer(h) + HermitianMatrix::scalar(n, 1e-6)));
  Rng rng = trial_rng(seed, 0, 2);
  while (res.samples < samples) probe(random_pd(rng, n, 1e-4, 1.0));
  return res;
}

LawProbe norm_order_probe(const SearchOptions& opts, std::size_t samples) {
  LawProbe p;
  p.law = "norm-order";
  p.mean = "geom";
  p.context = {{"samples", std::to_string(samples)}};
  p.perturbation = Perturbation::None;
  p.sample = [opts](Rng& rng, std::size_t n) {
    LawInstance inst;
    const PositiveMatrix a = sample_pd(rng, n, opts);
    inst.add("A", a.hermitian());
    inst.add("B", a.hermitian() + random_psd(rng, n, 1 + static_cast<std::size_t>(uniform(rng, 0.0, n - 0.5)),
                                             log_uniform(rng, 1e-2, 1e2)));
    inst.params["x_seed"] = std::floor(uniform(rng, 0.0, 4294967296.0));
    return inst;
  };
  p.residual = [samples](const LawInstance& in) {
    return norm_order_check(in.positive("A"), in.positive("B"), samples, 0.0,
                            static_cast<std::uint64_t>(in.param("x_seed")))
        .max_excess;
  };
  return p;
}

namespace {

const std::string& need(const ProbeContext& ctx, const std::string& key) {
  const auto it = ctx.find(key);
  if (it == ctx.end()) throw InvalidArgument("witness context lacks '" + key + "'");
  return it->second;
}

}  // namespace

LawProbe probe_for(const std::string& law, const ProbeContext& ctx, const SearchOptions& opts) {
  const auto mean = [&] { return MeanSpec::parse(need(ctx, "mean")); };
  const auto map = [&](const char* key) { return ScalarMap::parse(need(ctx, key)); };
  const auto evaluator = [&] { return parse_evaluator(need(ctx, "evaluator")); };
  if (law == "axiom-a") return monotonicity_probe(mean(), opts);
  if (law == "axiom-b") return transformer_probe(mean(), opts);
  if (law == "axiom-b-eq") return congruence_probe(mean(), opts);
  if (law == "normalization") return normalization_probe(mean());
  if (law == "continuity") return continuity_probe(mean(), opts);
  if (law == "opmono") return opmono_probe(RepFn::parse(need(ctx, "fn")), opts);
  if (law == "transpose-law") return transpose_law_probe(mean(), opts);
  if (law == "adjoint-law") return adjoint_law_probe(mean(), opts);
  if (law == "riccati") return riccati_probe(opts);
  if (law == "harmonic-formula") return harmonic_formula_probe(opts);
  if (law == "arithmetic-formula") return arithmetic_formula_probe(opts);
  if (law == "scalar-slice") return scalar_slice_probe(mean(), opts);
  if (law == "strength-oracle") return strength_oracle_probe(opts);
  if (law == "strength-order") return strength_order_probe(opts);
  if (law == "e36") return e36_probe(mean(), opts);
  if (law == "qa-i") return qa_idempotent_probe(evaluator(), opts);
  if (law == "qa-ii") return qa_symmetric_probe(evaluator(), opts);
  if (law == "qa-iii-fwd") return qa_order_forward_probe(evaluator(), map("phi"), opts);
  if (law == "qa-iii-rev") return qa_order_reverse_probe(evaluator(), map("phi"), opts);
  if (law == "qa-iii-onto") return qa_onto_probe(evaluator(), opts);
  if (law == "mediality") return mediality_probe(mean(), opts);
  if (law == "e65") return restricted_assoc_probe(mean(), map("g"), opts);
  if (law == "assoc") return global_assoc_probe(mean(), map("g"), opts);
  if (law == "e71") return two_var_law_probe(mean(), opts);
  if (law == "arithmetization") return arithmetization_probe(mean(), map("phi"), opts, need(ctx, "commuting") == "1");
  if (law == "geo-transform") return geo_transform_probe(map("phi"), opts);
  if (law == "geo-transform-deviation") return geo_transform_deviation_probe(map("phi"), opts);
  if (law == "norm-order") return norm_order_probe(opts, std::stoul(need(ctx, "samples")));
  throw InvalidArgument("unknown law '" + law + "'");
}

double replay(const Counterexample& cx) {
  return replay_residual(probe_for(cx.law, cx.context, recorded_options(cx)), cx);
}

}  // namespace opmeans
