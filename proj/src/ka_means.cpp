#include "opmeans/ka_means.hpp"

#include <algorithm>
#include <cmath>

#include "opmeans/errors.hpp"

namespace opmeans {

MeanSpec MeanSpec::of(RepFn f) {
  std::string label = f.label();
  return MeanSpec{std::move(f), std::move(label)};
}

MeanSpec MeanSpec::parse(std::string_view spec) { return of(RepFn::parse(spec)); }

MeanSpec transpose_mean(const MeanSpec& s) { return MeanSpec::of(transpose_repfn(s.f)); }
MeanSpec adjoint_mean(const MeanSpec& s) { return MeanSpec::of(adjoint_repfn(s.f)); }

std::vector<MeanSpec> builtin_means() {
  return {MeanSpec::of(RepFn::arithmetic()), MeanSpec::of(RepFn::harmonic()),
          MeanSpec::of(RepFn::geometric()), MeanSpec::of(RepFn::power(0.5)),
          MeanSpec::of(RepFn::power(-0.5))};
}

bool vanishes_at_zero(const RepFn& f) {
  try {
    return limit_at_zero(f) == 0.0;
  } catch (const DomainError&) {
    return false;
  }
}

namespace {

void require_nonsingular(const PositiveMatrix& m, const char* which) {
  if (m.min_eigenvalue() <= kPsdTol * m.hermitian().frobenius())
    throw DomainError(std::string("mean: ") + which + " is numerically singular");
}

constexpr double kConditionSwitch = 1e8;

}  // namespace

PositiveMatrix ka_mean(const MeanSpec& s, const PositiveMatrix& a, const PositiveMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "ka_mean");
  require_nonsingular(a, "first argument");
  require_nonsingular(b, "second argument");
  if (a.condition() > kConditionSwitch && b.condition() < a.condition())
    return ka_mean(transpose_mean(s), b, a);
  const HermitianMatrix z = congruence(a.inv_sqrt().matrix(), b);
  const HermitianMatrix fz = apply_fn(z, [&](double t) { return s.f(t); });
  return PositiveMatrix(congruence(a.sqrt().matrix(), fz));
}

HermitianMatrix ka_mean_ext(const MeanSpec& s, const PositiveMatrix& a, const PsdMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "ka_mean_ext");
  require_nonsingular(a, "first argument");
  const EigenDecomposition z = eigh(congruence(a.inv_sqrt().matrix(), b));
  const double cut = kPsdTol * std::max(z.max(), 0.0);
  std::optional<double> f0;
  const HermitianMatrix fz = apply_fn(z, [&](double t) {
    if (t > cut && t > 0.0) return s.f(t);
    if (!f0) f0 = limit_at_zero(s.f);
    return *f0;
  });
  return congruence(a.sqrt().matrix(), fz);
}

namespace {

ProbeContext mean_context(const MeanSpec& s) { return {{"mean", s.spec()}}; }

LawProbe base_probe(std::string law, const MeanSpec& s) {
  LawProbe p;
  p.law = std::move(law);
  p.mean = s.label;
  p.context = mean_context(s);
  return p;
}

double psd_scale(Rng& rng) { return log_uniform(rng, 1e-2, 1e2); }

std::size_t random_rank(Rng& rng, std::size_t n) {
  return 1 + static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(n)) * 0.999999);
}

// A, B positive definite.
std::function<LawInstance(Rng&, std::size_t)> pair_sampler(const SearchOptions& opts) {
  return [opts](Rng& rng, std::size_t n) {
    LawInstance inst;
    inst.add("A", sample_pd(rng, n, opts).hermitian());
    inst.add("B", sample_pd(rng, n, opts).hermitian());
    return inst;
  };
}

}  // namespace

LawProbe monotonicity_probe(const MeanSpec& s, const SearchOptions& opts) {
  LawProbe p = base_probe("axiom-a", s);
  p.perturbation = Perturbation::Joint;
  p.sample = [opts](Rng& rng, std::size_t n) {
    LawInstance inst;
    const PositiveMatrix a = sample_pd(rng, n, opts);
    const PositiveMatrix b = sample_pd(rng, n, opts);
    const HermitianMatrix c = a.hermitian() + random_psd(rng, n, random_rank(rng, n), psd_scale(rng));
    const HermitianMatrix d = b.hermitian() + random_psd(rng, n, random_rank(rng, n), psd_scale(rng));
    inst.add("A", a.hermitian());
    inst.add("B", b.hermitian());
    inst.add("C", c);
    inst.add("D", d);
    return inst;
  };
  p.residual = [s](const LawInstance& in) {
    return scaled_loewner_violation(ka_mean(s, in.positive("A"), in.positive("B")),
                             ka_mean(s, in.positive("C"), in.positive("D")));
  };
  return p;
}

LawProbe transformer_probe(const MeanSpec& s, const SearchOptions& opts) {
  LawProbe p = base_probe("axiom-b", s);
  p.sample = [opts](Rng& rng, std::size_t n) {
    LawInstance inst;
    inst.add("A", sample_pd(rng, n, opts).hermitian());
    inst.add("B", sample_pd(rng, n, opts).hermitian());
    inst.add("C", random_invertible_hermitian(rng, n, 0.3, 3.0));
    return inst;
  };
  p.residual = [s](const LawInstance& in) {
    const CMatrix& c = in.at("C");
    const HermitianMatrix lhs = congruence(c, ka_mean(s, in.positive("A"), in.positive("B")));
    const HermitianMatrix rhs = ka_mean(s, PositiveMatrix(congruence(c, in.hermitian("A"))),
                                        PositiveMatrix(congruence(c, in.hermitian("B"))));
    return scaled_loewner_violation(lhs, rhs);
  };
  return p;
}

LawProbe congruence_probe(const MeanSpec& s, const SearchOptions& opts) {
  LawProbe p = base_probe("axiom-b-eq", s);
  p.sample = [opts](Rng& rng, std::size_t n) {
    LawInstance inst;
    inst.add("A", sample_pd(rng, n, opts).hermitian());
    inst.add("B", sample_pd(rng, n, opts).hermitian());
    inst.add("C", random_invertible(rng, n, 0.3, 3.0));
    return inst;
  };
  p.residual = [s](const LawInstance& in) {
    const CMatrix& c = in.at("C");
    const HermitianMatrix lhs = congruence(c, ka_mean(s, in.positive("A"), in.positive("B")));
    const HermitianMatrix rhs = ka_mean(s, PositiveMatrix(congruence(c, in.hermitian("A"))),
                                        PositiveMatrix(congruence(c, in.hermitian("B"))));
    return relative_residual(lhs, rhs);
  };
  return p;
}

LawProbe normalization_probe(const MeanSpec& s) {
  LawProbe p = base_probe("normalization", s);
  p.perturbation = Perturbation::None;
  p.sample = [](Rng&, std::size_t n) {
    LawInstance inst;
    inst.add("I", HermitianMatrix::identity(n));
    return inst;
  };
  p.residual = [s](const LawInstance& in) {
    const PositiveMatrix i = in.positive("I");
    return (ka_mean(s, i, i).hermitian() - i.hermitian()).frobenius();
  };
  return p;
}

LawProbe continuity_probe(const MeanSpec& s, const SearchOptions& opts) {
  LawProbe p = base_probe("continuity", s);
  p.perturbation = Perturbation::Joint;
  p.sample = [opts](Rng& rng, std::size_t n) {
    LawInstance inst;
    inst.add("A", sample_pd(rng, n, opts).hermitian());
    inst.add("B", random_psd(rng, n, n - 1, psd_scale(rng)));
    return inst;
  };
  // Downward continuity: A sigma (B + eps I) decreases to A sigma B as eps
  // decreases, and the distance to the limit shrinks with eps.
  p.residual = [s](const LawInstance& in) {
    const PositiveMatrix a = in.positive("A");
    const HermitianMatrix b = in.hermitian("B");
    const std::size_t n = b.dim();
    const HermitianMatrix m0 = ka_mean_ext(s, a, PsdMatrix(b));
    const double eps[] = {1e-8, 1e-6, 1e-4};
    std::vector<HermitianMatrix> m;
    std::vector<double> d;
    for (double e : eps) {
      m.push_back(ka_mean_ext(s, a, PsdMatrix(b + HermitianMatrix::scalar(n, e))));
      d.push_back((m.back() - m0).frobenius());
    }
    const double scale = 1.0 + m0.frobenius();
    double r = std::max({0.0, (d[0] - d[1]) / scale, (d[1] - d[2]) / scale});
    // At eps = 1e-8 the step is at the noise level of the evaluation, so the
    // order is only compared from 1e-6 up.
    r = std::max(r, scaled_loewner_violation(m0, m[1]));
    r = std::max(r, scaled_loewner_violation(m[1], m[2]));
    return r;
  };
  return p;
}

LawProbe opmono_probe(const RepFn& f, const SearchOptions& opts) {
  LawProbe p;
  p.law = "opmono";
  p.mean = f.label();
  p.context = {{"fn", spec_string(f)}};
  p.perturbation = Perturbation::Joint;
  p.sample = [opts](Rng& rng, std::size_t n) {
    LawInstance inst;
    const PositiveMatrix a = sample_pd(rng, n, opts);
    inst.add("A", a.hermitian());
    inst.add("B", a.hermitian() + random_psd(rng, n, 1, psd_scale(rng)));
    return inst;
  };
  p.residual = [f](const LawInstance& in) {
    const ScalarFn fn = [&](double t) { return f(t); };
    return loewner_violation(apply_fn(in.positive("A").eigen(), fn), apply_fn(in.positive("B").eigen(), fn));
  };
  return p;
}

LawProbe transpose_law_probe(const MeanSpec& s, const SearchOptions& opts) {
  LawProbe p = base_probe("transpose-law", s);
  p.sample = pair_sampler(opts);
  const MeanSpec t = transpose_mean(s);
  p.residual = [s, t](const LawInstance& in) {
    const PositiveMatrix a = in.positive("A");
    const PositiveMatrix b = in.positive("B");
    return relative_residual(ka_mean(s, b, a), ka_mean(t, a, b));
  };
  return p;
}

LawProbe adjoint_law_probe(const MeanSpec& s, const SearchOptions& opts) {
  LawProbe p = base_probe("adjoint-law", s);
  p.sample = pair_sampler(opts);
  const MeanSpec adj = adjoint_mean(s);
  p.residual = [s, adj](const LawInstance& in) {
    const PositiveMatrix a = in.positive("A");
    const PositiveMatrix b = in.positive("B");
    const PositiveMatrix inner = ka_mean(s, PositiveMatrix(a.inverse()), PositiveMatrix(b.inverse()));
    return relative_residual(inner.inverse(), ka_mean(adj, a, b));
  };
  return p;
}

LawProbe riccati_probe(const SearchOptions& opts) {
  const MeanSpec g = MeanSpec::of(RepFn::geometric());
  LawProbe p = base_probe("riccati", g);
  p.sample = pair_sampler(opts);
  p.residual = [g](const LawInstance& in) {
    const PositiveMatrix a = in.positive("A");
    const HermitianMatrix b = in.hermitian("B");
    const PositiveMatrix gm = ka_mean(g, a, in.positive("B"));
    return (congruence(gm.hermitian().matrix(), a.inverse()) - b).frobenius() / b.frobenius();
  };
  return p;
}

LawProbe harmonic_formula_probe(const SearchOptions& opts) {
  const MeanSpec h = MeanSpec::of(RepFn::harmonic());
  LawProbe p = base_probe("harmonic-formula", h);
  p.sample = pair_sampler(opts);
  p.residual = [h](const LawInstance& in) {
    const PositiveMatrix a = in.positive("A");
    const PositiveMatrix b = in.positive("B");
    const HermitianMatrix closed = PositiveMatrix(a.inverse() + b.inverse()).inverse() * 2.0;
    return relative_residual(closed, ka_mean(h, a, b));
  };
  return p;
}

LawProbe arithmetic_formula_probe(const SearchOptions& opts) {
  const MeanSpec m = MeanSpec::of(RepFn::arithmetic());
  LawProbe p = base_probe("arithmetic-formula", m);
  p.sample = pair_sampler(opts);
  p.residual = [m](const LawInstance& in) {
    const PositiveMatrix a = in.positive("A");
    const PositiveMatrix b = in.positive("B");
    return relative_residual((a.hermitian() + b.hermitian()) * 0.5, ka_mean(m, a, b));
  };
  return p;
}

LawProbe scalar_slice_probe(const MeanSpec& s, const SearchOptions& opts) {
  LawProbe p = base_probe("scalar-slice", s);
  p.perturbation = Perturbation::None;
  p.sample = [opts](Rng& rng, std::size_t n) {
    LawInstance inst;
    inst.add("I", HermitianMatrix::identity(n));
    inst.params["t"] = log_uniform(rng, opts.spectrum_lo, opts.spectrum_hi);
    inst.params["s"] = log_uniform(rng, opts.spectrum_lo, opts.spectrum_hi);
    return inst;
  };
  p.residual = [s](const LawInstance& in) {
    const std::size_t n = in.dim();
    const double t = in.param("t");
    const double u = in.param("s");
    const PositiveMatrix ti(HermitianMatrix::scalar(n, t));
    const PositiveMatrix si(HermitianMatrix::scalar(n, u));
    return relative_residual(HermitianMatrix::scalar(n, t * s.f(u / t)), ka_mean(s, ti, si));
  };
  return p;
}

bool AxiomReport::passed() const {
  return std::all_of(laws.begin(), laws.end(),
                     [](const LawReport& r) { return r.verdict == Verdict::HoldsAtTolerance; });
}

AxiomReport verify_axioms(const MeanSpec& s, const SearchOptions& opts) {
  AxiomReport rep;
  rep.laws.push_back(run_probe(monotonicity_probe(s, opts), opts));
  rep.laws.push_back(run_probe(transformer_probe(s, opts), opts));
  rep.laws.push_back(run_probe(congruence_probe(s, opts), opts));
  SearchOptions norm = opts;
  norm.tol = kNormalizationTol;
  norm.trials = std::min<std::size_t>(opts.trials, opts.dim_hi - opts.dim_lo + 1);
  rep.laws.push_back(run_probe(normalization_probe(s), norm));
  rep.laws.push_back(run_probe(continuity_probe(s, opts), opts));
  return rep;
}

std::optional<Counterexample> opmono_falsify(const RepFn& f, const SearchOptions& opts) {
  SearchOptions o = opts;
  o.stop_at_first = true;
  o.max_witnesses = 1;
  const LawReport rep = run_probe(opmono_probe(f, o), o);
  if (rep.failures.empty()) return std::nullopt;
  return rep.failures.front();
}

}  // namespace opmeans
