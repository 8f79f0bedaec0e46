#include "opmeans/qa_means.hpp"

#include <algorithm>
#include <cmath>

#include "opmeans/errors.hpp"

namespace opmeans {

QaSpec::QaSpec(ScalarMap phi) : phi_(std::move(phi)) {
  for (double t : standard_grid()) {
    double y;
    try {
      y = phi_(t);
    } catch (const DomainError&) {
      continue;
    }
    double back;
    try {
      back = phi_.inverse(y);
    } catch (const DomainError&) {
      continue;  // phi(t) overflowed to the edge of the range
    }
    if (std::abs(back - t) > 1e-12 * (1.0 + t))
      throw InvalidArgument("scalar map " + phi_.label() + " does not round-trip through its inverse");
  }
}

PositiveMatrix qa_mean(const QaSpec& q, const PositiveMatrix& a, const PositiveMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "qa_mean");
  const ScalarFn f = [&](double t) { return q.phi()(t); };
  const HermitianMatrix mid = (apply_fn(a.eigen(), f) + apply_fn(b.eigen(), f)) * 0.5;
  return PositiveMatrix(apply_map_inverse(mid, q.phi()));
}

PositiveMatrix log_euclidean(const PositiveMatrix& a, const PositiveMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "log_euclidean");
  const HermitianMatrix mid = (a.log() + b.log()) * 0.5;
  return PositiveMatrix(apply_fn(mid, [](double t) { return std::exp(t); }));
}

namespace {

PositiveMatrix positive_or_range_error(HermitianMatrix h) {
  try {
    return PositiveMatrix(std::move(h));
  } catch (const DomainError& e) {
    throw InverseDomainError(std::string("preimage is not positive definite: ") + e.what());
  }
}

}  // namespace

MeanEvaluator ka_evaluator(const MeanSpec& s) {
  MeanEvaluator m;
  m.label = s.label;
  m.spec = s.spec();
  m.eval = [s](const PositiveMatrix& a, const PositiveMatrix& b) { return ka_mean(s, a, b); };
  // A sigma B = B sigma' A, so A = B^{1/2} f'^{-1}(B^{-1/2} Y B^{-1/2}) B^{1/2}.
  const RepFn ft = transpose_repfn(s.f);
  m.preimage = [ft](const PositiveMatrix& y, const PositiveMatrix& b) {
    const HermitianMatrix z = congruence(b.inv_sqrt().matrix(), y);
    HermitianMatrix w;
    try {
      w = apply_fn(z, [&](double t) { return invert_repfn(ft, t); });
    } catch (const InverseDomainError&) {
      throw;
    } catch (const DomainError& e) {
      throw InverseDomainError(e.what());
    }
    return positive_or_range_error(congruence(b.sqrt().matrix(), w));
  };
  return m;
}

MeanEvaluator qa_evaluator(const QaSpec& q) {
  MeanEvaluator m;
  m.label = "qa:" + q.phi().label();
  m.spec = "qa:" + spec_string(q.phi());
  m.eval = [q](const PositiveMatrix& a, const PositiveMatrix& b) { return qa_mean(q, a, b); };
  m.preimage = [q](const PositiveMatrix& y, const PositiveMatrix& b) {
    HermitianMatrix t = apply_map(y, q.phi()) * 2.0 - apply_map(b, q.phi());
    return positive_or_range_error(apply_map_inverse(t, q.phi()));
  };
  return m;
}

MeanEvaluator log_euclidean_evaluator() {
  MeanEvaluator m;
  m.label = "le";
  m.spec = "le";
  m.eval = [](const PositiveMatrix& a, const PositiveMatrix& b) { return log_euclidean(a, b); };
  m.preimage = [](const PositiveMatrix& y, const PositiveMatrix& b) {
    const HermitianMatrix t = y.log() * 2.0 - b.log();
    return PositiveMatrix(apply_fn(t, [](double x) { return std::exp(x); }));
  };
  return m;
}

MeanEvaluator parse_evaluator(std::string_view spec) {
  if (spec == "le") return log_euclidean_evaluator();
  if (spec.starts_with("qa:")) return qa_evaluator(QaSpec(ScalarMap::parse(spec.substr(3))));
  return ka_evaluator(MeanSpec::parse(spec));
}

namespace {

LawProbe qa_base(std::string law, const MeanEvaluator& m) {
  LawProbe p;
  p.law = std::move(law);
  p.mean = m.label;
  p.context = {{"evaluator", m.spec}};
  return p;
}

HermitianMatrix phi_image(const HermitianMatrix& h, const ScalarMap& phi) { return apply_map(h, phi); }

// phi(A) <= phi(A') in the order the characterization uses.
double phi_violation(const HermitianMatrix& x, const HermitianMatrix& y, const ScalarMap& phi) {
  return loewner_violation(phi_image(x, phi), phi_image(y, phi));
}

// Raises phi-image of X by a random positive semidefinite step; shrinks the
// step until the result is back in the domain.
HermitianMatrix raise_in_phi(Rng& rng, const HermitianMatrix& x, const ScalarMap& phi) {
  const std::size_t n = x.dim();
  const HermitianMatrix t = apply_map(x, phi);
  const double base = 1.0 + t.frobenius();
  double scale = log_uniform(rng, 1e-2, 1.0) * base;
  const std::size_t rank = 1 + static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(n)) * 0.999999);
  const HermitianMatrix step = random_psd(rng, n, rank, 1.0);
  for (int attempt = 0; attempt < 8; ++attempt, scale *= 0.1) {
    try {
      HermitianMatrix up = apply_map_inverse(t + step * scale, phi);
      if (min_eigenvalue(up) > 0.0) return up;
    } catch (const DomainError&) {
    }
  }
  throw DomainError("no admissible phi-order step");
}

}  // namespace

LawProbe qa_idempotent_probe(const MeanEvaluator& m, const SearchOptions& opts) {
  LawProbe p = qa_base("qa-i", m);
  p.sample = [opts](Rng& rng, std::size_t n) {
    LawInstance inst;
    inst.add("A", sample_pd(rng, n, opts).hermitian());
    return inst;
  };
  p.residual = [m](const LawInstance& in) {
    const PositiveMatrix a = in.positive("A");
    return relative_residual(a, m.eval(a, a));
  };
  return p;
}

LawProbe qa_symmetric_probe(const MeanEvaluator& m, const SearchOptions& opts) {
  LawProbe p = qa_base("qa-ii", m);
  p.sample = [opts](Rng& rng, std::size_t n) {
    LawInstance inst;
    inst.add("A", sample_pd(rng, n, opts).hermitian());
    inst.add("B", sample_pd(rng, n, opts).hermitian());
    return inst;
  };
  p.residual = [m](const LawInstance& in) {
    const PositiveMatrix a = in.positive("A");
    const PositiveMatrix b = in.positive("B");
    return relative_residual(m.eval(a, b), m.eval(b, a));
  };
  return p;
}

LawProbe qa_order_forward_probe(const MeanEvaluator& m, const ScalarMap& phi, const SearchOptions& opts) {
  LawProbe p = qa_base("qa-iii-fwd", m);
  p.context["phi"] = spec_string(phi);
  p.perturbation = phi.kind() == ScalarMap::Kind::Identity ? Perturbation::Joint : Perturbation::None;
  p.sample = [opts, phi](Rng& rng, std::size_t n) {
    LawInstance inst;
    const PositiveMatrix a = sample_pd(rng, n, opts);
    inst.add("A", a.hermitian());
    inst.add("A'", raise_in_phi(rng, a, phi));
    inst.add("B", sample_pd(rng, n, opts).hermitian());
    return inst;
  };
  // Only instances that satisfy the premise count.
  const double tol = opts.tol;
  p.residual = [m, phi, tol](const LawInstance& in) {
    const PositiveMatrix a = in.positive("A");
    const PositiveMatrix a2 = in.positive("A'");
    const PositiveMatrix b = in.positive("B");
    if (phi_violation(a, a2, phi) > tol) return 0.0;
    return phi_violation(m.eval(a, b), m.eval(a2, b), phi);
  };
  return p;
}

LawProbe qa_order_reverse_probe(const MeanEvaluator& m, const ScalarMap& phi, const SearchOptions& opts) {
  LawProbe p = qa_base("qa-iii-rev", m);
  p.context["phi"] = spec_string(phi);
  p.perturbation = Perturbation::None;
  // With a preimage, A' is built so that phi(M(A', B)) sits above phi(M(A, B));
  // otherwise A' is an independent draw and the premise is checked as is.
  p.sample = [opts, phi, m](Rng& rng, std::size_t n) {
    LawInstance inst;
    const PositiveMatrix a = sample_pd(rng, n, opts);
    const PositiveMatrix b = sample_pd(rng, n, opts);
    HermitianMatrix a2;
    if (m.preimage) {
      const PositiveMatrix y = m.eval(a, b);
      a2 = m.preimage(PositiveMatrix(raise_in_phi(rng, y, phi)), b).hermitian();
    } else {
      a2 = sample_pd(rng, n, opts).hermitian();
    }
    inst.add("A", a.hermitian());
    inst.add("A'", a2);
    inst.add("B", b.hermitian());
    return inst;
  };
  const double tol = opts.tol;
  p.residual = [m, phi, tol](const LawInstance& in) {
    const PositiveMatrix a = in.positive("A");
    const PositiveMatrix a2 = in.positive("A'");
    const PositiveMatrix b = in.positive("B");
    if (phi_violation(m.eval(a, b), m.eval(a2, b), phi) > tol) return 0.0;
    return phi_violation(a, a2, phi);
  };
  return p;
}

LawProbe qa_onto_probe(const MeanEvaluator& m, const SearchOptions& opts) {
  LawProbe p = qa_base("qa-iii-onto", m);
  p.perturbation = Perturbation::None;
  p.sample = [opts](Rng& rng, std::size_t n) {
    LawInstance inst;
    inst.add("Y", sample_pd(rng, n, opts).hermitian());
    inst.add("B", sample_pd(rng, n, opts).hermitian());
    return inst;
  };
  p.residual = [m](const LawInstance& in) {
    if (!m.preimage) throw DomainError("mean has no preimage map");
    const PositiveMatrix y = in.positive("Y");
    const PositiveMatrix b = in.positive("B");
    try {
      const PositiveMatrix a = m.preimage(y, b);
      return relative_residual(y, m.eval(a, b)) <= kOntoRoundTripTol ? 0.0 : 1.0;
    } catch (const InverseDomainError&) {
      return 1.0;
    }
  };
  return p;
}

bool QaAxiomsReport::passes() const {
  for (const LawReport* r : {&idempotent, &symmetric, &order_forward, &order_reverse})
    if (r->verdict != Verdict::HoldsAtTolerance) return false;
  return true;
}

std::vector<const LawReport*> QaAxiomsReport::all() const {
  return {&idempotent, &symmetric, &order_forward, &order_reverse, &onto};
}

std::string QaAxiomsReport::first_failure() const {
  for (const LawReport* r : all())
    if (r->verdict == Verdict::Falsified) return r->law;
  return {};
}

QaAxiomsReport qa_axioms_check(const MeanEvaluator& m, const ScalarMap& phi, const SearchOptions& opts) {
  QaAxiomsReport rep;
  rep.idempotent = run_probe(qa_idempotent_probe(m, opts), opts);
  rep.symmetric = run_probe(qa_symmetric_probe(m, opts), opts);
  rep.order_forward = run_probe(qa_order_forward_probe(m, phi, opts), opts);
  rep.order_reverse = run_probe(qa_order_reverse_probe(m, phi, opts), opts);
  rep.onto = run_probe(qa_onto_probe(m, opts), opts);
  return rep;
}

NonexReport nonex_probe(const MeanEvaluator& m, const SearchOptions& opts) {
  NonexReport rep;
  rep.suite = qa_axioms_check(m, ScalarMap::identity(), opts);
  rep.failing = rep.suite.first_failure();
  rep.witnessed = !rep.failing.empty();
  if (!rep.witnessed) rep.note = "inconclusive - increase trials";
  return rep;
}

}  // namespace opmeans
