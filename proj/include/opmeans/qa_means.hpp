#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "opmeans/harness.hpp"
#include "opmeans/hermitian.hpp"
#include "opmeans/ka_means.hpp"
#include "opmeans/scalar_funcs.hpp"

namespace opmeans {

// Quasi-arithmetic mean phi^{-1}((phi(A) + phi(B)) / 2).
class QaSpec {
 public:
  // Throws InvalidArgument unless phi round-trips to 1e-12 on the points of
  // the standard grid where it is defined.
  explicit QaSpec(ScalarMap phi);
  const ScalarMap& phi() const { return phi_; }

 private:
  ScalarMap phi_;
};

// Throws InverseDomainError when the midpoint leaves the range of phi.
PositiveMatrix qa_mean(const QaSpec& q, const PositiveMatrix& a, const PositiveMatrix& b);
// exp((log A + log B) / 2)
PositiveMatrix log_euclidean(const PositiveMatrix& a, const PositiveMatrix& b);

// Any two-argument mean. `preimage(Y, B)`, when present, solves M(A, B) = Y
// for A and throws InverseDomainError when no positive definite solution
// exists.
struct MeanEvaluator {
  std::string label;
  std::string spec;
  std::function<PositiveMatrix(const PositiveMatrix&, const PositiveMatrix&)> eval;
  std::function<PositiveMatrix(const PositiveMatrix&, const PositiveMatrix&)> preimage;
};

MeanEvaluator ka_evaluator(const MeanSpec& s);
MeanEvaluator qa_evaluator(const QaSpec& q);
MeanEvaluator log_euclidean_evaluator();
// arith | harm | geom | power:P | mono:Q | qa:MAP | le
MeanEvaluator parse_evaluator(std::string_view spec);

// Probes for the characterization of quasi-arithmetic means. Order claims
// compare phi-images; for decreasing phi that is the reversed order on the
// matrices themselves.
LawProbe qa_idempotent_probe(const MeanEvaluator& m, const SearchOptions& opts);                        // qa-i
LawProbe qa_symmetric_probe(const MeanEvaluator& m, const SearchOptions& opts);                         // qa-ii
LawProbe qa_order_forward_probe(const MeanEvaluator& m, const ScalarMap& phi, const SearchOptions& opts);  // qa-iii-fwd
LawProbe qa_order_reverse_probe(const MeanEvaluator& m, const ScalarMap& phi, const SearchOptions& opts);  // qa-iii-rev
// Residual 1 when Y has no preimage under A -> M(A, B), 0 otherwise. The
// preimage of an ill-conditioned Y is itself ill-conditioned, so the round
// trip only has to agree to kOntoRoundTripTol.
LawProbe qa_onto_probe(const MeanEvaluator& m, const SearchOptions& opts);                              // qa-iii-onto
inline constexpr double kOntoRoundTripTol = 1e-4;

struct QaAxiomsReport {
  LawReport idempotent;
  LawReport symmetric;
  LawReport order_forward;
  LawReport order_reverse;
  // B fixed, A -> M(A, B) onto the cone. Sampled only when M has a preimage.
  LawReport onto;

  // (i), (ii) and both directions of (iii).
  bool passes() const;
  // The failing property of the first failing check, empty if none.
  std::string first_failure() const;
  std::vector<const LawReport*> all() const;
};

QaAxiomsReport qa_axioms_check(const MeanEvaluator& m, const ScalarMap& phi, const SearchOptions& opts);

struct NonexReport {
  QaAxiomsReport suite;
  bool witnessed = false;  // some condition failed, onto included
  std::string failing;     // law id of the first failure
  std::string note;        // "inconclusive - increase trials" without a witness
};

// qa_axioms_check with phi = identity. With the usual order no mean satisfies
// all conditions, so every candidate should produce a witness.
NonexReport nonex_probe(const MeanEvaluator& m, const SearchOptions& opts);

}  // namespace opmeans
