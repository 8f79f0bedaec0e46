#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opmeans/harness.hpp"
#include "opmeans/ka_means.hpp"
#include "opmeans/qa_means.hpp"
#include "opmeans/scalar_funcs.hpp"

namespace opmeans {

// X sigma_g Y = g(X sigma Y)
PositiveMatrix diamond(const MeanSpec& s, const ScalarMap& g, const PositiveMatrix& x, const PositiveMatrix& y);

// (A s B) s (C s D) = (A s C) s (B s D)
LawProbe mediality_probe(const MeanSpec& s, const SearchOptions& opts);                          // mediality
// (A <> I) <> B = A <> (I <> B)
LawProbe restricted_assoc_probe(const MeanSpec& s, const ScalarMap& g, const SearchOptions& opts);  // e65
// (A <> B) <> C = A <> (B <> C)
LawProbe global_assoc_probe(const MeanSpec& s, const ScalarMap& g, const SearchOptions& opts);      // assoc
// (A s A) s (I s B) = (A s I) s (A s B)
LawProbe two_var_law_probe(const MeanSpec& s, const SearchOptions& opts);                        // e71
// phi(A s B) = (phi(A) + phi(B)) / 2
LawProbe arithmetization_probe(const MeanSpec& s, const ScalarMap& phi, const SearchOptions& opts,
                               bool commuting = false);                                          // arithmetization
// A <= C, B <= D  =>  tau(A, B) <= tau(C, D) for tau = phi^{-1}(phi(A) # phi(B))
LawProbe geo_transform_probe(const ScalarMap& phi, const SearchOptions& opts);                   // geo-transform
// |tau(A, B) - A # B|, a measurement rather than a law
LawProbe geo_transform_deviation_probe(const ScalarMap& phi, const SearchOptions& opts);         // geo-transform-deviation
// A <= B  =>  |A # X| <= |B # X| over sampled X
LawProbe norm_order_probe(const SearchOptions& opts, std::size_t samples = 200);                 // norm-order

LawReport mediality_check(const MeanSpec& s, const SearchOptions& opts);
LawReport restricted_assoc_check(const MeanSpec& s, const ScalarMap& g, const SearchOptions& opts);
LawReport global_assoc_check(const MeanSpec& s, const ScalarMap& g, const SearchOptions& opts);
LawReport two_var_law_check(const MeanSpec& s, const SearchOptions& opts);
LawReport arithmetization_check(const MeanSpec& s, const ScalarMap& phi, const SearchOptions& opts,
                                bool commuting = false);

struct GeoTransformReport {
  LawReport monotonicity;
  LawReport deviation;
};
GeoTransformReport geo_transform_check(const ScalarMap& phi, const SearchOptions& opts);

// tau(A, B) = phi^{-1}(phi(A) # phi(B))
PositiveMatrix geo_transform(const ScalarMap& phi, const PositiveMatrix& a, const PositiveMatrix& b);

struct NormOrderResult {
  std::size_t samples = 0;
  // max over X of (|A # X| - |B # X|) / (1 + |B # X|), clipped at 0
  double max_excess = 0.0;
  // X with |A # X| > |B # X| beyond tol; certifies that A <= B fails.
  std::optional<HermitianMatrix> witness;
  bool certifies_not_leq() const { return witness.has_value(); }
};

// Samples X positive definite with spectra in [1e-4, 1], preceded by the
// guided candidate X = h h^* + 1e-6 I with h the bottom eigenvector of
// A^{-1} - B^{-1}.
NormOrderResult norm_order_check(const PositiveMatrix& a, const PositiveMatrix& b, std::size_t samples,
                                 double tol, std::uint64_t seed);

// Rebuilds the probe a witness came from. Throws InvalidArgument for an
// unknown law id or missing context.
LawProbe probe_for(const std::string& law, const ProbeContext& ctx, const SearchOptions& opts);
double replay(const Counterexample& cx);

}  // namespace opmeans
