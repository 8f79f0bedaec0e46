#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "opmeans/harness.hpp"
#include "opmeans/hermitian.hpp"
#include "opmeans/scalar_funcs.hpp"

namespace opmeans {

// A Kubo-Ando mean given by its representing function.
struct MeanSpec {
  RepFn f;
  std::string label;

  static MeanSpec of(RepFn f);
  // Anything RepFn::parse accepts.
  static MeanSpec parse(std::string_view spec);
  std::string spec() const { return spec_string(f); }
};

MeanSpec transpose_mean(const MeanSpec& s);
MeanSpec adjoint_mean(const MeanSpec& s);

// arith, harm, geom, power:0.5, power:-0.5
std::vector<MeanSpec> builtin_means();
// f(0+) == 0, the condition under which a mean sends (A, P) to a multiple of P.
bool vanishes_at_zero(const RepFn& f);

// A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}. Throws DomainError if A or B is
// numerically singular. When A is badly conditioned (cond > 1e8) and B is
// better, B sigma' A is evaluated instead.
PositiveMatrix ka_mean(const MeanSpec& s, const PositiveMatrix& a, const PositiveMatrix& b);

// Same formula with f extended to 0 by f(0+); B may be singular.
// Eigenvalues of A^{-1/2} B A^{-1/2} at or below kPsdTol * lambda_max count
// as zero. Throws DomainError if f has no finite limit at 0.
HermitianMatrix ka_mean_ext(const MeanSpec& s, const PositiveMatrix& a, const PsdMatrix& b);

// Probes. Residuals are normalized so a single tolerance applies.
LawProbe monotonicity_probe(const MeanSpec& s, const SearchOptions& opts);     // axiom-a
LawProbe transformer_probe(const MeanSpec& s, const SearchOptions& opts);      // axiom-b
LawProbe congruence_probe(const MeanSpec& s, const SearchOptions& opts);       // axiom-b-eq
LawProbe normalization_probe(const MeanSpec& s);                               // normalization
LawProbe continuity_probe(const MeanSpec& s, const SearchOptions& opts);       // continuity
LawProbe opmono_probe(const RepFn& f, const SearchOptions& opts);              // opmono
LawProbe transpose_law_probe(const MeanSpec& s, const SearchOptions& opts);    // transpose-law
LawProbe adjoint_law_probe(const MeanSpec& s, const SearchOptions& opts);      // adjoint-law
LawProbe riccati_probe(const SearchOptions& opts);                             // riccati
LawProbe harmonic_formula_probe(const SearchOptions& opts);                    // harmonic-formula
LawProbe arithmetic_formula_probe(const SearchOptions& opts);                  // arithmetic-formula
LawProbe scalar_slice_probe(const MeanSpec& s, const SearchOptions& opts);     // scalar-slice

inline constexpr double kNormalizationTol = 1e-12;

struct AxiomReport {
  std::vector<LawReport> laws;  // axiom-a, axiom-b, axiom-b-eq, normalization, continuity
  bool passed() const;
};

// opts.tol applies to (a), (b) and the congruence equality; normalization
// uses kNormalizationTol.
AxiomReport verify_axioms(const MeanSpec& s, const SearchOptions& opts);

// First pair A <= B with f(A) not <= f(B), refined, or nothing after
// opts.trials.
std::optional<Counterexample> opmono_falsify(const RepFn& f, const SearchOptions& opts);

}  // namespace opmeans
