#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "opmeans/harness.hpp"
#include "opmeans/ka_means.hpp"
#include "opmeans/law_lab.hpp"

namespace opmeans {

// What a run of a law is supposed to show. Findings are measured and
// reported but never gate the exit status.
enum class Expect { Hold, Fail, Finding };

std::string to_string(Expect e);
bool expectation_met(Expect e, Verdict v);

// Representing functions the characterization results single out.
enum class Family { Arithmetic, Harmonic, LeftTrivial, RightTrivial, Other };
Family family_of(const RepFn& f);
// Whether f is expected to be operator monotone; nothing if unknown.
std::optional<bool> expected_operator_monotone(const RepFn& f);

// Expected outcome of a law for the given probe context.
Expect expectation_for(const std::string& law, const ProbeContext& ctx);

// Default g for the associativity laws: arith -> scale:2, harm -> scale:0.5,
// geom -> square (assoc) or pow:2,2,0 (e65), power:p -> scale:2^(1/p) (assoc)
// or inv:power:p (e65).
std::optional<ScalarMap> default_g(const std::string& law, const MeanSpec& s);

struct SuiteConfig {
  std::string suite;  // axioms | duality | mediality | e65 | e71 | assoc | e36 | norm-order | qa | opmono | all
  std::optional<std::string> mean;
  std::optional<std::string> fn;
  std::optional<std::string> g;
  std::optional<std::string> phi;
  SearchOptions opts;
};

struct SuiteEntry {
  LawReport report;
  Expect expect = Expect::Finding;
  bool met() const { return expectation_met(expect, report.verdict); }
};

struct SuiteResult {
  std::vector<SuiteEntry> entries;
  bool all_met() const;
};

const std::vector<std::string>& suite_names();

// Throws InvalidArgument for an unknown suite or malformed specs and
// PreconditionError when the e36 suite is asked for a mean with f(0) != 0.
SuiteResult run_suite(const SuiteConfig& cfg);

nlohmann::json suite_report_json(const SuiteConfig& cfg, const SuiteResult& res);
std::string suite_report_csv(const SuiteResult& res);

// File name for a persisted witness: LAW__MEAN[__g-G][__phi-PHI]__sSEED__tTRIAL.json with
// characters outside [A-Za-z0-9._-] replaced by '_'.
std::string counterexample_filename(const Counterexample& cx);

}  // namespace opmeans
