#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "opmeans/hermitian.hpp"
#include "opmeans/random.hpp"

namespace opmeans {

enum class Verdict { HoldsAtTolerance, Falsified, Inconclusive };

std::string to_string(Verdict v);

struct NamedMatrix {
  std::string name;
  CMatrix value;
};

// The concrete inputs of one trial of a law.
struct LawInstance {
  std::vector<NamedMatrix> matrices;
  std::map<std::string, double> params;

  void add(std::string name, const CMatrix& m) { matrices.push_back({std::move(name), m}); }
  void add(std::string name, const HermitianMatrix& h) { add(std::move(name), h.matrix()); }
  const CMatrix& at(std::string_view name) const;
  HermitianMatrix hermitian(std::string_view name) const;
  PositiveMatrix positive(std::string_view name) const;
  double param(std::string_view name) const;
  std::size_t dim() const { return matrices.empty() ? 0 : matrices.front().value.dim(); }
};

// Context strings identify the law's subject (mean, maps, ...) well enough to
// rebuild the probe from a persisted witness.
using ProbeContext = std::map<std::string, std::string>;

struct Counterexample {
  std::string law;
  std::string mean;
  ProbeContext context;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  std::size_t dim = 0;
  double tol = 0.0;
  double spectrum_lo = 0.0;
  double spectrum_hi = 0.0;
  int refine_steps = 0;
  LawInstance instance;
  double residual = 0.0;
};

struct LawReport {
  std::string law;
  std::string mean;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::size_t trials = 0;     // requested
  std::size_t completed = 0;  // evaluated without a domain exit
  std::size_t skipped = 0;
  std::size_t failure_count = 0;
  double max_residual = 0.0;
  std::vector<Counterexample> failures;  // first few witnesses, refined
  Verdict verdict = Verdict::Inconclusive;
};

// How witness refinement may move an instance. Joint applies one common
// congruence to every matrix, so Loewner relations inside the instance
// survive; Independent perturbs one matrix at a time.
enum class Perturbation { None, Independent, Joint };

struct SearchOptions {
  std::size_t trials = 1000;
  std::size_t dim_lo = 2;
  std::size_t dim_hi = 6;
  std::uint64_t seed = 42;
  double tol = 1e-9;
  // Eigenvalue range of sampled positive definite matrices.
  double spectrum_lo = 1e-2;
  double spectrum_hi = 1e2;
  int refine_steps = 100;
  std::size_t max_witnesses = 1;
  bool stop_at_first = false;
  unsigned threads = 1;
};

struct LawProbe {
  std::string law;
  std::string mean;
  ProbeContext context;
  std::function<LawInstance(Rng&, std::size_t)> sample;
  // Normalized violation; the law holds on the instance iff residual <= tol.
  // DomainError marks the trial as skipped.
  std::function<double(const LawInstance&)> residual;
  Perturbation perturbation = Perturbation::Independent;
};

std::size_t trial_dim(const SearchOptions& opts, std::uint64_t trial);
PositiveMatrix sample_pd(Rng& rng, std::size_t n, const SearchOptions& opts);

LawReport run_probe(const LawProbe& probe, const SearchOptions& opts);

// Residual recomputed from the stored matrices.
double replay_residual(const LawProbe& probe, const Counterexample& cx);
// Sample and refinement rerun from the recorded seed, trial and dimension.
Counterexample regenerate(const LawProbe& probe, const Counterexample& cx);
// Options a probe was sampled with, as recorded in a witness.
SearchOptions recorded_options(const Counterexample& cx);

nlohmann::json to_json(const Counterexample& cx);
Counterexample counterexample_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LawReport& r);

std::string csv_header();
std::string csv_row(const LawReport& r);

}  // namespace opmeans
