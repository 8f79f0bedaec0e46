#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "opmeans/hermitian.hpp"

namespace opmeans {

using Rng = std::mt19937_64;

// Independent stream for one trial of a seeded run.
Rng trial_rng(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream = 0);

double uniform(Rng& rng, double lo, double hi);
double log_uniform(Rng& rng, double lo, double hi);

// Matrix with i.i.d. standard complex normal entries.
CMatrix random_ginibre(Rng& rng, std::size_t n);
// Haar-distributed unitary (QR of a Ginibre sample with phase correction).
CMatrix random_unitary(Rng& rng, std::size_t n);
std::vector<cplx> random_unit_vector(Rng& rng, std::size_t n);

// Q diag(d) Q^* with d log-uniform in [lo, hi].
PositiveMatrix random_pd(Rng& rng, std::size_t n, double lo, double hi);
// Same with Q fixed, so draws sharing `basis` commute.
PositiveMatrix random_pd_in_basis(Rng& rng, const CMatrix& basis, double lo, double hi);
// Condition number at most cond_max; deterministic per seed.
PositiveMatrix random_pd(std::size_t n, std::uint64_t seed, double cond_max);

// R R^* with R an n x rank Ginibre sample scaled so that |R|_F^2 = scale.
HermitianMatrix random_psd(Rng& rng, std::size_t n, std::size_t rank, double scale);
// Invertible Hermitian with eigenvalue magnitudes in [lo, hi] and random signs.
HermitianMatrix random_invertible_hermitian(Rng& rng, std::size_t n, double lo, double hi);
// U diag(s) V with singular values log-uniform in [lo, hi].
CMatrix random_invertible(Rng& rng, std::size_t n, double lo, double hi);

}  // namespace opmeans
