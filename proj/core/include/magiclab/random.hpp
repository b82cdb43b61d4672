#pragma once

#include <random>

#include "magiclab/channels.hpp"
#include "magiclab/types.hpp"

namespace magiclab {

/// Seeded generators for tests, benchmarks and sweeps.
using Rng = std::mt19937_64;

Matrix random_ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng);
Matrix random_hermitian(Eigen::Index dim, Rng& rng);
/// Haar unitary via QR of a Ginibre matrix with the phase correction.
Matrix random_unitary(Eigen::Index dim, Rng& rng);

/// Density matrix of the given rank (0 = full rank) from a Ginibre factor.
Operator random_state(int d, int n, Rng& rng, int rank = 0);
Operator random_pure_state(int d, int n, Rng& rng);
/// Random convex mixture of pure stabilizer states, hence in the Wigner polytope.
Operator random_wplus_state(int d, int n, Rng& rng);

/// Product of `length` random Clifford generators.
Matrix random_clifford(int d, int n, Rng& rng, int length = 20);

/// Random trace-preserving channel with Kraus rank in [1, 3] (or `rank` if > 0), raised
/// to ceil(d_in / d_out) when needed so that the normalisation exists:
/// Gaussian Kraus operators K_k, normalized by (sum K^dagger K)^{-1/2}.
Channel random_channel(int d, int n_in, int n_out, Rng& rng, int rank = 0);

/// Random CPWP channel on n qudits: a mixture of Clifford unitaries, optionally
/// followed by depolarizing noise or mixed with a replacer onto a Wigner-positive state.
Channel random_cpwp_channel(int d, int n, Rng& rng);

}  // namespace magiclab
