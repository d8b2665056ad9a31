#pragma once

#include <cstdint>
#include <random>

#include "kahler/tensor.hpp"

namespace kahler {

using Rng = std::mt19937_64;

// Independent stream for (seed, stream); mixing is splitmix64 so nearby
// seeds give unrelated sequences.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

double standard_normal(Rng& rng);
CVector random_complex_vector(Rng& rng, int n);
RVector random_real_vector(Rng& rng, int n);

// Haar-distributed unitary (QR of a complex Ginibre matrix with phase fix).
CMatrix random_unitary(Rng& rng, int n);

// Hermitian-orthonormal columns via modified Gram-Schmidt. Returns false
// when a column is numerically dependent on its predecessors.
bool orthonormalize_columns(CMatrix& frame);
bool orthonormalize_columns(RMatrix& frame);

}  // namespace kahler
