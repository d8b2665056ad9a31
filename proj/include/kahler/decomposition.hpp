#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kahler/tensor.hpp"

namespace kahler {

enum class BlockKind { Flat, FubiniStudyLike, Surface, Unclassified };

// parameter is c for FubiniStudyLike (holomorphic sectional 2c), kappa for
// Surface, and 0 otherwise.
struct BlockTag {
  BlockKind kind = BlockKind::Unclassified;
  double parameter = 0.0;
};

std::string to_string(const BlockTag& tag);

struct Block {
  std::vector<int> indices;  // in the block-adapted frame
  BlockTag tag;
};

/// Orthogonal splitting of C^n into curvature-invariant subspaces.
/// conjugate_frame(t, change_of_frame) is block diagonal with respect to
/// `blocks`, whose index sets partition 0..n-1 and are contiguous.
struct ProductStructure {
  std::vector<Block> blocks;
  CMatrix change_of_frame;
  bool degeneracy_warning = false;
  int attempts = 0;
};

// Component sub-tensor on `indices` (already in the adapted frame).
KahlerCurvatureTensor restrict_to_block(const KahlerCurvatureTensor& adapted,
                                        std::span<const int> indices);

// Largest component whose indices touch two different blocks, measured in
// the adapted frame.
double max_mixed_component(const KahlerCurvatureTensor& t, const ProductStructure& s);

/// Finest splitting invariant under every curvature endomorphism
/// (M^{(cd)})_{ab} = R_{a bbar c dbar}. The common kernel is split off first
/// as one-dimensional flat blocks; the rest is resolved by diagonalizing a
/// random Hermitian combination of the endomorphisms and joining eigenvectors
/// that any endomorphism couples. Up to three random combinations are tried;
/// when eigenvalue clusters still straddle blocks the coarser partition is
/// returned with degeneracy_warning set. Blocks are tagged by classify_block.
ProductStructure detect_blocks(const KahlerCurvatureTensor& t, double tol = 1e-8,
                               std::uint64_t seed = 0);

/// Flat when the norm is at most tol; Surface(kappa) for n = 1;
/// FubiniStudyLike(c) when within tol of c (dd + dd) with
/// c = scalar / (n (n + 1)); Unclassified otherwise.
BlockTag classify_block(const KahlerCurvatureTensor& block, double tol = 1e-8);

enum class TheoremCase { Case1, Case2, Violation };

std::string to_string(TheoremCase c);

struct CaseWitness {
  int negative_block;
  int other_block;
  double other_min;     // minimum holomorphic sectional of other_block
  double required_min;  // -minimum holomorphic sectional of negative_block
};

struct CaseReport {
  TheoremCase kind = TheoremCase::Case1;
  int designated_block = -1;  // Y, when kind is Case2
  std::vector<CaseWitness> witnesses;
  std::vector<int> block_dims;
  std::vector<std::string> notes;
};

/// Case logic of the classification: no negative block gives Case1, exactly
/// one negative block Y gives Case2 provided every other block satisfies
/// minHolSec(i) >= -minHolSec(Y); anything else is a Violation with
/// witnesses. Compactness is caller metadata and only feeds the notes.
CaseReport theorem_case(const ProductStructure& structure, std::span<const double> per_block_min_holsec,
                        std::span<const bool> compact_flags, double tol = 1e-9);

}  // namespace kahler
