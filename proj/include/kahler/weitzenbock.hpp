#pragma once

#include <utility>
#include <vector>

#include "kahler/tensor.hpp"

namespace kahler {

// Real (1,1)-form written in a frame that diagonalizes it:
// eta = sqrt(-1)/2 * sum 2 a_b e_b ^ conj(e_b).
struct DiagonalOneOneForm {
  RVector a;
};

/// Curvature term of the Bochner formula on (1,1)-forms evaluated on a
/// diagonal form: sum_{i<j} (a_i - a_j)^2 R_{i ibar j jbar}. Only the roots
/// x_i - x_j contribute; the overall positive constant is fixed to 1.
double curvature_term(const KahlerCurvatureTensor& t, const DiagonalOneOneForm& eta);

struct ParallelConsequenceReport {
  double curvature_term;
  // True when the term is within tol of zero, so every pair with distinct
  // coefficients must have vanishing orthogonal bisectional curvature.
  bool applicable;
  std::vector<std::pair<int, int>> offending_pairs;
  bool consistent() const { return !applicable || offending_pairs.empty(); }
};

ParallelConsequenceReport parallel_consequence_check(const KahlerCurvatureTensor& t,
                                                     const DiagonalOneOneForm& eta, double tol);

}  // namespace kahler
