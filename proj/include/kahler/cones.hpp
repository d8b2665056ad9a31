#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kahler/tensor.hpp"

namespace kahler {

struct ProductStructure;

enum class Condition {
  OHB,        // R(X, Xbar, Y, Ybar) on Hermitian-orthonormal pairs
  HB,         // R(X, Xbar, Y, Ybar) on independent unit pairs
  HolSec,     // R(X, Xbar, X, Xbar) on unit vectors
  Isotropic,  // K13 + K14 + K23 + K24 - 2 R1234 on real orthonormal 4-frames
};

enum class CertificationStatus { CertifiedNonnegative, Violated, Inconclusive };

std::string to_string(Condition c);
std::string to_string(CertificationStatus s);

/// Minimizer location. For the complex conditions `vectors` holds one or two
/// columns of length n; for Isotropic `real_frame` is 2n x 4 in the realified
/// basis of realify().
struct FrameWitness {
  CMatrix vectors;
  RMatrix real_frame;
};

struct CertifyOptions {
  int starts = 64;
  int max_iterations = 500;
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
};

struct CertificationResult {
  Condition condition;
  double min_value;
  FrameWitness argmin;
  CertificationStatus status;
  int starts;
  int converged_starts;
  double tolerance;
};

/// Numerical certificate of nonnegativity: multi-start projected gradient on
/// the frame manifold of `condition`, with re-orthonormalization after every
/// step and step halving on increase. Deterministic given opts.seed; starts
/// run concurrently and are reduced in start order.
CertificationResult certify(const KahlerCurvatureTensor& t, Condition condition,
                            const CertifyOptions& opts = {});

// Objective of `condition` at a witness frame.
double condition_value(const KahlerCurvatureTensor& t, Condition condition, const FrameWitness& w);

// K13 + K14 + K23 + K24 - 2 R(e1, e2, e4, e3) for a real orthonormal 4-frame.
double isotropic_value(const RealCurvatureTensor& r, const RMatrix& frame);

struct PairInequalities {
  int alpha;
  int beta;
  double sum_minus;  // R_aaaa + R_bbbb - R_abab - R_baba
  double sum_plus;   // R_aaaa + R_bbbb + R_abab + R_baba
  double diagonal;   // R_aaaa + R_bbbb
};

struct DerivedInequalityReport {
  std::vector<PairInequalities> pairs;
  double scalar;
  double min_value;  // smallest value over every pair quantity and scalar
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

/// Pairwise consequences of the orthogonal-bisectional cone read off a fixed
/// frame, plus scalar nonnegativity. Anything below -tol is a failure.
DerivedInequalityReport derived_inequalities(const KahlerCurvatureTensor& t, double tol);

struct CrossFactorPair {
  int block_i;
  int block_j;
  double min_sum;
  bool flagged;
};

struct CrossFactorReport {
  std::vector<double> block_min_holomorphic_sectional;
  std::vector<CrossFactorPair> pairs;
  bool any_flagged() const;
};

/// For every ordered pair of distinct blocks, the minimum over unit X in
/// block i and unit Y in block j of holomorphic_sectional(X) +
/// holomorphic_sectional(Y). Negative values are flagged: such a product
/// cannot lie in the orthogonal-bisectional cone. Throws StructuralError when
/// `t` has mixed components above `tol` in the block-adapted frame.
CrossFactorReport cross_factor_bound(const KahlerCurvatureTensor& t, const ProductStructure& blocks,
                                     double tol = 1e-8, const CertifyOptions& opts = {});

}  // namespace kahler
