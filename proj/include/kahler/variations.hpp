#pragma once

#include <string>
#include <vector>

#include "kahler/tensor.hpp"

namespace kahler {

/// Pair of complex vectors meant to be Hermitian-orthonormal. Curves built by
/// frame_curve for second-order families are orthonormal only to O(s^3), so
/// the invariant is reported by defect() rather than enforced.
struct OrthonormalTwoFrame {
  CVector x;
  CVector y;
  // max of | <x,x> - 1 |, | <y,y> - 1 |, | <x,y> |
  double defect() const;
};

// u({X, Y}) = R(X, Xbar, Y, Ybar)
double frame_function(const KahlerCurvatureTensor& t, const OrthonormalTwoFrame& f);

enum class VariationKind {
  RotationReal,         // {cos s e_a + sin s e_b, -sin s e_a + cos s e_b}
  RotationImag,         // same with e_b replaced by sqrt(-1) e_b
  TranslationReal,      // {normalize(e_a + s e_m), e_b}
  TranslationImag,      // {normalize(e_a + s sqrt(-1) e_m), e_b}
  TranslationBetaSlot,  // {e_a, normalize(e_b + s e_m)}
  SecondOrder,          // {v_a(s), v_b(s)} built from directions w_a, w_b
};

std::string to_string(VariationKind k);

struct VariationFamily {
  VariationKind kind;
  int n;
  int alpha;
  int beta;
  int mu = -1;
  CVector omega_alpha;  // SecondOrder only; orthogonal to e_alpha and e_beta
  CVector omega_beta;

  static VariationFamily rotation_real(int n, int alpha, int beta);
  static VariationFamily rotation_imag(int n, int alpha, int beta);
  static VariationFamily translation_real(int n, int alpha, int beta, int mu);
  static VariationFamily translation_imag(int n, int alpha, int beta, int mu);
  static VariationFamily translation_beta_slot(int n, int alpha, int beta, int mu);
  static VariationFamily second_order(int alpha, int beta, CVector omega_alpha, CVector omega_beta);
};

/// Point s on the curve of frames described by `family`. For SecondOrder
///   v_a(s) = e_a + s w_a - s^2/2 (<w_a, w_a> e_a + <w_a, w_b> e_b)
///   v_b(s) = e_b + s w_b - s^2/2 (<w_b, w_a> e_a + <w_b, w_b> e_b)
/// truncated after the quadratic term.
OrthonormalTwoFrame frame_curve(const VariationFamily& family, double s);

// du/ds at s = 0 in closed form.
double first_variation(const KahlerCurvatureTensor& t, const VariationFamily& family);

/// (1/2) d^2u/ds^2 at s = 0 for a SecondOrder family:
///   R(w_a, wbar_a, e_b, ebar_b) + R(e_a, ebar_a, w_b, wbar_b)
///   + 2 Re R(w_a, ebar_a, e_b, wbar_b) + 2 Re R(e_a, wbar_a, e_b, wbar_b)
///   - (<w_a, w_a> + <w_b, w_b>) R_{a abar b bbar}
///   - Re(<w_a, w_b> R_{b abar b bbar} + <w_b, w_a> R_{a abar a bbar})
double second_variation(const KahlerCurvatureTensor& t, const VariationFamily& family);

// Centered stencils of u along frame_curve; the second returns half the
// second difference so it is comparable with second_variation.
double finite_difference_first(const KahlerCurvatureTensor& t, const VariationFamily& family, double h);
double finite_difference_second(const KahlerCurvatureTensor& t, const VariationFamily& family, double h);

/// tr(A C) - tr(B conj(B)) with A(X, Ybar) = R(X, Ybar, e_b, ebar_b),
/// B(X, Y) = R(ebar_a, X, ebar_b, Y), C(X, Ybar) = R(e_a, ebar_a, X, Ybar)
/// restricted to the orthogonal complement of {e_a, e_b}. Asserts agreement
/// with sum_{m,v} (R_{a abar m vbar} R_{v mbar b bbar} - |R_{a mbar b vbar}|^2).
double block_psd_gap(const KahlerCurvatureTensor& t, int alpha, int beta);

struct RotationPropagation {
  double expansion_value;
  double predicted_value;
  double residual;
};

/// Under the zero-set conditions at (alpha, beta), u on the rotated frame
/// {sin th e_a - cos th e_b, cos th e_a + sin th e_b} collapses to
/// cos^2 th sin^2 th (R_{a abar a abar} + R_{b bbar b bbar}). Computes both
/// sides; throws PreconditionError naming the failing condition otherwise.
RotationPropagation rotation_propagation(const KahlerCurvatureTensor& t, int alpha, int beta,
                                         double theta, double tol);

struct ZeroSetChainReport {
  bool all_pairs_zero_set;   // zero-set conditions at every pair
  double max_pair_bisectional;   // max |R_{m mbar v vbar}|, m != v
  double max_pair_holsec_sum;    // max |R_{m mbar m mbar} + R_{v vbar v vbar}|
  bool rotated_zeros;        // both maxima within tol
  double scalar;
  // all_pairs_zero_set and rotated_zeros together imply |scalar| <= tol
  bool consistent;
};

// Zero-set conditions at every pair, then the pairwise vanishing that rotated
// zeros enforce, then the scalar curvature.
ZeroSetChainReport zero_set_chain(const KahlerCurvatureTensor& t, double tol);

}  // namespace kahler
