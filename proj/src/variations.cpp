#include "kahler/variations.hpp"

#include <algorithm>
#include <cmath>

#include "kahler/errors.hpp"
#include "kahler/flow.hpp"

namespace kahler {

double OrthonormalTwoFrame::defect() const {
  return std::max({std::abs(x.squaredNorm() - 1.0), std::abs(y.squaredNorm() - 1.0),
                   std::abs(inner(x, y))});
}

double frame_function(const KahlerCurvatureTensor& t, const OrthonormalTwoFrame& f) {
  return evaluate_bisectional(t, f.x, f.y);
}

std::string to_string(VariationKind k) {
  switch (k) {
    case VariationKind::RotationReal: return "RotationReal";
    case VariationKind::RotationImag: return "RotationImag";
    case VariationKind::TranslationReal: return "TranslationReal";
    case VariationKind::TranslationImag: return "TranslationImag";
    case VariationKind::TranslationBetaSlot: return "TranslationBetaSlot";
    case VariationKind::SecondOrder: return "SecondOrder";
  }
  return "?";
}

namespace {

void check_indices(int n, int alpha, int beta, int mu, bool need_mu) {
  auto in_range = [n](int i) { return i >= 0 && i < n; };
  if (!in_range(alpha) || !in_range(beta) || alpha == beta) {
    throw PreconditionError("variation family needs distinct frame indices in range");
  }
  if (need_mu && (!in_range(mu) || mu == alpha || mu == beta)) {
    throw PreconditionError("translation direction must differ from both frame indices");
  }
}

CVector basis(int n, int i) {
  CVector e = CVector::Zero(n);
  e[i] = 1.0;
  return e;
}

VariationFamily simple(VariationKind kind, int n, int alpha, int beta, int mu) {
  const bool need_mu = kind != VariationKind::RotationReal && kind != VariationKind::RotationImag;
  check_indices(n, alpha, beta, mu, need_mu);
  return VariationFamily{kind, n, alpha, beta, need_mu ? mu : -1, {}, {}};
}

constexpr Complex kI{0.0, 1.0};

}  // namespace

VariationFamily VariationFamily::rotation_real(int n, int alpha, int beta) {
  return simple(VariationKind::RotationReal, n, alpha, beta, -1);
}
VariationFamily VariationFamily::rotation_imag(int n, int alpha, int beta) {
  return simple(VariationKind::RotationImag, n, alpha, beta, -1);
}
VariationFamily VariationFamily::translation_real(int n, int alpha, int beta, int mu) {
  return simple(VariationKind::TranslationReal, n, alpha, beta, mu);
}
VariationFamily VariationFamily::translation_imag(int n, int alpha, int beta, int mu) {
  return simple(VariationKind::TranslationImag, n, alpha, beta, mu);
}
VariationFamily VariationFamily::translation_beta_slot(int n, int alpha, int beta, int mu) {
  return simple(VariationKind::TranslationBetaSlot, n, alpha, beta, mu);
}

VariationFamily VariationFamily::second_order(int alpha, int beta, CVector omega_alpha, CVector omega_beta) {
  const auto n = static_cast<int>(omega_alpha.size());
  if (omega_beta.size() != n) throw StructuralError("direction vectors differ in length");
  check_indices(n, alpha, beta, -1, false);
  for (const CVector* w : {&omega_alpha, &omega_beta}) {
    if (std::abs((*w)[alpha]) > 1e-12 || std::abs((*w)[beta]) > 1e-12) {
      throw PreconditionError("second-order directions must be orthogonal to e_alpha and e_beta");
    }
  }
  return VariationFamily{VariationKind::SecondOrder, n, alpha, beta, -1, std::move(omega_alpha),
                         std::move(omega_beta)};
}

OrthonormalTwoFrame frame_curve(const VariationFamily& f, double s) {
  const CVector ea = basis(f.n, f.alpha);
  const CVector eb = basis(f.n, f.beta);
  auto normalized = [](CVector v) {
    const double nrm = v.norm();
    if (!(nrm > 1e-12)) throw PreconditionError("degenerate frame normalization");
    return CVector(v / nrm);
  };
  switch (f.kind) {
    case VariationKind::RotationReal:
      return {std::cos(s) * ea + std::sin(s) * eb, -std::sin(s) * ea + std::cos(s) * eb};
    case VariationKind::RotationImag:
      return {std::cos(s) * ea + std::sin(s) * kI * eb, -std::sin(s) * ea + std::cos(s) * kI * eb};
    case VariationKind::TranslationReal:
      return {normalized(ea + s * basis(f.n, f.mu)), eb};
    case VariationKind::TranslationImag:
      return {normalized(ea + s * kI * basis(f.n, f.mu)), eb};
    case VariationKind::TranslationBetaSlot:
      return {ea, normalized(eb + s * basis(f.n, f.mu))};
    case VariationKind::SecondOrder: {
      const CVector& wa = f.omega_alpha;
      const CVector& wb = f.omega_beta;
      const double half_s2 = 0.5 * s * s;
      CVector va = ea + s * wa - half_s2 * (inner(wa, wa) * ea + inner(wa, wb) * eb);
      CVector vb = eb + s * wb - half_s2 * (inner(wb, wa) * ea + inner(wb, wb) * eb);
      return {std::move(va), std::move(vb)};
    }
  }
  throw PreconditionError("unknown variation family");
}

double first_variation(const KahlerCurvatureTensor& t, const VariationFamily& f) {
  if (t.dim() != f.n) throw StructuralError("variation family dimension does not match tensor");
  const int a = f.alpha;
  const int b = f.beta;
  switch (f.kind) {
    case VariationKind::RotationReal:
      return 2.0 * (t(a, b, b, b) - t(a, a, a, b)).real();
    case VariationKind::RotationImag:
      return 2.0 * (t(a, b, b, b) - t(a, a, a, b)).imag();
    case VariationKind::TranslationReal:
      return 2.0 * t(a, f.mu, b, b).real();
    case VariationKind::TranslationImag:
      return 2.0 * t(a, f.mu, b, b).imag();
    case VariationKind::TranslationBetaSlot:
      return 2.0 * t(a, a, b, f.mu).real();
    case VariationKind::SecondOrder: {
      const CVector ea = basis(f.n, a);
      const CVector eb = basis(f.n, b);
      return 2.0 * (contract(t, f.omega_alpha, ea, eb, eb) + contract(t, ea, ea, f.omega_beta, eb)).real();
    }
  }
  throw PreconditionError("unknown variation family");
}

double second_variation(const KahlerCurvatureTensor& t, const VariationFamily& f) {
  if (f.kind != VariationKind::SecondOrder) {
    throw PreconditionError("second_variation is defined for SecondOrder families");
  }
  if (t.dim() != f.n) throw StructuralError("variation family dimension does not match tensor");
  const int a = f.alpha;
  const int b = f.beta;
  const CVector ea = basis(f.n, a);
  const CVector eb = basis(f.n, b);
  const CVector& wa = f.omega_alpha;
  const CVector& wb = f.omega_beta;
  double v = contract(t, wa, wa, eb, eb).real() + contract(t, ea, ea, wb, wb).real();
  v += 2.0 * contract(t, wa, ea, eb, wb).real();
  v += 2.0 * contract(t, ea, wa, eb, wb).real();
  v -= (inner(wa, wa).real() + inner(wb, wb).real()) * t(a, a, b, b).real();
  v -= (inner(wa, wb) * t(b, a, b, b) + inner(wb, wa) * t(a, a, a, b)).real();
  return v;
}

double finite_difference_first(const KahlerCurvatureTensor& t, const VariationFamily& f, double h) {
  return (frame_function(t, frame_curve(f, h)) - frame_function(t, frame_curve(f, -h))) / (2.0 * h);
}

double finite_difference_second(const KahlerCurvatureTensor& t, const VariationFamily& f, double h) {
  const double up = frame_function(t, frame_curve(f, h));
  const double mid = frame_function(t, frame_curve(f, 0.0));
  const double down = frame_function(t, frame_curve(f, -h));
  return 0.5 * (up - 2.0 * mid + down) / (h * h);
}

double block_psd_gap(const KahlerCurvatureTensor& t, int alpha, int beta) {
  const int n = t.dim();
  if (n < 3) throw PreconditionError("block_psd_gap needs a nonempty orthogonal complement (n >= 3)");
  check_indices(n, alpha, beta, -1, false);
  std::vector<int> comp;
  for (int i = 0; i < n; ++i)
    if (i != alpha && i != beta) comp.push_back(i);
  const auto k = static_cast<int>(comp.size());
  CMatrix A(k, k), B(k, k), C(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const int m = comp[i];
      const int v = comp[j];
      A(i, j) = t(m, v, beta, beta);
      // R(ebar_a, e_m, ebar_b, e_v) = R(e_m, ebar_a, e_v, ebar_b)
      B(i, j) = t(m, alpha, v, beta);
      C(i, j) = t(alpha, alpha, m, v);
    }
  const Complex gap = (A * C).trace() - (B * B.conjugate()).trace();

  Complex direct{};
  for (int m : comp)
    for (int v : comp) direct += t(alpha, alpha, m, v) * t(v, m, beta, beta) - std::norm(t(alpha, m, beta, v));
  if (std::abs(gap - direct) > 1e-10 * (1.0 + std::abs(direct))) {
    throw InternalAssertionError("block_psd_gap: matrix form disagrees with component sum");
  }
  return gap.real();
}

RotationPropagation rotation_propagation(const KahlerCurvatureTensor& t, int alpha, int beta,
                                         double theta, double tol) {
  const ZeroSetReport zs = zero_set_conditions(t, alpha, beta, tol);
  if (!zs.passed()) throw PreconditionError("zero-set hypothesis fails: " + zs.first_failure());

  const double s = std::sin(theta);
  const double c = std::cos(theta);
  // coefficients of the rotated vectors on (e_alpha, e_beta)
  const int idx[2] = {alpha, beta};
  const double ua[2] = {s, -c};
  const double ub[2] = {c, s};
  Complex expansion{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          expansion += ua[i] * ua[j] * ub[k] * ub[l] * t(idx[i], idx[j], idx[k], idx[l]);

  RotationPropagation out;
  out.expansion_value = expansion.real();
  out.predicted_value = c * c * s * s * (t(alpha, alpha, alpha, alpha) + t(beta, beta, beta, beta)).real();
  out.residual = std::abs(expansion - out.predicted_value);
  return out;
}

ZeroSetChainReport zero_set_chain(const KahlerCurvatureTensor& t, double tol) {
  const int n = t.dim();
  ZeroSetChainReport rep{true, 0.0, 0.0, false, 0.0, true};
  for (int m = 0; m < n; ++m)
    for (int v = 0; v < n; ++v) {
      if (m == v) continue;
      if (!zero_set_conditions(t, m, v, tol).passed()) rep.all_pairs_zero_set = false;
      rep.max_pair_bisectional = std::max(rep.max_pair_bisectional, std::abs(t(m, m, v, v)));
      rep.max_pair_holsec_sum =
          std::max(rep.max_pair_holsec_sum, std::abs(t(m, m, m, m) + t(v, v, v, v)));
    }
  rep.rotated_zeros = rep.max_pair_bisectional <= tol && rep.max_pair_holsec_sum <= tol;
  rep.scalar = scalar(t);
  if (rep.all_pairs_zero_set && rep.rotated_zeros) rep.consistent = std::abs(rep.scalar) <= tol;
  return rep;
}

}  // namespace kahler
