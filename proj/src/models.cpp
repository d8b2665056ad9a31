#include "kahler/models.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kahler/cones.hpp"
#include "kahler/errors.hpp"
#include "kahler/random.hpp"

namespace kahler {

KahlerCurvatureTensor flat(int n) {
  if (n < 1) throw PreconditionError("flat model needs n >= 1");
  return KahlerCurvatureTensor(n);
}

KahlerCurvatureTensor fubini_study(int n, double holomorphic_sectional) {
  if (n < 1) throw PreconditionError("Fubini-Study model needs n >= 1");
  if (!(holomorphic_sectional > 0.0)) {
    throw PreconditionError("Fubini-Study holomorphic sectional curvature must be positive");
  }
  const double c = holomorphic_sectional / 2.0;
  KahlerCurvatureTensor t(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      t(a, a, b, b) += c;
      t(a, b, b, a) += c;
    }
  return t;
}

KahlerCurvatureTensor riemann_surface(double kappa) {
  if (!std::isfinite(kappa)) throw PreconditionError("surface curvature must be finite");
  KahlerCurvatureTensor t(1);
  t(0, 0, 0, 0) = kappa;
  return t;
}

KahlerCurvatureTensor make_model(const ModelSpec& spec) {
  struct Visitor {
    KahlerCurvatureTensor operator()(const FlatSpec& s) const { return flat(s.n); }
    KahlerCurvatureTensor operator()(const FubiniStudySpec& s) const {
      return fubini_study(s.n, s.holomorphic_sectional);
    }
    KahlerCurvatureTensor operator()(const SurfaceSpec& s) const { return riemann_surface(s.kappa); }
  };
  return std::visit(Visitor{}, spec);
}

KahlerCurvatureTensor product(const KahlerCurvatureTensor& a, const KahlerCurvatureTensor& b) {
  const int na = a.dim();
  const int nb = b.dim();
  KahlerCurvatureTensor t(na + nb);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j)
      for (int k = 0; k < na; ++k)
        for (int l = 0; l < na; ++l) t(i, j, k, l) = a(i, j, k, l);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j)
      for (int k = 0; k < nb; ++k)
        for (int l = 0; l < nb; ++l) t(na + i, na + j, na + k, na + l) = b(i, j, k, l);
  return t;
}

KahlerCurvatureTensor example_1_2(int n) {
  if (n < 1) throw PreconditionError("example_1_2 needs n >= 1");
  return product(riemann_surface(-4.0), fubini_study(n, 4.0));
}

KahlerCurvatureTensor random_symmetric(std::uint64_t seed, int n) {
  Rng rng = make_rng(seed, 0x5eed);
  KahlerCurvatureTensor raw(n);
  for (auto& z : raw.entries()) {
    const double re = standard_normal(rng);
    const double im = standard_normal(rng);
    z = Complex(re, im);
  }
  return symmetrize(raw);
}

ConeSample sample_cone_detailed(std::uint64_t seed, int n, const SampleConeOptions& opts) {
  if (n < 2) throw PreconditionError("sample_cone needs n >= 2");
  KahlerCurvatureTensor raw = random_symmetric(seed, n);
  raw *= 1.0 / raw.norm();
  const KahlerCurvatureTensor fs = fubini_study(n, 2.0);

  CertifyOptions copts;
  copts.starts = opts.starts;
  copts.max_iterations = opts.max_iterations;
  copts.seed = seed;

  // fubini_study(n, 2) equals 1 on every orthonormal pair, so the orthogonal
  // bisectional minimum of raw + t * fs is exactly min(raw) + t. The shift is
  // read off the raw minimum and widened until the shifted tensor certifies.
  const CertificationResult base = certify(raw, Condition::OHB, copts);
  double shift = 0.0;
  CertificationResult last = base;
  if (base.status != CertificationStatus::CertifiedNonnegative) {
    shift = std::max(0.0, -base.min_value) + opts.margin;
    for (int attempt = 0;; ++attempt) {
      last = certify(raw + shift * fs, Condition::OHB, copts);
      if (last.status == CertificationStatus::CertifiedNonnegative) break;
      if (attempt + 1 >= opts.max_shifts) {
        std::ostringstream msg;
        msg << "sample_cone(seed=" << seed << ", n=" << n << "): certification inconclusive after "
            << opts.max_shifts << " shifts";
        throw std::runtime_error(msg.str());
      }
      shift += std::max(opts.margin, std::abs(last.min_value)) * 2.0;
    }
  }
  KahlerCurvatureTensor out = raw + shift * fs;
  const double scale = 1.0 / out.norm();
  out *= scale;
  return {std::move(out), shift, last.min_value * scale};
}

KahlerCurvatureTensor sample_cone(std::uint64_t seed, int n) {
  return sample_cone_detailed(seed, n).tensor;
}

}  // namespace kahler
