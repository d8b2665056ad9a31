#pragma once

#include <cstdint>
#include <variant>

#include "kahler/tensor.hpp"

namespace kahler {

struct FlatSpec {
  int n;
};

// holomorphic_sectional is the constant holomorphic sectional curvature 2c.
struct FubiniStudySpec {
  int n;
  double holomorphic_sectional;
};

struct SurfaceSpec {
  double kappa;
};

using ModelSpec = std::variant<FlatSpec, FubiniStudySpec, SurfaceSpec>;

KahlerCurvatureTensor make_model(const ModelSpec& spec);

KahlerCurvatureTensor flat(int n);

/// R_{a bbar c dbar} = c (delta_ab delta_cd + delta_ad delta_cb) with
/// c = holomorphic_sectional / 2. The realified sectional curvatures of
/// fubini_study(n, 4) fill [1, 4].
KahlerCurvatureTensor fubini_study(int n, double holomorphic_sectional);

// n = 1, single component R_{0 0bar 0 0bar} = kappa.
KahlerCurvatureTensor riemann_surface(double kappa);

// Direct sum; indices of `a` come first, all mixed components vanish.
KahlerCurvatureTensor product(const KahlerCurvatureTensor& a, const KahlerCurvatureTensor& b);

// Surface of curvature -4 (index 0) times fubini_study(n, 4) (indices 1..n).
KahlerCurvatureTensor example_1_2(int n);

// Symmetrized tensor with independent standard normal entries before
// projection. Deterministic in seed.
KahlerCurvatureTensor random_symmetric(std::uint64_t seed, int n);

struct ConeSample {
  KahlerCurvatureTensor tensor;
  double shift;        // multiple of fubini_study(n, 2) added to the raw tensor
  double certified_min;
};

struct SampleConeOptions {
  int starts = 64;
  int max_iterations = 3000;
  int max_shifts = 8;
  double margin = 1e-6;
};

/// Random tensor pushed into the orthogonal-bisectional cone by adding
/// t * fubini_study(n, 2), then scaled to unit Frobenius norm. The raw
/// tensor is accepted unchanged (t = 0) when it already certifies.
/// Throws std::runtime_error when certification keeps failing.
ConeSample sample_cone_detailed(std::uint64_t seed, int n, const SampleConeOptions& opts = {});
KahlerCurvatureTensor sample_cone(std::uint64_t seed, int n);

}  // namespace kahler
