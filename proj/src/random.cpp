#include "kahler/random.hpp"

#include <cmath>

namespace kahler {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <typename Matrix>
bool gram_schmidt(Matrix& frame) {
  for (Eigen::Index j = 0; j < frame.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      // two passes keep orthogonality at machine precision
      for (int pass = 0; pass < 2; ++pass) {
        const auto proj = frame.col(i).dot(frame.col(j));
        frame.col(j) -= proj * frame.col(i);
      }
    }
    const double nrm = frame.col(j).norm();
    if (!(nrm > 1e-12)) return false;
    frame.col(j) /= nrm;
  }
  return true;
}

}  // namespace

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

double standard_normal(Rng& rng) {
  // Box-Muller on raw 53-bit uniforms; std::normal_distribution is not
  // specified bit-for-bit across standard libraries.
  constexpr double kScale = 1.0 / 9007199254740992.0;
  const double u1 = (static_cast<double>(rng() >> 11) + 0.5) * kScale;
  const double u2 = static_cast<double>(rng() >> 11) * kScale;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

CVector random_complex_vector(Rng& rng, int n) {
  CVector v(n);
  for (int i = 0; i < n; ++i) {
    const double re = standard_normal(rng);
    const double im = standard_normal(rng);
    v[i] = Complex(re, im);
  }
  return v;
}

RVector random_real_vector(Rng& rng, int n) {
  RVector v(n);
  for (int i = 0; i < n; ++i) v[i] = standard_normal(rng);
  return v;
}

CMatrix random_unitary(Rng& rng, int n) {
  CMatrix g(n, n);
  for (int j = 0; j < n; ++j) g.col(j) = random_complex_vector(rng, n);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

bool orthonormalize_columns(CMatrix& frame) { return gram_schmidt(frame); }
bool orthonormalize_columns(RMatrix& frame) { return gram_schmidt(frame); }

}  // namespace kahler
