#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace kahler {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

// (alpha, beta, gamma, delta) addressing R_{alpha betabar gamma deltabar}.
using Index4 = std::array<int, 4>;

inline constexpr double kDefaultValidationTol = 1e-10;

/// Curvature tensor of a Kahler metric at a point, stored densely in a fixed
/// unitary frame. Entry (a, b, c, d) is R_{a bbar c dbar}; indices are
/// zero-based. The expected symmetries are
///   R_{a bbar c dbar} = R_{c bbar a dbar} = R_{a dbar c bbar}
///   conj(R_{a bbar c dbar}) = R_{b abar d cbar}
/// but the container itself does not enforce them; see validate() and
/// symmetrize().
class KahlerCurvatureTensor {
 public:
  KahlerCurvatureTensor() = default;
  explicit KahlerCurvatureTensor(int n);
  KahlerCurvatureTensor(int n, std::vector<Complex> entries);

  int dim() const noexcept { return n_; }

  Complex operator()(int a, int b, int c, int d) const { return entries_[offset(a, b, c, d)]; }
  Complex& operator()(int a, int b, int c, int d) { return entries_[offset(a, b, c, d)]; }
  Complex operator()(const Index4& i) const { return (*this)(i[0], i[1], i[2], i[3]); }
  Complex& operator()(const Index4& i) { return (*this)(i[0], i[1], i[2], i[3]); }

  std::span<const Complex> entries() const noexcept { return entries_; }
  std::span<Complex> entries() noexcept { return entries_; }

  // Frobenius norm over all n^4 entries.
  double norm() const;

  KahlerCurvatureTensor& operator+=(const KahlerCurvatureTensor& other);
  KahlerCurvatureTensor& operator-=(const KahlerCurvatureTensor& other);
  KahlerCurvatureTensor& operator*=(double s);

  friend KahlerCurvatureTensor operator+(KahlerCurvatureTensor a, const KahlerCurvatureTensor& b) {
    return a += b;
  }
  friend KahlerCurvatureTensor operator-(KahlerCurvatureTensor a, const KahlerCurvatureTensor& b) {
    return a -= b;
  }
  friend KahlerCurvatureTensor operator*(double s, KahlerCurvatureTensor a) { return a *= s; }

  bool operator==(const KahlerCurvatureTensor&) const = default;

 private:
  std::size_t offset(int a, int b, int c, int d) const noexcept {
    const auto n = static_cast<std::size_t>(n_);
    return ((static_cast<std::size_t>(a) * n + b) * n + c) * n + d;
  }

  int n_ = 0;
  std::vector<Complex> entries_;
};

// Largest entrywise difference; dimensions must agree.
double max_abs_difference(const KahlerCurvatureTensor& a, const KahlerCurvatureTensor& b);

/// One element of the symmetry orbit of an index tuple: the entry at `indices`
/// must equal the orbit representative, conjugated when `conjugated` is set.
struct OrbitMember {
  Index4 indices;
  bool conjugated;
};

/// Closure of `seed` under unbarred swap, barred swap and Hermitian
/// conjugation. The first member is always {seed, false}.
std::vector<OrbitMember> symmetry_orbit(const Index4& seed);

enum class ViolationKind { IndexSymmetry, Hermitian };

struct SymmetryViolation {
  ViolationKind kind;
  Index4 indices;  // orbit representative
  Index4 partner;  // worst offending orbit member
  double defect;
};

std::vector<SymmetryViolation> validate(const KahlerCurvatureTensor& t,
                                        double tol = kDefaultValidationTol);

// Largest deviation of any entry from its orbit representative.
double max_symmetry_defect(const KahlerCurvatureTensor& t);

// Orthogonal projection onto tensors with the Kahler symmetries (orbit
// average). Idempotent.
KahlerCurvatureTensor symmetrize(const KahlerCurvatureTensor& t);

// Hermitian inner product <a, b> = sum a_i conj(b_i).
inline Complex inner(const CVector& a, const CVector& b) { return b.dot(a); }

// sum R_{a bbar c dbar} x_a conj(y_b) z_c conj(w_d)
Complex contract(const KahlerCurvatureTensor& t, const CVector& x, const CVector& y,
                 const CVector& z, const CVector& w);

/// R(X, Xbar, Y, Ybar). Throws StructuralError on length mismatch and
/// SymmetryViolationError when the imaginary residue exceeds
/// 1e-9 * (1 + |value|).
double evaluate_bisectional(const KahlerCurvatureTensor& t, const CVector& x, const CVector& y);

// R(X, Xbar, X, Xbar) for a unit vector X.
double holomorphic_sectional(const KahlerCurvatureTensor& t, const CVector& x);

bool is_unitary(const CMatrix& u, double tol = 1e-10);

/// Frame change R'_{abcd} = sum U_{ai} conj(U_{bj}) U_{ck} conj(U_{dl}) R_{ijkl}.
/// Row a of U holds the coordinates of the new frame vector e'_a.
KahlerCurvatureTensor conjugate_frame(const KahlerCurvatureTensor& t, const CMatrix& u);

// Ric_{a bbar} = sum_m R_{a bbar m mbar}.
CMatrix ricci(const KahlerCurvatureTensor& t);

// Sorted eigenvalues of ricci(t).
RVector ricci_eigenvalues(const KahlerCurvatureTensor& t);

double scalar(const KahlerCurvatureTensor& t);

/// Riemannian curvature tensor on the underlying real 2n-space, in the basis
/// (u_1, ..., u_n, Ju_1, ..., Ju_n) with e_i = (u_i - sqrt(-1) J u_i) / sqrt(2).
/// Sign convention: R(x, y, y, x) is the sectional curvature of span{x, y}.
class RealCurvatureTensor {
 public:
  RealCurvatureTensor() = default;
  explicit RealCurvatureTensor(int m);

  int dim() const noexcept { return m_; }
  double operator()(int i, int j, int k, int l) const { return entries_[offset(i, j, k, l)]; }
  double& operator()(int i, int j, int k, int l) { return entries_[offset(i, j, k, l)]; }
  std::span<const double> entries() const noexcept { return entries_; }

  // J u_i = u_{n+i}, J u_{n+i} = -u_i.
  RMatrix complex_structure() const;

  double evaluate(const RVector& x, const RVector& y, const RVector& z, const RVector& w) const;
  double sectional(const RVector& x, const RVector& y) const;

  struct Defects {
    double antisymmetry;
    double pair_symmetry;
    double bianchi;
  };
  Defects symmetry_defects() const;

 private:
  std::size_t offset(int i, int j, int k, int l) const noexcept {
    const auto m = static_cast<std::size_t>(m_);
    return ((static_cast<std::size_t>(i) * m + j) * m + k) * m + l;
  }

  int m_ = 0;
  std::vector<double> entries_;
};

RealCurvatureTensor realify(const KahlerCurvatureTensor& t);

// (1,0)-part coordinates of a real vector: xi_i = (x_i + sqrt(-1) x_{n+i}) / sqrt(2).
CVector holomorphic_part(const RVector& x);

}  // namespace kahler
