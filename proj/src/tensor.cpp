#include "kahler/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "kahler/errors.hpp"

namespace kahler {

KahlerCurvatureTensor::KahlerCurvatureTensor(int n) : n_(n) {
  if (n < 1) throw StructuralError("complex dimension must be >= 1");
  entries_.assign(static_cast<std::size_t>(n) * n * n * n, Complex{});
}

KahlerCurvatureTensor::KahlerCurvatureTensor(int n, std::vector<Complex> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n < 1) throw StructuralError("complex dimension must be >= 1");
  const auto expected = static_cast<std::size_t>(n) * n * n * n;
  if (entries_.size() != expected) {
    std::ostringstream msg;
    msg << "entries array has " << entries_.size() << " elements, expected n^4 = " << expected;
    throw StructuralError(msg.str());
  }
}

double KahlerCurvatureTensor::norm() const {
  double s = 0.0;
  for (const auto& z : entries_) s += std::norm(z);
  return std::sqrt(s);
}

KahlerCurvatureTensor& KahlerCurvatureTensor::operator+=(const KahlerCurvatureTensor& other) {
  if (other.n_ != n_) throw StructuralError("dimension mismatch in tensor sum");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

KahlerCurvatureTensor& KahlerCurvatureTensor::operator-=(const KahlerCurvatureTensor& other) {
  if (other.n_ != n_) throw StructuralError("dimension mismatch in tensor difference");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

KahlerCurvatureTensor& KahlerCurvatureTensor::operator*=(double s) {
  for (auto& z : entries_) z *= s;
  return *this;
}

double max_abs_difference(const KahlerCurvatureTensor& a, const KahlerCurvatureTensor& b) {
  if (a.dim() != b.dim()) throw StructuralError("dimension mismatch");
  double worst = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) worst = std::max(worst, std::abs(ea[i] - eb[i]));
  return worst;
}

std::vector<OrbitMember> symmetry_orbit(const Index4& seed) {
  std::vector<OrbitMember> orbit{{seed, false}};
  auto contains = [&](const OrbitMember& m) {
    return std::any_of(orbit.begin(), orbit.end(), [&](const OrbitMember& o) {
      return o.indices == m.indices && o.conjugated == m.conjugated;
    });
  };
  for (std::size_t k = 0; k < orbit.size(); ++k) {
    const auto [i, c] = orbit[k];
    const OrbitMember images[3] = {
        {{i[2], i[1], i[0], i[3]}, c},
        {{i[0], i[3], i[2], i[1]}, c},
        {{i[1], i[0], i[3], i[2]}, !c},
    };
    for (const auto& img : images) {
      if (!contains(img)) orbit.push_back(img);
    }
  }
  return orbit;
}

namespace {

using OrbitTable = std::vector<std::vector<OrbitMember>>;

// Every orbit of the symmetry group acting on n^4 index tuples, each listed
// representative (lexicographically smallest tuple) first.
const OrbitTable& orbit_table(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<OrbitTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    slot = std::make_unique<OrbitTable>();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            const Index4 idx{a, b, c, d};
            auto orbit = symmetry_orbit(idx);
            const bool rep = std::none_of(orbit.begin(), orbit.end(),
                                          [&](const OrbitMember& m) { return m.indices < idx; });
            if (rep) slot->push_back(std::move(orbit));
          }
  }
  return *slot;
}

template <typename Fn>
void for_each_index(int n, Fn&& fn) {
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) fn(Index4{a, b, c, d});
}

Complex apply(const OrbitMember& m, Complex z) { return m.conjugated ? std::conj(z) : z; }

}  // namespace

std::vector<SymmetryViolation> validate(const KahlerCurvatureTensor& t, double tol) {
  std::vector<SymmetryViolation> out;
  for (const auto& orbit : orbit_table(t.dim())) {
    const Index4& rep = orbit.front().indices;
    const Complex ref = t(rep);
    SymmetryViolation worst{ViolationKind::IndexSymmetry, rep, rep, 0.0};
    for (const auto& m : orbit) {
      const double defect = std::abs(t(m.indices) - apply(m, ref));
      if (defect > worst.defect) {
        worst.defect = defect;
        worst.partner = m.indices;
        worst.kind = m.conjugated ? ViolationKind::Hermitian : ViolationKind::IndexSymmetry;
      }
    }
    if (worst.defect > tol) out.push_back(worst);
  }
  return out;
}

double max_symmetry_defect(const KahlerCurvatureTensor& t) {
  double worst = 0.0;
  for (const auto& v : validate(t, 0.0)) worst = std::max(worst, v.defect);
  return worst;
}

KahlerCurvatureTensor symmetrize(const KahlerCurvatureTensor& t) {
  KahlerCurvatureTensor out(t.dim());
  for (const auto& orbit : orbit_table(t.dim())) {
    Complex avg{};
    for (const auto& m : orbit) avg += apply(m, t(m.indices));
    avg /= static_cast<double>(orbit.size());
    for (const auto& m : orbit) out(m.indices) = apply(m, avg);
  }
  return out;
}

Complex contract(const KahlerCurvatureTensor& t, const CVector& x, const CVector& y,
                 const CVector& z, const CVector& w) {
  const int n = t.dim();
  if (x.size() != n || y.size() != n || z.size() != n || w.size() != n) {
    throw StructuralError("vector length does not match tensor dimension");
  }
  Complex total{};
  for (int a = 0; a < n; ++a) {
    if (x[a] == Complex{}) continue;
    for (int b = 0; b < n; ++b) {
      const Complex xy = x[a] * std::conj(y[b]);
      if (xy == Complex{}) continue;
      Complex inner_sum{};
      for (int c = 0; c < n; ++c) {
        Complex row{};
        for (int d = 0; d < n; ++d) row += t(a, b, c, d) * std::conj(w[d]);
        inner_sum += z[c] * row;
      }
      total += xy * inner_sum;
    }
  }
  return total;
}

double evaluate_bisectional(const KahlerCurvatureTensor& t, const CVector& x, const CVector& y) {
  const Complex v = contract(t, x, x, y, y);
  if (std::abs(v.imag()) > 1e-9 * (1.0 + std::abs(v.real()))) {
    std::ostringstream msg;
    msg << "bisectional curvature has imaginary residue " << v.imag()
        << "; tensor violates Hermitian symmetry";
    throw SymmetryViolationError(msg.str());
  }
  return v.real();
}

double holomorphic_sectional(const KahlerCurvatureTensor& t, const CVector& x) {
  if (x.size() != t.dim()) throw StructuralError("vector length does not match tensor dimension");
  if (std::abs(x.norm() - 1.0) > 1e-12) throw PreconditionError("holomorphic_sectional needs a unit vector");
  return evaluate_bisectional(t, x, x);
}

bool is_unitary(const CMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  const CMatrix defect = u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols());
  return defect.cwiseAbs().maxCoeff() <= tol;
}

KahlerCurvatureTensor conjugate_frame(const KahlerCurvatureTensor& t, const CMatrix& u) {
  const int n = t.dim();
  if (u.rows() != n || u.cols() != n) throw StructuralError("frame change has wrong shape");
  if (!is_unitary(u)) throw PreconditionError("frame change is not unitary");

  // Transform one slot at a time; each pass is O(n^5).
  KahlerCurvatureTensor cur = t;
  for (int slot = 0; slot < 4; ++slot) {
    const bool barred = slot % 2 == 1;
    KahlerCurvatureTensor next(n);
    for_each_index(n, [&](const Index4& idx) {
      Complex s{};
      Index4 src = idx;
      for (int k = 0; k < n; ++k) {
        src[slot] = k;
        const Complex coeff = barred ? std::conj(u(idx[slot], k)) : u(idx[slot], k);
        s += coeff * cur(src);
      }
      next(idx) = s;
    });
    cur = std::move(next);
  }
  return cur;
}

CMatrix ricci(const KahlerCurvatureTensor& t) {
  const int n = t.dim();
  CMatrix ric = CMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int m = 0; m < n; ++m) ric(a, b) += t(a, b, m, m);
  return ric;
}

RVector ricci_eigenvalues(const KahlerCurvatureTensor& t) {
  const CMatrix ric = ricci(t);
  const CMatrix herm = 0.5 * (ric + ric.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double scalar(const KahlerCurvatureTensor& t) {
  double s = 0.0;
  for (int a = 0; a < t.dim(); ++a)
    for (int b = 0; b < t.dim(); ++b) s += t(a, a, b, b).real();
  const double trace = ricci(t).trace().real();
  if (std::abs(trace - s) > 1e-10 * (1.0 + std::abs(s))) {
    throw InternalAssertionError("scalar curvature disagrees with trace of Ricci");
  }
  return s;
}

RealCurvatureTensor::RealCurvatureTensor(int m) : m_(m) {
  if (m < 2 || m % 2 != 0) throw StructuralError("real dimension must be even and >= 2");
  entries_.assign(static_cast<std::size_t>(m) * m * m * m, 0.0);
}

RMatrix RealCurvatureTensor::complex_structure() const {
  const int n = m_ / 2;
  RMatrix j = RMatrix::Zero(m_, m_);
  for (int i = 0; i < n; ++i) {
    j(n + i, i) = 1.0;   // J u_i = u_{n+i}
    j(i, n + i) = -1.0;  // J u_{n+i} = -u_i
  }
  return j;
}

double RealCurvatureTensor::evaluate(const RVector& x, const RVector& y, const RVector& z,
                                     const RVector& w) const {
  if (x.size() != m_ || y.size() != m_ || z.size() != m_ || w.size() != m_) {
    throw StructuralError("vector length does not match real dimension");
  }
  double total = 0.0;
  for (int i = 0; i < m_; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < m_; ++j) {
      const double xy = x[i] * y[j];
      if (xy == 0.0) continue;
      double s = 0.0;
      for (int k = 0; k < m_; ++k) {
        double row = 0.0;
        for (int l = 0; l < m_; ++l) row += (*this)(i, j, k, l) * w[l];
        s += z[k] * row;
      }
      total += xy * s;
    }
  }
  return total;
}

double RealCurvatureTensor::sectional(const RVector& x, const RVector& y) const {
  const double area = x.squaredNorm() * y.squaredNorm() - x.dot(y) * x.dot(y);
  if (area <= 1e-300) throw PreconditionError("sectional curvature of a degenerate plane");
  return evaluate(x, y, y, x) / area;
}

RealCurvatureTensor::Defects RealCurvatureTensor::symmetry_defects() const {
  Defects d{0.0, 0.0, 0.0};
  const auto& r = *this;
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j)
      for (int k = 0; k < m_; ++k)
        for (int l = 0; l < m_; ++l) {
          const double v = r(i, j, k, l);
          d.antisymmetry = std::max({d.antisymmetry, std::abs(v + r(j, i, k, l)), std::abs(v + r(i, j, l, k))});
          d.pair_symmetry = std::max(d.pair_symmetry, std::abs(v - r(k, l, i, j)));
          d.bianchi = std::max(d.bianchi, std::abs(v + r(j, k, i, l) + r(k, i, j, l)));
        }
  return d;
}

CVector holomorphic_part(const RVector& x) {
  if (x.size() % 2 != 0) throw StructuralError("real vector must have even length");
  const int n = static_cast<int>(x.size() / 2);
  CVector xi(n);
  for (int i = 0; i < n; ++i) xi[i] = Complex(x[i], x[n + i]) / std::sqrt(2.0);
  return xi;
}

RealCurvatureTensor realify(const KahlerCurvatureTensor& t) {
  // For real X, Y, Z, W with (1,0)-parts xi, eta, zeta, omega:
  //   R(X, Y, Z, W) = 2 Re( R(xi, eta, zeta, omega) - R(xi, eta, omega, zeta) )
  // where R(a, b, c, d) = sum R_{p qbar r sbar} a_p conj(b_q) c_r conj(d_s).
  const int n = t.dim();
  const int m = 2 * n;
  RealCurvatureTensor out(m);
  const double h = 1.0 / std::sqrt(2.0);
  auto coeff = [&](int i) { return i < n ? Complex(h, 0.0) : Complex(0.0, h); };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          const int p = i % n, q = j % n, r = k % n, s = l % n;
          const Complex head = coeff(i) * std::conj(coeff(j));
          const Complex direct = t(p, q, r, s) * coeff(k) * std::conj(coeff(l));
          const Complex swapped = t(p, q, s, r) * coeff(l) * std::conj(coeff(k));
          out(i, j, k, l) = 2.0 * (head * (direct - swapped)).real();
        }
  return out;
}

}  // namespace kahler
