#include "kahler/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "kahler/errors.hpp"
#include "kahler/models.hpp"
#include "kahler/random.hpp"

namespace kahler {

std::string to_string(const BlockTag& tag) {
  std::ostringstream s;
  switch (tag.kind) {
    case BlockKind::Flat: s << "Flat"; break;
    case BlockKind::FubiniStudyLike: s << "FubiniStudyLike(" << tag.parameter << ")"; break;
    case BlockKind::Surface: s << "Surface(" << tag.parameter << ")"; break;
    case BlockKind::Unclassified: s << "Unclassified"; break;
  }
  return s.str();
}

std::string to_string(TheoremCase c) {
  switch (c) {
    case TheoremCase::Case1: return "Case1";
    case TheoremCase::Case2: return "Case2";
    case TheoremCase::Violation: return "Violation";
  }
  return "?";
}

KahlerCurvatureTensor restrict_to_block(const KahlerCurvatureTensor& adapted, std::span<const int> indices) {
  const auto k = static_cast<int>(indices.size());
  if (k < 1) throw StructuralError("empty block");
  KahlerCurvatureTensor out(k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c)
        for (int d = 0; d < k; ++d) out(a, b, c, d) = adapted(indices[a], indices[b], indices[c], indices[d]);
  return out;
}

double max_mixed_component(const KahlerCurvatureTensor& t, const ProductStructure& s) {
  const int n = t.dim();
  std::vector<int> owner(n, -1);
  for (std::size_t b = 0; b < s.blocks.size(); ++b)
    for (int i : s.blocks[b].indices) {
      if (i < 0 || i >= n || owner[i] != -1) throw StructuralError("blocks do not partition the frame");
      owner[i] = static_cast<int>(b);
    }
  if (std::find(owner.begin(), owner.end(), -1) != owner.end()) {
    throw StructuralError("blocks do not cover the frame");
  }
  const KahlerCurvatureTensor adapted = conjugate_frame(t, s.change_of_frame);
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const int o = owner[a];
          if (owner[b] == o && owner[c] == o && owner[d] == o) continue;
          worst = std::max(worst, std::abs(adapted(a, b, c, d)));
        }
  return worst;
}

namespace {

// (M^{(cd)})_{ab} = R_{a bbar c dbar}; the family is closed under adjoints.
std::vector<CMatrix> endomorphisms(const KahlerCurvatureTensor& t) {
  const int n = t.dim();
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d) {
      CMatrix m(n, n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) m(a, b) = t(a, b, c, d);
      out.push_back(std::move(m));
    }
  return out;
}

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void join(int a, int b) { parent[find(a)] = find(b); }
};

struct Attempt {
  std::vector<std::vector<int>> groups;  // columns of `basis` per block
  CMatrix basis;                         // orthonormal columns spanning the nonflat part
  bool degenerate;
};

Attempt split_nonflat(const std::vector<CMatrix>& family, const CMatrix& q, double tol, Rng& rng) {
  const auto r = static_cast<int>(q.cols());
  const int n = static_cast<int>(q.rows());
  CMatrix h = CMatrix::Zero(r, r);
  for (int c = 0; c < n; ++c)
    for (int d = c; d < n; ++d) {
      const Complex z(standard_normal(rng), c == d ? 0.0 : standard_normal(rng));
      const CMatrix& m = family[static_cast<std::size_t>(c) * n + d];
      h += z * (q.adjoint() * m * q);
      if (c != d) h += std::conj(z) * (q.adjoint() * family[static_cast<std::size_t>(d) * n + c] * q);
    }
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const auto& ev = es.eigenvalues();
  const double spread = 1e-6 * (1.0 + ev.cwiseAbs().maxCoeff());
  bool degenerate = false;
  for (int i = 0; i + 1 < r; ++i) degenerate = degenerate || (ev[i + 1] - ev[i] <= spread);

  Attempt out;
  out.basis = q * es.eigenvectors();
  out.degenerate = degenerate;
  DisjointSets sets(r);
  for (const auto& m : family) {
    const CMatrix coupling = out.basis.adjoint() * m * out.basis;
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j)
        if (std::abs(coupling(i, j)) > tol || std::abs(coupling(j, i)) > tol) sets.join(i, j);
  }
  std::vector<int> root_order;
  for (int i = 0; i < r; ++i) {
    const int root = sets.find(i);
    auto it = std::find(root_order.begin(), root_order.end(), root);
    if (it == root_order.end()) {
      root_order.push_back(root);
      out.groups.push_back({i});
    } else {
      out.groups[static_cast<std::size_t>(it - root_order.begin())].push_back(i);
    }
  }
  return out;
}

}  // namespace

ProductStructure detect_blocks(const KahlerCurvatureTensor& t, double tol, std::uint64_t seed) {
  const int n = t.dim();
  const auto family = endomorphisms(t);

  // Common kernel of the family: flat directions.
  CMatrix gram = CMatrix::Zero(n, n);
  for (const auto& m : family) gram += m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<CMatrix> kernel_solver(0.5 * (gram + gram.adjoint()));
  const auto& kev = kernel_solver.eigenvalues();
  std::vector<int> flat_cols, live_cols;
  for (int i = 0; i < n; ++i) (std::sqrt(std::max(kev[i], 0.0)) <= tol ? flat_cols : live_cols).push_back(i);
  CMatrix flat_basis(n, static_cast<Eigen::Index>(flat_cols.size()));
  for (std::size_t i = 0; i < flat_cols.size(); ++i) flat_basis.col(i) = kernel_solver.eigenvectors().col(flat_cols[i]);
  CMatrix live(n, static_cast<Eigen::Index>(live_cols.size()));
  for (std::size_t i = 0; i < live_cols.size(); ++i) live.col(i) = kernel_solver.eigenvectors().col(live_cols[i]);

  Rng rng = make_rng(seed, 0xdec0);
  ProductStructure best;
  bool have_best = false;
  constexpr int kAttempts = 3;
  for (int attempt = 1; attempt <= kAttempts; ++attempt) {
    Attempt split;
    if (live.cols() > 0) {
      split = split_nonflat(family, live, tol, rng);
    } else {
      split.degenerate = false;
    }

    // Adapted frame: nonflat groups first, then flat singletons. Frame vector
    // e'_a = sum_i U_{ai} e_i, so U is the adjoint of the column basis.
    CMatrix columns(n, n);
    ProductStructure s;
    int next = 0;
    for (const auto& g : split.groups) {
      Block b;
      for (int col : g) {
        columns.col(next) = split.basis.col(col);
        b.indices.push_back(next++);
      }
      s.blocks.push_back(std::move(b));
    }
    for (Eigen::Index i = 0; i < flat_basis.cols(); ++i) {
      columns.col(next) = flat_basis.col(i);
      s.blocks.push_back(Block{{next++}, {}});
    }
    s.change_of_frame = columns.adjoint();
    s.degeneracy_warning = split.degenerate;
    s.attempts = attempt;

    const bool ok = max_mixed_component(t, s) <= tol;
    if (ok && !split.degenerate) {
      best = std::move(s);
      have_best = true;
      break;
    }
    if (ok && (!have_best || s.blocks.size() > best.blocks.size())) {
      best = std::move(s);
      have_best = true;
    }
  }
  if (!have_best) {
    // Nothing verified: fall back to the trivial partition.
    best = ProductStructure{};
    Block all;
    all.indices.resize(n);
    std::iota(all.indices.begin(), all.indices.end(), 0);
    best.blocks.push_back(std::move(all));
    best.change_of_frame = CMatrix::Identity(n, n);
    best.degeneracy_warning = true;
    best.attempts = kAttempts;
  } else if (best.attempts == kAttempts && best.degeneracy_warning) {
    best.degeneracy_warning = true;
  }

  const KahlerCurvatureTensor adapted = conjugate_frame(t, best.change_of_frame);
  for (auto& b : best.blocks) b.tag = classify_block(restrict_to_block(adapted, b.indices), tol);
  return best;
}

BlockTag classify_block(const KahlerCurvatureTensor& block, double tol) {
  const int n = block.dim();
  if (block.norm() <= tol) return {BlockKind::Flat, 0.0};
  if (n == 1) return {BlockKind::Surface, block(0, 0, 0, 0).real()};
  const double c = scalar(block) / (n * (n + 1.0));
  KahlerCurvatureTensor model(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      model(a, a, b, b) += c;
      model(a, b, b, a) += c;
    }
  if ((block - model).norm() <= tol) return {BlockKind::FubiniStudyLike, c};
  return {BlockKind::Unclassified, 0.0};
}

CaseReport theorem_case(const ProductStructure& structure, std::span<const double> min_holsec,
                        std::span<const bool> compact, double tol) {
  const auto k = structure.blocks.size();
  if (min_holsec.size() != k || compact.size() != k) {
    throw PreconditionError("per-block lists must align with the block list");
  }
  CaseReport rep;
  std::vector<int> negative;
  for (std::size_t i = 0; i < k; ++i) {
    rep.block_dims.push_back(static_cast<int>(structure.blocks[i].indices.size()));
    if (min_holsec[i] < -tol) negative.push_back(static_cast<int>(i));
  }

  if (negative.empty()) {
    rep.kind = TheoremCase::Case1;
    for (std::size_t i = 0; i < k; ++i) {
      if (!compact[i] && rep.block_dims[i] >= 2 && structure.blocks[i].tag.kind != BlockKind::Flat) {
        rep.notes.push_back("block " + std::to_string(i) +
                            " is flagged noncompact although its holomorphic sectional curvature is nonnegative");
      }
    }
    return rep;
  }

  // Every ordered (negative, other) pair must satisfy the cross-factor bound.
  for (int y : negative) {
    for (std::size_t i = 0; i < k; ++i) {
      if (static_cast<int>(i) == y) continue;
      const double required = -min_holsec[y];
      if (min_holsec[i] < required - tol) {
        rep.witnesses.push_back({y, static_cast<int>(i), min_holsec[i], required});
      }
    }
  }
  if (negative.size() > 1) {
    rep.kind = TheoremCase::Violation;
    rep.notes.push_back("more than one block has negative holomorphic sectional curvature");
    return rep;
  }
  const int y = negative.front();
  rep.designated_block = y;
  if (!rep.witnesses.empty()) {
    rep.kind = TheoremCase::Violation;
    return rep;
  }
  rep.kind = TheoremCase::Case2;
  if (rep.block_dims[y] == 1) {
    rep.notes.push_back("Y is a surface factor with Gauss curvature negative somewhere");
  } else {
    rep.notes.push_back("Y has complex dimension " + std::to_string(rep.block_dims[y]) +
                        (compact[y] ? " and is flagged compact" : " and is flagged noncompact"));
  }
  return rep;
}

}  // namespace kahler
