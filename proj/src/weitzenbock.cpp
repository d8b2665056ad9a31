#include "kahler/weitzenbock.hpp"

#include <cmath>

#include "kahler/errors.hpp"

namespace kahler {

namespace {
void check_length(const KahlerCurvatureTensor& t, const DiagonalOneOneForm& eta) {
  if (eta.a.size() != t.dim()) throw StructuralError("form length does not match tensor dimension");
  if (!eta.a.allFinite()) throw PreconditionError("form coefficients must be finite");
}
}  // namespace

double curvature_term(const KahlerCurvatureTensor& t, const DiagonalOneOneForm& eta) {
  check_length(t, eta);
  double total = 0.0;
  for (int i = 0; i < t.dim(); ++i)
    for (int j = i + 1; j < t.dim(); ++j) {
      const double diff = eta.a[i] - eta.a[j];
      total += diff * diff * t(i, i, j, j).real();
    }
  return total;
}

ParallelConsequenceReport parallel_consequence_check(const KahlerCurvatureTensor& t,
                                                     const DiagonalOneOneForm& eta, double tol) {
  ParallelConsequenceReport rep;
  rep.curvature_term = curvature_term(t, eta);
  rep.applicable = std::abs(rep.curvature_term) <= tol;
  for (int i = 0; i < t.dim(); ++i)
    for (int j = i + 1; j < t.dim(); ++j) {
      const double diff = eta.a[i] - eta.a[j];
      if (diff * diff > tol && t(i, i, j, j).real() > tol) rep.offending_pairs.emplace_back(i, j);
    }
  return rep;
}

}  // namespace kahler
