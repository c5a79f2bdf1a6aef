#include "qdeform/qfock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdeform/errors.hpp"

namespace qdeform {

namespace {

double interior_norm(const LongComplexMatrix& m) {
  const Eigen::Index n = m.rows() - 1;
  return static_cast<double>(m.topLeftCorner(n, n).cwiseAbs().maxCoeff());
}

LongComplexMatrix basic_diagonal(const LadderTriple& t, int shift) {
  LongComplexVector d(t.dim);
  for (int n = 0; n < t.dim; ++n) d(n) = basic_number(n + shift, t.q);
  return d.asDiagonal();
}

}  // namespace

double AlgebraResiduals::max() const noexcept {
  return std::max({deformed_commutator, number_raising, number_lowering,
                   number_product, shifted_product});
}

LadderTriple build_ladder(int dim, const QParam& q) {
  if (dim < 2) {
    throw DomainError("build_ladder needs dim >= 2, got " + std::to_string(dim));
  }
  LadderTriple t{LongComplexMatrix::Zero(dim, dim), {}, LongRealMatrix::Zero(dim, dim),
                 dim, q};
  for (int n = 1; n < dim; ++n) t.a(n - 1, n) = std::sqrt(basic_number(n, q));
  t.a_dag = t.a.adjoint();
  for (int n = 0; n < dim; ++n) t.number(n, n) = n;
  return t;
}

AlgebraResiduals algebra_residuals(const LadderTriple& t) {
  const LongComplexMatrix n = t.number.cast<std::complex<long double>>();
  const LongComplexMatrix aad = t.a * t.a_dag;
  const LongComplexMatrix ada = t.a_dag * t.a;

  // The relation is written with the raw parameter; q^{-N} is not symmetric.
  const long double qv = t.q.value();
  LongComplexVector q_minus_n(t.dim);
  for (int k = 0; k < t.dim; ++k) q_minus_n(k) = std::pow(qv, static_cast<long double>(-k));
  const LongComplexMatrix q_minus_n_mat = q_minus_n.asDiagonal();

  AlgebraResiduals r;
  r.deformed_commutator = interior_norm(aad - qv * ada - q_minus_n_mat);
  r.number_raising = interior_norm(n * t.a_dag - t.a_dag * n - t.a_dag);
  r.number_lowering = interior_norm(n * t.a - t.a * n + t.a);
  r.number_product = interior_norm(ada - basic_diagonal(t, 0));
  r.shifted_product = interior_norm(aad - basic_diagonal(t, 1));
  return r;
}

LongComplexVector fock_state(int n, const LadderTriple& t) {
  if (n < 0 || n >= t.dim) {
    throw DomainError("fock_state: n = " + std::to_string(n) +
                      " outside [0, " + std::to_string(t.dim) + ")");
  }
  LongComplexVector v = LongComplexVector::Zero(t.dim);
  v(0) = 1.0L;
  for (int k = 0; k < n; ++k) v = t.a_dag * v;
  return v / std::sqrt(basic_factorial(n, t.q));
}

}  // namespace qdeform
