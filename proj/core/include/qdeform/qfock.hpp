#pragma once

// Truncated matrix realization of the symmetric q-oscillator algebra.

#include <complex>

#include <Eigen/Dense>

#include "qdeform/qnum.hpp"

namespace qdeform {

// Extended precision: at q = 0.5 the entries [n] reach 2e4 by dim = 16, and
// double rounding alone would exceed 1e-13 in absolute terms.
using LongComplexMatrix =
    Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
using LongComplexVector = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, 1>;
using LongRealMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

struct LadderTriple {
  LongComplexMatrix a;
  LongComplexMatrix a_dag;
  LongRealMatrix number;
  int dim = 0;
  QParam q{1.0};
};

/// a|n> = sqrt([n]) |n-1>, a_dag = a^H, N = diag(0..dim-1). dim >= 2.
LadderTriple build_ladder(int dim, const QParam& q);

/// Max-norm residuals on the leading (dim-1) x (dim-1) block. The last row
/// and column are exempt: the relations cannot close in finite dimension.
struct AlgebraResiduals {
  double deformed_commutator = 0.0;  ///< a a^+ - q a^+ a - q^{-N}
  double number_raising = 0.0;       ///< [N, a^+] - a^+
  double number_lowering = 0.0;      ///< [N, a] + a
  double number_product = 0.0;       ///< a^+ a - [N]
  double shifted_product = 0.0;      ///< a a^+ - [N+1]

  double max() const noexcept;
};

AlgebraResiduals algebra_residuals(const LadderTriple& t);

/// (a^+)^n / sqrt([n]!) e_0.
LongComplexVector fock_state(int n, const LadderTriple& t);

}  // namespace qdeform
