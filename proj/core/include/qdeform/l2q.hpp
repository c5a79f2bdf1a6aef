#pragma once

// Truncated q-lattices {+-a q^m}, functions sampled on them, the q-inner
// product and the position/momentum operators.
//
// Storage order: positive branch m = m_min..m_max (x descending toward 0),
// then the negative branch in the same m order. Only odd exponents carry
// integration weight; even exponents are stored because the Jackson
// derivative couples the two parities.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdeform/qcalculus.hpp"
#include "qdeform/qnum.hpp"

namespace qdeform {

class QLattice {
 public:
  /// Requires m_min < m_max, a > 0 and a non-classical q (q > 1 is read as 1/q).
  QLattice(const QParam& q, int m_min, int m_max, double a = 1.0);

  const QParam& q() const noexcept { return q_; }
  /// The ratio of consecutive same-sign points, in (0, 1).
  double ratio() const noexcept { return ratio_; }
  int m_min() const noexcept { return m_min_; }
  int m_max() const noexcept { return m_max_; }
  double scale() const noexcept { return a_; }

  Eigen::Index branch_size() const noexcept { return m_max_ - m_min_ + 1; }
  Eigen::Index size() const noexcept { return 2 * branch_size(); }

  int exponent(Eigen::Index i) const noexcept {
    return m_min_ + static_cast<int>(i % branch_size());
  }
  int sign(Eigen::Index i) const noexcept { return i < branch_size() ? 1 : -1; }
  bool odd(Eigen::Index i) const noexcept { return (exponent(i) & 1) != 0; }
  double x(Eigen::Index i) const noexcept { return x_[static_cast<std::size_t>(i)]; }
  /// a (1/q - q) q^m on odd exponents, 0 on even ones.
  double weight(Eigen::Index i) const noexcept { return w_[static_cast<std::size_t>(i)]; }
  /// Index of the point sign * a q^m; throws DomainError when out of range.
  Eigen::Index index(int sign, int m) const;

  /// Indices of the odd-exponent points in storage order.
  const std::vector<Eigen::Index>& odd_indices() const noexcept { return odd_; }

  /// a |q^m| evaluated in extended precision, for any m.
  long double magnitude(int m) const noexcept;

  bool same_as(const QLattice& other) const noexcept;

 private:
  QParam q_;
  double ratio_;
  int m_min_;
  int m_max_;
  double a_;
  std::vector<double> x_;
  std::vector<double> w_;
  std::vector<Eigen::Index> odd_;
};

using LatticePtr = std::shared_ptr<const QLattice>;

LatticePtr build_lattice(const QParam& q, int m_min, int m_max, double a = 1.0);

/// q = 0.9, m = -15..60, a = 1.
LatticePtr default_lattice();
/// Lattice with ratio q covering the same |x| range as default_lattice().
LatticePtr default_lattice(const QParam& q);

struct LatticeFunction {
  LatticePtr lattice;
  Eigen::VectorXcd samples;
  Complex value_at_zero{0.0, 0.0};
};

/// Pointwise evaluation, value_at_zero = f(0). Rejects non-finite values.
LatticeFunction sample(const Evaluable& f, const LatticePtr& lattice);

/// Sum over odd-exponent points of weight * conj(phi) * psi.
Complex inner_product(const LatticeFunction& phi, const LatticeFunction& psi);
double norm(const LatticeFunction& psi);

/// 1/sqrt(x (1/q - q)) at sign * a q^{2n+1}, zero elsewhere.
LatticeFunction basis_function(int n, const LatticePtr& lattice, int sign = 1);

LatticeFunction apply_position(const LatticeFunction& psi);
/// -i hbar D psi. At the innermost exponent psi(qx) is taken on the line from
/// value_at_zero to the innermost sample; beyond the outermost point it is 0.
LatticeFunction apply_momentum(const LatticeFunction& psi, double hbar = 1.0);

struct OperatorMatrix {
  /// all: acts on every stored sample. odd: acts on the odd-exponent samples
  /// only, in odd_indices() order.
  enum class Support { all, odd };

  LatticePtr lattice;
  Support support = Support::all;
  Eigen::MatrixXcd matrix;
  bool symmetrized = false;

  Eigen::Index dimension() const noexcept { return matrix.rows(); }
  /// Output samples outside the support are zero.
  LatticeFunction apply(const LatticeFunction& psi) const;
};

OperatorMatrix position_operator(const LatticePtr& lattice);
/// Matrix form of apply_momentum with value_at_zero replaced by the mean of
/// the two innermost samples, which keeps the operator linear.
OperatorMatrix momentum_operator(const LatticePtr& lattice, double hbar = 1.0);
/// The bare Jackson derivative (no -i hbar), anti-Hermitian in the q-metric.
OperatorMatrix jackson_derivative_operator(const LatticePtr& lattice);
OperatorMatrix identity_operator(const LatticePtr& lattice,
                                 OperatorMatrix::Support support =
                                     OperatorMatrix::Support::all);
OperatorMatrix restrict_to_odd(const OperatorMatrix& a);
/// a * b (apply b first).
OperatorMatrix product(const OperatorMatrix& a, const OperatorMatrix& b);

/// exp(-(ln|x| - mu)^2 / (2 sigma^2)): gaussian in ln|x|, vanishing at both
/// ends of a geometric lattice.
struct DecayingEnvelope {
  double mu = 0.0;
  double sigma = 1.0;

  double operator()(double x) const noexcept;
  /// Centred on the lattice in ln|x|, equal to `edge` at the outermost and
  /// innermost points.
  static DecayingEnvelope fitted_to(const QLattice& lattice, double edge = 1e-13);
};

/// Envelope times a random complex polynomial of degree <= 3.
Evaluable decaying_test_function(const DecayingEnvelope& envelope,
                                 std::mt19937_64& rng);

/// max over trials of |<phi, A psi> - <A phi, psi>| / (|phi| |psi|) for
/// random decaying test pairs. The envelope defaults to fitted_to(lattice).
double hermiticity_residual(const OperatorMatrix& a, int trials,
                            std::uint64_t seed = 20240611,
                            std::optional<DecayingEnvelope> envelope = {});

/// W^{1/2} A W^{-1/2} on the odd support. Rejects full-support operators.
OperatorMatrix symmetrize(const OperatorMatrix& a);
OperatorMatrix unsymmetrize(const OperatorMatrix& a);

/// max |S_ij - conj(S_ji)| / max |S_ij| over rows and columns at least
/// `boundary` positions away from either end of each branch.
double self_adjointness_residual(const OperatorMatrix& s, int boundary = 0);

// Serialization. Columns: sign,m,x,weight,re,im at 17 significant digits.

void write_csv(const LatticeFunction& psi, std::ostream& out);
/// Rebuilds the lattice from the rows (ratio and scale inferred).
LatticeFunction read_csv(std::istream& in);
/// Validates the rows against a known lattice.
LatticeFunction read_csv(std::istream& in, const LatticePtr& lattice);

std::string to_json(const LatticeFunction& psi);
LatticeFunction lattice_function_from_json(const std::string& text);

inline constexpr int kSchemaVersion = 1;

}  // namespace qdeform
