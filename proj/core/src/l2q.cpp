#include "qdeform/l2q.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qdeform/errors.hpp"

namespace qdeform {

namespace {

using LongComplex = std::complex<long double>;
using Support = OperatorMatrix::Support;

void require_same(const LatticePtr& a, const LatticePtr& b, const char* what) {
  if (!a || !b || !a->same_as(*b)) {
    throw LatticeMismatchError(std::string(what) +
                               ": arguments live on different lattices");
  }
}

void require_sized(const LatticeFunction& psi, const char* what) {
  if (!psi.lattice) throw DomainError(std::string(what) + ": function has no lattice");
  if (psi.samples.size() != psi.lattice->size()) {
    throw DomainError(std::string(what) + ": sample count does not match lattice");
  }
}

bool finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Mean of the two innermost samples of the given parity class.
Complex inner_mean(const Eigen::VectorXcd& samples, const QLattice& lat,
                   bool odd_only) {
  int m = lat.m_max();
  if (odd_only && (m & 1) == 0) --m;
  return 0.5 * (samples(lat.index(1, m)) + samples(lat.index(-1, m)));
}

OperatorMatrix derivative_matrix(const LatticePtr& lattice, Complex factor) {
  const QLattice& lat = *lattice;
  const double p = lat.ratio();
  const Eigen::Index n = lat.size();
  OperatorMatrix op{lattice, Support::all, Eigen::MatrixXcd::Zero(n, n), false};
  const Eigen::Index zp = lat.index(1, lat.m_max());
  const Eigen::Index zm = lat.index(-1, lat.m_max());
  for (Eigen::Index i = 0; i < n; ++i) {
    const int m = lat.exponent(i);
    const int s = lat.sign(i);
    const Complex c = factor / ((p - 1.0 / p) * lat.x(i));
    if (m < lat.m_max()) {
      op.matrix(i, lat.index(s, m + 1)) += c;
    } else {
      // psi(qx) = psi0 + q (psi_i - psi0), psi0 = (psi_zp + psi_zm) / 2
      op.matrix(i, i) += c * p;
      op.matrix(i, zp) += c * 0.5 * (1.0 - p);
      op.matrix(i, zm) += c * 0.5 * (1.0 - p);
    }
    if (m > lat.m_min()) op.matrix(i, lat.index(s, m - 1)) -= c;
  }
  return op;
}

// Position of each support element within its branch and the branch length.
void branch_positions(const OperatorMatrix& s, std::vector<int>& rank,
                      std::vector<int>& count) {
  const QLattice& lat = *s.lattice;
  const Eigen::Index n = s.dimension();
  rank.assign(static_cast<std::size_t>(n), 0);
  count.assign(static_cast<std::size_t>(n), 0);
  int per_branch = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index i = s.support == Support::odd
                               ? lat.odd_indices()[static_cast<std::size_t>(k)]
                               : k;
    if (lat.sign(i) > 0) ++per_branch;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    rank[static_cast<std::size_t>(k)] = static_cast<int>(k % per_branch);
    count[static_cast<std::size_t>(k)] = per_branch;
  }
}

}  // namespace

QLattice::QLattice(const QParam& q, int m_min, int m_max, double a)
    : q_(q), ratio_(q.canonical()), m_min_(m_min), m_max_(m_max), a_(a) {
  if (q.classical()) {
    throw DomainError("a q-lattice needs q != 1: no geometric lattice exists "
                      "on the classical branch");
  }
  if (m_min >= m_max) {
    throw DomainError("lattice needs m_min < m_max, got " + std::to_string(m_min) +
                      ":" + std::to_string(m_max));
  }
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("lattice scale must be finite and positive");
  }
  const long double p = ratio_;
  const Eigen::Index n = size();
  x_.resize(static_cast<std::size_t>(n));
  w_.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const int m = exponent(i);
    const long double mag = magnitude(m);
    x_[static_cast<std::size_t>(i)] = static_cast<double>(sign(i) * mag);
    w_[static_cast<std::size_t>(i)] =
        odd(i) ? static_cast<double>((1.0L / p - p) * mag) : 0.0;
    if (odd(i)) odd_.push_back(i);
    if (!std::isfinite(x_[static_cast<std::size_t>(i)]) ||
        x_[static_cast<std::size_t>(i)] == 0.0) {
      throw DomainError("lattice point a q^" + std::to_string(m) +
                        " is not representable");
    }
  }
}

long double QLattice::magnitude(int m) const noexcept {
  return static_cast<long double>(a_) *
         std::pow(static_cast<long double>(ratio_), static_cast<long double>(m));
}

Eigen::Index QLattice::index(int s, int m) const {
  if (m < m_min_ || m > m_max_ || (s != 1 && s != -1)) {
    throw DomainError("no lattice point with sign " + std::to_string(s) +
                      " and exponent " + std::to_string(m));
  }
  return (s > 0 ? 0 : branch_size()) + (m - m_min_);
}

bool QLattice::same_as(const QLattice& other) const noexcept {
  if (this == &other) return true;
  const double tol = 8 * std::numeric_limits<double>::epsilon();
  return m_min_ == other.m_min_ && m_max_ == other.m_max_ &&
         std::abs(ratio_ - other.ratio_) <= tol * ratio_ &&
         std::abs(a_ - other.a_) <= tol * a_;
}

LatticePtr build_lattice(const QParam& q, int m_min, int m_max, double a) {
  return std::make_shared<const QLattice>(q, m_min, m_max, a);
}

LatticePtr default_lattice() { return build_lattice(QParam(0.9), -15, 60, 1.0); }

LatticePtr default_lattice(const QParam& q) {
  if (q.classical()) return default_lattice();
  const double scale = std::log(0.9) / std::log(q.canonical());
  return build_lattice(q, static_cast<int>(std::lround(-15 * scale)),
                       static_cast<int>(std::lround(60 * scale)), 1.0);
}

LatticeFunction sample(const Evaluable& f, const LatticePtr& lattice) {
  if (!lattice) throw DomainError("sample: null lattice");
  LatticeFunction out{lattice, Eigen::VectorXcd(lattice->size()), f(0.0)};
  if (!finite(out.value_at_zero)) {
    throw DomainError("sample: function is not finite at x = 0");
  }
  for (Eigen::Index i = 0; i < lattice->size(); ++i) {
    out.samples(i) = f(lattice->x(i));
    if (!finite(out.samples(i))) {
      throw DomainError("sample: non-finite value at x = " +
                        std::to_string(lattice->x(i)));
    }
  }
  return out;
}

Complex inner_product(const LatticeFunction& phi, const LatticeFunction& psi) {
  require_sized(phi, "inner_product");
  require_sized(psi, "inner_product");
  require_same(phi.lattice, psi.lattice, "inner_product");
  LongComplex acc = 0.0L;
  for (const Eigen::Index i : phi.lattice->odd_indices()) {
    const Complex t = phi.lattice->weight(i) * std::conj(phi.samples(i)) * psi.samples(i);
    acc += LongComplex(t.real(), t.imag());
  }
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

double norm(const LatticeFunction& psi) {
  return std::sqrt(std::max(0.0, inner_product(psi, psi).real()));
}

LatticeFunction basis_function(int n, const LatticePtr& lattice, int sign) {
  if (!lattice) throw DomainError("basis_function: null lattice");
  const int m = 2 * n + 1;
  if (m < lattice->m_min() || m > lattice->m_max()) {
    throw DomainError("basis_function: exponent 2n+1 = " + std::to_string(m) +
                      " outside the lattice");
  }
  LatticeFunction out{lattice, Eigen::VectorXcd::Zero(lattice->size()), 0.0};
  const Eigen::Index i = lattice->index(sign, m);
  out.samples(i) = 1.0 / std::sqrt(lattice->weight(i));
  return out;
}

LatticeFunction apply_position(const LatticeFunction& psi) {
  require_sized(psi, "apply_position");
  LatticeFunction out{psi.lattice, psi.samples, 0.0};
  for (Eigen::Index i = 0; i < out.samples.size(); ++i) out.samples(i) *= psi.lattice->x(i);
  return out;
}

LatticeFunction apply_momentum(const LatticeFunction& psi, double hbar) {
  require_sized(psi, "apply_momentum");
  const QLattice& lat = *psi.lattice;
  const double p = lat.ratio();
  const Complex factor(0.0, -hbar);
  LatticeFunction out{psi.lattice, Eigen::VectorXcd(lat.size()), 0.0};
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const int m = lat.exponent(i);
    const int s = lat.sign(i);
    const Complex inner = m < lat.m_max()
                              ? psi.samples(lat.index(s, m + 1))
                              : psi.value_at_zero + p * (psi.samples(i) - psi.value_at_zero);
    const Complex outer = m > lat.m_min() ? psi.samples(lat.index(s, m - 1)) : 0.0;
    out.samples(i) = factor * (inner - outer) / ((p - 1.0 / p) * lat.x(i));
  }
  const Eigen::Index zp = lat.index(1, lat.m_max());
  const Eigen::Index zm = lat.index(-1, lat.m_max());
  out.value_at_zero =
      factor * (psi.samples(zp) - psi.samples(zm)) / (lat.x(zp) - lat.x(zm));
  return out;
}

LatticeFunction OperatorMatrix::apply(const LatticeFunction& psi) const {
  require_sized(psi, "OperatorMatrix::apply");
  require_same(lattice, psi.lattice, "OperatorMatrix::apply");
  const QLattice& lat = *lattice;
  LatticeFunction out{psi.lattice, Eigen::VectorXcd::Zero(lat.size()), 0.0};
  if (support == Support::all) {
    out.samples = matrix * psi.samples;
    out.value_at_zero = inner_mean(out.samples, lat, false);
    return out;
  }
  const auto& odd = lat.odd_indices();
  Eigen::VectorXcd v(static_cast<Eigen::Index>(odd.size()));
  for (std::size_t k = 0; k < odd.size(); ++k) v(static_cast<Eigen::Index>(k)) = psi.samples(odd[k]);
  const Eigen::VectorXcd r = matrix * v;
  for (std::size_t k = 0; k < odd.size(); ++k) out.samples(odd[k]) = r(static_cast<Eigen::Index>(k));
  out.value_at_zero = inner_mean(out.samples, lat, true);
  return out;
}

OperatorMatrix position_operator(const LatticePtr& lattice) {
  const Eigen::Index n = lattice->size();
  OperatorMatrix op{lattice, Support::all, Eigen::MatrixXcd::Zero(n, n), false};
  for (Eigen::Index i = 0; i < n; ++i) op.matrix(i, i) = lattice->x(i);
  return op;
}

OperatorMatrix momentum_operator(const LatticePtr& lattice, double hbar) {
  return derivative_matrix(lattice, Complex(0.0, -hbar));
}

OperatorMatrix jackson_derivative_operator(const LatticePtr& lattice) {
  return derivative_matrix(lattice, 1.0);
}

OperatorMatrix identity_operator(const LatticePtr& lattice, Support support) {
  const Eigen::Index n = support == Support::all
                             ? lattice->size()
                             : static_cast<Eigen::Index>(lattice->odd_indices().size());
  return {lattice, support, Eigen::MatrixXcd::Identity(n, n), false};
}

OperatorMatrix restrict_to_odd(const OperatorMatrix& a) {
  if (a.support == Support::odd) return a;
  const auto& odd = a.lattice->odd_indices();
  const auto n = static_cast<Eigen::Index>(odd.size());
  OperatorMatrix out{a.lattice, Support::odd, Eigen::MatrixXcd(n, n), false};
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      out.matrix(r, c) = a.matrix(odd[static_cast<std::size_t>(r)],
                                  odd[static_cast<std::size_t>(c)]);
    }
  }
  return out;
}

OperatorMatrix product(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same(a.lattice, b.lattice, "product");
  if (a.support != b.support || a.symmetrized != b.symmetrized) {
    throw DomainError("product: operators differ in support or symmetrization");
  }
  return {a.lattice, a.support, a.matrix * b.matrix, a.symmetrized};
}

double DecayingEnvelope::operator()(double x) const noexcept {
  if (x == 0.0) return 0.0;
  const double u = (std::log(std::abs(x)) - mu) / sigma;
  return std::exp(-0.5 * u * u);
}

DecayingEnvelope DecayingEnvelope::fitted_to(const QLattice& lattice, double edge) {
  const double lo = static_cast<double>(std::log(lattice.magnitude(lattice.m_max())));
  const double hi = static_cast<double>(std::log(lattice.magnitude(lattice.m_min())));
  const double half = 0.5 * (hi - lo);
  return {0.5 * (hi + lo), half / std::sqrt(2.0 * std::log(1.0 / edge))};
}

Evaluable decaying_test_function(const DecayingEnvelope& envelope,
                                 std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> degree(0, 3);
  const int d = degree(rng);
  std::vector<Complex> c(static_cast<std::size_t>(d) + 1);
  for (auto& ck : c) ck = Complex(normal(rng), normal(rng));
  const PowerSeries poly(std::move(c));
  return {[envelope, poly](double x) { return envelope(x) * poly(x); },
          DecayHint::rapid_at_infinity, true};
}

double hermiticity_residual(const OperatorMatrix& a, int trials, std::uint64_t seed,
                            std::optional<DecayingEnvelope> envelope) {
  if (trials < 1) throw DomainError("hermiticity_residual needs trials >= 1");
  const DecayingEnvelope env = envelope ? *envelope : DecayingEnvelope::fitted_to(*a.lattice);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const LatticeFunction phi = sample(decaying_test_function(env, rng), a.lattice);
    const LatticeFunction psi = sample(decaying_test_function(env, rng), a.lattice);
    const Complex lhs = inner_product(phi, a.apply(psi));
    const Complex rhs = inner_product(a.apply(phi), psi);
    worst = std::max(worst, std::abs(lhs - rhs) / (norm(phi) * norm(psi)));
  }
  return worst;
}

namespace {

OperatorMatrix conjugate_by_weights(const OperatorMatrix& a, bool forward) {
  if (a.support != Support::odd) {
    throw DomainError("symmetrize: operator includes zero-weight (even-exponent) "
                      "points; restrict it to the odd sublattice first");
  }
  if (a.symmetrized == forward) {
    throw DomainError(forward ? "symmetrize: operator is already symmetrized"
                              : "unsymmetrize: operator is not symmetrized");
  }
  const auto& odd = a.lattice->odd_indices();
  const auto n = static_cast<Eigen::Index>(odd.size());
  Eigen::VectorXd root(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double w = a.lattice->weight(odd[static_cast<std::size_t>(k)]);
    if (!(w > 0.0)) throw DomainError("symmetrize: zero integration weight");
    root(k) = std::sqrt(w);
  }
  if (!forward) root = root.cwiseInverse();
  OperatorMatrix out{a.lattice, Support::odd,
                     root.asDiagonal() * a.matrix * root.cwiseInverse().asDiagonal(),
                     forward};
  return out;
}

}  // namespace

OperatorMatrix symmetrize(const OperatorMatrix& a) { return conjugate_by_weights(a, true); }
OperatorMatrix unsymmetrize(const OperatorMatrix& a) { return conjugate_by_weights(a, false); }

double self_adjointness_residual(const OperatorMatrix& s, int boundary) {
  std::vector<int> rank;
  std::vector<int> count;
  branch_positions(s, rank, count);
  auto interior = [&](Eigen::Index k) {
    const auto u = static_cast<std::size_t>(k);
    return rank[u] >= boundary && rank[u] < count[u] - boundary;
  };
  double diff = 0.0;
  double big = 0.0;
  for (Eigen::Index r = 0; r < s.dimension(); ++r) {
    if (!interior(r)) continue;
    for (Eigen::Index c = 0; c < s.dimension(); ++c) {
      if (!interior(c)) continue;
      diff = std::max(diff, std::abs(s.matrix(r, c) - std::conj(s.matrix(c, r))));
      big = std::max(big, std::abs(s.matrix(r, c)));
    }
  }
  return big > 0.0 ? diff / big : diff;
}

}  // namespace qdeform
