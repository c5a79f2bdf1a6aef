#include "qdeform/qschrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <utility>

#include <json.hpp>
#include <lapacke.h>

#include "qdeform/qfunctions.hpp"

namespace qdeform {

namespace {

using Support = OperatorMatrix::Support;

constexpr double kDegenerateGap = 1e-10;

void require_lattice(const LatticePtr& expected, const LatticeFunction& psi,
                     const char* what) {
  if (!psi.lattice || !expected->same_as(*psi.lattice) ||
      psi.samples.size() != expected->size()) {
    throw LatticeMismatchError(std::string(what) +
                               ": state does not live on the Hamiltonian's lattice");
  }
}

ParityChain build_chain(const QLattice& lat, int parity,
                        const Eigen::VectorXd& v_samples, double kinetic) {
  std::vector<int> exps;
  for (int m = lat.m_min(); m <= lat.m_max(); ++m) {
    if ((m & 1) == parity) exps.push_back(m);
  }
  const auto nb = static_cast<Eigen::Index>(exps.size());
  const Eigen::Index n = 2 * nb;
  const long double p = lat.ratio();

  ParityChain c;
  c.points.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < nb; ++j) c.points.push_back(lat.index(1, exps[j]));
  for (Eigen::Index j = nb - 1; j >= 0; --j) c.points.push_back(lat.index(-1, exps[j]));

  auto exponent_at = [&](Eigen::Index k) { return exps[k < nb ? k : n - 1 - k]; };

  c.weight.resize(n);
  c.potential.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    c.weight(k) = static_cast<double>((1.0L / p - p) * lat.magnitude(exponent_at(k)));
    c.potential(k) = v_samples(c.points[static_cast<std::size_t>(k)]);
  }

  c.conductance.resize(n - 1);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    long double gap;
    if (k == nb - 1) {
      gap = 2.0L * lat.magnitude(exps.back());
    } else {
      const int m1 = exponent_at(k);
      const int m2 = exponent_at(k + 1);
      gap = std::abs(lat.magnitude(m1) - lat.magnitude(m2));
    }
    c.conductance(k) = static_cast<double>(1.0L / gap);
  }
  const double pad = static_cast<double>(
      1.0L / (lat.magnitude(exps.front() - 2) - lat.magnitude(exps.front())));

  c.diagonal.resize(n);
  c.off_diagonal.resize(n - 1);
  for (Eigen::Index k = 0; k < n; ++k) {
    double g = 0.0;
    if (k > 0) g += c.conductance(k - 1);
    if (k + 1 < n) g += c.conductance(k);
    if (k == 0 || k == n - 1) g += pad;
    c.diagonal(k) = kinetic * g / c.weight(k) + c.potential(k);
  }
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    c.off_diagonal(k) =
        -kinetic * c.conductance(k) / std::sqrt(c.weight(k) * c.weight(k + 1));
  }
  return c;
}

// Unsymmetrized chain action W^{-1} (kinetic L) + V.
void apply_chain(const ParityChain& c, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
  const Eigen::Index n = c.size();
  const Eigen::VectorXd root = c.weight.cwiseSqrt();
  for (Eigen::Index k = 0; k < n; ++k) {
    // S = W^{1/2} H W^{-1/2}  =>  H = W^{-1/2} S W^{1/2}
    Complex acc = c.diagonal(k) * in(c.points[static_cast<std::size_t>(k)]) * root(k);
    if (k > 0) {
      acc += c.off_diagonal(k - 1) * in(c.points[static_cast<std::size_t>(k - 1)]) * root(k - 1);
    }
    if (k + 1 < n) {
      acc += c.off_diagonal(k) * in(c.points[static_cast<std::size_t>(k + 1)]) * root(k + 1);
    }
    out(c.points[static_cast<std::size_t>(k)]) = acc / root(k);
  }
}

Complex odd_inner_mean(const QLattice& lat, const Eigen::VectorXcd& s) {
  int m = lat.m_max();
  if ((m & 1) == 0) --m;
  return 0.5 * (s(lat.index(1, m)) + s(lat.index(-1, m)));
}

std::string diagnostics(const ParityChain& c, int info) {
  const double dmin = c.diagonal.minCoeff();
  const double dmax = c.diagonal.maxCoeff();
  double emin = 0.0;
  double emax = 0.0;
  if (c.off_diagonal.size() > 0) {
    emin = c.off_diagonal.cwiseAbs().minCoeff();
    emax = c.off_diagonal.cwiseAbs().maxCoeff();
  }
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "tridiagonal eigensolver failed (info = %d): n = %td, diagonal in "
                "[%.6g, %.6g], |off-diagonal| in [%.6g, %.6g], Gershgorin interval "
                "[%.6g, %.6g]",
                info, static_cast<std::ptrdiff_t>(c.size()), dmin, dmax, emin, emax,
                dmin - 2 * emax, dmax + 2 * emax);
  return buf;
}

// Eigenpairs il..iu (1-based) of the symmetric tridiagonal chain matrix.
void tridiagonal_eigen(const ParityChain& c, int count, Eigen::VectorXd& values,
                       Eigen::MatrixXd& vectors) {
  const auto n = static_cast<lapack_int>(c.size());
  Eigen::VectorXd d = c.diagonal;
  Eigen::VectorXd e(c.size());
  e.head(c.size() - 1) = c.off_diagonal;
  e(c.size() - 1) = 0.0;
  const bool all = count == n;
  values.resize(n);
  vectors.resize(n, std::max(count, 1));
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(std::max(count, 1)));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevr(
      LAPACK_COL_MAJOR, 'V', all ? 'A' : 'I', n, d.data(), e.data(), 0.0, 0.0, 1, count,
      2.0 * LAPACKE_dlamch('S'), &found, values.data(), vectors.data(), n, isuppz.data());
  if (info != 0 || found != count ||
      !values.head(found).allFinite() || !vectors.leftCols(found).allFinite()) {
    throw EigenSolverError(diagnostics(c, static_cast<int>(info)));
  }
  values.conservativeResize(count);
  vectors.conservativeResize(n, count);
}

}  // namespace

Hamiltonian::Hamiltonian(LatticePtr lattice, ParityChain odd, ParityChain even,
                         double mass, double hbar, std::string potential_text)
    : lattice_(std::move(lattice)),
      odd_(std::move(odd)),
      even_(std::move(even)),
      mass_(mass),
      hbar_(hbar),
      potential_text_(std::move(potential_text)) {}

LatticeFunction Hamiltonian::apply(const LatticeFunction& psi) const {
  require_lattice(lattice_, psi, "Hamiltonian::apply");
  LatticeFunction out{psi.lattice, Eigen::VectorXcd::Zero(lattice_->size()), 0.0};
  apply_chain(odd_, psi.samples, out.samples);
  apply_chain(even_, psi.samples, out.samples);
  out.value_at_zero = odd_inner_mean(*lattice_, out.samples);
  return out;
}

OperatorMatrix Hamiltonian::matrix() const {
  const auto& odd = lattice_->odd_indices();
  const auto n = static_cast<Eigen::Index>(odd.size());
  std::vector<Eigen::Index> position(static_cast<std::size_t>(lattice_->size()), -1);
  for (Eigen::Index k = 0; k < n; ++k) position[static_cast<std::size_t>(odd[k])] = k;

  OperatorMatrix op{lattice_, Support::odd, Eigen::MatrixXcd::Zero(n, n), false};
  const Eigen::VectorXd root = odd_.weight.cwiseSqrt();
  for (Eigen::Index k = 0; k < odd_.size(); ++k) {
    const Eigen::Index r = position[static_cast<std::size_t>(odd_.points[static_cast<std::size_t>(k)])];
    op.matrix(r, r) = odd_.diagonal(k);
    if (k + 1 < odd_.size()) {
      const Eigen::Index c =
          position[static_cast<std::size_t>(odd_.points[static_cast<std::size_t>(k + 1)])];
      op.matrix(r, c) = odd_.off_diagonal(k) * root(k + 1) / root(k);
      op.matrix(c, r) = odd_.off_diagonal(k) * root(k) / root(k + 1);
    }
  }
  return op;
}

Hamiltonian build_hamiltonian(const Evaluable& potential, double mass, double hbar,
                              const LatticePtr& lattice, std::string potential_text) {
  if (!lattice) throw DomainError("build_hamiltonian: null lattice");
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw DomainError("build_hamiltonian: mass must be positive");
  }
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw DomainError("build_hamiltonian: hbar must be positive");
  }
  Eigen::VectorXd v(lattice->size());
  for (Eigen::Index i = 0; i < lattice->size(); ++i) {
    const Complex value = potential(lattice->x(i));
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
      throw DomainError("build_hamiltonian: potential is not finite at x = " +
                        std::to_string(lattice->x(i)));
    }
    if (value.imag() != 0.0) {
      throw DomainError("build_hamiltonian: potential must be real; V(" +
                        std::to_string(lattice->x(i)) + ") has imaginary part " +
                        std::to_string(value.imag()));
    }
    v(i) = value.real();
  }
  const double kinetic = hbar * hbar / (2.0 * mass);
  ParityChain odd = build_chain(*lattice, 1, v, kinetic);
  ParityChain even = build_chain(*lattice, 0, v, kinetic);
  return Hamiltonian(lattice, std::move(odd), std::move(even), mass, hbar,
                     std::move(potential_text));
}

SpectrumResult stationary_states(const Hamiltonian& h, int k) {
  const ParityChain& chain = h.odd_chain();
  if (k < 0 || k > chain.size()) {
    throw DomainError("stationary_states: k = " + std::to_string(k) +
                      " outside [0, " + std::to_string(chain.size()) + "]");
  }
  SpectrumResult out{h.lattice(), {}, {}, 0.0};
  if (k == 0) return out;

  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  tridiagonal_eigen(chain, k, values, vectors);

  const QLattice& lat = *h.lattice();
  const Eigen::VectorXd root = chain.weight.cwiseSqrt();
  for (int n = 0; n < k; ++n) {
    LatticeFunction psi{h.lattice(), Eigen::VectorXcd::Zero(lat.size()), 0.0};
    for (Eigen::Index j = 0; j < chain.size(); ++j) {
      psi.samples(chain.points[static_cast<std::size_t>(j)]) = vectors(j, n) / root(j);
    }
    // First significant component (storage order) real positive.
    const double big = psi.samples.cwiseAbs().maxCoeff();
    for (const Eigen::Index i : lat.odd_indices()) {
      if (std::abs(psi.samples(i)) > 1e-8 * big) {
        if (psi.samples(i).real() < 0.0) psi.samples = -psi.samples;
        break;
      }
    }
    psi.value_at_zero = odd_inner_mean(lat, psi.samples);
    out.eigenvalues.push_back(values(n));
    out.eigenfunctions.push_back(std::move(psi));
  }

  // Degenerate blocks: deterministic order, then explicit q-orthonormalization.
  for (int b = 0; b < k;) {
    int e = b + 1;
    while (e < k && out.eigenvalues[e] - out.eigenvalues[e - 1] < kDegenerateGap) ++e;
    if (e - b > 1) {
      auto first = out.eigenfunctions.begin() + b;
      std::sort(first, out.eigenfunctions.begin() + e,
                [&](const LatticeFunction& x, const LatticeFunction& y) {
                  for (const Eigen::Index i : lat.odd_indices()) {
                    const double a = x.samples(i).real();
                    const double c = y.samples(i).real();
                    if (a != c) return a > c;
                  }
                  return false;
                });
      for (int i = b; i < e; ++i) {
        LatticeFunction& v = out.eigenfunctions[i];
        for (int j = b; j < i; ++j) {
          const LatticeFunction& u = out.eigenfunctions[j];
          v.samples -= inner_product(u, v) * u.samples;
        }
        v.samples /= norm(v);
        v.value_at_zero = odd_inner_mean(lat, v.samples);
      }
    }
    b = e;
  }

  for (const LatticeFunction& psi : out.eigenfunctions) {
    out.max_imaginary_part =
        std::max(out.max_imaginary_part, std::abs(inner_product(psi, h.apply(psi)).imag()));
  }
  return out;
}

Propagator::Block Propagator::decompose(const ParityChain& chain) {
  Block b;
  b.points = chain.points;
  b.root_weight = chain.weight.cwiseSqrt();
  tridiagonal_eigen(chain, static_cast<int>(chain.size()), b.energies, b.vectors);
  return b;
}

Propagator::Propagator(const Hamiltonian& h)
    : lattice_(h.lattice()),
      hbar_(h.hbar()),
      odd_(decompose(h.odd_chain())),
      even_(decompose(h.even_chain())) {}

void Propagator::apply_block(const Block& b, const LatticeFunction& in,
                             LatticeFunction& out, double t) const {
  const auto n = static_cast<Eigen::Index>(b.points.size());
  Eigen::VectorXcd u(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    u(j) = b.root_weight(j) * in.samples(b.points[static_cast<std::size_t>(j)]);
  }
  Eigen::VectorXcd c = b.vectors.transpose() * u;
  for (Eigen::Index j = 0; j < n; ++j) {
    c(j) *= std::exp(Complex(0.0, -b.energies(j) * t / hbar_));
  }
  u = b.vectors * c;
  for (Eigen::Index j = 0; j < n; ++j) {
    out.samples(b.points[static_cast<std::size_t>(j)]) = u(j) / b.root_weight(j);
  }
}

LatticeFunction Propagator::propagate(const LatticeFunction& psi, double t) const {
  require_lattice(lattice_, psi, "Propagator::propagate");
  LatticeFunction out{psi.lattice, Eigen::VectorXcd::Zero(lattice_->size()), 0.0};
  apply_block(odd_, psi, out, t);
  apply_block(even_, psi, out, t);
  out.value_at_zero = odd_inner_mean(*lattice_, out.samples);
  return out;
}

Eigen::VectorXcd Propagator::coefficients(const LatticeFunction& psi) const {
  require_lattice(lattice_, psi, "Propagator::coefficients");
  const auto n = static_cast<Eigen::Index>(odd_.points.size());
  Eigen::VectorXcd u(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    u(j) = odd_.root_weight(j) * psi.samples(odd_.points[static_cast<std::size_t>(j)]);
  }
  return odd_.vectors.transpose() * u;
}

WaveState evolve(const WaveState& state, const Propagator& propagator, double dt,
                 int steps) {
  if (steps < 0) throw DomainError("evolve: steps must be nonnegative");
  if (steps == 0) {
    require_lattice(propagator.lattice(), state.psi, "evolve");
    return state;
  }
  const double span = dt * steps;
  return {propagator.propagate(state.psi, span), state.t + span};
}

WaveState evolve(const WaveState& state, const Hamiltonian& h, double dt, int steps) {
  if (steps == 0) {
    require_lattice(h.lattice(), state.psi, "evolve");
    return state;
  }
  return evolve(state, Propagator(h), dt, steps);
}

std::vector<Complex> expand(const LatticeFunction& psi, const SpectrumResult& spectrum) {
  std::vector<Complex> c;
  c.reserve(spectrum.size());
  for (const LatticeFunction& phi : spectrum.eigenfunctions) c.push_back(inner_product(phi, psi));
  return c;
}

LatticeFunction resynthesize(const std::vector<Complex>& c, const SpectrumResult& spectrum) {
  if (c.size() != spectrum.size()) {
    throw DomainError("resynthesize: coefficient count does not match spectrum");
  }
  if (!spectrum.lattice) throw DomainError("resynthesize: empty spectrum");
  LatticeFunction out{spectrum.lattice, Eigen::VectorXcd::Zero(spectrum.lattice->size()), 0.0};
  for (std::size_t n = 0; n < c.size(); ++n) {
    out.samples += c[n] * spectrum.eigenfunctions[n].samples;
  }
  out.value_at_zero = odd_inner_mean(*spectrum.lattice, out.samples);
  return out;
}

LatticeFunction free_particle_wave(double kwav, const LatticePtr& lattice,
                                   Complex normalization) {
  const Evaluable e = q_exp_function(Complex(0.0, kwav), lattice->q());
  return sample({[e, normalization](double x) { return normalization * e(x); }}, lattice);
}

Residual plane_wave_residual(const LatticeFunction& phi, double kwav) {
  const QLattice& lat = *phi.lattice;
  const double p = lat.ratio();
  const double c = p - 1.0 / p;
  Residual worst{0.0, 1.0};
  bool any = false;
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const int m = lat.exponent(i);
    if (m - 2 < lat.m_min() || m + 2 > lat.m_max()) continue;
    const int s = lat.sign(i);
    const Complex inner = phi.samples(lat.index(s, m + 2));
    const Complex outer = phi.samples(lat.index(s, m - 2));
    const Complex mid = phi.samples(i);
    const double denom = c * c * lat.x(i) * lat.x(i);
    const Complex second = (inner / p - mid * (p + 1.0 / p) + p * outer) / denom;
    const Complex restoring = kwav * kwav * mid;
    const Residual r{std::abs(second + restoring),
                     (std::abs(inner) / p + std::abs(mid) * (p + 1.0 / p) + p * std::abs(outer)) /
                             denom + std::abs(restoring)};
    if (!any || r.relative() > worst.relative()) {
      worst = r;
      any = true;
    }
  }
  if (!any) throw DomainError("plane_wave_residual: lattice has no interior points");
  return worst;
}

std::string spectrum_to_json(const SpectrumResult& spectrum, const Hamiltonian& h) {
  const QLattice& lat = *h.lattice();
  nlohmann::json doc = {
      {"schema_version", kSchemaVersion},
      {"q", lat.ratio()},
      {"lattice", {{"m_min", lat.m_min()}, {"m_max", lat.m_max()}, {"a", lat.scale()}}},
      {"eigenvalues", spectrum.eigenvalues},
      {"meta",
       {{"hbar", h.hbar()}, {"mass", h.mass()}, {"potential_text", h.potential_text()}}}};
  return doc.dump(2) + "\n";
}

}  // namespace qdeform
