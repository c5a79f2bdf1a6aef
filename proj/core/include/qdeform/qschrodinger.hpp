#pragma once

// H = -(hbar^2 / 2m) D^2 + V(x) on a q-lattice, its stationary states and
// spectral time evolution.
//
// D^2 maps each parity class of exponents to itself through the other one.
// Weighted by the integration weights, D^2 on one parity class is a graph
// Laplacian on a chain: neighbours along each branch, the two branches joined
// through x = 0 (the segment from the innermost point to 0 is treated as a
// linear tail) and zero padding beyond the outermost point. The Hamiltonian
// proper lives on the odd chain, which carries the q-inner product; the even
// chain is kept so that states sampled on every point evolve consistently.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdeform/errors.hpp"
#include "qdeform/l2q.hpp"

namespace qdeform {

/// One parity class of lattice points as a chain: positive branch from the
/// outermost point inward, then the negative branch outward.
struct ParityChain {
  std::vector<Eigen::Index> points;
  Eigen::VectorXd weight;       ///< (1/q - q) |x| per node
  Eigen::VectorXd conductance;  ///< between node k and k+1
  Eigen::VectorXd potential;
  /// Symmetrized tridiagonal W^{1/2} H W^{-1/2}.
  Eigen::VectorXd diagonal;
  Eigen::VectorXd off_diagonal;

  Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(points.size()); }
};

class Hamiltonian {
 public:
  /// Use build_hamiltonian.
  Hamiltonian(LatticePtr lattice, ParityChain odd, ParityChain even, double mass,
              double hbar, std::string potential_text);

  const LatticePtr& lattice() const noexcept { return lattice_; }
  const ParityChain& odd_chain() const noexcept { return odd_; }
  const ParityChain& even_chain() const noexcept { return even_; }
  double mass() const noexcept { return mass_; }
  double hbar() const noexcept { return hbar_; }
  const std::string& potential_text() const noexcept { return potential_text_; }

  /// H psi on every stored point.
  LatticeFunction apply(const LatticeFunction& psi) const;
  /// Dense odd-support matrix (not symmetrized).
  OperatorMatrix matrix() const;

 private:
  LatticePtr lattice_;
  ParityChain odd_;
  ParityChain even_;
  double mass_;
  double hbar_;
  std::string potential_text_;
};

/// V must be real and finite at every lattice point; mass, hbar > 0.
Hamiltonian build_hamiltonian(const Evaluable& potential, double mass, double hbar,
                              const LatticePtr& lattice,
                              std::string potential_text = {});

struct SpectrumResult {
  LatticePtr lattice;
  std::vector<double> eigenvalues;
  /// q-orthonormal, supported on the odd-exponent points.
  std::vector<LatticeFunction> eigenfunctions;
  /// max |Im <psi_n, H psi_n>_q| over the returned states.
  double max_imaginary_part = 0.0;

  std::size_t size() const noexcept { return eigenvalues.size(); }
};

/// Lowest k eigenpairs, 0 <= k <= number of odd points.
SpectrumResult stationary_states(const Hamiltonian& h, int k);

/// Full spectral decomposition of both parity chains.
class Propagator {
 public:
  explicit Propagator(const Hamiltonian& h);

  const LatticePtr& lattice() const noexcept { return lattice_; }
  /// exp(-i H t / hbar) psi.
  LatticeFunction propagate(const LatticeFunction& psi, double t) const;
  /// Odd-chain coefficients in the orthonormal eigenbasis.
  Eigen::VectorXcd coefficients(const LatticeFunction& psi) const;

 private:
  struct Block {
    std::vector<Eigen::Index> points;
    Eigen::VectorXd root_weight;
    Eigen::VectorXd energies;
    Eigen::MatrixXd vectors;
  };
  static Block decompose(const ParityChain& chain);
  void apply_block(const Block& b, const LatticeFunction& in, LatticeFunction& out,
                   double t) const;

  LatticePtr lattice_;
  double hbar_;
  Block odd_;
  Block even_;
};

struct WaveState {
  LatticeFunction psi;
  double t = 0.0;
};

/// Advances by dt * steps in one spectral application.
WaveState evolve(const WaveState& state, const Propagator& propagator, double dt,
                 int steps);
WaveState evolve(const WaveState& state, const Hamiltonian& h, double dt, int steps);

inline constexpr double kNormalizationTolerance = 1e-10;

/// <psi, A psi>_q for any operator with apply(). psi must be q-normalized.
template <typename Operator>
Complex expectation(const Operator& a, const LatticeFunction& psi) {
  const double n = norm(psi);
  if (std::abs(n - 1.0) > kNormalizationTolerance) {
    throw NormalizationError("expectation: state is not q-normalized", n);
  }
  return inner_product(psi, a.apply(psi));
}

/// <psi, (A - <A>)^2 psi>_q.
template <typename Operator>
double fluctuation(const Operator& a, const LatticeFunction& psi) {
  const Complex mean = expectation(a, psi);
  LatticeFunction shifted = a.apply(psi);
  shifted.samples -= mean * psi.samples;
  LatticeFunction twice = a.apply(shifted);
  twice.samples -= mean * shifted.samples;
  return inner_product(psi, twice).real();
}

/// c_n = <psi_n, psi>_q.
std::vector<Complex> expand(const LatticeFunction& psi, const SpectrumResult& spectrum);
/// sum_n c_n psi_n.
LatticeFunction resynthesize(const std::vector<Complex>& c, const SpectrumResult& spectrum);

/// N E_q(i k x) on every lattice point.
LatticeFunction free_particle_wave(double kwav, const LatticePtr& lattice,
                                   Complex normalization = 1.0);

/// Worst |D^2 phi + k^2 phi| against the stencil magnitude over points whose
/// two-step stencil stays inside the lattice.
Residual plane_wave_residual(const LatticeFunction& phi, double kwav);

/// {schema_version, q, lattice, eigenvalues, meta}.
std::string spectrum_to_json(const SpectrumResult& spectrum, const Hamiltonian& h);

}  // namespace qdeform
