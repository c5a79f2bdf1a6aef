#include <cmath>

#include <gtest/gtest.h>
#include <json.hpp>

#include "oracles.hpp"
#include "qdeform/errors.hpp"
#include "qdeform/qschrodinger.hpp"

using namespace qdeform;

namespace {

Evaluable harmonic(double w) {
  return {[w](double x) { return Complex(0.5 * w * w * x * x, 0.0); }};
}

LatticeFunction normalized_packet(const LatticePtr& l, double x0, double k) {
  LatticeFunction f = sample({[=](double x) {
                               return std::exp(-(x - x0) * (x - x0)) * std::polar(1.0, k * x);
                             }},
                             l);
  const double n = norm(f);
  f.samples /= n;
  f.value_at_zero /= n;
  return f;
}

double odd_error(const LatticeFunction& a, const LatticeFunction& b) {
  double worst = 0.0;
  for (const Eigen::Index i : a.lattice->odd_indices()) worst = std::max(worst, std::abs(a.samples[i] - b.samples[i]));
  return worst;
}

}  // namespace

TEST(Hamiltonian, Rejections) {
  const LatticePtr l = default_lattice();
  const Evaluable complex_v{[](double x) { return Complex(x, 0.1); }};
  EXPECT_THROW(build_hamiltonian(complex_v, 1.0, 1.0, l), DomainError);
  EXPECT_THROW(build_hamiltonian(harmonic(1), 0.0, 1.0, l), DomainError);
  EXPECT_THROW(build_hamiltonian(harmonic(1), 1.0, -1.0, l), DomainError);
  const Evaluable singular{[](double x) { return Complex(std::log(x), 0.0); }};
  EXPECT_THROW(build_hamiltonian(singular, 1.0, 1.0, l), DomainError);
  const Hamiltonian h = build_hamiltonian(harmonic(1), 1.0, 1.0, l);
  EXPECT_THROW(stationary_states(h, -1), DomainError);
  EXPECT_THROW(stationary_states(h, static_cast<int>(h.odd_chain().size()) + 1), DomainError);
  EXPECT_EQ(stationary_states(h, 0).size(), 0u);
}

TEST(Hamiltonian, MatrixIsQHermitianAndMatchesApply) {
  const LatticePtr l = default_lattice();
  const Hamiltonian h = build_hamiltonian(harmonic(1.3), 0.7, 1.1, l);
  const OperatorMatrix m = h.matrix();
  EXPECT_LT(hermiticity_residual(m, 20), 1e-12);
  EXPECT_LT(self_adjointness_residual(symmetrize(m)), 1e-12);
  const LatticeFunction psi = normalized_packet(l, 0.3, 0.5);
  // Entries near x = 0 reach 1e7 and cancel, so each row is compared against
  // its own stencil magnitude |H| |psi|.
  const LatticeFunction hpsi = h.apply(psi);
  const LatticeFunction mpsi = m.apply(psi);
  const auto& odd = l->odd_indices();
  Eigen::VectorXd abs_psi(static_cast<Eigen::Index>(odd.size()));
  for (std::size_t j = 0; j < odd.size(); ++j) abs_psi[j] = std::abs(psi.samples[odd[j]]);
  const Eigen::VectorXd stencil = m.matrix.cwiseAbs() * abs_psi;
  for (std::size_t i = 0; i < odd.size(); ++i) {
    EXPECT_LE(std::abs(mpsi.samples[odd[i]] - hpsi.samples[odd[i]]), 1e-14 * stencil[i]) << i;
  }
}

TEST(Hamiltonian, FreeSpectrumIsPositive) {
  const Hamiltonian h = build_hamiltonian({[](double) { return Complex(0.0, 0.0); }}, 1.0, 1.0, default_lattice());
  const SpectrumResult s = stationary_states(h, 5);
  EXPECT_GT(s.eigenvalues.front(), 0.0);
}

TEST(Stationary, OscillatorApproachesUniformGridLevels) {
  const LatticePtr l = default_lattice(QParam(0.99));
  const Hamiltonian h = build_hamiltonian({[](double x) { return Complex(x * x, 0.0); }}, 1.0, 1.0, l);
  const SpectrumResult s = stationary_states(h, 3);
  const auto ref = oracle::uniform_grid_levels([](double x) { return x * x; }, 1.0, 1.0, 8.0, 3199, 3);
  for (int n = 0; n < 3; ++n) {
    EXPECT_NEAR(s.eigenvalues[n], ref[n], 0.01 * ref[n]) << n;
  }
}

TEST(Stationary, EigenpairsAreOrthonormalAndReal) {
  const LatticePtr l = default_lattice();
  const Hamiltonian h = build_hamiltonian(harmonic(1), 1.0, 1.0, l);
  const SpectrumResult s = stationary_states(h, 8);
  EXPECT_LT(s.max_imaginary_part, 1e-9);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0) EXPECT_GT(s.eigenvalues[i], s.eigenvalues[i - 1]);
    for (std::size_t j = 0; j < s.size(); ++j) {
      const Complex ip = inner_product(s.eigenfunctions[i], s.eigenfunctions[j]);
      EXPECT_NEAR(std::abs(ip - Complex(i == j ? 1.0 : 0.0)), 0.0, 1e-12);
    }
    LatticeFunction ev = s.eigenfunctions[i];
    ev.samples *= s.eigenvalues[i];
    const LatticeFunction hv = h.apply(s.eigenfunctions[i]);
    EXPECT_LT(odd_error(hv, ev), 1e-9 * std::max(1.0, s.eigenvalues[i]));
    EXPECT_NEAR(std::abs(expectation(h, s.eigenfunctions[i]) - s.eigenvalues[i]), 0.0, 1e-10);
    EXPECT_NEAR(fluctuation(h, s.eigenfunctions[i]), 0.0, 1e-8);
  }
}

TEST(Stationary, Deterministic) {
  const Hamiltonian h = build_hamiltonian(harmonic(1), 1.0, 1.0, default_lattice());
  const SpectrumResult a = stationary_states(h, 4);
  const SpectrumResult b = stationary_states(h, 4);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  for (std::size_t n = 0; n < a.size(); ++n) EXPECT_EQ(a.eigenfunctions[n].samples, b.eigenfunctions[n].samples);
}

TEST(Expectation, RequiresNormalizedState) {
  const LatticePtr l = default_lattice();
  const Hamiltonian h = build_hamiltonian(harmonic(1), 1.0, 1.0, l);
  LatticeFunction psi = normalized_packet(l, 0.0, 0.0);
  psi.samples *= 1.01;
  EXPECT_THROW(expectation(h, psi), NormalizationError);
}

TEST(Propagator, UnitaryAndConservative) {
  const LatticePtr l = default_lattice();
  const Hamiltonian h = build_hamiltonian(harmonic(1), 1.0, 1.0, l);
  const Propagator p(h);
  const LatticeFunction psi0 = normalized_packet(l, 0.5, 1.0);
  const double e0 = expectation(h, psi0).real();
  for (double t : {0.3, 2.0, 10.0}) {
    const LatticeFunction psi = p.propagate(psi0, t);
    EXPECT_NEAR(norm(psi), 1.0, 1e-12);
    EXPECT_NEAR(expectation(h, psi).real(), e0, 1e-9 * std::max(1.0, std::abs(e0)));
  }
}

TEST(Propagator, GroupProperty) {
  const LatticePtr l = default_lattice();
  const Hamiltonian h = build_hamiltonian(harmonic(0.8), 1.0, 1.0, l);
  const Propagator p(h);
  const LatticeFunction psi0 = normalized_packet(l, -0.4, 2.0);
  const LatticeFunction once = p.propagate(psi0, 1.5);
  const LatticeFunction twice = p.propagate(p.propagate(psi0, 0.7), 0.8);
  EXPECT_LT((once.samples - twice.samples).cwiseAbs().maxCoeff(), 1e-12);
  const LatticeFunction back = p.propagate(once, -1.5);
  EXPECT_LT((back.samples - psi0.samples).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Propagator, EigenstatePhase) {
  const LatticePtr l = default_lattice();
  const Hamiltonian h = build_hamiltonian(harmonic(1), 1.0, 2.0, l);
  const SpectrumResult s = stationary_states(h, 2);
  const Propagator p(h);
  const double t = 3.7;
  const LatticeFunction psi = evolve({s.eigenfunctions[1], 0.0}, p, 0.01, 370).psi;
  const Complex phase = std::polar(1.0, -s.eigenvalues[1] * t / 2.0);
  EXPECT_NEAR(std::abs(inner_product(s.eigenfunctions[1], psi) - phase), 0.0, 1e-10);
}

TEST(Evolve, AdvancesTime) {
  const LatticePtr l = default_lattice();
  const Hamiltonian h = build_hamiltonian(harmonic(1), 1.0, 1.0, l);
  const WaveState w = evolve({normalized_packet(l, 0.0, 0.0), 1.0}, h, 0.25, 4);
  EXPECT_DOUBLE_EQ(w.t, 2.0);
  EXPECT_THROW(evolve(w, h, 0.1, -1), DomainError);
}

TEST(Expansion, ParsevalOnCompleteSpectrum) {
  const LatticePtr l = build_lattice(QParam(0.9), -15, 60);
  const Hamiltonian h = build_hamiltonian(harmonic(1), 1.0, 1.0, l);
  const int k = static_cast<int>(h.odd_chain().size());
  const SpectrumResult s = stationary_states(h, k);
  const LatticeFunction psi = normalized_packet(l, 0.7, -1.0);
  const auto c = expand(psi, s);
  double total = 0.0;
  double energy = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    total += std::norm(c[n]);
    energy += std::norm(c[n]) * s.eigenvalues[n];
  }
  EXPECT_NEAR(total, 1.0, 1e-10);
  EXPECT_NEAR(energy, expectation(h, psi).real(), 1e-8);
  EXPECT_LT(odd_error(resynthesize(c, s), psi), 1e-10);
}

TEST(FreeParticle, PlaneWaveSolvesLatticeEquation) {
  const LatticePtr l = default_lattice();
  for (double k : {0.5, 1.0, 2.0}) {
    const LatticeFunction phi = free_particle_wave(k, l);
    EXPECT_LE(plane_wave_residual(phi, k).relative(), 1e-9);
    EXPECT_GT(plane_wave_residual(phi, 1.1 * k).relative(), 1e-4);
  }
}

TEST(Spectrum, JsonShape) {
  const Hamiltonian h = build_hamiltonian(harmonic(1), 1.0, 1.0, default_lattice(), "x^2/2");
  const SpectrumResult s = stationary_states(h, 2);
  const auto doc = nlohmann::json::parse(spectrum_to_json(s, h));
  EXPECT_EQ(doc["schema_version"], 1);
  EXPECT_EQ(doc["eigenvalues"].size(), 2u);
  EXPECT_EQ(doc["eigenvalues"][0].get<double>(), s.eigenvalues[0]);
  EXPECT_EQ(doc["meta"]["potential_text"], "x^2/2");
  EXPECT_EQ(doc["lattice"]["m_max"], 60);
}
