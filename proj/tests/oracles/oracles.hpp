#pragma once

// Reference computations that share no code with the library: extended
// precision series, literal sums and a uniform-grid Schrodinger solver.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace oracle {

using HP = boost::multiprecision::cpp_bin_float_50;
using HPC = boost::multiprecision::cpp_complex_50;

/// [n] as the finite geometric sum q^{n-1} + q^{n-3} + ... + q^{1-n}.
inline HP basic_number(int n, const HP& q) {
  HP s = 0;
  for (int k = 0; k < n; ++k) s += pow(q, n - 1 - 2 * k);
  return s;
}

enum class Series { exp, sin, cos };

/// E_q, S_q or C_q in 50-digit arithmetic, summed until the terms stop
/// mattering at that precision.
inline std::complex<double> special(Series which, std::complex<double> z, double qd) {
  const HP q = qd;
  const HPC zz(HP(z.real()), HP(z.imag()));
  HPC sum = 0;
  HPC power = 1;
  HP factorial = 1;
  int small = 0;
  for (int k = 0; k < 5000; ++k) {
    if (k > 0) {
      power *= zz;
      factorial *= basic_number(k, q);
    }
    HPC term;
    switch (which) {
      case Series::exp:
        term = power / factorial;
        break;
      case Series::sin:
        if (k % 2 == 0) continue;
        term = ((k / 2) % 2 ? -1 : 1) * power / factorial;
        break;
      case Series::cos:
        if (k % 2 == 1) continue;
        term = ((k / 2) % 2 ? -1 : 1) * power / factorial;
        break;
    }
    sum += term;
    const HP mag = abs(term);
    small = (k > 10 && mag <= HP("1e-45") * abs(sum)) ? small + 1 : 0;
    if (small >= 3) break;
  }
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

/// (q;q)_inf by Euler's pentagonal number theorem. The alternating sum
/// cancels down to exp(-pi^2 / 6(1-q)), hence the 50 digits.
inline long double euler_function(long double qd) {
  const HP q = static_cast<double>(qd);
  HP s = 1;
  for (int k = 1; k < 400; ++k) {
    const int sign = (k % 2) ? -1 : 1;
    s += sign * (pow(q, k * (3 * k - 1) / 2) + pow(q, k * (3 * k + 1) / 2));
  }
  return s.convert_to<long double>();
}

/// a (1/q - q) sum_{n < terms} q^{2n+1} f(a q^{2n+1}), term by term.
inline std::complex<long double> jackson_sum(const std::function<std::complex<double>(double)>& f,
                                             double a, double q, int terms) {
  std::complex<long double> s = 0;
  for (int n = 0; n < terms; ++n) {
    const long double x = a * std::pow(static_cast<long double>(q), 2 * n + 1);
    const std::complex<double> v = f(static_cast<double>(x));
    s += x * std::complex<long double>(v.real(), v.imag());
  }
  return s * static_cast<long double>(1.0 / q - q);
}

/// Lowest k eigenvalues of -hbar^2/2m d^2/dx^2 + V on [-L, L] with Dirichlet
/// ends, second-order finite differences on n interior nodes.
inline std::vector<double> uniform_grid_levels(const std::function<double(double)>& v,
                                               double mass, double hbar, double half_width,
                                               int n, int k) {
  const double h = 2.0 * half_width / (n + 1);
  const double kinetic = hbar * hbar / (2.0 * mass * h * h);
  Eigen::VectorXd diag(n);
  Eigen::VectorXd off = Eigen::VectorXd::Constant(n - 1, -kinetic);
  for (int i = 0; i < n; ++i) diag[i] = 2.0 * kinetic + v(-half_width + (i + 1) * h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + k);
  return out;
}

}  // namespace oracle
