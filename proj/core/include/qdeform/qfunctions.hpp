#pragma once

// Basic exponential E_q and basic trigonometric functions S_q, C_q.
//
// The physics series (sums over 1/[k]!) are the canonical code path. The
// shifted-factorial series exist to cross-check them.

#include <complex>

#include "qdeform/qcalculus.hpp"
#include "qdeform/qnum.hpp"

namespace qdeform {

inline constexpr double kDefaultSeriesTol = 1e-14;

enum class Representation { physics_series, shifted_factorial_series };

struct QSpecialValue {
  Complex value;
  int terms_used = 0;
  Representation representation = Representation::physics_series;
};

/// E_q(z) = sum_k z^k / [k]!. Entire for every q; throws OverflowError when
/// the partial sums leave the representable range.
QSpecialValue q_exp(Complex z, const QParam& q, double tol = kDefaultSeriesTol);
/// S_q(z) = sum_n (-1)^n z^{2n+1} / [2n+1]!.
QSpecialValue q_sin(Complex z, const QParam& q, double tol = kDefaultSeriesTol);
/// C_q(z) = sum_n (-1)^n z^{2n} / [2n]!.
QSpecialValue q_cos(Complex z, const QParam& q, double tol = kDefaultSeriesTol);

/// Same functions summed with shifted-factorial coefficients; 0 < q < 1 only.
QSpecialValue q_exp_shifted(Complex z, const QParam& q,
                            double tol = kDefaultSeriesTol);
QSpecialValue q_sin_shifted(Complex z, const QParam& q,
                            double tol = kDefaultSeriesTol);
QSpecialValue q_cos_shifted(Complex z, const QParam& q,
                            double tol = kDefaultSeriesTol);

/// x -> E_q(a x), S_q(a x), C_q(a x) with complex scale a.
Evaluable q_exp_function(Complex a, const QParam& q, double tol = kDefaultSeriesTol);
Evaluable q_sin_function(Complex a, const QParam& q, double tol = kDefaultSeriesTol);
Evaluable q_cos_function(Complex a, const QParam& q, double tol = kDefaultSeriesTol);

/// |S_q(x/q) S_q(x) + C_q(x/q) C_q(x) - 1|, scale max(1, |SS| + |CC|).
Residual q_pythagoras_residual(double x, const QParam& q);

enum class TrigKind { sin, cos };

/// |D_x S_q(ax) - a C_q(ax)| or |D_x C_q(ax) + a S_q(ax)|.
Residual trig_derivative_residual(double x, double a, const QParam& q,
                                  TrigKind which);

enum class WaveSolution { sin, cos, exp_i };

/// |D^2 u(x) + a^2 u(x)| for u in {S_q(ax), C_q(ax), E_q(iax)}.
Residual wave_equation_residual(WaveSolution u, double a, double x,
                                const QParam& q);

/// |D_x E_q(ax) - a E_q(ax)|.
Residual exp_eigen_residual(double a, double x, const QParam& q);

/// |int_0^x E_q(ay) d_q y - (E_q(ax) - 1)/a| for x > 0, a != 0.
Residual exp_integral_residual(double a, double x, const QParam& q,
                               SumControl control = {});

}  // namespace qdeform
