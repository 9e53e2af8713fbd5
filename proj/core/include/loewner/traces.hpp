#pragma once

/// \file
/// Exact trace curves of the two-slit evolution.
///
/// Gamma0 is the static segment [0, i 2 sqrt(t0)] grown on [0, t0]. Gamma2 is
/// the right-hand curve grown on [t0, T]; Gamma1 is its mirror image in the
/// imaginary axis.
///
/// Piecewise-constant driving: Gamma2 is obtained by integrating the
/// real-analytic trace ODE for u = z^2 (or for z^4 when A^2 = 4 t0), started
/// from a series solution because the ODE is singular at t0. The implicit
/// trace equation is then an independent residual check.
///
/// Constant-then-square-root driving: Gamma2 has a closed form, the square
/// root of a straight segment leaving -4 t0 at angle 4 pi / (A^2 + 4).

#include <span>
#include <vector>

#include "loewner/types.hpp"

namespace loewner {

enum class CurveLabel { Gamma0, Gamma1, Gamma2 };

[[nodiscard]] std::string to_string(CurveLabel label);

struct TraceSample {
  double t = 0.0;
  Complex z;
};

struct TraceCurve {
  std::vector<TraceSample> samples;
  CurveLabel label = CurveLabel::Gamma2;
  Scenario scenario;

  [[nodiscard]] std::vector<Complex> points() const;
};

/// z(t) ~ base_point + coefficient * (t - t0)^exponent as t -> t0+.
struct AsymptoticExpansion {
  Complex base_point;
  double exponent = 0.5;
  Complex coefficient;

  [[nodiscard]] Complex evaluate(double delta) const;
};

/// n >= 2 uniformly spaced times covering [t0, T].
[[nodiscard]] std::vector<double> uniform_times(double t0, double horizon,
                                                int n);

/// Uniform grid of n_uniform points plus n_extra geometrically spaced points
/// in (t0, t0 + 0.01 (T - t0)], where the trace speed diverges.
[[nodiscard]] std::vector<double> refined_times(double t0, double horizon,
                                                int n_uniform, int n_extra);

/// First point of Gamma2 in closed form.
[[nodiscard]] Complex trace_start(const Scenario& sc);

// -- Piecewise-constant driving ---------------------------------------------

/// Gamma2 sampled uniformly in t on [t0, T]. Throws SingularityError if the
/// trace ODE denominator vanishes away from t0 or the curve leaves the
/// closed first quadrant.
[[nodiscard]] TraceCurve thm1_trace(const Scenario& sc, const SolverConfig& cfg,
                                    int n_samples);

/// Gamma2 at the given nondecreasing times in [t0, T].
[[nodiscard]] TraceCurve thm1_trace_at(const Scenario& sc,
                                       const SolverConfig& cfg,
                                       std::span<const double> times);

[[nodiscard]] AsymptoticExpansion thm1_trace_asymptotic(const Scenario& sc);

/// A^2 - z^2 - A^2 log(A^2 / (z^2 + 4 t0)) - 4t; zero on Gamma2.
[[nodiscard]] Complex thm1_trace_residual(Complex z, double t,
                                          const Scenario& sc);

/// z^2 + 4 t0 log(A^2 / (z^2 + 4 t0)) - (A^2 - 4t), the implicit equation
/// obtained by integrating (z^4)' = -8 (z^2 + 4 t0) when A^2 = 4 t0.
/// Throws SingularityError when z^2 + 4 t0 = 0.
[[nodiscard]] Complex thm1_case3_implicit_residual(Complex z, double t,
                                                   const Scenario& sc);

/// The same equation with coefficient 4 instead of 4 t0 on the logarithm.
/// Kept so the two candidate forms can be compared against the ODE.
[[nodiscard]] Complex thm1_case3_literal_residual(Complex z, double t,
                                                  const Scenario& sc);

/// Integrates (z^4)' = -8 (z^2 + 4 t0), z(t0) = 0, A = 2 sqrt(t0), directly
/// in the quartic variable and returns z at the requested times.
[[nodiscard]] std::vector<Complex> integrate_quartic_trace(
    double t0, std::span<const double> times, double rel_tol, double abs_tol);

// -- Constant-then-square-root driving --------------------------------------

[[nodiscard]] Complex thm2_trace_point(const Scenario& sc, double t);
[[nodiscard]] TraceCurve thm2_trace(const Scenario& sc, int n_samples);
[[nodiscard]] TraceCurve thm2_trace_at(const Scenario& sc,
                                       std::span<const double> times);

/// z(t) ~ i 2 sqrt(t0) + c (t - t0), c = K e^{i (4 pi/(A^2+4) - pi/2)} / (4 sqrt(t0)),
/// with K the modulus factor of the closed form.
[[nodiscard]] AsymptoticExpansion thm2_trace_asymptotic(const Scenario& sc);

struct TraceAngles {
  double segment_angle = 0.0;  ///< arg(z^2(t) + 4 t0), constant in t
  double tangent_angle = 0.0;  ///< direction of Gamma2 leaving i 2 sqrt(t0)
};

[[nodiscard]] TraceAngles thm2_angles(double amplitude);

// -- Common ------------------------------------------------------------------

/// Dispatches to thm1_trace_at / thm2_trace_at.
[[nodiscard]] TraceCurve exact_trace(const Scenario& sc, const SolverConfig& cfg,
                                     std::span<const double> times);

/// Gamma1 from Gamma2: z -> -conj(z) at equal times.
[[nodiscard]] TraceCurve mirror(const TraceCurve& curve);

/// Gamma0 sampled uniformly in arclength; sample k sits at the time the slit
/// tip passed it, t = t0 (k / (n - 1))^2.
[[nodiscard]] TraceCurve gamma0(const Scenario& sc, int n_samples);

// -- Polyline predicates -----------------------------------------------------

/// True if closed segments [a0, a1] and [b0, b1] share at least one point.
[[nodiscard]] bool segments_intersect(Complex a0, Complex a1, Complex b0,
                                      Complex b1);

/// Number of pairs of non-adjacent segments of the polyline that intersect.
[[nodiscard]] int count_self_intersections(std::span<const Complex> points);

/// Number of segment pairs (one from each polyline) that intersect, ignoring
/// contacts within `tolerance` of any point listed in `allowed_contacts`.
[[nodiscard]] int count_cross_intersections(
    std::span<const Complex> a, std::span<const Complex> b,
    std::span<const Complex> allowed_contacts, double tolerance);

}  // namespace loewner
