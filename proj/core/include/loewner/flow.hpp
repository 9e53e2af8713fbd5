#pragma once

/// \file
/// Direct numerical integration of the two-slit Loewner equation
///
///     dw/dt = 1/(w - lambda_1(t)) + 1/(w - lambda_2(t)),   w(0) = z,
///
/// for any DrivingSchedule, plus the backward flow that recovers g^{-1} and a
/// trace extractor built on it. Nothing here uses the closed-form solutions,
/// so these routines serve as an independent oracle for exact_maps/traces.

#include <span>
#include <vector>

#include "loewner/types.hpp"

namespace loewner {

enum class FlowStatus { Completed, StoppedNearSingularity };

struct FlowResult {
  Complex w;
  /// w - z accumulated directly by the integrator; keeps full relative
  /// precision when |z| is large and w - z is small.
  Complex displacement;
  long steps_taken = 0;
  /// Minimum over accepted steps of min_k |w - lambda_k|.
  double min_singularity_distance = 0.0;
  double t_reached = 0.0;
  FlowStatus status = FlowStatus::Completed;
};

/// Integrates the forward flow from 0 to t_end. The switching time t0 is
/// always a step boundary. Stops with StoppedNearSingularity once the point
/// comes within liftoff_eps of a driving point or the step size underflows.
[[nodiscard]] FlowResult evolve_forward(Complex z, const DrivingSchedule& schedule,
                                        double t_end, const SolverConfig& cfg = {});

/// g^{-1}(w_target, t) via the reversed flow
/// dz/ds = -[1/(z - lambda_1(t - s)) + 1/(z - lambda_2(t - s))], s in [0, t].
/// Throws DomainError unless Im w_target > 0 and t in [0, T].
[[nodiscard]] Complex inverse_flow(Complex w_target, const DrivingSchedule& schedule,
                                   double t, const SolverConfig& cfg = {});

struct NumericTracePoint {
  Complex z;
  /// Convergence order in epsilon observed from three lift-off heights.
  double observed_order = 0.0;
  /// |extrapolated - value at the smallest lift-off height|.
  double correction = 0.0;
};

/// Tip of Gamma2 at time t in (t0, T]: the preimage of lambda_2(t) + i eps,
/// evaluated at eps, eps/2 and eps/4 and Richardson-extrapolated to eps = 0
/// with the observed order. Throws ConvergenceError when the two largest
/// heights disagree by more than 100 eps.
[[nodiscard]] NumericTracePoint trace_numeric_detail(
    const DrivingSchedule& schedule, double t, const SolverConfig& cfg = {});

[[nodiscard]] Complex trace_numeric(const DrivingSchedule& schedule, double t,
                                    const SolverConfig& cfg = {});

/// max over theta in {pi/4, pi/2, 3pi/4} of |(g(z,t) - z) z - 2t| at
/// z = R e^{i theta}, one value per radius. Radii must be >= 10.
[[nodiscard]] std::vector<double> capacity_profile(const DrivingSchedule& schedule,
                                                   double t,
                                                   std::span<const double> radii,
                                                   const SolverConfig& cfg = {});

/// Maximum of capacity_profile.
[[nodiscard]] double capacity_check(const DrivingSchedule& schedule, double t,
                                    std::span<const double> radii,
                                    const SolverConfig& cfg = {});

}  // namespace loewner
