#pragma once

/// \file
/// Domain types shared by every part of the library: complex points of the
/// closed upper half-plane, the symmetric two-point driving schedule, the
/// validated scenario with its degeneracy classification, and solver knobs.

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace loewner {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Base for all library failures. The CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain (bad parameters, time out of
/// range, point on the slit, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Newton continuation could not reach the requested time.
class ContinuationError : public Error {
 public:
  using Error::Error;
};

/// A logarithm or power was evaluated at its branch point, or a tracked
/// argument jumped by more than allowed within one step.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Numerical procedure did not converge (e.g. extrapolation disagreement).
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Solver configuration
// ---------------------------------------------------------------------------

struct SolverConfig {
  double newton_tol = 1e-12;
  int newton_max_iter = 50;
  double ode_rel_tol = 1e-11;
  double ode_abs_tol = 1e-13;
  double min_step = 1e-9;
  double max_step = 0.05;
  /// Integrator step is capped at singularity_factor * min_k |w - lambda_k|^2.
  double singularity_factor = 0.05;
  double liftoff_eps = 1e-4;
  double case_tol = 1e-10;

  /// Throws DomainError if any knob is out of range.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Driving schedule
// ---------------------------------------------------------------------------

enum class DrivingMode {
  PiecewiseConstant,  ///< lambda_2 = 0 before t0, A afterwards.
  ConstantThenSqrt,   ///< lambda_2 = 0 before t0, A sqrt(t - t0) afterwards.
};

/// Which side of the switching time t0 a driving value is requested for.
/// The piecewise-constant schedule jumps at t0, so an integrator that stops
/// exactly at t0 has to say which one-sided limit it wants.
enum class Side { Before, After };

struct DrivingPair {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

/// Symmetric pair lambda_1(t) = -lambda_2(t) on [0, T].
class DrivingSchedule {
 public:
  DrivingSchedule(DrivingMode mode, double amplitude, double t0, double horizon);

  [[nodiscard]] DrivingMode mode() const noexcept { return mode_; }
  [[nodiscard]] double amplitude() const noexcept { return amplitude_; }
  [[nodiscard]] double t0() const noexcept { return t0_; }
  [[nodiscard]] double horizon() const noexcept { return horizon_; }

  /// Driving pair at absolute time t in [0, T]. At t == t0 the right limit
  /// is returned, matching the closed interval [t0, T] of the second phase.
  [[nodiscard]] DrivingPair operator()(double t) const;

  /// Same as operator() but selects the one-sided value at t0.
  [[nodiscard]] DrivingPair at(double t, Side side) const;

  /// lambda_2 on the second phase without range checks; t >= t0.
  [[nodiscard]] double active_lambda2(double t) const noexcept;

 private:
  DrivingMode mode_;
  double amplitude_;
  double t0_;
  double horizon_;
};

/// Free-function spelling of DrivingSchedule::operator().
[[nodiscard]] DrivingPair eval_driving(const DrivingSchedule& schedule, double t);

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

enum class Theorem { One, Two };

/// Position of A relative to 2 sqrt(t0) for the piecewise-constant schedule.
enum class CaseTag { I, II, III };

[[nodiscard]] CaseTag classify_case(double amplitude, double t0,
                                    const SolverConfig& cfg = {});

[[nodiscard]] std::string to_string(CaseTag tag);
[[nodiscard]] std::string to_string(Theorem theorem);

/// Validated (A, t0, T) with the theorem that governs it. Construction is the
/// single validation point; downstream code assumes the fields are sane.
class Scenario {
 public:
  static Scenario theorem_one(double amplitude, double t0, double horizon,
                              const SolverConfig& cfg = {});
  static Scenario theorem_two(double amplitude, double t0, double horizon);
  static Scenario make(Theorem theorem, double amplitude, double t0,
                       double horizon, const SolverConfig& cfg = {});

  [[nodiscard]] double amplitude() const noexcept { return amplitude_; }
  [[nodiscard]] double t0() const noexcept { return t0_; }
  [[nodiscard]] double horizon() const noexcept { return horizon_; }
  [[nodiscard]] Theorem theorem() const noexcept { return theorem_; }
  /// Only meaningful for Theorem::One.
  [[nodiscard]] CaseTag case_tag() const noexcept { return case_tag_; }

  [[nodiscard]] DrivingSchedule schedule() const;

  /// Tip of the static segment [0, i 2 sqrt(t0)].
  [[nodiscard]] Complex slit_tip() const noexcept;

 private:
  Scenario(Theorem theorem, double amplitude, double t0, double horizon,
           CaseTag tag)
      : amplitude_(amplitude), t0_(t0), horizon_(horizon), theorem_(theorem),
        case_tag_(tag) {}

  double amplitude_;
  double t0_;
  double horizon_;
  Theorem theorem_;
  CaseTag case_tag_;
};

}  // namespace loewner
