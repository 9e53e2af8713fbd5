#pragma once

/// \file
/// Adaptive Dormand-Prince 5(4) integrator for a single complex unknown.
///
/// The integrator is deliberately small: the Loewner flows in this library are
/// scalar complex ODEs whose only difficulty is a moving pole. Callers supply
///   - rhs(t, y)       the vector field,
///   - cap(t, y)       an upper bound on the next step (pole-distance cap),
///   - admissible(y0, y1)  an extra acceptance predicate for a trial step,
/// and the integrator handles embedded error control with a PI controller.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace loewner {

struct StepControl {
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  double min_step = 1e-12;
  double max_step = 0.05;
  /// First trial step; 0 picks max_step.
  double initial_step = 0.0;
  long max_steps = 5'000'000;
};

enum class IntegrationStatus { Completed, Stopped, StepUnderflow };

template <class State>
struct IntegrationResult {
  State y{};
  double t = 0.0;
  long accepted = 0;
  long rejected = 0;
  double last_step = 0.0;
  IntegrationStatus status = IntegrationStatus::Completed;
};

namespace detail {

struct Dopri5Tableau {
  static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                          c5 = 8.0 / 9.0;
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0,
                          a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                          a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                          a65 = -5103.0 / 18656.0;
  static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0,
                          b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                          b6 = 11.0 / 84.0;
  // Difference between the 5th- and 4th-order weights.
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                          e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                          e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& z) { return std::abs(z); }

}  // namespace detail

/// Integrates y' = rhs(t, y) from t_begin to t_end (t_end may be smaller than
/// t_begin only if the caller flips the sign of time itself; here t_end >
/// t_begin is required). `stop(t, y)` is checked after every accepted step and
/// ends the integration early with status Stopped when it returns true.
template <class State, class Rhs, class Cap, class Admissible, class Stop>
IntegrationResult<State> integrate_dopri5(Rhs&& rhs, State y, double t_begin,
                                          double t_end, const StepControl& ctl,
                                          Cap&& cap, Admissible&& admissible,
                                          Stop&& stop) {
  using T = detail::Dopri5Tableau;
  IntegrationResult<State> out;
  out.y = y;
  out.t = t_begin;
  if (!(t_end > t_begin)) return out;

  constexpr double kSafety = 0.9;
  constexpr double kMinFactor = 0.2;
  constexpr double kMaxFactor = 5.0;
  constexpr double kAlpha = 0.7 / 5.0;
  constexpr double kBeta = 0.4 / 5.0;

  double t = t_begin;
  double h = ctl.initial_step > 0.0 ? ctl.initial_step : ctl.max_step;
  double err_prev = 1e-4;
  State k1 = rhs(t, y);

  while (t < t_end) {
    if (out.accepted + out.rejected >= ctl.max_steps) {
      out.status = IntegrationStatus::StepUnderflow;
      break;
    }
    const double remaining = t_end - t;
    double h_try = std::min({h, ctl.max_step, cap(t, y)});
    bool last = false;
    if (h_try >= remaining) {
      h_try = remaining;
      last = true;
    } else if (h_try > 0.5 * remaining) {
      // Split the remainder evenly rather than leaving a sliver.
      h_try = 0.5 * remaining;
    }

    const State k2 = rhs(t + T::c2 * h_try, y + h_try * (T::a21 * k1));
    const State k3 =
        rhs(t + T::c3 * h_try, y + h_try * (T::a31 * k1 + T::a32 * k2));
    const State k4 = rhs(t + T::c4 * h_try,
                         y + h_try * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3));
    const State k5 =
        rhs(t + T::c5 * h_try, y + h_try * (T::a51 * k1 + T::a52 * k2 +
                                            T::a53 * k3 + T::a54 * k4));
    const double t_new = last ? t_end : t + h_try;
    const State k6 =
        rhs(t_new, y + h_try * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 +
                                T::a64 * k4 + T::a65 * k5));
    const State y_new = y + h_try * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 +
                                     T::b5 * k5 + T::b6 * k6);
    const State k7 = rhs(t_new, y_new);
    const State err_vec = h_try * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 +
                                   T::e5 * k5 + T::e6 * k6 + T::e7 * k7);
    const double scale =
        ctl.abs_tol + ctl.rel_tol * std::max(detail::magnitude(y),
                                             detail::magnitude(y_new));
    double err = detail::magnitude(err_vec) / scale;
    if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();

    if (err <= 1.0 && admissible(y, y_new)) {
      t = t_new;
      y = y_new;
      k1 = k7;
      ++out.accepted;
      out.last_step = h_try;
      const double e = std::max(err, 1e-10);
      double factor = kSafety * std::pow(e, -kAlpha) * std::pow(err_prev, kBeta);
      factor = std::clamp(factor, kMinFactor, kMaxFactor);
      err_prev = e;
      h = h_try * factor;
      if (stop(t, y)) {
        out.status = IntegrationStatus::Stopped;
        break;
      }
    } else {
      ++out.rejected;
      const double factor =
          std::isfinite(err)
              ? std::clamp(kSafety * std::pow(err, -kAlpha), kMinFactor, 1.0)
              : kMinFactor;
      h = h_try * std::min(factor, 0.5);
      if (h < ctl.min_step) {
        out.status = IntegrationStatus::StepUnderflow;
        break;
      }
    }
  }
  out.y = y;
  out.t = t;
  return out;
}

/// Convenience overload without cap, admissibility or stop predicates.
template <class State, class Rhs>
IntegrationResult<State> integrate_dopri5(Rhs&& rhs, State y, double t_begin,
                                          double t_end,
                                          const StepControl& ctl) {
  return integrate_dopri5(
      std::forward<Rhs>(rhs), y, t_begin, t_end, ctl,
      [](double, const State&) { return std::numeric_limits<double>::infinity(); },
      [](const State&, const State&) { return true; },
      [](double, const State&) { return false; });
}

}  // namespace loewner
