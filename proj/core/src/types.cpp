#include "loewner/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace loewner {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

void require_params(double amplitude, double t0, double horizon) {
  if (!positive_finite(amplitude)) {
    throw DomainError("driving amplitude A must be positive and finite");
  }
  if (!positive_finite(t0)) {
    throw DomainError("switching time t0 must be positive and finite");
  }
  if (!std::isfinite(horizon) || !(horizon > t0)) {
    throw DomainError("horizon T must be finite and greater than t0");
  }
}

}  // namespace

void SolverConfig::validate() const {
  const bool ok = positive_finite(newton_tol) && newton_max_iter >= 1 &&
                  positive_finite(ode_rel_tol) && positive_finite(ode_abs_tol) &&
                  positive_finite(min_step) && positive_finite(max_step) &&
                  min_step <= max_step && positive_finite(singularity_factor) &&
                  positive_finite(liftoff_eps) && positive_finite(case_tol);
  if (!ok) throw DomainError("invalid solver configuration");
}

DrivingSchedule::DrivingSchedule(DrivingMode mode, double amplitude, double t0,
                                 double horizon)
    : mode_(mode), amplitude_(amplitude), t0_(t0), horizon_(horizon) {
  require_params(amplitude, t0, horizon);
}

double DrivingSchedule::active_lambda2(double t) const noexcept {
  switch (mode_) {
    case DrivingMode::PiecewiseConstant:
      return amplitude_;
    case DrivingMode::ConstantThenSqrt:
      return amplitude_ * std::sqrt(std::max(t - t0_, 0.0));
  }
  return 0.0;
}

DrivingPair DrivingSchedule::at(double t, Side side) const {
  if (!(t >= 0.0 && t <= horizon_)) {
    std::ostringstream msg;
    msg << "time " << t << " outside [0, " << horizon_ << "]";
    throw DomainError(msg.str());
  }
  const bool before = t < t0_ || (t == t0_ && side == Side::Before);
  const double l2 = before ? 0.0 : active_lambda2(t);
  return {-l2, l2};
}

DrivingPair DrivingSchedule::operator()(double t) const {
  return at(t, Side::After);
}

DrivingPair eval_driving(const DrivingSchedule& schedule, double t) {
  return schedule(t);
}

CaseTag classify_case(double amplitude, double t0, const SolverConfig& cfg) {
  if (!positive_finite(amplitude) || !positive_finite(t0)) {
    throw DomainError("classify_case requires A > 0 and t0 > 0");
  }
  const double disc = amplitude * amplitude - 4.0 * t0;
  if (disc > cfg.case_tol) return CaseTag::I;
  if (disc < -cfg.case_tol) return CaseTag::II;
  return CaseTag::III;
}

std::string to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::I: return "i";
    case CaseTag::II: return "ii";
    case CaseTag::III: return "iii";
  }
  return "?";
}

std::string to_string(Theorem theorem) {
  return theorem == Theorem::One ? "1" : "2";
}

Scenario Scenario::theorem_one(double amplitude, double t0, double horizon,
                               const SolverConfig& cfg) {
  require_params(amplitude, t0, horizon);
  return {Theorem::One, amplitude, t0, horizon,
          classify_case(amplitude, t0, cfg)};
}

Scenario Scenario::theorem_two(double amplitude, double t0, double horizon) {
  require_params(amplitude, t0, horizon);
  return {Theorem::Two, amplitude, t0, horizon, CaseTag::I};
}

Scenario Scenario::make(Theorem theorem, double amplitude, double t0,
                        double horizon, const SolverConfig& cfg) {
  return theorem == Theorem::One ? theorem_one(amplitude, t0, horizon, cfg)
                                 : theorem_two(amplitude, t0, horizon);
}

DrivingSchedule Scenario::schedule() const {
  const auto mode = theorem_ == Theorem::One ? DrivingMode::PiecewiseConstant
                                             : DrivingMode::ConstantThenSqrt;
  return {mode, amplitude_, t0_, horizon_};
}

Complex Scenario::slit_tip() const noexcept {
  return {0.0, 2.0 * std::sqrt(t0_)};
}

}  // namespace loewner
