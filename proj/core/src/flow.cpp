#include "loewner/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "loewner/integrator.hpp"

namespace loewner {

namespace {

double pole_distance(Complex w, const DrivingPair& d) {
  return std::min(std::abs(w - d.lambda1), std::abs(w - d.lambda2));
}

Complex loewner_field(Complex w, const DrivingPair& d) {
  return 1.0 / (w - d.lambda1) + 1.0 / (w - d.lambda2);
}

StepControl flow_control(const SolverConfig& cfg, double min_step) {
  StepControl ctl;
  ctl.rel_tol = cfg.ode_rel_tol;
  ctl.abs_tol = cfg.ode_abs_tol;
  ctl.min_step = min_step;
  ctl.max_step = cfg.max_step;
  return ctl;
}

/// One phase of constant "side" relative to t0: [begin, end] is entirely
/// before or entirely after the switching time.
struct Phase {
  double begin;
  double end;
  Side side;
};

std::vector<Phase> forward_phases(double t0, double t_end) {
  std::vector<Phase> phases;
  if (t_end <= t0) {
    phases.push_back({0.0, t_end, Side::Before});
  } else {
    phases.push_back({0.0, t0, Side::Before});
    phases.push_back({t0, t_end, Side::After});
  }
  return phases;
}

}  // namespace

FlowResult evolve_forward(Complex z, const DrivingSchedule& schedule,
                          double t_end, const SolverConfig& cfg) {
  cfg.validate();
  if (!(std::isfinite(z.real()) && std::isfinite(z.imag())) || z.imag() < 0.0) {
    throw DomainError("evolve_forward: z must lie in the closed upper half-plane");
  }
  if (!(t_end >= 0.0 && t_end <= schedule.horizon())) {
    throw DomainError("evolve_forward: t_end outside [0, T]");
  }

  FlowResult out;
  out.w = z;
  out.min_singularity_distance = pole_distance(z, schedule.at(0.0, Side::Before));
  if (out.min_singularity_distance < cfg.liftoff_eps) {
    out.status = FlowStatus::StoppedNearSingularity;
    return out;
  }

  Complex disp{};
  const StepControl ctl = flow_control(cfg, cfg.min_step);
  for (const Phase& ph : forward_phases(schedule.t0(), t_end)) {
    if (!(ph.end > ph.begin)) continue;
    auto driving = [&](double t) {
      return schedule.at(std::clamp(t, ph.begin, ph.end), ph.side);
    };
    auto rhs = [&](double t, Complex d) { return loewner_field(z + d, driving(t)); };
    auto cap = [&](double t, Complex d) {
      const double dist = pole_distance(z + d, driving(t));
      return cfg.singularity_factor * dist * dist;
    };
    // Im w is non-increasing along the forward flow.
    auto admissible = [&](Complex d0, Complex d1) {
      return d1.imag() <= d0.imag() + cfg.ode_abs_tol;
    };
    bool near_pole = false;
    auto stop = [&](double t, Complex d) {
      const double dist = pole_distance(z + d, driving(t));
      out.min_singularity_distance = std::min(out.min_singularity_distance, dist);
      near_pole = dist < cfg.liftoff_eps;
      return near_pole;
    };
    const auto res =
        integrate_dopri5(rhs, disp, ph.begin, ph.end, ctl, cap, admissible, stop);
    disp = res.y;
    out.steps_taken += res.accepted;
    out.t_reached = res.t;
    if (res.status != IntegrationStatus::Completed || near_pole) {
      out.status = FlowStatus::StoppedNearSingularity;
      break;
    }
  }
  out.displacement = disp;
  out.w = z + disp;
  return out;
}

Complex inverse_flow(Complex w_target, const DrivingSchedule& schedule, double t,
                     const SolverConfig& cfg) {
  cfg.validate();
  if (!(w_target.imag() > 0.0) || !std::isfinite(w_target.real()) ||
      !std::isfinite(w_target.imag())) {
    throw DomainError("inverse_flow: Im w_target must be positive");
  }
  if (!(t >= 0.0 && t <= schedule.horizon())) {
    throw DomainError("inverse_flow: t outside [0, T]");
  }
  const double t0 = schedule.t0();

  // Reverse time s = t - tau. Phases in s: first the part with tau >= t0,
  // then the part with tau < t0.
  std::vector<Phase> phases;
  if (t > t0) {
    phases.push_back({0.0, t - t0, Side::After});
    phases.push_back({t - t0, t, Side::Before});
  } else {
    phases.push_back({0.0, t, Side::Before});
  }

  Complex disp{};
  // The backward field pushes points away from the real axis, so no pole is
  // ever approached; the step floor only has to stop runaway rejection loops.
  const StepControl ctl = flow_control(cfg, 1e-15);
  for (const Phase& ph : phases) {
    if (!(ph.end > ph.begin)) continue;
    auto driving = [&](double s) {
      const double tau = std::clamp(t - s, t - ph.end, t - ph.begin);
      return schedule.at(tau, ph.side);
    };
    auto rhs = [&](double s, Complex d) {
      return -loewner_field(w_target + d, driving(s));
    };
    auto cap = [&](double s, Complex d) {
      const double dist = pole_distance(w_target + d, driving(s));
      return cfg.singularity_factor * dist * dist;
    };
    const auto res = integrate_dopri5(
        rhs, disp, ph.begin, ph.end, ctl, cap,
        [](Complex, Complex) { return true; },
        [](double, Complex) { return false; });
    if (res.status != IntegrationStatus::Completed) {
      throw ConvergenceError("inverse_flow: step size underflow");
    }
    disp = res.y;
  }
  return w_target + disp;
}

NumericTracePoint trace_numeric_detail(const DrivingSchedule& schedule, double t,
                                       const SolverConfig& cfg) {
  if (!(t > schedule.t0() && t <= schedule.horizon())) {
    throw DomainError("trace_numeric: t must lie in (t0, T]");
  }
  const double eps = cfg.liftoff_eps;
  const double lambda2 = schedule.active_lambda2(t);
  const Complex z1 = inverse_flow(Complex{lambda2, eps}, schedule, t, cfg);
  const Complex z2 = inverse_flow(Complex{lambda2, eps / 2.0}, schedule, t, cfg);
  const Complex z3 = inverse_flow(Complex{lambda2, eps / 4.0}, schedule, t, cfg);

  const double d12 = std::abs(z1 - z2);
  const double d23 = std::abs(z2 - z3);
  if (d12 > 100.0 * eps) {
    std::ostringstream msg;
    msg << "trace_numeric: lift-off heights disagree by " << d12 << " at t = " << t;
    throw ConvergenceError(msg.str());
  }

  NumericTracePoint out;
  if (d23 == 0.0 || d12 == 0.0) {
    out.z = z3;
    return out;
  }
  const double order = std::clamp(std::log2(d12 / d23), 0.5, 4.0);
  const Complex extrapolated = z3 + (z3 - z2) / (std::exp2(order) - 1.0);
  out.z = extrapolated;
  out.observed_order = order;
  out.correction = std::abs(extrapolated - z3);
  return out;
}

Complex trace_numeric(const DrivingSchedule& schedule, double t,
                      const SolverConfig& cfg) {
  return trace_numeric_detail(schedule, t, cfg).z;
}

std::vector<double> capacity_profile(const DrivingSchedule& schedule, double t,
                                     std::span<const double> radii,
                                     const SolverConfig& cfg) {
  constexpr double kAngles[] = {kPi / 4.0, kPi / 2.0, 3.0 * kPi / 4.0};
  std::vector<double> out;
  out.reserve(radii.size());
  for (double r : radii) {
    if (!(r >= 10.0)) throw DomainError("capacity_check: radii must be >= 10");
    double worst = 0.0;
    for (double theta : kAngles) {
      const Complex z = std::polar(r, theta);
      const FlowResult fr = evolve_forward(z, schedule, t, cfg);
      if (fr.status != FlowStatus::Completed) {
        throw ConvergenceError("capacity_check: probe point was absorbed");
      }
      worst = std::max(worst, std::abs(fr.displacement * z - 2.0 * t));
    }
    out.push_back(worst);
  }
  return out;
}

double capacity_check(const DrivingSchedule& schedule, double t,
                      std::span<const double> radii, const SolverConfig& cfg) {
  const auto profile = capacity_profile(schedule, t, radii, cfg);
  return profile.empty() ? 0.0 : *std::max_element(profile.begin(), profile.end());
}

}  // namespace loewner
