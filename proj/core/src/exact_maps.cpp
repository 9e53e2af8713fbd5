#include "loewner/exact_maps.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace loewner {

namespace {

constexpr double kTwoPi = 2.0 * kPi;
// Largest argument change of w^2 accepted within one continuation step.
constexpr double kMaxArgJump = kPi / 2.0;
constexpr double kHalfPlaneSlack = 1e-12;
// Newton may move the Euler prediction by at most this fraction of the
// distance to the nearest driving point. Near a driving point the step
// shrinks, so points swallowed by the trace exhaust min_step instead of
// being carried across to another root.
constexpr double kMaxCorrection = 0.25;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// arg in [0, pi] for points of the closed upper half-plane, treating a
/// negative zero imaginary part as lying on the upper side.
double upper_arg(Complex z) {
  double a = std::arg(z);
  if (a < 0.0) a += kTwoPi;
  return a;
}

double pole_distance(Complex w, double lambda2) {
  return std::min(std::abs(w - lambda2), std::abs(w + lambda2));
}

Complex branch_log(Complex value, double arg) {
  return {std::log(std::abs(value)), arg};
}

void require_off_slit(Complex z, const Scenario& sc, const SolverConfig& cfg) {
  if (!finite(z) || z.imag() < 0.0) {
    throw DomainError("point must lie in the closed upper half-plane");
  }
  if (distance_to_slit(z, sc.t0()) < cfg.liftoff_eps) {
    std::ostringstream msg;
    msg << "point (" << z.real() << ", " << z.imag()
        << ") lies on or within liftoff_eps of the slit [0, i2sqrt(t0)]";
    throw DomainError(msg.str());
  }
}

void require_phase_two_time(double t, const Scenario& sc) {
  if (!(t >= sc.t0() && t <= sc.horizon())) {
    std::ostringstream msg;
    msg << "time " << t << " outside [t0, T] = [" << sc.t0() << ", "
        << sc.horizon() << "]";
    throw DomainError(msg.str());
  }
}

struct ResidualAndSlope {
  Complex value;
  Complex slope;
};

// Residual and its w-derivative on the sheet described by `br`.
ResidualAndSlope residual_with_slope(Complex w, Complex z, double t,
                                     const Scenario& sc, const BranchState& br) {
  const double a2 = sc.amplitude() * sc.amplitude();
  const Complex w2 = w * w;
  const Complex base = z * z + 4.0 * sc.t0();
  if (sc.theorem() == Theorem::One) {
    const Complex log_ratio = branch_log(w2, br.arg_w_accum) -
                              branch_log(base, br.arg_base_accum);
    return {w2 - z * z - a2 * log_ratio - 4.0 * t, 2.0 * w - 2.0 * a2 / w};
  }
  // base^{p+1} w^{-2p} = base * exp(p (log base - log w^2)), p = A^2/4.
  const double p = a2 / 4.0;
  const double denom = a2 + 4.0;
  const Complex power_term =
      base * std::exp(p * (branch_log(base, br.arg_base_accum) -
                           branch_log(w2, br.arg_w_accum)));
  return {(t - sc.t0()) - w2 / denom + power_term / denom,
          -2.0 * w / denom - 2.0 * p * power_term / (w * denom)};
}

void require_nonsingular(Complex w, Complex z, const Scenario& sc) {
  if (w == Complex{}) {
    throw SingularityError("implicit residual evaluated at w = 0");
  }
  if (sc.theorem() == Theorem::One && z * z + 4.0 * sc.t0() == Complex{}) {
    throw SingularityError("implicit residual evaluated at z^2 + 4 t0 = 0");
  }
}

struct NewtonOutcome {
  bool converged = false;
  Complex w;
  double arg_w = 0.0;
  int iterations = 0;
};

NewtonOutcome newton_correct(Complex w, double arg_w_ref, Complex z, double t,
                             const Scenario& sc, const SolverConfig& cfg,
                             double arg_base) {
  NewtonOutcome out;
  BranchState br{arg_w_ref, arg_base};
  for (int it = 0; it <= cfg.newton_max_iter; ++it) {
    if (!finite(w) || w == Complex{}) return out;
    br.arg_w_accum = track_argument(br.arg_w_accum, w * w);
    const auto [f, df] = residual_with_slope(w, z, t, sc, br);
    if (!finite(f)) return out;
    if (std::abs(f) <= cfg.newton_tol) {
      out.converged = true;
      out.w = w;
      out.arg_w = br.arg_w_accum;
      out.iterations = it;
      return out;
    }
    if (it == cfg.newton_max_iter || df == Complex{}) break;
    w -= f / df;
  }
  return out;
}

ImplicitSolveResult continue_in_time(Complex z, double t, const Scenario& sc,
                                     const SolverConfig& cfg) {
  cfg.validate();
  require_off_slit(z, sc, cfg);
  require_phase_two_time(t, sc);

  const double t0 = sc.t0();
  ImplicitSolveResult res;
  res.w = sqrt_map(z, t0);
  res.branch = seed_branch(z, t0);
  if (t == t0) {
    res.residual = std::abs(implicit_residual(res.w, z, t, sc, res.branch));
    return res;
  }

  const DrivingSchedule schedule = sc.schedule();
  const double h_init = (sc.horizon() - t0) / 64.0;
  double h = h_init;
  double s = t0;
  bool last_failure_was_branch = false;
  while (s < t) {
    const bool last = h >= t - s;
    const double step = last ? t - s : h;
    const double s_new = last ? t : s + step;

    // Euler predictor from the reduced ODE keeps Newton inside its basin.
    const Complex predicted = res.w + step * reduced_rhs(res.w, s, sc);
    const NewtonOutcome nw = newton_correct(
        predicted, res.branch.arg_w_accum, z, s_new, sc, cfg,
        res.branch.arg_base_accum);

    bool ok = nw.converged && nw.w.imag() >= -kHalfPlaneSlack &&
              std::abs(nw.w - predicted) <=
                  kMaxCorrection * pole_distance(res.w, schedule.active_lambda2(s));
    bool branch_jump = false;
    if (ok && std::abs(nw.arg_w - res.branch.arg_w_accum) > kMaxArgJump) {
      ok = false;
      branch_jump = true;
    }
    res.iterations += nw.iterations;

    if (ok) {
      res.w = nw.w;
      res.branch.arg_w_accum = nw.arg_w;
      ++res.path_steps;
      s = s_new;
      h = std::min(2.0 * h, h_init);
      last_failure_was_branch = false;
      continue;
    }

    last_failure_was_branch = branch_jump;
    h *= 0.5;
    if (h < cfg.min_step) {
      std::ostringstream msg;
      msg << "continuation stalled at t = " << s << " for z = (" << z.real()
          << ", " << z.imag() << "); the point is on or too near the trace";
      if (last_failure_was_branch) throw SingularityError(msg.str());
      throw ContinuationError(msg.str());
    }
  }

  res.residual = std::abs(implicit_residual(res.w, z, t, sc, res.branch));
  return res;
}

}  // namespace

Complex sqrt_map(Complex z, double t) {
  if (!(t >= 0.0) || !finite(z)) throw DomainError("sqrt_map requires t >= 0");
  Complex s = std::sqrt(z * z + 4.0 * t);
  if (s.imag() < 0.0) {
    s = -s;
  } else if (s.imag() == 0.0) {
    const double tip = 2.0 * std::sqrt(t);
    if (z.real() == 0.0 && z.imag() >= 0.0 && z.imag() < tip) {
      throw DomainError("sqrt_map: point on the slit has two boundary images");
    }
    if (z.real() < 0.0) s = Complex{-std::abs(s.real()), 0.0};
    else s = Complex{std::abs(s.real()), 0.0};
  }
  return s;
}

Complex sqrt_map_inverse(Complex w, double t) {
  if (!(t >= 0.0) || !finite(w)) {
    throw DomainError("sqrt_map_inverse requires t >= 0");
  }
  Complex s = std::sqrt(w * w - 4.0 * t);
  if (s.imag() < 0.0) {
    s = -s;
  } else if (s.imag() == 0.0 && s.real() != 0.0) {
    s = Complex{w.real() < 0.0 ? -std::abs(s.real()) : std::abs(s.real()), 0.0};
  }
  return s;
}

double distance_to_slit(Complex z, double t0) {
  const double tip = 2.0 * std::sqrt(t0);
  const double y = std::clamp(z.imag(), 0.0, tip);
  return std::abs(z - Complex{0.0, y});
}

double track_argument(double previous, Complex value) {
  const double a = std::arg(value);
  return a + kTwoPi * std::round((previous - a) / kTwoPi);
}

BranchState seed_branch(Complex z, double t0) {
  const double a = 2.0 * upper_arg(sqrt_map(z, t0));
  return {a, a};
}

BranchState canonical_branch(Complex w, Complex z, double t0) {
  return {2.0 * upper_arg(w), 2.0 * upper_arg(sqrt_map(z, t0))};
}

Complex thm1_residual(Complex w, Complex z, double t, const Scenario& sc,
                      const BranchState& br) {
  if (sc.theorem() != Theorem::One) {
    throw DomainError("thm1_residual requires a piecewise-constant scenario");
  }
  require_nonsingular(w, z, sc);
  return residual_with_slope(w, z, t, sc, br).value;
}

Complex thm2_residual(Complex w, Complex z, double t, const Scenario& sc,
                      const BranchState& br) {
  if (sc.theorem() != Theorem::Two) {
    throw DomainError("thm2_residual requires a constant-then-sqrt scenario");
  }
  require_nonsingular(w, z, sc);
  return residual_with_slope(w, z, t, sc, br).value;
}

Complex implicit_residual(Complex w, Complex z, double t, const Scenario& sc,
                          const BranchState& br) {
  return sc.theorem() == Theorem::One ? thm1_residual(w, z, t, sc, br)
                                      : thm2_residual(w, z, t, sc, br);
}

Complex reduced_rhs(Complex w, double t, const Scenario& sc) {
  const double a2 = sc.amplitude() * sc.amplitude();
  const double shift =
      sc.theorem() == Theorem::One ? a2 : a2 * std::max(t - sc.t0(), 0.0);
  return 2.0 * w / (w * w - shift);
}

ImplicitSolveResult thm1_solve(Complex z, double t, const Scenario& sc,
                               const SolverConfig& cfg) {
  if (sc.theorem() != Theorem::One) {
    throw DomainError("thm1_solve requires a piecewise-constant scenario");
  }
  return continue_in_time(z, t, sc, cfg);
}

ImplicitSolveResult thm2_solve(Complex z, double t, const Scenario& sc,
                               const SolverConfig& cfg) {
  if (sc.theorem() != Theorem::Two) {
    throw DomainError("thm2_solve requires a constant-then-sqrt scenario");
  }
  return continue_in_time(z, t, sc, cfg);
}

ImplicitSolveResult implicit_solve(Complex z, double t, const Scenario& sc,
                                   const SolverConfig& cfg) {
  if (t >= 0.0 && t < sc.t0()) {
    ImplicitSolveResult res;
    res.w = sqrt_map(z, t);
    // No logarithm is involved before t0; the branch stays default.
    res.residual = std::abs(res.w * res.w - z * z - 4.0 * t);
    return res;
  }
  return continue_in_time(z, t, sc, cfg);
}

}  // namespace loewner
