#include "loewner/traces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "loewner/integrator.hpp"

namespace loewner {

namespace {

constexpr Complex kI{0.0, 1.0};
// Offset of the first integrated point from t0, relative to T - t0.
constexpr double kSeedFraction = 1e-6;
constexpr double kDenominatorFloor = 1e-14;
constexpr double kBranchSlack = 1e-10;

void require_theorem(const Scenario& sc, Theorem theorem, const char* what) {
  if (sc.theorem() != theorem) {
    throw DomainError(std::string(what) + ": scenario has the wrong driving");
  }
}

void require_times(std::span<const double> times, const Scenario& sc) {
  double prev = sc.t0();
  for (double t : times) {
    if (!(t >= sc.t0() && t <= sc.horizon()) || t < prev) {
      throw DomainError("trace times must be nondecreasing within [t0, T]");
    }
    prev = t;
  }
}

/// Series solution of v' = -4 (A^2 + v) / v, v(t0) = 0, with v = z^2 - z^2(t0):
/// v = A^2 (s + s^2/3 + s^3/36 + ...), s = i sqrt(8 delta) / A. The sign of s
/// puts Gamma2 on the side Im z > 0 (cases i, iii) or Re z > 0 (case ii).
Complex offset_series(double amplitude, double delta) {
  const double a2 = amplitude * amplitude;
  const Complex s = kI * (std::sqrt(8.0 * delta) / amplitude);
  return a2 * (s + s * s / 3.0 + s * s * s / 36.0);
}

/// Root of `square` nearest to `reference`.
Complex sqrt_near(Complex square, Complex reference) {
  const Complex r = std::sqrt(square);
  return std::abs(r - reference) <= std::abs(-r - reference) ? r : -r;
}

Complex checked_first_quadrant(Complex z, double t) {
  if (!(std::isfinite(z.real()) && std::isfinite(z.imag())) ||
      z.imag() < -kBranchSlack) {
    std::ostringstream msg;
    msg << "trace left the closed upper half-plane at t = " << t;
    throw SingularityError(msg.str());
  }
  return z;
}

StepControl trace_control(const SolverConfig& cfg, double first_step) {
  StepControl ctl;
  ctl.rel_tol = cfg.ode_rel_tol;
  ctl.abs_tol = cfg.ode_abs_tol;
  ctl.min_step = 1e-15;
  ctl.max_step = cfg.max_step;
  ctl.initial_step = first_step;
  return ctl;
}

/// Cases (i), (ii): integrate the offset v = z^2 - (A^2 - 4 t0).
std::vector<Complex> trace_via_square(const Scenario& sc, const SolverConfig& cfg,
                                      std::span<const double> times) {
  const double a2 = sc.amplitude() * sc.amplitude();
  const double t0 = sc.t0();
  const double c = a2 - 4.0 * t0;
  const double seed_delta = kSeedFraction * (sc.horizon() - t0);
  const Complex start = trace_start(sc);

  auto rhs = [a2](double, Complex v) { return -4.0 * (a2 + v) / v; };
  auto to_z = [c](Complex v, Complex prev) { return sqrt_near(c + v, prev); };

  std::vector<Complex> out;
  out.reserve(times.size());
  double tc = t0 + seed_delta;
  Complex v = offset_series(sc.amplitude(), seed_delta);
  Complex z_prev = start;
  StepControl ctl = trace_control(cfg, seed_delta);

  for (double t : times) {
    Complex z;
    if (t == t0) {
      z = start;
    } else if (t <= tc) {
      z = to_z(offset_series(sc.amplitude(), t - t0), z_prev);
    } else {
      const auto res = integrate_dopri5(
          rhs, v, tc, t, ctl,
          [](double, Complex) { return std::numeric_limits<double>::infinity(); },
          [](Complex, Complex) { return true; },
          [&](double ts, Complex vs) {
            if (std::abs(vs) < kDenominatorFloor) {
              std::ostringstream msg;
              msg << "trace ODE denominator vanished at t = " << ts;
              throw SingularityError(msg.str());
            }
            return false;
          });
      if (res.status != IntegrationStatus::Completed) {
        throw SingularityError("trace ODE integration underflowed");
      }
      v = res.y;
      tc = t;
      ctl.initial_step = res.last_step;
      z = to_z(v, z_prev);
    }
    z_prev = checked_first_quadrant(z, t);
    out.push_back(z);
  }
  return out;
}

}  // namespace

std::string to_string(CurveLabel label) {
  switch (label) {
    case CurveLabel::Gamma0: return "G0";
    case CurveLabel::Gamma1: return "G1";
    case CurveLabel::Gamma2: return "G2";
  }
  return "?";
}

std::vector<Complex> TraceCurve::points() const {
  std::vector<Complex> pts;
  pts.reserve(samples.size());
  for (const auto& s : samples) pts.push_back(s.z);
  return pts;
}

Complex AsymptoticExpansion::evaluate(double delta) const {
  return base_point + coefficient * std::pow(delta, exponent);
}

std::vector<double> uniform_times(double t0, double horizon, int n) {
  if (n < 2) throw DomainError("at least two samples are required");
  std::vector<double> ts(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    ts[static_cast<std::size_t>(k)] =
        t0 + (horizon - t0) * static_cast<double>(k) / (n - 1);
  }
  ts.back() = horizon;
  return ts;
}

std::vector<double> refined_times(double t0, double horizon, int n_uniform,
                                  int n_extra) {
  std::vector<double> ts = uniform_times(t0, horizon, n_uniform);
  const double span = horizon - t0;
  // Geometric ladder from 1e-6 to 1e-2 of the interval.
  for (int k = 0; k < n_extra; ++k) {
    const double frac =
        n_extra == 1 ? 1.0 : static_cast<double>(k) / (n_extra - 1);
    ts.push_back(t0 + span * 1e-2 * std::pow(10.0, -4.0 * (1.0 - frac)));
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

Complex trace_start(const Scenario& sc) {
  const double t0 = sc.t0();
  if (sc.theorem() == Theorem::Two) return {0.0, 2.0 * std::sqrt(t0)};
  const double c = sc.amplitude() * sc.amplitude() - 4.0 * t0;
  switch (sc.case_tag()) {
    case CaseTag::I: return {std::sqrt(c), 0.0};
    case CaseTag::II: return {0.0, std::sqrt(-c)};
    case CaseTag::III: return {0.0, 0.0};
  }
  return {};
}

AsymptoticExpansion thm1_trace_asymptotic(const Scenario& sc) {
  require_theorem(sc, Theorem::One, "thm1_trace_asymptotic");
  const double a = sc.amplitude();
  const double t0 = sc.t0();
  const double c = a * a - 4.0 * t0;
  switch (sc.case_tag()) {
    case CaseTag::I:
      return {trace_start(sc), 0.5, kI * (std::sqrt(2.0) * a / std::sqrt(c))};
    case CaseTag::II:
      return {trace_start(sc), 0.5, Complex{std::sqrt(2.0) * a / std::sqrt(-c)}};
    case CaseTag::III:
      return {Complex{}, 0.25,
              std::polar(2.0 * std::pow(2.0 * t0, 0.25), kPi / 4.0)};
  }
  return {};
}

Complex thm1_trace_residual(Complex z, double t, const Scenario& sc) {
  const double a2 = sc.amplitude() * sc.amplitude();
  const Complex z2 = z * z;
  const Complex base = z2 + 4.0 * sc.t0();
  if (base == Complex{}) throw SingularityError("z^2 + 4 t0 = 0");
  return a2 - z2 - a2 * std::log(a2 / base) - 4.0 * t;
}

Complex thm1_case3_implicit_residual(Complex z, double t, const Scenario& sc) {
  const double a2 = sc.amplitude() * sc.amplitude();
  const double t0 = sc.t0();
  const Complex z2 = z * z;
  const Complex base = z2 + 4.0 * t0;
  if (base == Complex{}) throw SingularityError("z^2 + 4 t0 = 0");
  return z2 + 4.0 * t0 * std::log(a2 / base) - (a2 - 4.0 * t);
}

Complex thm1_case3_literal_residual(Complex z, double t, const Scenario& sc) {
  const double a2 = sc.amplitude() * sc.amplitude();
  const Complex z2 = z * z;
  const Complex base = z2 + 4.0 * sc.t0();
  if (base == Complex{}) throw SingularityError("z^2 + 4 t0 = 0");
  return z2 + 4.0 * std::log(a2 / base) - (a2 - 4.0 * t);
}

std::vector<Complex> integrate_quartic_trace(double t0,
                                             std::span<const double> times,
                                             double rel_tol, double abs_tol) {
  if (!(t0 > 0.0)) throw DomainError("t0 must be positive");
  const double amplitude = 2.0 * std::sqrt(t0);
  // Seed the quartic y = z^4 = (z^2)^2 from the same series as cases (i)/(ii);
  // with A^2 = 4 t0 the offset v equals z^2 itself.
  double horizon = t0;
  for (double t : times) horizon = std::max(horizon, t);
  const double seed_delta =
      kSeedFraction * (horizon > t0 ? horizon - t0 : 1.0);

  Complex square = offset_series(amplitude, seed_delta);  // z^2
  Complex y = square * square;
  double tc = t0 + seed_delta;

  // z^2 = sqrt(y) on the sheet continuous along the path; `square` follows
  // every accepted step.
  auto rhs = [&square, t0](double, Complex yy) {
    return -8.0 * (sqrt_near(yy, square) + 4.0 * t0);
  };
  StepControl ctl;
  ctl.rel_tol = rel_tol;
  ctl.abs_tol = abs_tol;
  ctl.min_step = 1e-15;
  ctl.max_step = 0.05;
  ctl.initial_step = seed_delta;

  std::vector<Complex> out;
  out.reserve(times.size());
  Complex z_prev{};
  double prev_t = t0;
  for (double t : times) {
    if (t < prev_t) throw DomainError("times must be nondecreasing");
    prev_t = t;
    Complex z2;
    if (t <= tc) {
      z2 = t == t0 ? Complex{} : offset_series(amplitude, t - t0);
    } else {
      const auto res = integrate_dopri5(
          rhs, y, tc, t, ctl,
          [](double, Complex) { return std::numeric_limits<double>::infinity(); },
          [](Complex, Complex) { return true; },
          [&](double, Complex ys) {
            square = sqrt_near(ys, square);
            return false;
          });
      if (res.status != IntegrationStatus::Completed) {
        throw SingularityError("quartic trace integration underflowed");
      }
      y = res.y;
      tc = t;
      ctl.initial_step = res.last_step;
      square = sqrt_near(y, square);
      z2 = square;
    }
    const Complex z = t == t0 ? Complex{} : sqrt_near(z2, z_prev == Complex{}
                                                             ? std::polar(1.0, kPi / 4.0)
                                                             : z_prev);
    z_prev = checked_first_quadrant(z, t);
    out.push_back(z);
  }
  return out;
}

TraceCurve thm1_trace_at(const Scenario& sc, const SolverConfig& cfg,
                         std::span<const double> times) {
  require_theorem(sc, Theorem::One, "thm1_trace");
  require_times(times, sc);
  std::vector<Complex> zs =
      sc.case_tag() == CaseTag::III
          ? integrate_quartic_trace(sc.t0(), times, cfg.ode_rel_tol,
                                    cfg.ode_abs_tol)
          : trace_via_square(sc, cfg, times);
  TraceCurve curve{{}, CurveLabel::Gamma2, sc};
  curve.samples.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    curve.samples.push_back({times[k], zs[k]});
  }
  return curve;
}

TraceCurve thm1_trace(const Scenario& sc, const SolverConfig& cfg,
                      int n_samples) {
  const auto ts = uniform_times(sc.t0(), sc.horizon(), n_samples);
  return thm1_trace_at(sc, cfg, ts);
}

namespace {

/// 2^{8/(A^2+4)} A^{2A^2/(A^2+4)}: speed of z^2 + 4 t0 along its ray.
double segment_speed(double a) {
  const double a2 = a * a;
  return std::exp((8.0 * std::log(2.0) + 2.0 * a2 * std::log(a)) / (a2 + 4.0));
}

}  // namespace

AsymptoticExpansion thm2_trace_asymptotic(const Scenario& sc) {
  require_theorem(sc, Theorem::Two, "thm2_trace_asymptotic");
  const double angle = thm2_angles(sc.amplitude()).tangent_angle;
  return {trace_start(sc), 1.0,
          std::polar(segment_speed(sc.amplitude()) / (4.0 * std::sqrt(sc.t0())),
                     angle)};
}

Complex thm2_trace_point(const Scenario& sc, double t) {
  require_theorem(sc, Theorem::Two, "thm2_trace");
  const double a2 = sc.amplitude() * sc.amplitude();
  const double angle = 4.0 * kPi / (a2 + 4.0);
  const Complex bracket =
      std::polar(segment_speed(sc.amplitude()) * (t - sc.t0()), angle) -
      4.0 * sc.t0();
  // Im(bracket) >= 0, so the principal root is the first-quadrant one.
  return std::sqrt(bracket);
}

TraceCurve thm2_trace_at(const Scenario& sc, std::span<const double> times) {
  require_theorem(sc, Theorem::Two, "thm2_trace");
  require_times(times, sc);
  TraceCurve curve{{}, CurveLabel::Gamma2, sc};
  curve.samples.reserve(times.size());
  for (double t : times) curve.samples.push_back({t, thm2_trace_point(sc, t)});
  return curve;
}

TraceCurve thm2_trace(const Scenario& sc, int n_samples) {
  const auto ts = uniform_times(sc.t0(), sc.horizon(), n_samples);
  return thm2_trace_at(sc, ts);
}

TraceAngles thm2_angles(double amplitude) {
  if (!(amplitude > 0.0)) throw DomainError("thm2_angles requires A > 0");
  const double a2 = amplitude * amplitude;
  return {4.0 * kPi / (a2 + 4.0), kPi * (4.0 - a2) / (2.0 * (a2 + 4.0))};
}

TraceCurve exact_trace(const Scenario& sc, const SolverConfig& cfg,
                       std::span<const double> times) {
  return sc.theorem() == Theorem::One ? thm1_trace_at(sc, cfg, times)
                                      : thm2_trace_at(sc, times);
}

TraceCurve mirror(const TraceCurve& curve) {
  if (curve.label != CurveLabel::Gamma2) {
    throw DomainError("mirror expects a Gamma2 curve");
  }
  TraceCurve out{{}, CurveLabel::Gamma1, curve.scenario};
  out.samples.reserve(curve.samples.size());
  for (const auto& s : curve.samples) {
    out.samples.push_back({s.t, -std::conj(s.z)});
  }
  return out;
}

TraceCurve gamma0(const Scenario& sc, int n_samples) {
  if (n_samples < 2) throw DomainError("at least two samples are required");
  const double tip = 2.0 * std::sqrt(sc.t0());
  TraceCurve out{{}, CurveLabel::Gamma0, sc};
  out.samples.reserve(static_cast<std::size_t>(n_samples));
  for (int k = 0; k < n_samples; ++k) {
    const double frac = static_cast<double>(k) / (n_samples - 1);
    out.samples.push_back({sc.t0() * frac * frac, Complex{0.0, tip * frac}});
  }
  return out;
}

namespace {

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

int orientation(Complex p, Complex q, Complex r) {
  const double v = cross(q - p, r - p);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(Complex p, Complex q, Complex r) {
  return std::min(p.real(), r.real()) <= q.real() &&
         q.real() <= std::max(p.real(), r.real()) &&
         std::min(p.imag(), r.imag()) <= q.imag() &&
         q.imag() <= std::max(p.imag(), r.imag());
}

}  // namespace

bool segments_intersect(Complex a0, Complex a1, Complex b0, Complex b1) {
  const int o1 = orientation(a0, a1, b0);
  const int o2 = orientation(a0, a1, b1);
  const int o3 = orientation(b0, b1, a0);
  const int o4 = orientation(b0, b1, a1);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a0, b0, a1)) return true;
  if (o2 == 0 && on_segment(a0, b1, a1)) return true;
  if (o3 == 0 && on_segment(b0, a0, b1)) return true;
  if (o4 == 0 && on_segment(b0, a1, b1)) return true;
  return false;
}

int count_self_intersections(std::span<const Complex> points) {
  int hits = 0;
  const std::size_t n = points.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 2; j + 1 < n; ++j) {
      if (segments_intersect(points[i], points[i + 1], points[j],
                             points[j + 1])) {
        ++hits;
      }
    }
  }
  return hits;
}

int count_cross_intersections(std::span<const Complex> a,
                              std::span<const Complex> b,
                              std::span<const Complex> allowed_contacts,
                              double tolerance) {
  auto near_contact = [&](Complex p) {
    return std::any_of(allowed_contacts.begin(), allowed_contacts.end(),
                       [&](Complex c) { return std::abs(p - c) <= tolerance; });
  };
  int hits = 0;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      if (!segments_intersect(a[i], a[i + 1], b[j], b[j + 1])) continue;
      const Complex da = a[i + 1] - a[i];
      const Complex db = b[j + 1] - b[j];
      const double denom = cross(da, db);
      Complex hit = a[i];
      if (denom != 0.0) {
        hit = a[i] + da * (cross(b[j] - a[i], db) / denom);
      }
      if (!near_contact(hit)) ++hits;
    }
  }
  return hits;
}

}  // namespace loewner
