#include "loewner/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "loewner/exact_maps.hpp"
#include "loewner/flow.hpp"
#include "loewner/traces.hpp"

namespace loewner {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kOracleTol = 1e-7;
constexpr double kResidualTol = 1e-12;
constexpr double kSpliceTol = 1e-12;
constexpr double kSymmetryTol = 1e-12;
constexpr double kExponentTol = 0.02;
constexpr double kArgTol = 0.01;
constexpr double kModulusRelTol = 0.01;
constexpr double kClosedFormTol = 1e-8;
constexpr double kTraceResidualTol = 1e-8;
constexpr double kThm2TraceResidualTol = 1e-10;
constexpr double kRectilinearTol = 1e-10;
constexpr double kDepartureTol = 1e-3;
constexpr double kDepartureDelta = 1e-8;
constexpr double kCase3Tol = 1e-8;

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double wrap_angle(double a) {
  return std::remainder(a, 2.0 * kPi);
}

Scenario sibling(const Scenario& sc, Theorem theorem) {
  return Scenario::make(theorem, sc.amplitude(), sc.t0(), sc.horizon());
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, (sy - slope * sx) / n};
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Paper: return "PAPER";
    case Provenance::Trivial: return "TRIVIAL";
    case Provenance::Derived: return "DERIVED";
  }
  return "?";
}

void VerificationReport::add(std::string id, double measured, double threshold,
                             Provenance p) {
  const bool pass = !std::isnan(measured) && measured <= threshold;
  checks.push_back({std::move(id), measured, threshold, pass, p});
}

void VerificationReport::observe(std::string id, std::string value) {
  observations.push_back({std::move(id), std::move(value)});
}

void VerificationReport::append(const VerificationReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  observations.insert(observations.end(), other.observations.begin(),
                      other.observations.end());
  runtime_s += other.runtime_s;
}

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.pass; });
}

const Check* VerificationReport::find(const std::string& id) const {
  const auto it = std::find_if(checks.begin(), checks.end(),
                               [&](const Check& c) { return c.id == id; });
  return it == checks.end() ? nullptr : &*it;
}

std::string VerificationReport::to_json(bool include_runtime) const {
  // Non-finite values have no JSON spelling; they are written as null.
  auto number = [](double x) -> nlohmann::ordered_json {
    if (std::isfinite(x)) return x;
    return nullptr;
  };
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json cj;
    cj["id"] = c.id;
    cj["measured"] = number(c.measured);
    cj["threshold"] = number(c.threshold);
    cj["pass"] = c.pass;
    cj["provenance"] = to_string(c.provenance);
    j["checks"].push_back(std::move(cj));
  }
  j["observations"] = nlohmann::ordered_json::array();
  for (const auto& o : observations) {
    j["observations"].push_back({{"id", o.id}, {"value", o.value}});
  }
  j["runtime_s"] = include_runtime ? runtime_s : 0.0;
  return j.dump(2) + "\n";
}

std::vector<Complex> oracle_grid(const Scenario& sc, const SolverConfig& cfg) {
  std::vector<Complex> grid;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const Complex z{-5.0 + 10.0 * i / 9.0, 0.2 + 4.8 * j / 9.0};
      if (distance_to_slit(z, sc.t0()) >= cfg.liftoff_eps) grid.push_back(z);
    }
  }
  return grid;
}

std::vector<double> oracle_times(const Scenario& sc) {
  return uniform_times(sc.t0(), sc.horizon(), 5);
}

VerificationReport suite_oracle_equivalence(const Scenario& sc,
                                            const SolverConfig& cfg) {
  const auto start = Clock::now();
  VerificationReport rep;
  rep.suite = "oracle";
  const auto grid = oracle_grid(sc, cfg);
  const auto times = oracle_times(sc);
  const DrivingSchedule schedule = sc.schedule();

  double max_dw = 0.0, max_res = 0.0, worst_im = 0.0;
  int failures = 0;
  for (const Complex z : grid) {
    for (const double t : times) {
      try {
        const auto exact = implicit_solve(z, t, sc, cfg);
        const auto flow = evolve_forward(z, schedule, t, cfg);
        if (flow.status != FlowStatus::Completed) {
          ++failures;
          continue;
        }
        max_dw = std::max(max_dw, std::abs(exact.w - flow.w));
        // Re-evaluate rather than trusting the solver's own figure.
        max_res = std::max(
            max_res, std::abs(implicit_residual(exact.w, z, t, sc, exact.branch)));
        worst_im = std::max(worst_im, -exact.w.imag());
      } catch (const Error&) {
        ++failures;
      }
    }
  }
  rep.add("oracle.max_abs_dw", max_dw, kOracleTol, Provenance::Derived);
  rep.add("oracle.max_implicit_residual", max_res, kResidualTol,
          Provenance::Derived);
  rep.add("oracle.half_plane_violation", worst_im, kSymmetryTol,
          Provenance::Derived);
  rep.add("oracle.failures", failures, 0.0, Provenance::Derived);

  // Both implicit solvers must start from the slit map at t0.
  double splice = 0.0;
  const Scenario one = sibling(sc, Theorem::One);
  const Scenario two = sibling(sc, Theorem::Two);
  for (const Complex z : grid) {
    const Complex seed = sqrt_map(z, sc.t0());
    splice = std::max(splice, std::abs(thm1_solve(z, sc.t0(), one, cfg).w - seed));
    splice = std::max(splice, std::abs(thm2_solve(z, sc.t0(), two, cfg).w - seed));
  }
  rep.add("oracle.splice_max_dw_at_t0", splice, kSpliceTol, Provenance::Trivial);

  // Reflection equivariance (z, w) -> (-conj z, -conj w).
  double refl_flow = 0.0, refl_exact = 0.0;
  const double t_end = sc.horizon();
  for (const Complex z : grid) {
    if (z.real() <= 0.0) continue;
    const Complex zm = -std::conj(z);
    try {
      const auto a = evolve_forward(z, schedule, t_end, cfg);
      const auto b = evolve_forward(zm, schedule, t_end, cfg);
      refl_flow = std::max(refl_flow, std::abs(b.w + std::conj(a.w)));
      const auto ea = implicit_solve(z, t_end, sc, cfg);
      const auto eb = implicit_solve(zm, t_end, sc, cfg);
      refl_exact = std::max(refl_exact, std::abs(eb.w + std::conj(ea.w)));
    } catch (const Error&) {
      ++failures;
    }
  }
  rep.add("oracle.reflection_flow", refl_flow, kSymmetryTol, Provenance::Trivial);
  rep.add("oracle.reflection_implicit", refl_exact, kSymmetryTol,
          Provenance::Trivial);
  rep.observe("oracle.grid_points", std::to_string(grid.size()));
  rep.observe("oracle.times", std::to_string(times.size()));
  rep.runtime_s = elapsed(start);
  return rep;
}

VerificationReport suite_asymptotics(const Scenario& sc, const SolverConfig& cfg) {
  const auto start = Clock::now();
  VerificationReport rep;
  rep.suite = "asymptotics";
  const AsymptoticExpansion expansion = sc.theorem() == Theorem::One
                                            ? thm1_trace_asymptotic(sc)
                                            : thm2_trace_asymptotic(sc);

  constexpr int kPoints = 12;
  std::vector<double> deltas, times;
  for (int k = 0; k < kPoints; ++k) {
    const double d = std::pow(10.0, -6.0 + 3.0 * k / (kPoints - 1));
    deltas.push_back(d);
    times.push_back(sc.t0() + d);
  }
  const std::vector<double> probe_deltas{1e-6, 1e-5, 1e-4};
  std::vector<double> probe_times;
  for (double d : probe_deltas) probe_times.push_back(sc.t0() + d);

  TraceCurve curve{{}, CurveLabel::Gamma2, sc};
  TraceCurve probes{{}, CurveLabel::Gamma2, sc};
  try {
    curve = exact_trace(sc, cfg, times);
    probes = exact_trace(sc, cfg, probe_times);
  } catch (const Error& e) {
    rep.add("asymptotics.trace_available", 1.0, 0.0, Provenance::Derived);
    rep.observe("asymptotics.error", e.what());
    rep.runtime_s = elapsed(start);
    return rep;
  }

  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    const double dist = std::abs(curve.samples[k].z - expansion.base_point);
    if (dist > 0.0 && std::isfinite(dist)) {
      lx.push_back(std::log(deltas[k]));
      ly.push_back(std::log(dist));
    }
  }
  if (lx.size() < 4) {
    rep.add("asymptotics.usable_samples", 4.0 - static_cast<double>(lx.size()),
            0.0, Provenance::Derived);
    rep.runtime_s = elapsed(start);
    return rep;
  }
  const LineFit fit = least_squares(lx, ly);

  // Leading coefficient read off at the smallest delta with the exact exponent.
  const Complex lead = (curve.samples.front().z - expansion.base_point) /
                       std::pow(deltas.front(), expansion.exponent);
  rep.add("asymptotics.exponent_error",
          std::abs(fit.slope - expansion.exponent), kExponentTol,
          Provenance::Paper);
  rep.add("asymptotics.coefficient_modulus_rel_error",
          std::abs(std::abs(lead) / std::abs(expansion.coefficient) - 1.0),
          kModulusRelTol, Provenance::Paper);
  rep.add("asymptotics.coefficient_arg_error",
          std::abs(wrap_angle(std::arg(lead) - std::arg(expansion.coefficient))),
          kArgTol, Provenance::Paper);

  // The remainder relative to delta^p must shrink as delta -> 0.
  std::vector<double> ratios;
  for (std::size_t k = 0; k < probe_deltas.size(); ++k) {
    const double scale = std::pow(probe_deltas[k], expansion.exponent);
    ratios.push_back(std::abs(probes.samples[k].z - expansion.evaluate(probe_deltas[k])) /
                     scale);
  }
  int non_monotone = 0;
  for (std::size_t k = 0; k + 1 < ratios.size(); ++k) {
    if (!(ratios[k] < ratios[k + 1])) ++non_monotone;
  }
  rep.add("asymptotics.remainder_not_decreasing", non_monotone, 0.0,
          Provenance::Derived);

  rep.observe("asymptotics.fitted_exponent", fmt(fit.slope));
  rep.observe("asymptotics.expected_exponent", fmt(expansion.exponent));
  rep.observe("asymptotics.fitted_coefficient_modulus", fmt(std::abs(lead)));
  rep.observe("asymptotics.expected_coefficient_modulus",
              fmt(std::abs(expansion.coefficient)));
  rep.observe("asymptotics.fitted_coefficient_arg", fmt(std::arg(lead)));
  rep.observe("asymptotics.expected_coefficient_arg",
              fmt(std::arg(expansion.coefficient)));
  rep.runtime_s = elapsed(start);
  return rep;
}

VerificationReport suite_geometry(const Scenario& sc, const SolverConfig& cfg) {
  const auto start = Clock::now();
  VerificationReport rep;
  rep.suite = "geometry";
  const double t0 = sc.t0();
  const double a = sc.amplitude();
  const double a2 = a * a;
  const Complex tip = sc.slit_tip();

  // Expected start and departure direction in closed form.
  Complex expected_start;
  double expected_angle = 0.0;
  std::string angle_label;
  if (sc.theorem() == Theorem::Two) {
    expected_start = tip;
    expected_angle = thm2_angles(a).tangent_angle;
    angle_label = "pi(4-A^2)/(2(A^2+4))";
  } else {
    switch (sc.case_tag()) {
      case CaseTag::I:
        expected_start = {std::sqrt(a2 - 4.0 * t0), 0.0};
        expected_angle = kPi / 2.0;
        angle_label = "pi/2";
        break;
      case CaseTag::II:
        expected_start = {0.0, std::sqrt(4.0 * t0 - a2)};
        expected_angle = 0.0;
        angle_label = "0";
        break;
      case CaseTag::III:
        expected_start = {0.0, 0.0};
        expected_angle = kPi / 4.0;
        angle_label = "pi/4";
        break;
    }
  }

  const std::vector<double> times =
      sc.theorem() == Theorem::One ? refined_times(t0, sc.horizon(), 400, 100)
                                   : uniform_times(t0, sc.horizon(), 400);
  TraceCurve g2{{}, CurveLabel::Gamma2, sc};
  try {
    g2 = exact_trace(sc, cfg, times);
  } catch (const Error& e) {
    rep.add("geometry.trace_available", 1.0, 0.0, Provenance::Derived);
    rep.observe("geometry.error", e.what());
    rep.runtime_s = elapsed(start);
    return rep;
  }
  const TraceCurve g1 = mirror(g2);
  const TraceCurve g0 = gamma0(sc, 400);

  rep.add("geometry.start_point_error", std::abs(g2.samples.front().z - expected_start),
          kClosedFormTol, Provenance::Paper);

  // Start location class: on R (i), on the open slit (ii), at 0 (iii), at the tip.
  double misplaced = 0.0;
  const Complex s0 = g2.samples.front().z;
  if (sc.theorem() == Theorem::Two) {
    misplaced = std::abs(s0 * s0 + 4.0 * t0);
  } else if (sc.case_tag() == CaseTag::I) {
    misplaced = std::abs(s0.imag()) + (s0.real() > 0.0 ? 0.0 : 1.0);
  } else if (sc.case_tag() == CaseTag::II) {
    misplaced = std::abs(s0.real()) +
                (s0.imag() > 0.0 && s0.imag() < tip.imag() ? 0.0 : 1.0);
  } else {
    misplaced = std::abs(s0);
  }
  rep.add("geometry.start_location", misplaced, kClosedFormTol, Provenance::Paper);

  // Departure direction by a one-sided finite difference.
  const double probe_t = t0 + kDepartureDelta;
  const Complex probe = sc.theorem() == Theorem::One
                            ? thm1_trace_at(sc, cfg, std::vector<double>{probe_t})
                                  .samples.front().z
                            : thm2_trace_point(sc, probe_t);
  const double departure = std::arg(probe - s0);
  rep.add("geometry.departure_angle", std::abs(wrap_angle(departure - expected_angle)),
          kDepartureTol, Provenance::Paper);
  rep.observe("geometry.expected_departure_angle", angle_label);
  rep.observe("geometry.measured_departure_angle", fmt(departure));

  // Every sample satisfies the trace equation.
  double trace_res = 0.0;
  if (sc.theorem() == Theorem::One) {
    for (const auto& s : g2.samples) {
      trace_res = std::max(trace_res, std::abs(thm1_trace_residual(s.z, s.t, sc)));
    }
    rep.add("geometry.trace_equation_residual", trace_res, kTraceResidualTol,
            Provenance::Derived);
    if (sc.case_tag() == CaseTag::III) {
      double r3 = 0.0;
      for (const auto& s : g2.samples) {
        r3 = std::max(r3, std::abs(thm1_case3_implicit_residual(s.z, s.t, sc)));
      }
      rep.add("geometry.case3_implicit_residual", r3, kTraceResidualTol,
              Provenance::Derived);
    }
  } else {
    double max_dev = 0.0;
    const double segment = thm2_angles(a).segment_angle;
    for (const auto& s : g2.samples) {
      if (s.t == t0) continue;
      const Complex w{a * std::sqrt(s.t - t0), 0.0};
      const BranchState br = canonical_branch(w, s.z, t0);
      trace_res = std::max(trace_res, std::abs(thm2_residual(w, s.z, s.t, sc, br)));
      max_dev = std::max(max_dev,
                         std::abs(wrap_angle(std::arg(s.z * s.z + 4.0 * t0) - segment)));
    }
    rep.add("geometry.trace_equation_residual", trace_res, kThm2TraceResidualTol,
            Provenance::Paper);
    rep.add("geometry.rectilinearity", max_dev, kRectilinearTol, Provenance::Paper);
  }

  // Gamma2 in the closed first quadrant.
  double outside = 0.0;
  for (const auto& s : g2.samples) {
    outside = std::max({outside, -s.z.real(), -s.z.imag()});
  }
  rep.add("geometry.gamma2_quadrant_violation", outside, 1e-10, Provenance::Paper);

  double mirror_err = 0.0;
  for (std::size_t k = 0; k < g2.samples.size(); ++k) {
    mirror_err = std::max(mirror_err,
                          std::abs(g1.samples[k].z + std::conj(g2.samples[k].z)) +
                              std::abs(g1.samples[k].t - g2.samples[k].t));
  }
  rep.add("geometry.mirror_identity", mirror_err, kSymmetryTol, Provenance::Trivial);

  rep.add("geometry.gamma0_endpoints",
          std::abs(g0.samples.front().z) + std::abs(g0.samples.back().z - tip),
          kClosedFormTol, Provenance::Paper);

  // Sampled simplicity; shared endpoints allowed by the geometry are exempt.
  const auto p0 = g0.points();
  const auto p1 = g1.points();
  const auto p2 = g2.points();
  std::vector<Complex> contacts{s0};
  if (sc.theorem() == Theorem::Two) contacts.push_back(tip);
  int hits = count_self_intersections(p2) + count_self_intersections(p1);
  hits += count_cross_intersections(p1, p2, contacts, 1e-9);
  hits += count_cross_intersections(p0, p2, contacts, 1e-9);
  hits += count_cross_intersections(p0, p1, contacts, 1e-9);
  rep.add("geometry.intersections", hits, 0.0, Provenance::Paper);

  rep.runtime_s = elapsed(start);
  return rep;
}

VerificationReport suite_case3_adjudication(double t0, const SolverConfig& cfg) {
  (void)cfg;
  const auto start = Clock::now();
  VerificationReport rep;
  rep.suite = "case3";

  std::vector<double> runs{t0};
  if (t0 != 2.25) runs.push_back(2.25);

  for (const double tz : runs) {
    const double a = 2.0 * std::sqrt(tz);
    const Scenario sc = Scenario::theorem_one(a, tz, tz + 1.0);
    std::vector<double> times;
    for (int k = 1; k <= 20; ++k) times.push_back(tz + k / 20.0);
    const auto zs = integrate_quartic_trace(tz, times, 1e-13, 1e-15);

    double r_corrected = 0.0, r_literal = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      r_corrected = std::max(
          r_corrected, std::abs(thm1_case3_implicit_residual(zs[k], times[k], sc)));
      r_literal = std::max(
          r_literal, std::abs(thm1_case3_literal_residual(zs[k], times[k], sc)));
    }
    const std::string prefix = "case3.t0=" + fmt(tz) + ".";
    rep.add(prefix + "corrected_form_residual", r_corrected, kCase3Tol,
            Provenance::Derived);
    rep.observe(prefix + "corrected_form_residual", fmt(r_corrected));
    rep.observe(prefix + "literal_form_residual", fmt(r_literal));

    const bool corrected_ok = r_corrected <= kCase3Tol;
    const bool literal_ok = r_literal <= kCase3Tol;
    std::string verdict = "neither";
    if (corrected_ok && literal_ok) verdict = "both";
    else if (corrected_ok) verdict = "corrected (4 t0 log)";
    else if (literal_ok) verdict = "literal (4 log)";
    rep.observe(prefix + "consistent_form", verdict);

    if (std::abs(4.0 * tz - 4.0) <= 1e-12) {
      // 4 t0 = 4: the forms are the same equation and cannot be told apart.
      rep.add(prefix + "forms_coincide", std::abs(r_corrected - r_literal),
              kCase3Tol, Provenance::Trivial);
    } else {
      const int consistent = static_cast<int>(corrected_ok) + static_cast<int>(literal_ok);
      rep.add(prefix + "exactly_one_form_consistent", std::abs(consistent - 1), 0.0,
              Provenance::Derived);
    }
  }
  rep.runtime_s = elapsed(start);
  return rep;
}

}  // namespace loewner
