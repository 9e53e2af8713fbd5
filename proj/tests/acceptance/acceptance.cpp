// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "generators.hpp"
#include "loewner/exact_maps.hpp"
#include "loewner/flow.hpp"
#include "loewner/traces.hpp"
#include "loewner/verify.hpp"
#include "loewner_cli/cli.hpp"
#include "svg_reader.hpp"

using namespace loewner;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

double check_value(const VerificationReport& r, const std::string& id) {
  const Check* c = r.find(id);
  return c ? c->measured : std::nan("");
}

/// max over scenarios of a check value; NaN if any is missing.
double worst(const std::vector<VerificationReport>& reports, const std::string& id) {
  double m = 0.0;
  for (const auto& r : reports) {
    const double v = check_value(r, id);
    if (std::isnan(v)) return v;
    m = std::max(m, v);
  }
  return m;
}

bool within(double measured, double threshold) {
  return !std::isnan(measured) && measured <= threshold;
}

Complex closed_form_start(const Scenario& sc) {
  if (sc.theorem() == Theorem::Two) return {0.0, 2.0};
  switch (sc.case_tag()) {
    case CaseTag::I: return {1.5, 0.0};
    case CaseTag::II: return {0.0, std::sqrt(1.75)};
    case CaseTag::III: return {0.0, 0.0};
  }
  return {};
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  const SolverConfig cfg;
  const auto scenarios = testing::caption_scenarios();
  const std::vector<Scenario> thm1_cases(scenarios.begin(), scenarios.begin() + 3);

  std::vector<VerificationReport> oracle, asym, geom;
  for (const Scenario& sc : scenarios) {
    oracle.push_back(suite_oracle_equivalence(sc, cfg));
    geom.push_back(suite_geometry(sc, cfg));
  }
  for (const Scenario& sc : thm1_cases) asym.push_back(suite_asymptotics(sc, cfg));

  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;

  criteria.emplace_back("splice identity at t0", [&] {
    testing::Gen gen;
    const Scenario one = Scenario::theorem_one(2.5, 1.0, 3.0);
    const Scenario two = Scenario::theorem_two(3.0, 1.0, 3.0);
    double m = 0.0;
    for (int k = 0; k < 50; ++k) {
      const Complex z = gen.off_slit(1.0, 5.0, 0.01, 5.0, cfg.liftoff_eps);
      const Complex s = sqrt_map(z, 1.0);
      m = std::max({m, std::abs(thm1_solve(z, 1.0, one, cfg).w - s),
                    std::abs(thm2_solve(z, 1.0, two, cfg).w - s)});
    }
    return Outcome{within(m, 1e-12), "50 points, max |dw| = " + sci(m) + " (<= 1e-12)"};
  });

  criteria.emplace_back("implicit-solution certificates", [&] {
    const double m = worst(oracle, "oracle.max_implicit_residual");
    return Outcome{within(m, 1e-12), "max residual = " + sci(m) + " (<= 1e-12)"};
  });

  criteria.emplace_back("ODE versus implicit solve", [&] {
    const double m = worst(oracle, "oracle.max_abs_dw");
    const double f = worst(oracle, "oracle.failures");
    return Outcome{within(m, 1e-7) && f == 0.0,
                   "max |dw| = " + sci(m) + " (<= 1e-7), failures = " + sci(f)};
  });

  criteria.emplace_back("trace start points", [&] {
    double m = 0.0;
    for (const Scenario& sc : scenarios) {
      const Complex z =
          exact_trace(sc, cfg, std::vector<double>{sc.t0()}).samples.front().z;
      m = std::max(m, std::abs(z - closed_form_start(sc)));
    }
    return Outcome{within(m, 1e-15), "max error = " + sci(m) + " (<= 1e-15)"};
  });

  criteria.emplace_back("asymptotic exponents and coefficient arguments", [&] {
    const double e = worst(asym, "asymptotics.exponent_error");
    const double a = worst(asym, "asymptotics.coefficient_arg_error");
    return Outcome{within(e, 0.02) && within(a, 0.01),
                   "exponent error = " + sci(e) + " (<= 0.02), arg error = " + sci(a) +
                       " (<= 0.01)"};
  });

  criteria.emplace_back("square-root driving rectilinearity and tangent", [&] {
    const Scenario sc = scenarios[3];
    const TraceCurve c = thm2_trace(sc, 400);
    const double segment = 4.0 * kPi / 13.0;
    double dev = 0.0;
    for (const auto& s : c.samples) {
      if (s.t == sc.t0()) continue;
      dev = std::max(dev, std::abs(std::arg(s.z * s.z + 4.0) - segment));
    }
    const Complex tip = sc.slit_tip();
    const double tangent = std::arg(thm2_trace_point(sc, sc.t0() + 1e-8) - tip);
    const double terr = std::abs(tangent + 5.0 * kPi / 26.0);
    return Outcome{within(dev, 1e-10) && within(terr, 1e-3),
                   "angle deviation = " + sci(dev) + " (<= 1e-10), tangent error = " +
                       sci(terr) + " (<= 1e-3)"};
  });

  criteria.emplace_back("numeric trace extractor", [&] {
    double m = 0.0;
    for (const Scenario& sc : scenarios) {
      const DrivingSchedule schedule = sc.schedule();
      for (int k = 1; k <= 10; ++k) {
        const double t = sc.t0() + (sc.horizon() - sc.t0()) * k / 10.0;
        const Complex exact = exact_trace(sc, cfg, std::vector<double>{t}).samples[0].z;
        m = std::max(m, std::abs(trace_numeric(schedule, t, cfg) - exact));
      }
    }
    return Outcome{within(m, 1e-5), "40 points, max error = " + sci(m) + " (<= 1e-5)"};
  });

  criteria.emplace_back("hydrodynamic normalization", [&] {
    const std::vector<double> radii{10.0, 100.0, 1000.0};
    double worst_ratio = 0.0, worst_slope = -1e300;
    for (const Scenario& sc : scenarios) {
      const auto profile = capacity_profile(sc.schedule(), sc.horizon(), radii, cfg);
      for (std::size_t k = 0; k < radii.size(); ++k) {
        worst_ratio = std::max(worst_ratio, profile[k] * radii[k] / 4.0);
      }
      const double slope = (std::log(profile[2]) - std::log(profile[0])) /
                           (std::log(radii[2]) - std::log(radii[0]));
      worst_slope = std::max(worst_slope, slope);
    }
    const bool ok = worst_ratio <= 1.0 && worst_slope <= -0.9;
    return Outcome{ok, "max residual*R/4 = " + sci(worst_ratio) + " (<= 1), slope = " +
                           sci(worst_slope) + " (<= -0.9)"};
  });

  criteria.emplace_back("symmetry", [&] {
    const double f = worst(oracle, "oracle.reflection_flow");
    const double g = worst(geom, "geometry.mirror_identity");
    return Outcome{within(f, 1e-12) && within(g, 1e-12),
                   "flow reflection = " + sci(f) + ", mirror = " + sci(g) + " (<= 1e-12)"};
  });

  criteria.emplace_back("case (iii) adjudication at t0 = 2.25", [&] {
    const auto r = suite_case3_adjudication(2.25, cfg);
    const double n = check_value(r, "case3.t0=2.25.exactly_one_form_consistent");
    std::string verdict;
    for (const auto& o : r.observations) {
      if (o.id == "case3.t0=2.25.consistent_form") verdict = o.value;
    }
    return Outcome{n == 0.0 && r.all_passed(), "consistent form: " + verdict};
  });

  criteria.emplace_back("figure reproduction", [&] {
    bool ok = true;
    double m = 0.0;
    int hits = 0;
    const char* presets[] = {"fig1", "fig2", "fig3", "fig4"};
    for (int k = 0; k < 4; ++k) {
      const cli::FigureSpec spec = cli::figure_preset(presets[k]);
      const auto fig = testing::read_svg(cli::render_svg(spec, cfg));
      const auto it = fig.polylines.find("G2");
      if (it == fig.polylines.end() || it->second.empty()) {
        ok = false;
        continue;
      }
      m = std::max(m, std::abs(fig.to_model(it->second.front()) -
                               closed_form_start(spec.scenario)));
      hits += count_self_intersections(it->second);
    }
    ok = ok && m <= 1e-6 && hits == 0;
    return Outcome{ok, "start error = " + sci(m) + " (<= 1e-6 after canvas rounding), "
                       "self-intersections = " + std::to_string(hits)};
  });

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1,
                criteria[k].first.c_str(), o.detail.c_str());
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%zu/%zu criteria passed in %.2f s\n", criteria.size() - failed,
              criteria.size(), seconds);
  return failed == 0 ? 0 : 1;
}
