#include "loewner_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "loewner/exact_maps.hpp"
#include "loewner/flow.hpp"
#include "loewner/verify.hpp"

namespace loewner::cli {

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScenarioFlags {
  int theorem = 1;
  double amplitude = 0.0;
  double t0 = 0.0;
  double horizon = 0.0;
  bool have_amplitude = false;
  bool have_t0 = false;
  bool have_horizon = false;
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& f) {
  cmd->add_option("--theorem", f.theorem, "1: piecewise constant, 2: constant then sqrt")
      ->check(CLI::Range(1, 2));
  cmd->add_option_function<double>(
      "--A", [&f](double v) { f.amplitude = v; f.have_amplitude = true; },
      "driving amplitude A > 0");
  cmd->add_option_function<double>(
      "--t0", [&f](double v) { f.t0 = v; f.have_t0 = true; }, "switching time t0 > 0");
  cmd->add_option_function<double>(
      "--T", [&f](double v) { f.horizon = v; f.have_horizon = true; },
      "horizon T > t0");
}

Scenario build_scenario(const ScenarioFlags& f) {
  if (!f.have_amplitude || !f.have_t0 || !f.have_horizon) {
    throw UsageError("--A, --t0 and --T are required");
  }
  try {
    return Scenario::make(f.theorem == 1 ? Theorem::One : Theorem::Two, f.amplitude,
                          f.t0, f.horizon);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

/// Writes to `path`, or to `out` when path is empty.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path + " for writing");
  file << text;
  file.close();
  if (!file) throw IoError("failed writing " + path);
}

std::string fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::string short_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::vector<double> trace_times(const Scenario& sc, int samples) {
  return refined_times(sc.t0(), sc.horizon(), samples, std::max(samples / 4, 1));
}

std::string caption(const Scenario& sc) {
  std::string s = sc.theorem() == Theorem::One ? "piecewise constant driving, case ("
                                                : "constant then square-root driving";
  if (sc.theorem() == Theorem::One) {
    s += sc.case_tag() == CaseTag::I ? "i)" : sc.case_tag() == CaseTag::II ? "ii)" : "iii)";
  }
  s += ": A = " + short_real(sc.amplitude()) + ", t0 = " + short_real(sc.t0()) +
       ", T = " + short_real(sc.horizon());
  return s;
}

// -- subcommands -------------------------------------------------------------

struct TraceArgs {
  ScenarioFlags scenario;
  int samples = 400;
  std::string out;
  bool numeric = false;
};

int cmd_trace(const TraceArgs& a, std::ostream& out) {
  const Scenario sc = build_scenario(a.scenario);
  const SolverConfig cfg;
  const auto times = trace_times(sc, a.samples);

  TraceCurve g2{{}, CurveLabel::Gamma2, sc};
  if (a.numeric) {
    const DrivingSchedule schedule = sc.schedule();
    for (double t : times) {
      g2.samples.push_back(
          {t, t == sc.t0() ? trace_start(sc) : trace_numeric(schedule, t, cfg)});
    }
  } else {
    g2 = exact_trace(sc, cfg, times);
  }
  const TraceCurve g1 = mirror(g2);
  const TraceCurve g0 = gamma0(sc, a.samples);

  std::ostringstream csv;
  csv << "t,re,im,curve\n";
  for (const TraceCurve* c : {&g0, &g1, static_cast<const TraceCurve*>(&g2)}) {
    const std::string label = to_string(c->label);
    for (const auto& s : c->samples) {
      csv << format_real(s.t) << ',' << format_real(s.z.real()) << ','
          << format_real(s.z.imag()) << ',' << label << '\n';
    }
  }
  emit(a.out, csv.str(), out);
  return kOk;
}

struct SolveArgs {
  ScenarioFlags scenario;
  std::string z;
  double t = 0.0;
  std::string method = "implicit";
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const auto z = parse_complex(a.z);
  if (!z) throw UsageError("malformed --z '" + a.z + "', expected <re>+<im>i");
  const Scenario sc = build_scenario(a.scenario);
  const SolverConfig cfg;
  if (!(a.t >= 0.0 && a.t <= sc.horizon())) throw UsageError("--t must lie in [0, T]");
  if (z->imag() < 0.0) throw DomainError("z must lie in the closed upper half-plane");
  if (distance_to_slit(*z, std::min(a.t, sc.t0())) < cfg.liftoff_eps) {
    throw DomainError("z lies on the slit");
  }

  Complex w;
  if (a.method == "implicit") {
    w = implicit_solve(*z, a.t, sc, cfg).w;
  } else {
    const FlowResult fr = evolve_forward(*z, sc.schedule(), a.t, cfg);
    if (fr.status != FlowStatus::Completed) {
      throw ContinuationError("flow absorbed near a driving point at t = " +
                              format_real(fr.t_reached));
    }
    w = fr.w;
  }

  // Independent check of the returned value.
  double residual = 0.0;
  if (a.t < sc.t0()) {
    residual = std::abs(w * w - (*z * *z + 4.0 * a.t));
  } else {
    residual = std::abs(
        implicit_residual(w, *z, a.t, sc, canonical_branch(w, *z, sc.t0())));
  }

  nlohmann::ordered_json j;
  j["w_re"] = w.real();
  j["w_im"] = w.imag();
  j["residual"] = residual;
  j["method"] = a.method;
  out << j.dump() << '\n';
  return kOk;
}

struct VerifyArgs {
  ScenarioFlags scenario;
  std::string suite = "all";
  std::string json;
  bool no_timing = false;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const SolverConfig cfg;
  VerificationReport report;
  if (a.suite == "case3") {
    if (!a.scenario.have_t0) throw UsageError("--t0 is required");
    if (!(a.scenario.t0 > 0.0)) throw UsageError("--t0 must be positive");
    report = suite_case3_adjudication(a.scenario.t0, cfg);
  } else {
    const Scenario sc = build_scenario(a.scenario);
    report.suite = a.suite;
    if (a.suite == "oracle" || a.suite == "all") {
      report.append(suite_oracle_equivalence(sc, cfg));
    }
    if (a.suite == "asymptotics" || a.suite == "all") {
      report.append(suite_asymptotics(sc, cfg));
    }
    if (a.suite == "geometry" || a.suite == "all") {
      report.append(suite_geometry(sc, cfg));
    }
    if (a.suite == "all") report.append(suite_case3_adjudication(sc.t0(), cfg));
  }
  const std::string text = report.to_json(!a.no_timing);
  emit(a.json, text, out);
  if (!a.json.empty()) {
    const auto failed = std::count_if(report.checks.begin(), report.checks.end(),
                                      [](const Check& c) { return !c.pass; });
    out << report.suite << ": " << report.checks.size() - failed << "/"
        << report.checks.size() << " checks passed\n";
  }
  return report.all_passed() ? kOk : kFailedChecks;
}

struct FigureArgs {
  ScenarioFlags scenario;
  std::string preset;
  std::string out;
  int samples = 400;
};

int cmd_figure(const FigureArgs& a, std::ostream& out) {
  FigureSpec spec = a.preset.empty() ? FigureSpec{build_scenario(a.scenario)}
                                     : figure_preset(a.preset);
  if (a.samples < 16) throw UsageError("--samples must be at least 16");
  spec.samples_per_curve = a.samples;
  emit(a.out, render_svg(spec), out);
  return kOk;
}

}  // namespace

std::optional<Complex> parse_complex(const std::string& text) {
  static const std::regex pattern(
      R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)([+-])((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) return std::nullopt;
  const double re = std::stod(m[1].str());
  const double im = std::stod(m[3].str());
  return Complex{re, m[2].str() == "-" ? -im : im};
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

FigureSpec figure_preset(const std::string& name) {
  if (name == "fig1") return FigureSpec{Scenario::theorem_one(2.5, 1.0, 3.0)};
  if (name == "fig2") return FigureSpec{Scenario::theorem_one(1.5, 1.0, 3.0)};
  if (name == "fig3") return FigureSpec{Scenario::theorem_one(2.0, 1.0, 3.0)};
  if (name == "fig4") return FigureSpec{Scenario::theorem_two(3.0, 1.0, 3.0)};
  throw DomainError("unknown preset '" + name + "'");
}

std::pair<double, double> to_canvas(Complex z, const Canvas& canvas, const Rect& range) {
  const double x = canvas.margin + (z.real() - range.x_min) / (range.x_max - range.x_min) *
                                       (canvas.width - 2.0 * canvas.margin);
  const double y = canvas.margin + (range.y_max - z.imag()) / (range.y_max - range.y_min) *
                                       (canvas.height - 2.0 * canvas.margin);
  return {x, y};
}

std::vector<TraceCurve> figure_curves(const FigureSpec& spec, const SolverConfig& cfg) {
  if (spec.samples_per_curve < 16) throw DomainError("samples_per_curve must be >= 16");
  const Scenario& sc = spec.scenario;
  const TraceCurve g2 = exact_trace(sc, cfg, trace_times(sc, spec.samples_per_curve));
  std::vector<TraceCurve> out;
  for (CurveLabel label : spec.curves) {
    switch (label) {
      case CurveLabel::Gamma0: out.push_back(gamma0(sc, 2)); break;
      case CurveLabel::Gamma1: out.push_back(mirror(g2)); break;
      case CurveLabel::Gamma2: out.push_back(g2); break;
    }
  }
  return out;
}

std::string render_svg(const FigureSpec& spec, const SolverConfig& cfg) {
  const auto curves = figure_curves(spec, cfg);

  Rect range = spec.axis_range;
  for (const auto& c : curves) {
    for (const auto& s : c.samples) {
      range.x_min = std::min(range.x_min, std::floor(s.z.real()));
      range.x_max = std::max(range.x_max, std::ceil(s.z.real()));
      range.y_max = std::max(range.y_max, std::ceil(s.z.imag()));
    }
  }
  // Keep one unit of model length equally long on both axes.
  Canvas canvas = spec.canvas;
  const double scale = (canvas.width - 2.0 * canvas.margin) / (range.x_max - range.x_min);
  canvas.height = scale * (range.y_max - range.y_min) + 2.0 * canvas.margin;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << fixed(canvas.width) << "\" height=\"" << fixed(canvas.height + 30.0)
      << "\" viewBox=\"0 0 " << fixed(canvas.width) << ' ' << fixed(canvas.height + 30.0)
      << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<desc id=\"axis-range\">" << format_real(range.x_min) << ' '
      << format_real(range.x_max) << ' ' << format_real(range.y_min) << ' '
      << format_real(range.y_max) << "</desc>\n";

  const auto [bx0, by0] = to_canvas({range.x_min, 0.0}, canvas, range);
  const auto [bx1, by1] = to_canvas({range.x_max, 0.0}, canvas, range);
  svg << "<line id=\"baseline\" x1=\"" << fixed(bx0) << "\" y1=\"" << fixed(by0)
      << "\" x2=\"" << fixed(bx1) << "\" y2=\"" << fixed(by1)
      << "\" stroke=\"gray\" stroke-width=\"1\"/>\n";

  for (const auto& c : curves) {
    const char* dash = c.label == CurveLabel::Gamma0   ? "2,3"
                       : c.label == CurveLabel::Gamma1 ? "8,4"
                                                       : "none";
    svg << "<polyline id=\"" << to_string(c.label)
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\" stroke-dasharray=\""
        << dash << "\" points=\"";
    std::string previous;
    bool first = true;
    for (const auto& s : c.samples) {
      const auto [x, y] = to_canvas(s.z, canvas, range);
      std::string point = fixed(x) + "," + fixed(y);
      // Points that coincide at output resolution would add zero-length segments.
      if (point == previous) continue;
      svg << (first ? "" : " ") << point;
      previous = std::move(point);
      first = false;
    }
    svg << "\"/>\n";
  }
  svg << "<text id=\"caption\" x=\"" << fixed(canvas.width / 2.0) << "\" y=\""
      << fixed(canvas.height + 15.0)
      << "\" text-anchor=\"middle\" font-family=\"serif\" font-size=\"14\">"
      << caption(spec.scenario) << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-slit chordal Loewner evolution: traces, maps and checks", "loewner"};
  app.require_subcommand(1);

  TraceArgs trace_args;
  auto* trace = app.add_subcommand("trace", "write Gamma0, Gamma1, Gamma2 as CSV");
  add_scenario_flags(trace, trace_args.scenario);
  trace->add_option("--samples", trace_args.samples, "uniform samples per curve")
      ->check(CLI::Range(2, 1000000));
  trace->add_option("--out", trace_args.out, "output path (default stdout)");
  trace->add_flag("--numeric", trace_args.numeric, "extract Gamma2 from the numerical flow");

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "evaluate g(z, t) and print JSON");
  add_scenario_flags(solve, solve_args.scenario);
  solve->add_option("--z", solve_args.z, "point as <re>+<im>i")->required();
  solve->add_option("--t", solve_args.t, "time in [0, T]")->required();
  solve->add_option("--method", solve_args.method)
      ->check(CLI::IsMember({"implicit", "ode"}));

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "run verification suites");
  add_scenario_flags(verify, verify_args.scenario);
  verify->add_option("--suite", verify_args.suite)
      ->check(CLI::IsMember({"oracle", "asymptotics", "geometry", "case3", "all"}));
  verify->add_option("--json", verify_args.json, "report path (default stdout)");
  verify->add_flag("--no-timing", verify_args.no_timing,
                   "write runtime_s as 0 so reports are byte-identical");

  FigureArgs figure_args;
  auto* figure = app.add_subcommand("figure", "write an SVG of the three curves");
  add_scenario_flags(figure, figure_args.scenario);
  figure->add_option("--preset", figure_args.preset)
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4"}));
  figure->add_option("--out", figure_args.out, "output path (default stdout)");
  figure->add_option("--samples", figure_args.samples, "uniform samples per curve");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*trace) return cmd_trace(trace_args, out);
    if (*solve) return cmd_solve(solve_args, out);
    if (*verify) return cmd_verify(verify_args, out);
    if (*figure) return cmd_figure(figure_args, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kContinuation;
  }
  return kUsage;
}

}  // namespace loewner::cli
