#pragma once

/// \file
/// Command-line front end: trace (CSV), solve (JSON), verify (JSON report)
/// and figure (SVG). Everything is reachable through run_cli so the tests can
/// drive the tool without spawning processes.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "loewner/traces.hpp"
#include "loewner/types.hpp"

namespace loewner::cli {

enum ExitCode : int {
  kOk = 0,
  kFailedChecks = 1,
  kUsage = 2,
  kContinuation = 3,
  kDomain = 4,
  kIo = 5,
};

/// Parses "<re>+<im>i" or "<re>-<im>i". Returns nullopt on malformed input.
[[nodiscard]] std::optional<Complex> parse_complex(const std::string& text);

/// Shortest-roundtrip style formatting with 17 significant digits.
[[nodiscard]] std::string format_real(double x);

struct Rect {
  double x_min = -4.0;
  double x_max = 4.0;
  double y_min = 0.0;
  double y_max = 4.0;
};

struct Canvas {
  double width = 800.0;
  double height = 400.0;
  double margin = 40.0;
};

struct FigureSpec {
  explicit FigureSpec(Scenario sc) : scenario(sc) {}

  Scenario scenario;
  std::vector<CurveLabel> curves{CurveLabel::Gamma0, CurveLabel::Gamma1,
                                 CurveLabel::Gamma2};
  int samples_per_curve = 400;
  Canvas canvas;
  Rect axis_range;
};

/// fig1..fig4: t0 = 1, T = 3 with A = 2.5, 1.5, 2 (piecewise constant) and
/// A = 3 (constant then square root). Throws DomainError for other names.
[[nodiscard]] FigureSpec figure_preset(const std::string& name);

/// Model coordinates to canvas coordinates, y axis pointing down.
[[nodiscard]] std::pair<double, double> to_canvas(Complex z, const Canvas& canvas,
                                                  const Rect& range);

/// Exact Gamma0, Gamma1, Gamma2 for a figure; Gamma1/Gamma2 use the uniform
/// grid plus the refinement near t0.
[[nodiscard]] std::vector<TraceCurve> figure_curves(const FigureSpec& spec,
                                                    const SolverConfig& cfg = {});

/// Complete SVG document. The axis range is widened if a curve leaves it.
[[nodiscard]] std::string render_svg(const FigureSpec& spec,
                                     const SolverConfig& cfg = {});

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace loewner::cli
