#pragma once

/// \file
/// Exact solutions g(z, t) of the two-slit Loewner equation.
///
/// On [0, t0] both schedules reduce to the vertical slit map sqrt(z^2 + 4t).
/// On [t0, T] the map is known only implicitly; it is recovered here by
/// continuation in time with a Newton corrector on the implicit equation and
/// explicit tracking of the logarithm / fractional-power branches.

#include "loewner/types.hpp"

namespace loewner {

/// sqrt(z^2 + 4t) on the branch mapping H \ [0, i 2 sqrt(t)] into the closed
/// upper half-plane, positive for large positive real z.
/// Throws DomainError when z lies on the slit itself (two boundary images).
[[nodiscard]] Complex sqrt_map(Complex z, double t);

/// sqrt(w^2 - 4t) with image in H or on the slit boundary.
[[nodiscard]] Complex sqrt_map_inverse(Complex w, double t);

/// Euclidean distance from z to the segment [0, i 2 sqrt(t0)].
[[nodiscard]] double distance_to_slit(Complex z, double t0);

/// Unwrapped arguments used to evaluate log(w^2) and log(z^2 + 4 t0) (or the
/// corresponding fractional powers) on the sheet that is real for positive
/// arguments and continuous along the continuation path.
struct BranchState {
  double arg_w_accum = 0.0;     ///< unwrapped arg of w^2
  double arg_base_accum = 0.0;  ///< unwrapped arg of z^2 + 4 t0
};

/// Branch at the start of continuation: w = sqrt_map(z, t0), so both tracked
/// arguments equal 2 arg(sqrt_map(z, t0)), which lies in [0, 2 pi].
[[nodiscard]] BranchState seed_branch(Complex z, double t0);

/// Branch implied by the half-plane picture: both w and sqrt_map(z, t0) lie in
/// the closed upper half-plane, so arg(w^2) = 2 arg(w) with arg(w) in [0, pi].
/// Any continuation that keeps Im w >= 0 ends on this sheet.
[[nodiscard]] BranchState canonical_branch(Complex w, Complex z, double t0);

/// Representative of arg(value) closest to `previous`.
[[nodiscard]] double track_argument(double previous, Complex value);

/// w^2 - z^2 - A^2 Log(w^2 / (z^2 + 4 t0)) - 4t for the piecewise-constant
/// schedule. Throws SingularityError when w = 0 or z^2 + 4 t0 = 0.
[[nodiscard]] Complex thm1_residual(Complex w, Complex z, double t,
                                    const Scenario& sc, const BranchState& br);

/// (t - t0) - w^2/(A^2+4) + (z^2+4t0)^{A^2/4+1} w^{-A^2/2} / (A^2+4) for the
/// constant-then-square-root schedule. Throws SingularityError when w = 0.
[[nodiscard]] Complex thm2_residual(Complex w, Complex z, double t,
                                    const Scenario& sc, const BranchState& br);

/// Residual for whichever equation governs `sc`.
[[nodiscard]] Complex implicit_residual(Complex w, Complex z, double t,
                                        const Scenario& sc,
                                        const BranchState& br);

/// Right-hand side of the reduced ODE dw/dt on [t0, T] for `sc`.
[[nodiscard]] Complex reduced_rhs(Complex w, double t, const Scenario& sc);

struct ImplicitSolveResult {
  Complex w;
  double residual = 0.0;
  int iterations = 0;
  int path_steps = 0;
  BranchState branch;
};

/// g(z, t) for the piecewise-constant schedule, t in [t0, T].
/// Throws DomainError for bad input (off H, within liftoff_eps of the slit,
/// t outside [t0, T]); ContinuationError when the time step underflows
/// min_step (z is on or very near the trace); SingularityError when a tracked
/// argument keeps jumping at the smallest step.
[[nodiscard]] ImplicitSolveResult thm1_solve(Complex z, double t,
                                             const Scenario& sc,
                                             const SolverConfig& cfg = {});

/// g(z, t) for the constant-then-square-root schedule. Same contract as
/// thm1_solve.
[[nodiscard]] ImplicitSolveResult thm2_solve(Complex z, double t,
                                             const Scenario& sc,
                                             const SolverConfig& cfg = {});

/// Dispatches on sc.theorem(). For t < t0 returns the slit map directly.
[[nodiscard]] ImplicitSolveResult implicit_solve(Complex z, double t,
                                                 const Scenario& sc,
                                                 const SolverConfig& cfg = {});

}  // namespace loewner
