#pragma once

// Gauss-Newton with homotopy continuation for sum_i (d w_i)^2 = sigma and for
// sum_i w_i ^ d w_i + d phi = beta, started from a regular null tuple.

#include <cstdint>
#include <string>
#include <vector>

#include "chernforge/chernweil.hpp"
#include "chernforge/errors.hpp"
#include "chernforge/regtuples.hpp"

namespace chernforge {

struct SolverOptions {
  int homotopy_steps = 10;
  int max_gn_iterations = 30;
  int max_cg_iterations = 500;
  double tikhonov = 1e-8;
  double tolerance = 1e-6;              // final sup residual relative to sup|target|
  double intermediate_tolerance = 1e-3; // same, for steps before the last
  double forcing = 1e-2;                // CG stops at min(forcing, 0.1 * residual) relative decrease
  int max_halvings = 4;                 // homotopy increment halvings before giving up
  int max_backtracks = 4;               // Gauss-Newton step halvings per iteration
  int start_harmonic = 2;
  double time_limit_seconds = 0.0;      // 0 disables the wall-clock budget
  NullTupleOptions start;

  // Throws ValidationError on nonpositive counts or tolerances.
  void validate() const;
};

struct IterationRecord {
  int step = 0;
  double target_fraction = 0.0;
  int iteration = 0;
  double residual = 0.0; // sup-norm, relative
  int cg_iterations = 0;
  double seconds = 0.0;
};

struct SolveReport {
  std::vector<IterationRecord> history;
  std::vector<double> step_residuals; // relative sup residual at the end of each accepted step
  double target_sup = 0.0;
  double residual_sup = 0.0;      // absolute sup of the final residual
  double residual_l2 = 0.0;       // sqrt(mean square) of the final residual
  double relative_residual = 0.0; // residual_sup / sup|target| (or absolute for a zero target)
  RegularityCertificate certificate;
  int start_attempts = 0;
  int homotopy_steps = 0;
  int halvings = 0;
  int gn_iterations = 0;
  int cg_iterations = 0;
  double wall_seconds = 0.0;
  bool converged = false;
  std::string failure;
};

class SolveStalled : public Stalled {
public:
  SolveStalled(const std::string &what, SolveReport r) : Stalled(what), report(std::move(r)) {}
  SolveReport report;
};

DiffForm apply_D(const OneFormTuple &t);
DiffForm apply_Dbar(const OneFormTuple &t, const DiffForm &phi);
// 2 sum_i d a_i ^ d w_i.
DiffForm linearized_apply(const OneFormTuple &t, const OneFormTuple &a);
// sum_i (a_i ^ d w_i + w_i ^ d a_i).
DiffForm linearized_apply_dbar(const OneFormTuple &t, const OneFormTuple &a);

struct DecomposeResult {
  OneFormTuple tuple;
  SolveReport report;
};

// Throws DegreeError (m < 4 or sigma not a 4-form), QTooSmall, NotExact,
// SolveStalled, BudgetExceeded.
DecomposeResult decompose_exact_4form(const DiffForm &sigma, int q, const SolverOptions &opts, std::uint64_t seed);

struct DbarResult {
  OneFormTuple tuple;
  DiffForm phi;
  SolveReport report;
};

DbarResult solve_dbar(const DiffForm &beta, int q, const SolverOptions &opts, std::uint64_t seed);

struct RealizeResult {
  OneFormTuple tuple;
  MatrixOneForm connection;
  SolveReport report;
  double end_to_end_residual = 0.0; // sup|p1(connection) - sigma| / sup|sigma|
  bool certified = false;           // end_to_end_residual < 2 * tolerance
};

RealizeResult realize_pontryagin(const DiffForm &sigma, int q, const SolverOptions &opts, std::uint64_t seed);

} // namespace chernforge
