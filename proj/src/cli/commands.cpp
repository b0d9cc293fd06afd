#include "chernforge/cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "chernforge/bounds.hpp"
#include "chernforge/cli/verify.hpp"
#include "chernforge/decompose.hpp"
#include "chernforge/errors.hpp"
#include "chernforge/minorlemma.hpp"

namespace chernforge::cli {

namespace fs = std::filesystem;

int exit_code_for(const std::exception &e) {
  if (dynamic_cast<const BudgetExceeded *>(&e)) return kBudgetRefused;
  if (dynamic_cast<const ValidationError *>(&e)) return kValidation;
  if (dynamic_cast<const NotExact *>(&e) || dynamic_cast<const NotClosed *>(&e) ||
      dynamic_cast<const HarmonicObstruction *>(&e))
    return kValidation;
  return kSolverFailure;
}

namespace {

std::string error_kind(const std::exception &e) {
  if (dynamic_cast<const BudgetExceeded *>(&e)) return "BudgetExceeded";
  if (dynamic_cast<const QTooSmall *>(&e)) return "QTooSmall";
  if (dynamic_cast<const NotExact *>(&e)) return "NotExact";
  if (dynamic_cast<const NotClosed *>(&e)) return "NotClosed";
  if (dynamic_cast<const HarmonicObstruction *>(&e)) return "HarmonicObstruction";
  if (dynamic_cast<const ResolutionError *>(&e)) return "ResolutionError";
  if (dynamic_cast<const GridMismatch *>(&e)) return "GridMismatch";
  if (dynamic_cast<const DegreeError *>(&e)) return "DegreeError";
  if (dynamic_cast<const ValidationError *>(&e)) return "ValidationError";
  if (dynamic_cast<const Stalled *>(&e)) return "Stalled";
  if (dynamic_cast<const RegularityNotAchieved *>(&e)) return "RegularityNotAchieved";
  return "Error";
}

fs::path out_dir(const Flags &flags) {
  fs::path dir(flags.out);
  fs::create_directories(dir);
  return dir;
}

void write_json(const fs::path &path, const Json &j) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  f << j.dump(2) << '\n';
}

std::uint64_t seed_of(const Json &job, const Flags &flags) {
  return flags.seed.value_or(job_value<std::uint64_t>(job, "seed", 0));
}

SolverOptions options_of(const Json &job, const Flags &flags, const Budget &budget) {
  SolverOptions o;
  if (budget.seconds) o.time_limit_seconds = *budget.seconds;
  if (job.contains("opts")) o = solver_options_from_json(job.at("opts"), o);
  if (flags.tol) o.tolerance = *flags.tol;
  if (budget.seconds && (o.time_limit_seconds == 0.0 || o.time_limit_seconds > *budget.seconds))
    o.time_limit_seconds = *budget.seconds;
  o.validate();
  return o;
}

void write_solve_artifacts(const fs::path &dir, const OneFormTuple &t, const SolveReport &r) {
  write_json(dir / "tuple.json", to_json(t));
  write_json(dir / "report.json", to_json(r));
  std::ofstream csv(dir / "history.csv");
  write_history_csv(csv, r);
}

Json solve_summary(const SolveReport &r) {
  return {{"converged", r.converged},
          {"relative_residual", r.relative_residual},
          {"homotopy_steps", r.homotopy_steps},
          {"gn_iterations", r.gn_iterations},
          {"cg_iterations", r.cg_iterations},
          {"wall_seconds", r.wall_seconds},
          {"certificate_pass", r.certificate.pass}};
}

} // namespace

int cmd_verify(const Flags &flags, std::ostream &out) {
  const Json job = load_job(flags, {"seed", "grid", "suites"}, "verify config");
  VerifyOptions vo;
  vo.seed = seed_of(job, flags);
  vo.n = flags.grid.value_or(job_value<int>(job, "grid", 16));
  vo.broken_normalization = flags.fault == "normalization";
  if (!flags.fault.empty() && !vo.broken_normalization) throw ValidationError("unknown fault \"" + flags.fault + "\"");
  std::vector<std::string> suites = job_value<std::vector<std::string>>(job, "suites", suite_names());
  if (!flags.only.empty()) {
    suites.clear();
    std::stringstream ss(flags.only);
    std::string s;
    while (std::getline(ss, s, ',')) suites.push_back(s);
  }
  for (const auto &s : suites)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw ValidationError("unknown suite \"" + s + "\"");
  Json results = Json::array();
  bool pass = true;
  for (const auto &s : suites) {
    const SuiteResult r = run_suite(s, vo);
    pass = pass && r.pass;
    results.push_back(to_json(r));
  }
  const Json summary = {{"command", "verify"}, {"pass", pass}, {"seed", vo.seed}, {"suites", results}};
  if (flags.out != ".") write_json(out_dir(flags) / "verify.json", summary);
  out << summary.dump(2) << '\n';
  return pass ? kSuccess : kCheckFailed;
}

int cmd_gen_tuple(const Flags &flags, std::ostream &out) {
  const Json job = load_job(flags, {"m", "grid", "q", "h", "seed", "retries"}, "gen-tuple config");
  const Budget budget = budget_from_env();
  const int m = flags.m.value_or(job_value<int>(job, "m", 4));
  const TorusGrid grid = grid_from_job(job, flags, m, 16, budget);
  const int q = flags.q.value_or(job_value<int>(job, "q", q_min(grid.dim())));
  const int h = job_value<int>(job, "h", 2);
  NullTupleOptions no;
  no.max_retries = job_value<int>(job, "retries", no.max_retries);
  const GeneratedTuple t = generate_null_tuple(grid, q, h, seed_of(job, flags), no);
  const fs::path dir = out_dir(flags);
  write_json(dir / "tuple.json", to_json(t.tuple));
  Json cert = to_json(t.certificate);
  if (grid.dim() >= 3) cert["surjectivity"] = to_json(surjectivity_check_L(t.tuple));
  write_json(dir / "certificate.json", cert);
  out << Json{{"command", "gen-tuple"},
              {"m", grid.dim()},
              {"n", grid.n()},
              {"q", q},
              {"attempts", t.attempts},
              {"null_residual", t.null_residual},
              {"scale", t.scale},
              {"certificate", cert}}
             .dump(2)
      << '\n';
  return kSuccess;
}

namespace {
struct SolveJob {
  TorusGrid grid;
  FormSource target;
  int q = 0;
  SolverOptions opts;
  std::uint64_t seed = 0;
  bool sampled_connection = false;
};

SolveJob load_solve_job(const Flags &flags, const char *target_key, int degree, const std::string &what) {
  const Json job = load_job(flags, {target_key, "q", "grid", "opts", "seed", "sampled_connection"}, what);
  const Budget budget = budget_from_env();
  if (!job.contains(target_key)) throw ValidationError(what + ": missing \"" + target_key + "\"");
  const Json &tj = job.at(target_key);
  int m = degree == 4 ? 4 : 4;
  if (tj.is_object() && tj.contains("m")) m = tj.at("m").get<int>();
  if (tj.is_object() && tj.contains("spec") && tj.at("spec").contains("m")) m = tj.at("spec").at("m").get<int>();
  SolveJob s{grid_from_job(job, flags, m, 16, budget), {}, 0, options_of(job, flags, budget), seed_of(job, flags),
             job_value<bool>(job, "sampled_connection", false)};
  s.target = form_from_job(tj, s.grid, degree);
  s.q = flags.q.value_or(job_value<int>(job, "q", q_min(s.grid.dim())));
  return s;
}

double oracle_residual(const FormSource &src, const DiffForm &achieved) {
  // Compare against the analytic target when one exists.
  const DiffForm exact = src.spec ? eval_trig_spec_direct(*src.spec, achieved.grid()) : src.form;
  const double scale = exact.sup_norm();
  const double d = sup_distance(achieved, exact);
  return scale > 0.0 ? d / scale : d;
}
} // namespace

int cmd_decompose(const Flags &flags, std::ostream &out) {
  const SolveJob job = load_solve_job(flags, "sigma", 4, "decompose job");
  const DecomposeResult r = decompose_exact_4form(job.target.form, job.q, job.opts, job.seed);
  const fs::path dir = out_dir(flags);
  write_solve_artifacts(dir, r.tuple, r.report);
  write_json(dir / "connection.json", diag_connection_descriptor(job.q, job.grid, "tuple.json"));
  const double oracle = oracle_residual(job.target, apply_D(r.tuple));
  const bool ok = r.report.relative_residual < job.opts.tolerance;
  out << Json{{"command", "decompose"},
              {"sigma_source", job.target.kind},
              {"q", job.q},
              {"solve", solve_summary(r.report)},
              {"oracle_relative_residual", oracle},
              {"pass", ok}}
             .dump(2)
      << '\n';
  return ok ? kSuccess : kSolverFailure;
}

int cmd_dbar(const Flags &flags, std::ostream &out) {
  const SolveJob job = load_solve_job(flags, "beta", 3, "dbar job");
  const DbarResult r = solve_dbar(job.target.form, job.q, job.opts, job.seed);
  const fs::path dir = out_dir(flags);
  write_solve_artifacts(dir, r.tuple, r.report);
  write_json(dir / "phi.json", to_json(r.phi));
  const double oracle = oracle_residual(job.target, apply_Dbar(r.tuple, r.phi));
  const bool ok = r.report.relative_residual < job.opts.tolerance;
  out << Json{{"command", "dbar"},
              {"beta_source", job.target.kind},
              {"q", job.q},
              {"solve", solve_summary(r.report)},
              {"oracle_relative_residual", oracle},
              {"pass", ok}}
             .dump(2)
      << '\n';
  return ok ? kSuccess : kSolverFailure;
}

int cmd_realize(const Flags &flags, std::ostream &out) {
  const SolveJob job = load_solve_job(flags, "sigma", 4, "realize job");
  const RealizeResult r = realize_pontryagin(job.target.form, job.q, job.opts, job.seed);
  const fs::path dir = out_dir(flags);
  write_solve_artifacts(dir, r.tuple, r.report);
  write_json(dir / "connection.json", job.sampled_connection ? connection_to_json(r.connection)
                                                             : diag_connection_descriptor(job.q, job.grid, "tuple.json"));
  const double oracle = oracle_residual(job.target, pontryagin1(r.connection));
  out << Json{{"command", "realize"},
              {"sigma_source", job.target.kind},
              {"q", job.q},
              {"solve", solve_summary(r.report)},
              {"end_to_end_relative_residual", r.end_to_end_residual},
              {"oracle_relative_residual", oracle},
              {"pass", r.certified}}
             .dump(2)
      << '\n';
  return r.certified ? kSuccess : kSolverFailure;
}

int cmd_lemma(const Flags &flags, std::ostream &out) {
  const Json job = load_job(flags, {"mode", "n", "q", "m", "trials", "seed", "subset"}, "lemma config");
  const std::string mode = flags.mode.value_or(job_value<std::string>(job, "mode", "symbolic"));
  const std::uint64_t seed = seed_of(job, flags);
  Json summary = {{"command", "lemma"}, {"mode", mode}};
  bool pass = true;
  if (mode == "symbolic") {
    const int n = job_value<int>(job, "n", 3);
    if (n > 4)
      throw BudgetExceeded("symbolic lemma checks are capped at n <= 4; rerun with --mode monte-carlo");
    const int q = flags.q.value_or(job_value<int>(job, "q", static_cast<int>(binomial(n, 2)) + 1));
    std::vector<int> subset = job_value<std::vector<int>>(job, "subset", {});
    for (int &c : subset) --c;
    const LemmaReport r = lemma_suite(n, q, job_value<int>(job, "trials", 2), seed, subset);
    summary["report"] = to_json(r);
    pass = r.all_irreducible && r.all_multilinear && r.all_nonzero;
  } else if (mode == "monte-carlo") {
    const int m = flags.m.value_or(job_value<int>(job, "m", 4));
    const int q = flags.q.value_or(job_value<int>(job, "q", q_min(m)));
    const CodimReport r = codim_monte_carlo(m, q, job_value<int>(job, "trials", 1000), seed);
    summary["report"] = to_json(r);
    pass = r.fraction == 1.0;
  } else {
    throw ValidationError("lemma mode must be \"symbolic\" or \"monte-carlo\"");
  }
  summary["pass"] = pass;
  if (flags.out != ".") write_json(out_dir(flags) / "lemma.json", summary);
  out << summary.dump(2) << '\n';
  return pass ? kSuccess : kCheckFailed;
}

int cmd_bounds(const Flags &flags, std::ostream &out) {
  const Json job = load_job(flags, {"m", "k"}, "bounds config");
  const int m = flags.m.value_or(job_value<int>(job, "m", 4));
  std::optional<int> k = flags.k;
  if (!k && job.contains("k")) k = job_value<int>(job, "k", 1);
  out << to_json(compute_bounds(m, k)).dump(2) << '\n';
  return kSuccess;
}

int run_command(const std::string &name, const Flags &flags, std::ostream &out, std::ostream &err) {
  try {
    if (name == "verify") return cmd_verify(flags, out);
    if (name == "gen-tuple") return cmd_gen_tuple(flags, out);
    if (name == "decompose") return cmd_decompose(flags, out);
    if (name == "dbar") return cmd_dbar(flags, out);
    if (name == "realize") return cmd_realize(flags, out);
    if (name == "lemma") return cmd_lemma(flags, out);
    if (name == "bounds") return cmd_bounds(flags, out);
    throw ValidationError("unknown command \"" + name + "\"");
  } catch (const SolveStalled &e) {
    Json j = {{"error", "Stalled"}, {"message", e.what()}, {"report", to_json(e.report)}};
    err << j.dump() << '\n';
    return kSolverFailure;
  } catch (const std::exception &e) {
    err << Json{{"error", error_kind(e)}, {"message", e.what()}}.dump() << '\n';
    return exit_code_for(e);
  }
}

} // namespace chernforge::cli
