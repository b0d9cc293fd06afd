#include "chernforge/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chernforge/errors.hpp"

namespace chernforge {

namespace {

template <class T> T field(const Json &j, const char *key, const std::string &what) {
  if (!j.contains(key)) throw ValidationError(what + ": missing key \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(what + ": bad value for \"" + key + "\": " + e.what());
  }
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::vector<int> to_one_based(const std::vector<int> &v) {
  std::vector<int> out(v);
  for (int &x : out) ++x;
  return out;
}

FormKey from_one_based(const std::vector<int> &v, int m, const std::string &what) {
  FormKey out(v);
  for (int &x : out) {
    if (x < 1 || x > m) throw ValidationError(what + ": axis " + std::to_string(x) + " outside [1, " + std::to_string(m) + "]");
    --x;
  }
  return out;
}

} // namespace

void require_known_keys(const Json &j, std::initializer_list<const char *> allowed, const std::string &what) {
  if (!j.is_object()) throw ValidationError(what + ": expected a JSON object");
  for (const auto &[key, value] : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char *a) { return key == a; });
    if (!known) throw ValidationError(what + ": unknown key \"" + key + "\"");
  }
}

// ---------------------------------------------------------------------------
// Forms

Json to_json(const TrigSpec &s) {
  Json terms = Json::array();
  for (const auto &t : s.terms) {
    Json hs = Json::array();
    for (const auto &h : t.harmonics) hs.push_back({{"k", h.k}, {"cos", h.cos}, {"sin", h.sin}});
    terms.push_back({{"component", to_one_based(t.component)}, {"harmonics", hs}});
  }
  return {{"m", s.m}, {"degree", s.degree}, {"terms", terms}};
}

TrigSpec trigspec_from_json(const Json &j) {
  require_known_keys(j, {"m", "degree", "terms"}, "TrigSpec");
  TrigSpec s;
  s.m = field<int>(j, "m", "TrigSpec");
  s.degree = field<int>(j, "degree", "TrigSpec");
  const Json terms = j.value("terms", Json::array());
  if (!terms.is_array()) throw ValidationError("TrigSpec: terms must be an array");
  for (const auto &t : terms) {
    require_known_keys(t, {"component", "harmonics"}, "TrigSpec term");
    TrigTerm term;
    term.component = from_one_based(field<std::vector<int>>(t, "component", "TrigSpec term"), s.m, "TrigSpec term");
    const Json hs = t.value("harmonics", Json::array());
    if (!hs.is_array()) throw ValidationError("TrigSpec term: harmonics must be an array");
    for (const auto &h : hs) {
      require_known_keys(h, {"k", "cos", "sin"}, "TrigSpec harmonic");
      Harmonic hm;
      hm.k = field<std::vector<int>>(h, "k", "TrigSpec harmonic");
      hm.cos = h.contains("cos") ? field<double>(h, "cos", "TrigSpec harmonic") : 0.0;
      hm.sin = h.contains("sin") ? field<double>(h, "sin", "TrigSpec harmonic") : 0.0;
      term.harmonics.push_back(std::move(hm));
    }
    s.terms.push_back(std::move(term));
  }
  s.validate();
  return s;
}

Json to_json(const DiffForm &f) {
  Json comps = Json::array();
  for (std::size_t c = 0; c < f.num_components(); ++c) {
    const auto v = f.component(c);
    comps.push_back({{"key", to_one_based(f.keys()[c])}, {"values", std::vector<double>(v.begin(), v.end())}});
  }
  return {{"m", f.grid().dim()}, {"n", f.grid().n()}, {"degree", f.degree()}, {"components", comps}};
}

DiffForm diffform_from_json(const Json &j, std::size_t point_budget) {
  require_known_keys(j, {"m", "n", "degree", "components"}, "form");
  const TorusGrid grid(field<int>(j, "m", "form"), field<int>(j, "n", "form"), point_budget);
  DiffForm f(grid, field<int>(j, "degree", "form"));
  const Json comps = field<Json>(j, "components", "form");
  if (!comps.is_array()) throw ValidationError("form: components must be an array");
  for (const auto &c : comps) {
    require_known_keys(c, {"key", "values"}, "form component");
    const FormKey key = from_one_based(field<std::vector<int>>(c, "key", "form component"), grid.dim(), "form component");
    const auto values = field<std::vector<double>>(c, "values", "form component");
    if (values.size() != grid.points()) throw GridMismatch("form component: value count differs from the grid size");
    auto dst = f.component(key);
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i])) throw ValidationError("form component: non-finite value");
      dst[i] = values[i];
    }
  }
  return f;
}

Json to_json(const OneFormTuple &t) {
  Json entries = Json::array();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i < t.specs.size() && t.specs[i]) {
      entries.push_back({{"spec", to_json(*t.specs[i])}});
    } else {
      entries.push_back({{"form", to_json(t.forms[i])}});
    }
  }
  return {{"grid", {{"m", t.grid.dim()}, {"n", t.grid.n()}}}, {"entries", entries}};
}

OneFormTuple tuple_from_json(const Json &j, std::size_t point_budget) {
  require_known_keys(j, {"grid", "entries"}, "tuple");
  const Json g = field<Json>(j, "grid", "tuple");
  require_known_keys(g, {"m", "n"}, "tuple grid");
  const TorusGrid grid(field<int>(g, "m", "tuple grid"), field<int>(g, "n", "tuple grid"), point_budget);
  OneFormTuple t;
  t.grid = grid;
  const Json entries = field<Json>(j, "entries", "tuple");
  if (!entries.is_array()) throw ValidationError("tuple: entries must be an array");
  bool any_spec = false;
  for (const auto &e : entries) {
    require_known_keys(e, {"spec", "form"}, "tuple entry");
    if (e.contains("spec")) {
      TrigSpec s = trigspec_from_json(e.at("spec"));
      if (s.degree != 1) throw DegreeError("tuple entry spec must have degree 1");
      t.forms.push_back(eval_trig_spec(s, grid));
      t.specs.emplace_back(std::move(s));
      any_spec = true;
    } else if (e.contains("form")) {
      DiffForm f = diffform_from_json(e.at("form"), point_budget);
      if (!(f.grid() == grid)) throw GridMismatch("tuple entry lives on a different grid");
      t.forms.push_back(std::move(f));
      t.specs.emplace_back(std::nullopt);
    } else {
      throw ValidationError("tuple entry needs \"spec\" or \"form\"");
    }
  }
  if (!any_spec) t.specs.clear();
  t.validate();
  return t;
}

// ---------------------------------------------------------------------------
// Matrices

Json to_json(const ComplexMatrix &m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

ComplexMatrix complex_matrix_from_json(const Json &j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix: expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json &row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw ValidationError("matrix: ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json &z = row[static_cast<std::size_t>(c)];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        throw ValidationError("matrix: entries must be [re, im] pairs");
      m(i, c) = {z[0].get<double>(), z[1].get<double>()};
    }
  }
  return m;
}

Json connection_to_json(const MatrixOneForm &w) {
  Json entries = Json::array();
  for (int i = 0; i < w.size(); ++i) {
    for (int j = 0; j < w.size(); ++j) {
      const auto *e = w.get(i, j);
      if (e == nullptr) continue;
      for (std::size_t c = 0; c < e->re.num_components(); ++c) {
        Json values = Json::array();
        const auto re = e->re.component(c);
        const auto im = e->im.component(c);
        for (std::size_t p = 0; p < re.size(); ++p) values.push_back({re[p], im[p]});
        entries.push_back({{"row", i + 1}, {"col", j + 1}, {"axis", static_cast<int>(c) + 1}, {"values", values}});
      }
    }
  }
  return {{"rank", w.rank()}, {"grid", {{"m", w.grid().dim()}, {"n", w.grid().n()}}}, {"entries", entries}};
}

Json diag_connection_descriptor(int rank, const TorusGrid &grid, const std::string &tuple_file) {
  return {{"rank", rank}, {"grid", {{"m", grid.dim()}, {"n", grid.n()}}}, {"structure", "diag"}, {"tuple", tuple_file}};
}

// ---------------------------------------------------------------------------
// Reports

Json to_json(const RegularityCertificate &c, bool include_rank_map) {
  Json j = {{"min_rank", c.min_rank},
            {"target_rank", c.target_rank},
            {"min_sigma", finite_or_null(c.min_sigma)},
            {"pass", c.pass},
            {"sigma_histogram_log10_lower_edges", Json::array()},
            {"sigma_histogram", c.sigma_histogram}};
  for (std::size_t b = 0; b < c.sigma_histogram.size(); ++b)
    j["sigma_histogram_log10_lower_edges"].push_back(static_cast<int>(b) - 12);
  if (include_rank_map) j["rank_map"] = c.rank_map;
  return j;
}

Json to_json(const SurjectivityReport &r) {
  return {{"target_rank", r.target_rank}, {"min_rank", r.min_rank},     {"min_sigma", finite_or_null(r.min_sigma)},
          {"surjective", r.surjective},   {"regularity_pass", r.regularity_pass}, {"consistent", r.consistent}};
}

Json to_json(const SolveReport &r) {
  Json hist = Json::array();
  for (const auto &h : r.history)
    hist.push_back({{"step", h.step},
                    {"target_fraction", h.target_fraction},
                    {"iteration", h.iteration},
                    {"residual", h.residual},
                    {"cg_iterations", h.cg_iterations},
                    {"seconds", h.seconds}});
  return {{"converged", r.converged},
          {"failure", r.failure},
          {"target_sup", r.target_sup},
          {"residual_sup", r.residual_sup},
          {"residual_l2", r.residual_l2},
          {"relative_residual", r.relative_residual},
          {"homotopy_steps", r.homotopy_steps},
          {"halvings", r.halvings},
          {"gn_iterations", r.gn_iterations},
          {"cg_iterations", r.cg_iterations},
          {"start_attempts", r.start_attempts},
          {"wall_seconds", r.wall_seconds},
          {"step_residuals", r.step_residuals},
          {"certificate", to_json(r.certificate)},
          {"history", hist}};
}

Json to_json(const BoundsReport &r) {
  return {{"m", r.m},
          {"k", r.k},
          {"q_min", r.q_min},
          {"secondary_k", r.secondary_k},
          {"exact_char_n", r.exact_char_n},
          {"m0", r.m0},
          {"m0_negative", r.m0_negative},
          {"theorem_threshold", r.theorem_threshold},
          {"theorem_min_n", r.theorem_min_n},
          {"schlafly_n", r.schlafly_n},
          {"headline_bounds_unspecified", r.headline_bounds_unspecified},
          {"conventions", r.conventions}};
}

Json to_json(const FactorReport &r) {
  Json comps = Json::array();
  for (const auto &c : r.components) comps.push_back(to_one_based(c));
  return {{"verdict", r.verdict},
          {"components", comps},
          {"monomial_factors", to_one_based(r.monomial_factors)},
          {"pairs_tested", r.pairs_tested},
          {"edges", r.edges},
          {"error_bound", r.error_bound}};
}

Json to_json(const LemmaReport &r) {
  Json subsets = Json::array();
  for (const auto &s : r.subsets) {
    Json f = to_json(s.factors);
    subsets.push_back({{"n", r.n},
                       {"q", r.q},
                       {"subset", to_one_based(s.columns)},
                       {"multilinear", s.multilinear},
                       {"nonzero", s.nonzero},
                       {"terms", s.terms},
                       {"verdict", s.factors.verdict},
                       {"components", f["components"]},
                       {"error_bound", s.factors.error_bound}});
  }
  return {{"n", r.n},
          {"q", r.q},
          {"rows", r.rows},
          {"all_multilinear", r.all_multilinear},
          {"all_nonzero", r.all_nonzero},
          {"all_irreducible", r.all_irreducible},
          {"family_support_disjoint", r.family_support_disjoint},
          {"error_bound", r.error_bound},
          {"subsets", subsets}};
}

Json to_json(const CodimReport &r) {
  return {{"m", r.m},           {"q", r.q},
          {"trials", r.trials}, {"target_rank", r.target_rank},
          {"full_rank", r.full_rank}, {"min_rank", r.min_rank},
          {"fraction", r.fraction},   {"entry_range", r.entry_range}};
}

Json to_json(const Sp1FormulaReport &r) {
  Json cands = Json::array();
  for (std::size_t i = 0; i < r.candidates.size(); ++i)
    cands.push_back({{"c", r.candidates[i]}, {"discrepancy", r.discrepancies[i]}});
  return {{"candidates", cands},
          {"best_candidate", r.best_candidate},
          {"scale", r.scale},
          {"omega_wedge_omega_sup", r.omega_wedge_omega_sup},
          {"omega_wedge_omega_vanishes", r.omega_wedge_omega_vanishes}};
}

Json to_json(const SolverOptions &o) {
  return {{"homotopy_steps", o.homotopy_steps},
          {"max_gn_iterations", o.max_gn_iterations},
          {"max_cg_iterations", o.max_cg_iterations},
          {"tikhonov", o.tikhonov},
          {"tolerance", o.tolerance},
          {"intermediate_tolerance", o.intermediate_tolerance},
          {"forcing", o.forcing},
          {"max_halvings", o.max_halvings},
          {"max_backtracks", o.max_backtracks},
          {"start_harmonic", o.start_harmonic},
          {"start_retries", o.start.max_retries},
          {"sigma_floor", o.start.regularity.sigma_floor},
          {"time_limit_seconds", o.time_limit_seconds}};
}

SolverOptions solver_options_from_json(const Json &j, SolverOptions o) {
  require_known_keys(j,
                     {"homotopy_steps", "max_gn_iterations", "max_cg_iterations", "tikhonov", "tolerance",
                      "intermediate_tolerance", "forcing", "max_halvings", "max_backtracks", "start_harmonic",
                      "start_retries", "sigma_floor", "time_limit_seconds"},
                     "solver options");
  const std::string w = "solver options";
  if (j.contains("homotopy_steps")) o.homotopy_steps = field<int>(j, "homotopy_steps", w);
  if (j.contains("max_gn_iterations")) o.max_gn_iterations = field<int>(j, "max_gn_iterations", w);
  if (j.contains("max_cg_iterations")) o.max_cg_iterations = field<int>(j, "max_cg_iterations", w);
  if (j.contains("tikhonov")) o.tikhonov = field<double>(j, "tikhonov", w);
  if (j.contains("tolerance")) o.tolerance = field<double>(j, "tolerance", w);
  if (j.contains("intermediate_tolerance")) o.intermediate_tolerance = field<double>(j, "intermediate_tolerance", w);
  if (j.contains("forcing")) o.forcing = field<double>(j, "forcing", w);
  if (j.contains("max_halvings")) o.max_halvings = field<int>(j, "max_halvings", w);
  if (j.contains("max_backtracks")) o.max_backtracks = field<int>(j, "max_backtracks", w);
  if (j.contains("start_harmonic")) o.start_harmonic = field<int>(j, "start_harmonic", w);
  if (j.contains("start_retries")) o.start.max_retries = field<int>(j, "start_retries", w);
  if (j.contains("sigma_floor")) o.start.regularity.sigma_floor = field<double>(j, "sigma_floor", w);
  if (j.contains("time_limit_seconds")) o.time_limit_seconds = field<double>(j, "time_limit_seconds", w);
  o.validate();
  return o;
}

void write_history_csv(std::ostream &os, const SolveReport &r) {
  os << "step,target_fraction,iteration,residual,cg_iterations,seconds\n";
  os.precision(17);
  for (const auto &h : r.history)
    os << h.step << ',' << h.target_fraction << ',' << h.iteration << ',' << h.residual << ',' << h.cg_iterations << ','
       << h.seconds << '\n';
}

} // namespace chernforge
