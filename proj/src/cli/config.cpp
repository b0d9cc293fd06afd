#include "chernforge/cli/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "chernforge/errors.hpp"

namespace chernforge::cli {

std::size_t Budget::point_budget() const {
  if (!mem_mb) return kDefaultPointBudget;
  const auto bytes = static_cast<unsigned long long>(*mem_mb) * 1024ULL * 1024ULL;
  return static_cast<std::size_t>(bytes / kBytesPerGridPoint);
}

Budget parse_budget(const std::string &text) {
  Budget b;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("CHERNFORGE_BUDGET: expected key=value, got \"" + item + "\"");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      std::size_t used = 0;
      if (key == "mem_mb") {
        const long long v = std::stoll(value, &used);
        if (used != value.size() || v <= 0) throw std::invalid_argument(value);
        b.mem_mb = v;
      } else if (key == "seconds") {
        const double v = std::stod(value, &used);
        if (used != value.size() || !(v > 0.0)) throw std::invalid_argument(value);
        b.seconds = v;
      } else {
        throw ValidationError("CHERNFORGE_BUDGET: unknown key \"" + key + "\"");
      }
    } catch (const std::logic_error &) {
      throw ValidationError("CHERNFORGE_BUDGET: bad value for " + key + ": \"" + value + "\"");
    }
  }
  return b;
}

Budget budget_from_env() {
  const char *env = std::getenv("CHERNFORGE_BUDGET");
  return env == nullptr ? Budget{} : parse_budget(env);
}

Json load_job(const Flags &flags, std::initializer_list<const char *> allowed, const std::string &what) {
  if (!flags.config) return Json::object();
  std::ifstream in(*flags.config);
  if (!in) throw ValidationError("cannot open config file " + *flags.config);
  Json job;
  try {
    job = Json::parse(in);
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError("config " + *flags.config + " is not valid JSON: " + e.what());
  }
  require_known_keys(job, allowed, what);
  return job;
}

TorusGrid grid_from_job(const Json &job, const Flags &flags, int default_m, int default_n, const Budget &budget) {
  int m = default_m;
  int n = default_n;
  if (job.contains("grid")) {
    const Json &g = job.at("grid");
    if (g.is_number_integer()) {
      n = g.get<int>();
    } else if (g.is_array() && !g.empty()) {
      m = static_cast<int>(g.size());
      n = g[0].get<int>();
      for (const auto &v : g)
        if (!v.is_number_integer() || v.get<int>() != n) throw ValidationError("grid: only uniform grids are supported");
    } else {
      throw ValidationError("grid: expected n or [n, ..., n]");
    }
  }
  if (flags.grid) n = *flags.grid;
  return TorusGrid(m, n, budget.point_budget());
}

namespace {
FormSource planted_sigma(const Json &p, const TorusGrid &grid) {
  require_known_keys(p, {"q", "h", "seed"}, "planted sigma");
  const int q = job_value<int>(p, "q", q_min(grid.dim()));
  const int h = job_value<int>(p, "h", 2);
  const auto seed = job_value<std::uint64_t>(p, "seed", 0);
  if (q < 1) throw ValidationError("planted sigma: q must be >= 1");
  if (!grid.resolves(2 * h)) throw ResolutionError("planted sigma: grid does not resolve (d w)^2 (needs n > 4h)");
  TrigSpec total;
  total.m = grid.dim();
  total.degree = 4;
  for (int i = 0; i < q; ++i) {
    const TrigSpec dw = trig_d(random_form(grid, 1, h, seed * 1000 + static_cast<std::uint64_t>(i)).second);
    total = trig_add(total, trig_wedge(dw, dw));
  }
  return {eval_trig_spec(total, grid), total, "planted"};
}
} // namespace

FormSource form_from_job(const Json &j, const TorusGrid &grid, int degree) {
  if (!j.is_object()) throw ValidationError("form source must be an object");
  FormSource src;
  if (j.contains("m") && j.contains("degree")) {
    src.spec = trigspec_from_json(j);
    src.kind = "spec";
  } else if (j.contains("spec")) {
    require_known_keys(j, {"spec"}, "form source");
    src.spec = trigspec_from_json(j.at("spec"));
    src.kind = "spec";
  } else if (j.contains("form")) {
    require_known_keys(j, {"form"}, "form source");
    src.form = diffform_from_json(j.at("form"), grid.points());
    if (!(src.form.grid() == grid)) throw GridMismatch("form source lives on a different grid");
    src.kind = "form";
  } else if (j.contains("planted")) {
    require_known_keys(j, {"planted"}, "form source");
    if (degree != 4) throw ValidationError("planted sources are 4-forms");
    src = planted_sigma(j.at("planted"), grid);
  } else if (j.contains("random")) {
    require_known_keys(j, {"random"}, "form source");
    const Json &r = j.at("random");
    require_known_keys(r, {"h", "seed"}, "random form source");
    auto [f, s] = random_form(grid, degree, job_value<int>(r, "h", 2), job_value<std::uint64_t>(r, "seed", 0));
    src.form = std::move(f);
    src.spec = std::move(s);
    src.kind = "random";
  } else {
    throw ValidationError("form source needs a TrigSpec, \"spec\", \"form\", \"planted\" or \"random\"");
  }
  if (src.spec) {
    if (src.spec->degree != degree) throw DegreeError("form source has degree " + std::to_string(src.spec->degree));
    if (src.kind == "spec") src.form = eval_trig_spec(*src.spec, grid);
  }
  if (src.form.degree() != degree) throw DegreeError("form source has the wrong degree");
  return src;
}

} // namespace chernforge::cli
