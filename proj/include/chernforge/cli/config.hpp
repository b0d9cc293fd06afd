#pragma once

// Job configuration shared by the subcommands: flags, JSON job files and the
// CHERNFORGE_BUDGET environment variable.

#include <cstdint>
#include <optional>
#include <string>

#include "chernforge/json_io.hpp"

namespace chernforge::cli {

struct Flags {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid;
  std::optional<int> q;
  std::optional<double> tol;
  std::string out = ".";
  std::string only;
  std::string fault; // hidden test hook
  std::optional<int> m;
  std::optional<int> k;
  std::optional<std::string> mode;
};

// Parsed from "mem_mb=<int>,seconds=<number>"; either key may be omitted.
struct Budget {
  std::optional<long long> mem_mb;
  std::optional<double> seconds;

  // Grid points allowed by the memory cap (about 2 KiB per point).
  std::size_t point_budget() const;
};

inline constexpr std::size_t kBytesPerGridPoint = 2048;

// Throws ValidationError on malformed text.
Budget parse_budget(const std::string &text);
// Reads CHERNFORGE_BUDGET; an unset variable means no cap.
Budget budget_from_env();

// Loads --config (or an empty object) and checks it against `allowed` keys.
Json load_job(const Flags &flags, std::initializer_list<const char *> allowed, const std::string &what);

template <class T> T job_value(const Json &job, const char *key, T fallback) {
  if (!job.contains(key)) return fallback;
  try {
    return job.at(key).get<T>();
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(std::string("job key \"") + key + "\": " + e.what());
  }
}

// Grid from "grid": n or [n, ..., n] (uniform), overridden by --grid.
TorusGrid grid_from_job(const Json &job, const Flags &flags, int default_m, int default_n, const Budget &budget);

// A form given as a TrigSpec object, {"spec": ...}, {"form": ...},
// {"planted": {"q", "h", "seed"}} (4-forms only) or {"random": {"h", "seed"}}.
struct FormSource {
  DiffForm form;
  std::optional<TrigSpec> spec; // exact description when available
  std::string kind;
};
FormSource form_from_job(const Json &j, const TorusGrid &grid, int degree);

} // namespace chernforge::cli
