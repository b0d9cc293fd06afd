#pragma once

// JSON encodings. Form components and wavevector axes are 1-based on disk.

#include <initializer_list>
#include <ostream>
#include <string>

#include <json.hpp>

#include "chernforge/bounds.hpp"
#include "chernforge/chernweil.hpp"
#include "chernforge/decompose.hpp"
#include "chernforge/minorlemma.hpp"
#include "chernforge/quatlin.hpp"
#include "chernforge/regtuples.hpp"

namespace chernforge {

using Json = nlohmann::ordered_json;

// Throws ValidationError if `j` is not an object or holds a key outside `allowed`.
void require_known_keys(const Json &j, std::initializer_list<const char *> allowed, const std::string &what);

Json to_json(const TrigSpec &s);
TrigSpec trigspec_from_json(const Json &j);

Json to_json(const DiffForm &f);
DiffForm diffform_from_json(const Json &j, std::size_t point_budget = kDefaultPointBudget);

// Entries with a spec are written as {"spec": ...}; others as sampled forms.
Json to_json(const OneFormTuple &t);
OneFormTuple tuple_from_json(const Json &j, std::size_t point_budget = kDefaultPointBudget);

Json to_json(const ComplexMatrix &m);
ComplexMatrix complex_matrix_from_json(const Json &j);

Json to_json(const RegularityCertificate &c, bool include_rank_map = false);
Json to_json(const SurjectivityReport &r);
Json to_json(const SolveReport &r);
Json to_json(const BoundsReport &r);
Json to_json(const FactorReport &r);
Json to_json(const LemmaReport &r);
Json to_json(const CodimReport &r);
Json to_json(const Sp1FormulaReport &r);
Json to_json(const SolverOptions &o);
// Applies the keys present in `j` on top of `base`; unknown keys are rejected.
SolverOptions solver_options_from_json(const Json &j, SolverOptions base = {});

// Sampled connection: every stored entry and axis component, values as [re, im].
Json connection_to_json(const MatrixOneForm &w);
// Block descriptor of a diagonal connection built from a tuple file.
Json diag_connection_descriptor(int rank, const TorusGrid &grid, const std::string &tuple_file);

void write_history_csv(std::ostream &os, const SolveReport &r);

} // namespace chernforge
