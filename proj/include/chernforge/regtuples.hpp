#pragma once

// q-tuples of 1-forms, null tuples built from pulled-back primitives, and
// pointwise certificates that the d w_i span Lambda^2.

#include <cstdint>
#include <optional>
#include <vector>

#include "chernforge/torusforms.hpp"

namespace chernforge {

struct OneFormTuple {
  TorusGrid grid;
  std::vector<DiffForm> forms;
  std::vector<std::optional<TrigSpec>> specs; // empty or one per form

  OneFormTuple() = default;
  OneFormTuple(TorusGrid g, std::vector<DiffForm> f);

  std::size_t size() const { return forms.size(); }
  // Throws on empty tuples, grid mismatch or wrong degrees.
  void validate() const;
};

int q_min(int m);

struct RegularityOptions {
  double rank_rel_tol = 1e-8;
  double sigma_floor = 1e-6;
};

struct RegularityCertificate {
  std::vector<int> rank_map; // per grid point, lexicographic order
  int min_rank = 0;
  int target_rank = 0;
  double min_sigma = 0.0; // smallest target_rank-th singular value over the grid
  bool pass = false;
  // Counts of pointwise min singular values per decade: bin b holds values in
  // [10^(b - 12), 10^(b - 11)); bin 0 also holds everything smaller.
  std::vector<std::size_t> sigma_histogram;
};

RegularityCertificate regularity_check(const OneFormTuple &t, const RegularityOptions &opts = {});

struct SurjectivityReport {
  int target_rank = 0; // C(m, 3)
  int min_rank = 0;
  double min_sigma = 0.0;
  bool surjective = false;
  bool regularity_pass = false;
  // Spanning Lambda^2 forces surjectivity; false only if that implication is violated.
  bool consistent = true;
};

// Throws DegreeError when m < 3.
SurjectivityReport surjectivity_check_L(const OneFormTuple &t, const RegularityOptions &opts = {});

struct NullTupleOptions {
  int max_retries = 20;
  RegularityOptions regularity;
};

struct GeneratedTuple {
  OneFormTuple tuple;
  RegularityCertificate certificate;
  int attempts = 0;
  double null_residual = 0.0; // sup |sum w_i ^ d w_i|
  double scale = 0.0;         // max sup|w_i| * max sup|d w_i|
};

// w_i = u_i d v_i with random trig polynomials u_i, v_i of harmonic degree <= h.
// Throws QTooSmall (q < q_min(m)), ResolutionError (n <= 4h) or
// RegularityNotAchieved after opts.max_retries attempts.
GeneratedTuple generate_null_tuple(const TorusGrid &grid, int q, int h, std::uint64_t seed,
                                   const NullTupleOptions &opts = {});

// sum_i w_i ^ d w_i.
DiffForm null_sum(const OneFormTuple &t);

} // namespace chernforge
