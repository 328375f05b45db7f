#pragma once

#include <cstddef>
#include <vector>

#include "lcube/problem.hpp"

namespace lcube {

struct SearchBudget {
  /// Largest candidate size, see candidate_size.
  std::size_t max_term_size = 6;
  std::size_t max_solutions = 64;
};

/// Node count of a candidate, not counting the domain annotations of
/// abstractions (those are forced by the expected type in eta-long form).
std::size_t candidate_size(const Term& t);

/// Total order used for candidates: by size, then structurally.
bool candidate_less(const Term& a, const Term& b);

/// All eta-long beta-normal terms of type `type` built from the universal
/// variables of `qctx`, up to the size budget, each checked by the kernel.
/// Deterministic order: size, then structure.
std::vector<Term> enumerate_candidates(const QContext& qctx, const Term& type,
                                       const SearchBudget& budget, const CubeSpec& spec,
                                       Fuel fuel = {});

struct SearchResult {
  std::vector<Substitution> solutions;
  /// False when max_solutions cut the search short.
  bool exhaustive = true;
  std::size_t assignments_tried = 0;
};

/// Assigns enumerated candidates (with empty local contexts) to the
/// existential variables in declaration order and keeps the assignments that
/// solve the problem. Solutions are ordered by their largest candidate, then
/// lexicographically by variable, so a larger budget only appends.
SearchResult solve_bounded(const Problem& p, const SearchBudget& budget, const CubeSpec& spec,
                           Fuel fuel = {});

}  // namespace lcube
