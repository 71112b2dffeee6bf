#pragma once

#include "repvote/election.hpp"

#include <cstdint>
#include <string>

namespace repvote {

/// Naive recomputation of run_election, sharing no ranking or scoring code
/// with it: each candidate's position at a location is counted directly as
/// the number of candidates strictly ahead of it under (distance, index).
template <class T>
ElectionOutcome<T> brute_force_outcome(const BasicMetricSpace<T>& space, const CandidateSlate& slate,
                                       const ScoringVector& vector);

struct OracleCase {
  ExactMetricSpace space;
  CandidateSlate slate;
  RuleFamily family;
};

/// Seeded small exact instance (P <= 8, n <= 5, integer-valued distances
/// that are either line metrics or i.i.d. in [c, 2c]); the family cycles
/// through builtin_families() by index.
OracleCase oracle_case(std::uint64_t seed, std::uint64_t index);

struct OracleSweep {
  std::size_t cases = 0;
  std::size_t matches = 0;
  /// Description of the first mismatch, empty when all matched.
  std::string first_mismatch;
};

/// Compares run_election with brute_force_outcome exactly (winner, optimum,
/// every score and cost, distortion) on `cases` seeded instances.
OracleSweep oracle_sweep(std::uint64_t seed, std::size_t cases);

}  // namespace repvote
