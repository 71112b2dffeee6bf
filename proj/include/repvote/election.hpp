#pragma once

#include "repvote/metric_space.hpp"
#include "repvote/scoring.hpp"

#include <vector>

namespace repvote {

using CandidateIndex = std::size_t;

/// Candidate locations; the candidate's identity is its array position.
/// Several candidates may share a location.
struct CandidateSlate {
  std::vector<PointIndex> locations;

  std::size_t size() const noexcept { return locations.size(); }
};

/// Per voter location, candidate indices from most to least preferred.
using Rankings = std::vector<std::vector<CandidateIndex>>;

/// Winner cost over optimum cost. A zero-cost optimum yields 1 when the
/// winner costs 0 too and `infinite` otherwise.
template <class T>
struct Distortion {
  bool infinite = false;
  T value = T(1);

  static Distortion of(const T& winner_cost, const T& optimum_cost);
};

template <class T>
struct ElectionOutcome {
  /// Filled only when requested; one row per point of the space.
  Rankings rankings;
  std::vector<T> scores;
  std::vector<T> costs;
  CandidateIndex winner = 0;
  CandidateIndex optimum = 0;
  T winner_cost = T(0);
  T optimum_cost = T(0);
  Distortion<T> distortion;
};

void check_slate(std::size_t points, const CandidateSlate& slate);

/// For each location, candidates sorted by (distance, candidate index); all
/// voters at one location share the ranking.
template <class T>
Rankings rankings(const BasicMetricSpace<T>& space, const CandidateSlate& slate);

enum class KeepRankings { No, Yes };

/// Positional election: score(i) = sum_w q(w) s(pos_w(i)); winner is the
/// lowest-index argmax of score, optimum the lowest-index argmin of cost.
/// Throws std::invalid_argument when vector.size() != slate.size().
template <class T>
ElectionOutcome<T> run_election(const BasicMetricSpace<T>& space, const CandidateSlate& slate,
                                const ScoringVector& vector, KeepRankings keep = KeepRankings::No);

extern template struct Distortion<double>;
extern template struct Distortion<Rational>;

}  // namespace repvote
