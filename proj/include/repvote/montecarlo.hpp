#pragma once

#include "repvote/election.hpp"

#include <cstdint>
#include <vector>

namespace repvote {

/// Inverse-CDF sampler over the point masses of a space.
class CandidateSampler {
 public:
  explicit CandidateSampler(std::span<const double> masses);
  explicit CandidateSampler(const MetricSpace& space) : CandidateSampler(space.masses()) {}

  PointIndex draw(double u) const;
  /// n i.i.d. draws; a pure function of (seed, trial).
  CandidateSlate slate(std::size_t n, std::uint64_t seed, std::uint64_t trial) const;

 private:
  std::vector<double> cumulative_;
};

CandidateSlate sample_candidates(const MetricSpace& space, std::size_t n, std::uint64_t seed, std::uint64_t trial);

struct TrialRecord {
  std::uint64_t trial = 0;
  bool infinite = false;
  double distortion = 1.0;
  /// d(o_hat, winner).
  double winner_distance = 0.0;
};

/// Per-trial results, kept in trial order. Merging batches with disjoint
/// trial ranges is associative and yields the same statistics as one run.
struct TrialBatch {
  std::vector<TrialRecord> records;

  void merge(const TrialBatch& other);
};

struct TailPoint {
  double r;
  /// Pr[d(o_hat, W(C)) >= r].
  double probability;
};

struct Estimate {
  /// Finite-distortion trials entering the mean.
  std::size_t trials = 0;
  double mean = 0.0;
  double standard_error = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  double max_observed = 0.0;
  std::size_t infinite_count = 0;
  double mean_winner_distance = 0.0;
  /// On the distinct distances from o_hat; non-increasing.
  std::vector<TailPoint> winner_distance_tail;
};

/// Runs trials [first_trial, first_trial + count), each an election on
/// sample_candidates(space, n, seed, trial).
TrialBatch run_trials(const MetricSpace& space, const RuleFamily& family, std::size_t n, std::uint64_t seed,
                      std::uint64_t first_trial, std::size_t count, std::size_t jobs = 1);

Estimate summarize(const TrialBatch& batch, const MetricSpace& space);

Estimate estimate_distortion(const MetricSpace& space, const RuleFamily& family, std::size_t n, std::size_t trials,
                             std::uint64_t seed, std::size_t jobs = 1);

/// Exact expectation over all P^n ordered location tuples, weighted by the
/// product of their masses. Throws std::length_error when P^n > max_tuples
/// and std::domain_error if a reachable tuple has infinite distortion.
template <class T>
T exact_expected_distortion(const BasicMetricSpace<T>& space, const RuleFamily& family, std::size_t n,
                            std::uint64_t max_tuples = 1'000'000);

struct ProbeRow {
  double r = 0.0;
  /// V(r) = 1 - q(B(o_hat, r)).
  double outside_mass = 0.0;
  /// e / (1 - z) * V(r).
  double event_bound = 0.0;
  /// Trials with more than (1 - z) n candidates outside B(o_hat, r).
  std::size_t event_count = 0;
  /// Trials whose winner lies outside B(o_hat, 3r).
  std::size_t winner_outside = 0;
  /// Trials with no event and a winner outside B(o_hat, 3r).
  std::size_t winner_outside_without_event = 0;
};

struct SufficiencyCheck {
  double z = 0.0;
  /// (1 - 1/e) + z/e.
  double y_tilde = 0.0;
  /// Smallest r with q(B(o_hat, r)) >= y_tilde.
  double r_tilde = 0.0;
  std::size_t trials = 0;
  std::size_t n = 0;
  PointIndex median = 0;
  /// One row per distinct distance r >= r_tilde from o_hat.
  std::vector<ProbeRow> rows;
};

/// Requires z in (1/2, 1).
SufficiencyCheck sufficiency_probe(const MetricSpace& space, const RuleFamily& family, std::size_t n,
                                   std::size_t trials, std::uint64_t seed, double z, std::size_t jobs = 1);

}  // namespace repvote
