#include "repvote/montecarlo.hpp"

#include "repvote/parallel.hpp"
#include "repvote/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace repvote {

CandidateSampler::CandidateSampler(std::span<const double> masses) {
  if (masses.empty()) throw std::invalid_argument("cannot sample from an empty space");
  cumulative_.reserve(masses.size());
  double running = 0.0;
  for (double m : masses) {
    running += m;
    cumulative_.push_back(running);
  }
  if (!(running > 0.0)) throw std::invalid_argument("cannot sample from a space with zero total mass");
}

PointIndex CandidateSampler::draw(double u) const {
  const double target = u * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  if (it == cumulative_.end()) --it;
  // Never land on a zero-mass point sitting at the end of the array.
  while (it != cumulative_.begin() && *it == *(it - 1)) --it;
  return static_cast<PointIndex>(it - cumulative_.begin());
}

CandidateSlate CandidateSampler::slate(std::size_t n, std::uint64_t seed, std::uint64_t trial) const {
  if (n == 0) throw std::invalid_argument("need at least one candidate");
  KeyedRng rng(hash_words(seed, streams::kCandidates), trial);
  CandidateSlate out;
  out.locations.reserve(n);
  for (std::size_t c = 0; c < n; ++c) out.locations.push_back(draw(rng.uniform()));
  return out;
}

CandidateSlate sample_candidates(const MetricSpace& space, std::size_t n, std::uint64_t seed, std::uint64_t trial) {
  return CandidateSampler(space).slate(n, seed, trial);
}

void TrialBatch::merge(const TrialBatch& other) {
  records.insert(records.end(), other.records.begin(), other.records.end());
  std::sort(records.begin(), records.end(),
            [](const TrialRecord& a, const TrialRecord& b) { return a.trial < b.trial; });
  auto dup = std::adjacent_find(records.begin(), records.end(),
                                [](const TrialRecord& a, const TrialRecord& b) { return a.trial == b.trial; });
  if (dup != records.end()) throw std::invalid_argument("merged batches overlap at trial " + std::to_string(dup->trial));
}

TrialBatch run_trials(const MetricSpace& space, const RuleFamily& family, std::size_t n, std::uint64_t seed,
                      std::uint64_t first_trial, std::size_t count, std::size_t jobs) {
  const ScoringVector vector = score_vector(family, n);
  const CandidateSampler sampler(space);
  const PointIndex median = one_median(space);

  TrialBatch batch;
  batch.records.resize(count);
  parallel_for(count, jobs, [&](std::size_t i) {
    const std::uint64_t trial = first_trial + i;
    const CandidateSlate slate = sampler.slate(n, seed, trial);
    const auto outcome = run_election(space, slate, vector);
    TrialRecord& rec = batch.records[i];
    rec.trial = trial;
    rec.infinite = outcome.distortion.infinite;
    rec.distortion = outcome.distortion.value;
    rec.winner_distance = space.distance(median, slate.locations[outcome.winner]);
  });
  return batch;
}

Estimate summarize(const TrialBatch& batch, const MetricSpace& space) {
  Estimate est;
  double sum = 0.0;
  double winner_distance_sum = 0.0;
  for (const auto& rec : batch.records) {
    winner_distance_sum += rec.winner_distance;
    if (rec.infinite) {
      ++est.infinite_count;
      continue;
    }
    ++est.trials;
    sum += rec.distortion;
    est.max_observed = std::max(est.max_observed, rec.distortion);
  }
  if (est.trials > 0) {
    est.mean = sum / static_cast<double>(est.trials);
    double squares = 0.0;
    for (const auto& rec : batch.records) {
      if (rec.infinite) continue;
      const double dev = rec.distortion - est.mean;
      squares += dev * dev;
    }
    if (est.trials > 1) {
      const double sd = std::sqrt(squares / static_cast<double>(est.trials - 1));
      est.standard_error = sd / std::sqrt(static_cast<double>(est.trials));
    }
  }
  est.ci95_low = est.mean - 1.96 * est.standard_error;
  est.ci95_high = est.mean + 1.96 * est.standard_error;

  if (!batch.records.empty()) {
    const double total = static_cast<double>(batch.records.size());
    est.mean_winner_distance = winner_distance_sum / total;
    std::vector<double> distances;
    distances.reserve(batch.records.size());
    for (const auto& rec : batch.records) distances.push_back(rec.winner_distance);
    std::sort(distances.begin(), distances.end());
    for (double r : distinct_distances(space, one_median(space))) {
      auto at_least = distances.end() - std::lower_bound(distances.begin(), distances.end(), r);
      est.winner_distance_tail.push_back({r, static_cast<double>(at_least) / total});
    }
  }
  return est;
}

Estimate estimate_distortion(const MetricSpace& space, const RuleFamily& family, std::size_t n, std::size_t trials,
                             std::uint64_t seed, std::size_t jobs) {
  if (trials == 0) throw std::invalid_argument("need at least one trial");
  return summarize(run_trials(space, family, n, seed, 0, trials, jobs), space);
}

template <class T>
T exact_expected_distortion(const BasicMetricSpace<T>& space, const RuleFamily& family, std::size_t n,
                            std::uint64_t max_tuples) {
  if (n == 0) throw std::invalid_argument("need at least one candidate");
  const std::size_t p = space.size();
  if (p == 0) throw std::invalid_argument("empty space");
  long double tuples = std::pow(static_cast<long double>(p), static_cast<long double>(n));
  if (tuples > static_cast<long double>(max_tuples))
    throw std::length_error("P^n = " + std::to_string(static_cast<double>(tuples)) + " tuples exceeds the limit");

  const ScoringVector vector = score_vector(family, n);
  CandidateSlate slate;
  slate.locations.assign(n, 0);
  T expected = 0;
  for (;;) {
    T probability = 1;
    for (PointIndex loc : slate.locations) probability *= space.mass(loc);
    if (probability != 0) {
      const auto outcome = run_election(space, slate, vector);
      if (outcome.distortion.infinite) throw std::domain_error("reachable slate with infinite distortion");
      expected += probability * outcome.distortion.value;
    }
    std::size_t c = 0;
    while (c < n && ++slate.locations[c] == p) slate.locations[c++] = 0;
    if (c == n) break;
  }
  return expected;
}

template double exact_expected_distortion(const MetricSpace&, const RuleFamily&, std::size_t, std::uint64_t);
template Rational exact_expected_distortion(const ExactMetricSpace&, const RuleFamily&, std::size_t,
                                            std::uint64_t);

SufficiencyCheck sufficiency_probe(const MetricSpace& space, const RuleFamily& family, std::size_t n,
                                   std::size_t trials, std::uint64_t seed, double z, std::size_t jobs) {
  if (!(z > 0.5 && z < 1.0)) throw std::invalid_argument("probe needs z in (1/2, 1)");
  if (trials == 0) throw std::invalid_argument("need at least one trial");

  SufficiencyCheck check;
  check.z = z;
  check.n = n;
  check.trials = trials;
  check.y_tilde = (1.0 - 1.0 / std::numbers::e) + z / std::numbers::e;
  check.median = one_median(space);

  const std::vector<double> grid = distinct_distances(space, check.median);
  std::vector<double> outside;
  outside.reserve(grid.size());
  for (double r : grid) outside.push_back(outside_mass(space, check.median, r));

  std::size_t first = grid.size() - 1;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (1.0 - outside[g] >= check.y_tilde) {
      first = g;
      break;
    }
  }
  check.r_tilde = grid[first];

  struct TrialView {
    std::vector<double> candidate_distances;  // sorted
    double winner_distance = 0.0;
  };
  const ScoringVector vector = score_vector(family, n);
  const CandidateSampler sampler(space);
  std::vector<TrialView> views(trials);
  parallel_for(trials, jobs, [&](std::size_t t) {
    const CandidateSlate slate = sampler.slate(n, seed, t);
    const auto outcome = run_election(space, slate, vector);
    TrialView& v = views[t];
    v.candidate_distances.reserve(n);
    for (PointIndex loc : slate.locations) v.candidate_distances.push_back(space.distance(check.median, loc));
    std::sort(v.candidate_distances.begin(), v.candidate_distances.end());
    v.winner_distance = space.distance(check.median, slate.locations[outcome.winner]);
  });

  const double outside_threshold = (1.0 - z) * static_cast<double>(n);
  for (std::size_t g = first; g < grid.size(); ++g) {
    ProbeRow row;
    row.r = grid[g];
    row.outside_mass = outside[g];
    row.event_bound = std::numbers::e / (1.0 - z) * outside[g];
    for (const auto& v : views) {
      const auto beyond = v.candidate_distances.end() -
                          std::upper_bound(v.candidate_distances.begin(), v.candidate_distances.end(), row.r);
      const bool event = static_cast<double>(beyond) > outside_threshold;
      const bool far_winner = v.winner_distance > 3.0 * row.r;
      row.event_count += event;
      row.winner_outside += far_winner;
      row.winner_outside_without_event += far_winner && !event;
    }
    check.rows.push_back(row);
  }
  return check;
}

}  // namespace repvote
