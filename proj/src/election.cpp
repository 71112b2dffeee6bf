#include "repvote/election.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace repvote {

template <class T>
Distortion<T> Distortion<T>::of(const T& winner_cost, const T& optimum_cost) {
  Distortion d;
  if (optimum_cost > 0) {
    d.value = winner_cost / optimum_cost;
  } else if (winner_cost > 0) {
    d.infinite = true;
  }
  return d;
}

template struct Distortion<double>;
template struct Distortion<Rational>;

void check_slate(std::size_t points, const CandidateSlate& slate) {
  if (slate.locations.empty()) throw std::invalid_argument("candidate slate is empty");
  for (PointIndex loc : slate.locations) check_index(points, loc, "candidate location");
}

namespace {

template <class T>
class Ranker {
 public:
  Ranker(const BasicMetricSpace<T>& space, const CandidateSlate& slate) : space_(space), slate_(slate) {
    buffer_.resize(slate.size());
  }

  /// Ranking of `location`, valid until the next call.
  const std::vector<std::pair<T, CandidateIndex>>& rank(PointIndex location) {
    for (CandidateIndex c = 0; c < slate_.size(); ++c) {
      buffer_[c].first = space_.distance(location, slate_.locations[c]);
      buffer_[c].second = c;
    }
    std::sort(buffer_.begin(), buffer_.end());
    return buffer_;
  }

 private:
  const BasicMetricSpace<T>& space_;
  const CandidateSlate& slate_;
  std::vector<std::pair<T, CandidateIndex>> buffer_;
};

}  // namespace

template <class T>
Rankings rankings(const BasicMetricSpace<T>& space, const CandidateSlate& slate) {
  check_slate(space.size(), slate);
  Ranker<T> ranker(space, slate);
  Rankings out(space.size());
  for (PointIndex w = 0; w < space.size(); ++w) {
    const auto& r = ranker.rank(w);
    out[w].reserve(r.size());
    for (const auto& entry : r) out[w].push_back(entry.second);
  }
  return out;
}

template <class T>
ElectionOutcome<T> run_election(const BasicMetricSpace<T>& space, const CandidateSlate& slate,
                                const ScoringVector& vector, KeepRankings keep) {
  check_slate(space.size(), slate);
  const std::size_t n = slate.size();
  if (vector.size() != n)
    throw std::invalid_argument("scoring vector has " + std::to_string(vector.size()) + " positions for " +
                                std::to_string(n) + " candidates");

  ElectionOutcome<T> out;
  out.scores.assign(n, T(0));
  if (keep == KeepRankings::Yes) out.rankings.resize(space.size());

  Ranker<T> ranker(space, slate);
  for (PointIndex w = 0; w < space.size(); ++w) {
    const T& q = space.mass(w);
    if (q == 0 && keep == KeepRankings::No) continue;
    const auto& ranking = ranker.rank(w);
    for (std::size_t pos = 0; pos < n; ++pos) {
      const T& s = vector.at<T>(pos);
      if (s != 0) out.scores[ranking[pos].second] += q * s;
    }
    if (keep == KeepRankings::Yes) {
      out.rankings[w].reserve(n);
      for (const auto& entry : ranking) out.rankings[w].push_back(entry.second);
    }
  }

  // Co-located candidates share a cost.
  std::unordered_map<PointIndex, T> cost_by_location;
  out.costs.reserve(n);
  for (PointIndex loc : slate.locations) {
    auto it = cost_by_location.find(loc);
    if (it == cost_by_location.end()) it = cost_by_location.emplace(loc, social_cost(space, loc)).first;
    out.costs.push_back(it->second);
  }

  for (CandidateIndex c = 1; c < n; ++c) {
    if (out.scores[c] > out.scores[out.winner]) out.winner = c;
    if (out.costs[c] < out.costs[out.optimum]) out.optimum = c;
  }
  out.winner_cost = out.costs[out.winner];
  out.optimum_cost = out.costs[out.optimum];
  out.distortion = Distortion<T>::of(out.winner_cost, out.optimum_cost);
  return out;
}

template Rankings rankings(const MetricSpace&, const CandidateSlate&);
template Rankings rankings(const ExactMetricSpace&, const CandidateSlate&);
template ElectionOutcome<double> run_election(const MetricSpace&, const CandidateSlate&, const ScoringVector&,
                                              KeepRankings);
template ElectionOutcome<Rational> run_election(const ExactMetricSpace&, const CandidateSlate&,
                                                const ScoringVector&, KeepRankings);

}  // namespace repvote
