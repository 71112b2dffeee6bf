#include "repvote/oracle.hpp"

#include "repvote/rng.hpp"

#include <sstream>
#include <stdexcept>

namespace repvote {

template <class T>
ElectionOutcome<T> brute_force_outcome(const BasicMetricSpace<T>& space, const CandidateSlate& slate,
                                       const ScoringVector& vector) {
  if (slate.locations.empty()) throw std::invalid_argument("candidate slate is empty");
  for (PointIndex loc : slate.locations)
    if (loc >= space.size()) throw std::out_of_range("candidate location out of range");
  const std::size_t n = slate.size();
  if (vector.size() != n) throw std::invalid_argument("scoring vector length differs from slate size");

  ElectionOutcome<T> out;
  out.scores.assign(n, T(0));
  out.costs.assign(n, T(0));
  for (CandidateIndex i = 0; i < n; ++i) {
    for (PointIndex w = 0; w < space.size(); ++w) {
      const T di = space.distance(w, slate.locations[i]);
      std::size_t ahead = 0;
      for (CandidateIndex j = 0; j < n; ++j) {
        if (j == i) continue;
        const T dj = space.distance(w, slate.locations[j]);
        if (dj < di || (dj == di && j < i)) ++ahead;
      }
      out.scores[i] += space.mass(w) * vector.at<T>(ahead);
      out.costs[i] += space.mass(w) * di;
    }
  }

  for (CandidateIndex i = 0; i < n; ++i) {
    bool best_score = true;
    bool best_cost = true;
    for (CandidateIndex j = 0; j < i; ++j) {
      if (!(out.scores[i] > out.scores[j])) best_score = false;
      if (!(out.costs[i] < out.costs[j])) best_cost = false;
    }
    for (CandidateIndex j = i + 1; j < n; ++j) {
      if (out.scores[j] > out.scores[i]) best_score = false;
      if (out.costs[j] < out.costs[i]) best_cost = false;
    }
    if (best_score) out.winner = i;
    if (best_cost) out.optimum = i;
  }
  out.winner_cost = out.costs[out.winner];
  out.optimum_cost = out.costs[out.optimum];
  if (out.optimum_cost == 0) {
    out.distortion.infinite = out.winner_cost != 0;
    out.distortion.value = T(1);
  } else {
    out.distortion.value = out.winner_cost / out.optimum_cost;
  }
  return out;
}

template ElectionOutcome<double> brute_force_outcome(const MetricSpace&, const CandidateSlate&, const ScoringVector&);
template ElectionOutcome<Rational> brute_force_outcome(const ExactMetricSpace&, const CandidateSlate&,
                                                       const ScoringVector&);

OracleCase oracle_case(std::uint64_t seed, std::uint64_t index) {
  KeyedRng rng(hash_words(seed, streams::kOracle), index);
  const std::size_t p = 1 + rng.below(8);
  const std::size_t n = 1 + rng.below(5);

  std::vector<Rational> mass(p);
  Rational total = 0;
  for (auto& m : mass) {
    // Occasional zero-mass points exercise empty locations.
    m = rng.below(6) == 0 ? 0 : static_cast<unsigned long>(1 + rng.below(9));
    total += m;
  }
  if (total == 0) {
    mass[0] = 1;
    total = 1;
  }
  for (auto& m : mass) m /= total;

  std::vector<Rational> matrix(p * p, Rational(0));
  if (rng.below(2) == 0) {
    std::vector<long> x(p);
    for (auto& xi : x) xi = static_cast<long>(rng.below(7));
    // Co-located points are not allowed in a metric; spread duplicates.
    for (std::size_t i = 0; i < p; ++i) x[i] = x[i] * 8 + static_cast<long>(i);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) {
        matrix[i * p + j] = Rational(static_cast<unsigned long>(std::labs(x[i] - x[j])), 8ul);
        matrix[i * p + j].canonicalize();
      }
  } else {
    const unsigned long c = 1 + rng.below(4);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j) {
        Rational d(static_cast<unsigned long>(c + rng.below(c + 1)));
        matrix[i * p + j] = matrix[j * p + i] = d;
      }
  }

  CandidateSlate slate;
  for (std::size_t c = 0; c < n; ++c) slate.locations.push_back(rng.below(p));

  const auto families = builtin_families();
  RuleFamily fam = families[index % families.size()];
  return OracleCase{ExactMetricSpace(std::move(mass), std::move(matrix), "oracle-case"), std::move(slate),
                    std::move(fam)};
}

OracleSweep oracle_sweep(std::uint64_t seed, std::size_t cases) {
  OracleSweep sweep;
  for (std::size_t i = 0; i < cases; ++i) {
    OracleCase oc = oracle_case(seed, i);
    ScoringVector v = score_vector(oc.family, oc.slate.size());
    auto fast = run_election(oc.space, oc.slate, v);
    auto slow = brute_force_outcome(oc.space, oc.slate, v);
    ++sweep.cases;
    bool same = fast.winner == slow.winner && fast.optimum == slow.optimum && fast.scores == slow.scores &&
                fast.costs == slow.costs && fast.distortion.infinite == slow.distortion.infinite &&
                fast.distortion.value == slow.distortion.value;
    if (same) {
      ++sweep.matches;
    } else if (sweep.first_mismatch.empty()) {
      std::ostringstream msg;
      msg << "case " << i << " (" << oc.family.name() << ", P=" << oc.space.size() << ", n=" << oc.slate.size()
          << "): winner " << fast.winner << " vs " << slow.winner << ", optimum " << fast.optimum << " vs "
          << slow.optimum;
      sweep.first_mismatch = msg.str();
    }
  }
  return sweep;
}

}  // namespace repvote
