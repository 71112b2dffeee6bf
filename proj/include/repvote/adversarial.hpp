#pragma once

#include "repvote/condition.hpp"
#include "repvote/election.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace repvote {

struct AdversarialParams {
  double rho = 0.0;
  /// Far-cluster mass, the root in (0, 1/2) of 2b^2 + (6 rho - 4) b - 1 = 0.
  double beta = 0.0;
  double alpha = 0.0;
  /// (1 + beta) / beta.
  double D = 0.0;
  double mu = 0.0;
  /// ceil(4 / beta^2).
  std::size_t n0 = 0;
  std::size_t n = 0;
  /// A-cluster atoms.
  std::size_t N = 0;
  /// F-cluster atoms.
  std::size_t M = 0;
  /// 1 / (8 M N).
  double eps = 0.0;
};

inline constexpr std::size_t kDefaultFAtoms = 512;

/// Throws std::invalid_argument for rho <= 1 or zero overrides, and
/// std::domain_error when mu would reach 1. N defaults to n^3.
AdversarialParams solve_parameters(double rho, std::optional<std::size_t> n_override = {},
                                   std::optional<std::size_t> N_override = {}, std::size_t M = kDefaultFAtoms);

/// Throws std::invalid_argument naming the first broken identity.
void check_parameters(const AdversarialParams& params);

/// Keyed pseudo-random bijection of [0, size): a balanced Feistel network
/// over the next even power of two, with cycle walking.
class KeyedPermutation {
 public:
  KeyedPermutation(std::uint64_t key, std::uint64_t size);

  std::uint64_t operator()(std::uint64_t x) const;
  std::uint64_t size() const noexcept { return size_; }

 private:
  std::uint64_t key_;
  std::uint64_t size_;
  unsigned half_bits_;
  std::uint64_t mask_;

  std::uint64_t encrypt(std::uint64_t x) const;
};

enum class Cluster { A, F };

const char* to_string(Cluster c);

/// Points 0..N-1 are A-atoms, N..N+M-1 the F-atoms at x_j = 1 + (j + 1/2)/M.
/// Distances are derived on demand and never stored.
class AdversarialInstance {
 public:
  AdversarialInstance(const AdversarialParams& params, std::uint64_t seed);

  const AdversarialParams& params() const noexcept { return params_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const MetricSpace& space() const noexcept { return space_; }

  Cluster cluster(PointIndex p) const noexcept { return p < params_.N ? Cluster::A : Cluster::F; }
  PointIndex f_point(std::size_t j) const noexcept { return params_.N + j; }
  std::size_t f_atom(PointIndex p) const noexcept { return p - params_.N; }
  double atom_x(std::size_t j) const noexcept;
  /// pi_j^{-1}(a): the position of A-atom a in F-atom j's permutation.
  std::uint64_t rank(std::size_t j, PointIndex a) const;

 private:
  class Distance;

  AdversarialParams params_;
  std::uint64_t seed_;
  std::shared_ptr<const Distance> distance_;
  MetricSpace space_;
};

/// Dense copy of the instance metric. Throws std::length_error when the
/// point count exceeds max_points.
MetricSpace materialize(const AdversarialInstance& instance, std::size_t max_points = 4096);

struct EventStatus {
  bool no_colocated_A_candidates = false;
  bool far_fraction_ok = false;
  bool near_fraction_ok = false;
  bool F_gaps_ok = false;
  bool E = false;
  std::size_t c_F = 0;
  std::size_t c_A = 0;
};

/// Points below params.N are A-atoms, the rest F-atoms. Same-atom and
/// adjacent-atom F pairs count as gap failures.
EventStatus check_event(const AdversarialParams& params, const CandidateSlate& slate);

struct InstanceAudit {
  std::size_t voters_checked = 0;
  /// A-voters whose first F-candidate is not one with the smallest x.
  std::size_t a_order_failures = 0;
  /// F-voters whose F-candidates are not in distance order, whose F-candidates
  /// do not all precede the A-candidates, or whose A-candidates are not in
  /// the atom's permutation order.
  std::size_t f_order_failures = 0;
  /// F-candidates with cost below alpha D, or A-candidates above 3.
  std::size_t cost_bound_failures = 0;
  double min_f_cost = 0.0;
  double max_a_cost = 0.0;

  bool ok() const noexcept { return a_order_failures + f_order_failures + cost_bound_failures == 0; }
};

/// Rechecks orderings and cost bounds for one slate: every F-voter and a
/// seeded sample of a_voters A-voters.
InstanceAudit audit_instance(const AdversarialInstance& instance, const CandidateSlate& slate,
                             std::size_t a_voters = 2048, std::uint64_t seed = 0);

struct AdversarialTrial {
  std::uint64_t trial = 0;
  EventStatus event;
  Cluster winner_cluster = Cluster::A;
  bool infinite = false;
  double distortion = 1.0;
  double winner_cost = 0.0;
  double optimum_cost = 0.0;
  /// An F-winner must cost at least alpha D.
  bool cost_bound_ok = true;
};

struct ExperimentReport {
  AdversarialParams params;
  std::string family;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<AdversarialTrial> trials;

  /// Characterization inequality at y = mu for this n; the construction
  /// needs it to fail.
  ConditionSides premise;
  bool premise_violated = false;
  std::optional<std::string> warning;

  std::size_t event_count = 0;
  std::size_t f_winner_count = 0;
  std::size_t f_winner_given_event = 0;
  std::size_t cost_bound_failures = 0;
  double pr_event = 0.0;
  double pr_event_stderr = 0.0;
  double pr_f_winner = 0.0;
  /// 0 when no trial had E.
  double pr_f_given_event = 0.0;
  double mean_distortion = 0.0;
  double distortion_stderr = 0.0;
  double mean_distortion_f_winner = 0.0;
  /// Smallest distortion among F-winner trials; 0 when there are none.
  double min_distortion_f_winner = 0.0;
};

/// Trials on one fixed instance with an explicit candidate count, which may
/// be below n0. Deterministic in (instance seed, seed, trial).
ExperimentReport run_experiment(const AdversarialInstance& instance, const RuleFamily& family, std::size_t n,
                                std::size_t trials, std::uint64_t seed, std::size_t jobs = 1);

/// solve_parameters, then an instance built from `seed`, then trials.
ExperimentReport run_experiment(double rho, const RuleFamily& family, std::size_t trials, std::uint64_t seed,
                                std::optional<std::size_t> n_override = {},
                                std::optional<std::size_t> N_override = {}, std::size_t M = kDefaultFAtoms,
                                std::size_t jobs = 1);

}  // namespace repvote
