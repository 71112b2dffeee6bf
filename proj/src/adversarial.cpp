#include "repvote/adversarial.hpp"

#include "repvote/montecarlo.hpp"
#include "repvote/parallel.hpp"
#include "repvote/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace repvote {

AdversarialParams solve_parameters(double rho, std::optional<std::size_t> n_override,
                                   std::optional<std::size_t> N_override, std::size_t M) {
  if (!(rho > 1.0)) throw std::invalid_argument("rho must exceed 1");
  if (n_override && *n_override == 0) throw std::invalid_argument("n override must be positive");
  if (N_override && *N_override == 0) throw std::invalid_argument("N override must be positive");
  if (M < 2) throw std::invalid_argument("need at least 2 F-cluster atoms");

  AdversarialParams p;
  p.rho = rho;
  const double b = 6.0 * rho - 4.0;
  p.beta = 2.0 / (b + std::sqrt(b * b + 8.0));
  p.alpha = 1.0 - p.beta;
  p.D = (1.0 + p.beta) / p.beta;
  p.mu = (1.0 + std::sqrt(1.0 - p.alpha * (1.0 - p.alpha))) / 2.0 + 1e-6;
  if (!(p.mu < 1.0)) throw std::domain_error("mu reaches 1 after the margin");
  p.n0 = static_cast<std::size_t>(std::ceil(4.0 / (p.beta * p.beta)));
  p.n = std::max(p.n0, n_override.value_or(p.n0));
  if (N_override) {
    p.N = *N_override;
  } else {
    const long double cube = std::pow(static_cast<long double>(p.n), 3.0L);
    if (cube > static_cast<long double>(std::numeric_limits<std::uint32_t>::max()))
      throw std::length_error("N = n^3 is too large; pass an N override");
    p.N = p.n * p.n * p.n;
  }
  p.M = M;
  p.eps = 1.0 / (8.0 * static_cast<double>(M) * static_cast<double>(p.N));
  check_parameters(p);
  return p;
}

void check_parameters(const AdversarialParams& p) {
  auto fail = [](const std::string& what) { throw std::invalid_argument("adversarial parameters: " + what); };
  if (!(p.beta > 0.0 && p.beta < 0.5)) fail("beta outside (0, 1/2)");
  if (std::abs((2 * p.beta + 1) * (1 - p.beta) / (3 * p.beta) - (2 * p.rho - 1)) > 1e-12)
    fail("(2b+1)(1-b)/(3b) != 2 rho - 1");
  if (std::abs(p.alpha - (1 - p.beta)) > 1e-15) fail("alpha != 1 - beta");
  if (!(p.mu >= 0.5 + p.alpha / 2)) fail("mu < 1/2 + alpha/2");
  if (!(4 * p.mu * (1 - p.mu) < p.alpha * (1 - p.alpha))) fail("4 mu (1 - mu) >= alpha (1 - alpha)");
  if (!(p.mu > p.alpha && p.mu < 1.0)) fail("mu outside (alpha, 1)");
  if (p.n < p.n0) fail("n < n0");
  if (p.N == 0 || p.M < 2) fail("empty clusters");
  if (!(p.eps * static_cast<double>(p.N) < 1.0 / (4.0 * static_cast<double>(p.M)))) fail("eps N >= 1/(4M)");
}

KeyedPermutation::KeyedPermutation(std::uint64_t key, std::uint64_t size) : key_(key), size_(size), half_bits_(1) {
  if (size == 0) throw std::invalid_argument("permutation of an empty set");
  while (half_bits_ < 32 && (std::uint64_t{1} << (2 * half_bits_)) < size) ++half_bits_;
  mask_ = (std::uint64_t{1} << half_bits_) - 1;
}

std::uint64_t KeyedPermutation::encrypt(std::uint64_t x) const {
  std::uint64_t left = x >> half_bits_;
  std::uint64_t right = x & mask_;
  for (std::uint64_t round = 0; round < 6; ++round) {
    const std::uint64_t f = mix64((key_ + round * 0x9E3779B97F4A7C15ull) ^ right) & mask_;
    const std::uint64_t next = left ^ f;
    left = right;
    right = next;
  }
  return (left << half_bits_) | right;
}

std::uint64_t KeyedPermutation::operator()(std::uint64_t x) const {
  if (x >= size_) throw std::out_of_range("permutation argument out of range");
  do {
    x = encrypt(x);
  } while (x >= size_);
  return x;
}

const char* to_string(Cluster c) { return c == Cluster::A ? "A" : "F"; }

class AdversarialInstance::Distance final : public DistanceFunction<double> {
 public:
  Distance(const AdversarialParams& p, std::uint64_t seed)
      : N_(p.N), M_(p.M), D_(p.D), eps_(p.eps), key_(hash_words(seed, streams::kInstance)) {
    permutations_.reserve(M_);
    for (std::size_t j = 0; j < M_; ++j) permutations_.emplace_back(hash_words(key_, 1, j), N_);
  }

  double x(std::size_t j) const noexcept { return 1.0 + (static_cast<double>(j) + 0.5) / static_cast<double>(M_); }

  std::uint64_t rank(std::size_t j, PointIndex a) const {
    return permutations_[j](a);
  }

  double operator()(PointIndex i, PointIndex j) const override {
    if (i == j) return 0.0;
    const bool ai = i < N_;
    const bool aj = j < N_;
    if (ai && aj) return 1.0 + unit_interval(hash_combine(key_ ^ std::min(i, j), std::max(i, j)));
    if (!ai && !aj) return std::min(x(i - N_), x(j - N_));
    const PointIndex a = ai ? i : j;
    const std::size_t f = (ai ? j : i) - N_;
    return D_ + x(f) / 4.0 + eps_ * static_cast<double>(rank(f, a));
  }

 private:
  std::size_t N_;
  std::size_t M_;
  double D_;
  double eps_;
  std::uint64_t key_;
  std::vector<KeyedPermutation> permutations_;
};

namespace {

std::vector<double> instance_masses(const AdversarialParams& p) {
  std::vector<double> mass(p.N + p.M);
  std::fill(mass.begin(), mass.begin() + static_cast<std::ptrdiff_t>(p.N), p.alpha / static_cast<double>(p.N));
  std::fill(mass.begin() + static_cast<std::ptrdiff_t>(p.N), mass.end(), p.beta / static_cast<double>(p.M));
  return mass;
}

std::string instance_label(const AdversarialParams& p, std::uint64_t seed) {
  std::ostringstream out;
  out << "two-cluster rho=" << shortest_decimal(p.rho) << " N=" << p.N << " M=" << p.M << " seed=" << seed;
  return out.str();
}

}  // namespace

AdversarialInstance::AdversarialInstance(const AdversarialParams& params, std::uint64_t seed)
    : params_((check_parameters(params), params)),
      seed_(seed),
      distance_(std::make_shared<const Distance>(params, seed)),
      space_(instance_masses(params), distance_, instance_label(params, seed)) {}

double AdversarialInstance::atom_x(std::size_t j) const noexcept { return distance_->x(j); }

std::uint64_t AdversarialInstance::rank(std::size_t j, PointIndex a) const {
  if (j >= params_.M || a >= params_.N) throw std::out_of_range("rank outside the instance");
  return distance_->rank(j, a);
}

MetricSpace materialize(const AdversarialInstance& instance, std::size_t max_points) {
  const MetricSpace& s = instance.space();
  const std::size_t p = s.size();
  if (p > max_points)
    throw std::length_error("refusing to materialize " + std::to_string(p) + " points (limit " +
                            std::to_string(max_points) + ")");
  std::vector<double> matrix(p * p);
  for (PointIndex i = 0; i < p; ++i)
    for (PointIndex j = 0; j < p; ++j) matrix[i * p + j] = s.distance(i, j);
  return MetricSpace(std::vector<double>(s.masses().begin(), s.masses().end()), std::move(matrix), s.label());
}

EventStatus check_event(const AdversarialParams& params, const CandidateSlate& slate) {
  EventStatus ev;
  std::vector<PointIndex> a_atoms;
  std::vector<PointIndex> f_atoms;
  for (PointIndex loc : slate.locations) (loc < params.N ? a_atoms : f_atoms).push_back(loc);
  ev.c_A = a_atoms.size();
  ev.c_F = f_atoms.size();
  const double n = static_cast<double>(slate.size());

  std::sort(a_atoms.begin(), a_atoms.end());
  ev.no_colocated_A_candidates = std::adjacent_find(a_atoms.begin(), a_atoms.end()) == a_atoms.end();
  ev.far_fraction_ok = static_cast<double>(ev.c_F) >= params.beta / 2.0 * n;
  ev.near_fraction_ok = static_cast<double>(ev.c_A) >= params.alpha / 2.0 * n;

  std::sort(f_atoms.begin(), f_atoms.end());
  ev.F_gaps_ok = true;
  for (std::size_t k = 1; k < f_atoms.size(); ++k)
    if (f_atoms[k] - f_atoms[k - 1] <= 1) ev.F_gaps_ok = false;

  ev.E = ev.no_colocated_A_candidates && ev.far_fraction_ok && ev.near_fraction_ok && ev.F_gaps_ok;
  return ev;
}

InstanceAudit audit_instance(const AdversarialInstance& instance, const CandidateSlate& slate, std::size_t a_voters,
                             std::uint64_t seed) {
  const MetricSpace& space = instance.space();
  const AdversarialParams& p = instance.params();
  check_slate(space.size(), slate);

  std::vector<CandidateIndex> f_cands;
  for (CandidateIndex c = 0; c < slate.size(); ++c)
    if (instance.cluster(slate.locations[c]) == Cluster::F) f_cands.push_back(c);

  std::vector<std::pair<double, CandidateIndex>> ranking(slate.size());
  auto rank_at = [&](PointIndex w) {
    for (CandidateIndex c = 0; c < slate.size(); ++c) ranking[c] = {space.distance(w, slate.locations[c]), c};
    std::sort(ranking.begin(), ranking.end());
  };

  InstanceAudit audit;
  auto x_of = [&](CandidateIndex c) { return instance.atom_x(instance.f_atom(slate.locations[c])); };

  std::vector<PointIndex> a_sample(slate.locations.begin(), slate.locations.end());
  std::erase_if(a_sample, [&](PointIndex loc) { return instance.cluster(loc) == Cluster::F; });
  KeyedRng rng(hash_words(seed, streams::kValidation), instance.seed());
  for (std::size_t k = 0; k < a_voters; ++k) a_sample.push_back(rng.below(p.N));

  if (!f_cands.empty()) {
    double min_x = std::numeric_limits<double>::infinity();
    for (CandidateIndex c : f_cands) min_x = std::min(min_x, x_of(c));
    for (PointIndex w : a_sample) {
      rank_at(w);
      ++audit.voters_checked;
      for (const auto& [d, c] : ranking) {
        if (instance.cluster(slate.locations[c]) != Cluster::F) continue;
        if (x_of(c) != min_x) ++audit.a_order_failures;
        break;
      }
    }
  }

  for (std::size_t j = 0; j < p.M; ++j) {
    const PointIndex w = instance.f_point(j);
    const double xv = instance.atom_x(j);
    rank_at(w);
    ++audit.voters_checked;
    bool seen_a = false;
    bool failed = false;
    double last_key = -1.0;
    std::uint64_t last_rank = 0;
    for (const auto& [d, c] : ranking) {
      const PointIndex loc = slate.locations[c];
      if (instance.cluster(loc) == Cluster::F) {
        if (seen_a) failed = true;
        const double key = loc == w ? 0.0 : std::min(x_of(c), xv);
        if (key < last_key) failed = true;
        last_key = key;
      } else {
        const std::uint64_t r = instance.rank(j, loc);
        if (seen_a && r < last_rank) failed = true;
        seen_a = true;
        last_rank = r;
      }
    }
    audit.f_order_failures += failed;
  }

  audit.min_f_cost = std::numeric_limits<double>::infinity();
  audit.max_a_cost = 0.0;
  std::vector<PointIndex> locations(slate.locations.begin(), slate.locations.end());
  std::sort(locations.begin(), locations.end());
  locations.erase(std::unique(locations.begin(), locations.end()), locations.end());
  for (PointIndex loc : locations) {
    const double cost = social_cost(space, loc);
    if (instance.cluster(loc) == Cluster::F) {
      audit.min_f_cost = std::min(audit.min_f_cost, cost);
      if (cost < p.alpha * p.D) ++audit.cost_bound_failures;
    } else {
      audit.max_a_cost = std::max(audit.max_a_cost, cost);
      if (cost > p.alpha * 2 + p.beta * (p.D + 1) + 1e-9) ++audit.cost_bound_failures;
    }
  }
  if (f_cands.empty()) audit.min_f_cost = 0.0;
  return audit;
}

ExperimentReport run_experiment(const AdversarialInstance& instance, const RuleFamily& family, std::size_t n,
                                std::size_t trials, std::uint64_t seed, std::size_t jobs) {
  if (n < 2) throw std::invalid_argument("the construction needs n >= 2");
  if (trials == 0) throw std::invalid_argument("need at least one trial");
  const AdversarialParams& p = instance.params();

  ExperimentReport report;
  report.params = p;
  report.family = family.name();
  report.n = n;
  report.seed = seed;

  const ScoringVector vector = score_vector(family, n);
  report.premise = condition_sides(vector, exact_from_double(p.mu));
  report.premise_violated = !report.premise.holds();
  if (!report.premise_violated) {
    report.warning = "necessity premise fails: " + report.family + " satisfies the characterization inequality at y=mu=" +
                     shortest_decimal(p.mu) + " for n=" + std::to_string(n) + " (lhs " +
                     shortest_decimal(to_double(report.premise.lhs)) + " > rhs " +
                     shortest_decimal(to_double(report.premise.rhs)) + ")";
  }

  const MetricSpace& space = instance.space();
  const CandidateSampler sampler(space);
  const double lower = p.alpha * p.D;
  report.trials.resize(trials);
  parallel_for(trials, jobs, [&](std::size_t t) {
    const CandidateSlate slate = sampler.slate(n, seed, t);
    const auto outcome = run_election(space, slate, vector);
    AdversarialTrial& rec = report.trials[t];
    rec.trial = t;
    rec.event = check_event(p, slate);
    rec.winner_cluster = instance.cluster(slate.locations[outcome.winner]);
    rec.infinite = outcome.distortion.infinite;
    rec.distortion = outcome.distortion.value;
    rec.winner_cost = outcome.winner_cost;
    rec.optimum_cost = outcome.optimum_cost;
    if (rec.winner_cluster == Cluster::F)
      rec.cost_bound_ok = rec.winner_cost >= lower && (rec.infinite || rec.distortion >= lower / rec.optimum_cost);
  });

  double sum = 0.0;
  double sum_f = 0.0;
  std::size_t finite = 0;
  report.min_distortion_f_winner = std::numeric_limits<double>::infinity();
  for (const auto& rec : report.trials) {
    report.event_count += rec.event.E;
    report.cost_bound_failures += !rec.cost_bound_ok;
    if (!rec.infinite) {
      ++finite;
      sum += rec.distortion;
    }
    if (rec.winner_cluster == Cluster::F) {
      ++report.f_winner_count;
      report.f_winner_given_event += rec.event.E;
      sum_f += rec.distortion;
      report.min_distortion_f_winner = std::min(report.min_distortion_f_winner, rec.distortion);
    }
  }
  const double total = static_cast<double>(trials);
  report.pr_event = static_cast<double>(report.event_count) / total;
  report.pr_event_stderr = std::sqrt(report.pr_event * (1.0 - report.pr_event) / total);
  report.pr_f_winner = static_cast<double>(report.f_winner_count) / total;
  if (report.event_count > 0)
    report.pr_f_given_event = static_cast<double>(report.f_winner_given_event) / static_cast<double>(report.event_count);
  if (finite > 0) {
    report.mean_distortion = sum / static_cast<double>(finite);
    if (finite > 1) {
      double squares = 0.0;
      for (const auto& rec : report.trials)
        if (!rec.infinite) squares += (rec.distortion - report.mean_distortion) * (rec.distortion - report.mean_distortion);
      report.distortion_stderr = std::sqrt(squares / static_cast<double>(finite - 1) / static_cast<double>(finite));
    }
  }
  if (report.f_winner_count > 0) {
    report.mean_distortion_f_winner = sum_f / static_cast<double>(report.f_winner_count);
  } else {
    report.min_distortion_f_winner = 0.0;
  }
  return report;
}

ExperimentReport run_experiment(double rho, const RuleFamily& family, std::size_t trials, std::uint64_t seed,
                                std::optional<std::size_t> n_override, std::optional<std::size_t> N_override,
                                std::size_t M, std::size_t jobs) {
  const AdversarialParams params = solve_parameters(rho, n_override, N_override, M);
  const AdversarialInstance instance(params, seed);
  return run_experiment(instance, family, params.n, trials, seed, jobs);
}

}  // namespace repvote
