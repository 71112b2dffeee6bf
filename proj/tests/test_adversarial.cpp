#include "repvote/adversarial.hpp"
#include "repvote/montecarlo.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace repvote;

namespace {

// Root of 2b^2 + (6 rho - 4) b - 1 in (0, 1/2) by bisection.
double bisect_beta(double rho) {
  auto g = [&](double b) { return 2 * b * b + (6 * rho - 4) * b - 1; };
  double lo = 0.0, hi = 0.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = (lo + hi) / 2;
    (g(mid) < 0 ? lo : hi) = mid;
  }
  return lo;
}

AdversarialParams small_params(std::size_t N = 2000, std::size_t M = 64) { return solve_parameters(1.25, {}, N, M); }

}  // namespace

TEST_SUITE("adversarial") {
  TEST_CASE("parameters at rho = 5/4") {
    const auto p = solve_parameters(1.25, {}, {}, 512);
    CHECK(p.beta == 0.25);
    CHECK(p.alpha == 0.75);
    CHECK(p.D == 5.0);
    CHECK(p.n0 == 64);
    CHECK(p.n == 64);
    CHECK(p.N == 64 * 64 * 64);
    CHECK(p.M == 512);
    CHECK(p.eps == 1.0 / (8.0 * 512 * 262144));
    CHECK(p.mu == doctest::Approx(0.950694 + 1e-6).epsilon(1e-6));
    CHECK(4 * p.mu * (1 - p.mu) < 0.1875);
    CHECK(p.mu >= 0.875);
    CHECK((1 - p.beta) * (p.D + 1) / 3 == 2 * p.rho - 1);
  }

  TEST_CASE("beta matches an independent root finder") {
    for (double rho : {1.01, 1.1, 1.25, 1.5, 2.0, 3.0, 10.0}) {
      const auto p = solve_parameters(rho, {}, 1000, 16);
      CHECK(p.beta == doctest::Approx(bisect_beta(rho)).epsilon(1e-12));
      CHECK(std::abs((2 * p.beta + 1) * (1 - p.beta) / (3 * p.beta) - (2 * rho - 1)) <= 1e-12);
      CHECK(p.n0 == static_cast<std::size_t>(std::ceil(4 / (p.beta * p.beta))));
      CHECK_NOTHROW(check_parameters(p));
    }
    CHECK(solve_parameters(2.0, {}, 1000, 16).beta == doctest::Approx(0.121320).epsilon(1e-6));
  }

  TEST_CASE("parameter errors and overrides") {
    CHECK_THROWS_AS(solve_parameters(1.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_parameters(0.5), std::invalid_argument);
    CHECK_THROWS_AS(solve_parameters(1.25, 0), std::invalid_argument);
    CHECK_THROWS_AS(solve_parameters(1.25, {}, 0), std::invalid_argument);
    CHECK_THROWS_AS(solve_parameters(1.25, {}, 100, 1), std::invalid_argument);
    CHECK_THROWS_AS(solve_parameters(1.05, 5000), std::length_error);
    CHECK(solve_parameters(1.25, 10, 100).n == 64);
    CHECK(solve_parameters(1.25, 100, 100).n == 100);
    auto p = small_params();
    p.n = 10;
    CHECK_THROWS_AS(check_parameters(p), std::invalid_argument);
    p = small_params();
    p.mu = 0.9;
    CHECK_THROWS_AS(check_parameters(p), std::invalid_argument);
  }

  TEST_CASE("keyed permutations are bijections") {
    for (std::uint64_t size = 1; size <= 300; ++size) {
      const KeyedPermutation pi(size * 31, size);
      std::vector<bool> hit(size, false);
      for (std::uint64_t x = 0; x < size; ++x) {
        const auto y = pi(x);
        REQUIRE(y < size);
        CHECK_FALSE(hit[y]);
        hit[y] = true;
      }
    }
    const KeyedPermutation a(5, 4096), b(6, 4096);
    std::vector<bool> hit(4096, false);
    std::size_t same = 0;
    for (std::uint64_t x = 0; x < 4096; ++x) {
      hit[a(x)] = true;
      same += a(x) == b(x);
    }
    CHECK(std::count(hit.begin(), hit.end(), true) == 4096);
    CHECK(same < 20);
  }

  TEST_CASE("derived distances") {
    const auto p = small_params();
    const AdversarialInstance inst(p, 3);
    const auto& s = inst.space();
    REQUIRE(s.size() == p.N + p.M);
    double total = 0;
    for (PointIndex i = 0; i < s.size(); ++i) total += s.mass(i);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.mass(0) == p.alpha / p.N);
    CHECK(s.mass(inst.f_point(3)) == p.beta / p.M);
    CHECK(inst.atom_x(0) == 1 + 0.5 / p.M);
    CHECK(inst.cluster(p.N - 1) == Cluster::A);
    CHECK(inst.cluster(p.N) == Cluster::F);

    const AdversarialInstance again(p, 3), other(p, 4);
    std::size_t differs = 0;
    for (PointIndex i = 0; i < 60; ++i)
      for (PointIndex j = 0; j < 60; ++j) {
        const PointIndex a = i * 37 % p.N, b = j * 41 % p.N;
        CHECK(s.distance(a, b) == s.distance(b, a));
        CHECK(s.distance(a, b) == again.space().distance(a, b));
        differs += s.distance(a, b) != other.space().distance(a, b);
        if (a != b) CHECK((s.distance(a, b) >= 1.0 && s.distance(a, b) <= 2.0));
      }
    CHECK(differs > 3000);
    CHECK(s.distance(inst.f_point(1), 7) != other.space().distance(inst.f_point(1), 7));
    for (std::size_t j = 0; j < p.M; ++j) {
      for (std::size_t k = 0; k < p.M; ++k)
        if (j != k) CHECK(s.distance(inst.f_point(j), inst.f_point(k)) == std::min(inst.atom_x(j), inst.atom_x(k)));
      for (PointIndex a = 0; a < p.N; a += 97) {
        const double d = s.distance(a, inst.f_point(j));
        CHECK(d == p.D + inst.atom_x(j) / 4 + p.eps * static_cast<double>(inst.rank(j, a)));
        CHECK((d >= p.D && d <= p.D + 1));
      }
    }
  }

  TEST_CASE("instances are metric") {
    const auto p = small_params(200, 16);
    const AdversarialInstance inst(p, 11);
    const auto dense = materialize(inst);
    const auto full = validate(dense);
    CHECK(full.exhaustive_triples);
    CHECK(full.ok);
    const AdversarialInstance big(solve_parameters(1.25, {}, 50000, 512), 1);
    const auto sampled = validate(big.space());
    CHECK_FALSE(sampled.exhaustive_triples);
    CHECK(sampled.triples_checked > 0);
    CHECK(sampled.ok);
    CHECK_THROWS_AS(materialize(big), std::length_error);
  }

  TEST_CASE("event checks") {
    const auto p = small_params(2000, 64);
    const PointIndex f0 = p.N;
    CandidateSlate all_a{std::vector<PointIndex>{1, 2, 3, 4}};
    const auto a = check_event(p, all_a);
    CHECK_FALSE(a.far_fraction_ok);
    CHECK_FALSE(a.E);

    const auto pair = check_event(p, CandidateSlate{{5, f0 + 7}});
    CHECK(pair.E);
    CHECK(pair.c_A == 1);
    CHECK(pair.c_F == 1);

    CHECK_FALSE(check_event(p, CandidateSlate{{5, 5, f0 + 7}}).no_colocated_A_candidates);
    CHECK_FALSE(check_event(p, CandidateSlate{{5, f0 + 7, f0 + 8}}).F_gaps_ok);
    CHECK_FALSE(check_event(p, CandidateSlate{{5, f0 + 7, f0 + 7}}).F_gaps_ok);
    CHECK(check_event(p, CandidateSlate{{5, f0 + 7, f0 + 9}}).F_gaps_ok);
    const auto mostly_f = check_event(p, CandidateSlate{{5, f0 + 1, f0 + 3, f0 + 5, f0 + 7, f0 + 9}});
    CHECK(mostly_f.c_F == 5);
    CHECK_FALSE(mostly_f.near_fraction_ok);
  }

  TEST_CASE("orderings and cost bounds hold on sampled slates") {
    const auto p = solve_parameters(1.25, {}, 4096, 512);
    const AdversarialInstance inst(p, 2);
    const CandidateSampler sampler(inst.space());
    for (std::uint64_t t = 0; t < 3; ++t) {
      const auto slate = sampler.slate(p.n, 9, t);
      const auto audit = audit_instance(inst, slate, 512, t);
      CHECK(audit.ok());
      CHECK(audit.voters_checked >= 512);
      CHECK(audit.min_f_cost >= p.alpha * p.D);
      CHECK(audit.max_a_cost <= 3.0 + 1e-9);
    }
  }

  TEST_CASE("Plurality necessity experiment at desk scale") {
    const AdversarialInstance inst(solve_parameters(1.25, {}, 4096, 512), 5);
    const auto r = run_experiment(inst, family::Plurality{}, 64, 20, 7);
    CHECK(r.premise_violated);
    CHECK_FALSE(r.warning);
    CHECK(r.cost_bound_failures == 0);
    CHECK(r.trials.size() == 20);
    CHECK(r.f_winner_count > 0);
    for (const auto& t : r.trials)
      if (t.winner_cluster == Cluster::F) CHECK(t.distortion >= 1.5 * 0.95);
    CHECK(r.f_winner_given_event <= r.event_count);
    CHECK(r.pr_event == doctest::Approx(static_cast<double>(r.event_count) / 20));

    const auto parallel = run_experiment(inst, family::Plurality{}, 64, 20, 7, 3);
    for (std::size_t i = 0; i < 20; ++i) {
      CHECK(parallel.trials[i].distortion == r.trials[i].distortion);
      CHECK(parallel.trials[i].event.E == r.trials[i].event.E);
    }
  }

  TEST_CASE("Borda warns that the premise fails") {
    const auto r = run_experiment(1.25, family::Borda{}, 2, 1, {}, 2000, 64);
    CHECK_FALSE(r.premise_violated);
    REQUIRE(r.warning);
    CHECK(r.warning->find("premise") != std::string::npos);
    CHECK(r.trials.size() == 2);
  }
}
