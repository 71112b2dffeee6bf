#include "repvote/cli.hpp"

#include "repvote/adversarial.hpp"
#include "repvote/condition.hpp"
#include "repvote/montecarlo.hpp"
#include "repvote/oracle.hpp"
#include "repvote/parallel.hpp"
#include "repvote/space_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

namespace repvote {

namespace {

struct UsageError : std::runtime_error {
  UsageError(int code, const std::string& message) : std::runtime_error(message), code(code) {}
  int code;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) { return shortest_decimal(v); }

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

std::size_t parse_count(const std::string& text, const char* what) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw UsageError(kExitMalformedValue, std::string("malformed ") + what + ": '" + text + "'");
  return value;
}

RuleFamily parse_family(const std::string& spec) {
  try {
    return RuleFamily::parse(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(kExitMalformedValue, std::string("bad --family: ") + e.what());
  } catch (const std::exception& e) {
    throw InputError(std::string("cannot load family '") + spec + "': " + e.what());
  }
}

Rational parse_exact(const std::string& text, const char* flag) {
  try {
    return parse_rational(text);
  } catch (const std::exception&) {
    throw UsageError(kExitMalformedValue, std::string("malformed ") + flag + ": '" + text + "'");
  }
}

std::fstream open_output(const std::string& path) {
  std::fstream file(path, std::ios::out | std::ios::trunc);
  if (!file) throw InputError("cannot write " + path);
  return file;
}

struct SpaceSource {
  std::string path;
  std::string random;

  void add_to(CLI::App* app) {
    auto* s = app->add_option("--space", path, "Space file (YAML)");
    auto* r = app->add_option("--random", random, "Random space P,MODE (uniform-box-L2 | iid-unit-interval-distances)");
    s->excludes(r);
  }
};

struct LoadedSpace {
  std::optional<ExactMetricSpace> exact;
  MetricSpace floating;
  std::string scenario;
};

LoadedSpace load_source(const SpaceSource& source, std::uint64_t seed, bool validate_file = true) {
  if (source.path.empty() && source.random.empty())
    throw UsageError(kExitMissingRequired, "one of --space or --random is required");
  if (!source.path.empty()) {
    try {
      ExactMetricSpace exact = load_space(source.path, LoadOptions{validate_file});
      MetricSpace floating = to_floating(exact);
      return {std::move(exact), std::move(floating), source.path};
    } catch (const SpaceValidationError& e) {
      throw InputError(e.what());
    } catch (const ParseError& e) {
      throw InputError(e.what());
    }
  }
  const auto parts = split(source.random, ',');
  if (parts.size() != 2) throw UsageError(kExitMalformedValue, "--random expects P,MODE, got '" + source.random + "'");
  const std::size_t points = parse_count(parts[0], "--random point count");
  if (points == 0) throw UsageError(kExitMalformedValue, "--random needs at least one point");
  RandomMode mode;
  try {
    mode = parse_random_mode(parts[1]);
  } catch (const std::exception& e) {
    throw UsageError(kExitMalformedValue, std::string("--random: ") + e.what());
  }
  return {std::nullopt, random_space(seed, points, mode), "random:" + parts[0] + ":" + to_string(mode)};
}

struct SeedOption {
  std::optional<std::uint64_t> value;

  void add_to(CLI::App* app) { app->add_option("--seed", value, "Seed; generated and echoed when omitted"); }

  std::uint64_t resolve(std::ostream& out) {
    if (!value) {
      std::random_device device;
      value = (static_cast<std::uint64_t>(device()) << 32) ^ device();
      out << "# seed=" << *value << " (generated)\n";
    }
    return *value;
  }
};

template <class T>
std::string show(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return fmt(v);
  } else {
    return to_string(v);
  }
}

// validate

struct ValidateArgs {
  SpaceSource source;
  SeedOption seed;
  std::size_t sampled = 1'000'000;
};

template <class T>
int report_validation(const BasicMetricSpace<T>& space, std::uint64_t seed, std::size_t sampled, std::ostream& out) {
  ValidateOptions options = default_validate_options<T>();
  options.seed = seed;
  options.sampled_triples = sampled;
  const ValidationReport r = validate(space, options);
  out << "ok=" << (r.ok ? "true" : "false") << " points=" << space.size() << " triples_checked=" << r.triples_checked
      << " exhaustive=" << (r.exhaustive_triples ? "true" : "false") << " violations=" << r.violation_count << "\n";
  for (std::size_t k = 0; k < std::min<std::size_t>(r.violations.size(), 10); ++k) {
    const Violation& v = r.violations[k];
    out << "violation kind=" << to_string(v.kind) << " i=" << v.witness[0] << " j=" << v.witness[1]
        << " k=" << v.witness[2] << " magnitude=" << fmt(v.magnitude) << "\n";
  }
  return r.ok ? kExitOk : kExitInputError;
}

int run_validate(ValidateArgs& a, std::ostream& out) {
  const std::uint64_t seed = a.seed.resolve(out);
  LoadedSpace s = load_source(a.source, seed, false);
  out << "# validate space=" << s.scenario << " points=" << s.floating.size() << " seed=" << seed << "\n";
  return s.exact ? report_validation(*s.exact, seed, a.sampled, out) : report_validation(s.floating, seed, a.sampled, out);
}

// cost

struct CostArgs {
  SpaceSource source;
  SeedOption seed;
};

template <class T>
void print_costs(const BasicMetricSpace<T>& space, std::ostream& out) {
  out << "point,mass,social_cost\n";
  for (PointIndex i = 0; i < space.size(); ++i)
    out << i << "," << show(space.mass(i)) << "," << show(social_cost(space, i)) << "\n";
  const PointIndex m = one_median(space);
  out << "median=" << m << " cost=" << show(social_cost(space, m)) << "\n";
}

int run_cost(CostArgs& a, std::ostream& out) {
  const std::uint64_t seed = a.seed.resolve(out);
  LoadedSpace s = load_source(a.source, seed);
  out << "# cost space=" << s.scenario << " points=" << s.floating.size() << " seed=" << seed << "\n";
  if (s.exact) {
    print_costs(*s.exact, out);
  } else {
    print_costs(s.floating, out);
  }
  return kExitOk;
}

// election

struct ElectionArgs {
  SpaceSource source;
  SeedOption seed;
  std::string family;
  std::string candidates;
  std::optional<std::size_t> n;
  std::string rankings_path;
};

template <class T>
void print_outcome(const BasicMetricSpace<T>& space, const CandidateSlate& slate, const ScoringVector& vector,
                   const std::string& rankings_path, std::ostream& out) {
  const auto o = run_election(space, slate, vector, rankings_path.empty() ? KeepRankings::No : KeepRankings::Yes);
  out << "candidate,location,score,cost\n";
  for (CandidateIndex c = 0; c < slate.size(); ++c)
    out << c << "," << slate.locations[c] << "," << show(o.scores[c]) << "," << show(o.costs[c]) << "\n";
  out << "winner=" << o.winner << " optimum=" << o.optimum << " winner_cost=" << show(o.winner_cost)
      << " optimum_cost=" << show(o.optimum_cost)
      << " distortion=" << (o.distortion.infinite ? std::string("inf") : show(o.distortion.value)) << "\n";
  if (!rankings_path.empty()) {
    auto file = open_output(rankings_path);
    file << "location";
    for (std::size_t k = 0; k < slate.size(); ++k) file << ",rank_" << k;
    file << "\n";
    for (PointIndex w = 0; w < o.rankings.size(); ++w) {
      file << w;
      for (CandidateIndex c : o.rankings[w]) file << "," << c;
      file << "\n";
    }
  }
}

int run_election_cmd(ElectionArgs& a, std::ostream& out) {
  const RuleFamily family = parse_family(a.family);
  if (a.candidates.empty() == !a.n)
    throw UsageError(a.n ? kExitMalformedValue : kExitMissingRequired, "give exactly one of --candidates or --n");
  const bool sampled = a.n.has_value();
  const std::uint64_t seed = (sampled || !a.source.random.empty()) ? a.seed.resolve(out) : a.seed.value.value_or(0);
  LoadedSpace s = load_source(a.source, seed);

  CandidateSlate slate;
  if (sampled) {
    if (*a.n == 0) throw UsageError(kExitMalformedValue, "--n must be positive");
    slate = sample_candidates(s.floating, *a.n, seed, 0);
  } else {
    for (const auto& part : split(a.candidates, ',')) slate.locations.push_back(parse_count(part, "--candidates entry"));
    if (slate.locations.empty()) throw UsageError(kExitMalformedValue, "--candidates is empty");
    for (PointIndex loc : slate.locations)
      if (loc >= s.floating.size())
        throw InputError("candidate location " + std::to_string(loc) + " outside the space of " +
                         std::to_string(s.floating.size()) + " points");
  }
  const ScoringVector vector = score_vector(family, slate.size());
  out << "# election family=" << family.name() << " n=" << slate.size() << " seed=" << seed
      << " space=" << s.scenario << "\n";
  if (s.exact) {
    print_outcome(*s.exact, slate, vector, a.rankings_path, out);
  } else {
    print_outcome(s.floating, slate, vector, a.rankings_path, out);
  }
  return kExitOk;
}

// estimate

struct EstimateArgs {
  SpaceSource source;
  SeedOption seed;
  std::string family;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::size_t jobs = 0;
  std::string histogram_path;
  std::size_t bins = 20;
  std::optional<std::string> probe_z;
  std::string probe_path;
};

void write_histogram(const TrialBatch& batch, std::size_t bins, std::ostream& file) {
  double hi = 1.0;
  for (const auto& r : batch.records)
    if (!r.infinite) hi = std::max(hi, r.distortion);
  std::vector<std::size_t> counts(bins, 0);
  const double width = (hi - 1.0) / static_cast<double>(bins);
  for (const auto& r : batch.records) {
    if (r.infinite) continue;
    std::size_t b = width > 0 ? static_cast<std::size_t>((r.distortion - 1.0) / width) : 0;
    counts[std::min(b, bins - 1)]++;
  }
  file << "bin_low,bin_high,count\n";
  for (std::size_t b = 0; b < bins; ++b)
    file << fmt(1.0 + width * static_cast<double>(b)) << "," << fmt(1.0 + width * static_cast<double>(b + 1)) << ","
         << counts[b] << "\n";
}

void write_probe(const SufficiencyCheck& check, std::ostream& file) {
  file << "r,outside_mass,event_bound,event_rate,event_stderr,winner_outside,winner_outside_without_event\n";
  const double t = static_cast<double>(check.trials);
  for (const auto& row : check.rows) {
    const double rate = static_cast<double>(row.event_count) / t;
    file << fmt(row.r) << "," << fmt(row.outside_mass) << "," << fmt(row.event_bound) << "," << fmt(rate) << ","
         << fmt(std::sqrt(rate * (1.0 - rate) / t)) << "," << row.winner_outside << ","
         << row.winner_outside_without_event << "\n";
  }
}

int run_estimate(EstimateArgs& a, std::ostream& out) {
  const RuleFamily family = parse_family(a.family);
  if (a.n == 0) throw UsageError(kExitMalformedValue, "--n must be positive");
  if (a.trials == 0) throw UsageError(kExitMalformedValue, "--trials must be positive");
  if (a.bins == 0) throw UsageError(kExitMalformedValue, "--bins must be positive");
  std::optional<double> probe_z;
  if (a.probe_z) {
    probe_z = to_double(parse_exact(*a.probe_z, "--probe-z"));
    if (!(*probe_z > 0.5 && *probe_z < 1.0)) throw UsageError(kExitMalformedValue, "--probe-z must lie in (1/2, 1)");
  }
  const std::uint64_t seed = a.seed.resolve(out);
  LoadedSpace s = load_source(a.source, seed);
  const std::size_t jobs = a.jobs ? a.jobs : default_jobs();

  out << "# estimate family=" << family.name() << " n=" << a.n << " trials=" << a.trials << " seed=" << seed
      << " space=" << s.scenario << "\n";
  const TrialBatch batch = run_trials(s.floating, family, a.n, seed, 0, a.trials, jobs);
  const Estimate e = summarize(batch, s.floating);
  out << "scenario,n,trials,mean,stderr,ci95_low,ci95_high,max,infinite_count\n";
  out << s.scenario << "," << a.n << "," << a.trials << "," << fmt(e.mean) << "," << fmt(e.standard_error) << ","
      << fmt(e.ci95_low) << "," << fmt(e.ci95_high) << "," << fmt(e.max_observed) << "," << e.infinite_count << "\n";

  if (!a.histogram_path.empty()) {
    auto file = open_output(a.histogram_path);
    write_histogram(batch, a.bins, file);
  }
  if (probe_z) {
    const SufficiencyCheck check = sufficiency_probe(s.floating, family, a.n, a.trials, seed, *probe_z, jobs);
    std::ostringstream probe;
    probe << "# probe z=" << fmt(check.z) << " y_tilde=" << fmt(check.y_tilde) << " r_tilde=" << fmt(check.r_tilde)
          << " median=" << check.median << "\n";
    write_probe(check, probe);
    if (a.probe_path.empty()) {
      out << probe.str();
    } else {
      auto file = open_output(a.probe_path);
      file << probe.str();
    }
  }
  return kExitOk;
}

// scan / classify

struct ScanArgs {
  std::string family;
  std::size_t n_min = 4;
  std::size_t n_max = kDefaultHorizon;
  std::string y_grid;
  std::string csv_path;
};

int run_scan(ScanArgs& a, std::ostream& out) {
  const RuleFamily family = parse_family(a.family);
  std::vector<Rational> grid = default_y_grid();
  if (!a.y_grid.empty()) {
    grid.clear();
    for (const auto& part : split(a.y_grid, ',')) grid.push_back(parse_exact(part, "--y-grid entry"));
  }
  for (const auto& y : grid)
    if (y <= 0 || y >= 1) throw UsageError(kExitMalformedValue, "--y-grid entries must lie in (0,1)");
  if (a.n_min < 2 || a.n_max < a.n_min) throw UsageError(kExitMalformedValue, "need 2 <= --n-min <= --n-max");

  out << "# scan family=" << family.name() << " n_min=" << a.n_min << " n_max=" << a.n_max << " horizon=" << a.n_max
      << " y_grid=";
  for (std::size_t k = 0; k < grid.size(); ++k) out << (k ? "," : "") << to_string(grid[k]);
  out << "\n";

  const ConditionReport r = scan(family, grid, a.n_min, a.n_max);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out << "# y=" << to_string(grid[k]) << " holding_from="
        << (r.holding_from[k] ? std::to_string(*r.holding_from[k]) : std::string("none")) << "\n";
  }
  out << "verdict=" << to_string(r.verdict) << " family=" << family.name()
      << " y=" << (r.certified_y ? to_string(*r.certified_y) : std::string("-"))
      << " n0=" << (r.certified_y ? std::to_string(r.certified_n0) : std::string("-")) << " horizon=" << a.n_max
      << "\n";

  if (!a.csv_path.empty()) {
    auto file = open_output(a.csv_path);
    file << "family,y_num,y_den,n,lhs,rhs,holds\n";
    for (const auto& c : r.cells)
      file << r.family << "," << c.y.get_num().get_str() << "," << c.y.get_den().get_str() << "," << c.n << ","
           << to_string(c.sides.lhs) << "," << to_string(c.sides.rhs) << "," << (c.sides.holds() ? 1 : 0) << "\n";
  }
  return kExitOk;
}

struct ClassifyArgs {
  std::string family;
};

int run_classify(ClassifyArgs& a, std::ostream& out) {
  const RuleFamily family = parse_family(a.family);
  out << "# classify family=" << family.name() << "\n";
  out << "# limit";
  for (int k = 1; k <= 7; ++k) {
    const LimitValue f = limit_value(family, ratio(k, 8));
    out << " f(" << k << "/8)=" << (f ? to_string(*f) : std::string("undefined"));
  }
  out << "\n";
  out << "classification=" << to_string(classify_by_limit(family)) << " family=" << family.name() << "\n";
  return kExitOk;
}

// adversarial

struct AdversarialArgs {
  std::string rho = "5/4";
  std::string family = "plurality";
  std::size_t trials = 200;
  SeedOption seed;
  std::optional<std::size_t> n;
  std::optional<std::size_t> big_n;
  std::size_t m_atoms = kDefaultFAtoms;
  std::size_t jobs = 0;
  std::string csv_path;
  std::size_t audit = 0;
};

int run_adversarial(AdversarialArgs& a, std::ostream& out, std::ostream& err) {
  const RuleFamily family = parse_family(a.family);
  const double rho = to_double(parse_exact(a.rho, "--rho"));
  if (a.trials == 0) throw UsageError(kExitMalformedValue, "--trials must be positive");
  AdversarialParams params;
  try {
    params = solve_parameters(rho, a.n, a.big_n, a.m_atoms);
  } catch (const std::invalid_argument& e) {
    throw UsageError(kExitMalformedValue, e.what());
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  const std::uint64_t seed = a.seed.resolve(out);
  const std::size_t jobs = a.jobs ? a.jobs : default_jobs();

  out << "# adversarial family=" << family.name() << " n=" << params.n << " trials=" << a.trials << " seed=" << seed
      << " rho=" << fmt(params.rho) << " beta=" << fmt(params.beta) << " D=" << fmt(params.D)
      << " mu=" << fmt(params.mu) << " n0=" << params.n0 << " N=" << params.N << " M=" << params.M
      << " eps=" << fmt(params.eps) << "\n";

  const AdversarialInstance instance(params, seed);
  const ExperimentReport r = run_experiment(instance, family, params.n, a.trials, seed, jobs);
  if (r.warning) {
    out << "# warning: " << *r.warning << "\n";
    err << "warning: " << *r.warning << "\n";
  }

  std::ostringstream csv;
  csv << "trial,E,winner_cluster,distortion\n";
  for (const auto& t : r.trials)
    csv << t.trial << "," << (t.event.E ? 1 : 0) << "," << to_string(t.winner_cluster) << ","
        << (t.infinite ? std::string("inf") : fmt(t.distortion)) << "\n";
  if (a.csv_path.empty()) {
    out << csv.str();
  } else {
    auto file = open_output(a.csv_path);
    file << csv.str();
  }

  std::size_t audit_failures = 0;
  if (a.audit > 0) {
    const CandidateSampler sampler(instance.space());
    for (std::size_t t = 0; t < std::min(a.audit, a.trials); ++t) {
      const InstanceAudit audit = audit_instance(instance, sampler.slate(params.n, seed, t), 2048, seed);
      audit_failures += !audit.ok();
    }
    out << "# audit trials=" << std::min(a.audit, a.trials) << " failures=" << audit_failures << "\n";
  }

  out << "summary trials=" << a.trials << " pr_E=" << fmt(r.pr_event) << " pr_E_stderr=" << fmt(r.pr_event_stderr)
      << " pr_F_winner=" << fmt(r.pr_f_winner) << " pr_F_given_E=" << fmt(r.pr_f_given_event)
      << " mean_distortion=" << fmt(r.mean_distortion) << " distortion_stderr=" << fmt(r.distortion_stderr)
      << " mean_distortion_F=" << fmt(r.mean_distortion_f_winner) << " min_distortion_F="
      << fmt(r.min_distortion_f_winner) << " premise_violated=" << (r.premise_violated ? "true" : "false")
      << " cost_bound_failures=" << r.cost_bound_failures << "\n";
  if (r.cost_bound_failures > 0 || audit_failures > 0) {
    err << "invariant violation: " << r.cost_bound_failures << " cost-bound failures, " << audit_failures
        << " audit failures\n";
    return kExitInvariantViolation;
  }
  return kExitOk;
}

// oracle

struct OracleArgs {
  std::size_t trials = 1000;
  SeedOption seed;
};

int run_oracle(OracleArgs& a, std::ostream& out, std::ostream& err) {
  const std::uint64_t seed = a.seed.resolve(out);
  out << "# oracle trials=" << a.trials << " seed=" << seed << "\n";
  const OracleSweep sweep = oracle_sweep(seed, a.trials);
  out << sweep.matches << "/" << sweep.cases << " oracle matches\n";
  if (sweep.matches != sweep.cases) {
    err << "first mismatch: " << sweep.first_mismatch << "\n";
    return kExitInvariantViolation;
  }
  return kExitOk;
}

int parse_error_code(const CLI::ParseError& e) {
  if (dynamic_cast<const CLI::ExtrasError*>(&e)) return kExitUnknownFlag;
  if (dynamic_cast<const CLI::RequiredError*>(&e)) return kExitMissingRequired;
  if (dynamic_cast<const CLI::RequiresError*>(&e)) return kExitMissingRequired;
  return kExitMalformedValue;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Positional voting with representative candidates over finite metric spaces", "repvote"};
  app.require_subcommand(1);

  ValidateArgs validate_args;
  auto* validate_cmd = app.add_subcommand("validate", "Check metric and mass axioms of a space");
  validate_args.source.add_to(validate_cmd);
  validate_args.seed.add_to(validate_cmd);
  validate_cmd->add_option("--sampled-triples", validate_args.sampled, "Triples sampled above 300 points");

  CostArgs cost_args;
  auto* cost_cmd = app.add_subcommand("cost", "Social cost of every point and the 1-median");
  cost_args.source.add_to(cost_cmd);
  cost_args.seed.add_to(cost_cmd);

  ElectionArgs election_args;
  auto* election_cmd = app.add_subcommand("election", "One positional election");
  election_args.source.add_to(election_cmd);
  election_args.seed.add_to(election_cmd);
  election_cmd->add_option("--family", election_args.family, "Scoring family")->required();
  election_cmd->add_option("--candidates", election_args.candidates, "Candidate locations, comma separated");
  election_cmd->add_option("--n", election_args.n, "Sample n candidates from the voter distribution");
  election_cmd->add_option("--rankings", election_args.rankings_path, "Write per-location rankings CSV");

  EstimateArgs estimate_args;
  auto* estimate_cmd = app.add_subcommand("estimate", "Monte Carlo estimate of expected distortion");
  estimate_args.source.add_to(estimate_cmd);
  estimate_args.seed.add_to(estimate_cmd);
  estimate_cmd->add_option("--family", estimate_args.family, "Scoring family")->required();
  estimate_cmd->add_option("--n", estimate_args.n, "Candidates per election")->required();
  estimate_cmd->add_option("--trials", estimate_args.trials, "Trials")->required();
  estimate_cmd->add_option("--jobs", estimate_args.jobs, "Worker threads (default $REPVOTE_JOBS or all cores)");
  estimate_cmd->add_option("--histogram", estimate_args.histogram_path, "Write distortion histogram CSV");
  estimate_cmd->add_option("--bins", estimate_args.bins, "Histogram bins");
  estimate_cmd->add_option("--probe-z", estimate_args.probe_z, "Run the sufficiency probe at z in (1/2,1), decimal or p/q");
  estimate_cmd->add_option("--probe-out", estimate_args.probe_path, "Write probe CSV here instead of stdout");

  ScanArgs scan_args;
  auto* scan_cmd = app.add_subcommand("scan", "Decide the characterization inequality over a grid");
  scan_cmd->add_option("--family", scan_args.family, "Scoring family")->required();
  scan_cmd->add_option("--n-min", scan_args.n_min, "Smallest n");
  scan_cmd->add_option("--n-max", scan_args.n_max, "Horizon");
  scan_cmd->add_option("--y-grid", scan_args.y_grid, "Comma separated y values, e.g. 1/2,3/4");
  scan_cmd->add_option("--csv", scan_args.csv_path, "Write every cell as CSV");

  ClassifyArgs classify_args;
  auto* classify_cmd = app.add_subcommand("classify", "Classify a family by its limit scoring rule");
  classify_cmd->add_option("--family", classify_args.family, "Scoring family")->required();

  AdversarialArgs adv_args;
  auto* adv_cmd = app.add_subcommand("adversarial", "Two-cluster lower-bound experiment");
  adv_cmd->add_option("--rho", adv_args.rho, "Target distortion, decimal or p/q");
  adv_cmd->add_option("--family", adv_args.family, "Scoring family");
  adv_cmd->add_option("--trials", adv_args.trials, "Trials");
  adv_args.seed.add_to(adv_cmd);
  adv_cmd->add_option("--n", adv_args.n, "Candidate count (raised to n0)");
  adv_cmd->add_option("--big-n", adv_args.big_n, "A-cluster atoms (default n^3)");
  adv_cmd->add_option("--m-atoms", adv_args.m_atoms, "F-cluster atoms");
  adv_cmd->add_option("--jobs", adv_args.jobs, "Worker threads (default $REPVOTE_JOBS or all cores)");
  adv_cmd->add_option("--csv", adv_args.csv_path, "Write per-trial CSV here instead of stdout");
  adv_cmd->add_option("--audit", adv_args.audit, "Recheck orderings and cost bounds on the first K trials");

  OracleArgs oracle_args;
  auto* oracle_cmd = app.add_subcommand("oracle", "Compare run_election with the brute-force oracle");
  oracle_cmd->add_option("--trials", oracle_args.trials, "Instances");
  oracle_args.seed.add_to(oracle_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return parse_error_code(e);
  }

  try {
    if (*validate_cmd) return run_validate(validate_args, out);
    if (*cost_cmd) return run_cost(cost_args, out);
    if (*election_cmd) return run_election_cmd(election_args, out);
    if (*estimate_cmd) return run_estimate(estimate_args, out);
    if (*scan_cmd) return run_scan(scan_args, out);
    if (*classify_cmd) return run_classify(classify_args, out);
    if (*adv_cmd) return run_adversarial(adv_args, out, err);
    if (*oracle_cmd) return run_oracle(oracle_args, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return e.code;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitMissingRequired;
}

}  // namespace repvote
