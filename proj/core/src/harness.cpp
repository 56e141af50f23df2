#include "adamfind/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "adamfind/ba_tree.hpp"
#include "adamfind/limit_laws.hpp"
#include "adamfind/packet.hpp"
#include "adamfind/parallel.hpp"
#include "adamfind/rng.hpp"

#ifndef ADAMFIND_BUILD_ID
#define ADAMFIND_BUILD_ID "unknown"
#endif

namespace adamfind {

using json = nlohmann::ordered_json;

namespace {

// Independent draw families inside one experiment.
enum Stream : std::uint64_t {
  kTreeStream = 0,
  kConditionedTreeStream = 1,
  kReferenceStream = 2,
  kLimitDrawStream = 3,
};

std::uint64_t trial_seed(std::uint64_t master, Stream stream, std::uint64_t trial) {
  return derive_seed(derive_seed(master, stream), trial);
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

RunMetadata metadata_for(const ExperimentConfig& config, const Stopwatch& watch) {
  return {config.master_seed, build_id(), watch.seconds()};
}

[[noreturn]] void bad_config(const std::string& field, const std::string& why) {
  throw std::invalid_argument("config field '" + field + "': " + why);
}

void require_epsilon_grid(const ExperimentConfig& c) {
  if (c.epsilon_grid.empty()) bad_config("epsilon_grid", "must not be empty");
  for (std::size_t t = 0; t < c.epsilon_grid.size(); ++t) {
    const double e = c.epsilon_grid[t];
    if (!(e > 0.0 && e < 1.0)) bad_config("epsilon_grid", "values must lie in (0,1)");
    if (t > 0 && !(e < c.epsilon_grid[t - 1])) {
      bad_config("epsilon_grid", "values must be strictly decreasing");
    }
  }
}

double inv_sqrt_pi() { return 1.0 / std::sqrt(std::numbers::pi); }

/// E[D_i(n)] for n >= max(i, 2): the martingale is started at degree 1.
double martingale_mean(std::uint64_t vertex) {
  return inv_sqrt_pi() / alpha_of(std::max<std::uint64_t>(vertex, 2));
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::RootFinding: return "root_finding";
    case ExperimentKind::EpsilonSweep: return "epsilon_sweep";
    case ExperimentKind::LimitLawCheck: return "limit_law_check";
    case ExperimentKind::DeviationCheck: return "deviation_check";
    case ExperimentKind::JointBoundCheck: return "joint_bound_check";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (auto k : {ExperimentKind::RootFinding, ExperimentKind::EpsilonSweep,
                 ExperimentKind::LimitLawCheck, ExperimentKind::DeviationCheck,
                 ExperimentKind::JointBoundCheck}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown experiment kind '" + std::string(name) + "'");
}

std::string build_id() { return ADAMFIND_BUILD_ID; }

void ExperimentConfig::validate() const {
  if (trials < 1) bad_config("trials", "must be >= 1");
  if (thread_count < 1) bad_config("thread_count", "must be >= 1");
  if (!(eta > 0.0 && eta < 0.125)) bad_config("eta", "must lie in (0, 1/8)");
  switch (experiment_kind) {
    case ExperimentKind::RootFinding:
    case ExperimentKind::EpsilonSweep:
      if (n_target < 2) bad_config("n_target", "must be >= 2");
      if (!(checkpoint_ratio > 1.0) || !std::isfinite(checkpoint_ratio)) {
        bad_config("checkpoint_ratio", "must be a finite value > 1");
      }
      require_epsilon_grid(*this);
      if (experiment_kind == ExperimentKind::EpsilonSweep && epsilon_grid.size() < 4) {
        bad_config("epsilon_grid", "a sweep needs at least 4 values");
      }
      break;
    case ExperimentKind::LimitLawCheck:
    case ExperimentKind::DeviationCheck:
      if (n_target < 3) bad_config("n_target", "must be >= 3");
      if (vertices.empty()) bad_config("vertices", "must not be empty");
      for (auto v : vertices) {
        if (v < 1 || v > n_target) bad_config("vertices", "labels must lie in [1, n_target]");
      }
      if (experiment_kind == ExperimentKind::DeviationCheck) {
        if (levels.empty()) bad_config("levels", "must not be empty");
        for (std::size_t t = 0; t < levels.size(); ++t) {
          if (!(levels[t] > 0.0)) bad_config("levels", "must be positive");
          if (t > 0 && !(levels[t] > levels[t - 1])) bad_config("levels", "must be increasing");
        }
      } else if (reference_draws < 1) {
        bad_config("reference_draws", "must be >= 1");
      }
      break;
    case ExperimentKind::JointBoundCheck:
      require_epsilon_grid(*this);
      break;
  }
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.experiment_kind = kind;
  switch (kind) {
    case ExperimentKind::RootFinding:
      c.n_target = 100000;
      c.trials = 400;
      c.epsilon_grid = {0.1, 0.05, 0.025, 0.0125};
      break;
    case ExperimentKind::EpsilonSweep:
      c.n_target = 1000000;
      c.trials = 200;
      for (int p = 3; p <= 8; ++p) c.epsilon_grid.push_back(std::ldexp(1.0, -p));
      break;
    case ExperimentKind::LimitLawCheck:
      c.n_target = 100000;
      c.trials = 10000;
      c.vertices = {1, 10, 100};
      break;
    case ExperimentKind::DeviationCheck:
      c.n_target = 100000;
      c.trials = 1000;
      c.vertices = {1, 4, 16, 64};
      c.levels = {8, 12, 18, 27};
      break;
    case ExperimentKind::JointBoundCheck:
      c.trials = 1000000;
      c.epsilon_grid = {0.2, 0.1};
      break;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Root finding

namespace {

struct TrialPacketSummary {
  std::vector<std::uint64_t> running_max;
  std::vector<std::uint64_t> final_size;
  std::vector<std::uint8_t> root_always_in;
};

}  // namespace

ResultTable run_root_finding(const ExperimentConfig& config) {
  config.validate();
  const Stopwatch watch;
  const auto& grid = config.epsilon_grid;
  const auto per_trial = parallel_map<TrialPacketSummary>(
      config.trials, config.thread_count, [&](std::uint64_t t) {
        const auto records = packet_trajectories(config.n_target, grid, config.checkpoint_ratio,
                                                 trial_seed(config.master_seed, kTreeStream, t));
        TrialPacketSummary s;
        for (const auto& r : records) {
          s.running_max.push_back(r.running_max_size);
          s.final_size.push_back(r.final_size());
          s.root_always_in.push_back(r.root_always_in);
        }
        return s;
      });

  ResultTable table;
  for (std::size_t e = 0; e < grid.size(); ++e) {
    RootFindingRow row;
    row.epsilon = grid[e];
    row.trials = config.trials;
    row.size_bound = std::pow(grid[e], -1.0 - config.eta);
    std::uint64_t successes = 0, within = 0, joint = 0;
    std::vector<double> maxima, finals;
    maxima.reserve(config.trials);
    finals.reserve(config.trials);
    for (const auto& s : per_trial) {
      const bool ok = s.root_always_in[e] != 0;
      const bool small = static_cast<double>(s.running_max[e]) <= row.size_bound;
      successes += ok;
      within += small;
      joint += ok && small;
      maxima.push_back(static_cast<double>(s.running_max[e]));
      finals.push_back(static_cast<double>(s.final_size[e]));
    }
    row.success = proportion_estimate(successes, config.trials);
    row.failures = config.trials - successes;
    row.mean_size = mean_estimate(finals);
    row.mean_running_max = mean_estimate(maxima);
    row.within_size_bound = proportion_estimate(within, config.trials);
    row.joint_event = proportion_estimate(joint, config.trials);
    std::sort(maxima.begin(), maxima.end());
    row.max_size_p50 = quantile_sorted(maxima, 0.50);
    row.max_size_p90 = quantile_sorted(maxima, 0.90);
    row.max_size_p99 = quantile_sorted(maxima, 0.99);
    table.rows.push_back(row);
  }
  table.metadata = metadata_for(config, watch);
  return table;
}

SweepReport run_epsilon_sweep(const ExperimentConfig& config) {
  config.validate();
  if (config.epsilon_grid.size() < 4) {
    throw std::invalid_argument("epsilon sweep needs at least 4 grid values");
  }
  auto run_config = config;
  run_config.experiment_kind = ExperimentKind::RootFinding;
  SweepReport report{run_root_finding(run_config), {}, std::nullopt};

  std::vector<double> x, y, fx, fy;
  for (const auto& row : report.table.rows) {
    x.push_back(std::log(1.0 / row.epsilon));
    y.push_back(std::log(row.mean_running_max.value));
    if (row.failures > 0) {
      fx.push_back(std::log(row.epsilon));
      fy.push_back(std::log(static_cast<double>(row.failures) / static_cast<double>(row.trials)));
    }
  }
  report.size_fit = ols_fit(x, y);
  if (fx.size() >= 2) report.failure_fit = ols_fit(fx, fy);
  return report;
}

// ---------------------------------------------------------------------------
// Limit laws

namespace {

struct DegreeSnapshot {
  std::vector<double> values;
};

LimitLawRow compare_to_reference(std::string label, std::uint64_t vertex, std::string condition,
                                 std::vector<double> empirical, std::vector<double> reference,
                                 double reference_mean) {
  LimitLawRow row;
  row.label = std::move(label);
  row.vertex = vertex;
  row.condition = std::move(condition);
  row.trials = empirical.size();
  row.reference_draws = reference.size();
  row.empirical_mean = mean_estimate(empirical);
  row.reference_mean = reference_mean;
  row.mean_z = row.empirical_mean.stderr_ > 0
                   ? std::abs(row.empirical_mean.value - reference_mean) / row.empirical_mean.stderr_
                   : 0.0;
  row.ks_critical = ks_two_sample_critical(empirical.size(), reference.size(), 0.01);
  if (empirical.size() < 1000) {
    row.warning = "trials too small for KS resolution (critical value " +
                  format_double(row.ks_critical) + ")";
  }
  row.ks = ks_two_sample(std::move(empirical), std::move(reference));
  return row;
}

}  // namespace

LimitLawReport run_limit_law_check(const ExperimentConfig& config) {
  config.validate();
  const Stopwatch watch;
  const auto& vertices = config.vertices;

  // Unconditional trees: D_i(n) for each configured i.
  const auto plain = parallel_map<DegreeSnapshot>(
      config.trials, config.thread_count, [&](std::uint64_t t) {
        const auto tree = GrowingTree::grow(config.n_target,
                                            trial_seed(config.master_seed, kTreeStream, t));
        const double scale = tree.alpha() * std::sqrt(std::numbers::pi);
        DegreeSnapshot s;
        for (auto v : vertices) s.values.push_back(tree.degree(static_cast<VertexId>(v)) / scale);
        return s;
      });

  // Trees conditioned on vertex 3 attaching to vertex 2: (D_1(n), D_2(n)).
  const auto conditioned = parallel_map<DegreeSnapshot>(
      config.trials, config.thread_count, [&](std::uint64_t t) {
        const auto tree = GrowingTree::grow_conditioned(
            config.n_target, trial_seed(config.master_seed, kConditionedTreeStream, t), 2);
        const double scale = tree.alpha() * std::sqrt(std::numbers::pi);
        return DegreeSnapshot{{tree.degree(1) / scale, tree.degree(2) / scale}};
      });

  LimitLawReport report;
  Rng ref(trial_seed(config.master_seed, kReferenceStream, 0));
  const auto draws = config.reference_draws;

  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const std::uint64_t v = vertices[k];
    const ConditionalLimitParams params{std::max<std::uint64_t>(v, 2), 1};
    std::vector<double> empirical;
    empirical.reserve(plain.size());
    for (const auto& s : plain) empirical.push_back(s.values[k]);
    std::vector<double> reference(draws);
    for (auto& r : reference) r = sample_limit_degree_conditional(params, ref);
    report.rows.push_back(compare_to_reference("D" + std::to_string(v) + " vs conditional law",
                                               v, "none", std::move(empirical),
                                               std::move(reference), martingale_mean(v)));
  }

  std::vector<double> d1, d2, ref1, ref2;
  for (const auto& s : conditioned) {
    d1.push_back(s.values[0]);
    d2.push_back(s.values[1]);
  }
  ref1.reserve(draws);
  ref2.reserve(draws);
  for (std::uint64_t r = 0; r < draws; ++r) {
    const auto s = sample_adam_eve_limit(ref);
    ref1.push_back(s.d1);
    ref2.push_back(s.d2);
  }
  // Means of the joint law: E[B1 B2 Z3] = (1/3)(3/4)E[Z3], E[Z3] = Γ(3)/Γ(5/2).
  const double ez3 = 2.0 / std::tgamma(2.5);
  report.rows.push_back(compare_to_reference("D1 vs Adam-Eve law", 1, "3~2", std::move(d1),
                                             std::move(ref1), 0.25 * ez3));
  report.rows.push_back(compare_to_reference("D2 vs Adam-Eve law", 2, "3~2", std::move(d2),
                                             std::move(ref2), 0.5 * ez3));
  report.metadata = metadata_for(config, watch);
  return report;
}

// ---------------------------------------------------------------------------
// Deviations

DeviationReport run_deviation_check(const ExperimentConfig& config) {
  config.validate();
  const Stopwatch watch;
  const auto& vertices = config.vertices;
  std::vector<std::int64_t> slot(config.n_target + 1, -1);
  for (std::size_t k = 0; k < vertices.size(); ++k) slot[vertices[k]] = static_cast<std::int64_t>(k);
  const double sqrt_pi = std::sqrt(std::numbers::pi);

  const auto sups = parallel_map<std::vector<double>>(
      config.trials, config.thread_count, [&](std::uint64_t t) {
        std::vector<double> sup(vertices.size(), 0.0);
        GrowingTree tree(trial_seed(config.master_seed, kTreeStream, t));
        tree.reserve(config.n_target);
        tree.grow_to(2);
        const double d0 = 1.0 / sqrt_pi;  // D_1(2) = D_2(2)
        if (slot[1] >= 0) sup[slot[1]] = d0;
        if (slot[2] >= 0) sup[slot[2]] = d0;
        while (tree.size() < config.n_target) {
          const VertexId u = tree.attach_step();
          const VertexId born = tree.size();
          const double scale = tree.alpha() * sqrt_pi;
          if (slot[born] >= 0) sup[slot[born]] = 1.0 / scale;
          if (slot[u] >= 0) sup[slot[u]] = std::max(sup[slot[u]], tree.degree(u) / scale);
        }
        return sup;
      });

  DeviationReport report;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const std::uint64_t v = vertices[k];
    DeviationVerdict verdict;
    verdict.vertex = v;
    std::vector<double> xs, ys;
    double previous_tail = std::numeric_limits<double>::infinity();
    for (double level : config.levels) {
      DeviationRow row;
      row.vertex = v;
      row.level = level;
      row.threshold = level / std::sqrt(static_cast<double>(v));
      row.trials = config.trials;
      for (const auto& s : sups) row.events += s[k] >= row.threshold;
      row.tail = proportion_estimate(row.events, row.trials);
      row.censored = row.events == 0;
      row.neg_log_tail =
          row.censored ? std::numeric_limits<double>::quiet_NaN() : std::log(1.0 / row.tail.value);
      if (row.tail.value > previous_tail) verdict.monotone = false;
      previous_tail = row.tail.value;
      if (!row.censored) {
        xs.push_back(std::pow(level, 2.0 / 3.0));
        ys.push_back(row.neg_log_tail);
      }
      report.rows.push_back(row);
    }
    verdict.uncensored = xs.size();
    verdict.spearman = xs.size() >= 2 ? spearman(xs, ys) : std::numeric_limits<double>::quiet_NaN();
    report.verdicts.push_back(verdict);
  }
  report.metadata = metadata_for(config, watch);
  return report;
}

// ---------------------------------------------------------------------------
// Tail bounds

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::AdamEveJoint: return "adam_eve_joint";
    case BoundKind::AdamAlone: return "adam_alone";
    case BoundKind::EveAdamJoint: return "eve_adam_joint";
    case BoundKind::EveAlone: return "eve_alone";
  }
  return "?";
}

double BoundSpec::exponent() const {
  switch (kind) {
    case BoundKind::AdamEveJoint: return a + 2.0 * b;
    case BoundKind::AdamAlone: return a;
    case BoundKind::EveAdamJoint: return 2.0 * a + b;
    case BoundKind::EveAlone: return 2.0 * a;
  }
  return 0.0;
}

std::pair<double, double> BoundSpec::thresholds(double eps) const {
  switch (kind) {
    case BoundKind::AdamEveJoint: return {std::pow(eps, a), std::pow(eps, b)};
    case BoundKind::AdamAlone: return {std::pow(eps, a), kNoThreshold};
    case BoundKind::EveAdamJoint: return {std::pow(eps, b), std::pow(eps, a)};
    case BoundKind::EveAlone: return {kNoThreshold, std::pow(eps, a)};
  }
  return {kNoThreshold, kNoThreshold};
}

std::vector<BoundSpec> default_bound_specs() {
  return {{BoundKind::AdamEveJoint, 1.0, 0.5},
          {BoundKind::EveAdamJoint, 1.0, 0.5},
          {BoundKind::AdamAlone, 1.0, 0.0},
          {BoundKind::EveAlone, 0.5, 0.5}};
}

BoundReport run_joint_bound_check(const ExperimentConfig& config,
                                  const std::vector<BoundSpec>& specs) {
  config.validate();
  const Stopwatch watch;
  const auto& grid = config.epsilon_grid;

  // Chunked so each worker owns one RNG stream; chunk layout is fixed by the
  // draw count, not the thread count.
  constexpr std::uint64_t kChunk = 1u << 16;
  const std::uint64_t chunks = (config.trials + kChunk - 1) / kChunk;
  std::vector<std::pair<double, double>> cuts;
  for (const auto& spec : specs) {
    for (double eps : grid) cuts.push_back(spec.thresholds(eps));
  }
  const auto counts = parallel_map<std::vector<std::uint64_t>>(
      chunks, config.thread_count, [&](std::uint64_t c) {
        Rng rng(trial_seed(config.master_seed, kLimitDrawStream, c));
        const std::uint64_t begin = c * kChunk;
        const std::uint64_t end = std::min(config.trials, begin + kChunk);
        std::vector<std::uint64_t> hits(cuts.size(), 0);
        for (std::uint64_t d = begin; d < end; ++d) {
          const auto s = sample_adam_eve_limit(rng);
          for (std::size_t q = 0; q < cuts.size(); ++q) {
            hits[q] += s.d1 <= cuts[q].first && s.d2 <= cuts[q].second;
          }
        }
        return hits;
      });

  BoundReport report;
  report.draws = config.trials;
  std::size_t q = 0;
  for (const auto& spec : specs) {
    for (double eps : grid) {
      BoundRow row;
      row.spec = spec;
      row.epsilon = eps;
      for (const auto& h : counts) row.events += h[q];
      row.monte_carlo = proportion_estimate(row.events, config.trials);
      const auto [t1, t2] = cuts[q];
      row.quadrature = adam_eve_joint_cdf(t1, t2);
      row.eps_power = std::pow(eps, spec.exponent());
      row.ratio_quadrature = row.quadrature / row.eps_power;
      row.ratio_monte_carlo = row.monte_carlo.value / row.eps_power;
      // MC standard error, or the one implied by the quadrature value when no
      // event was observed.
      double se = row.monte_carlo.stderr_;
      if (se == 0.0) {
        se = std::sqrt(row.quadrature * (1.0 - row.quadrature) / static_cast<double>(config.trials));
      }
      row.z = se > 0.0 ? std::abs(row.monte_carlo.value - row.quadrature) / se : 0.0;
      report.rows.push_back(row);
      ++q;
    }
  }

  for (std::size_t r = 0; r + 1 < report.rows.size(); ++r) {
    const auto& big = report.rows[r];
    const auto& small = report.rows[r + 1];
    if (big.spec.kind != small.spec.kind || big.spec.a != small.spec.a ||
        big.spec.b != small.spec.b) {
      continue;
    }
    if (std::abs(small.epsilon * 2.0 - big.epsilon) > 1e-12 * big.epsilon) continue;
    report.stability.push_back({big.spec, big.epsilon,
                                small.ratio_quadrature / big.ratio_quadrature,
                                small.ratio_monte_carlo / big.ratio_monte_carlo});
  }
  report.metadata = metadata_for(config, watch);
  return report;
}

// ---------------------------------------------------------------------------

std::vector<Estimate> estimate_root_membership(std::uint64_t n, const std::vector<double>& epsilons,
                                               std::uint64_t trials, std::uint64_t master_seed,
                                               unsigned thread_count) {
  if (n < 2) throw std::invalid_argument("estimate_root_membership: n must be >= 2");
  if (trials < 1) throw std::invalid_argument("estimate_root_membership: trials must be >= 1");
  constexpr std::uint64_t kChunk = 1u << 14;
  const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
  const auto counts = parallel_map<std::vector<std::uint64_t>>(
      chunks, thread_count, [&](std::uint64_t c) {
        std::vector<std::uint64_t> hits(epsilons.size(), 0);
        const std::uint64_t end = std::min(trials, (c + 1) * kChunk);
        for (std::uint64_t t = c * kChunk; t < end; ++t) {
          const auto tree = GrowingTree::grow(n, trial_seed(master_seed, kTreeStream, t));
          const auto best = best_incident_scores(tree);
          for (std::size_t e = 0; e < epsilons.size(); ++e) {
            hits[e] += best[1] > score_cutoff(tree.alpha(), epsilons[e]);
          }
        }
        return hits;
      });
  std::vector<Estimate> out;
  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    std::uint64_t total = 0;
    for (const auto& h : counts) total += h[e];
    out.push_back(proportion_estimate(total, trials));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Output

std::string json_path_for(const std::string& csv_path) {
  constexpr std::string_view ext = ".csv";
  if (csv_path.size() > ext.size() && csv_path.ends_with(ext)) {
    return csv_path.substr(0, csv_path.size() - ext.size()) + ".json";
  }
  return csv_path + ".json";
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

namespace {

class CsvRow {
 public:
  explicit CsvRow(std::ostream& out) : out_(out) {}
  ~CsvRow() { out_ << "\r\n"; }

  CsvRow& operator<<(std::string_view s) { return put(csv_field(s)); }
  CsvRow& operator<<(const char* s) { return put(csv_field(s)); }
  CsvRow& operator<<(const std::string& s) { return put(csv_field(s)); }
  CsvRow& operator<<(double v) { return put(format_double(v)); }
  CsvRow& operator<<(std::uint64_t v) { return put(std::to_string(v)); }
  CsvRow& operator<<(bool v) { return put(v ? "true" : "false"); }

 private:
  CsvRow& put(const std::string& s) {
    if (!first_) out_ << ',';
    first_ = false;
    out_ << s;
    return *this;
  }
  std::ostream& out_;
  bool first_ = true;
};

void header(std::ostream& out, std::initializer_list<const char*> names) {
  CsvRow row(out);
  for (const char* n : names) row << n;
}

// JSON cannot carry NaN/inf; they become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json estimate_json(const Estimate& e) { return {{"value", num(e.value)}, {"stderr", num(e.stderr_)}}; }

json fit_json(const LinearFit& f) {
  return {{"slope", num(f.slope)},       {"intercept", num(f.intercept)},
          {"slope_stderr", num(f.slope_stderr)}, {"slope_ci95_lo", num(f.slope_lo)},
          {"slope_ci95_hi", num(f.slope_hi)},    {"points", f.points}};
}

json metadata_json(const RunMetadata& m, bool include_timing) {
  json j = {{"master_seed", m.master_seed}, {"build_id", m.build_id}};
  if (include_timing) j["wall_seconds"] = m.wall_seconds;
  return j;
}

json config_json(const ExperimentConfig& c) {
  json j = {{"experiment_kind", to_string(c.experiment_kind)},
            {"n_target", c.n_target},
            {"trials", c.trials},
            {"epsilon_grid", c.epsilon_grid},
            {"eta", c.eta},
            {"checkpoint_ratio", c.checkpoint_ratio},
            {"master_seed", c.master_seed},
            {"thread_count", c.thread_count},
            {"output_path", c.output_path}};
  if (!c.vertices.empty()) j["vertices"] = c.vertices;
  if (!c.levels.empty()) j["levels"] = c.levels;
  if (c.experiment_kind == ExperimentKind::LimitLawCheck) j["reference_draws"] = c.reference_draws;
  return j;
}

json rows_json(const ResultTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"epsilon", r.epsilon},
                    {"trials", r.trials},
                    {"success_rate", estimate_json(r.success)},
                    {"failures", r.failures},
                    {"mean_size", estimate_json(r.mean_size)},
                    {"max_size_quantiles",
                     {{"p50", r.max_size_p50}, {"p90", r.max_size_p90}, {"p99", r.max_size_p99}}},
                    {"mean_running_max", estimate_json(r.mean_running_max)},
                    {"size_bound", num(r.size_bound)},
                    {"within_size_bound", estimate_json(r.within_size_bound)},
                    {"joint_event", estimate_json(r.joint_event)}});
  }
  return rows;
}

void write_json_document(const json& doc, std::ostream& out) { out << doc.dump(2) << '\n'; }

template <class Report>
void write_files(const Report& report, const ExperimentConfig& config, bool include_timing,
                 void (*csv)(const Report&, std::ostream&)) {
  if (config.output_path.empty()) return;
  {
    std::ofstream f(config.output_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + config.output_path + "' for writing");
    csv(report, f);
    if (!f) throw std::runtime_error("write failed for '" + config.output_path + "'");
  }
  const auto jpath = json_path_for(config.output_path);
  std::ofstream f(jpath, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + jpath + "' for writing");
  write_json(report, config, f, include_timing);
  if (!f) throw std::runtime_error("write failed for '" + jpath + "'");
}

}  // namespace

void write_csv(const ResultTable& table, std::string_view experiment, std::ostream& out) {
  header(out, {"experiment", "epsilon", "trials", "success_rate", "success_se", "failures",
               "mean_size", "mean_size_se", "max_size_p50", "max_size_p90", "max_size_p99",
               "mean_running_max", "running_max_se", "size_bound", "within_size_bound",
               "within_size_bound_se", "joint_event", "joint_event_se"});
  for (const auto& r : table.rows) {
    CsvRow(out) << experiment << r.epsilon << r.trials << r.success.value << r.success.stderr_
                << r.failures << r.mean_size.value << r.mean_size.stderr_ << r.max_size_p50
                << r.max_size_p90 << r.max_size_p99 << r.mean_running_max.value
                << r.mean_running_max.stderr_ << r.size_bound << r.within_size_bound.value
                << r.within_size_bound.stderr_ << r.joint_event.value << r.joint_event.stderr_;
  }
}

void write_csv(const LimitLawReport& report, std::ostream& out) {
  header(out, {"experiment", "label", "vertex", "condition", "trials", "reference_draws", "ks",
               "ks_critical", "empirical_mean", "empirical_mean_se", "reference_mean", "mean_z",
               "warning"});
  for (const auto& r : report.rows) {
    CsvRow(out) << "limit_law_check" << r.label << r.vertex << r.condition << r.trials
                << r.reference_draws << r.ks << r.ks_critical << r.empirical_mean.value
                << r.empirical_mean.stderr_ << r.reference_mean << r.mean_z << r.warning;
  }
}

void write_csv(const DeviationReport& report, std::ostream& out) {
  header(out, {"experiment", "vertex", "level", "threshold", "trials", "events", "tail", "tail_se",
               "neg_log_tail", "censored"});
  for (const auto& r : report.rows) {
    CsvRow(out) << "deviation_check" << r.vertex << r.level << r.threshold << r.trials << r.events
                << r.tail.value << r.tail.stderr_ << r.neg_log_tail << r.censored;
  }
}

void write_csv(const BoundReport& report, std::ostream& out) {
  header(out, {"experiment", "bound", "a", "b", "epsilon", "exponent", "draws", "events",
               "monte_carlo", "monte_carlo_se", "quadrature", "eps_power", "ratio_quadrature",
               "ratio_monte_carlo", "z"});
  for (const auto& r : report.rows) {
    CsvRow(out) << "joint_bound_check" << to_string(r.spec.kind) << r.spec.a << r.spec.b
                << r.epsilon << r.spec.exponent() << report.draws << r.events
                << r.monte_carlo.value << r.monte_carlo.stderr_ << r.quadrature << r.eps_power
                << r.ratio_quadrature << r.ratio_monte_carlo << r.z;
  }
}

void write_json(const SweepReport& report, const ExperimentConfig& config, std::ostream& out,
                bool include_timing) {
  json doc = {{"experiment", "epsilon_sweep"},
              {"metadata", metadata_json(report.table.metadata, include_timing)},
              {"config", config_json(config)},
              {"size_fit", fit_json(report.size_fit)},
              {"failure_fit", report.failure_fit ? fit_json(*report.failure_fit) : json(nullptr)},
              {"rows", rows_json(report.table)}};
  write_json_document(doc, out);
}

void write_json(const ResultTable& report, const ExperimentConfig& config, std::ostream& out,
                bool include_timing) {
  json doc = {{"experiment", "root_finding"},
              {"metadata", metadata_json(report.metadata, include_timing)},
              {"config", config_json(config)},
              {"rows", rows_json(report)}};
  write_json_document(doc, out);
}

void write_json(const LimitLawReport& report, const ExperimentConfig& config, std::ostream& out,
                bool include_timing) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"label", r.label},
                    {"vertex", r.vertex},
                    {"condition", r.condition},
                    {"trials", r.trials},
                    {"reference_draws", r.reference_draws},
                    {"ks", r.ks},
                    {"ks_critical", r.ks_critical},
                    {"empirical_mean", estimate_json(r.empirical_mean)},
                    {"reference_mean", r.reference_mean},
                    {"mean_z", num(r.mean_z)},
                    {"warning", r.warning}});
  }
  json doc = {{"experiment", "limit_law_check"},
              {"metadata", metadata_json(report.metadata, include_timing)},
              {"config", config_json(config)},
              {"rows", rows}};
  write_json_document(doc, out);
}

void write_json(const DeviationReport& report, const ExperimentConfig& config, std::ostream& out,
                bool include_timing) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"vertex", r.vertex},
                    {"level", r.level},
                    {"threshold", r.threshold},
                    {"trials", r.trials},
                    {"events", r.events},
                    {"tail", estimate_json(r.tail)},
                    {"neg_log_tail", num(r.neg_log_tail)},
                    {"censored", r.censored}});
  }
  json verdicts = json::array();
  for (const auto& v : report.verdicts) {
    verdicts.push_back({{"vertex", v.vertex},
                        {"monotone", v.monotone},
                        {"uncensored", v.uncensored},
                        {"spearman", num(v.spearman)}});
  }
  json doc = {{"experiment", "deviation_check"},
              {"metadata", metadata_json(report.metadata, include_timing)},
              {"config", config_json(config)},
              {"rows", rows},
              {"verdicts", verdicts}};
  write_json_document(doc, out);
}

void write_json(const BoundReport& report, const ExperimentConfig& config, std::ostream& out,
                bool include_timing) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"bound", to_string(r.spec.kind)},
                    {"a", r.spec.a},
                    {"b", r.spec.b},
                    {"epsilon", r.epsilon},
                    {"exponent", r.spec.exponent()},
                    {"events", r.events},
                    {"monte_carlo", estimate_json(r.monte_carlo)},
                    {"quadrature", r.quadrature},
                    {"eps_power", r.eps_power},
                    {"ratio_quadrature", num(r.ratio_quadrature)},
                    {"ratio_monte_carlo", num(r.ratio_monte_carlo)},
                    {"z", num(r.z)}});
  }
  json stability = json::array();
  for (const auto& s : report.stability) {
    stability.push_back({{"bound", to_string(s.spec.kind)},
                         {"epsilon", s.epsilon},
                         {"quadrature_factor", num(s.quadrature_factor)},
                         {"monte_carlo_factor", num(s.monte_carlo_factor)}});
  }
  json doc = {{"experiment", "joint_bound_check"},
              {"metadata", metadata_json(report.metadata, include_timing)},
              {"config", config_json(config)},
              {"draws", report.draws},
              {"rows", rows},
              {"stability", stability}};
  write_json_document(doc, out);
}

void write_outputs(const SweepReport& report, const ExperimentConfig& config, bool include_timing) {
  write_files<SweepReport>(report, config, include_timing, [](const SweepReport& r, std::ostream& o) {
    write_csv(r.table, "epsilon_sweep", o);
  });
}

void write_outputs(const ResultTable& report, const ExperimentConfig& config, bool include_timing) {
  write_files<ResultTable>(report, config, include_timing, [](const ResultTable& r, std::ostream& o) {
    write_csv(r, "root_finding", o);
  });
}

void write_outputs(const LimitLawReport& report, const ExperimentConfig& config,
                   bool include_timing) {
  write_files<LimitLawReport>(report, config, include_timing,
                              [](const LimitLawReport& r, std::ostream& o) { write_csv(r, o); });
}

void write_outputs(const DeviationReport& report, const ExperimentConfig& config,
                   bool include_timing) {
  write_files<DeviationReport>(report, config, include_timing,
                               [](const DeviationReport& r, std::ostream& o) { write_csv(r, o); });
}

void write_outputs(const BoundReport& report, const ExperimentConfig& config, bool include_timing) {
  write_files<BoundReport>(report, config, include_timing,
                           [](const BoundReport& r, std::ostream& o) { write_csv(r, o); });
}

}  // namespace adamfind
