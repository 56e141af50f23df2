// harness.hpp: seed-reproducible Monte Carlo experiments.
//
// Trial t of an experiment draws its randomness from
// derive_seed(derive_seed(master_seed, stream), t), where `stream` separates
// independent families of draws inside one experiment. Trials run on a worker
// pool but results are stored by trial index and aggregated in index order, so
// every report is a pure function of (config, master_seed).
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adamfind/stats.hpp"

namespace adamfind {

enum class ExperimentKind {
  RootFinding,
  EpsilonSweep,
  LimitLawCheck,
  DeviationCheck,
  JointBoundCheck,
};

std::string_view to_string(ExperimentKind kind);
/// Accepts the snake_case names ("root_finding", "epsilon_sweep", ...).
ExperimentKind parse_experiment_kind(std::string_view name);

struct ExperimentConfig {
  ExperimentKind experiment_kind = ExperimentKind::RootFinding;
  std::uint64_t n_target = 100000;
  std::uint64_t trials = 400;
  /// Strictly decreasing, each in (0,1).
  std::vector<double> epsilon_grid;
  /// Slack exponent in the size bound ε^{-1-η} and success bound 1 - ε^{1-η}.
  double eta = 0.1;
  double checkpoint_ratio = 2.0;
  std::uint64_t master_seed = 0;
  unsigned thread_count = 1;
  /// CSV destination; the JSON summary goes next to it (see json_path_for).
  /// Empty means no files.
  std::string output_path;

  /// Vertex labels examined by the limit-law and deviation experiments.
  std::vector<std::uint64_t> vertices;
  /// Deviation levels A, tail event sup_n D_i(n) >= A/√i.
  std::vector<double> levels;
  /// Reference-sampler draws for two-sample KS in the limit-law check.
  std::uint64_t reference_draws = 1000000;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Defaults used by the CLI and acceptance suite for each experiment.
ExperimentConfig default_config(ExperimentKind kind);

struct RunMetadata {
  std::uint64_t master_seed = 0;
  std::string build_id;
  double wall_seconds = 0.0;
};

std::string build_id();

// ---------------------------------------------------------------------------
// Root finding and ε sweeps

struct RootFindingRow {
  double epsilon = 0.0;
  std::uint64_t trials = 0;
  /// Fraction of trials with the root in the packet at every checkpoint.
  Estimate success;
  std::uint64_t failures = 0;
  /// |𝒫_ε(n_target)|.
  Estimate mean_size;
  /// Quantiles of the per-trial running maximum of |𝒫_ε(n)|.
  double max_size_p50 = 0.0;
  double max_size_p90 = 0.0;
  double max_size_p99 = 0.0;
  Estimate mean_running_max;
  /// ε^{-1-η}.
  double size_bound = 0.0;
  /// Fraction of trials with running max <= size_bound.
  Estimate within_size_bound;
  /// Fraction of trials with running max <= size_bound and the root always in.
  Estimate joint_event;
};

struct ResultTable {
  std::vector<RootFindingRow> rows;
  RunMetadata metadata;
};

/// Every ε of the grid is evaluated on the same `trials` trees (common random
/// numbers), so success rates are monotone in ε trial by trial.
ResultTable run_root_finding(const ExperimentConfig& config);

struct SweepReport {
  ResultTable table;
  /// log(mean running max) against log(1/ε).
  LinearFit size_fit;
  /// log(failure rate) against log(ε), rows with zero failures dropped;
  /// absent when fewer than two rows remain.
  std::optional<LinearFit> failure_fit;
};

/// Requires at least 4 grid points.
SweepReport run_epsilon_sweep(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Finite-n degrees against the limit laws

struct LimitLawRow {
  std::string label;
  std::uint64_t vertex = 0;
  /// "none" or "3~2" (vertex 3 attached to vertex 2).
  std::string condition;
  std::uint64_t trials = 0;
  std::uint64_t reference_draws = 0;
  double ks = 0.0;
  /// Two-sample KS critical value at level 0.01.
  double ks_critical = 0.0;
  Estimate empirical_mean;
  double reference_mean = 0.0;
  /// |empirical - reference| / stderr.
  double mean_z = 0.0;
  std::string warning;
};

struct LimitLawReport {
  std::vector<LimitLawRow> rows;
  RunMetadata metadata;
};

LimitLawReport run_limit_law_check(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Upper deviations of degrees

struct DeviationRow {
  std::uint64_t vertex = 0;
  double level = 0.0;
  /// level / √vertex.
  double threshold = 0.0;
  std::uint64_t events = 0;
  std::uint64_t trials = 0;
  Estimate tail;
  /// -log(tail); NaN when censored.
  double neg_log_tail = 0.0;
  bool censored = false;
};

struct DeviationVerdict {
  std::uint64_t vertex = 0;
  bool monotone = true;
  std::size_t uncensored = 0;
  /// Spearman(level^{2/3}, -log tail) over uncensored cells; NaN below 2 cells.
  double spearman = 0.0;
};

struct DeviationReport {
  std::vector<DeviationRow> rows;
  std::vector<DeviationVerdict> verdicts;
  RunMetadata metadata;
};

/// The supremum of D_i(n) over i <= n <= n_target is tracked exactly: D_i
/// only increases when i receives an edge, so it is updated at those steps.
DeviationReport run_deviation_check(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Tail bounds for the Adam–Eve limit law

enum class BoundKind {
  AdamEveJoint,  // P(D1 <= ε^a, D2 <= ε^b), exponent a + 2b
  AdamAlone,     // P(D1 <= ε^a), exponent a
  EveAdamJoint,  // P(D2 <= ε^a, D1 <= ε^b), exponent 2a + b
  EveAlone,      // P(D2 <= ε^a), exponent 2a
};

std::string_view to_string(BoundKind kind);

struct BoundSpec {
  BoundKind kind = BoundKind::AdamEveJoint;
  double a = 1.0;
  double b = 0.5;

  double exponent() const;
  /// Thresholds (t1 on D1, t2 on D2); kNoThreshold where unconstrained.
  std::pair<double, double> thresholds(double eps) const;
};

/// (1,½) for both joint kinds, (1,·) Adam alone, (½,·) Eve alone.
std::vector<BoundSpec> default_bound_specs();

struct BoundRow {
  BoundSpec spec;
  double epsilon = 0.0;
  Estimate monte_carlo;
  std::uint64_t events = 0;
  double quadrature = 0.0;
  double eps_power = 0.0;
  double ratio_quadrature = 0.0;
  double ratio_monte_carlo = 0.0;
  /// |MC - quadrature| / stderr.
  double z = 0.0;
};

struct BoundStability {
  BoundSpec spec;
  double epsilon = 0.0;   // the larger ε of the pair
  double quadrature_factor = 0.0;   // ratio(ε/2) / ratio(ε)
  double monte_carlo_factor = 0.0;
};

struct BoundReport {
  std::vector<BoundRow> rows;
  std::vector<BoundStability> stability;
  std::uint64_t draws = 0;
  RunMetadata metadata;
};

/// `trials` is the number of Adam–Eve limit draws, shared by every cell.
BoundReport run_joint_bound_check(const ExperimentConfig& config,
                                  const std::vector<BoundSpec>& specs = default_bound_specs());

// ---------------------------------------------------------------------------
// Small-n membership

/// P(vertex 1 ∈ 𝒫_ε(n)) estimated over `trials` trees, one estimate per ε.
std::vector<Estimate> estimate_root_membership(std::uint64_t n, const std::vector<double>& epsilons,
                                               std::uint64_t trials, std::uint64_t master_seed,
                                               unsigned thread_count = 1);

// ---------------------------------------------------------------------------
// Output

/// "<stem>.json" for "<stem>.csv", otherwise "<path>.json".
std::string json_path_for(const std::string& csv_path);

void write_csv(const ResultTable& table, std::string_view experiment, std::ostream& out);
void write_csv(const LimitLawReport& report, std::ostream& out);
void write_csv(const DeviationReport& report, std::ostream& out);
void write_csv(const BoundReport& report, std::ostream& out);

/// JSON summaries. Timing metadata is emitted only when include_timing is set,
/// so two runs with equal inputs give byte-identical files without it.
void write_json(const SweepReport& report, const ExperimentConfig& config, std::ostream& out,
                bool include_timing);
void write_json(const ResultTable& report, const ExperimentConfig& config, std::ostream& out,
                bool include_timing);
void write_json(const LimitLawReport& report, const ExperimentConfig& config, std::ostream& out,
                bool include_timing);
void write_json(const DeviationReport& report, const ExperimentConfig& config, std::ostream& out,
                bool include_timing);
void write_json(const BoundReport& report, const ExperimentConfig& config, std::ostream& out,
                bool include_timing);

/// Write CSV to config.output_path and JSON beside it. No-op for an empty
/// path; throws std::runtime_error on I/O failure.
void write_outputs(const SweepReport& report, const ExperimentConfig& config, bool include_timing);
void write_outputs(const ResultTable& report, const ExperimentConfig& config, bool include_timing);
void write_outputs(const LimitLawReport& report, const ExperimentConfig& config,
                   bool include_timing);
void write_outputs(const DeviationReport& report, const ExperimentConfig& config,
                   bool include_timing);
void write_outputs(const BoundReport& report, const ExperimentConfig& config, bool include_timing);

/// RFC-4180 field quoting.
std::string csv_field(std::string_view value);
/// Shortest round-trip decimal form of a double ("nan" / "inf" spelled out).
std::string format_double(double value);

}  // namespace adamfind
