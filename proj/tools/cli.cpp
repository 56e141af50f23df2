#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "adamfind/ba_tree.hpp"
#include "adamfind/harness.hpp"
#include "adamfind/packet.hpp"

namespace adamfind::cli {

std::string_view to_string(Subcommand sub) {
  switch (sub) {
    case Subcommand::Generate: return "generate";
    case Subcommand::FindRoot: return "find-root";
    case Subcommand::Sweep: return "sweep";
    case Subcommand::VerifyLimits: return "verify-limits";
    case Subcommand::VerifyDeviation: return "verify-deviation";
    case Subcommand::VerifyBounds: return "verify-bounds";
    case Subcommand::Export: return "export";
  }
  return "?";
}

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SubcommandSpec {
  Subcommand sub;
  const char* description;
};

constexpr SubcommandSpec kSubcommands[] = {
    {Subcommand::Generate, "Grow a preferential-attachment tree and write it out"},
    {Subcommand::FindRoot, "Grow a tree and print the root-finding set"},
    {Subcommand::Sweep, "Root-finding success and packet size over an epsilon grid"},
    {Subcommand::VerifyLimits, "Compare finite-n degrees with the limiting laws (two-sample KS)"},
    {Subcommand::VerifyDeviation, "Tail of the supremum of renormalized degrees"},
    {Subcommand::VerifyBounds, "Adam-Eve limit tail probabilities: Monte Carlo vs quadrature"},
    {Subcommand::Export, "Convert an edge list (or a freshly grown tree) to another format"},
};

bool is_experiment(Subcommand s) {
  return s == Subcommand::Sweep || s == Subcommand::VerifyLimits ||
         s == Subcommand::VerifyDeviation || s == Subcommand::VerifyBounds;
}

void add_global_options(CLI::App& sub, CliInvocation& inv) {
  sub.set_config("--config", "", "TOML config file; command-line flags override its values");
  sub.add_option("--seed,--master_seed", inv.seed, "Master seed (falls back to MASTER_SEED)");
  sub.add_option("--n,--n_target", inv.n, "Tree size")->check(CLI::PositiveNumber);
  sub.add_option("--epsilon,--epsilon_grid", inv.epsilon, "Epsilon value(s) in (0,1)")
      ->check(CLI::Range(0.0, 1.0))
      ->delimiter(',');
  sub.add_option("--trials", inv.trials, "Independent trials (draws for verify-bounds)")
      ->check(CLI::PositiveNumber);
  sub.add_option("--out,--output_path", inv.out, "Output file (default: standard output)");
}

void add_experiment_options(CLI::App& sub, CliInvocation& inv) {
  sub.add_option("--threads,--thread_count", inv.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  sub.add_option("--eta", inv.eta, "Slack exponent in (0, 1/8) for the size bound");
  sub.add_option("--ratio,--checkpoint_ratio", inv.ratio, "Checkpoint grid ratio (> 1)");
  sub.add_flag("--timing", inv.timing, "Record wall-clock seconds in the JSON summary");
  sub.add_option("--experiment_kind", inv.experiment_kind,
                 "Must match the command when given (config files)");
}

/// CLI11 only reads config files for the root app, so the subcommand's
/// --config is applied here: file values fill options not given on the
/// command line. Unknown keys are usage errors.
void apply_config_file(CLI::App& sub, const std::string& path) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_file(path);
  } catch (const CLI::FileError& e) {
    throw CLI::FileError(std::string("--config: ") + e.what());
  }
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == sub.get_name())) {
      throw CLI::ConversionError("--config: unknown section '" + item.parents[0] + "' in " + path);
    }
    auto* opt = sub.get_option_no_throw("--" + item.name);
    if (opt == nullptr || opt == sub.get_config_ptr()) {
      throw CLI::ConversionError("--config: unknown key '" + item.name + "' in " + path);
    }
    if (opt->count() > 0) continue;
    opt->add_result(item.inputs);
    opt->run_callback();
  }
}

}  // namespace

ParseResult parse(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliInvocation inv;
  CLI::App app{"Root finding in Barabasi-Albert preferential-attachment trees", "adamfind"};
  app.require_subcommand(1);
  app.allow_config_extras(CLI::config_extras_mode::error);

  std::vector<std::pair<CLI::App*, Subcommand>> subs;
  for (const auto& spec : kSubcommands) {
    auto* sub = app.add_subcommand(std::string(to_string(spec.sub)), spec.description);
    sub->allow_config_extras(CLI::config_extras_mode::error);
    add_global_options(*sub, inv);
    if (is_experiment(spec.sub)) add_experiment_options(*sub, inv);
    subs.emplace_back(sub, spec.sub);

    switch (spec.sub) {
      case Subcommand::Generate:
        sub->add_option("--format", inv.format, "edge-list, graphml or dot")
            ->check(CLI::IsMember({"edge-list", "graphml", "dot"}));
        break;
      case Subcommand::FindRoot:
        sub->add_option("--method", inv.method, "packet (default) or top-k")
            ->check(CLI::IsMember({"packet", "top-k"}));
        sub->add_option("--k", inv.k, "Baseline size; defaults to ceil(epsilon^-2)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--format", inv.format, "list (default) or json")
            ->check(CLI::IsMember({"list", "json"}));
        break;
      case Subcommand::VerifyLimits:
        sub->add_option("--vertices", inv.vertices, "Vertex labels to compare")->delimiter(',');
        sub->add_option("--reference-draws,--reference_draws", inv.reference_draws,
                        "Reference sampler draws")
            ->check(CLI::PositiveNumber);
        break;
      case Subcommand::VerifyDeviation:
        sub->add_option("--vertices", inv.vertices, "Vertex labels i")->delimiter(',');
        sub->add_option("--levels", inv.levels, "Deviation levels A (event D_i >= A/sqrt(i))")
            ->delimiter(',');
        break;
      case Subcommand::Export:
        sub->add_option("--in", inv.in, "Edge list to convert (otherwise grow with --n/--seed)");
        sub->add_option("--format", inv.format, "edge-list, graphml or dot")
            ->check(CLI::IsMember({"edge-list", "graphml", "dot"}));
        break;
      default:
        break;
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    for (const auto& [sub, kind] : subs) {
      if (!sub->parsed()) continue;
      if (auto* cfg = sub->get_config_ptr(); cfg && cfg->count() > 0) {
        inv.config_path = cfg->as<std::string>();
        apply_config_file(*sub, *inv.config_path);
      }
      if (auto* seed = sub->get_option_no_throw("--seed"); seed && seed->count() == 0) {
        if (const char* env = std::getenv("MASTER_SEED"); env && *env) {
          seed->add_result(std::string(env));
          try {
            seed->run_callback();
          } catch (const CLI::ParseError&) {
            throw CLI::ConversionError("MASTER_SEED: not an unsigned integer: " + std::string(env));
          }
        }
      }
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (dynamic_cast<const CLI::CallForHelp*>(&e) || dynamic_cast<const CLI::CallForAllHelp*>(&e)) {
      return ParseExit{kExitOk};
    }
    (void)code;
    return ParseExit{kExitUsage};
  }

  for (const auto& [sub, kind] : subs) {
    if (sub->parsed()) inv.subcommand = kind;
  }
  return inv;
}

namespace {

std::uint64_t require_seed(const CliInvocation& inv) {
  if (!inv.seed) throw UsageError("--seed (or MASTER_SEED) is required for randomized commands");
  return *inv.seed;
}

std::uint64_t require_n(const CliInvocation& inv) {
  if (!inv.n) throw UsageError("--n is required");
  return *inv.n;
}

/// File output when --out is given, otherwise `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
      return;
    }
    file_.open(path, std::ios::binary);
    if (!file_) throw std::runtime_error("cannot open '" + path + "' for writing");
    stream_ = &file_;
  }
  std::ostream& get() { return *stream_; }
  void close(const std::string& path) {
    if (!path.empty()) {
      file_.close();
      if (!file_) throw std::runtime_error("write failed for '" + path + "'");
    }
  }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

ExperimentConfig build_config(const CliInvocation& inv, ExperimentKind kind) {
  if (inv.experiment_kind && parse_experiment_kind(*inv.experiment_kind) != kind &&
      !(kind == ExperimentKind::EpsilonSweep &&
        parse_experiment_kind(*inv.experiment_kind) == ExperimentKind::RootFinding)) {
    throw UsageError("experiment_kind '" + *inv.experiment_kind + "' does not match command");
  }
  auto config = default_config(kind);
  config.master_seed = require_seed(inv);
  if (inv.n) config.n_target = *inv.n;
  if (inv.trials) config.trials = *inv.trials;
  if (!inv.epsilon.empty()) config.epsilon_grid = inv.epsilon;
  if (inv.eta) config.eta = *inv.eta;
  if (inv.ratio) config.checkpoint_ratio = *inv.ratio;
  config.thread_count = inv.threads;
  config.output_path = inv.out;
  if (!inv.vertices.empty()) config.vertices = inv.vertices;
  if (!inv.levels.empty()) config.levels = inv.levels;
  if (inv.reference_draws) config.reference_draws = *inv.reference_draws;
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return config;
}

template <class Report, class CsvWriter>
void emit(const Report& report, const ExperimentConfig& config, bool timing, std::ostream& out,
          CsvWriter&& csv) {
  if (config.output_path.empty()) {
    csv(report, out);
  } else {
    write_outputs(report, config, timing);
  }
}

int run_generate(const CliInvocation& inv, std::ostream& out) {
  const auto format = parse_export_format(inv.format.empty() ? "edge-list" : inv.format);
  const auto tree = GrowingTree::grow(require_n(inv), require_seed(inv));
  Sink sink(inv.out, out);
  export_tree(tree, format, sink.get());
  sink.close(inv.out);
  return kExitOk;
}

int run_find_root(const CliInvocation& inv, std::ostream& out) {
  if (inv.epsilon.size() != 1) throw UsageError("find-root needs exactly one --epsilon value");
  const double eps = inv.epsilon.front();
  if (!(eps > 0.0 && eps < 1.0)) throw UsageError("--epsilon must lie in (0,1)");
  const auto n = require_n(inv);
  const auto seed = require_seed(inv);
  const auto tree = GrowingTree::grow(n, seed);

  EpsilonPacket set{eps, tree.size(), {}};
  if (inv.method == "top-k") {
    std::uint64_t k = inv.k ? *inv.k : static_cast<std::uint64_t>(std::ceil(1.0 / (eps * eps)));
    if (k > tree.size()) k = tree.size();
    // tie-breaking stream kept apart from the growth stream
    set.members = top_k_degree(tree, k, derive_seed(seed, 1));
  } else {
    set = epsilon_packet(tree, eps);
  }

  Sink sink(inv.out, out);
  if (inv.format == "json") {
    write_packet_json(set, sink.get());
  } else {
    write_packet_list(set, sink.get());
  }
  sink.close(inv.out);
  out << "root_in_packet=" << (set.contains(1) ? "true" : "false") << '\n';
  return kExitOk;
}

int run_sweep(const CliInvocation& inv, std::ostream& out) {
  auto config = build_config(inv, ExperimentKind::EpsilonSweep);
  const auto report = run_epsilon_sweep(config);
  emit(report, config, inv.timing, out, [](const SweepReport& r, std::ostream& o) {
    write_csv(r.table, "epsilon_sweep", o);
  });
  if (!config.output_path.empty()) {
    out << "size_slope=" << format_double(report.size_fit.slope) << '\n';
    out << "failure_exponent="
        << (report.failure_fit ? format_double(report.failure_fit->slope) : "nan") << '\n';
  }
  return kExitOk;
}

int run_verify_limits(const CliInvocation& inv, std::ostream& out) {
  const auto config = build_config(inv, ExperimentKind::LimitLawCheck);
  const auto report = run_limit_law_check(config);
  emit(report, config, inv.timing, out, [](const LimitLawReport& r, std::ostream& o) { write_csv(r, o); });
  if (!config.output_path.empty()) {
    for (const auto& row : report.rows) {
      out << row.label << " [" << row.condition << "]: ks=" << format_double(row.ks)
          << " mean_z=" << format_double(row.mean_z) << '\n';
    }
  }
  return kExitOk;
}

int run_verify_deviation(const CliInvocation& inv, std::ostream& out) {
  const auto config = build_config(inv, ExperimentKind::DeviationCheck);
  const auto report = run_deviation_check(config);
  emit(report, config, inv.timing, out, [](const DeviationReport& r, std::ostream& o) { write_csv(r, o); });
  if (!config.output_path.empty()) {
    for (const auto& v : report.verdicts) {
      out << "vertex " << v.vertex << ": monotone=" << (v.monotone ? "true" : "false")
          << " uncensored=" << v.uncensored << " spearman=" << format_double(v.spearman) << '\n';
    }
  }
  return kExitOk;
}

int run_verify_bounds(const CliInvocation& inv, std::ostream& out) {
  const auto config = build_config(inv, ExperimentKind::JointBoundCheck);
  const auto report = run_joint_bound_check(config);
  emit(report, config, inv.timing, out, [](const BoundReport& r, std::ostream& o) { write_csv(r, o); });
  if (!config.output_path.empty()) {
    for (const auto& s : report.stability) {
      out << to_string(s.spec.kind) << " eps=" << format_double(s.epsilon)
          << ": quadrature_factor=" << format_double(s.quadrature_factor)
          << " monte_carlo_factor=" << format_double(s.monte_carlo_factor) << '\n';
    }
  }
  return kExitOk;
}

int run_export(const CliInvocation& inv, std::ostream& out) {
  const auto format = parse_export_format(inv.format.empty() ? "edge-list" : inv.format);
  std::optional<GrowingTree> tree;
  if (!inv.in.empty()) {
    std::ifstream f(inv.in, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + inv.in + "'");
    const auto parents = parse_edge_list(f);
    tree = GrowingTree::from_parents(parents);
  } else {
    if (!inv.n) throw UsageError("export needs --in, or --n with --seed");
    tree = GrowingTree::grow(*inv.n, require_seed(inv));
  }
  Sink sink(inv.out, out);
  export_tree(*tree, format, sink.get());
  sink.close(inv.out);
  return kExitOk;
}

}  // namespace

int dispatch(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  try {
    switch (inv.subcommand) {
      case Subcommand::Generate: return run_generate(inv, out);
      case Subcommand::FindRoot: return run_find_root(inv, out);
      case Subcommand::Sweep: return run_sweep(inv, out);
      case Subcommand::VerifyLimits: return run_verify_limits(inv, out);
      case Subcommand::VerifyDeviation: return run_verify_deviation(inv, out);
      case Subcommand::VerifyBounds: return run_verify_bounds(inv, out);
      case Subcommand::Export: return run_export(inv, out);
    }
  } catch (const UsageError& e) {
    err << "adamfind " << to_string(inv.subcommand) << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "adamfind " << to_string(inv.subcommand) << ": error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto parsed = parse(args, out, err);
  if (auto* stop = std::get_if<ParseExit>(&parsed)) return stop->code;
  return dispatch(std::get<CliInvocation>(parsed), out, err);
}

}  // namespace adamfind::cli
