#include "cli.hpp"

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "nmbr9/oracle.hpp"
#include "nmbr9/regex_model.hpp"
#include "nmbr9/solution_io.hpp"
#include "nmbr9/solver.hpp"

namespace nmbr9::cli {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file " + path);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("cannot write file " + path);
}

std::string fmt_seconds(double seconds) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(3);
  s << seconds;
  return s.str();
}

ShapeCatalog load_catalog(const std::string& path) {
  if (path.empty()) return ShapeCatalog::bundled_default();
  return ShapeCatalog::parse(read_file(path), path);
}

// Flags shared by every subcommand that names an instance.
struct InstanceFlags {
  std::string variant;
  std::string deck_text;
  int grid = 20;
  int levels = 7;
  std::string catalog_path;
};

void add_instance_flags(CLI::App& cmd, InstanceFlags& flags) {
  cmd.add_option("--variant", flags.variant, "Variant code T-m-c-k, e.g. F-6-1-5 or K-9-2-3")
      ->required();
  cmd.add_option("--deck", flags.deck_text, "Draw order for known-deck (K) variants, e.g. 0,3,3");
  cmd.add_option("--grid", flags.grid, "Grid side length")->capture_default_str();
  cmd.add_option("--levels", flags.levels, "Level cap")->capture_default_str();
  cmd.add_option("--catalog", flags.catalog_path, "Shape catalog file (default: built in)");
}

struct BuiltInstance {
  Instance instance;
  Deck deck;  // K: the given draw order; F: empty (the solver picks)
};

BuiltInstance build_instance(const InstanceFlags& flags) {
  VariantParams params = parse_variant(flags.variant);
  ShapeCatalog catalog = load_catalog(flags.catalog_path);
  if (params.kind == VariantKind::Known) {
    if (flags.deck_text.empty())
      throw InstanceError("variant " + params.to_string() + " has a known deck; pass --deck");
    Deck deck = parse_deck(flags.deck_text);
    Instance instance = Instance::make(params, flags.grid, flags.levels, catalog, deck);
    return {std::move(instance), std::move(deck)};
  }
  if (!flags.deck_text.empty())
    throw InstanceError("variant " + params.to_string() +
                        " chooses its own deck; --deck does not apply");
  return {Instance::make(params, flags.grid, flags.levels, catalog), {}};
}

RunRecord base_record(const std::string& command, const Instance& instance,
                      const BuiltInstance& built) {
  RunRecord rec;
  rec.timestamp = utc_timestamp();
  rec.command = command;
  rec.instance = instance.to_string();
  rec.config.emplace_back("grid", std::to_string(instance.grid_side()));
  rec.config.emplace_back("levels", std::to_string(instance.max_levels()));
  if (instance.kind() == VariantKind::Known)
    rec.config.emplace_back("deck", deck_to_string(built.deck));
  return rec;
}

struct SolveArgs {
  InstanceFlags inst;
  std::optional<std::uint64_t> node_limit;
  std::optional<double> time_limit;
  int threads = 1;
  bool greedy = false;
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string log;
};

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  BuiltInstance built = build_instance(a.inst);
  const Instance& inst = built.instance;

  SolutionDocument doc;
  doc.variant = inst.to_string();
  doc.grid_side = inst.grid_side();
  doc.max_levels = inst.max_levels();

  RunRecord rec = base_record("solve", inst, built);
  if (a.greedy) rec.config.emplace_back("greedy", "true");
  if (a.seed) rec.config.emplace_back("seed", std::to_string(*a.seed));
  if (a.node_limit) rec.config.emplace_back("node_limit", std::to_string(*a.node_limit));
  if (a.time_limit) rec.config.emplace_back("time_limit", fmt_seconds(*a.time_limit));
  if (a.threads != 1) rec.config.emplace_back("threads", std::to_string(a.threads));

  int exit_code = kExitOk;
  if (a.greedy) {
    if (inst.kind() == VariantKind::Free && !a.seed)
      throw InstanceError(
          "greedy playout on a free-deck variant samples the deck; --seed is required");
    BoardState state = greedy_playout(inst, a.seed.value_or(0));
    doc.deck = state.deck();
    doc.placements.assign(state.placements().begin(), state.placements().end());
    if (state.done()) doc.score = state.score();
    doc.status = "playout";
    exit_code = kExitLimited;  // a playout proves nothing about the optimum
    rec.stats.emplace_back("cards_placed", std::to_string(doc.placements.size()));
    if (!state.done()) rec.stats.emplace_back("dead_end", "true");
  } else {
    SearchConfig config;
    config.node_limit = a.node_limit;
    config.time_limit_seconds = a.time_limit;
    config.threads = a.threads;
    OptResult result = solve(inst, config);
    doc.deck = inst.kind() == VariantKind::Known ? built.deck : result.best_deck;
    doc.placements = std::move(result.best_play);
    doc.score = result.best_score;
    doc.status = result.proof == ProofStatus::optimal ? "optimal" : "bound-limited";
    exit_code = result.proof == ProofStatus::optimal ? kExitOk : kExitLimited;
    rec.stats.emplace_back("nodes", std::to_string(result.stats.nodes));
    rec.stats.emplace_back("dead_ends", std::to_string(result.stats.dead_ends));
    rec.stats.emplace_back("elapsed_seconds", fmt_seconds(result.stats.elapsed_seconds));
  }
  rec.score = doc.score;
  rec.status = doc.status;

  std::string text = solution_to_text(doc);
  if (a.output.empty()) {
    out << text;
  } else {
    write_file(a.output, text);
    rec.artifacts.emplace_back("solution", a.output);
  }
  err << "solve " << doc.variant << ": score="
      << (doc.score ? std::to_string(*doc.score) : "none") << " status=" << doc.status << "\n";
  if (!a.log.empty()) append_run_record(a.log, rec);
  return exit_code;
}

struct OracleArgs {
  InstanceFlags inst;
  std::optional<std::uint64_t> node_limit;
  bool force = false;
  std::string log;
};

int cmd_oracle(const OracleArgs& a, std::ostream& out, std::ostream& err) {
  BuiltInstance built = build_instance(a.inst);
  const Instance& inst = built.instance;
  if (inst.deck_len() > 4 && !a.force) {
    err << "error: exhaustive enumeration of " << inst.to_string() << " (deck length "
        << inst.deck_len() << ") may take far too long; pass --force to run it anyway\n";
    return kExitInstance;
  }
  EnumerationReport report = best_score_bruteforce(inst, a.node_limit.value_or(0));
  out << "oracle " << inst.to_string() << "\n";
  out << "grid " << inst.grid_side() << "\n";
  out << "levels " << inst.max_levels() << "\n";
  if (inst.kind() == VariantKind::Known) out << "deck " << deck_to_string(built.deck) << "\n";
  out << "best " << (report.best_score ? std::to_string(*report.best_score) : "none") << "\n";
  if (report.best_score) out << "best-deck " << deck_to_string(report.best_deck) << "\n";
  out << "terminals " << report.terminal_count << "\n";
  out << "optimal-plays " << report.optimal_count << "\n";
  out << "nodes " << report.nodes << "\n";
  out << "complete " << (report.complete ? "yes" : "no") << "\n";
  if (!a.log.empty()) {
    RunRecord rec = base_record("oracle", inst, built);
    if (a.node_limit) rec.config.emplace_back("node_limit", std::to_string(*a.node_limit));
    if (a.force) rec.config.emplace_back("force", "true");
    rec.score = report.best_score;
    rec.status = report.complete ? "complete" : "node-limited";
    rec.stats.emplace_back("terminals", std::to_string(report.terminal_count));
    rec.stats.emplace_back("optimal_plays", std::to_string(report.optimal_count));
    rec.stats.emplace_back("nodes", std::to_string(report.nodes));
    append_run_record(a.log, rec);
  }
  return report.complete ? kExitOk : kExitLimited;
}

struct ExportArgs {
  InstanceFlags inst;
  std::string output;
  std::string log;
};

int cmd_export(const ExportArgs& a, std::ostream& out, std::ostream& err) {
  BuiltInstance built = build_instance(a.inst);
  ModelExport model = export_model(built.instance);
  std::string text = model_to_text(model);
  if (a.output.empty()) {
    out << text;
  } else {
    write_file(a.output, text);
  }
  err << "export " << built.instance.to_string() << ": " << text.size() << " bytes\n";
  if (!a.log.empty()) {
    RunRecord rec = base_record("export", built.instance, built);
    rec.status = "ok";
    rec.stats.emplace_back("bytes", std::to_string(text.size()));
    if (!a.output.empty()) rec.artifacts.emplace_back("model", a.output);
    append_run_record(a.log, rec);
  }
  return kExitOk;
}

struct RenderArgs {
  std::string solution_path;
  std::string catalog_path;
  std::string output;
};

int cmd_render(const RenderArgs& a, std::ostream& out) {
  SolutionDocument doc = solution_from_text(read_file(a.solution_path));
  ShapeCatalog catalog = load_catalog(a.catalog_path);
  std::string maps = render_solution(doc, catalog);
  if (a.output.empty()) {
    out << maps;
  } else {
    write_file(a.output, maps);
  }
  return kExitOk;
}

struct GenDeckArgs {
  std::string variant;
  std::uint64_t seed = 0;
};

int cmd_gen_deck(const GenDeckArgs& a, std::ostream& out) {
  VariantParams params = parse_variant(a.variant);
  out << deck_to_string(sample_deck(params, a.seed)) << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "Nmbr9-style stacking puzzles: exact solver, enumeration oracle, "
      "constraint-model export, and solution rendering."};
  app.name("nmbr9");
  app.require_subcommand(1);

  SolveArgs solve_args;
  OracleArgs oracle_args;
  ExportArgs export_args;
  RenderArgs render_args;
  GenDeckArgs gen_args;

  CLI::App* solve_cmd = app.add_subcommand("solve", "Maximize the score by branch and bound");
  add_instance_flags(*solve_cmd, solve_args.inst);
  CLI::Option* node_limit_opt = solve_cmd->add_option("--node-limit", solve_args.node_limit,
                                                      "Stop after this many search nodes");
  CLI::Option* time_limit_opt =
      solve_cmd->add_option("--time-limit", solve_args.time_limit, "Stop after this many seconds")
          ->check(CLI::NonNegativeNumber);
  CLI::Option* threads_opt =
      solve_cmd->add_option("--threads", solve_args.threads, "Worker threads for the proof phase")
          ->check(CLI::PositiveNumber)
          ->capture_default_str();
  CLI::Option* greedy_flag = solve_cmd->add_flag(
      "--greedy", solve_args.greedy, "Run the greedy baseline playout instead of the exact search");
  greedy_flag->excludes(node_limit_opt)->excludes(time_limit_opt)->excludes(threads_opt);
  solve_cmd->add_option("--seed", solve_args.seed, "Deck-sampling seed for --greedy on free-deck variants")
      ->needs(greedy_flag);
  solve_cmd->add_option("--output,-o", solve_args.output,
                        "Write the solution document here instead of stdout");
  solve_cmd->add_option("--log", solve_args.log, "Append a run record to this file");

  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "Exhaustively enumerate plays (small decks only)");
  add_instance_flags(*oracle_cmd, oracle_args.inst);
  oracle_cmd->add_option("--node-limit", oracle_args.node_limit,
                         "Stop after this many enumeration nodes");
  oracle_cmd->add_flag("--force", oracle_args.force,
                       "Run even when the deck has more than 4 cards");
  oracle_cmd->add_option("--log", oracle_args.log, "Append a run record to this file");

  CLI::App* export_cmd = app.add_subcommand("export", "Write the instance's constraint model");
  add_instance_flags(*export_cmd, export_args.inst);
  export_cmd->add_option("--output,-o", export_args.output,
                         "Write the model here instead of stdout");
  export_cmd->add_option("--log", export_args.log, "Append a run record to this file");

  CLI::App* render_cmd =
      app.add_subcommand("render", "Replay a solution document and print per-level maps");
  render_cmd->add_option("solution", render_args.solution_path, "Solution document file")
      ->required();
  render_cmd->add_option("--catalog", render_args.catalog_path,
                         "Shape catalog file (default: built in)");
  render_cmd->add_option("--output,-o", render_args.output,
                         "Write the maps here instead of stdout");

  CLI::App* gen_cmd = app.add_subcommand("gen-deck", "Sample a reproducible deck for a variant");
  gen_cmd->add_option("--variant", gen_args.variant, "Variant code, e.g. F-9-2-20")->required();
  gen_cmd->add_option("--seed", gen_args.seed, "Shuffle seed")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("nmbr9");
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve_args, out, err);
    if (oracle_cmd->parsed()) return cmd_oracle(oracle_args, out, err);
    if (export_cmd->parsed()) return cmd_export(export_args, out, err);
    if (render_cmd->parsed()) return cmd_render(render_args, out);
    if (gen_cmd->parsed()) return cmd_gen_deck(gen_args, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInstance;
  }
  return kExitUsage;  // unreachable: a subcommand is required
}

}  // namespace nmbr9::cli
