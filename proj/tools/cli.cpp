// Command line front end: scoring, annealing, clues, scripted sequences,
// session replay and the HTTP service.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "layoutgame/errors.hpp"
#include "layoutgame/http_server.hpp"
#include "layoutgame/io.hpp"

using namespace layoutgame;

namespace {

constexpr int kDataError = 2;

struct ScoringFlags {
  std::string priorities;
  double theta = ScoringParams{}.theta_min_degrees;
  double min_edge = ScoringParams{}.min_edge_length;
  double penalty = ScoringParams{}.short_edge_penalty;
  std::uint64_t cap = ScoringParams{}.path_count_cap;
  std::string scope = "all_paths";

  void add(CLI::App* app) {
    app->add_option("--priorities", priorities, "Weights, e.g. DP=400,EC=3,EL=1,ND=1,NED=1");
    app->add_option("--theta", theta, "Minimum downward angle in degrees")->capture_default_str();
    app->add_option("--min-edge-length", min_edge, "Edges shorter than this are penalised")->capture_default_str();
    app->add_option("--penalty", penalty, "Cost assigned to short edges")->capture_default_str();
    app->add_option("--path-cap", cap, "Simple path enumeration cap")->capture_default_str();
    app->add_option("--path-scope", scope, "all_paths or source_to_target")
        ->check(CLI::IsMember({"all_paths", "source_to_target"}))
        ->capture_default_str();
  }

  ScoringParams params() const {
    ScoringParams p;
    p.theta_min_degrees = theta;
    p.min_edge_length = min_edge;
    p.short_edge_penalty = penalty;
    p.path_count_cap = cap;
    p.path_scope = scope == "all_paths" ? PathScope::all_paths : PathScope::source_to_target;
    p.validate(BoundingBox{});
    return p;
  }

  Priorities weights() const {
    Priorities p;
    std::stringstream in(priorities);
    std::string item;
    while (std::getline(in, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      auto c = eq == std::string::npos ? std::nullopt : parse_criterion(item.substr(0, eq));
      if (!c) throw DocumentError("--priorities", "expected NAME=weight, got '" + item + "'");
      p[*c] = parse_number(item.substr(eq + 1), "--priorities");
    }
    p.validate();
    return p;
  }
};

std::shared_ptr<const Network> read_network(const std::string& path) {
  return std::make_shared<const Network>(load_network(read_file(path)));
}

void print_breakdown(const ScoreBreakdown& b, bool json) {
  if (json) {
    std::cout << breakdown_to_json(b).dump(1) << "\n";
    return;
  }
  for (Criterion c : kCriteria) {
    std::printf("%-4s %6d  (%s)\n", std::string(to_string(c)).c_str(), b.display_of(c),
                format_number(b[c]).c_str());
  }
  std::printf("overall %s%s\n", format_number(b.overall).c_str(), b.in_bounds ? "" : "  (layout leaves the box)");
}

void write_output(const std::string& path, std::string_view contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
  } else {
    write_file(path, contents);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layout scoring, annealing and game sequences"};
  app.require_subcommand(1);

  // score
  auto* score = app.add_subcommand("score", "Score a layout");
  std::string network_path, layout_path;
  bool json = false;
  ScoringFlags score_flags;
  score->add_option("--network", network_path, "Network document")->required();
  score->add_option("--layout", layout_path, "Layout document")->required();
  score->add_flag("--json", json, "Print the breakdown as JSON");
  score_flags.add(score);

  // anneal
  auto* anneal = app.add_subcommand("anneal", "Run annealing schedules");
  std::string kind_name = "Full", out_layout, trajectory_path;
  std::uint64_t seed = 1;
  std::size_t repeat = 1;
  ScoringFlags anneal_flags;
  anneal->add_option("--network", network_path, "Network document")->required();
  anneal->add_option("--layout", layout_path, "Start layout (default: random from --seed)");
  anneal->add_option("--kind", kind_name, "Full, SA100, SA50, SA20 or FineTune")->capture_default_str();
  anneal->add_option("--seed", seed, "Random seed")->capture_default_str();
  anneal->add_option("--repeat", repeat, "Schedules chained from the best layout")->capture_default_str();
  anneal->add_option("--out", out_layout, "Best layout output path")->required();
  anneal->add_option("--trajectory", trajectory_path, "Per-iteration CSV output path");
  anneal_flags.add(anneal);

  // clue
  auto* clue = app.add_subcommand("clue", "Compute the clue for a mode");
  std::string mode_name = "DP";
  ScoringFlags clue_flags;
  clue->add_option("--network", network_path, "Network document")->required();
  clue->add_option("--layout", layout_path, "Layout document")->required();
  clue->add_option("--mode", mode_name, "DP, EC, EL, ND or NED")->capture_default_str();
  clue_flags.add(clue);

  // init-layout
  auto* init = app.add_subcommand("init-layout", "Write a random in-box layout");
  init->add_option("--network", network_path, "Network document")->required();
  init->add_option("--seed", seed, "Random seed")->capture_default_str();
  init->add_option("--out", out_layout, "Output path ('-' for stdout)")->required();

  // sequence
  auto* sequence = app.add_subcommand("sequence", "Play a game sequence with scripted agents");
  std::string config_path, approach_name = "Crowd", out_dir, sa_kind_name = "Full";
  std::size_t per_criterion = 4, agent_moves = AgentPolicy{}.move_budget;
  std::optional<std::size_t> sa_segments;
  double budget_minutes = 24.0 * 60.0, session_minutes = 60.0, bonus_total = 100.0;
  bool no_fine_tune = false;
  ScoringFlags seq_flags;
  sequence->add_option("--network", network_path, "Network document")->required();
  sequence->add_option("--layout", layout_path, "Start layout (default: random from --seed)");
  sequence->add_option("--config", config_path, "Config document; flags below are ignored when given");
  sequence->add_option("--approach", approach_name, "Crowd, CrowdRandom, HybridSA100, HybridSA50, HybridSA20, SAOnly")
      ->capture_default_str();
  sequence->add_option("-N,--sessions-per-criterion", per_criterion, "Player sessions per criterion")
      ->capture_default_str();
  sequence->add_option("--seed", seed, "Random seed")->capture_default_str();
  sequence->add_option("--budget-minutes", budget_minutes, "Sequence budget in nominal minutes")->capture_default_str();
  sequence->add_option("--session-minutes", session_minutes, "Nominal player session length")->capture_default_str();
  sequence->add_option("--bonus-budget", bonus_total, "Total bonus budget split by priority")->capture_default_str();
  sequence->add_option("--sa-only-kind", sa_kind_name, "Segment kind for SAOnly")->capture_default_str();
  sequence->add_option("--sa-only-segments", sa_segments, "Maximum SAOnly segments");
  sequence->add_flag("--no-fine-tune", no_fine_tune, "Skip the closing fine-tune");
  sequence->add_option("--agent-moves", agent_moves, "Scripted agent attempts per session")->capture_default_str();
  sequence->add_option("--out-dir", out_dir, "Directory for report, CSVs, best layout and logs")->required();
  seq_flags.add(sequence);

  // replay
  auto* replay = app.add_subcommand("replay", "Re-execute a session log and compare breakdowns");
  std::string log_path;
  ScoringFlags replay_flags;
  replay->add_option("--network", network_path, "Network document")->required();
  replay->add_option("--log", log_path, "Session log (NDJSON)")->required();
  replay_flags.add(replay);

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP game service");
  HttpOptions http;
  std::string data_dir;
  std::uint64_t token_seed = 0;
  serve->add_option("--host", http.host, "Listen address")->capture_default_str()->envname("LAYOUTGAME_HOST");
  serve->add_option("--port", http.port, "Listen port (0 = any)")->capture_default_str()->envname("LAYOUTGAME_PORT");
  serve->add_option("--data-dir", data_dir, "Persist games and session logs here")->envname("LAYOUTGAME_DATA_DIR");
  serve->add_option("--ui-dir", http.ui_dir, "Static files served under /");
  serve->add_option("--token-seed", token_seed, "Seed for session tokens (0 = random)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*score) {
      auto net = read_network(network_path);
      const auto doc = load_layout(read_file(layout_path), *net);
      Scorer scorer(net, score_flags.params(), score_flags.weights());
      print_breakdown(scorer.score(doc.layout), json);
    } else if (*anneal) {
      auto kind = parse_segment_kind(kind_name);
      if (!kind) throw DocumentError("--kind", "unknown segment kind '" + kind_name + "'");
      if (repeat < 1) throw DocumentError("--repeat", "must be at least 1");
      auto net = read_network(network_path);
      const Layout start = layout_path.empty() ? initial_layout(*net, seed)
                                               : load_layout(read_file(layout_path), *net).layout;
      Scorer scorer(net, anneal_flags.params(), anneal_flags.weights());
      const auto result = run_repeated(scorer, start, schedule_for(*kind, seed), RepeatBudget{repeat, std::nullopt});
      LayoutDocument doc{net->id(), result.best_layout,
                         Provenance{ActorKind::annealer_segment, std::string(to_string(*kind)), result.best_score}};
      write_output(out_layout, save_layout(*net, doc));
      if (!trajectory_path.empty()) write_output(trajectory_path, export_trajectory_csv(result.trajectory));
      std::fprintf(stderr, "initial %s  best %s  (%zu iterations, %llu accepted)\n",
                   format_number(result.initial_score.overall).c_str(),
                   format_number(result.best_score.overall).c_str(), result.iterations_run,
                   static_cast<unsigned long long>(result.accepted));
    } else if (*clue) {
      auto mode = parse_criterion(mode_name);
      if (!mode) throw DocumentError("--mode", "unknown criterion '" + mode_name + "'");
      auto net = read_network(network_path);
      const auto doc = load_layout(read_file(layout_path), *net);
      const auto c = clue_for(*mode, *net, doc.layout, clue_flags.params());
      std::cout << (c ? clue_to_json(*c).dump(1) : std::string("null")) << "\n";
    } else if (*init) {
      auto net = read_network(network_path);
      write_output(out_layout, save_layout(*net, {net->id(), initial_layout(*net, seed), std::nullopt}));
    } else if (*sequence) {
      auto net = read_network(network_path);
      GameConfig config;
      if (!config_path.empty()) {
        config = config_from_json(parse_json(read_file(config_path)));
      } else {
        auto approach = parse_approach(approach_name);
        if (!approach) throw DocumentError("--approach", "unknown approach '" + approach_name + "'");
        auto sa_kind = parse_segment_kind(sa_kind_name);
        if (!sa_kind) throw DocumentError("--sa-only-kind", "unknown segment kind '" + sa_kind_name + "'");
        config = GameConfig::with_default_bonus(net->id(), seq_flags.weights(), bonus_total);
        config.approach = *approach;
        config.sessions_per_criterion = per_criterion;
        config.seed = seed;
        config.sequence_budget_minutes = budget_minutes;
        config.session_minutes = session_minutes;
        config.scoring = seq_flags.params();
        config.sa_only_kind = *sa_kind;
        config.sa_only_max_segments = sa_segments;
        config.final_fine_tune = !no_fine_tune;
      }
      const Layout start = layout_path.empty() ? initial_layout(*net, config.seed)
                                               : load_layout(read_file(layout_path), *net).layout;
      auto scorer = std::make_shared<const Scorer>(net, config.scoring, config.priorities);
      AgentPolicy policy;
      policy.move_budget = agent_moves;
      policy.seed = mix_seed(config.seed, 0x61676e74);
      ScriptedPlayer player(policy);
      BestLayoutRegistry registry;
      const auto report = run_sequence(config, scorer, start, registry, player);

      const std::filesystem::path dir(out_dir);
      std::filesystem::create_directories(dir / "sessions");
      write_file((dir / "config.json").string(), config_to_json(config).dump(1) + "\n");
      write_file((dir / "report.json").string(), report_to_json(report).dump(1) + "\n");
      write_file((dir / "scores.csv").string(), export_scores_csv(report));
      write_file((dir / "turns.csv").string(), export_turns_csv(report));
      write_file((dir / "best.layout.json").string(),
                 save_layout(*net, {net->id(), report.final_layout,
                                    Provenance{ActorKind::fine_tune, "final", report.final_score}}));
      for (const auto& log : report.session_logs) {
        const auto& open = std::get<OpenEvent>(log.front());
        std::ofstream out(dir / "sessions" / (open.session_id + ".ndjson"), std::ios::binary);
        write_session_log(out, *net, log);
      }
      double summed = 0.0;
      for (const auto& t : report.turns) summed += t.contribution;
      std::printf("%s on %s: initial %s  before fine-tune %s  final %s  (contributions sum %s, %zu turns)\n",
                  std::string(to_string(config.approach)).c_str(), net->id().c_str(),
                  format_number(report.initial.overall).c_str(), format_number(report.pre_fine_tune.overall).c_str(),
                  format_number(report.final_score.overall).c_str(), format_number(summed).c_str(),
                  report.turns.size());
    } else if (*replay) {
      auto net = read_network(network_path);
      std::ifstream in(log_path, std::ios::binary);
      if (!in) throw DocumentError(log_path, "cannot open file");
      const auto events = read_session_log(in, *net);
      auto scorer = std::make_shared<const Scorer>(net, replay_flags.params(), replay_flags.weights());
      const auto result = replay_session(scorer, events);
      std::size_t mismatches = 0;
      for (std::size_t i = 0; i < result.recorded.size(); ++i) {
        if (!(result.recorded[i] == result.replayed[i])) ++mismatches;
      }
      std::printf("%zu breakdowns replayed, %zu mismatches\n", result.recorded.size(), mismatches);
      return result.matches ? 0 : kDataError;
    } else if (*serve) {
      ServiceOptions options;
      if (!data_dir.empty()) options.data_dir = data_dir;
      options.token_seed = token_seed;
      GameService service(options);
      HttpServer server(service, http);
      const int port = server.bind();
      std::fprintf(stderr, "listening on %s:%d\n", http.host.c_str(), port);
      server.serve();
    }
  } catch (const PathCountCapExceeded& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kDataError;
  } catch (const DocumentError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kDataError;
  } catch (const NetworkError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kDataError;
  } catch (const ContractViolation& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kDataError;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kDataError;
  }
  return 0;
}
