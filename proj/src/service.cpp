#include "layoutgame/service.hpp"

#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include "layoutgame/errors.hpp"

namespace layoutgame {

namespace {

ApiResponse error(int status, std::string code, std::string message) {
  return {status, Json{{"error", std::move(code)}, {"message", std::move(message)}}};
}

enum class Turn { player, annealer, finished };

std::string_view to_string(Turn turn) {
  switch (turn) {
    case Turn::player: return "player";
    case Turn::annealer: return "annealer";
    case Turn::finished: return "finished";
  }
  return "finished";
}

double coordinate(const Json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end()) throw DocumentError(key, "missing field");
  if (it->is_string()) return parse_number(it->get<std::string>(), key);
  if (it->is_number()) return it->get<double>();
  throw DocumentError(key, "expected a number");
}

}  // namespace

struct GameService::Game {
  std::mutex mutex;
  std::string id;
  std::shared_ptr<const Scorer> scorer;
  GameConfig config;
  std::vector<Criterion> modes;
  std::size_t next_mode = 0;
  std::size_t position = 0;
  std::size_t segments = 0;
  double player_minutes = 0.0;
  double annealer_minutes = 0.0;
  double elapsed_minutes = 0.0;
  std::optional<std::string> live_session;
  bool fine_tuned = false;

  enum class Job { idle, running, done, failed };
  Job job = Job::idle;
  Json job_result;

  Turn turn() const {
    if (config.approach == Approach::sa_only) {
      if (annealer_minutes >= config.sequence_budget_minutes) return Turn::finished;
      if (config.sa_only_max_segments && segments >= *config.sa_only_max_segments) return Turn::finished;
      return Turn::annealer;
    }
    if (next_actor(config.approach, position) == TurnActor::annealer) return Turn::annealer;
    if (next_mode >= modes.size() || player_minutes >= config.sequence_budget_minutes) return Turn::finished;
    return Turn::player;
  }
};

struct GameService::LiveSession {
  std::mutex mutex;
  std::string token;
  std::shared_ptr<Game> game;
  std::unique_ptr<Session> session;
  std::chrono::steady_clock::time_point expiry;
  bool closed = false;
  std::unique_ptr<SessionLogWriter> log;

  void flush_log() {
    auto events = session->take_new_events();
    if (log) log->append(events);
  }
};

GameService::GameService(ServiceOptions options)
    : options_(std::move(options)), token_rng_(options_.token_seed ? options_.token_seed : std::random_device{}()) {
  if (options_.data_dir) {
    std::filesystem::create_directories(std::filesystem::path(*options_.data_dir) / "sessions");
  }
}

GameService::~GameService() { wait_idle(); }

void GameService::wait_idle() {
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(mutex_);
    workers.swap(workers_);
  }
  for (auto& w : workers) w.join();
}

std::shared_ptr<GameService::Game> GameService::find_game(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = games_.find(id);
  return it == games_.end() ? nullptr : it->second;
}

std::shared_ptr<GameService::LiveSession> GameService::find_session(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::string GameService::new_token() {
  std::lock_guard lock(mutex_);
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(token_rng_.next()),
                static_cast<unsigned long long>(token_rng_.next()));
  return buf;
}

void GameService::persist_best(const Game& game) {
  if (!options_.data_dir) return;
  auto snap = registry_.snapshot(game.id);
  LayoutDocument doc{game.id, snap->layout, Provenance{ActorKind::initial, snap->session_id, snap->breakdown}};
  if (!snap->improvements.empty()) doc.provenance->actor = snap->improvements.back().actor;
  const auto path = std::filesystem::path(*options_.data_dir) / (game.id + ".best.layout.json");
  write_file(path.string(), save_layout(game.scorer->network(), doc));
}

// ---------------------------------------------------------------------------

ApiResponse GameService::create_game(const Json& body) {
  try {
    if (!body.is_object()) throw DocumentError("", "expected an object");
    auto it = body.find("network");
    if (it == body.end()) throw DocumentError("network", "missing field");
    auto network = std::make_shared<const Network>(network_from_json(*it));

    GameConfig config = GameConfig::with_default_bonus(network->id(), Priorities{});
    if (auto c = body.find("config"); c != body.end() && !c->is_null()) {
      Json doc = *c;
      if (doc.is_object()) {
        if (!doc.contains("schema")) doc["schema"] = kConfigSchema;
        if (!doc.contains("network")) doc["network"] = network->id();
      }
      config = config_from_json(doc);
    }
    if (config.network_id != network->id()) {
      throw DocumentError("config.network", "config names network '" + config.network_id + "'");
    }
    config.scoring.validate(BoundingBox{});

    auto scorer = std::make_shared<const Scorer>(network, config.scoring, config.priorities);
    Layout start;
    if (auto l = body.find("layout"); l != body.end() && !l->is_null()) {
      start = layout_from_json(*l, *network).layout;
      if (!in_bounds(start)) throw DocumentError("layout", "start layout must lie inside the bounding box");
    } else {
      std::uint64_t seed = config.seed;
      if (auto s = body.find("layout_seed"); s != body.end()) {
        if (!s->is_number_integer() || s->get<std::int64_t>() < 0) {
          throw DocumentError("layout_seed", "expected a non-negative integer");
        }
        seed = s->get<std::uint64_t>();
      }
      start = initial_layout(*network, seed);
    }

    auto game = std::make_shared<Game>();
    game->id = network->id();
    game->scorer = scorer;
    game->config = config;
    game->modes = sequence_modes(config);
    const ScoreBreakdown breakdown = scorer->score(start);
    {
      std::lock_guard lock(mutex_);
      if (games_.count(game->id)) return error(409, "duplicate_game", "game '" + game->id + "' already exists");
      registry_.initialize(game->id, start, breakdown);
      games_.emplace(game->id, game);
    }
    if (options_.data_dir) {
      const std::filesystem::path dir(*options_.data_dir);
      write_file((dir / (game->id + ".network.json")).string(), save_network(*network));
      write_file((dir / (game->id + ".config.json")).string(), config_to_json(config).dump(1) + "\n");
      persist_best(*game);
    }

    Json modes = Json::array();
    for (Criterion c : game->modes) modes.push_back(to_string(c));
    return {201, Json{{"game", game->id},
                      {"approach", to_string(config.approach)},
                      {"modes", std::move(modes)},
                      {"breakdown", breakdown_to_json(breakdown)}}};
  } catch (const PathCountCapExceeded& e) {
    return error(400, "path_count_cap_exceeded", e.what());
  } catch (const DocumentError& e) {
    return error(400, "invalid_document", e.what());
  } catch (const NetworkError& e) {
    return error(400, "invalid_network", e.what());
  } catch (const ContractViolation& e) {
    return error(400, "invalid_config", e.what());
  }
}

ApiResponse GameService::game_status(const std::string& game_id) {
  auto game = find_game(game_id);
  if (!game) return error(404, "unknown_game", "no game '" + game_id + "'");
  std::lock_guard lock(game->mutex);
  Json modes = Json::array();
  for (Criterion c : game->modes) modes.push_back(to_string(c));
  return {200, Json{{"game", game->id},
                    {"approach", to_string(game->config.approach)},
                    {"turn", to_string(game->turn())},
                    {"position", game->position},
                    {"modes", std::move(modes)},
                    {"next_mode", game->next_mode},
                    {"player_minutes", game->player_minutes},
                    {"annealer_minutes", game->annealer_minutes},
                    {"live_session", game->live_session ? Json(*game->live_session) : Json(nullptr)},
                    {"fine_tuned", game->fine_tuned}}};
}

ApiResponse GameService::best(const std::string& game_id) {
  auto game = find_game(game_id);
  if (!game) return error(404, "unknown_game", "no game '" + game_id + "'");
  auto snap = registry_.snapshot(game_id);
  Json improvements = Json::array();
  for (const auto& entry : snap->improvements) {
    improvements.push_back({{"session", entry.session_id},
                            {"actor", to_string(entry.actor)},
                            {"overall", format_number(entry.breakdown.overall)},
                            {"elapsed_minutes", entry.elapsed_minutes}});
  }
  return {200, Json{{"game", game_id},
                    {"session", snap->session_id},
                    {"breakdown", breakdown_to_json(snap->breakdown)},
                    {"layout", layout_to_json(game->scorer->network(), {game_id, snap->layout, std::nullopt})},
                    {"improvements", std::move(improvements)}}};
}

// ---------------------------------------------------------------------------

void GameService::close_expired(Game& game) {
  if (!game.live_session) return;
  auto live = find_session(*game.live_session);
  if (!live) return;
  std::lock_guard lock(live->mutex);
  if (!live->closed && options_.now() > live->expiry) finish_session(game, *live);
}

ApiResponse GameService::open_session(const std::string& game_id) {
  auto game = find_game(game_id);
  if (!game) return error(404, "unknown_game", "no game '" + game_id + "'");
  std::lock_guard lock(game->mutex);
  close_expired(*game);
  if (game->live_session) {
    return error(409, "session_in_progress", "session '" + *game->live_session + "' is still open");
  }
  switch (game->turn()) {
    case Turn::annealer: return error(409, "annealer_turn", "the annealer plays the next turn");
    case Turn::finished: return error(410, "sequence_finished", "no player sessions remain");
    case Turn::player: break;
  }
  if (game->job == Game::Job::running) return error(409, "annealer_running", "an annealer segment is running");

  const Criterion mode = game->modes[game->next_mode];
  const std::string id = game->id + ".s" + std::to_string(game->position);
  auto snap = registry_.snapshot(game->id);

  auto live = std::make_shared<LiveSession>();
  live->token = new_token();
  live->game = game;
  live->session = std::make_unique<Session>(id, ActorKind::player, mode, game->scorer, snap->layout, steady_clock_ms());
  const auto ttl = options_.token_ttl.value_or(std::chrono::milliseconds(
      static_cast<std::int64_t>(game->config.session_minutes * 60'000.0)));
  live->expiry = options_.now() + ttl;
  if (options_.data_dir) {
    const auto path = std::filesystem::path(*options_.data_dir) / "sessions" / (id + ".ndjson");
    live->log = std::make_unique<SessionLogWriter>(path.string(), game->scorer->network());
  }
  live->flush_log();
  {
    std::lock_guard maps(mutex_);
    sessions_[id] = live;
  }
  game->live_session = id;

  return {201, Json{{"session", id},
                    {"token", live->token},
                    {"mode", to_string(mode)},
                    {"position", game->position},
                    {"expires_in_ms", ttl.count()},
                    {"layout", layout_to_json(game->scorer->network(), {game->id, snap->layout, std::nullopt})},
                    {"breakdown", breakdown_to_json(live->session->current())}}};
}

std::optional<ApiResponse> GameService::authorize(const LiveSession& live, const std::string& token) const {
  if (live.closed || token.empty() || token != live.token) {
    return error(401, "invalid_token", "token is not valid for this session");
  }
  if (options_.now() > live.expiry) return error(401, "token_expired", "session token has expired");
  return std::nullopt;
}

template <typename Fn>
ApiResponse GameService::with_session(const std::string& session_id, const std::string& token, Fn&& fn) {
  auto live = find_session(session_id);
  if (!live) return error(404, "unknown_session", "no session '" + session_id + "'");
  std::lock_guard lock(live->mutex);
  if (auto denied = authorize(*live, token)) return *denied;
  try {
    ApiResponse response = fn(*live->session);
    live->flush_log();
    return response;
  } catch (const UnknownNodeError& e) {
    return error(422, "unknown_node", e.what());
  } catch (const SessionClosedError& e) {
    return error(401, "session_closed", e.what());
  } catch (const DocumentError& e) {
    return error(400, "invalid_request", e.what());
  } catch (const ContractViolation& e) {
    return error(400, "invalid_request", e.what());
  }
}

namespace {

ApiResponse control_response(const ControlResult& r, const Session& s) {
  return {200, Json{{"applied", r.applied}, {"breakdown", breakdown_to_json(r.breakdown)},
                    {"best", breakdown_to_json(s.best())}}};
}

}  // namespace

ApiResponse GameService::move(const std::string& session_id, const std::string& token, const Json& body) {
  return with_session(session_id, token, [&](Session& s) -> ApiResponse {
    if (!body.is_object()) throw DocumentError("", "expected an object");
    auto node = body.find("node");
    if (node == body.end() || !node->is_string()) throw DocumentError("node", "expected a node id");
    const Point to{coordinate(body, "x"), coordinate(body, "y")};
    const ScoreBreakdown b = s.record_move(node->get<std::string>(), to);
    const auto& last = std::get<MoveEvent>(s.events().back());
    return {200, Json{{"breakdown", breakdown_to_json(b)},
                      {"best", breakdown_to_json(s.best())},
                      {"moved_clue_element", last.moved_clue_element}}};
  });
}

ApiResponse GameService::undo(const std::string& session_id, const std::string& token) {
  return with_session(session_id, token, [](Session& s) { return control_response(s.undo(), s); });
}

ApiResponse GameService::redo(const std::string& session_id, const std::string& token) {
  return with_session(session_id, token, [](Session& s) { return control_response(s.redo(), s); });
}

ApiResponse GameService::revert(const std::string& session_id, const std::string& token) {
  return with_session(session_id, token, [](Session& s) { return control_response(s.revert_to_best(), s); });
}

ApiResponse GameService::scale(const std::string& session_id, const std::string& token, const Json& body) {
  return with_session(session_id, token, [&](Session& s) -> ApiResponse {
    if (!body.is_object()) throw DocumentError("", "expected an object");
    auto nodes = body.find("nodes");
    if (nodes == body.end() || !nodes->is_array()) throw DocumentError("nodes", "expected an array of node ids");
    std::vector<std::string> ids;
    for (const auto& id : *nodes) {
      if (!id.is_string()) throw DocumentError("nodes", "expected an array of node ids");
      ids.push_back(id.get<std::string>());
    }
    const double factor = coordinate(body, "factor");
    return control_response(s.scale_selection(ids, factor), s);
  });
}

ApiResponse GameService::clue(const std::string& session_id, const std::string& token) {
  return with_session(session_id, token, [](Session& s) -> ApiResponse {
    auto c = s.request_clue();
    if (!c) return {204, Json(nullptr)};
    return {200, clue_to_json(*c)};
  });
}

ApiResponse GameService::finish_session(Game& game, LiveSession& live) {
  const double elapsed = game.elapsed_minutes + game.config.session_minutes;
  const auto report = finalize_session(*live.session, registry_, game.config.bonus, elapsed);
  live.closed = true;
  live.flush_log();
  game.player_minutes += game.config.session_minutes;
  game.elapsed_minutes = elapsed;
  ++game.position;
  ++game.next_mode;
  game.live_session.reset();
  if (report.registry_updated) persist_best(game);
  return {200, Json{{"registry_updated", report.registry_updated},
                    {"bonus", format_number(report.bonus)},
                    {"contribution", format_number(report.contribution)},
                    {"registry", breakdown_to_json(report.registry_after)}}};
}

ApiResponse GameService::finalize(const std::string& session_id, const std::string& token) {
  auto live = find_session(session_id);
  if (!live) return error(404, "unknown_session", "no session '" + session_id + "'");
  auto game = live->game;
  std::scoped_lock lock(game->mutex, live->mutex);
  if (auto denied = authorize(*live, token)) return *denied;
  return finish_session(*game, *live);
}

// ---------------------------------------------------------------------------

ApiResponse GameService::anneal(const std::string& game_id, const Json& body) {
  auto game = find_game(game_id);
  if (!game) return error(404, "unknown_game", "no game '" + game_id + "'");
  std::optional<SegmentKind> requested;
  bool async = false;
  if (body.is_object()) {
    if (auto s = body.find("segment"); s != body.end() && !s->is_null()) {
      requested = s->is_string() ? parse_segment_kind(s->get<std::string>()) : std::nullopt;
      if (!requested) return error(400, "invalid_request", "unknown segment kind");
    }
    if (auto a = body.find("async"); a != body.end()) {
      if (!a->is_boolean()) return error(400, "invalid_request", "async must be true or false");
      async = a->get<bool>();
    }
  } else if (!body.is_null()) {
    return error(400, "invalid_request", "expected an object");
  }
  return run_anneal(game, requested.value_or(SegmentKind::sa100), async, requested.has_value());
}

ApiResponse GameService::run_anneal(const std::shared_ptr<Game>& game, SegmentKind kind, bool async,
                                    bool explicit_kind) {
  std::uint64_t seed = 0;
  Layout start;
  {
    std::lock_guard lock(game->mutex);
    if (game->job == Game::Job::running) return error(409, "annealer_running", "an annealer segment is running");
    const Turn turn = game->turn();
    if (explicit_kind && kind == SegmentKind::fine_tune) {
      if (turn != Turn::finished || game->live_session) {
        return error(409, "out_of_turn", "fine-tuning runs once the sequence has finished");
      }
      if (game->fine_tuned) return error(409, "out_of_turn", "the sequence has already been fine-tuned");
      seed = fine_tune_seed(game->config.seed);
    } else {
      if (turn == Turn::player) return error(409, "out_of_turn", "a player plays the next turn");
      if (turn == Turn::finished) return error(409, "out_of_turn", "the sequence has finished");
      if (!explicit_kind) {
        kind = game->config.approach == Approach::sa_only ? game->config.sa_only_kind
                                                          : segment_kind_for(game->config.approach);
      }
      seed = segment_seed(game->config.seed, game->segments);
    }
    game->job = Game::Job::running;
    game->job_result = nullptr;
    start = registry_.snapshot(game->id)->layout;
  }

  auto work = [this, game, kind, seed, start]() -> ApiResponse {
    AnnealResult run;
    try {
      run = run_schedule(*game->scorer, start, schedule_for(kind, seed));
    } catch (const std::exception& e) {
      std::lock_guard lock(game->mutex);
      game->job = Game::Job::failed;
      game->job_result = Json{{"error", "anneal_failed"}, {"message", e.what()}};
      return {500, game->job_result};
    }
    std::lock_guard lock(game->mutex);
    const bool fine = kind == SegmentKind::fine_tune;
    const double elapsed = game->elapsed_minutes + nominal_minutes(kind);
    const std::string id = game->id + (fine ? ".finetune" : ".sa" + std::to_string(game->position));
    const auto offer = registry_.offer(game->id, run.best_layout, run.best_score, id,
                                       fine ? ActorKind::fine_tune : ActorKind::annealer_segment, elapsed);
    game->elapsed_minutes = elapsed;
    if (fine) {
      game->fine_tuned = true;
    } else {
      game->annealer_minutes += nominal_minutes(kind);
      ++game->segments;
      ++game->position;
    }
    if (offer.accepted) persist_best(*game);
    game->job = Game::Job::done;
    game->job_result = Json{{"segment", to_string(kind)},
                            {"seed", seed},
                            {"iterations", run.iterations_run},
                            {"steps", run.steps_run},
                            {"accepted", run.accepted},
                            {"initial", breakdown_to_json(run.initial_score)},
                            {"best", breakdown_to_json(run.best_score)},
                            {"registry_updated", offer.accepted},
                            {"registry", breakdown_to_json(offer.current)}};
    return {200, game->job_result};
  };

  if (!async) return work();
  {
    std::lock_guard lock(mutex_);
    workers_.emplace_back([work] { work(); });
  }
  return {202, Json{{"game", game->id}, {"state", "running"}, {"segment", to_string(kind)}}};
}

ApiResponse GameService::anneal_status(const std::string& game_id) {
  auto game = find_game(game_id);
  if (!game) return error(404, "unknown_game", "no game '" + game_id + "'");
  std::lock_guard lock(game->mutex);
  static constexpr const char* kStates[] = {"idle", "running", "done", "failed"};
  return {200, Json{{"game", game_id},
                    {"state", kStates[static_cast<int>(game->job)]},
                    {"result", game->job_result}}};
}

}  // namespace layoutgame
