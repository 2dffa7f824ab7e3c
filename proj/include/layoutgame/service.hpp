#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "layoutgame/io.hpp"

namespace layoutgame {

struct ApiResponse {
  int status = 200;
  Json body;  // null for 204
};

struct ServiceOptions {
  /// Networks, configs, best layouts and session logs are written here when set.
  std::optional<std::string> data_dir;
  /// Live-session token lifetime; defaults to the game's session length.
  std::optional<std::chrono::milliseconds> token_ttl;
  std::uint64_t token_seed = 0;  // 0: seeded from std::random_device
  std::function<std::chrono::steady_clock::time_point()> now = [] { return std::chrono::steady_clock::now(); };
};

/// Request handlers for the game workflow, independent of the transport.
/// Every method is safe to call concurrently; commands on one session are
/// serialised in arrival order.
class GameService {
 public:
  explicit GameService(ServiceOptions options = {});
  ~GameService();
  GameService(const GameService&) = delete;
  GameService& operator=(const GameService&) = delete;

  /// Body: {network: NetworkDocument, config?: ConfigDocument,
  /// layout?: LayoutDocument, layout_seed?: integer}. The game id is the
  /// network id.
  ApiResponse create_game(const Json& body);
  ApiResponse game_status(const std::string& game_id);
  ApiResponse best(const std::string& game_id);

  ApiResponse open_session(const std::string& game_id);
  ApiResponse move(const std::string& session_id, const std::string& token, const Json& body);
  ApiResponse undo(const std::string& session_id, const std::string& token);
  ApiResponse redo(const std::string& session_id, const std::string& token);
  ApiResponse revert(const std::string& session_id, const std::string& token);
  ApiResponse scale(const std::string& session_id, const std::string& token, const Json& body);
  ApiResponse clue(const std::string& session_id, const std::string& token);
  ApiResponse finalize(const std::string& session_id, const std::string& token);

  /// Body: {segment?: kind name, async?: bool}. Synchronous by default;
  /// async runs answer 202 and are polled with anneal_status.
  ApiResponse anneal(const std::string& game_id, const Json& body);
  ApiResponse anneal_status(const std::string& game_id);

  /// Blocks until background annealer runs have finished.
  void wait_idle();

 private:
  struct Game;
  struct LiveSession;

  std::shared_ptr<Game> find_game(const std::string& id);
  std::shared_ptr<LiveSession> find_session(const std::string& id);
  std::optional<ApiResponse> authorize(const LiveSession& live, const std::string& token) const;
  template <typename Fn>
  ApiResponse with_session(const std::string& session_id, const std::string& token, Fn&& fn);
  std::string new_token();
  void persist_best(const Game& game);
  void close_expired(Game& game);
  ApiResponse finish_session(Game& game, LiveSession& live);
  ApiResponse run_anneal(const std::shared_ptr<Game>& game, SegmentKind kind, bool async, bool explicit_kind);

  ServiceOptions options_;
  BestLayoutRegistry registry_;
  std::mutex mutex_;  // guards the maps and the token generator
  std::map<std::string, std::shared_ptr<Game>> games_;
  std::map<std::string, std::shared_ptr<LiveSession>> sessions_;
  Rng token_rng_;
  std::vector<std::thread> workers_;
};

}  // namespace layoutgame
