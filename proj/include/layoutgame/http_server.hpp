#pragma once

#include <memory>
#include <optional>
#include <string>

#include "layoutgame/service.hpp"

namespace layoutgame {

struct HttpOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::optional<std::string> ui_dir;  // served under /
};

/// JSON-over-HTTP front end for a GameService.
///
///   POST /games                      create a game
///   GET  /games/{id}                 sequence status
///   GET  /games/{id}/best            registry best layout
///   POST /games/{id}/sessions        open a player session
///   POST /games/{id}/anneal          run an annealer segment
///   GET  /games/{id}/anneal          status of the last segment
///   POST /sessions/{id}/moves        {node, x, y}
///   POST /sessions/{id}/undo|redo|revert
///   POST /sessions/{id}/scale        {nodes, factor}
///   GET  /sessions/{id}/clue
///   POST /sessions/{id}/finalize
///
/// Session commands carry the token in an `X-Session-Token` header or as
/// `Authorization: Bearer <token>`.
class HttpServer {
 public:
  HttpServer(GameService& service, HttpOptions options);
  ~HttpServer();

  /// Binds the socket; returns the bound port. Throws std::runtime_error.
  int bind();
  /// Serves until stop() is called. bind() must have succeeded.
  void serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace layoutgame
