#include "layoutgame/http_server.hpp"

#include <stdexcept>

#include <httplib.h>

namespace layoutgame {

namespace {

constexpr const char* kApiVersion = "layoutgame.api/1";

void reply(httplib::Response& res, const ApiResponse& api) {
  res.status = api.status;
  res.set_header("X-Layoutgame-Api", kApiVersion);
  if (api.status != 204) res.set_content(api.body.dump(), "application/json");
}

std::string token_of(const httplib::Request& req) {
  if (req.has_header("X-Session-Token")) return req.get_header_value("X-Session-Token");
  const std::string auth = req.get_header_value("Authorization");
  constexpr std::string_view bearer = "Bearer ";
  if (auth.rfind(bearer, 0) == 0) return auth.substr(bearer.size());
  return {};
}

/// Empty bodies read as null; malformed ones yield nullopt.
std::optional<Json> body_of(const httplib::Request& req) {
  if (req.body.empty()) return Json(nullptr);
  try {
    return Json::parse(req.body);
  } catch (const nlohmann::json::parse_error&) {
    return std::nullopt;
  }
}

const ApiResponse kMalformed{400, Json{{"error", "invalid_json"}, {"message", "request body is not valid JSON"}}};

}  // namespace

struct HttpServer::Impl {
  GameService& service;
  HttpOptions options;
  httplib::Server server;
  int port = -1;

  Impl(GameService& s, HttpOptions o) : service(s), options(std::move(o)) {}

  void routes() {
    server.Post("/games", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = body_of(req);
      reply(res, body ? service.create_game(*body) : kMalformed);
    });
    server.Get(R"(/games/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.game_status(req.matches[1]));
    });
    server.Get(R"(/games/([^/]+)/best)", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.best(req.matches[1]));
    });
    server.Post(R"(/games/([^/]+)/sessions)", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.open_session(req.matches[1]));
    });
    server.Post(R"(/games/([^/]+)/anneal)", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = body_of(req);
      reply(res, body ? service.anneal(req.matches[1], *body) : kMalformed);
    });
    server.Get(R"(/games/([^/]+)/anneal)", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.anneal_status(req.matches[1]));
    });
    server.Post(R"(/sessions/([^/]+)/moves)", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = body_of(req);
      reply(res, body ? service.move(req.matches[1], token_of(req), *body) : kMalformed);
    });
    server.Post(R"(/sessions/([^/]+)/scale)", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = body_of(req);
      reply(res, body ? service.scale(req.matches[1], token_of(req), *body) : kMalformed);
    });
    server.Post(R"(/sessions/([^/]+)/(undo|redo|revert))", [this](const httplib::Request& req,
                                                                   httplib::Response& res) {
      const std::string id = req.matches[1];
      const std::string op = req.matches[2];
      const std::string token = token_of(req);
      reply(res, op == "undo" ? service.undo(id, token) : op == "redo" ? service.redo(id, token)
                                                                         : service.revert(id, token));
    });
    server.Get(R"(/sessions/([^/]+)/clue)", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.clue(req.matches[1], token_of(req)));
    });
    server.Post(R"(/sessions/([^/]+)/finalize)", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.finalize(req.matches[1], token_of(req)));
    });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      std::string message = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        message = e.what();
      } catch (...) {
      }
      reply(res, {500, Json{{"error", "internal"}, {"message", message}}});
    });
    if (options.ui_dir && !server.set_mount_point("/", *options.ui_dir)) {
      throw std::runtime_error("cannot serve UI directory " + *options.ui_dir);
    }
  }
};

HttpServer::HttpServer(GameService& service, HttpOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {
  impl_->routes();
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  if (impl_->options.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(impl_->options.host);
  } else if (impl_->server.bind_to_port(impl_->options.host, impl_->options.port)) {
    impl_->port = impl_->options.port;
  }
  if (impl_->port < 0) {
    throw std::runtime_error("cannot bind " + impl_->options.host + ":" + std::to_string(impl_->options.port));
  }
  return impl_->port;
}

void HttpServer::serve() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace layoutgame
