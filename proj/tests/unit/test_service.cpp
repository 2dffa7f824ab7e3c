#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>

#include "layoutgame/http_server.hpp"
#include "layoutgame/service.hpp"
#include "support.hpp"

using namespace layoutgame;
using namespace testing;

namespace {

std::shared_ptr<const Network> small_net() {
  Rng rng(139);
  return random_network(rng, 9, 0.22, 0.1);
}

Json create_body(const Network& net, Approach approach, std::size_t n = 1, std::uint64_t seed = 3) {
  auto config = GameConfig::with_default_bonus(net.id(), Priorities{});
  config.approach = approach;
  config.sessions_per_criterion = n;
  config.seed = seed;
  return Json{{"network", network_to_json(net)}, {"config", config_to_json(config)}, {"layout_seed", 1}};
}

ServiceOptions test_options() {
  ServiceOptions options;
  options.token_seed = 42;
  return options;
}

std::string str(const Json& j) { return j.get<std::string>(); }

}  // namespace

TEST_CASE("creating games") {
  GameService service(test_options());
  auto net = small_net();
  const auto created = service.create_game(create_body(*net, Approach::crowd));
  INFO(created.body.dump());
  REQUIRE(created.status == 201);
  CHECK(created.status == 201);
  CHECK(created.body["game"] == net->id());
  CHECK(created.body["modes"].size() == 5);
  CHECK(service.create_game(create_body(*net, Approach::crowd)).status == 409);

  auto g1 = load_fixture("g1_like");
  CHECK(service.create_game(Json{{"network", network_to_json(*g1)}}).status == 201);

  Json zero = create_body(*load_fixture("chain3"), Approach::crowd);
  zero["config"]["priorities"] = {{"DP", 0}, {"EC", 0}, {"EL", 0}, {"ND", 0}, {"NED", 0}};
  CHECK(service.create_game(zero).status == 400);
  CHECK(service.create_game(Json{{"config", nullptr}}).status == 400);
  CHECK(service.create_game(Json::array()).status == 400);
  CHECK(service.create_game(Json{{"network", network_to_json(*load_fixture("g3_like"))}}).status == 400);

  Json outside = create_body(*load_fixture("chain3"), Approach::crowd);
  outside["layout"] = parse_json(read_file(fixture_path("chain3_out_of_box.layout.json")));
  CHECK(service.create_game(outside).status == 400);

  CHECK(service.game_status("nope").status == 404);
  CHECK(service.best("nope").status == 404);
  CHECK(service.open_session("nope").status == 404);
}

TEST_CASE("player session workflow") {
  GameService service(test_options());
  auto net = load_fixture("chain3");
  Json body = create_body(*net, Approach::crowd);
  body["layout"] = parse_json(read_file(fixture_path("chain3_down.layout.json")));
  body.erase("layout_seed");
  REQUIRE(service.create_game(body).status == 201);

  const auto opened = service.open_session("chain3");
  REQUIRE(opened.status == 201);
  CHECK(opened.body["mode"] == "DP");
  const std::string sid = str(opened.body["session"]);
  const std::string token = str(opened.body["token"]);
  CHECK(opened.body["breakdown"]["display"]["DP"] == 10000);
  CHECK(service.open_session("chain3").status == 409);

  SUBCASE("moves, controls and clues") {
    CHECK(service.move(sid, "wrong", Json{{"node", "a"}, {"x", 1}, {"y", 1}}).status == 401);
    CHECK(service.move(sid, token, Json{{"node", "zz"}, {"x", 1}, {"y", 1}}).status == 422);
    CHECK(service.move(sid, token, Json{{"node", "a"}}).status == 400);
    CHECK(service.move("nope", token, Json{{"node", "a"}, {"x", 1}, {"y", 1}}).status == 404);

    CHECK(service.clue(sid, token).status == 204);  // fully downward already

    const auto up = service.move(sid, token, Json{{"node", "c"}, {"x", "2500"}, {"y", "100"}});
    CHECK(up.status == 200);
    CHECK(up.body["breakdown"]["deltas"]["DP"].get<int>() < 0);
    const auto clue = service.clue(sid, token);
    REQUIRE(clue.status == 200);
    CHECK(clue.body["criterion"] == "DP");
    CHECK(service.clue(sid, token).body == clue.body);

    const auto out = service.move(sid, token, Json{{"node", "a"}, {"x", 6000}, {"y", 0}});
    CHECK(out.status == 200);
    CHECK(out.body["breakdown"]["in_bounds"] == false);
    CHECK(out.body["breakdown"]["overall"] == "0");

    CHECK(service.undo(sid, token).body["applied"] == true);
    CHECK(service.redo(sid, token).body["applied"] == true);
    const auto reverted = service.revert(sid, token);
    CHECK(reverted.body["breakdown"]["display"]["DP"] == 10000);
    CHECK(service.scale(sid, token, Json{{"nodes", {"a", "b"}}, {"factor", 0.5}}).body["applied"] == true);
    CHECK(service.scale(sid, token, Json{{"nodes", {"a"}}, {"factor", -1}}).status == 400);
  }
  SUBCASE("finalize") {
    const auto fin = service.finalize(sid, token);
    CHECK(fin.status == 200);
    CHECK(fin.body["registry_updated"] == false);
    CHECK(fin.body["bonus"] == "0");
    CHECK(service.finalize(sid, token).status == 401);
    CHECK(service.move(sid, token, Json{{"node", "a"}, {"x", 1}, {"y", 1}}).status == 401);
    const auto next = service.open_session("chain3");
    CHECK(next.status == 201);
    CHECK(next.body["mode"] == "EC");
  }
}

TEST_CASE("improving sessions update the registry and pay a bonus") {
  GameService service(test_options());
  auto net = make_network({"a", "b", "c", "d"}, {{"a", "b"}, {"c", "d"}}, "crossing");
  Json body = create_body(*net, Approach::crowd);
  body["layout"] = layout_to_json(*net, {"crossing", make_layout({{1000, 1000}, {2000, 2000}, {1000, 2000}, {2000, 1000}}), std::nullopt});
  REQUIRE(service.create_game(body).status == 201);
  const auto before = service.best("crossing").body["breakdown"];

  // First mode is DP; the crossing fix raises EC and therefore the overall score.
  const auto opened = service.open_session("crossing");
  const std::string sid = str(opened.body["session"]);
  const std::string token = str(opened.body["token"]);
  service.move(sid, token, Json{{"node", "d"}, {"x", 2000}, {"y", 3000}});
  const auto fin = service.finalize(sid, token);
  CHECK(fin.body["registry_updated"] == true);
  const auto best = service.best("crossing");
  CHECK(parse_number(str(best.body["breakdown"]["overall"]), "") > parse_number(str(before["overall"]), ""));
  CHECK(best.body["session"] == sid);
  CHECK(best.body["improvements"].size() == 1);
}

TEST_CASE("hybrid games enforce the turn order") {
  GameService service(test_options());
  auto net = small_net();
  REQUIRE(service.create_game(create_body(*net, Approach::hybrid_sa20)).status == 201);
  const std::string game = net->id();

  CHECK(service.anneal(game, Json{{"segment", "SA20"}}).status == 409);
  auto opened = service.open_session(game);
  REQUIRE(opened.status == 201);
  service.finalize(str(opened.body["session"]), str(opened.body["token"]));
  CHECK(service.game_status(game).body["turn"] == "annealer");
  CHECK(service.open_session(game).status == 409);
  CHECK(service.anneal(game, Json{{"segment", "FineTune"}}).status == 409);
  CHECK(service.anneal(game, Json{{"segment", "bogus"}}).status == 400);

  const auto run = service.anneal(game, nullptr);
  REQUIRE(run.status == 200);
  CHECK(run.body["segment"] == "SA20");
  CHECK(run.body["iterations"] == 125);
  CHECK(service.game_status(game).body["turn"] == "player");

  // Play out the rest with no moves, polling best for monotonicity.
  double last = parse_number(str(service.best(game).body["breakdown"]["overall"]), "");
  for (;;) {
    const auto status = service.game_status(game).body;
    if (status["turn"] == "finished") break;
    if (status["turn"] == "player") {
      auto s = service.open_session(game);
      REQUIRE(s.status == 201);
      service.finalize(str(s.body["session"]), str(s.body["token"]));
    } else {
      auto a = service.anneal(game, Json{{"async", true}});
      REQUIRE(a.status == 202);
      service.wait_idle();
      CHECK(service.anneal_status(game).body["state"] == "done");
    }
    const double now = parse_number(str(service.best(game).body["breakdown"]["overall"]), "");
    CHECK(now >= last);
    last = now;
  }
  CHECK(service.open_session(game).status == 410);
  CHECK(service.anneal(game, Json{{"segment", "SA20"}}).status == 409);
  CHECK(service.anneal(game, Json{{"segment", "FineTune"}}).status == 200);
  CHECK(service.anneal(game, Json{{"segment", "FineTune"}}).status == 409);
  CHECK(service.game_status(game).body["fine_tuned"] == true);
}

TEST_CASE("API results equal direct orchestration") {
  auto net = small_net();
  auto config = GameConfig::with_default_bonus(net->id(), Priorities{});
  config.approach = Approach::hybrid_sa20;
  config.sessions_per_criterion = 1;
  config.seed = 5;

  // Direct run with scripted agents.
  auto scorer = std::make_shared<const Scorer>(net);
  AgentPolicy policy;
  policy.move_budget = 6;
  ScriptedPlayer player(policy);
  BestLayoutRegistry registry;
  const Layout start = initial_layout(*net, 1);
  const auto report = run_sequence(config, scorer, start, registry, player);

  // Same sequence through the service, replaying the agents' moves.
  GameService service(test_options());
  Json body{{"network", network_to_json(*net)}, {"config", config_to_json(config)}, {"layout_seed", 1}};
  REQUIRE(service.create_game(body).status == 201);
  std::size_t log = 0;
  for (const auto& turn : report.turns) {
    if (turn.actor == ActorKind::scripted_agent) {
      auto s = service.open_session(net->id());
      REQUIRE(s.status == 201);
      CHECK(s.body["mode"] == std::string(to_string(*turn.mode)));
      const std::string sid = str(s.body["session"]);
      const std::string token = str(s.body["token"]);
      for (const auto& e : report.session_logs[log]) {
        if (const auto* m = std::get_if<MoveEvent>(&e)) {
          const auto r = service.move(sid, token,
                                      Json{{"node", m->node_id}, {"x", format_number(m->to.x)}, {"y", format_number(m->to.y)}});
          CHECK(breakdown_from_json(r.body["breakdown"]).scores == m->breakdown.scores);
        }
      }
      ++log;
      const auto fin = service.finalize(sid, token);
      CHECK(fin.body["registry_updated"] == turn.registry_updated);
      CHECK(parse_number(str(fin.body["bonus"]), "") == turn.bonus);
    } else {
      const auto r = service.anneal(net->id(), turn.actor == ActorKind::fine_tune ? Json{{"segment", "FineTune"}} : Json(nullptr));
      REQUIRE(r.status == 200);
      CHECK(r.body["seed"] == turn.seed);
      CHECK(breakdown_from_json(r.body["registry"]) == turn.registry_after);
    }
  }
  const auto best = service.best(net->id()).body;
  CHECK(layout_from_json(best["layout"], *net).layout == report.final_layout);
  CHECK(breakdown_from_json(best["breakdown"]) == report.final_score);
}

TEST_CASE("expired tokens are rejected and the session is closed on the next open") {
  auto clock = std::make_shared<std::chrono::steady_clock::time_point>(std::chrono::steady_clock::time_point{});
  ServiceOptions options = test_options();
  options.token_ttl = std::chrono::milliseconds(1000);
  options.now = [clock] { return *clock; };
  GameService service(options);
  auto net = small_net();
  REQUIRE(service.create_game(create_body(*net, Approach::crowd)).status == 201);
  auto s = service.open_session(net->id());
  const std::string sid = str(s.body["session"]);
  const std::string token = str(s.body["token"]);
  *clock += std::chrono::milliseconds(1500);
  CHECK(service.move(sid, token, Json{{"node", net->nodes()[0].id}, {"x", 1}, {"y", 1}}).status == 401);
  auto next = service.open_session(net->id());
  CHECK(next.status == 201);
  CHECK(next.body["mode"] == "EC");
  CHECK(service.finalize(sid, token).status == 401);
}

TEST_CASE("concurrent moves on one session are serialised") {
  GameService service(test_options());
  auto net = load_fixture("layered_dag_30");
  REQUIRE(service.create_game(Json{{"network", network_to_json(*net)}}).status == 201);
  auto s = service.open_session(net->id());
  const std::string sid = str(s.body["session"]);
  const std::string token = str(s.body["token"]);
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      Rng rng(static_cast<std::uint64_t>(t));
      for (int k = 0; k < 25; ++k) {
        const auto r = service.move(sid, token,
                                    Json{{"node", net->nodes()[rng.index(30)].id}, {"x", rng.uniform(0, 5000)},
                                         {"y", rng.uniform(0, 6000)}});
        CHECK(r.status == 200);
      }
    });
  }
  for (auto& t : threads) t.join();
  // The log replays to the same state, so no update was interleaved.
  const auto fin = service.finalize(sid, token);
  CHECK(fin.status == 200);
}

TEST_CASE("data directory receives documents and session logs") {
  const auto dir = std::filesystem::temp_directory_path() / "layoutgame_service_data";
  std::filesystem::remove_all(dir);
  ServiceOptions options = test_options();
  options.data_dir = dir.string();
  auto net = load_fixture("chain3");
  {
    GameService service(options);
    REQUIRE(service.create_game(create_body(*net, Approach::crowd)).status == 201);
    auto s = service.open_session("chain3");
    const std::string sid = str(s.body["session"]);
    const std::string token = str(s.body["token"]);
    service.move(sid, token, Json{{"node", "b"}, {"x", 100}, {"y", 100}});
    service.clue(sid, token);
    service.finalize(sid, token);

    CHECK(std::filesystem::exists(dir / "chain3.network.json"));
    CHECK(std::filesystem::exists(dir / "chain3.config.json"));
    CHECK(std::filesystem::exists(dir / "chain3.best.layout.json"));
    std::ifstream in(dir / "sessions" / (sid + ".ndjson"));
    const auto events = read_session_log(in, *net);
    REQUIRE(events.size() == 4);
    CHECK(std::holds_alternative<FinalizeEvent>(events.back()));
    CHECK(replay_session(std::make_shared<const Scorer>(net), events).matches);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("HTTP front end") {
  GameService service(test_options());
  HttpServer server(service, HttpOptions{"127.0.0.1", 0, std::nullopt});
  const int port = server.bind();
  std::thread serving([&] { server.serve(); });

  httplib::Client client("127.0.0.1", port);
  auto net = load_fixture("chain3");
  auto created = client.Post("/games", create_body(*net, Approach::hybrid_sa20).dump(), "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  CHECK(created->get_header_value("X-Layoutgame-Api") == "layoutgame.api/1");
  CHECK(client.Post("/games", "{oops", "application/json")->status == 400);
  CHECK(client.Get("/games/missing")->status == 404);

  auto opened = client.Post("/games/chain3/sessions");
  REQUIRE(opened);
  REQUIRE(opened->status == 201);
  const auto session = Json::parse(opened->body);
  const std::string sid = str(session["session"]);
  const std::string token = str(session["token"]);

  CHECK(client.Post("/sessions/" + sid + "/moves", R"({"node":"a","x":10,"y":10})", "application/json")->status == 401);
  httplib::Headers auth{{"X-Session-Token", token}};
  auto moved = client.Post("/sessions/" + sid + "/moves", auth, R"({"node":"a","x":10,"y":10})", "application/json");
  REQUIRE(moved);
  CHECK(moved->status == 200);
  CHECK(Json::parse(moved->body)["breakdown"].contains("deltas"));
  httplib::Headers bearer{{"Authorization", "Bearer " + token}};
  CHECK(client.Post("/sessions/" + sid + "/undo", bearer, "", "application/json")->status == 200);
  CHECK(client.Get("/sessions/" + sid + "/clue", auth)->status != 401);
  CHECK(client.Post("/sessions/" + sid + "/scale", auth, R"({"nodes":["a","b"],"factor":1.5})", "application/json")
            ->status == 200);
  CHECK(client.Post("/games/chain3/anneal", "{}", "application/json")->status == 409);
  CHECK(client.Post("/sessions/" + sid + "/finalize", auth, "", "application/json")->status == 200);
  CHECK(client.Post("/sessions/" + sid + "/finalize", auth, "", "application/json")->status == 401);

  auto annealed = client.Post("/games/chain3/anneal", R"({"segment":"SA20"})", "application/json");
  REQUIRE(annealed);
  CHECK(annealed->status == 200);
  CHECK(client.Get("/games/chain3/anneal")->status == 200);
  auto best = client.Get("/games/chain3/best");
  REQUIRE(best);
  CHECK(Json::parse(best->body)["layout"]["schema"] == "layoutgame.layout/1");
  CHECK(Json::parse(client.Get("/games/chain3")->body)["turn"] == "player");

  server.stop();
  serving.join();
}
