#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "layoutgame/annealer.hpp"
#include "layoutgame/sequence.hpp"

namespace layoutgame {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kNetworkSchema = "layoutgame.network/1";
inline constexpr std::string_view kLayoutSchema = "layoutgame.layout/1";
inline constexpr std::string_view kConfigSchema = "layoutgame.config/1";
inline constexpr std::string_view kSessionLogSchema = "layoutgame.session-log/1";
inline constexpr std::string_view kReportSchema = "layoutgame.sequence-report/1";

/// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);
/// Strict decimal parse of the whole string; throws DocumentError(where).
double parse_number(std::string_view text, const std::string& where);

/// Parses JSON text; syntax errors become DocumentError naming the line.
Json parse_json(std::string_view text);

std::string read_file(const std::string& path);
/// Writes via a temporary file and rename.
void write_file(const std::string& path, std::string_view contents);

// ---------------------------------------------------------------------------
// Networks and layouts

Json network_to_json(const Network& net);
Network network_from_json(const Json& doc);
Network load_network(std::string_view text);
std::string save_network(const Network& net);

struct Provenance {
  ActorKind actor = ActorKind::initial;
  std::string session_id;
  std::optional<ScoreBreakdown> breakdown;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct LayoutDocument {
  std::string network_id;
  Layout layout;
  std::optional<Provenance> provenance;

  friend bool operator==(const LayoutDocument&, const LayoutDocument&) = default;
};

Json layout_to_json(const Network& net, const LayoutDocument& doc);
/// Throws DocumentError when the document names another network or the
/// positions do not cover exactly the network's nodes.
LayoutDocument layout_from_json(const Json& doc, const Network& net);
LayoutDocument load_layout(std::string_view text, const Network& net);
std::string save_layout(const Network& net, const LayoutDocument& doc);

// ---------------------------------------------------------------------------
// Scores, clues, configs

Json breakdown_to_json(const ScoreBreakdown& breakdown);
ScoreBreakdown breakdown_from_json(const Json& doc, const std::string& where = "breakdown");

Json clue_to_json(const Clue& clue);
Clue clue_from_json(const Json& doc, const std::string& where = "clue");

Json priorities_to_json(const Priorities& priorities);
Priorities priorities_from_json(const Json& doc, const std::string& where = "priorities");

Json scoring_params_to_json(const ScoringParams& params);
ScoringParams scoring_params_from_json(const Json& doc, const std::string& where = "scoring");

/// Missing fields take their defaults; bonus budgets default to the
/// priority-proportional split of `total_bonus_budget` (100).
Json config_to_json(const GameConfig& config);
GameConfig config_from_json(const Json& doc);

// ---------------------------------------------------------------------------
// Session logs: one JSON object per line, first line a header record.

Json event_to_json(const Network& net, const SessionEvent& event);
SessionEvent event_from_json(const Json& doc, const Network& net, const std::string& where);

void write_session_log(std::ostream& out, const Network& net, const std::vector<SessionEvent>& events);
std::vector<SessionEvent> read_session_log(std::istream& in, const Network& net);

/// Appends records to a log file as they are produced; flushes every line.
class SessionLogWriter {
 public:
  SessionLogWriter(const std::string& path, const Network& net);
  ~SessionLogWriter();
  SessionLogWriter(const SessionLogWriter&) = delete;
  SessionLogWriter& operator=(const SessionLogWriter&) = delete;

  void append(const SessionEvent& event);
  void append(const std::vector<SessionEvent>& events);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// ---------------------------------------------------------------------------
// Reports and exports

Json report_to_json(const SequenceReport& report);

/// Header `elapsed_minutes,actor,session,overall,dp,ec,el,nd,ned`, then one
/// row per registry improvement in the report.
std::string export_scores_csv(const SequenceReport& report);

/// One row per turn: position, actor, mode or segment, registry overall
/// before/after, contribution, bonus.
std::string export_turns_csv(const SequenceReport& report);

/// One row per iteration: `iteration,temperature,current_overall,best_overall`.
std::string export_trajectory_csv(const std::vector<TrajectorySample>& trajectory);

}  // namespace layoutgame
