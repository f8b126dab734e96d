#include "gogap/engine.h"

#include <cctype>
#include <cstring>

#include <nlohmann/json.hpp>

namespace gogap {

using nlohmann::json;

EngineQuery EngineQuery::at_ply(const GameRecord& record, BoardState state,
                                std::size_t ply_index) {
  EngineQuery q;
  q.state = std::move(state);
  q.setup_black = record.setup_black;
  q.setup_white = record.setup_white;
  q.history.assign(record.moves.begin(), record.moves.begin() + ply_index);
  return q;
}

EngineQuery EngineQuery::successor(const Move& move) const {
  EngineQuery q = *this;
  q.state = state.apply_move(move);
  q.history.push_back(move);
  return q;
}

EngineError::EngineError(Kind kind, const std::string& detail)
    : std::runtime_error("engine error: " + detail), kind_(kind) {}

double Engine::evaluate_move(const EngineQuery& query, const Move& move,
                             const EngineParams& params) {
  if (!query.state.is_legal(move))
    throw IllegalMoveError(query.state.check_move(move), move);
  EngineEvaluation eval = evaluate(query, params);
  for (const CandidateEval& c : eval.candidates) {
    if (c.move == move && c.visits >= params.min_visits) return c.win_prob;
  }
  // Forced query: score the successor and flip the perspective back to the
  // original mover.
  try {
    EngineEvaluation succ = evaluate(query.successor(move), params);
    return 1.0 - succ.root_value;
  } catch (const EngineError& e) {
    if (e.kind() == EngineError::Kind::timeout)
      throw EngineError(EngineError::Kind::missing_evaluation,
                        std::string("forced query timed out: ") + e.what());
    throw;
  }
}

namespace {

const char* kGtpColumns = "ABCDEFGHJKLMNOPQRSTUVWXYZ";  // no I

}  // namespace

std::string move_to_gtp(const Move& m, int size) {
  if (m.is_pass()) return "pass";
  std::string out(1, kGtpColumns[m.point_.col]);
  out += std::to_string(size - m.point_.row);
  return out;
}

Move gtp_to_move(const std::string& text, Color color, int size) {
  if (text == "pass" || text == "PASS" || text == "Pass")
    return Move::pass(color);
  if (text.size() < 2)
    throw EngineError(EngineError::Kind::protocol, "bad coordinate '" + text + "'");
  char col_char = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  const char* found = std::strchr(kGtpColumns, col_char);
  if (!found)
    throw EngineError(EngineError::Kind::protocol, "bad coordinate '" + text + "'");
  int col = static_cast<int>(found - kGtpColumns);
  int row_from_bottom = 0;
  try {
    row_from_bottom = std::stoi(text.substr(1));
  } catch (const std::exception&) {
    throw EngineError(EngineError::Kind::protocol, "bad coordinate '" + text + "'");
  }
  int row = size - row_from_bottom;
  if (col >= size || row < 0 || row >= size)
    throw EngineError(EngineError::Kind::protocol,
                      "coordinate '" + text + "' off a size-" +
                          std::to_string(size) + " board");
  return Move::play(color, point(col, row));
}

std::string evaluation_to_json(const EngineEvaluation& eval, int board_size) {
  json candidates = json::array();
  for (const CandidateEval& c : eval.candidates) {
    candidates.push_back({{"move", move_to_gtp(c.move, board_size)},
                          {"winrate", c.win_prob},
                          {"visits", c.visits}});
  }
  json j = {
      {"size", board_size},
      {"state_key", eval.state_key},
      {"turn", std::string(1, color_char(eval.to_move))},
      {"root_winrate", eval.root_value},
      {"move_infos", std::move(candidates)},
      {"engine_id", eval.engine_id},
      {"visits_budget", eval.visits_budget},
  };
  return j.dump();
}

EngineEvaluation evaluation_from_json(const std::string& text) {
  json j = json::parse(text);
  EngineEvaluation eval;
  int size = j.at("size").get<int>();
  eval.state_key = j.at("state_key").get<std::uint64_t>();
  eval.to_move =
      j.at("turn").get<std::string>() == "w" ? Color::white : Color::black;
  eval.root_value = j.at("root_winrate").get<double>();
  eval.engine_id = j.at("engine_id").get<std::string>();
  eval.visits_budget = j.at("visits_budget").get<int>();
  for (const json& c : j.at("move_infos")) {
    eval.candidates.push_back(
        {gtp_to_move(c.at("move").get<std::string>(), eval.to_move, size),
         c.at("winrate").get<double>(), c.at("visits").get<std::int64_t>()});
  }
  if (eval.candidates.empty())
    throw EngineError(EngineError::Kind::protocol, "evaluation has no candidates");
  eval.best_move = eval.candidates.front().move;
  return eval;
}

}  // namespace gogap
