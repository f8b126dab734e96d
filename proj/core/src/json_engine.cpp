#include "gogap/json_engine.h"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace gogap {

using nlohmann::json;

JsonLineEngine::JsonLineEngine(const std::vector<std::string>& argv,
                               std::string name)
    : name_(std::move(name)) {
  try {
    proc_ = std::make_unique<LineSubprocess>(argv);
  } catch (const SubprocessError& e) {
    throw EngineError(EngineError::Kind::unavailable, e.what());
  }
}

std::unique_ptr<JsonLineEngine> JsonLineEngine::spawn(
    const std::string& command_line) {
  auto argv = shell_split(command_line);
  if (argv.empty())
    throw EngineError(EngineError::Kind::unavailable, "empty engine command");
  return std::make_unique<JsonLineEngine>(argv, argv.front());
}

EngineEvaluation JsonLineEngine::evaluate(const EngineQuery& query,
                                          const EngineParams& params) {
  return run_query(query, params, nullptr);
}

EngineEvaluation JsonLineEngine::evaluate_including(const EngineQuery& query,
                                                    const EngineParams& params,
                                                    const Move& include_move) {
  return run_query(query, params, &include_move);
}

EngineEvaluation JsonLineEngine::run_query(const EngineQuery& query,
                                           const EngineParams& params,
                                           const Move* include_move) {
  const BoardState& state = query.state;
  const int size = state.size();

  json initial = json::array();
  json moves = json::array();
  const bool has_lineage = !query.history.empty() ||
                           !query.setup_black.empty() ||
                           !query.setup_white.empty();
  if (has_lineage) {
    for (Point p : query.setup_black)
      initial.push_back({"b", move_to_gtp(Move::play(Color::black, p), size)});
    for (Point p : query.setup_white)
      initial.push_back({"w", move_to_gtp(Move::play(Color::white, p), size)});
    for (const Move& m : query.history)
      moves.push_back({std::string(1, color_char(m.color)), move_to_gtp(m, size)});
  } else if (state.stone_count(Color::black) == 0 &&
             state.stone_count(Color::white) == 0) {
    // Bare initial position.
    if (state.to_move() != Color::black)
      throw EngineError(EngineError::Kind::protocol,
                        "white-to-move position needs its move history");
  } else {
    // No lineage: encode the grid as setup stones. The protocol infers the
    // mover from the move list, so this only expresses black-to-move.
    if (state.to_move() != Color::black)
      throw EngineError(EngineError::Kind::protocol,
                        "white-to-move position needs its move history");
    for (int row = 0; row < size; ++row)
      for (int col = 0; col < size; ++col) {
        Point p = point(col, row);
        if (auto c = state.at(p))
          initial.push_back({std::string(1, color_char(*c)),
                             move_to_gtp(Move::play(*c, p), size)});
      }
  }

  std::lock_guard<std::mutex> lock(mutex_);
  std::string id = "q" + std::to_string(next_id_++);
  json request = {{"id", id},
                  {"size", size},
                  {"initial_stones", std::move(initial)},
                  {"moves", std::move(moves)},
                  {"komi", params.effective_komi(state)},
                  {"ruleset", params.ruleset},
                  {"max_visits", params.visits_budget}};
  if (include_move)
    request["include_move"] = move_to_gtp(*include_move, size);

  try {
    proc_->write_line(request.dump());
  } catch (const SubprocessError& e) {
    throw EngineError(EngineError::Kind::unavailable, e.what());
  }

  std::string line;
  while (true) {
    std::optional<std::string> got;
    try {
      got = proc_->read_line(params.per_query_timeout);
    } catch (const SubprocessError& e) {
      throw EngineError(EngineError::Kind::unavailable, e.what());
    }
    if (!got)
      throw EngineError(EngineError::Kind::timeout,
                        "no response to " + id + " within budget");
    if (got->empty()) continue;
    line = *got;
    break;
  }

  json response;
  try {
    response = json::parse(line);
  } catch (const json::exception& e) {
    throw EngineError(EngineError::Kind::protocol,
                      std::string("unparseable response: ") + e.what());
  }
  if (response.contains("error"))
    throw EngineError(EngineError::Kind::protocol,
                      "engine error: " + response["error"].dump());
  if (!response.contains("id") || response["id"] != id)
    throw EngineError(EngineError::Kind::protocol,
                      "response id mismatch for " + id);

  EngineEvaluation eval;
  eval.state_key = state.position_key();
  eval.engine_id = params.engine_id;
  eval.visits_budget = params.visits_budget;
  try {
    std::string turn = response.at("turn").get<std::string>();
    eval.to_move = turn == "w" ? Color::white : Color::black;
    eval.root_value = response.at("root_winrate").get<double>();
    for (const json& info : response.at("move_infos")) {
      CandidateEval c;
      c.move = gtp_to_move(info.at("move").get<std::string>(), eval.to_move, size);
      c.win_prob = info.at("winrate").get<double>();
      c.visits = info.at("visits").get<std::int64_t>();
      eval.candidates.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw EngineError(EngineError::Kind::protocol,
                      std::string("malformed response: ") + e.what());
  }
  if (eval.to_move != state.to_move())
    throw EngineError(EngineError::Kind::protocol,
                      "engine turn disagrees with the queried position");
  if (eval.candidates.empty())
    throw EngineError(EngineError::Kind::protocol, "response has no move_infos");
  for (const CandidateEval& c : eval.candidates) {
    if (!(c.win_prob >= 0.0 && c.win_prob <= 1.0))
      throw EngineError(EngineError::Kind::protocol, "winrate outside [0,1]");
    if (c.visits < 1)
      throw EngineError(EngineError::Kind::protocol, "candidate with no visits");
  }
  std::stable_sort(eval.candidates.begin(), eval.candidates.end(),
                   [](const CandidateEval& a, const CandidateEval& b) {
                     return a.win_prob > b.win_prob;
                   });
  eval.best_move = eval.candidates.front().move;
  return eval;
}

}  // namespace gogap
