#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gogap/board.h"
#include "gogap/game_record.h"

namespace gogap {

struct EngineParams {
  std::string engine_id = "scripted-v1";
  int visits_budget = 100;
  int max_candidates = 16;
  // Komi override; by default the state's komi (from the SGF) is passed
  // through to the engine verbatim.
  std::optional<double> komi;
  std::string ruleset = "korean";
  std::chrono::milliseconds per_query_timeout{30000};
  // Candidates searched less than this are raw priors; their values are
  // rejected and the move is force-queried instead.
  int min_visits = 2;

  double effective_komi(const BoardState& state) const {
    return komi.value_or(state.komi());
  }
};

struct CandidateEval {
  Move move;
  double win_prob = 0.0;  // mover's perspective, in [0,1]
  std::int64_t visits = 0;

  bool operator==(const CandidateEval&) const = default;
};

struct EngineEvaluation {
  std::uint64_t state_key = 0;
  Color to_move = Color::black;
  double root_value = 0.5;  // state value for to_move, in [0,1]
  std::vector<CandidateEval> candidates;  // descending win_prob
  Move best_move;                         // == candidates.front().move
  std::string engine_id;
  int visits_budget = 0;

  bool operator==(const EngineEvaluation&) const = default;
};

// A position plus its lineage. The wire protocol encodes positions as
// setup stones followed by the move list, so engine queries carry both.
struct EngineQuery {
  BoardState state;
  std::vector<Point> setup_black;
  std::vector<Point> setup_white;
  std::vector<Move> history;  // moves from the setup position to `state`

  static EngineQuery of(BoardState state) {
    return EngineQuery{std::move(state), {}, {}, {}};
  }
  // Position before move `ply_index` (0-based) of a replayed record.
  static EngineQuery at_ply(const GameRecord& record, BoardState state,
                            std::size_t ply_index);

  // The query for the position after `move`, with the lineage extended.
  EngineQuery successor(const Move& move) const;
};

class EngineError : public std::runtime_error {
 public:
  enum class Kind { unavailable, timeout, protocol, missing_evaluation };
  EngineError(Kind kind, const std::string& detail);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class Engine {
 public:
  virtual ~Engine() = default;

  virtual std::string name() const = 0;

  // Candidates cover at least the engine's top max_candidates moves.
  virtual EngineEvaluation evaluate(const EngineQuery& query,
                                    const EngineParams& params) = 0;

  // Win probability of `move` from the mover's perspective. Taken from the
  // candidate list when searched with at least min_visits; otherwise the
  // successor position is evaluated and the mover's value is 1 minus the
  // successor mover's value. A timeout on that forced query surfaces as
  // EngineError::Kind::missing_evaluation.
  virtual double evaluate_move(const EngineQuery& query, const Move& move,
                               const EngineParams& params);
};

// GTP-style coordinates used on the wire and in cache payloads:
// columns A..Z skipping I, rows 1-based from the bottom, "pass" for a pass.
std::string move_to_gtp(const Move& m, int size);
Move gtp_to_move(const std::string& text, Color color, int size);

// Evaluation (de)serialization, shared by the cache and the CLI. The board
// size is stored in the payload so moves decode without outside context.
std::string evaluation_to_json(const EngineEvaluation& eval, int board_size);
EngineEvaluation evaluation_from_json(const std::string& json);

}  // namespace gogap
