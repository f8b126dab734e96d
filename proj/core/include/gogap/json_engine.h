#pragma once

#include <memory>
#include <mutex>

#include "gogap/engine.h"
#include "gogap/subprocess.h"

namespace gogap {

// Client for the JSON-lines analysis protocol (docs/engine-protocol.md):
// one request object per line on the engine's stdin, one response object
// per line on its stdout. The engine command comes from configuration.
//
// Positions are sent as setup stones plus the move list; the engine infers
// the side to move (black when no moves follow the setup, otherwise the
// opponent of the last move). All winrates are from the mover's
// perspective; adapters for engines that report black-perspective values
// must flip them.
class JsonLineEngine : public Engine {
 public:
  // Spawns the engine process. Throws EngineError(unavailable).
  explicit JsonLineEngine(const std::vector<std::string>& argv,
                          std::string name = "jsonline");
  static std::unique_ptr<JsonLineEngine> spawn(const std::string& command_line);

  std::string name() const override { return name_; }

  EngineEvaluation evaluate(const EngineQuery& query,
                            const EngineParams& params) override;

  // Same query with the protocol's optional include_move field set, for
  // engines that can be told to keep a specific move in move_infos.
  EngineEvaluation evaluate_including(const EngineQuery& query,
                                      const EngineParams& params,
                                      const Move& include_move);

 private:
  EngineEvaluation run_query(const EngineQuery& query,
                             const EngineParams& params,
                             const Move* include_move);

  std::string name_;
  std::unique_ptr<LineSubprocess> proc_;
  std::mutex mutex_;  // one session: queries are serialized
  std::uint64_t next_id_ = 1;
};

}  // namespace gogap
