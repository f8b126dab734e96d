#pragma once

#include "gogap/engine.h"

namespace gogap {

// Deterministic stand-in for a real analysis engine. The definition is
// frozen; tests and fixtures depend on it bit for bit.
//
//   score(state) = 1024 * (stones(mover) - stones(opp))
//               +    32 * (liberties(mover) - liberties(opp))
//               +         (center_ssq(opp) - center_ssq(mover))
//   value(state) = 1 / (1 + exp(-score / 8192))
//
// liberties(c) counts distinct empty points adjacent to c's stones;
// center_ssq(c) sums (2*col - (size-1))^2 + (2*row - (size-1))^2 over c's
// stones, an exact integer for every size. All features are integers, so
// the score has no accumulation-order sensitivity.
//
// Candidates are every legal move (pass included) ranked by the value of
// the successor from the mover's perspective, ties broken by row-major
// move order with pass last, truncated to max_candidates.
class ScriptedEngine : public Engine {
 public:
  std::string name() const override { return "scripted"; }

  EngineEvaluation evaluate(const EngineQuery& query,
                            const EngineParams& params) override;

  // Value of the state for state.to_move(). Exposed so tests can derive
  // expected gaps independently of the candidate machinery.
  static double state_value(const BoardState& state);
  static std::int64_t state_score(const BoardState& state);
};

}  // namespace gogap
