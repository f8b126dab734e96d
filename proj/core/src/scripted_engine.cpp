#include "gogap/scripted_engine.h"

#include <algorithm>
#include <cmath>

namespace gogap {
namespace {

struct ColorFeatures {
  std::int64_t stones = 0;
  std::int64_t liberties = 0;
  std::int64_t center_ssq = 0;
};

void scan(const BoardState& s, ColorFeatures out[2]) {
  const int n = s.size();
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      Point p = point(col, row);
      auto stone = s.at(p);
      if (stone) {
        ColorFeatures& f = out[static_cast<int>(*stone)];
        f.stones += 1;
        std::int64_t dx = 2 * col - (n - 1);
        std::int64_t dy = 2 * row - (n - 1);
        f.center_ssq += dx * dx + dy * dy;
      } else {
        // A liberty of every adjacent color, counted once per color.
        bool adj[2] = {false, false};
        auto probe = [&](int c, int r) {
          auto v = s.at(point(c, r));
          if (v) adj[static_cast<int>(*v)] = true;
        };
        probe(col - 1, row);
        probe(col + 1, row);
        probe(col, row - 1);
        probe(col, row + 1);
        if (adj[0]) out[0].liberties += 1;
        if (adj[1]) out[1].liberties += 1;
      }
    }
  }
}

}  // namespace

std::int64_t ScriptedEngine::state_score(const BoardState& state) {
  ColorFeatures f[2];
  scan(state, f);
  int mover = static_cast<int>(state.to_move());
  int opp = 1 - mover;
  return 1024 * (f[mover].stones - f[opp].stones) +
         32 * (f[mover].liberties - f[opp].liberties) +
         (f[opp].center_ssq - f[mover].center_ssq);
}

double ScriptedEngine::state_value(const BoardState& state) {
  return 1.0 / (1.0 + std::exp(-static_cast<double>(state_score(state)) / 8192.0));
}

EngineEvaluation ScriptedEngine::evaluate(const EngineQuery& query,
                                          const EngineParams& params) {
  const BoardState& state = query.state;
  EngineEvaluation eval;
  eval.state_key = state.position_key();
  eval.to_move = state.to_move();
  eval.root_value = state_value(state);
  eval.engine_id = params.engine_id;
  eval.visits_budget = params.visits_budget;

  // legal_moves is already in canonical order (row-major, pass last), and
  // stable_sort keeps that order within ties.
  for (const Move& m : state.legal_moves()) {
    BoardState succ = state.apply_move(m);
    eval.candidates.push_back(
        {m, 1.0 - state_value(succ),
         static_cast<std::int64_t>(std::max(1, params.visits_budget))});
  }
  std::stable_sort(eval.candidates.begin(), eval.candidates.end(),
                   [](const CandidateEval& a, const CandidateEval& b) {
                     return a.win_prob > b.win_prob;
                   });
  if (params.max_candidates > 0 &&
      static_cast<int>(eval.candidates.size()) > params.max_candidates)
    eval.candidates.resize(params.max_candidates);
  eval.best_move = eval.candidates.front().move;
  return eval;
}

}  // namespace gogap
