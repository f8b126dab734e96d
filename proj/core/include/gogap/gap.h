#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gogap/engine.h"
#include "gogap/sgf.h"

namespace gogap {

// Era segmentation of the timeline: before the first superhuman-AI event,
// between it and the open-source release, and after. Boundaries are closed
// on the left: a match on a cut date belongs to the later era.
struct EraConfig {
  Date cut_1{2016, 3, 15};   // first human-vs-AI landmark match
  Date cut_2{2017, 10, 25};  // open-source engine release
  std::array<std::string, 3> labels{"before_ai", "after_alphago",
                                    "after_opensource"};

  const std::string& label_of(const Date& d) const {
    if (d < cut_1) return labels[0];
    if (d < cut_2) return labels[1];
    return labels[2];
  }
  int index_of_label(const std::string& label) const;
};

// One per-move gap observation: how far the human's move fell short of the
// engine's best, in win-probability percentage points.
struct GapRecord {
  std::string match_id;
  std::string player_id;
  int ply = 0;             // 1-based within the match
  int own_move_index = 0;  // 1-based among that player's moves
  Color color = Color::black;
  double delta_pp = 0.0;   // valid only when !missing
  bool missing = false;
  std::string engine_id;
  int month_index = 0;
  std::string era;
};

// Player-month aggregate: the mean over that player's matches of the
// per-match mean gap.
struct PanelCell {
  std::string player_id;
  int month_index = 0;
  double mean_gap = 0.0;  // percentage points
  int n_matches = 0;
  int n_moves_used = 0;
  std::string group = "none";  // treated | control | none
};

enum class KUnit { own_moves, plies };

std::string to_string(KUnit unit);
std::optional<KUnit> k_unit_from_string(const std::string& text);

// delta_pp = 100 * (best win prob - human move's win prob), and exactly 0
// when the human move is the engine's best move or ties its value (the
// measure is defined on values, not move identities).
double gap_for_move(const EngineEvaluation& eval, const Move& human_move,
                    double human_value);

// Gap series for one match: one record per analyzed move of each player,
// up to k_limit own moves per player (or k_limit plies in total).
// Unscorable moves yield records flagged missing. Throws
// IllegalRecordedMoveError when the record does not replay.
std::vector<GapRecord> match_gap_series(const MatchRow& row, Engine& engine,
                                        const EngineParams& params,
                                        int k_limit, KUnit k_unit,
                                        const EraConfig& eras);

// Mean gap per (era, ply bin): bins [1..bin_size], [bin_size+1..], ... Bins
// with no scored moves report n = 0 and no mean. Rows are ordered era-major
// in label order, so the table is rectangular across eras.
struct BinRow {
  std::string era;
  int bin_lo = 0;
  int bin_hi = 0;
  std::optional<double> mean_gap;
  int n = 0;
};
std::vector<BinRow> bin_by_move(std::span<const GapRecord> gaps, int bin_size,
                                const EraConfig& eras);

// Player-month panel. The inner (per match) denominator is the count of
// that player's scored moves in the match, so short or gappy matches are
// not biased toward zero; matches with no scored moves contribute nothing.
// A player's group flag is resolved across their matches: any "treated"
// row wins, then any "control", else "none".
std::vector<PanelCell> build_panel(
    std::span<const GapRecord> gaps,
    const std::unordered_map<std::string, std::string>& group_by_match);
std::vector<PanelCell> build_panel(std::span<const GapRecord> gaps,
                                   const MatchTable& table);

// ---- CSV surfaces -------------------------------------------------------
// Every file begins with a '# schema: ...' line; readers reject unknown
// schema versions.

inline constexpr const char* kGapSchema = "gogap.gaps.v1";
inline constexpr const char* kPanelSchema = "gogap.panel.v1";

std::string gap_csv_header();
void write_gap_csv(const std::string& path, std::span<const GapRecord> gaps);
std::vector<GapRecord> read_gap_csv(const std::string& path);

void write_panel_csv(const std::string& path,
                     std::span<const PanelCell> cells);
std::vector<PanelCell> read_panel_csv(const std::string& path);

}  // namespace gogap
