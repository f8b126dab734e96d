#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gogap/board.h"

namespace gogap {

// Calendar date. Dates given without day precision resolve to the first of
// the month; the panel works on month indices anyway.
struct Date {
  int year = 0;
  int month = 1;  // 1..12
  int day = 1;    // 1..31

  auto operator<=>(const Date&) const = default;

  bool valid() const;
  // Months since year 0; what PanelCell.month_index stores.
  int month_index() const { return year * 12 + (month - 1); }

  static std::optional<Date> parse(const std::string& text);
  static Date from_month_index(int index) {
    return Date{index / 12, index % 12 + 1, 1};
  }
  std::string to_string() const;       // YYYY-MM-DD
  std::string month_string() const;    // YYYY-MM
};

// One match: metadata plus the ordered mainline of moves.
struct GameRecord {
  std::string black_player_id;  // SGF PB, advisory; the metadata CSV wins
  std::string white_player_id;  // SGF PW
  std::optional<Date> date;
  std::optional<std::string> result;
  double komi = 6.5;
  int size = BoardState::kDefaultSize;
  std::vector<Point> setup_black;  // AB
  std::vector<Point> setup_white;  // AW
  std::vector<Move> moves;
  std::string source_path;

  // Root properties we do not interpret, kept for round-trips.
  std::vector<std::pair<std::string, std::vector<std::string>>> extra_root_properties;
  // Non-fatal oddities found while parsing (color alternation breaks, ...).
  std::vector<std::string> warnings;
  int variation_count = 0;  // branches skipped when extracting the mainline

  // Color to move at ply 0: the first recorded move's color, else white
  // when handicap stones are present.
  Color initial_to_move() const;
  BoardState initial_state() const;
};

class IllegalRecordedMoveError : public std::runtime_error {
 public:
  IllegalRecordedMoveError(int ply, std::string reason);
  int ply() const { return ply_; }  // 1-based; 0 = setup position
  const std::string& reason() const { return reason_; }

 private:
  int ply_;
  std::string reason_;
};

// states[k] is the position before move k+1; length = moves + 1.
// Throws IllegalRecordedMoveError with the offending ply.
std::vector<BoardState> replay(const GameRecord& record);

}  // namespace gogap
