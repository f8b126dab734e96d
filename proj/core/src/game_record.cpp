#include "gogap/game_record.h"

#include <charconv>
#include <cstdio>

namespace gogap {

bool Date::valid() const {
  if (year < 1 || month < 1 || month > 12 || day < 1) return false;
  static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int max_day = days[month - 1];
  bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  if (month == 2 && leap) max_day = 29;
  return day <= max_day;
}

std::optional<Date> Date::parse(const std::string& text) {
  // YYYY | YYYY-MM | YYYY-MM-DD; an SGF DT list like "2016-03-15,16" keeps
  // the first date.
  std::string t = text.substr(0, text.find(','));
  Date d;
  const char* p = t.data();
  const char* end = t.data() + t.size();
  auto read_int = [&](int& out) {
    auto [next, ec] = std::from_chars(p, end, out);
    if (ec != std::errc{} || next == p) return false;
    p = next;
    return true;
  };
  if (!read_int(d.year)) return std::nullopt;
  if (p != end) {
    if (*p != '-' || ++p == end || !read_int(d.month)) return std::nullopt;
  }
  if (p != end) {
    if (*p != '-' || ++p == end || !read_int(d.day)) return std::nullopt;
  }
  if (p != end || !d.valid()) return std::nullopt;
  return d;
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  return buf;
}

std::string Date::month_string() const {
  char buf[12];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
  return buf;
}

Color GameRecord::initial_to_move() const {
  if (!moves.empty()) return moves.front().color;
  return setup_black.empty() ? Color::black : Color::white;
}

BoardState GameRecord::initial_state() const {
  return BoardState::with_setup(size, komi, setup_black, setup_white,
                                initial_to_move());
}

IllegalRecordedMoveError::IllegalRecordedMoveError(int ply, std::string reason)
    : std::runtime_error("illegal recorded move at ply " +
                         std::to_string(ply) + ": " + reason),
      ply_(ply),
      reason_(std::move(reason)) {}

std::vector<BoardState> replay(const GameRecord& record) {
  std::vector<BoardState> states;
  states.reserve(record.moves.size() + 1);
  try {
    states.push_back(record.initial_state());
  } catch (const IllegalMoveError& e) {
    throw IllegalRecordedMoveError(0, std::string("bad setup: ") + e.what());
  }
  for (std::size_t k = 0; k < record.moves.size(); ++k) {
    try {
      states.push_back(states.back().apply_move(record.moves[k]));
    } catch (const IllegalMoveError& e) {
      throw IllegalRecordedMoveError(static_cast<int>(k) + 1,
                                     to_string(e.why()));
    }
  }
  return states;
}

}  // namespace gogap
