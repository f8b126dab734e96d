#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gogap {

enum class Color : std::uint8_t { black = 0, white = 1 };

inline Color opponent(Color c) {
  return c == Color::black ? Color::white : Color::black;
}
inline char color_char(Color c) { return c == Color::black ? 'b' : 'w'; }

// Board intersection. (0,0) is the top-left corner; col grows rightward,
// row grows downward, matching the SGF coordinate convention.
struct Point {
  std::int8_t col = -1;
  std::int8_t row = -1;

  auto operator<=>(const Point&) const = default;
};

inline Point point(int col, int row) {
  return Point{static_cast<std::int8_t>(col), static_cast<std::int8_t>(row)};
}

struct Move {
  enum class Kind : std::uint8_t { play, pass };

  Kind kind = Kind::pass;
  Color color = Color::black;
  Point point_{};  // valid only when kind == play

  static Move play(Color c, Point p) { return Move{Kind::play, c, p}; }
  static Move pass(Color c) { return Move{Kind::pass, c, Point{}}; }

  bool is_pass() const { return kind == Kind::pass; }
  auto operator<=>(const Move&) const = default;
};

enum class MoveLegality : std::uint8_t {
  ok,
  off_board,
  occupied,
  suicide,
  ko,
  wrong_color,
};

std::string to_string(MoveLegality l);

class IllegalMoveError : public std::runtime_error {
 public:
  IllegalMoveError(MoveLegality why, Move move);
  MoveLegality why() const { return why_; }
  Move move() const { return move_; }

 private:
  MoveLegality why_;
  Move move_;
};

// Full rules state at one ply. Immutable value type: apply_move returns the
// successor state, so states can be shared across workers freely.
//
// Rules are the simple-ko, no-suicide conventions used in Korean/Japanese
// professional play. The position key is a tabulation (Zobrist) hash over
// (grid, to_move, simple ko point, size) with a fixed seed, so keys are
// stable across runs and machines and can back a persistent cache.
class BoardState {
 public:
  static constexpr int kMaxSize = 25;
  static constexpr int kDefaultSize = 19;

  static BoardState initial(int size = kDefaultSize, double komi = 6.5);

  // Initial position with handicap/setup stones already on the board
  // (SGF AB/AW). Throws IllegalMoveError(suicide) if a setup group has no
  // liberties.
  static BoardState with_setup(int size, double komi,
                               const std::vector<Point>& black_stones,
                               const std::vector<Point>& white_stones,
                               Color to_move);

  int size() const { return size_; }
  double komi() const { return komi_; }
  Color to_move() const { return to_move_; }
  int ply() const { return ply_; }
  std::uint64_t position_key() const { return key_; }
  std::optional<Point> simple_ko_point() const;
  int prisoners(Color captor) const {
    return prisoners_[static_cast<int>(captor)];
  }

  bool on_board(Point p) const {
    return p.col >= 0 && p.row >= 0 && p.col < size_ && p.row < size_;
  }
  // nullopt = empty intersection.
  std::optional<Color> at(Point p) const;
  int stone_count(Color c) const;

  MoveLegality check_move(const Move& m) const;
  bool is_legal(const Move& m) const { return check_move(m) == MoveLegality::ok; }

  // Successor state: stone placed, dead opposing groups removed, prisoners
  // and ko context updated, position key updated incrementally, ply + 1.
  // Throws IllegalMoveError.
  BoardState apply_move(const Move& m) const;

  // All plays accepted by apply_move, plus pass, in row-major order with
  // pass last.
  std::vector<Move> legal_moves() const;

  // Full-board rehash, for consistency checks against the incremental key.
  std::uint64_t recompute_position_key() const;

  bool operator==(const BoardState& other) const = default;

 private:
  BoardState() = default;

  int index(Point p) const { return p.row * size_ + p.col; }
  Point point_at(int idx) const {
    return point(idx % size_, idx / size_);
  }
  int neighbors(int idx, std::array<int, 4>& out) const;
  // Flood-fills the chain containing idx; returns its liberty count and
  // appends member indices to chain.
  int chain_liberties(int idx, std::vector<int>* chain = nullptr) const;
  void place_stone(int idx, Color c);
  void remove_stone(int idx);

  int size_ = 0;
  double komi_ = 6.5;
  Color to_move_ = Color::black;
  std::int16_t ko_point_ = -1;  // index of the banned recapture, -1 if none
  std::array<int, 2> prisoners_{0, 0};
  std::uint64_t key_ = 0;
  int ply_ = 0;
  std::vector<std::uint8_t> grid_;  // 0 empty, 1 black, 2 white
};

}  // namespace gogap
