#include "gogap/board.h"

#include <cassert>

namespace gogap {
namespace {

constexpr int kMaxPoints = BoardState::kMaxSize * BoardState::kMaxSize;

// splitmix64; the seed is fixed so position keys are identical across runs
// and machines (cache files stay portable).
constexpr std::uint64_t kHashSeed = 0x6a09e667f3bcc909ULL;

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct HashTables {
  std::array<std::array<std::uint64_t, kMaxPoints>, 2> stone;
  std::array<std::uint64_t, kMaxPoints> ko;
  std::array<std::uint64_t, BoardState::kMaxSize + 1> size_salt;
  std::uint64_t white_to_move;

  HashTables() {
    std::uint64_t s = kHashSeed;
    for (auto& per_color : stone)
      for (auto& k : per_color) k = splitmix64(s);
    for (auto& k : ko) k = splitmix64(s);
    for (auto& k : size_salt) k = splitmix64(s);
    white_to_move = splitmix64(s);
  }
};

const HashTables& tables() {
  static const HashTables t;
  return t;
}

}  // namespace

std::string to_string(MoveLegality l) {
  switch (l) {
    case MoveLegality::ok: return "ok";
    case MoveLegality::off_board: return "off board";
    case MoveLegality::occupied: return "occupied point";
    case MoveLegality::suicide: return "suicide move";
    case MoveLegality::ko: return "ko violation";
    case MoveLegality::wrong_color: return "wrong color";
  }
  return "unknown";
}

IllegalMoveError::IllegalMoveError(MoveLegality why, Move move)
    : std::runtime_error("illegal move: " + to_string(why)),
      why_(why),
      move_(move) {}

BoardState BoardState::initial(int size, double komi) {
  if (size < 1 || size > kMaxSize)
    throw std::invalid_argument("board size out of range");
  BoardState s;
  s.size_ = size;
  s.komi_ = komi;
  s.grid_.assign(static_cast<std::size_t>(size) * size, 0);
  s.key_ = tables().size_salt[size];
  return s;
}

BoardState BoardState::with_setup(int size, double komi,
                                  const std::vector<Point>& black_stones,
                                  const std::vector<Point>& white_stones,
                                  Color to_move) {
  BoardState s = initial(size, komi);
  auto put = [&s](const std::vector<Point>& pts, Color c) {
    for (Point p : pts) {
      if (!s.on_board(p))
        throw IllegalMoveError(MoveLegality::off_board, Move::play(c, p));
      int idx = s.index(p);
      if (s.grid_[idx] != 0)
        throw IllegalMoveError(MoveLegality::occupied, Move::play(c, p));
      s.place_stone(idx, c);
    }
  };
  put(black_stones, Color::black);
  put(white_stones, Color::white);
  for (int idx = 0; idx < static_cast<int>(s.grid_.size()); ++idx) {
    if (s.grid_[idx] != 0 && s.chain_liberties(idx) == 0)
      throw IllegalMoveError(
          MoveLegality::suicide,
          Move::play(s.grid_[idx] == 1 ? Color::black : Color::white,
                     s.point_at(idx)));
  }
  if (to_move == Color::white) {
    s.to_move_ = Color::white;
    s.key_ ^= tables().white_to_move;
  }
  return s;
}

std::optional<Point> BoardState::simple_ko_point() const {
  if (ko_point_ < 0) return std::nullopt;
  return point_at(ko_point_);
}

std::optional<Color> BoardState::at(Point p) const {
  if (!on_board(p)) return std::nullopt;
  std::uint8_t v = grid_[index(p)];
  if (v == 0) return std::nullopt;
  return v == 1 ? Color::black : Color::white;
}

int BoardState::stone_count(Color c) const {
  std::uint8_t want = c == Color::black ? 1 : 2;
  int n = 0;
  for (std::uint8_t v : grid_) n += (v == want);
  return n;
}

int BoardState::neighbors(int idx, std::array<int, 4>& out) const {
  int n = 0;
  int col = idx % size_, row = idx / size_;
  if (col > 0) out[n++] = idx - 1;
  if (col < size_ - 1) out[n++] = idx + 1;
  if (row > 0) out[n++] = idx - size_;
  if (row < size_ - 1) out[n++] = idx + size_;
  return n;
}

int BoardState::chain_liberties(int idx, std::vector<int>* chain) const {
  assert(grid_[idx] != 0);
  const std::uint8_t color = grid_[idx];
  // visited flags: 1 = in chain, 2 = counted liberty
  static thread_local std::vector<std::uint8_t> mark;
  mark.assign(grid_.size(), 0);

  int liberties = 0;
  std::vector<int> stack{idx};
  mark[idx] = 1;
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    if (chain) chain->push_back(cur);
    std::array<int, 4> nb;
    int n = neighbors(cur, nb);
    for (int i = 0; i < n; ++i) {
      int v = nb[i];
      if (mark[v]) continue;
      if (grid_[v] == 0) {
        mark[v] = 2;
        ++liberties;
      } else if (grid_[v] == color) {
        mark[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return liberties;
}

void BoardState::place_stone(int idx, Color c) {
  grid_[idx] = c == Color::black ? 1 : 2;
  key_ ^= tables().stone[static_cast<int>(c)][idx];
}

void BoardState::remove_stone(int idx) {
  Color c = grid_[idx] == 1 ? Color::black : Color::white;
  key_ ^= tables().stone[static_cast<int>(c)][idx];
  grid_[idx] = 0;
}

MoveLegality BoardState::check_move(const Move& m) const {
  if (m.color != to_move_) return MoveLegality::wrong_color;
  if (m.is_pass()) return MoveLegality::ok;
  if (!on_board(m.point_)) return MoveLegality::off_board;
  int idx = index(m.point_);
  if (grid_[idx] != 0) return MoveLegality::occupied;
  if (idx == ko_point_) return MoveLegality::ko;

  const std::uint8_t own = m.color == Color::black ? 1 : 2;
  std::array<int, 4> nb;
  int n = neighbors(idx, nb);
  for (int i = 0; i < n; ++i)
    if (grid_[nb[i]] == 0) return MoveLegality::ok;
  // No direct liberty: legal iff a friendly neighbor chain keeps a spare
  // liberty or an enemy neighbor chain is captured.
  for (int i = 0; i < n; ++i) {
    int libs = chain_liberties(nb[i]);
    if (grid_[nb[i]] == own ? libs >= 2 : libs == 1) return MoveLegality::ok;
  }
  return MoveLegality::suicide;
}

BoardState BoardState::apply_move(const Move& m) const {
  MoveLegality legality = check_move(m);
  if (legality != MoveLegality::ok) throw IllegalMoveError(legality, m);

  BoardState next = *this;
  next.ply_ += 1;
  next.to_move_ = opponent(to_move_);
  next.key_ ^= tables().white_to_move;
  if (next.ko_point_ >= 0) {
    next.key_ ^= tables().ko[next.ko_point_];
    next.ko_point_ = -1;
  }
  if (m.is_pass()) return next;

  int idx = next.index(m.point_);
  next.place_stone(idx, m.color);

  const std::uint8_t enemy = m.color == Color::black ? 2 : 1;
  int captured = 0;
  int last_captured_idx = -1;
  std::array<int, 4> nb;
  int n = next.neighbors(idx, nb);
  std::vector<int> chain;
  for (int i = 0; i < n; ++i) {
    if (next.grid_[nb[i]] != enemy) continue;
    chain.clear();
    if (next.chain_liberties(nb[i], &chain) != 0) continue;
    for (int dead : chain) {
      next.remove_stone(dead);
      last_captured_idx = dead;
      ++captured;
    }
  }
  next.prisoners_[static_cast<int>(m.color)] += captured;

  if (captured == 1) {
    // Simple ko: single-stone capture by a lone stone that itself has only
    // the captured point as a liberty.
    chain.clear();
    int own_libs = next.chain_liberties(idx, &chain);
    if (chain.size() == 1 && own_libs == 1) {
      next.ko_point_ = static_cast<std::int16_t>(last_captured_idx);
      next.key_ ^= tables().ko[last_captured_idx];
    }
  }
  assert(next.chain_liberties(idx) > 0);
  return next;
}

std::vector<Move> BoardState::legal_moves() const {
  std::vector<Move> out;
  out.reserve(grid_.size() + 1);
  for (int idx = 0; idx < static_cast<int>(grid_.size()); ++idx) {
    Move m = Move::play(to_move_, point_at(idx));
    if (check_move(m) == MoveLegality::ok) out.push_back(m);
  }
  out.push_back(Move::pass(to_move_));
  return out;
}

std::uint64_t BoardState::recompute_position_key() const {
  const HashTables& t = tables();
  std::uint64_t k = t.size_salt[size_];
  if (to_move_ == Color::white) k ^= t.white_to_move;
  if (ko_point_ >= 0) k ^= t.ko[ko_point_];
  for (int idx = 0; idx < static_cast<int>(grid_.size()); ++idx)
    if (grid_[idx] != 0) k ^= t.stone[grid_[idx] - 1][idx];
  return k;
}

}  // namespace gogap
