#include "gogap/sgf.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "gogap/csv.h"

namespace gogap {
namespace {

struct Property {
  std::string ident;
  std::vector<std::string> values;
  std::size_t position = 0;
};

struct Node {
  std::vector<Property> properties;

  const Property* find(const std::string& ident) const {
    for (const auto& p : properties)
      if (p.ident == ident) return &p;
    return nullptr;
  }
};

// Recursive-descent SGF reader that keeps only the first child at every
// branch. Skipped variations are still lexed so syntax errors anywhere in
// the file are reported.
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::vector<Node> parse_mainline(int* variation_count) {
    skip_ws();
    if (!consume('(')) fail("expected '(' at start of game tree");
    parse_tree_body(/*retain=*/true);
    skip_ws();
    // Additional games in a collection are ignored but must be well-formed.
    while (peek() == '(') {
      if (!consume('(')) fail("expected '('");
      parse_tree_body(/*retain=*/false);
      skip_ws();
    }
    if (pos_ != text_.size()) fail("trailing content after game tree");
    *variation_count = variations_;
    return std::move(mainline_);
  }

 private:
  void parse_tree_body(bool retain) {
    skip_ws();
    if (peek() != ';') fail("expected ';' node");
    while (peek() == ';') {
      ++pos_;
      Node node = parse_node();
      if (retain) mainline_.push_back(std::move(node));
      skip_ws();
    }
    bool first = true;
    while (peek() == '(') {
      ++pos_;
      parse_tree_body(retain && first);
      if (retain && !first) ++variations_;
      first = false;
      skip_ws();
    }
    if (!consume(')')) fail("unclosed game tree, expected ')'");
    skip_ws();
  }

  Node parse_node() {
    Node node;
    skip_ws();
    while (std::isalpha(static_cast<unsigned char>(peek()))) {
      Property prop;
      prop.position = pos_;
      while (std::isalpha(static_cast<unsigned char>(peek()))) {
        // FF[3] idents carry lowercase noise chars; FF[4] keeps uppercase.
        if (std::isupper(static_cast<unsigned char>(peek())))
          prop.ident += peek();
        ++pos_;
      }
      skip_ws();
      if (peek() != '[') fail("property " + prop.ident + " has no value");
      while (peek() == '[') {
        ++pos_;
        std::string value;
        while (true) {
          if (pos_ >= text_.size()) fail("unclosed property value");
          char c = text_[pos_++];
          if (c == '\\') {
            if (pos_ >= text_.size()) fail("dangling escape");
            value += text_[pos_++];
          } else if (c == ']') {
            break;
          } else {
            value += c;
          }
        }
        prop.values.push_back(std::move(value));
        skip_ws();
      }
      node.properties.push_back(std::move(prop));
      skip_ws();
    }
    return node;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  bool consume(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  [[noreturn]] void fail(const std::string& reason) const {
    throw SgfParseError(pos_, reason);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<Node> mainline_;
  int variations_ = 0;
};

int parse_int(const Property& prop) {
  int value = 0;
  const std::string& v = prop.values.front();
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw SgfParseError(prop.position, prop.ident + " is not an integer");
  return value;
}

double parse_double(const Property& prop) {
  const std::string& v = prop.values.front();
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size())
    throw SgfParseError(prop.position, prop.ident + " is not a number");
  return value;
}

// Expands FF[4] compressed point lists ("aa:cc" rectangles).
void append_points(const Property& prop, int size, std::vector<Point>* out) {
  for (const std::string& v : prop.values) {
    auto colon = v.find(':');
    if (colon == std::string::npos) {
      auto p = sgf_to_point(v, size);
      if (!p || v.empty())
        throw SgfParseError(prop.position, "bad point '" + v + "'");
      out->push_back(*p);
      continue;
    }
    auto a = sgf_to_point(v.substr(0, colon), size);
    auto b = sgf_to_point(v.substr(colon + 1), size);
    if (!a || !b) throw SgfParseError(prop.position, "bad point list '" + v + "'");
    for (int col = std::min(a->col, b->col); col <= std::max(a->col, b->col); ++col)
      for (int row = std::min(a->row, b->row); row <= std::max(a->row, b->row); ++row)
        out->push_back(point(col, row));
  }
}

const std::set<std::string>& interpreted_properties() {
  static const std::set<std::string> props = {"B",  "W",  "AB", "AW", "SZ",
                                              "KM", "RE", "DT", "PB", "PW",
                                              "GM", "FF"};
  return props;
}

std::string escape_value(const std::string& v) {
  std::string out;
  for (char c : v) {
    if (c == ']' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

// Shortest decimal that round-trips; keeps KM[6.5] bit-exact.
std::string format_number(double x) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, p);
}

}  // namespace

SgfParseError::SgfParseError(std::size_t position, std::string reason)
    : std::runtime_error("sgf parse error at offset " +
                         std::to_string(position) + ": " + reason),
      position_(position),
      reason_(std::move(reason)) {}

UnsupportedSizeError::UnsupportedSizeError(int size)
    : std::runtime_error("unsupported board size " + std::to_string(size)),
      size_(size) {}

std::string point_to_sgf(Point p) {
  return {static_cast<char>('a' + p.col), static_cast<char>('a' + p.row)};
}

std::optional<Point> sgf_to_point(std::string_view value, int size) {
  if (value.empty()) return std::nullopt;                      // pass
  if (value == "tt" && size <= 19) return std::nullopt;        // legacy pass
  if (value.size() != 2) return std::nullopt;
  int col = value[0] - 'a';
  int row = value[1] - 'a';
  if (col < 0 || row < 0 || col >= size || row >= size) return std::nullopt;
  return point(col, row);
}

GameRecord parse_sgf(std::string_view text) {
  Parser parser(text);
  GameRecord record;
  std::vector<Node> nodes = parser.parse_mainline(&record.variation_count);
  if (nodes.empty()) throw SgfParseError(0, "empty game tree");

  const Node& root = nodes.front();
  if (const Property* gm = root.find("GM"); gm && parse_int(*gm) != 1)
    throw SgfParseError(gm->position, "not a Go record (GM != 1)");
  if (const Property* sz = root.find("SZ")) {
    if (sz->values.front().find(':') != std::string::npos)
      throw SgfParseError(sz->position, "rectangular boards unsupported");
    record.size = parse_int(*sz);
    if (record.size > BoardState::kMaxSize)
      throw UnsupportedSizeError(record.size);
    if (record.size < 1)
      throw SgfParseError(sz->position, "board size must be positive");
  }
  if (const Property* km = root.find("KM")) record.komi = parse_double(*km);
  if (const Property* re = root.find("RE")) record.result = re->values.front();
  if (const Property* pb = root.find("PB"))
    record.black_player_id = pb->values.front();
  if (const Property* pw = root.find("PW"))
    record.white_player_id = pw->values.front();
  if (const Property* dt = root.find("DT")) {
    record.date = Date::parse(dt->values.front());
    if (!record.date)
      record.warnings.push_back("unparseable DT '" + dt->values.front() + "'");
  }
  for (const Property& prop : root.properties) {
    if (!interpreted_properties().count(prop.ident))
      record.extra_root_properties.emplace_back(prop.ident, prop.values);
  }

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& node = nodes[i];
    for (const Property& prop : node.properties) {
      if (prop.ident == "AB" || prop.ident == "AW") {
        if (!record.moves.empty()) {
          record.warnings.push_back("setup stones after moves ignored");
          continue;
        }
        append_points(prop, record.size,
                      prop.ident == "AB" ? &record.setup_black
                                         : &record.setup_white);
      } else if (prop.ident == "B" || prop.ident == "W") {
        Color c = prop.ident == "B" ? Color::black : Color::white;
        const std::string& v = prop.values.front();
        auto p = sgf_to_point(v, record.size);
        if (!p && !v.empty() && !(v == "tt" && record.size <= 19))
          throw SgfParseError(prop.position, "bad move '" + v + "'");
        record.moves.push_back(p ? Move::play(c, *p) : Move::pass(c));
      }
    }
  }

  // Alternation is a data-quality signal, never silently repaired.
  if (!record.moves.empty()) {
    Color implied =
        record.setup_black.empty() ? Color::black : Color::white;
    if (record.moves.front().color != implied)
      record.warnings.push_back("first move color differs from setup-implied color");
    for (std::size_t i = 1; i < record.moves.size(); ++i)
      if (record.moves[i].color == record.moves[i - 1].color)
        record.warnings.push_back("consecutive moves by one color at move " +
                                  std::to_string(i + 1));
  }
  return record;
}

std::string serialize_sgf(const GameRecord& record) {
  std::ostringstream out;
  out << "(;GM[1]FF[4]SZ[" << record.size << "]KM["
      << format_number(record.komi) << ']';
  if (!record.black_player_id.empty())
    out << "PB[" << escape_value(record.black_player_id) << ']';
  if (!record.white_player_id.empty())
    out << "PW[" << escape_value(record.white_player_id) << ']';
  if (record.date) out << "DT[" << record.date->to_string() << ']';
  if (record.result) out << "RE[" << escape_value(*record.result) << ']';
  auto emit_points = [&out](const char* ident, const std::vector<Point>& pts) {
    if (pts.empty()) return;
    out << ident;
    for (Point p : pts) out << '[' << point_to_sgf(p) << ']';
  };
  emit_points("AB", record.setup_black);
  emit_points("AW", record.setup_white);
  for (const auto& [ident, values] : record.extra_root_properties) {
    out << ident;
    for (const auto& v : values) out << '[' << escape_value(v) << ']';
  }
  for (const Move& m : record.moves) {
    out << ';' << (m.color == Color::black ? 'B' : 'W') << '[';
    if (!m.is_pass()) out << point_to_sgf(m.point_);
    out << ']';
  }
  out << ')';
  return out.str();
}

const MatchRow* MatchTable::find(const std::string& match_id) const {
  for (const auto& row : rows)
    if (row.match_id == match_id) return &row;
  return nullptr;
}

CorpusError::CorpusError(Kind kind, std::string detail)
    : std::runtime_error("corpus error: " + detail), kind_(kind) {}

MatchTable load_corpus(const std::string& root,
                       const std::string& metadata_csv) {
  namespace fs = std::filesystem;
  if (!fs::exists(metadata_csv))
    throw CorpusError(CorpusError::Kind::missing_metadata_file,
                      "metadata file not found: " + metadata_csv);
  csv::Table table = csv::read_file(metadata_csv);
  int c_id = table.column("match_id");
  int c_path = table.column("sgf_path");
  int c_black = table.column("black_id");
  int c_white = table.column("white_id");
  int c_date = table.column("date");
  int c_group = table.column("group");
  int c_tournament = table.column("tournament");
  if (c_id < 0 || c_path < 0 || c_black < 0 || c_white < 0 || c_date < 0)
    throw CorpusError(CorpusError::Kind::bad_metadata,
                      "metadata header must contain match_id, sgf_path, "
                      "black_id, white_id, date");

  MatchTable out;
  std::set<std::string> seen_ids;
  for (const auto& fields : table.rows) {
    auto get = [&fields](int col) -> std::string {
      return col >= 0 && col < static_cast<int>(fields.size()) ? fields[col]
                                                               : std::string();
    };
    MatchRow row;
    row.match_id = get(c_id);
    if (!seen_ids.insert(row.match_id).second)
      throw CorpusError(CorpusError::Kind::duplicate_match_id,
                        "duplicate match_id " + row.match_id);
    std::string rel_path = get(c_path);
    std::string path = (fs::path(root) / rel_path).string();

    auto date = Date::parse(get(c_date));
    if (!date) {
      out.skipped.push_back({rel_path, "bad date '" + get(c_date) + "'"});
      continue;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      out.skipped.push_back({rel_path, "missing file"});
      continue;
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
      row.record = parse_sgf(text.str());
    } catch (const std::exception& e) {
      out.skipped.push_back({rel_path, e.what()});
      continue;
    }
    row.record.source_path = rel_path;
    row.black_id = get(c_black);
    row.white_id = get(c_white);
    row.date = *date;
    row.month_index = date->month_index();
    row.group = get(c_group).empty() ? "none" : get(c_group);
    if (row.group != "treated" && row.group != "control" && row.group != "none")
      throw CorpusError(CorpusError::Kind::bad_metadata,
                        "bad group '" + row.group + "' for match " +
                            row.match_id);
    if (!get(c_tournament).empty()) row.tournament = get(c_tournament);
    out.rows.push_back(std::move(row));
  }
  std::sort(out.skipped.begin(), out.skipped.end(),
            [](const SkipEntry& a, const SkipEntry& b) {
              return a.path < b.path || (a.path == b.path && a.reason < b.reason);
            });
  return out;
}

}  // namespace gogap
