#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gogap/game_record.h"

namespace gogap {

class SgfParseError : public std::runtime_error {
 public:
  SgfParseError(std::size_t position, std::string reason);
  std::size_t position() const { return position_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t position_;
  std::string reason_;
};

class UnsupportedSizeError : public std::runtime_error {
 public:
  explicit UnsupportedSizeError(int size);
  int size() const { return size_; }

 private:
  int size_;
};

// Parses one SGF game record (FF[4] subset). The mainline is the first
// child at every branch; skipped variations are counted in
// record.variation_count. Honors B, W, AB, AW, SZ, KM, RE, DT, PB, PW;
// other root properties are preserved verbatim for round-trips.
GameRecord parse_sgf(std::string_view text);

// Inverse of parse_sgf on the retained property subset:
// parse_sgf(serialize_sgf(r)) reproduces mainline, metadata and preserved
// root properties.
std::string serialize_sgf(const GameRecord& record);

// SGF point coordinates: lowercase letter pairs, "aa" = top-left.
// "tt" (on sizes <= 19) and the empty value both encode a pass.
std::string point_to_sgf(Point p);
std::optional<Point> sgf_to_point(std::string_view value, int size);

struct MatchRow {
  std::string match_id;
  GameRecord record;
  std::string black_id;
  std::string white_id;
  Date date;
  int month_index = 0;
  std::optional<std::string> tournament;
  std::string group = "none";  // treated | control | none
};

struct SkipEntry {
  std::string path;
  std::string reason;
};

struct MatchTable {
  std::vector<MatchRow> rows;
  std::vector<SkipEntry> skipped;  // sorted by path

  const MatchRow* find(const std::string& match_id) const;
};

class CorpusError : public std::runtime_error {
 public:
  enum class Kind { missing_metadata_file, duplicate_match_id, bad_metadata };
  CorpusError(Kind kind, std::string detail);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Joins the metadata CSV (header: match_id, sgf_path, black_id, white_id,
// date[YYYY-MM-DD], group, optionally tournament) with the SGF files under
// root. Records that fail to parse land in the skip report, not an error.
MatchTable load_corpus(const std::string& root, const std::string& metadata_csv);

}  // namespace gogap
