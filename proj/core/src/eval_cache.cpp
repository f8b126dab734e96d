#include "gogap/eval_cache.h"

#include <cstring>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "gogap/sgf.h"

namespace gogap {
namespace {

using nlohmann::json;

constexpr char kLogMagic[4] = {'G', 'G', 'E', 'L'};
constexpr char kIdxMagic[4] = {'G', 'G', 'E', 'I'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::uint32_t kMaxRecordBytes = 1u << 28;

std::uint64_t fnv1a(const void* data, std::size_t len,
                    std::uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}
void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}
std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}
std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

// Cache payload: the full key (hash collisions are checked against it) and
// the evaluation, with moves in size-independent SGF coordinates ("" = pass).
json key_to_json(const CacheKey& k) {
  return {{"position_key", k.position_key},
          {"to_move", std::string(1, color_char(k.to_move))},
          {"engine_id", k.engine_id},
          {"visits_budget", k.visits_budget},
          {"komi", k.komi},
          {"ruleset", k.ruleset}};
}

CacheKey key_from_json(const json& j) {
  CacheKey k;
  k.position_key = j.at("position_key").get<std::uint64_t>();
  k.to_move = j.at("to_move").get<std::string>() == "w" ? Color::white
                                                        : Color::black;
  k.engine_id = j.at("engine_id").get<std::string>();
  k.visits_budget = j.at("visits_budget").get<int>();
  k.komi = j.at("komi").get<double>();
  k.ruleset = j.at("ruleset").get<std::string>();
  return k;
}

std::string record_payload(const CacheKey& key, const EngineEvaluation& eval,
                           int board_size) {
  json cands = json::array();
  for (const CandidateEval& c : eval.candidates) {
    cands.push_back({c.move.is_pass() ? "" : point_to_sgf(c.move.point_),
                     c.win_prob, c.visits});
  }
  json j = {{"key", key_to_json(key)},
            {"size", board_size},
            {"state_key", eval.state_key},
            {"turn", std::string(1, color_char(eval.to_move))},
            {"root_winrate", eval.root_value},
            {"move_infos", std::move(cands)},
            {"engine_id", eval.engine_id},
            {"visits_budget", eval.visits_budget}};
  return j.dump();
}

void payload_to_entry(const std::string& payload, CacheKey* key,
                      EngineEvaluation* eval) {
  json j = json::parse(payload);
  *key = key_from_json(j.at("key"));
  int size = j.at("size").get<int>();
  eval->state_key = j.at("state_key").get<std::uint64_t>();
  eval->to_move = j.at("turn").get<std::string>() == "w" ? Color::white
                                                         : Color::black;
  eval->root_value = j.at("root_winrate").get<double>();
  eval->engine_id = j.at("engine_id").get<std::string>();
  eval->visits_budget = j.at("visits_budget").get<int>();
  eval->candidates.clear();
  for (const json& c : j.at("move_infos")) {
    std::string coord = c.at(0).get<std::string>();
    Move m;
    if (coord.empty()) {
      m = Move::pass(eval->to_move);
    } else {
      auto p = sgf_to_point(coord, size);
      if (!p) throw CacheError("bad coordinate in cache record");
      m = Move::play(eval->to_move, *p);
    }
    eval->candidates.push_back(
        {m, c.at(1).get<double>(), c.at(2).get<std::int64_t>()});
  }
  if (eval->candidates.empty()) throw CacheError("cache record has no candidates");
  eval->best_move = eval->candidates.front().move;
}

}  // namespace

std::uint64_t CacheKey::hash() const {
  std::string bytes;
  put_u64(bytes, position_key);
  bytes += color_char(to_move);
  bytes += engine_id;
  bytes += '\0';
  put_u32(bytes, static_cast<std::uint32_t>(visits_budget));
  std::uint64_t komi_bits;
  static_assert(sizeof(komi_bits) == sizeof(komi));
  std::memcpy(&komi_bits, &komi, sizeof(komi_bits));
  put_u64(bytes, komi_bits);
  bytes += ruleset;
  return fnv1a(bytes.data(), bytes.size());
}

CacheError::CacheError(const std::string& detail)
    : std::runtime_error("cache error: " + detail) {}

EvalCache::EvalCache(std::string path_prefix, std::string engine_id)
    : prefix_(std::move(path_prefix)), engine_id_(std::move(engine_id)) {
  const std::string log_path = prefix_ + ".log";
  bool fresh = !std::filesystem::exists(log_path);
  // "a+b": reads seek freely, writes always append — the log is append-only
  // by construction.
  log_ = std::fopen(log_path.c_str(), "a+b");
  if (!log_) throw CacheError("cannot open " + log_path);

  if (fresh) {
    std::string header(kLogMagic, 4);
    put_u32(header, kFormatVersion);
    put_u32(header, static_cast<std::uint32_t>(engine_id_.size()));
    header += engine_id_;
    if (std::fwrite(header.data(), 1, header.size(), log_) != header.size())
      throw CacheError("cannot write log header");
    std::fflush(log_);
    version_ = kFormatVersion;
    log_end_ = header.size();
    index_dirty_ = true;
    return;
  }

  // Existing log: validate the header, then load the index or rescan.
  std::fseek(log_, 0, SEEK_SET);
  unsigned char head[12];
  if (std::fread(head, 1, sizeof(head), log_) != sizeof(head) ||
      std::memcmp(head, kLogMagic, 4) != 0)
    throw CacheError("bad log header in " + log_path);
  version_ = get_u32(head + 4);
  if (version_ != kFormatVersion)
    throw CacheError("unsupported cache format version " +
                     std::to_string(version_));
  std::uint32_t id_len = get_u32(head + 8);
  if (id_len > 4096) throw CacheError("implausible engine_id length");
  std::string id(id_len, '\0');
  if (std::fread(id.data(), 1, id_len, log_) != id_len)
    throw CacheError("truncated log header");
  engine_id_ = id;
  load_index_or_scan();
}

EvalCache::~EvalCache() {
  try {
    flush();
  } catch (...) {
    // Destructor must not throw; a stale index is rebuilt on next open.
  }
  if (log_) std::fclose(log_);
}

void EvalCache::load_index_or_scan() {
  std::fseek(log_, 0, SEEK_END);
  std::uint64_t actual_size = static_cast<std::uint64_t>(std::ftell(log_));

  const std::string idx_path = prefix_ + ".idx";
  std::FILE* idx = std::fopen(idx_path.c_str(), "rb");
  if (idx) {
    std::vector<unsigned char> buf;
    std::fseek(idx, 0, SEEK_END);
    long n = std::ftell(idx);
    std::fseek(idx, 0, SEEK_SET);
    buf.resize(n > 0 ? static_cast<std::size_t>(n) : 0);
    bool ok = n >= 24 && std::fread(buf.data(), 1, buf.size(), idx) == buf.size();
    std::fclose(idx);
    if (ok && std::memcmp(buf.data(), kIdxMagic, 4) == 0 &&
        get_u32(buf.data() + 4) == kFormatVersion &&
        get_u64(buf.data() + 8) == actual_size) {
      std::uint64_t count = get_u64(buf.data() + 16);
      if (buf.size() == 24 + count * 16) {
        for (std::uint64_t i = 0; i < count; ++i) {
          std::uint64_t h = get_u64(buf.data() + 24 + i * 16);
          std::uint64_t off = get_u64(buf.data() + 24 + i * 16 + 8);
          offsets_[h].push_back(off);
          ++entries_;
        }
        log_end_ = actual_size;
        return;
      }
    }
  }
  index_rebuilt_ = true;
  index_dirty_ = true;
  scan_log();
}

void EvalCache::scan_log() {
  std::fseek(log_, 0, SEEK_END);
  std::uint64_t size = static_cast<std::uint64_t>(std::ftell(log_));
  std::uint64_t offset = 12 + engine_id_.size();
  while (offset < size) {
    Record rec;
    if (!read_record_at(offset, &rec)) {
      // Framing is unrecoverable past a bad length/torn tail.
      corrupt_.push_back("log tail ignored from offset " +
                         std::to_string(offset));
      break;
    }
    if (rec.payload.empty()) {
      // Checksum mismatch with intact framing: skip just this record.
      corrupt_.push_back("corrupt record at offset " + std::to_string(offset));
      offset = rec.next_offset;
      continue;
    }
    try {
      CacheKey key;
      EngineEvaluation eval;
      payload_to_entry(rec.payload, &key, &eval);
      offsets_[key.hash()].push_back(offset);
      ++entries_;
    } catch (const std::exception& e) {
      corrupt_.push_back("undecodable record at offset " +
                         std::to_string(offset) + ": " + e.what());
    }
    offset = rec.next_offset;
  }
  log_end_ = size;
}

bool EvalCache::read_record_at(std::uint64_t offset, Record* out) {
  std::fseek(log_, 0, SEEK_END);
  std::uint64_t size = static_cast<std::uint64_t>(std::ftell(log_));
  if (offset + 4 > size) return false;
  std::fseek(log_, static_cast<long>(offset), SEEK_SET);
  unsigned char len_buf[4];
  if (std::fread(len_buf, 1, 4, log_) != 4) return false;
  std::uint32_t len = get_u32(len_buf);
  if (len == 0 || len > kMaxRecordBytes || offset + 4 + len + 8 > size)
    return false;
  std::string payload(len, '\0');
  unsigned char sum_buf[8];
  if (std::fread(payload.data(), 1, len, log_) != len ||
      std::fread(sum_buf, 1, 8, log_) != 8)
    return false;
  out->next_offset = offset + 4 + len + 8;
  if (fnv1a(payload.data(), payload.size()) != get_u64(sum_buf)) {
    out->payload.clear();  // torn or bit-rotted: framing ok, content not
    return true;
  }
  out->payload = std::move(payload);
  return true;
}

std::optional<EngineEvaluation> EvalCache::get(const CacheKey& key) {
  std::lock_guard<std::mutex> lock(mutex_);
  return get_locked(key);
}

std::optional<EngineEvaluation> EvalCache::get_locked(const CacheKey& key) {
  auto it = offsets_.find(key.hash());
  if (it == offsets_.end()) return std::nullopt;
  // Last write wins on identical keys.
  for (auto rit = it->second.rbegin(); rit != it->second.rend(); ++rit) {
    Record rec;
    if (!read_record_at(*rit, &rec) || rec.payload.empty()) {
      corrupt_.push_back("corrupt record at offset " + std::to_string(*rit));
      continue;
    }
    try {
      CacheKey stored;
      EngineEvaluation eval;
      payload_to_entry(rec.payload, &stored, &eval);
      if (stored == key) return eval;
    } catch (const std::exception& e) {
      corrupt_.push_back("undecodable record at offset " +
                         std::to_string(*rit) + ": " + e.what());
    }
  }
  return std::nullopt;
}

void EvalCache::put(const CacheKey& key, const EngineEvaluation& eval,
                    int board_size) {
  std::lock_guard<std::mutex> lock(mutex_);
  if (get_locked(key)) return;  // idempotent: one durable record per key

  std::string record;
  std::string payload = record_payload(key, eval, board_size);
  put_u32(record, static_cast<std::uint32_t>(payload.size()));
  record += payload;
  put_u64(record, fnv1a(payload.data(), payload.size()));

  std::fseek(log_, 0, SEEK_END);
  std::uint64_t offset = static_cast<std::uint64_t>(std::ftell(log_));
  if (std::fwrite(record.data(), 1, record.size(), log_) != record.size())
    throw CacheError("write failed on " + prefix_ + ".log");
  std::fflush(log_);
  offsets_[key.hash()].push_back(offset);
  ++entries_;
  log_end_ = offset + record.size();
  index_dirty_ = true;
}

void EvalCache::flush() {
  std::lock_guard<std::mutex> lock(mutex_);
  if (log_) std::fflush(log_);
  if (index_dirty_) write_index_locked();
}

void EvalCache::write_index_locked() {
  std::string body(kIdxMagic, 4);
  put_u32(body, kFormatVersion);
  put_u64(body, log_end_);
  std::uint64_t count = 0;
  for (const auto& [h, offs] : offsets_) count += offs.size();
  put_u64(body, count);
  for (const auto& [h, offs] : offsets_) {
    for (std::uint64_t off : offs) {
      put_u64(body, h);
      put_u64(body, off);
    }
  }
  const std::string tmp = prefix_ + ".idx.tmp";
  std::FILE* f = std::fopen(tmp.c_str(), "wb");
  if (!f) throw CacheError("cannot write " + tmp);
  bool ok = std::fwrite(body.data(), 1, body.size(), f) == body.size();
  ok = (std::fclose(f) == 0) && ok;
  if (!ok) throw CacheError("short write on " + tmp);
  std::filesystem::rename(tmp, prefix_ + ".idx");
  index_dirty_ = false;
}

EvalCache::Info EvalCache::info() const {
  std::lock_guard<std::mutex> lock(mutex_);
  Info info;
  info.path_prefix = prefix_;
  info.engine_id = engine_id_;
  info.format_version = version_ == 0 ? kFormatVersion : version_;
  info.entries = entries_;
  info.corrupt_records = corrupt_.size();
  info.log_bytes = log_end_;
  info.index_rebuilt = index_rebuilt_;
  return info;
}

std::vector<std::string> EvalCache::corrupt_report() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return corrupt_;
}

EngineEvaluation CachingEngine::evaluate(const EngineQuery& query,
                                         const EngineParams& params) {
  CacheKey key = CacheKey::of(query.state, params);
  if (auto hit = cache_->get(key)) {
    cache_hits_.fetch_add(1);
    return *hit;
  }
  EngineEvaluation eval = inner_->evaluate(query, params);
  inner_queries_.fetch_add(1);
  cache_->put(key, eval, query.state.size());
  return eval;
}

}  // namespace gogap
