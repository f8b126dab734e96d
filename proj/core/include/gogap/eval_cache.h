#pragma once

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gogap/engine.h"

namespace gogap {

struct CacheKey {
  std::uint64_t position_key = 0;
  Color to_move = Color::black;
  std::string engine_id;
  int visits_budget = 0;
  double komi = 0.0;
  std::string ruleset;

  bool operator==(const CacheKey&) const = default;
  std::uint64_t hash() const;

  static CacheKey of(const BoardState& state, const EngineParams& params) {
    return CacheKey{state.position_key(), state.to_move(), params.engine_id,
                    params.visits_budget, params.effective_komi(state),
                    params.ruleset};
  }
};

class CacheError : public std::runtime_error {
 public:
  explicit CacheError(const std::string& detail);
};

// Persistent evaluation store: an append-only log of length-prefixed,
// checksummed records (<prefix>.log) plus a side index (<prefix>.idx) that
// is rebuilt by scanning whenever it is missing or stale. Writes are
// atomic at record granularity; a torn tail or a corrupt record is skipped
// and counted, never served. Puts are idempotent: a key that is already
// present is not appended again.
//
// Safe for concurrent use from multiple threads of one process.
class EvalCache {
 public:
  // Opens or creates <path_prefix>.log / <path_prefix>.idx. engine_id is
  // stamped into the header of a newly created log.
  explicit EvalCache(std::string path_prefix, std::string engine_id = "");
  ~EvalCache();
  EvalCache(const EvalCache&) = delete;
  EvalCache& operator=(const EvalCache&) = delete;

  std::optional<EngineEvaluation> get(const CacheKey& key);
  void put(const CacheKey& key, const EngineEvaluation& eval, int board_size);

  // Flushes the log and rewrites the index (atomically, via rename).
  void flush();

  struct Info {
    std::string path_prefix;
    std::string engine_id;
    std::uint32_t format_version = 0;
    std::uint64_t entries = 0;
    std::uint64_t corrupt_records = 0;
    std::uint64_t log_bytes = 0;
    bool index_rebuilt = false;
  };
  Info info() const;

  // One human-readable line per corrupt record encountered.
  std::vector<std::string> corrupt_report() const;

 private:
  struct Record {
    std::string payload;
    std::uint64_t next_offset = 0;
  };

  void load_index_or_scan();
  void scan_log();
  bool read_record_at(std::uint64_t offset, Record* out);
  std::optional<EngineEvaluation> get_locked(const CacheKey& key);
  void write_index_locked();

  mutable std::mutex mutex_;
  std::string prefix_;
  std::string engine_id_;
  std::FILE* log_ = nullptr;
  std::uint64_t log_end_ = 0;
  std::uint32_t version_ = 0;
  std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> offsets_;
  std::uint64_t entries_ = 0;
  std::vector<std::string> corrupt_;
  bool index_rebuilt_ = false;
  bool index_dirty_ = false;
};

// Engine wrapper that serves evaluations from the cache and records
// inner-engine traffic, so a warm re-run provably touches the engine only
// for unseen positions.
class CachingEngine : public Engine {
 public:
  CachingEngine(std::shared_ptr<Engine> inner, std::shared_ptr<EvalCache> cache)
      : inner_(std::move(inner)), cache_(std::move(cache)) {}

  std::string name() const override { return inner_->name(); }

  EngineEvaluation evaluate(const EngineQuery& query,
                            const EngineParams& params) override;

  std::uint64_t inner_queries() const { return inner_queries_.load(); }
  std::uint64_t cache_hits() const { return cache_hits_.load(); }

 private:
  std::shared_ptr<Engine> inner_;
  std::shared_ptr<EvalCache> cache_;
  std::atomic<std::uint64_t> inner_queries_{0};
  std::atomic<std::uint64_t> cache_hits_{0};
};

}  // namespace gogap
