#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "fim/core.hpp"

namespace fim {

struct FrequentItemset {
  ItemSet itemset;
  Count count = 0;

  std::size_t level() const { return itemset.size(); }

  friend bool operator==(const FrequentItemset&, const FrequentItemset&) = default;
};

struct LevelSummary {
  std::size_t level = 0;
  Count candidate_count = 0;
  Count frequent_count = 0;

  friend bool operator==(const LevelSummary&, const LevelSummary&) = default;
};

struct MiningResult {
  std::vector<FrequentItemset> frequent;  // lexicographic by itemset
  std::vector<LevelSummary> levels;
  ItemSet ignored;
  Count n_transactions = 0;
};

/// Thrown when a RunControl deadline passes mid-run.
class DeadlineExceeded : public std::runtime_error {
 public:
  DeadlineExceeded() : std::runtime_error("deadline exceeded") {}
};

/// Execution knobs that do not change results.
struct RunControl {
  unsigned threads = 0;  // 0: hardware concurrency
  std::optional<std::chrono::steady_clock::time_point> deadline;

  bool expired() const { return deadline && std::chrono::steady_clock::now() >= *deadline; }
  void check() const {
    if (expired()) throw DeadlineExceeded();
  }
  unsigned worker_count() const;
};

using ItemSetSet = std::unordered_set<ItemSet, ItemSetHash>;

/// Level-wise Apriori with ubiquitous-item filtering applied first.
MiningResult mine_frequent(const TransactionDatabase& db, const MiningParams& params,
                           const RunControl& control = {});

/// Joins (k-1)-sets that share their first k-2 items. Input must be sorted.
std::vector<ItemSet> candidate_join(std::span<const ItemSet> prev_level);

/// Keeps candidates whose every (k-1)-subset is in `prev_frequent`.
std::vector<ItemSet> candidate_prune(std::span<const ItemSet> candidates, const ItemSetSet& prev_frequent);

/// Support counts for a batch of candidates in one pass over the database.
std::vector<Count> count_candidates(const TransactionDatabase& db, std::span<const ItemSet> candidates,
                                    const RunControl& control = {});

}  // namespace fim
