#include "fim/apriori.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <numeric>
#include <thread>

namespace fim {

namespace {

using Dense = std::uint32_t;

// Itemsets of one size packed back to back.
struct FlatLevel {
  std::size_t k = 0;
  std::vector<Dense> items;

  std::size_t size() const { return k == 0 ? 0 : items.size() / k; }
  std::span<const Dense> at(std::size_t i) const { return {items.data() + i * k, k}; }
};

bool same_prefix(std::span<const Dense> a, std::span<const Dense> b, std::size_t len) {
  return std::equal(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(len), b.begin());
}

// Joins a lexicographically sorted level of (k-1)-sets into k-sets. Output is
// sorted because each block of shared prefixes is walked in order.
FlatLevel join_level(const FlatLevel& prev) {
  FlatLevel out;
  out.k = prev.k + 1;
  const std::size_t prefix = prev.k - 1;
  const std::size_t n = prev.size();
  for (std::size_t i = 0; i < n;) {
    std::size_t block_end = i + 1;
    while (block_end < n && same_prefix(prev.at(i), prev.at(block_end), prefix)) ++block_end;
    for (std::size_t a = i; a < block_end; ++a) {
      auto left = prev.at(a);
      for (std::size_t b = a + 1; b < block_end; ++b) {
        out.items.insert(out.items.end(), left.begin(), left.end());
        out.items.push_back(prev.at(b).back());
      }
    }
    i = block_end;
  }
  return out;
}

// Drops candidates with a (k-1)-subset missing from the previous level. The two
// subsets that produced a candidate through the join are skipped.
template <typename Contains>
FlatLevel prune_level(const FlatLevel& candidates, Contains&& contains) {
  FlatLevel out;
  out.k = candidates.k;
  const std::size_t k = candidates.k;
  if (k < 3) return candidates;
  std::vector<Dense> subset(k - 1);
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    auto cand = candidates.at(c);
    bool keep = true;
    for (std::size_t skip = 0; skip + 2 < k && keep; ++skip) {
      std::size_t w = 0;
      for (std::size_t p = 0; p < k; ++p) {
        if (p != skip) subset[w++] = cand[p];
      }
      keep = contains(std::span<const Dense>(subset));
    }
    if (keep) out.items.insert(out.items.end(), cand.begin(), cand.end());
  }
  return out;
}

// Prefix trie over unique, lexicographically sorted candidates. Counting walks
// each transaction down the trie once, merging the sorted transaction against
// the sorted child labels of every reached node.
class CandidateTrie {
 public:
  explicit CandidateTrie(const std::vector<std::span<const Dense>>& candidates) {
    nodes_.push_back(Node{});
    labels_.push_back(0);
    struct Pending {
      std::uint32_t node;
      std::size_t lo, hi, depth;
    };
    std::vector<Pending> queue{{0, 0, candidates.size(), 0}};
    for (std::size_t q = 0; q < queue.size(); ++q) {
      auto [node, lo, hi, depth] = queue[q];
      if (lo < hi && candidates[lo].size() == depth) {
        nodes_[node].terminal = static_cast<std::uint32_t>(lo);
        ++lo;
      }
      if (lo == hi) continue;
      nodes_[node].first_child = static_cast<std::uint32_t>(nodes_.size());
      for (std::size_t i = lo; i < hi;) {
        std::size_t j = i + 1;
        while (j < hi && candidates[j][depth] == candidates[i][depth]) ++j;
        const auto child = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back(Node{});
        labels_.push_back(candidates[i][depth]);
        queue.push_back({child, i, j, depth + 1});
        i = j;
      }
      nodes_[node].child_count = static_cast<std::uint32_t>(nodes_.size()) - nodes_[node].first_child;
    }
    // Children always follow their parent, so a reverse sweep sees them first.
    for (std::size_t i = nodes_.size(); i-- > 0;) {
      Node& nd = nodes_[i];
      if (nd.terminal != kNone || nd.child_count == 0) {
        nd.min_remaining = 0;
        continue;
      }
      std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
      for (std::uint32_t c = nd.first_child; c < nd.first_child + nd.child_count; ++c) {
        best = std::min(best, nodes_[c].min_remaining);
      }
      nd.min_remaining = best + 1;
    }
  }

  void count(std::span<const Dense> transaction, std::span<Count> counts) const {
    visit(0, transaction, 0, counts);
  }

 private:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  struct Node {
    std::uint32_t first_child = 0;
    std::uint32_t child_count = 0;
    std::uint32_t terminal = kNone;
    std::uint32_t min_remaining = 0;
  };

  void visit(std::uint32_t node, std::span<const Dense> t, std::size_t pos, std::span<Count> counts) const {
    const Node& nd = nodes_[node];
    if (nd.terminal != kNone) ++counts[nd.terminal];
    if (nd.child_count == 0) return;
    const std::size_t need = std::max<std::uint32_t>(nd.min_remaining, 1);
    std::uint32_t c = nd.first_child;
    const std::uint32_t c_end = nd.first_child + nd.child_count;
    std::size_t i = pos;
    while (i + need <= t.size() && c < c_end) {
      const Dense label = labels_[c];
      if (t[i] < label) {
        ++i;
      } else if (t[i] > label) {
        ++c;
      } else {
        visit(c, t, i + 1, counts);
        ++i;
        ++c;
      }
    }
  }

  std::vector<Node> nodes_;
  std::vector<Dense> labels_;
};

// Transactions over dense ids, packed with offsets.
struct DenseTransactions {
  std::vector<Dense> items;
  std::vector<std::size_t> offsets{0};

  std::size_t size() const { return offsets.size() - 1; }
  std::span<const Dense> at(std::size_t i) const {
    return {items.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }
  void push(std::span<const Dense> t) {
    items.insert(items.end(), t.begin(), t.end());
    offsets.push_back(items.size());
  }
};

constexpr std::size_t kCheckEvery = 1024;
constexpr std::size_t kMinPerWorker = 4096;

std::vector<Count> count_with_trie(const CandidateTrie& trie, std::size_t candidate_count,
                                   const DenseTransactions& txs, std::size_t min_len,
                                   const RunControl& control) {
  const std::size_t n = txs.size();
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(control.worker_count(), n / kMinPerWorker));

  auto run = [&](std::size_t lo, std::size_t hi, std::vector<Count>& counts, std::atomic<bool>& stop) {
    for (std::size_t i = lo; i < hi; ++i) {
      if ((i - lo) % kCheckEvery == 0 && (stop.load(std::memory_order_relaxed) || control.expired())) {
        stop.store(true, std::memory_order_relaxed);
        return;
      }
      auto t = txs.at(i);
      if (t.size() >= min_len) trie.count(t, counts);
    }
  };

  std::atomic<bool> stop{false};
  std::vector<Count> total(candidate_count, 0);
  if (workers == 1) {
    run(0, n, total, stop);
  } else {
    std::vector<std::vector<Count>> partial(workers, std::vector<Count>(candidate_count, 0));
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      std::size_t lo = n * w / workers;
      std::size_t hi = n * (w + 1) / workers;
      pool.emplace_back(run, lo, hi, std::ref(partial[w]), std::ref(stop));
    }
    for (auto& th : pool) th.join();
    for (const auto& part : partial) {
      for (std::size_t c = 0; c < candidate_count; ++c) total[c] += part[c];
    }
  }
  if (stop.load()) throw DeadlineExceeded();
  return total;
}

bool flat_less(std::span<const Dense> a, std::span<const Dense> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

ItemSet to_itemset(std::span<const Dense> dense, std::span<const ItemId> dictionary) {
  std::vector<ItemId> ids;
  ids.reserve(dense.size());
  for (Dense d : dense) ids.push_back(dictionary[d]);
  return ItemSet::from_canonical(std::move(ids));
}

FlatLevel to_flat(std::span<const ItemSet> sets, std::size_t k) {
  FlatLevel flat;
  flat.k = k;
  for (const auto& s : sets) {
    if (s.size() != k) throw std::invalid_argument("itemsets in one level must share a size");
    flat.items.insert(flat.items.end(), s.begin(), s.end());
  }
  return flat;
}

std::vector<ItemSet> from_flat(const FlatLevel& flat) {
  std::vector<ItemSet> out;
  out.reserve(flat.size());
  for (std::size_t i = 0; i < flat.size(); ++i) {
    auto s = flat.at(i);
    out.push_back(ItemSet::from_canonical({s.begin(), s.end()}));
  }
  return out;
}

}  // namespace

unsigned RunControl::worker_count() const {
  if (threads != 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<ItemSet> candidate_join(std::span<const ItemSet> prev_level) {
  if (prev_level.empty()) return {};
  const std::size_t k = prev_level.front().size();
  if (k == 0) throw std::invalid_argument("cannot join empty itemsets");
  return from_flat(join_level(to_flat(prev_level, k)));
}

std::vector<ItemSet> candidate_prune(std::span<const ItemSet> candidates, const ItemSetSet& prev_frequent) {
  if (candidates.empty()) return {};
  const std::size_t k = candidates.front().size();
  FlatLevel flat = to_flat(candidates, k);
  // Joined candidates skip the two generating subsets; a standalone prune
  // checks every (k-1)-subset.
  FlatLevel out;
  out.k = k;
  for (std::size_t c = 0; c < flat.size(); ++c) {
    auto cand = flat.at(c);
    bool keep = true;
    for (std::size_t skip = 0; skip < k && keep; ++skip) {
      std::vector<ItemId> subset;
      subset.reserve(k - 1);
      for (std::size_t p = 0; p < k; ++p) {
        if (p != skip) subset.push_back(cand[p]);
      }
      if (subset.empty()) break;
      keep = prev_frequent.contains(ItemSet::from_canonical(std::move(subset)));
    }
    if (keep) out.items.insert(out.items.end(), cand.begin(), cand.end());
  }
  return from_flat(out);
}

std::vector<Count> count_candidates(const TransactionDatabase& db, std::span<const ItemSet> candidates,
                                    const RunControl& control) {
  std::vector<Count> counts(candidates.size(), 0);
  std::vector<std::vector<Dense>> dense(candidates.size());
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].empty()) throw std::invalid_argument("empty candidate");
    bool present = true;
    for (ItemId id : candidates[i]) {
      auto idx = db.dense_index(id);
      if (!idx) {
        present = false;
        break;
      }
      dense[i].push_back(static_cast<Dense>(*idx));
    }
    if (present) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return flat_less(dense[a], dense[b]);
  });

  // Duplicated candidates share one trie terminal.
  std::vector<std::span<const Dense>> unique;
  std::vector<std::size_t> slot(candidates.size(), 0);
  std::size_t min_len = std::numeric_limits<std::size_t>::max();
  for (std::size_t idx : order) {
    if (unique.empty() || !std::ranges::equal(unique.back(), dense[idx])) {
      unique.emplace_back(dense[idx]);
      min_len = std::min(min_len, dense[idx].size());
    }
    slot[idx] = unique.size() - 1;
  }
  if (unique.empty()) return counts;

  DenseTransactions txs;
  for (const auto& t : db.transactions()) {
    std::vector<Dense> row;
    row.reserve(t.size());
    for (ItemId id : t) row.push_back(static_cast<Dense>(*db.dense_index(id)));
    txs.push(row);
  }

  CandidateTrie trie(unique);
  std::vector<Count> unique_counts = count_with_trie(trie, unique.size(), txs, min_len, control);
  for (std::size_t idx : order) counts[idx] = unique_counts[slot[idx]];
  return counts;
}

MiningResult mine_frequent(const TransactionDatabase& db, const MiningParams& params, const RunControl& control) {
  params.validate();

  MiningResult result;
  result.n_transactions = db.size();

  std::optional<FilterResult> filtered;
  if (params.ubiquitousness) {
    filtered = filter_ubiquitous(db, *params.ubiquitousness);
    result.ignored = filtered->ignored;
  }
  const TransactionDatabase& work = filtered ? filtered->filtered : db;
  const Count min_count = min_support_count(work.size(), params.support);
  const std::size_t max_len = params.max_itemset_len.value_or(std::numeric_limits<std::size_t>::max());

  // Level 1 comes straight from the census. Frequent singletons are renumbered
  // densely in id order so later levels index small arrays.
  std::vector<ItemId> frequent_items;
  std::vector<std::uint32_t> remap(work.item_count(), std::numeric_limits<std::uint32_t>::max());
  for (std::size_t i = 0; i < work.item_count(); ++i) {
    if (work.census()[i] >= min_count) {
      remap[i] = static_cast<std::uint32_t>(frequent_items.size());
      frequent_items.push_back(work.items()[i]);
      result.frequent.push_back({ItemSet{work.items()[i]}, work.census()[i]});
    }
  }
  if (work.item_count() > 0) {
    result.levels.push_back({1, work.item_count(), frequent_items.size()});
  }

  DenseTransactions txs;
  {
    std::vector<Dense> row;
    for (const auto& t : work.transactions()) {
      row.clear();
      for (ItemId id : t) {
        std::uint32_t d = remap[*work.dense_index(id)];
        if (d != std::numeric_limits<std::uint32_t>::max()) row.push_back(d);
      }
      if (row.size() >= 2) txs.push(row);
    }
  }

  FlatLevel level;
  level.k = 1;
  level.items.resize(frequent_items.size());
  std::iota(level.items.begin(), level.items.end(), Dense{0});

  for (std::size_t k = 2; k <= max_len && level.size() >= 2; ++k) {
    control.check();
    const FlatLevel& prev = level;
    FlatLevel candidates = prune_level(join_level(prev), [&](std::span<const Dense> subset) {
      std::size_t lo = 0, hi = prev.size();
      while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (flat_less(prev.at(mid), subset)) lo = mid + 1; else hi = mid;
      }
      return lo < prev.size() && std::ranges::equal(prev.at(lo), subset);
    });
    if (candidates.size() == 0) break;

    std::vector<std::span<const Dense>> views;
    views.reserve(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) views.push_back(candidates.at(c));
    CandidateTrie trie(views);
    std::vector<Count> counts = count_with_trie(trie, candidates.size(), txs, k, control);

    FlatLevel next;
    next.k = k;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (counts[c] >= min_count) {
        auto cand = candidates.at(c);
        next.items.insert(next.items.end(), cand.begin(), cand.end());
        result.frequent.push_back({to_itemset(cand, frequent_items), counts[c]});
      }
    }
    result.levels.push_back({k, candidates.size(), next.size()});
    level = std::move(next);
  }

  std::sort(result.frequent.begin(), result.frequent.end(),
            [](const FrequentItemset& a, const FrequentItemset& b) { return a.itemset < b.itemset; });
  return result;
}

}  // namespace fim
