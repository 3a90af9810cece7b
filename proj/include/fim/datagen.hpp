#pragma once

#include <string_view>
#include <vector>

#include "fim/core.hpp"

namespace fim::datagen {

/// Recorded in generator output so runs can be reproduced elsewhere.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64 seeded per item via splitmix64(seed, item index); partial Fisher-Yates";

inline constexpr Count kDefaultTransactions = 10000;

struct ItemGroup {
  Count item_count = 0;
  Fraction target_support;

  friend bool operator==(const ItemGroup&, const ItemGroup&) = default;
};

struct GeneratorSpec {
  std::vector<ItemGroup> groups;
  Count n_transactions = kDefaultTransactions;
  std::uint64_t seed = 0;

  Count total_items() const;

  /// Number of transactions each item of `group` is placed into.
  Count occurrences(const ItemGroup& group) const;

  /// Throws std::invalid_argument on an empty or unplaceable spec.
  void validate() const;
};

/// Parses "10:0.3,5:0.5,2:1.0". Throws std::invalid_argument naming the bad token.
std::vector<ItemGroup> parse_groups(std::string_view text);

/// FIM1..FIM5 compositions, with the default transaction count.
GeneratorSpec experiment_spec(std::string_view name);

/// Items get ids 1..I in group order. Each item lands in exactly
/// round(support * n) distinct transactions, chosen independently of every
/// other item from its own random substream.
TransactionDatabase generate(const GeneratorSpec& spec);

}  // namespace fim::datagen
