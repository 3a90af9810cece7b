#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fim {

/// Item identifier as it appears in FIMI files.
using ItemId = std::uint32_t;

/// Number of transactions (occurrences, database sizes).
using Count = std::uint64_t;

/// A canonical set of items: strictly increasing, no duplicates.
class ItemSet {
 public:
  ItemSet() = default;
  ItemSet(std::initializer_list<ItemId> items);

  /// Sorts and deduplicates arbitrary input.
  static ItemSet from_unsorted(std::vector<ItemId> items);

  /// Adopts a vector that the caller guarantees is strictly increasing.
  static ItemSet from_canonical(std::vector<ItemId> items);

  std::span<const ItemId> items() const { return items_; }
  const std::vector<ItemId>& vector() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  ItemId operator[](std::size_t i) const { return items_[i]; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  bool contains(ItemId item) const;
  bool is_subset_of(const ItemSet& other) const;

  /// Items joined by `sep`, e.g. "1|3".
  std::string join(char sep) const;

  friend bool operator==(const ItemSet&, const ItemSet&) = default;
  friend auto operator<=>(const ItemSet& a, const ItemSet& b) { return a.items_ <=> b.items_; }

 private:
  std::vector<ItemId> items_;
};

struct ItemSetHash {
  std::size_t operator()(const ItemSet& s) const noexcept;
};

/// Exact non-negative rational used for the support, confidence and
/// ubiquitousness thresholds. Always stored in lowest terms.
class Fraction {
 public:
  constexpr Fraction() = default;
  Fraction(std::uint64_t numerator, std::uint64_t denominator);

  /// Accepts "0.3", "1", ".5", "1.0" and "2/3". Throws std::invalid_argument.
  static Fraction parse(std::string_view text);

  std::uint64_t numerator() const { return num_; }
  std::uint64_t denominator() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// Decimal text when the value has a terminating expansion, "a/b" otherwise.
  std::string to_string() const;

  bool in_unit_interval() const { return num_ <= den_; }
  bool is_zero() const { return num_ == 0; }

  friend bool operator==(const Fraction&, const Fraction&) = default;
  friend std::strong_ordering operator<=>(const Fraction& a, const Fraction& b);

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

/// count/total >= f, exactly.
bool ratio_at_least(Count count, Count total, Fraction f);

/// count/total > f, exactly.
bool ratio_exceeds(Count count, Count total, Fraction f);

/// Smallest m with m/n >= s. A basket is frequent iff its count reaches it.
Count min_support_count(Count n, Fraction s);

/// One recorded transaction. Empty only after ubiquitous filtering.
using Transaction = ItemSet;

/// Immutable transaction collection with a per-item occurrence census.
///
/// Items are kept in a dense dictionary: `items()` lists the distinct ids in
/// ascending order and `census()` is parallel to it, so position in `items()`
/// is the dense index used by the miners. The mapping is monotone, which keeps
/// canonical ordering identical in both id spaces.
class TransactionDatabase {
 public:
  TransactionDatabase() = default;
  explicit TransactionDatabase(std::vector<Transaction> transactions);

  Count size() const { return transactions_.size(); }
  bool empty() const { return transactions_.empty(); }
  const std::vector<Transaction>& transactions() const { return transactions_; }

  std::span<const ItemId> items() const { return items_; }
  std::span<const Count> census() const { return census_; }
  std::size_t item_count() const { return items_.size(); }

  /// Occurrence count of `item`; 0 when absent.
  Count census_of(ItemId item) const;
  std::optional<std::size_t> dense_index(ItemId item) const;

 private:
  std::vector<Transaction> transactions_;
  std::vector<ItemId> items_;
  std::vector<Count> census_;
};

TransactionDatabase build_database(const std::vector<std::vector<ItemId>>& transactions);

/// Number of transactions containing `basket`. Throws on an empty basket.
Count basket_support_count(const TransactionDatabase& db, const ItemSet& basket);

struct FilterResult {
  TransactionDatabase filtered;
  ItemSet ignored;
};

/// Drops every item whose support is strictly above `u`. Transactions that
/// lose all their items stay in the database, so n is unchanged.
FilterResult filter_ubiquitous(const TransactionDatabase& db, Fraction u);

/// Binary entropy in bits of an item present with probability p.
double item_entropy(double p);

class InvalidParams : public std::invalid_argument {
 public:
  InvalidParams(std::string field, const std::string& what)
      : std::invalid_argument(what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct MiningParams {
  Fraction support;
  Fraction confidence;
  std::optional<Fraction> ubiquitousness;
  std::optional<std::size_t> max_itemset_len;

  /// Throws InvalidParams naming the offending field.
  void validate() const;

  friend bool operator==(const MiningParams&, const MiningParams&) = default;
};

}  // namespace fim
