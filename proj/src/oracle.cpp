#include "fim/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fim::oracle {

namespace {

using Mask = std::uint32_t;

struct Universe {
  std::vector<ItemId> items;   // surviving items, ascending
  std::vector<Mask> rows;      // one bitmask per transaction
  Count n = 0;

  Count count(Mask basket) const {
    Count m = 0;
    for (Mask row : rows) m += (row & basket) == basket;
    return m;
  }

  ItemSet to_itemset(Mask mask) const {
    std::vector<ItemId> ids;
    for (std::size_t b = 0; b < items.size(); ++b) {
      if ((mask >> b) & 1u) ids.push_back(items[b]);
    }
    return ItemSet::from_canonical(std::move(ids));
  }
};

Universe make_universe(const TransactionDatabase& db, const MiningParams& params) {
  params.validate();
  Universe u;
  u.n = db.size();
  for (std::size_t i = 0; i < db.item_count(); ++i) {
    if (params.ubiquitousness && ratio_exceeds(db.census()[i], u.n, *params.ubiquitousness)) continue;
    u.items.push_back(db.items()[i]);
  }
  if (u.items.size() > kMaxUniverse) {
    throw std::length_error("brute-force oracle limited to " + std::to_string(kMaxUniverse) + " items, got " +
                            std::to_string(u.items.size()));
  }
  for (const auto& t : db.transactions()) {
    Mask row = 0;
    for (std::size_t b = 0; b < u.items.size(); ++b) {
      if (t.contains(u.items[b])) row |= Mask{1} << b;
    }
    u.rows.push_back(row);
  }
  return u;
}

std::vector<Mask> frequent_masks(const Universe& u, const MiningParams& params) {
  const Count min_count = min_support_count(u.n, params.support);
  const std::size_t max_len = params.max_itemset_len.value_or(std::numeric_limits<std::size_t>::max());
  std::vector<Mask> out;
  const Mask end = Mask{1} << u.items.size();
  for (Mask mask = 1; mask < end; ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > max_len) continue;
    if (u.count(mask) >= min_count) out.push_back(mask);
  }
  return out;
}

}  // namespace

std::vector<FrequentItemset> brute_force_frequent(const TransactionDatabase& db, const MiningParams& params) {
  Universe u = make_universe(db, params);
  std::vector<FrequentItemset> out;
  for (Mask mask : frequent_masks(u, params)) out.push_back({u.to_itemset(mask), u.count(mask)});
  std::sort(out.begin(), out.end(),
            [](const FrequentItemset& a, const FrequentItemset& b) { return a.itemset < b.itemset; });
  return out;
}

std::vector<AssociationRule> brute_force_rules(const TransactionDatabase& db, const MiningParams& params) {
  Universe u = make_universe(db, params);
  std::vector<AssociationRule> out;
  for (Mask x : frequent_masks(u, params)) {
    if (std::popcount(x) < 2) continue;
    const Count joint = u.count(x);
    if (joint == 0) continue;
    // Proper non-empty sub-masks of x.
    for (Mask lhs = (x - 1) & x; lhs != 0; lhs = (lhs - 1) & x) {
      const Mask rhs = x & ~lhs;
      const Count lhs_count = u.count(lhs);
      if (!ratio_at_least(joint, lhs_count, params.confidence)) continue;
      const Count rhs_count = u.count(rhs);
      AssociationRule rule{u.to_itemset(lhs), u.to_itemset(rhs), joint, lhs_count, rhs_count, 0.0};
      rule.lift = rule_lift(u.n, joint, lhs_count, rhs_count);
      out.push_back(std::move(rule));
    }
  }
  std::sort(out.begin(), out.end(), rule_less);
  return out;
}

Count possible_basket_count(std::uint32_t item_count) {
  if (item_count < 2) return 0;
  if (item_count >= 64) throw std::overflow_error("2^I exceeds 64 bits");
  return (Count{1} << item_count) - item_count - 1;
}

double expected_level_count(std::uint32_t item_count, std::uint32_t level, double avg_support) {
  if (level > item_count) throw std::invalid_argument("level exceeds item count");
  if (!(avg_support >= 0.0 && avg_support <= 1.0)) throw std::invalid_argument("average support outside [0,1]");
  double binom = 1.0;
  for (std::uint32_t i = 1; i <= level; ++i) {
    binom = binom * static_cast<double>(item_count - level + i) / static_cast<double>(i);
  }
  return binom * std::pow(avg_support, static_cast<double>(level));
}

Count ubiquitous_basket_count(const UbiquityCountInputs& in) {
  using Wide = unsigned __int128;
  if (in.ubiquitous >= 64) throw std::overflow_error("2^l exceeds 64 bits");
  const Wide scale = Wide{1} << in.ubiquitous;
  const Wide base = Wide{in.frequent_baskets} + in.frequent_singletons + 1;
  const Wide total = base * scale;
  const Wide subtract = Wide{in.frequent_singletons} + in.ubiquitous + 1;
  // Never negative: base * 2^l >= (m + 1) * 2^l >= m + l + 1.
  const Wide result = total - subtract;
  if (result > std::numeric_limits<Count>::max()) throw std::overflow_error("basket count exceeds 64 bits");
  return static_cast<Count>(result);
}

}  // namespace fim::oracle
