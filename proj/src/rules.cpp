#include "fim/rules.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace fim {

bool rule_less(const AssociationRule& a, const AssociationRule& b) {
  if (a.lhs != b.lhs) return a.lhs < b.lhs;
  return a.rhs < b.rhs;
}

double rule_lift(Count n, Count joint_count, Count lhs_count, Count rhs_count) {
  if (n == 0 || lhs_count == 0 || rhs_count == 0) {
    throw std::domain_error("lift needs positive transaction, lhs and rhs counts");
  }
  const double nd = static_cast<double>(n);
  return (static_cast<double>(joint_count) / nd) /
         ((static_cast<double>(lhs_count) / nd) * (static_cast<double>(rhs_count) / nd));
}

double rule_lift(const AssociationRule& rule, Count n, Count lhs_count, Count rhs_count) {
  return rule_lift(n, rule.support_count, lhs_count, rhs_count);
}

RuleStats for_each_rule(std::span<const FrequentItemset> frequent, Count n_transactions, Fraction c,
                        const RuleVisitor& visit, const RunControl& control) {
  std::unordered_map<ItemSet, Count, ItemSetHash> counts;
  counts.reserve(frequent.size());
  for (const auto& f : frequent) counts.emplace(f.itemset, f.count);

  auto lookup = [&](const ItemSet& s) {
    auto it = counts.find(s);
    if (it == counts.end()) {
      throw std::logic_error("frequent set is not downward closed: missing {" + s.join(',') + "}");
    }
    return it->second;
  };

  RuleStats stats;
  std::vector<ItemId> lhs, rhs;
  for (const auto& f : frequent) {
    const std::size_t size = f.itemset.size();
    if (size < 2) continue;
    if (size >= 64) throw std::length_error("itemset too large to split");
    control.check();

    // Every mask except empty and full is one ordered (lhs, rhs) split.
    const std::uint64_t full = (std::uint64_t{1} << size) - 1;
    for (std::uint64_t mask = 1; mask < full; ++mask) {
      ++stats.examined_splits;
      if (f.count == 0) continue;
      lhs.clear();
      rhs.clear();
      for (std::size_t b = 0; b < size; ++b) {
        ((mask >> b) & 1 ? lhs : rhs).push_back(f.itemset[b]);
      }
      ItemSet left = ItemSet::from_canonical(lhs);
      const Count lhs_count = lookup(left);
      if (!ratio_at_least(f.count, lhs_count, c)) continue;

      ItemSet right = ItemSet::from_canonical(rhs);
      const Count rhs_count = lookup(right);
      AssociationRule rule{std::move(left), std::move(right), f.count, lhs_count, rhs_count, 0.0};
      rule.lift = rule_lift(n_transactions, f.count, lhs_count, rhs_count);
      ++stats.emitted;
      visit(rule);
    }
  }
  return stats;
}

std::vector<AssociationRule> generate_rules(std::span<const FrequentItemset> frequent, Count n_transactions,
                                            Fraction c, RuleStats* stats, const RunControl& control) {
  std::vector<AssociationRule> rules;
  RuleStats s = for_each_rule(
      frequent, n_transactions, c, [&](const AssociationRule& r) { rules.push_back(r); }, control);
  std::sort(rules.begin(), rules.end(), rule_less);
  if (stats) *stats = s;
  return rules;
}

double lift_ratio_without_ubiquitous(const TransactionDatabase& db, ItemId u_item, const ItemSet& basket) {
  if (basket.empty()) throw std::invalid_argument("basket must not be empty");
  if (basket.contains(u_item)) throw std::invalid_argument("ubiquitous item must not be in the basket");

  std::vector<ItemId> joined(basket.begin(), basket.end());
  joined.push_back(u_item);
  const Count joint = basket_support_count(db, ItemSet::from_unsorted(std::move(joined)));
  if (joint == 0) throw std::domain_error("basket never occurs with the ubiquitous item");

  const double n = static_cast<double>(db.size());
  const double support_u = static_cast<double>(db.census_of(u_item)) / n;
  const double support_b = static_cast<double>(basket_support_count(db, basket)) / n;
  return support_u * support_b / (static_cast<double>(joint) / n);
}

}  // namespace fim
