#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fim/apriori.hpp"
#include "fim/core.hpp"

namespace fim {

/// Exact count ratio, e.g. a rule confidence count(L u R) / count(L).
struct Ratio {
  Count numerator = 0;
  Count denominator = 1;

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

struct AssociationRule {
  ItemSet lhs;
  ItemSet rhs;
  Count support_count = 0;  // count(lhs u rhs)
  Count lhs_count = 0;
  Count rhs_count = 0;
  double lift = 0.0;

  Ratio confidence() const { return {support_count, lhs_count}; }
};

struct RuleStats {
  Count examined_splits = 0;
  Count emitted = 0;
};

using RuleVisitor = std::function<void(const AssociationRule&)>;

/// Walks every split of every frequent itemset with two or more items and
/// hands rules meeting `c` to `visit`, in no particular order. Rules whose
/// itemset never occurs (possible only at zero support) are skipped since
/// their confidence is undefined.
RuleStats for_each_rule(std::span<const FrequentItemset> frequent, Count n_transactions, Fraction c,
                        const RuleVisitor& visit, const RunControl& control = {});

/// All rules meeting `c`, ordered by (lhs, rhs).
std::vector<AssociationRule> generate_rules(std::span<const FrequentItemset> frequent, Count n_transactions,
                                            Fraction c, RuleStats* stats = nullptr,
                                            const RunControl& control = {});

/// (joint/n) / ((lhs/n) * (rhs/n)). Throws std::domain_error on zero counts.
double rule_lift(Count n, Count joint_count, Count lhs_count, Count rhs_count);
double rule_lift(const AssociationRule& rule, Count n, Count lhs_count, Count rhs_count);

/// support{U} * support{B} / support{U,B}: the lift of the basket without the
/// ubiquitous item U over its lift with it.
double lift_ratio_without_ubiquitous(const TransactionDatabase& db, ItemId u_item, const ItemSet& basket);

bool rule_less(const AssociationRule& a, const AssociationRule& b);

}  // namespace fim
