#pragma once

#include <vector>

#include "fim/apriori.hpp"
#include "fim/core.hpp"
#include "fim/rules.hpp"

namespace fim::oracle {

/// Largest item universe the exhaustive enumerators accept.
inline constexpr std::size_t kMaxUniverse = 20;

/// Every non-empty subset of the surviving items with a count meeting the
/// support threshold, counted by scanning. Throws std::length_error when more
/// than kMaxUniverse items survive the ubiquitousness filter.
std::vector<FrequentItemset> brute_force_frequent(const TransactionDatabase& db, const MiningParams& params);

/// Literal split enumeration over brute_force_frequent, with lhs and rhs counts
/// taken from fresh scans. Ordered by (lhs, rhs).
std::vector<AssociationRule> brute_force_rules(const TransactionDatabase& db, const MiningParams& params);

/// 2^I - I - 1 for I >= 2, 0 below. Throws std::overflow_error past 64 bits.
Count possible_basket_count(std::uint32_t item_count);

/// C(n,k) * avg_support^k.
double expected_level_count(std::uint32_t item_count, std::uint32_t level, double avg_support);

struct UbiquityCountInputs {
  Count frequent_baskets = 0;      // x: frequent baskets of two or more items
  Count frequent_singletons = 0;   // m
  std::uint32_t ubiquitous = 0;    // l: items present in every transaction
};

/// (x + m + 1) * 2^l - m - l - 1. Throws std::overflow_error past 64 bits.
Count ubiquitous_basket_count(const UbiquityCountInputs& inputs);

}  // namespace fim::oracle
