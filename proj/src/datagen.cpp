#include "fim/datagen.hpp"

#include <charconv>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace fim::datagen {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform draw in [0, bound) by rejection; std::uniform_int_distribution is
// not specified bit-for-bit across standard libraries.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Count GeneratorSpec::total_items() const {
  Count total = 0;
  for (const auto& g : groups) total += g.item_count;
  return total;
}

Count GeneratorSpec::occurrences(const ItemGroup& group) const {
  // round half up of support * n
  using Wide = unsigned __int128;
  const Fraction& s = group.target_support;
  Wide twice = Wide{2} * s.numerator() * n_transactions + s.denominator();
  return static_cast<Count>(twice / (Wide{2} * s.denominator()));
}

void GeneratorSpec::validate() const {
  if (groups.empty()) throw std::invalid_argument("generator spec has no item groups");
  if (n_transactions == 0) throw std::invalid_argument("transaction count must be positive");
  if (total_items() > std::numeric_limits<ItemId>::max()) throw std::invalid_argument("too many items");
  for (const auto& g : groups) {
    if (g.item_count == 0) throw std::invalid_argument("item group with zero items");
    if (g.target_support.is_zero() || !g.target_support.in_unit_interval()) {
      throw std::invalid_argument("target support must lie in (0,1], got " + g.target_support.to_string());
    }
    if (occurrences(g) == 0) {
      throw std::invalid_argument("support " + g.target_support.to_string() + " rounds to zero occurrences over " +
                                  std::to_string(n_transactions) + " transactions");
    }
  }
}

std::vector<ItemGroup> parse_groups(std::string_view text) {
  std::vector<ItemGroup> groups;
  while (true) {
    auto comma = text.find(',');
    std::string_view token = trim(text.substr(0, comma));
    auto colon = token.find(':');
    if (colon == std::string_view::npos) {
      throw std::invalid_argument("expected count:support, got '" + std::string(token) + "'");
    }
    std::string_view count_text = trim(token.substr(0, colon));
    ItemGroup g;
    auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), g.item_count);
    if (ec != std::errc{} || ptr != count_text.data() + count_text.size() || count_text.empty()) {
      throw std::invalid_argument("bad item count in '" + std::string(token) + "'");
    }
    try {
      g.target_support = Fraction::parse(trim(token.substr(colon + 1)));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("bad support in '" + std::string(token) + "'");
    }
    groups.push_back(g);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return groups;
}

GeneratorSpec experiment_spec(std::string_view name) {
  const Fraction s03(3, 10), s05(1, 2), s08(4, 5), s09(9, 10), s10(1, 1);
  GeneratorSpec spec;
  spec.groups = {{10, s03}, {5, s05}};
  if (name == "FIM1") return spec;
  if (name == "FIM2") { spec.groups.push_back({2, s10}); return spec; }
  if (name == "FIM3") { spec.groups.push_back({4, s10}); return spec; }
  if (name == "FIM4") { spec.groups.push_back({6, s10}); return spec; }
  if (name == "FIM5") {
    spec.groups.push_back({2, s08});
    spec.groups.push_back({2, s09});
    spec.groups.push_back({2, s10});
    return spec;
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "' (expected FIM1..FIM5)");
}

TransactionDatabase generate(const GeneratorSpec& spec) {
  spec.validate();
  const Count n = spec.n_transactions;
  std::vector<std::vector<ItemId>> rows(n);
  std::vector<Count> slots(n);

  std::uint64_t item_index = 0;
  for (const auto& group : spec.groups) {
    const Count k = spec.occurrences(group);
    for (Count g = 0; g < group.item_count; ++g, ++item_index) {
      std::mt19937_64 rng(splitmix64(spec.seed ^ splitmix64(item_index)));
      for (Count i = 0; i < n; ++i) slots[i] = i;
      // The first k slots of a partial shuffle are a uniform k-subset.
      for (Count i = 0; i < k; ++i) {
        Count j = i + bounded(rng, n - i);
        std::swap(slots[i], slots[j]);
      }
      const auto id = static_cast<ItemId>(item_index + 1);
      for (Count i = 0; i < k; ++i) rows[slots[i]].push_back(id);
    }
  }
  return build_database(rows);
}

}  // namespace fim::datagen
