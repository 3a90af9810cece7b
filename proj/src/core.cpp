#include "fim/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace fim {

namespace {

using Wide = unsigned __int128;

// Longest decimal literal accepted for a threshold; keeps 10^digits in 64 bits.
constexpr std::size_t kMaxFractionDigits = 18;

std::uint64_t parse_u64(std::string_view text, std::string_view whole) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("not a non-negative number: '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

ItemSet::ItemSet(std::initializer_list<ItemId> items) : items_(items) {
  std::sort(items_.begin(), items_.end());
  items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

ItemSet ItemSet::from_unsorted(std::vector<ItemId> items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return from_canonical(std::move(items));
}

ItemSet ItemSet::from_canonical(std::vector<ItemId> items) {
  ItemSet s;
  s.items_ = std::move(items);
  return s;
}

bool ItemSet::contains(ItemId item) const {
  return std::binary_search(items_.begin(), items_.end(), item);
}

bool ItemSet::is_subset_of(const ItemSet& other) const {
  return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
}

std::string ItemSet::join(char sep) const {
  std::string out;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (i) out.push_back(sep);
    out += std::to_string(items_[i]);
  }
  return out;
}

std::size_t ItemSetHash::operator()(const ItemSet& s) const noexcept {
  // FNV-1a over the ids.
  std::uint64_t h = 1469598103934665603ULL;
  for (ItemId id : s) {
    h ^= id;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

Fraction::Fraction(std::uint64_t numerator, std::uint64_t denominator) {
  if (denominator == 0) throw std::invalid_argument("fraction with zero denominator");
  std::uint64_t g = std::gcd(numerator, denominator);
  if (g == 0) g = 1;
  num_ = numerator / g;
  den_ = denominator / g;
}

Fraction Fraction::parse(std::string_view text) {
  const std::string_view whole = text;
  if (text.empty()) throw std::invalid_argument("empty threshold");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::uint64_t num = parse_u64(text.substr(0, slash), whole);
    std::uint64_t den = parse_u64(text.substr(slash + 1), whole);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(whole) + "'");
    return Fraction(num, den);
  }

  std::string_view int_part = text;
  std::string_view frac_part;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    int_part = text.substr(0, dot);
    frac_part = text.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) {
      throw std::invalid_argument("not a number: '" + std::string(whole) + "'");
    }
  }
  if (int_part.size() + frac_part.size() > kMaxFractionDigits) {
    throw std::invalid_argument("too many digits in '" + std::string(whole) + "'");
  }
  for (char ch : int_part) {
    if (ch < '0' || ch > '9') throw std::invalid_argument("not a non-negative number: '" + std::string(whole) + "'");
  }
  for (char ch : frac_part) {
    if (ch < '0' || ch > '9') throw std::invalid_argument("not a non-negative number: '" + std::string(whole) + "'");
  }

  std::uint64_t value = 0;
  std::uint64_t den = 1;
  for (char ch : int_part) value = value * 10 + static_cast<std::uint64_t>(ch - '0');
  for (char ch : frac_part) {
    value = value * 10 + static_cast<std::uint64_t>(ch - '0');
    den *= 10;
  }
  return Fraction(value, den);
}

std::string Fraction::to_string() const {
  std::uint64_t rest = den_;
  int twos = 0, fives = 0;
  while (rest % 2 == 0) { rest /= 2; ++twos; }
  while (rest % 5 == 0) { rest /= 5; ++fives; }
  if (rest != 1) return std::to_string(num_) + "/" + std::to_string(den_);

  const int digits = std::max(twos, fives);
  Wide scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Wide scaled = static_cast<Wide>(num_) * (scale / den_);
  auto int_part = static_cast<std::uint64_t>(scaled / scale);
  auto frac = static_cast<std::uint64_t>(scaled % scale);
  std::string out = std::to_string(int_part);
  if (digits > 0) {
    std::string f = std::to_string(frac);
    f.insert(0, static_cast<std::size_t>(digits) - f.size(), '0');
    out += "." + f;
  }
  return out;
}

std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) {
  Wide lhs = static_cast<Wide>(a.num_) * b.den_;
  Wide rhs = static_cast<Wide>(b.num_) * a.den_;
  return lhs <=> rhs;
}

bool ratio_at_least(Count count, Count total, Fraction f) {
  return static_cast<Wide>(count) * f.denominator() >= static_cast<Wide>(f.numerator()) * total;
}

bool ratio_exceeds(Count count, Count total, Fraction f) {
  return static_cast<Wide>(count) * f.denominator() > static_cast<Wide>(f.numerator()) * total;
}

Count min_support_count(Count n, Fraction s) {
  // ceil(s.num * n / s.den)
  Wide product = static_cast<Wide>(s.numerator()) * n;
  Wide m = (product + s.denominator() - 1) / s.denominator();
  return static_cast<Count>(m);
}

TransactionDatabase::TransactionDatabase(std::vector<Transaction> transactions)
    : transactions_(std::move(transactions)) {
  std::vector<ItemId> all;
  for (const auto& t : transactions_) all.insert(all.end(), t.begin(), t.end());
  std::sort(all.begin(), all.end());

  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j] == all[i]) ++j;
    items_.push_back(all[i]);
    census_.push_back(j - i);
    i = j;
  }
}

Count TransactionDatabase::census_of(ItemId item) const {
  auto idx = dense_index(item);
  return idx ? census_[*idx] : 0;
}

std::optional<std::size_t> TransactionDatabase::dense_index(ItemId item) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), item);
  if (it == items_.end() || *it != item) return std::nullopt;
  return static_cast<std::size_t>(it - items_.begin());
}

TransactionDatabase build_database(const std::vector<std::vector<ItemId>>& transactions) {
  std::vector<Transaction> canonical;
  canonical.reserve(transactions.size());
  for (const auto& t : transactions) canonical.push_back(ItemSet::from_unsorted(t));
  return TransactionDatabase(std::move(canonical));
}

Count basket_support_count(const TransactionDatabase& db, const ItemSet& basket) {
  if (basket.empty()) throw std::invalid_argument("support of an empty basket is undefined");
  Count m = 0;
  for (const auto& t : db.transactions()) {
    if (basket.is_subset_of(t)) ++m;
  }
  return m;
}

FilterResult filter_ubiquitous(const TransactionDatabase& db, Fraction u) {
  const Count n = db.size();
  std::vector<ItemId> ignored;
  for (std::size_t i = 0; i < db.item_count(); ++i) {
    if (ratio_exceeds(db.census()[i], n, u)) ignored.push_back(db.items()[i]);
  }
  ItemSet ignored_set = ItemSet::from_canonical(std::move(ignored));
  if (ignored_set.empty()) return {db, std::move(ignored_set)};

  std::vector<Transaction> kept;
  kept.reserve(db.transactions().size());
  for (const auto& t : db.transactions()) {
    std::vector<ItemId> items;
    items.reserve(t.size());
    std::set_difference(t.begin(), t.end(), ignored_set.begin(), ignored_set.end(),
                        std::back_inserter(items));
    kept.push_back(ItemSet::from_canonical(std::move(items)));
  }
  return {TransactionDatabase(std::move(kept)), std::move(ignored_set)};
}

double item_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("probability outside [0,1]");
  auto term = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
  return term(p) + term(1.0 - p);
}

void MiningParams::validate() const {
  if (!support.in_unit_interval()) {
    throw InvalidParams("support", "support must lie in [0,1], got " + support.to_string());
  }
  if (!confidence.in_unit_interval()) {
    throw InvalidParams("confidence", "confidence must lie in [0,1], got " + confidence.to_string());
  }
  if (ubiquitousness) {
    if (ubiquitousness->is_zero() || !ubiquitousness->in_unit_interval()) {
      throw InvalidParams("ubiquitousness",
                          "ubiquitousness must lie in (0,1], got " + ubiquitousness->to_string());
    }
    if (support > *ubiquitousness) {
      throw InvalidParams("support", "support " + support.to_string() +
                                         " exceeds ubiquitousness " + ubiquitousness->to_string());
    }
  }
  if (max_itemset_len && *max_itemset_len == 0) {
    throw InvalidParams("max-len", "max itemset length must be positive");
  }
}

}  // namespace fim
