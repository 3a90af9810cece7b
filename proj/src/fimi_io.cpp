#include "fim/fimi_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

namespace fim::io {

namespace {

bool is_separator(char c) { return c == ' ' || c == '\t' || c == '\r'; }

template <typename T>
T parse_number(const std::string& text, std::size_t line, const std::string& key) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(line, "bad value for " + key + ": '" + text + "'");
  }
  return value;
}

ItemSet parse_item_list(const std::string& text, std::size_t line) {
  std::vector<ItemId> ids;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t bar = text.find('|', start);
    if (bar == std::string::npos) bar = text.size();
    ids.push_back(parse_number<ItemId>(text.substr(start, bar - start), line, "item list"));
    start = bar + 1;
  }
  return ItemSet::from_unsorted(std::move(ids));
}

}  // namespace

std::string format_fixed(double value, int digits) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, digits);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

std::string format_shortest(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

void check_stream(const std::ostream& out, const std::string& what) {
  if (!out) throw std::ios_base::failure("failed writing " + what);
}

TransactionDatabase parse_fimi(std::istream& in) {
  std::vector<Transaction> transactions;
  std::string line;
  std::vector<ItemId> row;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    row.clear();
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && is_separator(line[i])) ++i;
      if (i == line.size()) break;
      std::size_t j = i;
      while (j < line.size() && !is_separator(line[j])) ++j;
      const std::string_view token(line.data() + i, j - i);
      if (token.front() == '-') {
        throw ParseError(line_no, "negative item id '" + std::string(token) + "'");
      }
      ItemId id = 0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), id);
      if (ec == std::errc::result_out_of_range) {
        throw ParseError(line_no, "item id '" + std::string(token) + "' does not fit in 32 bits");
      }
      if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError(line_no, "not an integer item id '" + std::string(token) + "'");
      }
      row.push_back(id);
      i = j;
    }
    if (!row.empty()) transactions.push_back(ItemSet::from_unsorted(row));
  }
  if (in.bad()) throw std::runtime_error("read error after line " + std::to_string(line_no));
  return TransactionDatabase(std::move(transactions));
}

TransactionDatabase read_fimi_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return parse_fimi(in);
}

void write_fimi(const TransactionDatabase& db, std::ostream& out) {
  for (const auto& t : db.transactions()) out << t.join(' ') << '\n';
  check_stream(out, "transactions");
}

void write_rules_csv(std::span<const AssociationRule> rules, Count n_transactions, std::ostream& out) {
  out << "lhs,rhs,support_count,support,confidence,lift\n";
  const double n = static_cast<double>(n_transactions);
  for (const auto& r : rules) {
    out << r.lhs.join('|') << ',' << r.rhs.join('|') << ',' << r.support_count << ','
        << format_fixed(static_cast<double>(r.support_count) / n, 6) << ','
        << format_fixed(r.confidence().value(), 6) << ',' << format_fixed(r.lift, 6) << '\n';
  }
  check_stream(out, "rules");
}

void write_report(const MiningReport& report, std::ostream& out) {
  const auto& p = report.params;
  out << "support=" << p.support.to_string() << '\n';
  out << "confidence=" << p.confidence.to_string() << '\n';
  out << "ubiquitousness=" << (p.ubiquitousness ? p.ubiquitousness->to_string() : "none") << '\n';
  out << "max_itemset_len=" << (p.max_itemset_len ? std::to_string(*p.max_itemset_len) : "none") << '\n';
  out << "n_transactions=" << report.n_transactions << '\n';
  out << "ignored_items=" << report.ignored_items.join('|') << '\n';
  out << "ignored_items_count=" << report.ignored_items.size() << '\n';
  out << "frequent_count=" << report.frequent_count << '\n';
  out << "rule_count=" << report.rule_count << '\n';
  out << "level_count=" << report.levels.size() << '\n';
  for (const auto& lv : report.levels) {
    out << "level." << lv.level << ".candidates=" << lv.candidate_count << '\n';
    out << "level." << lv.level << ".frequent=" << lv.frequent_count << '\n';
  }
  out << "wall_time_ms=" << format_shortest(report.wall_time_ms) << '\n';
  check_stream(out, "report");
}

MiningReport parse_report(std::istream& in) {
  MiningReport report;
  std::map<std::size_t, LevelSummary> levels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key=value");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);

    auto fraction = [&](const std::string& v) {
      try {
        return Fraction::parse(v);
      } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, key + ": " + e.what());
      }
    };

    if (key == "support") {
      report.params.support = fraction(value);
    } else if (key == "confidence") {
      report.params.confidence = fraction(value);
    } else if (key == "ubiquitousness") {
      if (value == "none") report.params.ubiquitousness.reset();
      else report.params.ubiquitousness = fraction(value);
    } else if (key == "max_itemset_len") {
      if (value == "none") report.params.max_itemset_len.reset();
      else report.params.max_itemset_len = parse_number<std::size_t>(value, line_no, key);
    } else if (key == "n_transactions") {
      report.n_transactions = parse_number<Count>(value, line_no, key);
    } else if (key == "ignored_items") {
      report.ignored_items = parse_item_list(value, line_no);
    } else if (key == "frequent_count") {
      report.frequent_count = parse_number<Count>(value, line_no, key);
    } else if (key == "rule_count") {
      report.rule_count = parse_number<Count>(value, line_no, key);
    } else if (key == "wall_time_ms") {
      report.wall_time_ms = parse_number<double>(value, line_no, key);
    } else if (key.starts_with("level.")) {
      auto dot = key.find('.', 6);
      if (dot == std::string::npos) throw ParseError(line_no, "bad level key '" + key + "'");
      auto k = parse_number<std::size_t>(key.substr(6, dot - 6), line_no, key);
      const std::string field = key.substr(dot + 1);
      LevelSummary& lv = levels[k];
      lv.level = k;
      if (field == "candidates") lv.candidate_count = parse_number<Count>(value, line_no, key);
      else if (field == "frequent") lv.frequent_count = parse_number<Count>(value, line_no, key);
      else throw ParseError(line_no, "bad level key '" + key + "'");
    }
    // ignored_items_count and level_count are derived; other keys are skipped.
  }
  for (auto& [k, lv] : levels) report.levels.push_back(lv);
  return report;
}

}  // namespace fim::io
