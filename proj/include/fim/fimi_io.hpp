#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fim/apriori.hpp"
#include "fim/core.hpp"
#include "fim/rules.hpp"

namespace fim::io {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// One transaction per non-blank line, items separated by spaces or tabs.
TransactionDatabase parse_fimi(std::istream& in);

/// Opens and parses `path`. Throws std::runtime_error when it cannot be read.
TransactionDatabase read_fimi_file(const std::filesystem::path& path);

/// Empty transactions are written as blank lines.
void write_fimi(const TransactionDatabase& db, std::ostream& out);

/// Header `lhs,rhs,support_count,support,confidence,lift`; itemsets joined by `|`.
void write_rules_csv(std::span<const AssociationRule> rules, Count n_transactions, std::ostream& out);

struct MiningReport {
  MiningParams params;
  ItemSet ignored_items;
  Count n_transactions = 0;
  std::vector<LevelSummary> levels;
  Count rule_count = 0;
  Count frequent_count = 0;
  double wall_time_ms = 0.0;

  friend bool operator==(const MiningReport&, const MiningReport&) = default;
};

/// Flat `key=value` lines.
void write_report(const MiningReport& report, std::ostream& out);
MiningReport parse_report(std::istream& in);

/// Locale-independent fixed notation.
std::string format_fixed(double value, int digits);

/// Shortest text that reads back to the same double.
std::string format_shortest(double value);

/// Throws std::ios_base::failure if the stream went bad.
void check_stream(const std::ostream& out, const std::string& what);

}  // namespace fim::io
