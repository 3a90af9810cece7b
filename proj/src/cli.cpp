#include "fim/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>

#include "fim/apriori.hpp"
#include "fim/datagen.hpp"
#include "fim/fimi_io.hpp"
#include "fim/rules.hpp"

namespace fim::cli {

namespace {

// Rule generation enumerates 2^n splits per itemset; warn from this size on.
constexpr std::size_t kWarnItemsetLen = 20;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Fraction parse_flag(const std::string& flag, const std::string& text) {
  try {
    return Fraction::parse(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError("invalid --" + flag + ": " + e.what());
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    std::string token = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    token.erase(0, token.find_first_not_of(" \t"));
    token.erase(token.find_last_not_of(" \t") + 1);
    out.push_back(token);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void validate(const MiningParams& params) {
  try {
    params.validate();
  } catch (const InvalidParams& e) {
    throw UsageError("invalid --" + e.field() + ": " + e.what());
  }
}

TransactionDatabase load(const std::string& path) {
  try {
    return io::read_fimi_file(path);
  } catch (const io::ParseError& e) {
    throw IoFailure(path + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw IoFailure(e.what());
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot write '" + path + "'");
  return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

// --- mine ------------------------------------------------------------------

struct MineFlags {
  std::string input, support, confidence, ubiquitousness, rules_out, report_out;
  std::size_t max_len = 0;
  unsigned threads = 0;
};

int run_mine(const MineFlags& f, std::ostream& out, std::ostream& err) {
  MiningParams params;
  params.support = parse_flag("support", f.support);
  params.confidence = parse_flag("confidence", f.confidence);
  if (!f.ubiquitousness.empty()) params.ubiquitousness = parse_flag("ubiquitousness", f.ubiquitousness);
  if (f.max_len != 0) params.max_itemset_len = f.max_len;
  validate(params);

  const TransactionDatabase db = load(f.input);
  RunControl control;
  control.threads = f.threads;

  const auto start = std::chrono::steady_clock::now();
  MiningResult mined = mine_frequent(db, params, control);
  std::vector<AssociationRule> rules = generate_rules(mined.frequent, mined.n_transactions, params.confidence,
                                                      nullptr, control);
  const double wall_ms = elapsed_ms(start);

  if (mined.levels.size() >= kWarnItemsetLen) {
    err << "warning: frequent itemsets reach " << mined.levels.size()
        << " items; rule generation grows as 2^n per itemset\n";
  }

  io::MiningReport report;
  report.params = params;
  report.ignored_items = mined.ignored;
  report.n_transactions = mined.n_transactions;
  report.levels = mined.levels;
  report.rule_count = rules.size();
  report.frequent_count = mined.frequent.size();
  report.wall_time_ms = wall_ms;

  try {
    auto rules_out = open_output(f.rules_out);
    io::write_rules_csv(rules, mined.n_transactions, rules_out);
    auto report_out = open_output(f.report_out);
    io::write_report(report, report_out);
  } catch (const std::ios_base::failure& e) {
    throw IoFailure(e.what());
  }

  out << "transactions=" << mined.n_transactions << " ignored_items=" << mined.ignored.size()
      << " frequent=" << mined.frequent.size() << " rules=" << rules.size() << '\n';
  return kExitOk;
}

// --- generate --------------------------------------------------------------

struct GenerateFlags {
  std::string spec, preset, output;
  Count transactions = datagen::kDefaultTransactions;
  std::uint64_t seed = 0;
};

int run_generate(const GenerateFlags& f, std::ostream& out) {
  datagen::GeneratorSpec spec;
  try {
    if (!f.preset.empty()) spec = datagen::experiment_spec(f.preset);
    else spec.groups = datagen::parse_groups(f.spec);
    spec.n_transactions = f.transactions;
    spec.seed = f.seed;
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(f.preset.empty() ? "invalid --spec: " : "invalid --preset: ") + e.what());
  }

  const TransactionDatabase db = datagen::generate(spec);
  try {
    auto file = open_output(f.output);
    io::write_fimi(db, file);
  } catch (const std::ios_base::failure& e) {
    throw IoFailure(e.what());
  }

  out << "rng=" << datagen::kRngAlgorithm << '\n';
  out << "seed=" << spec.seed << '\n';
  out << "transactions=" << db.size() << '\n';
  out << "items=" << db.item_count() << '\n';
  out << "item,count,support\n";
  for (std::size_t i = 0; i < db.item_count(); ++i) {
    out << db.items()[i] << ',' << db.census()[i] << ','
        << io::format_fixed(static_cast<double>(db.census()[i]) / static_cast<double>(db.size()), 3) << '\n';
  }
  return kExitOk;
}

// --- stats -----------------------------------------------------------------

struct StatsFlags {
  std::string input;
  std::size_t buckets = 10;
};

int run_stats(const StatsFlags& f, std::ostream& out) {
  if (f.buckets == 0) throw UsageError("invalid --buckets: must be positive");
  const TransactionDatabase db = load(f.input);
  const Count n = db.size();

  std::vector<std::size_t> order(db.item_count());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return db.census()[a] > db.census()[b]; });

  out << "transactions=" << n << '\n';
  out << "items=" << db.item_count() << '\n';
  out << "item,count,support\n";
  for (std::size_t i : order) {
    out << db.items()[i] << ',' << db.census()[i] << ','
        << io::format_fixed(static_cast<double>(db.census()[i]) / static_cast<double>(n), 3) << '\n';
  }

  // Bucket b covers supports in [b/K, (b+1)/K); support 1 joins the last one.
  std::vector<Count> histogram(f.buckets, 0);
  for (Count c : db.census()) {
    auto b = static_cast<std::size_t>(static_cast<unsigned __int128>(c) * f.buckets / n);
    ++histogram[std::min(b, f.buckets - 1)];
  }
  const double width = 1.0 / static_cast<double>(f.buckets);
  out << "histogram\n";
  for (std::size_t b = 0; b < f.buckets; ++b) {
    out << io::format_fixed(width * static_cast<double>(b), 3) << '-'
        << io::format_fixed(width * static_cast<double>(b + 1), 3) << ',' << histogram[b] << ' '
        << std::string(histogram[b], '#') << '\n';
  }
  return kExitOk;
}

// --- bench -----------------------------------------------------------------

struct BenchFlags {
  std::string input, preset, supports, ubiquitousness = "none", confidence, out;
  Count transactions = datagen::kDefaultTransactions;
  std::uint64_t seed = 0;
  std::size_t repeat = 1;
  std::size_t max_len = 0;
  double timeout_ms = 300000.0;
  unsigned threads = 0;
};

struct CellOutcome {
  std::size_t ignored = 0;
  std::optional<Count> frequent;
  std::optional<Count> rules;
  double wall_ms = 0.0;
};

CellOutcome run_cell(const TransactionDatabase& db, const MiningParams& params, const BenchFlags& f) {
  CellOutcome cell;
  std::vector<double> times;
  for (std::size_t r = 0; r < f.repeat; ++r) {
    RunControl control;
    control.threads = f.threads;
    const auto start = std::chrono::steady_clock::now();
    if (f.timeout_ms > 0) {
      control.deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                     std::chrono::duration<double, std::milli>(f.timeout_ms));
    }
    try {
      MiningResult mined = mine_frequent(db, params, control);
      cell.ignored = mined.ignored.size();
      cell.frequent = mined.frequent.size();
      RuleStats stats = for_each_rule(mined.frequent, mined.n_transactions, params.confidence,
                                      [](const AssociationRule&) {}, control);
      cell.rules = stats.emitted;
      times.push_back(elapsed_ms(start));
    } catch (const DeadlineExceeded&) {
      if (params.ubiquitousness) cell.ignored = filter_ubiquitous(db, *params.ubiquitousness).ignored.size();
      cell.rules.reset();
      cell.wall_ms = elapsed_ms(start);
      return cell;
    }
  }
  std::sort(times.begin(), times.end());
  const std::size_t mid = times.size() / 2;
  cell.wall_ms = times.size() % 2 ? times[mid] : (times[mid - 1] + times[mid]) / 2.0;
  return cell;
}

int run_bench(const BenchFlags& f, std::ostream& out) {
  if (f.repeat == 0) throw UsageError("invalid --repeat: must be positive");

  std::vector<Fraction> supports, confidences;
  std::vector<std::optional<Fraction>> ubiquities;
  for (const auto& s : split_list(f.supports)) supports.push_back(parse_flag("supports", s));
  for (const auto& c : split_list(f.confidence)) confidences.push_back(parse_flag("confidence", c));
  for (const auto& u : split_list(f.ubiquitousness)) {
    if (u == "none") ubiquities.emplace_back(std::nullopt);
    else ubiquities.emplace_back(parse_flag("ubiquitousness", u));
  }

  std::vector<MiningParams> grid;
  for (const auto& u : ubiquities) {
    for (const auto& s : supports) {
      for (const auto& c : confidences) {
        MiningParams p;
        p.support = s;
        p.confidence = c;
        p.ubiquitousness = u;
        if (f.max_len != 0) p.max_itemset_len = f.max_len;
        validate(p);
        grid.push_back(p);
      }
    }
  }

  TransactionDatabase db;
  if (!f.preset.empty()) {
    datagen::GeneratorSpec spec;
    try {
      spec = datagen::experiment_spec(f.preset);
      spec.n_transactions = f.transactions;
      spec.seed = f.seed;
      spec.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("invalid --preset: ") + e.what());
    }
    db = datagen::generate(spec);
  } else {
    db = load(f.input);
  }

  auto csv = open_output(f.out);
  const std::string header = "ubiquitousness,support,confidence,ignored_items,frequent_count,rule_count,wall_time_ms\n";
  csv << header;
  out << header;
  for (const auto& p : grid) {
    CellOutcome cell = run_cell(db, p, f);
    std::string row = (p.ubiquitousness ? p.ubiquitousness->to_string() : std::string("none")) + ',' +
                      p.support.to_string() + ',' + p.confidence.to_string() + ',' + std::to_string(cell.ignored) +
                      ',' + (cell.frequent ? std::to_string(*cell.frequent) : std::string("TIMEOUT")) + ',' +
                      (cell.rules ? std::to_string(*cell.rules) : std::string("TIMEOUT")) + ',' +
                      io::format_fixed(cell.wall_ms, 3) + '\n';
    csv << row;
    out << row << std::flush;
  }
  csv.flush();
  if (!csv) throw IoFailure("failed writing '" + f.out + "'");
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frequent itemset mining with ubiquitous-item filtering", "fim"};
  app.require_subcommand(1);

  MineFlags mine_flags;
  auto* mine = app.add_subcommand("mine", "Mine frequent itemsets and association rules");
  mine->add_option("--input", mine_flags.input, "FIMI transaction file")->required();
  mine->add_option("--support", mine_flags.support, "Minimum support, e.g. 0.3 or 2/3")->required();
  mine->add_option("--confidence", mine_flags.confidence, "Minimum confidence")->required();
  mine->add_option("--ubiquitousness", mine_flags.ubiquitousness, "Drop items with support above this");
  mine->add_option("--max-len", mine_flags.max_len, "Largest itemset size to mine");
  mine->add_option("--rules-out", mine_flags.rules_out, "Rules CSV path")->required();
  mine->add_option("--report-out", mine_flags.report_out, "Report path")->required();
  mine->add_option("--threads", mine_flags.threads, "Counting threads (0: all cores)");

  GenerateFlags gen_flags;
  auto* generate = app.add_subcommand("generate", "Write a synthetic FIMI dataset");
  auto* spec_opt = generate->add_option("--spec", gen_flags.spec, "Item groups, e.g. \"10:0.3,5:0.5\"");
  auto* preset_opt = generate->add_option("--preset", gen_flags.preset, "FIM1..FIM5");
  spec_opt->excludes(preset_opt);
  generate->add_option("--transactions", gen_flags.transactions, "Transaction count");
  generate->add_option("--seed", gen_flags.seed, "RNG seed");
  generate->add_option("--output", gen_flags.output, "Output path")->required();

  StatsFlags stats_flags;
  auto* stats = app.add_subcommand("stats", "Item support table and histogram");
  stats->add_option("--input", stats_flags.input, "FIMI transaction file")->required();
  stats->add_option("--buckets", stats_flags.buckets, "Histogram buckets");

  BenchFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "Run a (ubiquitousness x support x confidence) grid");
  auto* bench_input = bench->add_option("--input", bench_flags.input, "FIMI transaction file");
  auto* bench_preset = bench->add_option("--preset", bench_flags.preset, "FIM1..FIM5");
  bench_input->excludes(bench_preset);
  bench->add_option("--transactions", bench_flags.transactions, "Transactions for --preset");
  bench->add_option("--seed", bench_flags.seed, "Seed for --preset");
  bench->add_option("--supports", bench_flags.supports, "Comma-separated supports")->required();
  bench->add_option("--ubiquitousness", bench_flags.ubiquitousness,
                    "Comma-separated thresholds; 'none' disables filtering");
  bench->add_option("--confidence", bench_flags.confidence, "Comma-separated confidences")->required();
  bench->add_option("--out", bench_flags.out, "Output CSV")->required();
  bench->add_option("--repeat", bench_flags.repeat, "Repeats per cell; time is the median");
  bench->add_option("--max-len", bench_flags.max_len, "Largest itemset size to mine");
  bench->add_option("--timeout-ms", bench_flags.timeout_ms, "Per-cell budget; 0 disables");
  bench->add_option("--threads", bench_flags.threads, "Counting threads (0: all cores)");

  std::vector<std::string> argv_storage{"fim"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (mine->parsed()) return run_mine(mine_flags, out, err);
    if (generate->parsed()) {
      if (gen_flags.spec.empty() && gen_flags.preset.empty()) throw UsageError("one of --spec or --preset is required");
      return run_generate(gen_flags, out);
    }
    if (stats->parsed()) return run_stats(stats_flags, out);
    if (bench->parsed()) {
      if (bench_flags.input.empty() && bench_flags.preset.empty()) {
        throw UsageError("one of --input or --preset is required");
      }
      return run_bench(bench_flags, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoFailure& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace fim::cli
