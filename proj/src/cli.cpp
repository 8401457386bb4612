#include "replica/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "replica/evaluator.hpp"

namespace replica {

Algorithm parse_algorithm(std::string_view name) {
  if (name == "brute") return Algorithm::kBrute;
  if (name == "greedy") return Algorithm::kGreedy;
  if (name == "dp") return Algorithm::kDp;
  if (name == "fast") return Algorithm::kFast;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

const char* to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kBrute: return "brute";
    case Algorithm::kGreedy: return "greedy";
    case Algorithm::kDp: return "dp";
    case Algorithm::kFast: return "fast";
  }
  return "?";
}

PlacerOutcome run_algorithm(const FailureTree& tree, Replicas rho, Algorithm algorithm,
                            std::uint64_t brute_budget, SolveReport* report) {
  switch (algorithm) {
    case Algorithm::kBrute: return brute_force_place(tree, rho, brute_budget);
    case Algorithm::kGreedy: return greedy_place(tree, rho);
    case Algorithm::kDp: return solve(tree, rho, SolveMode::kBasic, report);
    case Algorithm::kFast: return solve(tree, rho, SolveMode::kFast, report);
  }
  throw std::invalid_argument("unknown algorithm");
}

std::uint64_t brute_budget_from_env() {
  const char* raw = std::getenv("PLACER_BRUTE_BUDGET");
  if (raw == nullptr || *raw == '\0') return kDefaultBruteBudget;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(raw, &end, 10);
  if (*end != '\0' || raw[0] == '-') return kDefaultBruteBudget;
  return value;
}

std::vector<BenchRow> run_bench(const BenchConfig& config) {
  std::vector<BenchRow> rows;
  for (std::size_t trial = 0; trial < config.trials; ++trial) {
    std::uint64_t seed = config.seed + trial;
    std::optional<FailureTree> tree;
    for (std::size_t attempt = 0; attempt <= config.max_redraws; ++attempt) {
      tree = config.shape == TreeShape::kUniform
                 ? generate_random_tree(config.nodes, config.max_children, seed)
                 : generate_chain_heavy_tree(config.nodes, seed);
      if (tree->total_leaves() >= config.replicas) break;
      tree.reset();
      seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    }
    if (!tree) {
      throw std::runtime_error("no tree with at least " + std::to_string(config.replicas) +
                               " leaves for trial " + std::to_string(trial));
    }
    for (Algorithm algorithm : config.algorithms) {
      const auto start = std::chrono::steady_clock::now();
      PlacerOutcome outcome = run_algorithm(*tree, config.replicas, algorithm, config.brute_budget);
      const auto stop = std::chrono::steady_clock::now();
      rows.push_back({trial, algorithm, tree->size(), config.replicas, seed,
                      std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count(),
                      outcome.evaluations, to_string(outcome.aggregate)});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    if (a.trial != b.trial) return a.trial < b.trial;
    return std::string_view(to_string(a.algorithm)) < std::string_view(to_string(b.algorithm));
  });
  return rows;
}

std::optional<std::size_t> first_disagreement(const std::vector<BenchRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].trial == rows[i - 1].trial && rows[i].aggregate != rows[i - 1].aggregate) {
      return rows[i].trial;
    }
  }
  return std::nullopt;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "algorithm,n,rho,seed,nanos,evals,aggregate\n";
  for (const BenchRow& row : rows) {
    // The rendering contains commas, so it is quoted.
    out << to_string(row.algorithm) << ',' << row.n << ',' << row.rho << ',' << row.seed << ','
        << row.nanos << ',' << row.evals << ",\"" << row.aggregate << "\"\n";
  }
}

namespace {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

FailureTree load_tree(const std::string& path) {
  return parse_topology(read_file(path));
}

std::vector<std::string> read_names(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    names.push_back(line.substr(first, last - first + 1));
  }
  return names;
}

std::vector<std::string> sorted_names(const FailureTree& tree, const Placement& placement) {
  std::vector<std::string> names;
  for (NodeId leaf : placement.leaves()) names.push_back(tree.name(leaf));
  std::sort(names.begin(), names.end());
  return names;
}

struct PlaceArgs {
  std::string tree;
  Replicas replicas = 0;
  std::string algorithm = "fast";
  bool check_balanced = false;
  bool json = false;
  bool trace = false;
};

int cmd_place(const PlaceArgs& args, std::ostream& out, std::ostream& err) {
  const FailureTree tree = load_tree(args.tree);
  const Algorithm algorithm = parse_algorithm(args.algorithm);
  SolveReport report;
  const PlacerOutcome outcome =
      run_algorithm(tree, args.replicas, algorithm, brute_budget_from_env(), &report);

  if (args.trace) {
    for (const TraceEntry& entry : report.trace) err << format_trace(tree, entry) << '\n';
    for (const ChainSummary& chain : report.chains) err << format_chain(tree, chain) << '\n';
  }

  std::optional<BalanceReport> balance;
  if (args.check_balanced) balance = is_balanced(tree, outcome.placement);

  const auto names = sorted_names(tree, outcome.placement);
  if (args.json) {
    nlohmann::json doc;
    doc["placement"] = names;
    doc["aggregate"] = outcome.aggregate.display_order();
    if (balance) doc["balanced"] = balance->balanced;
    out << doc.dump() << '\n';
  } else {
    for (const std::string& name : names) out << name << '\n';
    out << "aggregate: " << outcome.aggregate << '\n';
    if (balance) {
      if (balance->balanced) {
        out << "balanced: yes\n";
      } else {
        const BalanceViolation& v = *balance->violation;
        out << "balanced: no (node=" << tree.name(v.node) << " child=" << tree.name(v.unfilled_child)
            << " heavier=" << tree.name(v.heavier_child) << ")\n";
      }
    }
  }
  return kExitOk;
}

struct VerifyArgs {
  std::string tree;
  std::string placement;
  std::optional<std::string> expect;
};

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  const FailureTree tree = load_tree(args.tree);
  const auto names = read_names(args.placement);
  const Placement placement = Placement::of_names(tree, names);
  const FailureAggregate aggregate = failure_aggregate(tree, placement);
  out << aggregate << '\n';
  if (args.expect) {
    const FailureAggregate expected = parse_aggregate(*args.expect);
    if (expected != aggregate || expected.rho() != aggregate.rho()) {
      err << "mismatch: expected " << expected << ", got " << aggregate << '\n';
      return kExitMismatch;
    }
  }
  return kExitOk;
}

struct GenArgs {
  std::size_t nodes = 1;
  std::size_t max_children = 3;
  std::uint64_t seed = 1;
  std::string out;
  std::string shape = "uniform";
};

TreeShape parse_shape(const std::string& name) {
  if (name == "uniform") return TreeShape::kUniform;
  if (name == "chain-heavy") return TreeShape::kChainHeavy;
  throw InputError("unknown shape '" + name + "'");
}

int cmd_gen(const GenArgs& args) {
  const FailureTree tree = parse_shape(args.shape) == TreeShape::kUniform
                               ? generate_random_tree(args.nodes, args.max_children, args.seed)
                               : generate_chain_heavy_tree(args.nodes, args.seed);
  std::ofstream file(args.out, std::ios::binary);
  if (!file) throw InputError("cannot write '" + args.out + "'");
  file << serialize_topology(tree);
  if (!file.flush()) throw InputError("cannot write '" + args.out + "'");
  return kExitOk;
}

struct BenchArgs {
  BenchConfig config;
  std::string algorithms = "brute,greedy,dp,fast";
  std::string shape = "uniform";
  std::string csv;
  bool no_assert = false;
};

int cmd_bench(BenchArgs args, std::ostream& err) {
  args.config.algorithms.clear();
  std::istringstream list(args.algorithms);
  std::string item;
  while (std::getline(list, item, ',')) {
    if (!item.empty()) args.config.algorithms.push_back(parse_algorithm(item));
  }
  args.config.shape = parse_shape(args.shape);
  args.config.brute_budget = brute_budget_from_env();

  const auto rows = run_bench(args.config);
  std::ofstream file(args.csv, std::ios::binary);
  if (!file) throw InputError("cannot write '" + args.csv + "'");
  write_bench_csv(file, rows);
  if (!file.flush()) throw InputError("cannot write '" + args.csv + "'");

  if (!args.no_assert) {
    if (auto trial = first_disagreement(rows)) {
      err << "algorithms disagree on trial " << *trial << '\n';
      return kExitMismatch;
    }
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Replica placement on tree-shaped failure models", "placer"};
  app.require_subcommand(1);

  PlaceArgs place_args;
  auto* place = app.add_subcommand("place", "Compute a lexicominimum placement");
  place->add_option("--tree", place_args.tree, "Topology file")->required();
  place->add_option("--replicas", place_args.replicas, "Number of replicas")->required();
  place->add_option("--algorithm", place_args.algorithm, "brute | greedy | dp | fast")
      ->check(CLI::IsMember({"brute", "greedy", "dp", "fast"}));
  place->add_flag("--check-balanced", place_args.check_balanced, "Also check balance");
  place->add_flag("--json", place_args.json, "Emit JSON");
  place->add_flag("--trace", place_args.trace, "Print solver trace to stderr");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Evaluate a placement");
  verify->add_option("--tree", verify_args.tree, "Topology file")->required();
  verify->add_option("--placement", verify_args.placement, "One leaf name per line")->required();
  verify->add_option("--expect", verify_args.expect, "Expected aggregate, <p_rho,...,p_0>");

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Generate a random topology");
  gen->add_option("--nodes", gen_args.nodes, "Node count")->required()->check(CLI::PositiveNumber);
  gen->add_option("--max-children", gen_args.max_children, "Arity bound");
  gen->add_option("--seed", gen_args.seed, "Seed");
  gen->add_option("--out", gen_args.out, "Output file")->required();
  gen->add_option("--shape", gen_args.shape, "uniform | chain-heavy");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Time placers on random trees");
  bench->add_option("--nodes", bench_args.config.nodes, "Node count")->required();
  bench->add_option("--replicas", bench_args.config.replicas, "Number of replicas")->required();
  bench->add_option("--trials", bench_args.config.trials, "Trials");
  bench->add_option("--seed", bench_args.config.seed, "Seed of the first trial");
  bench->add_option("--algorithms", bench_args.algorithms, "Comma separated list");
  bench->add_option("--max-children", bench_args.config.max_children, "Arity bound");
  bench->add_option("--shape", bench_args.shape, "uniform | chain-heavy");
  bench->add_option("--csv", bench_args.csv, "Output CSV")->required();
  bench->add_flag("--no-assert", bench_args.no_assert, "Skip the equal-aggregate check");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInput;
  }

  try {
    if (*place) return cmd_place(place_args, out, err);
    if (*verify) return cmd_verify(verify_args, out, err);
    if (*gen) return cmd_gen(gen_args);
    if (*bench) return cmd_bench(bench_args, err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InfeasibleReplicas& e) {
    err << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitMismatch;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace replica
