#include "wmrs/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "wmrs/hardness.hpp"
#include "wmrs/instance_io.hpp"
#include "wmrs/mechanism.hpp"
#include "wmrs/reference.hpp"
#include "wmrs/verify.hpp"

namespace wmrs {

namespace {

using nlohmann::ordered_json;

constexpr std::uint64_t kRoundTag = 0x524f554e;

ordered_json point_to_json(const FractionalPoint& x) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < x.num_bidders; ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < x.num_items; ++j) row.push_back(x.at(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json allocation_to_json(const Allocation& a) {
  ordered_json owners = ordered_json::array();
  for (int owner : a.owner) {
    if (owner < 0) owners.push_back(nullptr);
    else owners.push_back(owner);
  }
  return owners;
}

ordered_json config_echo(const CliOptions& options, const AuctionInstance& instance) {
  LocalSearchConfig ls;
  ls.epsilon = options.epsilon;
  ordered_json config;
  config["epsilon"] = options.epsilon;
  config["gradient"] = options.gradient == GradientMode::Exact ? "exact" : "sampled";
  config["eta"] = options.eta;
  config["delta"] = ls.step_size(instance.num_bidders(), instance.num_items);
  config["iteration_cap"] = ls.iteration_cap(instance.num_bidders(), instance.num_items);
  return config;
}

ordered_json stats_to_json(const std::vector<BidderStats>& stats) {
  ordered_json rows = ordered_json::array();
  for (const auto& s : stats) {
    ordered_json row;
    row["ground_value"] = s.ground_value;
    row["expected_value"] = s.expected_value;
    row["welfare_without"] = s.welfare_without;
    row["expected_value_std_error"] = s.expected_value_std_error;
    row["welfare_without_std_error"] = s.welfare_without_std_error;
    row["relevant"] = s.relevant;
    row["active"] = s.active;
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json cmd_allocate(const CliOptions& options) {
  const AuctionInstance instance = parse_instance(options.instance_path);
  LocalSearchConfig config;
  config.epsilon = options.epsilon;
  config.gradient_mode = options.gradient;
  config.eta = options.eta;
  config.rng_seed = options.seed;

  const LocalSearchResult search = local_search(instance, config);
  const Allocation rounded = poisson_round(search.x, derive_seed(options.seed, kRoundTag));

  ordered_json result;
  result["num_bidders"] = instance.num_bidders();
  result["num_items"] = instance.num_items;
  result["singleton_max"] = singleton_max(instance);
  result["iterations"] = search.trace.iterations.size();
  result["accepted_steps"] = search.trace.accepted_steps;
  result["termination"] =
      search.trace.reason == TerminationReason::Converged ? "converged" : "cap_reached";
  if (std::isnan(search.trace.final_fexp)) result["final_fexp"] = nullptr;
  else result["final_fexp"] = search.trace.final_fexp;
  result["final_x"] = point_to_json(search.x);
  result["allocation"] = allocation_to_json(rounded);
  result["allocation_welfare"] = allocation_welfare(instance, rounded);

  ordered_json report;
  report["command"] = "allocate";
  report["seed"] = options.seed;
  report["config"] = config_echo(options, instance);
  report["result"] = std::move(result);
  return report;
}

ordered_json cmd_mechanism(const CliOptions& options) {
  const AuctionInstance instance = parse_instance(options.instance_path);
  MechanismConfig config;
  config.epsilon = options.epsilon;
  config.gradient_mode = options.gradient;
  config.eta = options.eta;
  config.welfare_sample_count = options.welfare_samples;
  config.rng_seed = options.seed;

  const MechanismOutcome outcome = run_mechanism(instance, config);

  ordered_json result;
  result["branch"] = outcome.branch == MechanismBranch::Vcg ? "vcg" : "lottery";
  if (outcome.lottery_bidder >= 0) result["lottery_bidder"] = outcome.lottery_bidder;
  else result["lottery_bidder"] = nullptr;
  result["allocation"] = allocation_to_json(outcome.allocation);
  result["payments"] = outcome.payments;
  result["stats"] = stats_to_json(outcome.stats);
  result["welfare_estimate"] = outcome.welfare_estimate;
  result["welfare_samples_used"] = outcome.welfare_samples_used;
  result["sample_cap_applied"] = outcome.sample_cap_applied;

  ordered_json report;
  report["command"] = "mechanism";
  report["seed"] = options.seed;
  report["config"] = config_echo(options, instance);
  report["config"]["welfare_samples"] =
      config.resolved_welfare_samples(instance.num_bidders(), instance.num_items);
  report["result"] = std::move(result);
  return report;
}

ordered_json cmd_regret(const CliOptions& options) {
  const AuctionInstance instance = parse_instance(options.instance_path);
  if (options.bidder < 0 || options.bidder >= instance.num_bidders())
    throw ValidationError("regret: bidder index out of range");
  MechanismConfig config;
  config.epsilon = options.epsilon;
  config.gradient_mode = options.gradient;
  config.eta = options.eta;
  config.welfare_sample_count = options.welfare_samples;
  config.rng_seed = options.seed;
  const std::int64_t trials = options.trials.value_or(2000);

  const auto family = default_misreport_family(instance.valuations[options.bidder]);
  const RegretReport regret = regret_experiment(instance, options.bidder, family, config, trials);

  ordered_json rows = ordered_json::array();
  for (const auto& row : regret.rows) {
    ordered_json r;
    r["description"] = row.description;
    r["truthful"] = row.truthful;
    r["mean_utility"] = row.mean_utility;
    r["std_error"] = row.std_error;
    r["trials"] = row.trials;
    rows.push_back(std::move(r));
  }

  ordered_json result;
  result["bidder"] = options.bidder;
  result["rows"] = std::move(rows);
  result["truthful_index"] = regret.truthful_index;
  result["best_index"] = regret.best_index;
  result["epsilon_emp"] = regret.epsilon_emp;

  ordered_json report;
  report["command"] = "regret";
  report["seed"] = options.seed;
  report["config"] = config_echo(options, instance);
  report["config"]["welfare_samples"] =
      config.resolved_welfare_samples(instance.num_bidders(), instance.num_items);
  report["config"]["trials"] = trials;
  report["result"] = std::move(result);
  return report;
}

ordered_json cmd_hardness(const CliOptions& options) {
  const Graph graph = parse_graph(options.graph_path);
  const std::int64_t via_rank = count_matchings_via_rank(graph);
  const std::int64_t direct = count_matchings_direct(graph);

  ordered_json result;
  result["num_vertices"] = graph.num_vertices;
  result["num_edges"] = graph.num_edges();
  result["num_pairs"] = graph.num_edges();
  result["k"] = graph.num_vertices / 2;
  result["avg_rank"] = avg_rank_exact(MatroidSpec::paving_from_graph(graph));
  result["matchings_via_rank"] = via_rank;
  result["matchings_direct"] = direct;
  result["match"] = via_rank == direct;

  ordered_json report;
  report["command"] = "hardness";
  report["seed"] = options.seed;
  report["config"] = ordered_json::object();
  report["result"] = std::move(result);
  return report;
}

ordered_json cmd_verify(const CliOptions& options, int& exit_code) {
  const VerifyReport verify = run_verification_suite(options.seed);
  exit_code = verify.all_pass() ? 0 : 2;

  ordered_json checks = ordered_json::array();
  for (const auto& check : verify.checks) {
    ordered_json c;
    c["name"] = check.name;
    c["pass"] = check.pass;
    c["detail"] = check.detail;
    checks.push_back(std::move(c));
  }

  ordered_json result;
  result["checks"] = std::move(checks);
  result["all_pass"] = verify.all_pass();

  ordered_json report;
  report["command"] = "verify";
  report["seed"] = options.seed;
  report["config"] = ordered_json::object();
  report["result"] = std::move(result);
  return report;
}

}  // namespace

CommandResult run_command(const CliOptions& options) {
  CommandResult out;
  ordered_json report;
  if (options.command == "allocate") report = cmd_allocate(options);
  else if (options.command == "mechanism") report = cmd_mechanism(options);
  else if (options.command == "regret") report = cmd_regret(options);
  else if (options.command == "hardness") report = cmd_hardness(options);
  else if (options.command == "verify") report = cmd_verify(options, out.exit_code);
  else throw ValidationError("unknown command: " + options.command);
  out.report_json = report.dump(2) + "\n";
  return out;
}

int cli_main(int argc, char** argv) {
  CliOptions options;
  std::string out_path;
  std::string gradient = "exact";
  std::int64_t welfare_samples = -1;
  std::int64_t trials = -1;

  CLI::App app{"Allocation rule, payments, and verification suites for "
               "combinatorial auctions with weighted matroid rank sum bidders"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* cmd, bool needs_instance) {
    if (needs_instance)
      cmd->add_option("--instance", options.instance_path, "Instance JSON file")->required();
    cmd->add_option("--epsilon", options.epsilon, "Accuracy parameter in (0, 1)");
    cmd->add_option("--seed", options.seed, "Master random seed");
    cmd->add_option("--gradient", gradient, "Gradient mode: exact or sampled");
    cmd->add_option("--eta", options.eta, "Confidence budget for sampled gradients");
    cmd->add_option("--out", out_path, "Write the report here instead of stdout");
  };

  auto* allocate = app.add_subcommand("allocate", "Run the allocation rule and round once");
  add_common(allocate, true);

  auto* mechanism = app.add_subcommand("mechanism", "Run the full mechanism with payments");
  add_common(mechanism, true);
  mechanism->add_option("--welfare-samples", welfare_samples,
                        "Samples per welfare estimate (default: stderr-targeted)");

  auto* verify = app.add_subcommand("verify", "Run the invariant suite over the built-in corpus");
  verify->add_option("--seed", options.seed, "Master random seed");
  verify->add_option("--out", out_path, "Write the report here instead of stdout");

  auto* regret = app.add_subcommand("regret", "Measure misreport utilities for one bidder");
  add_common(regret, true);
  regret->add_option("--bidder", options.bidder, "Bidder whose reports are varied");
  regret->add_option("--trials", trials, "Mechanism runs per report row");
  regret->add_option("--welfare-samples", welfare_samples,
                     "Samples per welfare estimate (default: stderr-targeted)");

  auto* hardness = app.add_subcommand("hardness", "Count perfect matchings through rank queries");
  hardness->add_option("--graph,--instance", options.graph_path, "Graph JSON file")->required();
  hardness->add_option("--seed", options.seed, "Master random seed");
  hardness->add_option("--out", out_path, "Write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  options.command = app.get_subcommands().front()->get_name();
  if (gradient == "exact") options.gradient = GradientMode::Exact;
  else if (gradient == "sampled") options.gradient = GradientMode::Sampled;
  else {
    std::cerr << "error: --gradient must be 'exact' or 'sampled'\n";
    return 1;
  }
  if (welfare_samples >= 0) options.welfare_samples = welfare_samples;
  if (trials >= 0) options.trials = trials;
  if (!(options.epsilon > 0.0 && options.epsilon < 1.0)) {
    std::cerr << "error: --epsilon must lie in (0, 1)\n";
    return 1;
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    CommandResult result = run_command(options);
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();

    ordered_json report = ordered_json::parse(result.report_json);
    report["wall_time_ms"] = wall_ms;
    const std::string text = report.dump(2) + "\n";

    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path);
      if (!out) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return 1;
      }
      out << text;
    }
    return result.exit_code;
  } catch (const BudgetError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {
    std::cerr << "internal consistency error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace wmrs
