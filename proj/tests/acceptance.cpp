// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code is the failure count.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "wmrs/cli.hpp"
#include "wmrs/corpus.hpp"
#include "wmrs/hardness.hpp"
#include "wmrs/instance_io.hpp"
#include "wmrs/reference.hpp"

using namespace wmrs;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::function<bool(std::string&)> body;
};

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string format(double v) {
  std::ostringstream out;
  out.precision(8);
  out << v;
  return out.str();
}

FractionalPoint random_polytope_point(Rng& rng, int bidders, int items) {
  FractionalPoint x(bidders, items);
  for (int j = 0; j < items; ++j) {
    double col = 0.0;
    for (int i = 0; i < bidders; ++i) {
      x.at(i, j) = rng.next_double();
      col += x.at(i, j);
    }
    const double target = rng.next_double();
    if (col > 0.0)
      for (int i = 0; i < bidders; ++i) x.at(i, j) *= target / col;
  }
  return x;
}

std::vector<AuctionInstance> acceptance_instances() {
  std::vector<AuctionInstance> instances;
  Rng rng(0xACCE97);
  for (int t = 0; t < 20; ++t) instances.push_back(random_instance(rng, 3, 3));
  return instances;
}

struct SearchRun {
  int instance_index;
  double epsilon;
  double singleton;
  LocalSearchResult result;
};

const std::vector<SearchRun>& lemma_runs() {
  static const std::vector<SearchRun> runs = [] {
    std::vector<SearchRun> out;
    const auto instances = acceptance_instances();
    for (std::size_t i = 0; i < instances.size(); ++i) {
      for (double epsilon : {0.05, 0.1, 0.2}) {
        LocalSearchConfig config;
        config.epsilon = epsilon;
        out.push_back({static_cast<int>(i), epsilon, singleton_max(instances[i]),
                       local_search(instances[i], config)});
      }
    }
    return out;
  }();
  return runs;
}

// Bidder 0 sits far below the relevance threshold: 0.004 < 2 / 2^7.
AuctionInstance tiny_and_big() {
  return AuctionInstance(2, {WMRSValuation(2, {{0.004, MatroidSpec::uniform(2, 1)}}),
                             WMRSValuation(2, {{1.0, MatroidSpec::uniform(2, 2)}})});
}

std::vector<AuctionInstance> regret_instances() {
  std::vector<AuctionInstance> instances;

  instances.push_back(AuctionInstance(2, {WMRSValuation(2, {{1.0, MatroidSpec::uniform(2, 1)}}),
                                          WMRSValuation(2, {{1.0, MatroidSpec::uniform(2, 1)}})}));

  instances.push_back(AuctionInstance(
      3, {WMRSValuation(3, {{1.0, MatroidSpec::uniform(3, 2)}}),
          WMRSValuation(3, {{0.7, MatroidSpec::partition({{0}, {1, 2}}, {1, 1})},
                            {0.4, MatroidSpec::uniform(3, 1)}})}));

  instances.push_back(AuctionInstance(
      2, {WMRSValuation(2, {{1.0, MatroidSpec::paving_explicit(1, 1, {0b1})}}),
          WMRSValuation(2, {{0.9, MatroidSpec::uniform(2, 1)}})}));

  instances.push_back(AuctionInstance(2, {WMRSValuation(2, {{1.0, MatroidSpec::uniform(2, 1)}}),
                                          WMRSValuation(2, {{0.8, MatroidSpec::uniform(2, 1)}}),
                                          WMRSValuation(2, {{0.6, MatroidSpec::uniform(2, 1)}})}));

  instances.push_back(AuctionInstance(
      3, {WMRSValuation(3, {{1.0, MatroidSpec::uniform(3, 1)}}),
          WMRSValuation(3, {{0.5, MatroidSpec::partition({{0, 1}, {2}}, {1, 1})},
                            {0.5, MatroidSpec::uniform(3, 3)}}),
          WMRSValuation(3, {{0.8, MatroidSpec::graphic(Graph{3, {{0, 1}, {1, 2}, {2, 0}}})}})}));

  return instances;
}

bool criterion_matroid_axioms(std::string& detail) {
  const double start = now_seconds();
  const auto corpus = verification_matroid_corpus();
  bool has_c4 = false, has_k4 = false;
  int small_specs = 0;
  for (const auto& spec : corpus) {
    const auto report = check_matroid_axioms(spec);
    if (!report.pass) {
      detail = spec.kind_name() + " spec failed: " + report.violation->axiom;
      return false;
    }
    if (spec.ground_size() <= 8) ++small_specs;
    if (const auto* p = std::get_if<MatroidSpec::Paving>(&spec.data())) {
      if (p->membership_graph && p->num_pairs == 4 && p->k == 2) has_c4 = true;
      if (p->membership_graph && p->num_pairs == 6 && p->k == 2) has_k4 = true;
    }
  }
  const double elapsed = now_seconds() - start;
  detail = std::to_string(corpus.size()) + " specs (" + std::to_string(small_specs) +
           " with ground size <= 8) in " + format(elapsed) + " s";
  if (small_specs < 20) {
    detail += "; fewer than 20 small specs";
    return false;
  }
  if (!has_c4 || !has_k4) {
    detail += "; missing a pair construction";
    return false;
  }
  return elapsed < 10.0;
}

bool criterion_concavity(std::string& detail) {
  const double start = now_seconds();
  const auto instances = acceptance_instances();
  Rng rng(0xC0CA7E);
  int violations = 0;
  double worst = 0.0;
  for (int probe = 0; probe < 1000; ++probe) {
    const auto& inst = instances[probe % instances.size()];
    const auto a = random_polytope_point(rng, inst.num_bidders(), inst.num_items);
    const auto b = random_polytope_point(rng, inst.num_bidders(), inst.num_items);
    const double lambda = rng.next_double();
    FractionalPoint mid(inst.num_bidders(), inst.num_items);
    for (std::size_t c = 0; c < mid.cells.size(); ++c)
      mid.cells[c] = lambda * a.cells[c] + (1.0 - lambda) * b.cells[c];
    const double violation = lambda * exact_Fexp(inst, a) +
                             (1.0 - lambda) * exact_Fexp(inst, b) - exact_Fexp(inst, mid);
    worst = std::max(worst, violation);
    if (violation > 1e-9) ++violations;
  }
  const double elapsed = now_seconds() - start;
  detail = "1000 probes on 20 instances, worst chord violation " + format(worst) + ", " +
           format(elapsed) + " s";
  return violations == 0 && elapsed < 60.0;
}

bool criterion_lemma1(std::string& detail) {
  const auto instances = acceptance_instances();
  double worst_margin = 1e300;
  for (const auto& run : lemma_runs()) {
    const double reference = range_opt(instances[run.instance_index], 1e-5);
    const double margin =
        run.result.trace.final_fexp - ((1.0 - run.epsilon) * reference - 1e-7);
    worst_margin = std::min(worst_margin, margin);
    if (margin < 0.0) {
      detail = "instance " + std::to_string(run.instance_index) + " at eps " +
               format(run.epsilon) + ": final " + format(run.result.trace.final_fexp) +
               " below (1-eps) * " + format(reference);
      return false;
    }
  }
  detail = "60 runs, worst margin " + format(worst_margin);
  return true;
}

bool criterion_lemma2(std::string& detail) {
  int checked = 0;
  double worst_slack = 1e300;
  for (const auto& run : lemma_runs()) {
    const auto& inst_runs = run.result.trace.iterations;
    const int n = run.result.x.num_bidders, m = run.result.x.num_items;
    const double bound =
        run.epsilon * run.epsilon * run.singleton / (64.0 * m * m * n * n);
    double previous = 0.0;
    for (const auto& record : inst_runs) {
      if (record.accepted) {
        const double slack = (record.fexp_after - previous) - (bound - 1e-9);
        worst_slack = std::min(worst_slack, slack);
        ++checked;
        if (slack < 0.0) {
          detail = "step gain " + format(record.fexp_after - previous) + " below bound " +
                   format(bound);
          return false;
        }
      }
      previous = record.fexp_after;
    }
  }
  detail = std::to_string(checked) + " accepted steps, worst slack " + format(worst_slack);
  return true;
}

bool criterion_lemma3(std::string& detail) {
  std::int64_t longest = 0;
  for (const auto& run : lemma_runs()) {
    const int n = run.result.x.num_bidders, m = run.result.x.num_items;
    LocalSearchConfig config;
    config.epsilon = run.epsilon;
    const std::int64_t cap = config.iteration_cap(n, m);
    longest = std::max(longest, run.result.trace.accepted_steps);
    if (run.result.trace.accepted_steps > cap ||
        run.result.trace.reason != TerminationReason::Converged) {
      detail = "run exceeded the iteration cap";
      return false;
    }
  }
  detail = "all runs within cap; longest run " + std::to_string(longest) + " steps";
  return longest > 10;
}

bool criterion_theorem2(std::string& detail) {
  const auto instances = acceptance_instances();
  double worst_margin = 1e300;
  for (const auto& run : lemma_runs()) {
    const auto& inst = instances[run.instance_index];
    if (std::pow(inst.num_bidders() + 1.0, inst.num_items) > 1e5) continue;
    const double integral = integral_opt(inst).value;
    const double needed = (1.0 - std::exp(-1.0) - run.epsilon) * integral;
    worst_margin = std::min(worst_margin, run.result.trace.final_fexp - needed);
    if (run.result.trace.final_fexp < needed) {
      detail = "instance " + std::to_string(run.instance_index) + ": final " +
               format(run.result.trace.final_fexp) + " below (1-1/e-eps) * " +
               format(integral);
      return false;
    }
  }

  // Rounding is unbiased for the surrogate objective: Monte-Carlo welfare.
  int rounding_checked = 0;
  for (const auto& run : lemma_runs()) {
    if (run.epsilon != 0.1) continue;
    const auto& inst = instances[run.instance_index];
    const double expected = run.result.trace.final_fexp;
    Rng rng(derive_seed(0x6F0ULL, run.instance_index));
    double sum = 0.0, sum_sq = 0.0;
    const int draws = 100000;
    for (int s = 0; s < draws; ++s) {
      const double w = allocation_welfare(inst, poisson_round(run.result.x, rng));
      sum += w;
      sum_sq += w * w;
    }
    const double mean = sum / draws;
    const double var = std::max(0.0, (sum_sq - draws * mean * mean) / (draws - 1.0));
    const double std_error = std::sqrt(var / draws);
    ++rounding_checked;
    if (std::abs(mean - expected) > 4.0 * std::max(std_error, 1e-12)) {
      detail = "instance " + std::to_string(run.instance_index) + ": rounded welfare " +
               format(mean) + " vs objective " + format(expected) + " (se " +
               format(std_error) + ")";
      return false;
    }
  }
  detail = "welfare factor holds on all runs (worst margin " + format(worst_margin) +
           "); rounding unbiased on " + std::to_string(rounding_checked) + " instances";
  return true;
}

bool criterion_gradient_contract(std::string& detail) {
  const AuctionInstance inst(
      2, {WMRSValuation(2, {{1.0, MatroidSpec::uniform(2, 1)}}),
          WMRSValuation(2, {{0.8, MatroidSpec::partition({{0}, {1}}, {1, 1})}})});
  const double ceiling = singleton_max(inst);
  Rng rng(0x6AD);
  const auto x = random_polytope_point(rng, 2, 2);
  const auto exact = exact_grad_Fexp(inst, x);
  int within = 0;
  double worst = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    const auto sampled = sampled_grad_Fexp(inst, x, 0.05, ceiling, 0.01, seed);
    double deviation = 0.0;
    for (std::size_t c = 0; c < exact.g.cells.size(); ++c)
      deviation = std::max(deviation, std::abs(sampled.g.cells[c] - exact.g.cells[c]));
    worst = std::max(worst, deviation);
    if (deviation <= 0.05 * ceiling) ++within;
  }
  detail = std::to_string(within) + "/100 trials within 0.05 M (worst deviation " +
           format(worst) + " vs allowance " + format(0.05 * ceiling) + ")";
  return within >= 99;
}

bool criterion_branch_frequencies(std::string& detail) {
  const auto inst = tiny_and_big();
  MechanismConfig config;
  config.epsilon = 0.1;
  config.welfare_sample_count = 32;
  config.rng_seed = 2026;
  const auto solves = compute_solves(inst, config);

  int vcg = 0, lottery0 = 0, lottery1 = 0;
  bool inactive_paid = false;
  const int runs = 100000;
  for (int run = 0; run < runs; ++run) {
    const auto outcome = run_mechanism_with_solves(
        inst, config, solves, derive_seed(0xB4A9C4, static_cast<std::uint64_t>(run)));
    if (outcome.branch == MechanismBranch::Vcg) ++vcg;
    else if (outcome.lottery_bidder == 0) ++lottery0;
    else ++lottery1;
    for (int i = 0; i < inst.num_bidders(); ++i)
      if (!outcome.stats[i].active && outcome.payments[i] != 0.0) inactive_paid = true;
  }
  const double vcg_freq = vcg / static_cast<double>(runs);
  const double f0 = lottery0 / static_cast<double>(runs);
  const double f1 = lottery1 / static_cast<double>(runs);
  detail = "vcg " + format(vcg_freq) + ", lottery " + format(f0) + "/" + format(f1) +
           (inactive_paid ? ", inactive bidder charged" : ", inactive payments all zero");
  return std::abs(vcg_freq - 0.5) <= 0.01 && std::abs(f0 - 0.25) <= 0.01 &&
         std::abs(f1 - 0.25) <= 0.01 && !inactive_paid;
}

bool criterion_small_bidder(std::string& detail) {
  const auto inst = tiny_and_big();
  MechanismConfig config;
  config.epsilon = 0.1;
  config.welfare_sample_count = 50;
  config.rng_seed = 31;
  const auto truth = inst.valuations[0];

  auto scaled = [&](double factor) {
    auto components = truth.components();
    for (auto& c : components) c.weight *= factor;
    return WMRSValuation(truth.num_items(), std::move(components));
  };

  const std::int64_t trials = 2000;
  const auto reference = utility_samples(inst, 0, truth, config, trials);

  double ref_mean = 0.0;
  for (double u : reference) ref_mean += u;
  ref_mean /= static_cast<double>(trials);

  for (double factor : {0.0, 0.25, 0.5, 0.75}) {
    const auto other = utility_samples(inst, 0, scaled(factor), config, trials);
    if (std::memcmp(reference.data(), other.data(), sizeof(double) * reference.size()) != 0) {
      detail = "utility stream changed under scale " + format(factor);
      return false;
    }
  }

  // Identical streams imply identical confidence intervals; record them.
  double ss = 0.0;
  for (double u : reference) ss += (u - ref_mean) * (u - ref_mean);
  const double se = std::sqrt(ss / (trials - 1.0) / trials);
  detail = "5 below-threshold reports bit-identical over " + std::to_string(trials) +
           " trials (mean " + format(ref_mean) + ", 99% CI half-width " +
           format(2.576 * se) + ")";
  return true;
}

struct RegretOutcome {
  double epsilon_emp;
  double truthful_mean;
  double noise;  // 99% CI allowance on epsilon_emp
  double worst_ci_ratio;
  std::int64_t trials;
  bool cis_ok;
};

RegretOutcome run_regret_once(const AuctionInstance& inst, double epsilon, std::int64_t trials,
                              std::uint64_t seed) {
  MechanismConfig config;
  config.epsilon = epsilon;
  config.welfare_sample_count = 200;
  config.rng_seed = seed;
  const auto family = default_misreport_family(inst.valuations[0]);
  const auto report = regret_experiment(inst, 0, family, config, trials);

  const auto& truthful = report.rows[report.truthful_index];
  const auto& best = report.rows[report.best_index];
  RegretOutcome out;
  out.epsilon_emp = report.epsilon_emp;
  out.truthful_mean = truthful.mean_utility;
  out.trials = trials;
  out.worst_ci_ratio = 0.0;
  for (const auto& row : report.rows)
    out.worst_ci_ratio =
        std::max(out.worst_ci_ratio,
                 2.576 * row.std_error / std::max(truthful.mean_utility, 1e-12));
  out.cis_ok = out.worst_ci_ratio <= 0.02;
  const double base = std::max(std::abs(best.mean_utility), 1e-12);
  out.noise = 2.576 * (truthful.std_error + best.std_error) / base;
  return out;
}

// One sizing pass, then a rerun at the trial count the measured CI widths
// call for.
RegretOutcome run_regret(const AuctionInstance& inst, double epsilon, std::uint64_t seed) {
  const std::int64_t first = 20000;
  RegretOutcome out = run_regret_once(inst, epsilon, first, seed);
  if (out.cis_ok) return out;
  const double scale = out.worst_ci_ratio / 0.02;
  const std::int64_t needed = std::min<std::int64_t>(
      300000, static_cast<std::int64_t>(std::ceil(first * scale * scale * 1.4)));
  return run_regret_once(inst, epsilon, needed, seed);
}

bool criterion_regret(std::string& detail) {
  const double start = now_seconds();
  const auto instances = regret_instances();
  std::ostringstream lines;
  bool pass = true;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto fine = run_regret(instances[i], 0.05, 97 + i);
    const auto coarse = run_regret(instances[i], 0.1, 197 + i);
    lines << " inst" << i << ": eps_emp(0.05)=" << format(fine.epsilon_emp)
          << " eps_emp(0.1)=" << format(coarse.epsilon_emp) << " trials=" << fine.trials;
    if (!fine.cis_ok || !coarse.cis_ok) {
      lines << " [CI too wide]";
      pass = false;
    }
    if (fine.epsilon_emp > 0.1) {
      lines << " [regret above 0.1]";
      pass = false;
    }
    if (fine.epsilon_emp > coarse.epsilon_emp + fine.noise + coarse.noise) {
      lines << " [regret grew as eps shrank]";
      pass = false;
    }
  }
  const double elapsed = now_seconds() - start;
  detail = lines.str() + " (" + format(elapsed) + " s)";
  return pass && elapsed < 1800.0;
}

bool criterion_hardness(std::string& detail) {
  const double start = now_seconds();
  struct Case {
    const char* name;
    Graph graph;
    std::int64_t expected;
  };
  const Case cases[] = {
      {"2K2", Graph{4, {{0, 1}, {2, 3}}}, 1},
      {"P4", Graph{4, {{0, 1}, {1, 2}, {2, 3}}}, 1},
      {"C4", Graph{4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}}, 2},
      {"K4", Graph{4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}}, 3},
      {"C6", Graph{6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}}}, 2},
      {"star", Graph{4, {{0, 1}, {0, 2}, {0, 3}}}, 0},
      {"K4-e", Graph{4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}}}, 2},
      {"2C3", Graph{6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}}}, 0},
      {"C8", Graph{8, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 0}}}, 2},
  };
  for (const auto& c : cases) {
    const auto via_rank = count_matchings_via_rank(c.graph);
    const auto direct = count_matchings_direct(c.graph);
    if (via_rank != direct || via_rank != c.expected) {
      detail = std::string(c.name) + ": via-rank " + std::to_string(via_rank) + ", direct " +
               std::to_string(direct) + ", expected " + std::to_string(c.expected);
      return false;
    }
  }
  const double elapsed = now_seconds() - start;
  detail = "9 graphs agree exactly in " + format(elapsed) + " s";
  return elapsed < 60.0;
}

bool criterion_determinism(std::string& detail) {
  CliOptions allocate;
  allocate.command = "allocate";
  allocate.instance_path = std::string(WMRS_DATA_DIR) + "/instances/symmetric_pair.json";
  allocate.seed = 13;
  if (run_command(allocate).report_json != run_command(allocate).report_json) {
    detail = "allocate reports differ";
    return false;
  }

  CliOptions mechanism = allocate;
  mechanism.command = "mechanism";
  mechanism.welfare_samples = 400;
  if (run_command(mechanism).report_json != run_command(mechanism).report_json) {
    detail = "mechanism reports differ";
    return false;
  }
  detail = "allocate and mechanism reports byte-identical (solves run concurrently)";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  std::vector<Criterion> criteria = {
      {1, "matroid axiom suite", criterion_matroid_axioms},
      {2, "concavity of the surrogate objective", criterion_concavity},
      {3, "ascent reaches (1-eps) of the range optimum", criterion_lemma1},
      {4, "per-step gain bound", criterion_lemma2},
      {5, "iteration cap", criterion_lemma3},
      {6, "welfare factor and unbiased rounding", criterion_theorem2},
      {7, "sampled gradient contract", criterion_gradient_contract},
      {8, "mechanism branch frequencies", criterion_branch_frequencies},
      {9, "below-threshold bidders see identical utilities", criterion_small_bidder},
      {10, "empirical regret", criterion_regret},
      {11, "matching counts from rank queries", criterion_hardness},
      {12, "report determinism", criterion_determinism},
  };

  int failures = 0;
  for (auto& criterion : criteria) {
    if (only != 0 && criterion.id != only) continue;
    std::string detail;
    bool pass = false;
    try {
      pass = criterion.body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!pass) ++failures;
    std::printf("[%s] %2d %s: %s\n", pass ? "PASS" : "FAIL", criterion.id,
                criterion.title.c_str(), detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
