#include "wmrs/verify.hpp"

#include <cmath>
#include <sstream>

#include "wmrs/corpus.hpp"
#include "wmrs/hardness.hpp"
#include "wmrs/reference.hpp"

namespace wmrs {

namespace {

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

std::string format(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

}  // namespace

bool VerifyReport::all_pass() const {
  for (const auto& check : checks)
    if (!check.pass) return false;
  return true;
}

VerifyReport run_verification_suite(std::uint64_t seed) {
  VerifyReport report;
  Rng rng(seed);
  const auto instances = verification_instance_corpus();

  {
    VerifyCheck check{"matroid_axioms", true, ""};
    int checked = 0;
    for (const auto& spec : verification_matroid_corpus()) {
      if (spec.ground_size() > 12) continue;
      const auto axioms = check_matroid_axioms(spec);
      ++checked;
      if (!axioms.pass) {
        check.pass = false;
        check.detail = spec.kind_name() + ": " + axioms.violation->axiom + " " +
                       axioms.violation->detail;
        break;
      }
    }
    if (check.pass) check.detail = std::to_string(checked) + " specs pass";
    report.checks.push_back(check);
  }

  {
    VerifyCheck check{"fexp_concavity", true, ""};
    Rng probe = rng.fork(1);
    double worst = 0.0;
    for (int t = 0; t < 200 && check.pass; ++t) {
      const auto& inst = instances[probe.next_index(static_cast<int>(instances.size()))];
      const auto a = random_polytope_point(probe, inst.num_bidders(), inst.num_items);
      const auto b = random_polytope_point(probe, inst.num_bidders(), inst.num_items);
      const double lambda = probe.next_double();
      FractionalPoint mid(inst.num_bidders(), inst.num_items);
      for (std::size_t c = 0; c < mid.cells.size(); ++c)
        mid.cells[c] = lambda * a.cells[c] + (1.0 - lambda) * b.cells[c];
      const double violation = lambda * exact_Fexp(inst, a) +
                               (1.0 - lambda) * exact_Fexp(inst, b) - exact_Fexp(inst, mid);
      worst = std::max(worst, violation);
      if (violation > 1e-9) {
        check.pass = false;
        check.detail = "chord violation " + format(violation);
      }
    }
    if (check.pass) check.detail = "worst chord violation " + format(worst);
    report.checks.push_back(check);
  }

  {
    VerifyCheck check{"gradient_range", true, ""};
    Rng probe = rng.fork(2);
    for (int t = 0; t < 50 && check.pass; ++t) {
      const auto& inst = instances[probe.next_index(static_cast<int>(instances.size()))];
      const double ceiling = singleton_max(inst);
      const auto x = random_polytope_point(probe, inst.num_bidders(), inst.num_items);
      const auto g = exact_grad_Fexp(inst, x);
      for (double c : g.g.cells) {
        if (c < -1e-12 || c > ceiling + 1e-9) {
          check.pass = false;
          check.detail = "coordinate " + format(c) + " outside [0, " + format(ceiling) + "]";
          break;
        }
      }
      if (exact_Fexp(inst, x) > inst.num_items * ceiling + 1e-9) {
        check.pass = false;
        check.detail = "objective above the item ceiling";
      }
    }
    if (check.pass) check.detail = "50 random points in range";
    report.checks.push_back(check);
  }

  {
    VerifyCheck lemma1{"ascent_factor", true, ""};
    VerifyCheck lemma2{"per_step_gain", true, ""};
    VerifyCheck lemma3{"iteration_cap", true, ""};
    VerifyCheck welfare{"welfare_factor", true, ""};
    double worst_margin = 1e9;
    for (const auto& inst : instances) {
      LocalSearchConfig config;
      config.epsilon = 0.1;
      const auto result = local_search(inst, config);
      const int n = inst.num_bidders(), m = inst.num_items;
      const double big_m = singleton_max(inst);

      const double reference = range_opt(inst, 1e-5);
      if (result.trace.final_fexp < (1.0 - config.epsilon) * reference - 1e-7) {
        lemma1.pass = false;
        lemma1.detail = "final " + format(result.trace.final_fexp) + " vs reference " +
                        format(reference);
      }
      worst_margin = std::min(worst_margin,
                              result.trace.final_fexp - (1.0 - config.epsilon) * reference);

      const double gain_bound =
          config.epsilon * config.epsilon * big_m / (64.0 * m * m * n * n);
      double previous = 0.0;
      for (const auto& record : result.trace.iterations) {
        if (record.accepted && record.fexp_after - previous < gain_bound - 1e-9) {
          lemma2.pass = false;
          lemma2.detail = "gain " + format(record.fexp_after - previous) + " below " +
                          format(gain_bound);
        }
        previous = record.fexp_after;
      }

      if (result.trace.accepted_steps > config.iteration_cap(n, m) ||
          result.trace.reason != TerminationReason::Converged) {
        lemma3.pass = false;
        lemma3.detail = "no convergence within the cap";
      }

      if ((static_cast<double>(n) + 1.0) * m <= 1e5) {
        const double integral = integral_opt(inst).value;
        if (result.trace.final_fexp <
            (1.0 - std::exp(-1.0) - config.epsilon) * integral - 1e-9) {
          welfare.pass = false;
          welfare.detail = "final " + format(result.trace.final_fexp) + " vs integral " +
                           format(integral);
        }
      }
    }
    if (lemma1.pass) lemma1.detail = "worst margin " + format(worst_margin);
    if (lemma2.pass) lemma2.detail = "all steps above the gain bound";
    if (lemma3.pass) lemma3.detail = "all runs converge within the cap";
    if (welfare.pass) welfare.detail = "ascent beats (1 - 1/e - eps) of the integral optimum";
    report.checks.push_back(lemma1);
    report.checks.push_back(lemma2);
    report.checks.push_back(lemma3);
    report.checks.push_back(welfare);
  }

  {
    VerifyCheck check{"rounding_welfare", true, ""};
    Rng probe = rng.fork(3);
    const auto& inst = instances[1];
    const auto x = random_polytope_point(probe, inst.num_bidders(), inst.num_items);
    const double expected = exact_Fexp(inst, x);
    double sum = 0.0, sum_sq = 0.0;
    const int draws = 20000;
    for (int s = 0; s < draws; ++s) {
      const double w = allocation_welfare(inst, poisson_round(x, probe));
      sum += w;
      sum_sq += w * w;
    }
    const double mean = sum / draws;
    const double var = std::max(0.0, (sum_sq - draws * mean * mean) / (draws - 1.0));
    const double std_error = std::sqrt(var / draws);
    if (std::abs(mean - expected) > 5.0 * std::max(std_error, 1e-9)) {
      check.pass = false;
    }
    check.detail = "mean " + format(mean) + " vs objective " + format(expected);
    report.checks.push_back(check);
  }

  {
    VerifyCheck check{"matching_counts", true, ""};
    const Graph graphs[] = {
        Graph{4, {{0, 1}, {2, 3}}},
        Graph{4, {{0, 1}, {1, 2}, {2, 3}}},
        Graph{4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}},
        Graph{4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}},
    };
    for (const auto& g : graphs) {
      if (count_matchings_via_rank(g) != count_matchings_direct(g)) {
        check.pass = false;
        check.detail = "pair-construction count disagrees with direct enumeration";
      }
    }
    if (check.pass) check.detail = "4 graphs agree";
    report.checks.push_back(check);
  }

  return report;
}

}  // namespace wmrs
