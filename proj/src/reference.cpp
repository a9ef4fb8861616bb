#include "wmrs/reference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>

#include "row_tables.hpp"

namespace wmrs {

namespace {

// Projection of one item column onto {w >= 0, sum w <= 1}.
void project_column(std::vector<double>& col) {
  double sum = 0.0;
  for (double& w : col) {
    w = std::max(w, 0.0);
    sum += w;
  }
  if (sum <= 1.0) return;
  std::vector<double> sorted(col);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double prefix = 0.0, theta = 0.0;
  for (std::size_t r = 0; r < sorted.size(); ++r) {
    prefix += sorted[r];
    const double candidate = (prefix - 1.0) / static_cast<double>(r + 1);
    if (r + 1 == sorted.size() || sorted[r + 1] <= candidate) {
      theta = candidate;
      break;
    }
  }
  for (double& w : col) w = std::max(w - theta, 0.0);
}

FractionalPoint project_to_polytope(const FractionalPoint& z) {
  FractionalPoint out = z;
  std::vector<double> col(z.num_bidders);
  for (int j = 0; j < z.num_items; ++j) {
    for (int i = 0; i < z.num_bidders; ++i) col[i] = z.at(i, j);
    project_column(col);
    for (int i = 0; i < z.num_bidders; ++i) out.at(i, j) = col[i];
  }
  return out;
}

// Maximum of a concave section by golden-section search on [0, 1].
double golden_section_max(const std::function<double(double)>& f, double& best_arg) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = 1.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 70; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  best_arg = fc > fd ? c : d;
  return std::max(fc, fd);
}

}  // namespace

IntegralOptResult integral_opt(const AuctionInstance& instance) {
  const int n = instance.num_bidders();
  const int m = instance.num_items;
  const double assignments = std::pow(static_cast<double>(n + 1), m);
  if (assignments > 1e7)
    throw BudgetError("integral_opt: more than 10^7 assignments");

  const detail::ValueLookup lookup(instance);
  IntegralOptResult best;
  best.allocation = Allocation::none(m);
  best.value = 0.0;

  std::vector<int> owner(m, -1);
  std::vector<ItemSet> masks(n, 0);
  while (true) {
    for (int i = 0; i < n; ++i) masks[i] = 0;
    for (int j = 0; j < m; ++j)
      if (owner[j] >= 0) masks[owner[j]] |= 1ULL << j;
    double welfare = 0.0;
    for (int i = 0; i < n; ++i) welfare += lookup.value(i, masks[i]);
    if (welfare > best.value) {
      best.value = welfare;
      best.allocation.owner = owner;
    }
    int j = 0;
    while (j < m) {
      if (++owner[j] < n) break;
      owner[j] = -1;
      ++j;
    }
    if (j == m) break;
  }
  return best;
}

double range_opt(const AuctionInstance& instance, double tau) {
  if (!(tau > 0.0)) throw ValidationError("range_opt: tolerance must be positive");
  if (instance.num_items > 20) throw BudgetError("range_opt: more than 20 items");

  const double ceiling = singleton_max(instance);
  if (ceiling == 0.0) return 0.0;

  const detail::RowTables tables(instance);
  const int n = instance.num_bidders();
  const int m = instance.num_items;

  FractionalPoint x(n, m);
  double fx = 0.0;
  double step = 1.0 / ceiling;
  const std::int64_t max_iters = 200000;

  for (std::int64_t iter = 0; iter < max_iters; ++iter) {
    const GradientEstimate g = tables.gradient(x);
    const FractionalPoint y = best_direction(g);
    double gap = 0.0;
    for (std::size_t c = 0; c < y.cells.size(); ++c)
      gap += (y.cells[c] - x.cells[c]) * g.g.cells[c];
    // Concavity certificate: the optimum exceeds f(x) by at most the best
    // linear improvement over the polytope.
    if (gap <= tau) return tables.fexp(x);

    // Projected gradient step with backtracking.
    bool accepted = false;
    for (int tries = 0; tries < 50 && !accepted; ++tries) {
      FractionalPoint cand = x;
      for (std::size_t c = 0; c < cand.cells.size(); ++c) cand.cells[c] += step * g.g.cells[c];
      cand = project_to_polytope(cand);
      const double fc = tables.fexp(cand);
      double linear = 0.0;
      for (std::size_t c = 0; c < cand.cells.size(); ++c)
        linear += g.g.cells[c] * (cand.cells[c] - x.cells[c]);
      if (fc >= fx + 0.25 * linear && fc > fx) {
        x = std::move(cand);
        fx = fc;
        step *= 1.3;
        accepted = true;
      } else {
        step *= 0.5;
      }
    }
    if (!accepted) {
      // Fall back to a line search along the best polytope direction; its
      // initial slope is the gap, so progress is guaranteed.
      double gamma = 0.0;
      golden_section_max(
          [&](double t) {
            FractionalPoint probe = x;
            for (std::size_t c = 0; c < probe.cells.size(); ++c)
              probe.cells[c] = (1.0 - t) * x.cells[c] + t * y.cells[c];
            return tables.fexp(probe);
          },
          gamma);
      for (std::size_t c = 0; c < x.cells.size(); ++c)
        x.cells[c] = (1.0 - gamma) * x.cells[c] + gamma * y.cells[c];
      fx = tables.fexp(x);
      step = std::max(step, 1e-6 / ceiling);
    }
  }
  throw BudgetError("range_opt: iteration budget exhausted before reaching the tolerance");
}

std::vector<MisreportRow> default_misreport_family(const WMRSValuation& truth) {
  std::vector<MisreportRow> family;
  const int m = truth.num_items();

  auto scaled = [&truth, m](double factor) {
    std::vector<WeightedMatroid> components = truth.components();
    for (auto& c : components) c.weight *= factor;
    return WMRSValuation(m, std::move(components));
  };

  for (double factor : {0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 4.0}) {
    family.push_back(MisreportRow{
        factor == 1.0 ? "truthful" : "scale " + std::to_string(factor),
        scaled(factor), factor == 1.0});
  }

  family.push_back({"worthless", WMRSValuation::zero(m), false});

  if (!truth.components().empty()) {
    std::vector<WeightedMatroid> components = truth.components();
    std::size_t heaviest = 0;
    for (std::size_t c = 1; c < components.size(); ++c)
      if (components[c].weight > components[heaviest].weight) heaviest = c;
    const auto replacement = MatroidSpec::uniform(m, 1);
    components[heaviest].matroid = components[heaviest].matroid == replacement
                                       ? MatroidSpec::uniform(m, m)
                                       : replacement;
    family.push_back({"matroid swap", WMRSValuation(m, std::move(components)), false});
  }
  return family;
}

RegretReport regret_experiment(const AuctionInstance& instance_true, int bidder,
                               const std::vector<MisreportRow>& family,
                               const MechanismConfig& config, std::int64_t trials,
                               bool paired_seeds) {
  if (family.empty()) throw ValidationError("regret_experiment: empty misreport family");
  int truthful_index = -1;
  for (std::size_t r = 0; r < family.size(); ++r) {
    if (!family[r].truthful) continue;
    if (truthful_index >= 0)
      throw ValidationError("regret_experiment: multiple truthful rows");
    truthful_index = static_cast<int>(r);
  }
  if (truthful_index < 0)
    throw ValidationError("regret_experiment: family must contain the truthful report");
  if (!(family[truthful_index].report == instance_true.valuations[bidder]))
    throw ValidationError("regret_experiment: truthful row must match the true valuation");

  std::vector<std::future<UtilityEstimate>> futures;
  for (std::size_t r = 0; r < family.size(); ++r) {
    MechanismConfig row_config = config;
    if (!paired_seeds) row_config.rng_seed = derive_seed(config.rng_seed, 0x524f5753ULL + r);
    futures.push_back(std::async(std::launch::async, [&instance_true, bidder, &family, r,
                                                      row_config, trials] {
      return utility_of_report(instance_true, bidder, family[r].report, row_config, trials);
    }));
  }

  RegretReport report;
  report.truthful_index = truthful_index;
  for (std::size_t r = 0; r < family.size(); ++r) {
    const UtilityEstimate estimate = futures[r].get();
    report.rows.push_back({family[r].description, family[r].truthful, estimate.mean,
                           estimate.std_error, trials});
  }

  report.best_index = 0;
  for (std::size_t r = 1; r < report.rows.size(); ++r)
    if (report.rows[r].mean_utility > report.rows[report.best_index].mean_utility)
      report.best_index = static_cast<int>(r);

  const double truthful_mean = report.rows[truthful_index].mean_utility;
  const double best_mean = report.rows[report.best_index].mean_utility;
  report.epsilon_emp =
      (best_mean > 0.0 && truthful_mean < best_mean) ? 1.0 - truthful_mean / best_mean : 0.0;
  return report;
}

}  // namespace wmrs
