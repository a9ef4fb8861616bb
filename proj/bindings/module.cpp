#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "wmrs/cli.hpp"
#include "wmrs/corpus.hpp"
#include "wmrs/hardness.hpp"
#include "wmrs/instance_io.hpp"
#include "wmrs/mechanism.hpp"
#include "wmrs/reference.hpp"
#include "wmrs/verify.hpp"

namespace py = pybind11;
using namespace wmrs;

namespace {

ItemSet items_to_mask(const std::vector<int>& items, int ground_size) {
  ItemSet mask = 0;
  for (int e : items) {
    if (e < 0 || e >= ground_size)
      throw ValidationError("item index out of range");
    mask |= 1ULL << e;
  }
  return mask;
}

FractionalPoint point_from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ValidationError("point must have at least one row");
  FractionalPoint x(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (int i = 0; i < x.num_bidders; ++i) {
    if (static_cast<int>(rows[i].size()) != x.num_items)
      throw ValidationError("point rows must have equal length");
    for (int j = 0; j < x.num_items; ++j) x.at(i, j) = rows[i][j];
  }
  return x;
}

std::vector<std::vector<double>> point_to_rows(const FractionalPoint& x) {
  std::vector<std::vector<double>> rows(x.num_bidders, std::vector<double>(x.num_items));
  for (int i = 0; i < x.num_bidders; ++i)
    for (int j = 0; j < x.num_items; ++j) rows[i][j] = x.at(i, j);
  return rows;
}

std::vector<std::optional<int>> owners_to_python(const Allocation& a) {
  std::vector<std::optional<int>> owners;
  for (int owner : a.owner)
    owners.push_back(owner < 0 ? std::nullopt : std::optional<int>(owner));
  return owners;
}

GradientMode mode_from_string(const std::string& mode) {
  if (mode == "exact") return GradientMode::Exact;
  if (mode == "sampled") return GradientMode::Sampled;
  throw ValidationError("gradient mode must be 'exact' or 'sampled'");
}

py::dict outcome_to_dict(const MechanismOutcome& outcome) {
  py::dict d;
  d["branch"] = outcome.branch == MechanismBranch::Vcg ? "vcg" : "lottery";
  d["lottery_bidder"] =
      outcome.lottery_bidder < 0 ? py::object(py::none()) : py::object(py::int_(outcome.lottery_bidder));
  d["allocation"] = owners_to_python(outcome.allocation);
  d["payments"] = outcome.payments;
  d["welfare_estimate"] = outcome.welfare_estimate;
  d["welfare_samples_used"] = outcome.welfare_samples_used;
  py::list stats;
  for (const auto& s : outcome.stats) {
    py::dict row;
    row["ground_value"] = s.ground_value;
    row["expected_value"] = s.expected_value;
    row["welfare_without"] = s.welfare_without;
    row["relevant"] = s.relevant;
    row["active"] = s.active;
    stats.append(row);
  }
  d["stats"] = stats;
  return d;
}

MechanismConfig mechanism_config(double epsilon, const std::string& gradient, double eta,
                                 std::optional<std::int64_t> welfare_samples,
                                 std::uint64_t seed) {
  MechanismConfig config;
  config.epsilon = epsilon;
  config.gradient_mode = mode_from_string(gradient);
  config.eta = eta;
  config.welfare_sample_count = welfare_samples;
  config.rng_seed = seed;
  return config;
}

}  // namespace

PYBIND11_MODULE(wmrsauction, m) {
  m.doc() = "Allocation rule, payments, and reference oracles for combinatorial "
            "auctions with weighted matroid rank sum bidders";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);

  py::class_<Graph>(m, "Graph")
      .def(py::init([](int num_vertices, const std::vector<std::pair<int, int>>& edges) {
             Graph g{num_vertices, edges};
             validate_graph(g, /*forbid_self_loops=*/false);
             return g;
           }),
           py::arg("num_vertices"), py::arg("edges"))
      .def_readonly("num_vertices", &Graph::num_vertices)
      .def_readonly("edges", &Graph::edges);

  py::class_<MatroidSpec>(m, "MatroidSpec")
      .def_static("uniform", &MatroidSpec::uniform, py::arg("ground_size"), py::arg("k"))
      .def_static("partition", &MatroidSpec::partition, py::arg("blocks"),
                  py::arg("capacities"))
      .def_static("graphic", &MatroidSpec::graphic, py::arg("graph"))
      .def_static("paving_from_graph", &MatroidSpec::paving_from_graph,
                  py::arg("membership_graph"))
      .def_property_readonly("ground_size", &MatroidSpec::ground_size)
      .def_property_readonly("kind", &MatroidSpec::kind_name)
      .def("rank",
           [](const MatroidSpec& spec, const std::vector<int>& items) {
             return spec.rank(items_to_mask(items, spec.ground_size()));
           },
           py::arg("items"));

  m.def("check_matroid_axioms", [](const MatroidSpec& spec) {
    const auto report = check_matroid_axioms(spec);
    py::dict d;
    d["pass"] = report.pass;
    if (report.violation) {
      d["axiom"] = report.violation->axiom;
      d["detail"] = report.violation->detail;
    }
    return d;
  });

  py::class_<WMRSValuation>(m, "WMRSValuation")
      .def(py::init([](int num_items, const std::vector<std::pair<double, MatroidSpec>>& parts) {
             std::vector<WeightedMatroid> components;
             for (const auto& [weight, matroid] : parts) components.push_back({weight, matroid});
             return WMRSValuation(num_items, std::move(components));
           }),
           py::arg("num_items"), py::arg("components"))
      .def_static("zero", &WMRSValuation::zero, py::arg("num_items"))
      .def_property_readonly("num_items", &WMRSValuation::num_items)
      .def("value",
           [](const WMRSValuation& v, const std::vector<int>& items) {
             return v.value(items_to_mask(items, v.num_items()));
           },
           py::arg("items"))
      .def("ground_value", &WMRSValuation::ground_value);

  py::class_<AuctionInstance>(m, "AuctionInstance")
      .def(py::init<int, std::vector<WMRSValuation>>(), py::arg("num_items"),
           py::arg("valuations"))
      .def_readonly("num_items", &AuctionInstance::num_items)
      .def_property_readonly("num_bidders", &AuctionInstance::num_bidders);

  m.def("exact_lottery_value",
        [](const WMRSValuation& v, const std::vector<double>& probs) {
          return exact_lottery_value(v, probs);
        },
        py::arg("valuation"), py::arg("probs"));
  m.def("sampled_lottery_value",
        [](const WMRSValuation& v, const std::vector<double>& probs, std::int64_t samples,
           std::uint64_t seed) {
          const auto s = sampled_lottery_value(v, probs, samples, seed);
          return std::make_pair(s.estimate, s.std_error);
        },
        py::arg("valuation"), py::arg("probs"), py::arg("num_samples"), py::arg("seed"));

  m.def("exact_F",
        [](const AuctionInstance& inst, const std::vector<std::vector<double>>& y) {
          return exact_F(inst, point_from_rows(y));
        },
        py::arg("instance"), py::arg("y"));
  m.def("exact_Fexp",
        [](const AuctionInstance& inst, const std::vector<std::vector<double>>& x) {
          return exact_Fexp(inst, point_from_rows(x));
        },
        py::arg("instance"), py::arg("x"));
  m.def("exact_grad_Fexp",
        [](const AuctionInstance& inst, const std::vector<std::vector<double>>& x) {
          return point_to_rows(exact_grad_Fexp(inst, point_from_rows(x)).g);
        },
        py::arg("instance"), py::arg("x"));
  m.def("sampled_grad_Fexp",
        [](const AuctionInstance& inst, const std::vector<std::vector<double>>& x,
           double target_delta, double singleton_max_value, double eta, std::uint64_t seed) {
          return point_to_rows(
              sampled_grad_Fexp(inst, point_from_rows(x), target_delta, singleton_max_value,
                                eta, seed)
                  .g);
        },
        py::arg("instance"), py::arg("x"), py::arg("target_delta"), py::arg("singleton_max"),
        py::arg("eta"), py::arg("seed"));

  m.def("singleton_max", &singleton_max, py::arg("instance"));

  m.def("local_search",
        [](const AuctionInstance& inst, double epsilon, const std::string& gradient, double eta,
           std::uint64_t seed) {
          LocalSearchConfig config;
          config.epsilon = epsilon;
          config.gradient_mode = mode_from_string(gradient);
          config.eta = eta;
          config.rng_seed = seed;
          const auto result = local_search(inst, config);
          py::dict d;
          d["x"] = point_to_rows(result.x);
          d["final_fexp"] = result.trace.final_fexp;
          d["iterations"] = result.trace.iterations.size();
          d["accepted_steps"] = result.trace.accepted_steps;
          d["termination"] = result.trace.reason == TerminationReason::Converged
                                 ? "converged"
                                 : "cap_reached";
          return d;
        },
        py::arg("instance"), py::arg("epsilon") = 0.1, py::arg("gradient") = "exact",
        py::arg("eta") = 0.01, py::arg("seed") = 0);

  m.def("poisson_round",
        [](const std::vector<std::vector<double>>& x, std::uint64_t seed) {
          return owners_to_python(poisson_round(point_from_rows(x), seed));
        },
        py::arg("x"), py::arg("seed"));

  m.def("allocation_welfare",
        [](const AuctionInstance& inst, const std::vector<std::optional<int>>& owners) {
          Allocation a = Allocation::none(static_cast<int>(owners.size()));
          for (std::size_t j = 0; j < owners.size(); ++j)
            if (owners[j]) a.owner[j] = *owners[j];
          return allocation_welfare(inst, a);
        },
        py::arg("instance"), py::arg("owners"));

  m.def("integral_opt",
        [](const AuctionInstance& inst) {
          const auto result = integral_opt(inst);
          return std::make_pair(result.value, owners_to_python(result.allocation));
        },
        py::arg("instance"));
  m.def("range_opt", &range_opt, py::arg("instance"), py::arg("tau"));

  m.def("run_mechanism",
        [](const AuctionInstance& inst, double epsilon, const std::string& gradient, double eta,
           std::optional<std::int64_t> welfare_samples, std::uint64_t seed) {
          return outcome_to_dict(
              run_mechanism(inst, mechanism_config(epsilon, gradient, eta, welfare_samples, seed)));
        },
        py::arg("instance"), py::arg("epsilon") = 0.1, py::arg("gradient") = "exact",
        py::arg("eta") = 0.01, py::arg("welfare_samples") = std::nullopt, py::arg("seed") = 0);

  m.def("utility_of_report",
        [](const AuctionInstance& inst, int bidder, const WMRSValuation& reported,
           double epsilon, std::optional<std::int64_t> welfare_samples, std::uint64_t seed,
           std::int64_t trials) {
          const auto estimate = utility_of_report(
              inst, bidder, reported,
              mechanism_config(epsilon, "exact", 0.01, welfare_samples, seed), trials);
          return std::make_pair(estimate.mean, estimate.std_error);
        },
        py::arg("instance"), py::arg("bidder"), py::arg("reported"), py::arg("epsilon") = 0.1,
        py::arg("welfare_samples") = std::nullopt, py::arg("seed") = 0,
        py::arg("trials") = 1000);

  m.def("regret_experiment",
        [](const AuctionInstance& inst, int bidder, double epsilon,
           std::optional<std::int64_t> welfare_samples, std::uint64_t seed,
           std::int64_t trials) {
          const auto family = default_misreport_family(inst.valuations[bidder]);
          const auto report = regret_experiment(
              inst, bidder, family,
              mechanism_config(epsilon, "exact", 0.01, welfare_samples, seed), trials);
          py::list rows;
          for (const auto& row : report.rows) {
            py::dict r;
            r["description"] = row.description;
            r["truthful"] = row.truthful;
            r["mean_utility"] = row.mean_utility;
            r["std_error"] = row.std_error;
            rows.append(r);
          }
          py::dict d;
          d["rows"] = rows;
          d["epsilon_emp"] = report.epsilon_emp;
          d["truthful_index"] = report.truthful_index;
          d["best_index"] = report.best_index;
          return d;
        },
        py::arg("instance"), py::arg("bidder"), py::arg("epsilon") = 0.1,
        py::arg("welfare_samples") = std::nullopt, py::arg("seed") = 0,
        py::arg("trials") = 1000);

  m.def("avg_rank_exact", &avg_rank_exact, py::arg("matroid"));
  m.def("count_matchings_via_rank", &count_matchings_via_rank, py::arg("graph"));
  m.def("count_matchings_direct", &count_matchings_direct, py::arg("graph"));

  m.def("parse_instance_text", &parse_instance_text, py::arg("json_text"));
  m.def("serialize_instance", &serialize_instance, py::arg("instance"));

  m.def("run_verification_suite", [](std::uint64_t seed) {
    const auto report = run_verification_suite(seed);
    py::list checks;
    for (const auto& check : report.checks) {
      py::dict c;
      c["name"] = check.name;
      c["pass"] = check.pass;
      c["detail"] = check.detail;
      checks.append(c);
    }
    py::dict d;
    d["checks"] = checks;
    d["all_pass"] = report.all_pass();
    return d;
  }, py::arg("seed") = 0);
}
