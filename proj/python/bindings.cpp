#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hwe_equiv/bootstrap.hpp"
#include "hwe_equiv/datasets.hpp"
#include "hwe_equiv/errors.hpp"
#include "hwe_equiv/projection.hpp"
#include "hwe_equiv/simulation.hpp"
#include "hwe_equiv/stats.hpp"

namespace py = pybind11;
using namespace hwe_equiv;

namespace {

GenotypeCounts counts_from_rows(const std::vector<std::vector<std::int64_t>>& rows)
{
    std::vector<std::int64_t> cells;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != i + 1) {
            throw DimensionMismatch("row " + std::to_string(i + 1) + " must hold " + std::to_string(i + 1) +
                                    " counts");
        }
        cells.insert(cells.end(), rows[i].begin(), rows[i].end());
    }
    return {rows.size(), std::move(cells)};
}

std::vector<std::vector<std::int64_t>> rows_of(const GenotypeCounts& c)
{
    std::vector<std::vector<std::int64_t>> rows(c.k());
    for (std::size_t i = 0; i < c.k(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            rows[i].push_back(c(i, j));
        }
    }
    return rows;
}

TestKind kind_of(const std::string& s)
{
    if (s == "c") {
        return TestKind::Conditional;
    }
    if (s == "m") {
        return TestKind::MinimumDistance;
    }
    throw InvalidArgument("kind must be 'c' or 'm'");
}

std::vector<TestSelection> selections(const std::vector<std::pair<std::string, std::string>>& tests)
{
    if (tests.empty()) {
        return all_tests();
    }
    std::vector<TestSelection> out;
    for (const auto& [kind, calib] : tests) {
        if (calib != "asym" && calib != "boot") {
            throw InvalidArgument("calibration must be 'asym' or 'boot'");
        }
        out.push_back({kind_of(kind), calib == "asym" ? CalibrationKind::Asymptotic : CalibrationKind::Bootstrap});
    }
    return out;
}

py::dict summary_dict(const StudySummary& s)
{
    py::dict out;
    for (const auto& row : s.rows) {
        py::dict r;
        r["min"] = row.min;
        r["max"] = row.max;
        r["mean"] = row.mean;
        r["dev"] = row.dev;
        r["rates"] = row.rates;
        out[py::make_tuple(std::string(to_string(row.test.kind)), std::string(to_string(row.test.calibration)))] = r;
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Equivalence tests for Hardy-Weinberg equilibrium at multi-allelic loci";

    py::register_exception<Error>(m, "HweError", PyExc_ValueError);

    py::class_<TestResult>(m, "TestResult")
        .def_property_readonly("kind", [](const TestResult& r) { return std::string(to_string(r.kind)); })
        .def_property_readonly("calibration",
                               [](const TestResult& r) { return std::string(to_string(r.calibration)); })
        .def_readonly("statistic", &TestResult::statistic)
        .def_readonly("sigma", &TestResult::sigma)
        .def_readonly("alpha", &TestResult::alpha)
        .def_readonly("critical_value", &TestResult::critical_value)
        .def_readonly("reject", &TestResult::reject)
        .def_readonly("epsilon", &TestResult::epsilon)
        .def_readonly("distance", &TestResult::distance)
        .def_readonly("min_epsilon", &TestResult::min_epsilon)
        .def_readonly("n", &TestResult::n)
        .def("__repr__", [](const TestResult& r) {
            return "TestResult(kind=" + std::string(to_string(r.kind)) + ", calibration=" +
                   std::string(to_string(r.calibration)) + ", reject=" + (r.reject ? "True" : "False") +
                   ", min_epsilon=" + std::to_string(r.min_epsilon) + ")";
        });

    m.def("builtin_dataset", [](int id) {
        const auto c = builtin_dataset(id);
        if (!c) {
            throw InvalidArgument("unknown builtin dataset " + std::to_string(id));
        }
        return rows_of(*c);
    });
    m.def("parse_dataset", [](const std::string& text) { return rows_of(parse_dataset(text)); });

    m.def("allele_frequencies", [](const std::vector<std::vector<std::int64_t>>& rows) {
        const auto a = allele_distribution(from_counts(counts_from_rows(rows)));
        return std::vector<double>(a.freqs().begin(), a.freqs().end());
    });

    m.def(
        "distances",
        [](const std::vector<std::vector<std::int64_t>>& rows) {
            const auto p = from_counts(counts_from_rows(rows));
            const auto proj = project_to_hwe(p);
            return py::make_tuple(l2_distance(p, hwe_distribution(allele_distribution(p))), proj.distance);
        },
        "(l2 distance to e(p), minimum distance to the HWE family)");

    m.def(
        "run_test",
        [](const std::vector<std::vector<std::int64_t>>& rows, double epsilon, const std::string& kind,
           const std::string& calibration, double alpha, int B, std::uint64_t seed) {
            const auto counts = counts_from_rows(rows);
            const auto p = from_counts(counts);
            if (calibration == "asym") {
                return run_asymptotic_test(p, counts.n(), epsilon, alpha, kind_of(kind));
            }
            if (calibration == "boot") {
                return run_bootstrap_test(p, counts.n(), epsilon, alpha,
                                          {.replicates = B, .seed = seed, .kind = kind_of(kind)});
            }
            throw InvalidArgument("calibration must be 'asym' or 'boot'");
        },
        py::arg("counts"), py::arg("epsilon"), py::arg("kind") = "c", py::arg("calibration") = "asym",
        py::arg("alpha") = 0.05, py::arg("B") = 500, py::arg("seed") = 0);

    m.def(
        "power_grid",
        [](const std::vector<std::vector<std::int64_t>>& rows, const std::vector<double>& epsilons, int reps,
           int B, std::uint64_t seed, double alpha, const std::vector<std::pair<std::string, std::string>>& tests) {
            const auto grid = power_grid({.dataset = counts_from_rows(rows),
                                          .alpha = alpha,
                                          .replications = reps,
                                          .seed = seed,
                                          .tests = selections(tests),
                                          .bootstrap_B = B},
                                         epsilons);
            py::dict out;
            for (std::size_t t = 0; t < grid.tests.size(); ++t) {
                out[py::make_tuple(std::string(to_string(grid.tests[t].kind)),
                                   std::string(to_string(grid.tests[t].calibration)))] = grid.rates[t];
            }
            return out;
        },
        py::arg("counts"), py::arg("epsilons"), py::arg("reps") = 1000, py::arg("B") = 250, py::arg("seed") = 0,
        py::arg("alpha") = 0.05, py::arg("tests") = std::vector<std::pair<std::string, std::string>>{});

    m.def(
        "boundary_study",
        [](const std::vector<std::vector<std::int64_t>>& rows, double epsilon, int points, int reps, int B,
           std::uint64_t seed, double alpha, const std::vector<std::pair<std::string, std::string>>& tests) {
            return summary_dict(boundary_study({.dataset = counts_from_rows(rows),
                                                .epsilon = epsilon,
                                                .alpha = alpha,
                                                .replications = reps,
                                                .eval_points = points,
                                                .seed = seed,
                                                .tests = selections(tests),
                                                .bootstrap_B = B}));
        },
        py::arg("counts"), py::arg("epsilon"), py::arg("points") = 100, py::arg("reps") = 1000, py::arg("B") = 250,
        py::arg("seed") = 0, py::arg("alpha") = 0.05,
        py::arg("tests") = std::vector<std::pair<std::string, std::string>>{});

    m.attr("rng_algorithm") = kRngAlgorithm;
}
