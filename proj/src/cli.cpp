#include "hwe_equiv/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "hwe_equiv/bootstrap.hpp"
#include "hwe_equiv/datasets.hpp"
#include "hwe_equiv/errors.hpp"
#include "hwe_equiv/projection.hpp"
#include "hwe_equiv/random.hpp"
#include "hwe_equiv/simulation.hpp"
#include "hwe_equiv/stats.hpp"

namespace hwe_equiv::cli {

namespace {

using nlohmann::json;

struct CommonOptions {
    std::string data;
    double alpha = 0.05;
    std::string kind = "both";
    std::string calib = "both";
    int B = 500;
    std::uint64_t seed = 0;
    bool json = false;
    bool csv = false;
};

// JSON numbers carry six significant digits.
json num(double v)
{
    return std::stod(format_sig6(v));
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string quoted = "\"";
    for (char c : s) {
        quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return quoted + "\"";
}

std::vector<TestSelection> selections(const CommonOptions& o)
{
    std::vector<TestKind> kinds;
    if (o.kind == "c" || o.kind == "both") {
        kinds.push_back(TestKind::Conditional);
    }
    if (o.kind == "m" || o.kind == "both") {
        kinds.push_back(TestKind::MinimumDistance);
    }
    std::vector<CalibrationKind> calibs;
    if (o.calib == "asym" || o.calib == "both") {
        calibs.push_back(CalibrationKind::Asymptotic);
    }
    if (o.calib == "boot" || o.calib == "both") {
        calibs.push_back(CalibrationKind::Bootstrap);
    }
    std::vector<TestSelection> out;
    for (auto k : kinds) {
        for (auto c : calibs) {
            out.push_back({k, c});
        }
    }
    return out;
}

void add_common(CLI::App* cmd, CommonOptions& o, int default_B)
{
    o.B = default_B;
    cmd->add_option("--data", o.data, "dataset file or builtin:1|2|3")->required();
    cmd->add_option("--alpha", o.alpha, "nominal level")->capture_default_str();
    cmd->add_option("--B", o.B, "bootstrap replicates")->capture_default_str();
    cmd->add_option("--seed", o.seed, "master seed")->capture_default_str();
}

void add_selection(CLI::App* cmd, CommonOptions& o)
{
    cmd->add_option("--kind", o.kind, "statistic: c, m or both")
        ->check(CLI::IsMember({"c", "m", "both"}))
        ->capture_default_str();
    cmd->add_option("--calib", o.calib, "calibration: asym, boot or both")
        ->check(CLI::IsMember({"asym", "boot", "both"}))
        ->capture_default_str();
}

void add_format(CLI::App* cmd, CommonOptions& o)
{
    auto* j = cmd->add_flag("--json", o.json, "JSON output");
    auto* c = cmd->add_flag("--csv", o.csv, "CSV output");
    j->excludes(c);
}

json result_json(const TestResult& r)
{
    return {{"kind", to_string(r.kind)},
            {"calibration", to_string(r.calibration)},
            {"statistic", num(r.statistic)},
            {"sigma", num(r.sigma)},
            {"alpha", num(r.alpha)},
            {"critical_value", num(r.critical_value)},
            {"reject", r.reject},
            {"epsilon", num(r.epsilon)},
            {"distance", num(r.distance)},
            {"min_epsilon", num(r.min_epsilon)},
            {"n", r.n}};
}

json inputs_json(const CommonOptions& o)
{
    return {{"data", o.data}, {"alpha", num(o.alpha)}, {"seed", o.seed}, {"B", o.B}};
}

int cmd_test(const CommonOptions& o, double eps, std::ostream& out)
{
    const auto start = std::chrono::steady_clock::now();
    const auto counts = load_dataset(o.data);
    const auto p = from_counts(counts);
    const auto n = counts.n();
    validate_test_inputs(n, eps, o.alpha);
    const auto alleles = allele_distribution(p);
    const double l2 = l2_distance(p, hwe_distribution(alleles));
    const auto proj = project_to_hwe(p);

    std::vector<TestResult> results;
    for (const auto& sel : selections(o)) {
        if (sel.calibration == CalibrationKind::Asymptotic) {
            results.push_back(run_asymptotic_test(p, n, eps, o.alpha, sel.kind));
        } else {
            results.push_back(run_bootstrap_test(p, n, eps, o.alpha, {.replicates = o.B, .seed = o.seed, .kind = sel.kind}));
        }
    }
    const double elapsed =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    if (o.json) {
        json report;
        report["command"] = "test";
        report["inputs"] = inputs_json(o);
        report["inputs"]["epsilon"] = num(eps);
        report["inputs"]["kind"] = o.kind;
        report["inputs"]["calib"] = o.calib;
        report["k"] = counts.k();
        report["n"] = n;
        report["alleles"] = json::array();
        for (double a : alleles.freqs()) {
            report["alleles"].push_back(num(a));
        }
        report["l2_distance"] = num(l2);
        report["min_distance"] = num(proj.distance);
        report["results"] = json::array();
        for (const auto& r : results) {
            report["results"].push_back(result_json(r));
        }
        report["rng"] = kRngAlgorithm;
        report["timing_ms"] = num(elapsed);
        out << report.dump(2) << '\n';
    } else if (o.csv) {
        out << "dataset,kind,calib,n,eps,alpha,distance,statistic,sigma,critical_value,reject,min_epsilon\n";
        for (const auto& r : results) {
            out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", csv_field(o.data), to_string(r.kind),
                               to_string(r.calibration), r.n, format_sig6(r.epsilon), format_sig6(r.alpha),
                               format_sig6(r.distance), format_sig6(r.statistic), format_sig6(r.sigma),
                               format_sig6(r.critical_value), r.reject ? 1 : 0, format_sig6(r.min_epsilon));
        }
    } else {
        out << fmt::format("dataset {}  k={}  n={}\n", o.data, counts.k(), n);
        out << "allele frequencies:";
        for (double a : alleles.freqs()) {
            out << ' ' << format_fixed3(a);
        }
        out << '\n';
        out << fmt::format("l2(p, e(p)) = {}   d(p, M) = {}\n", format_fixed3(l2), format_fixed3(proj.distance));
        out << fmt::format("epsilon = {}  alpha = {}\n\n", format_sig6(eps), format_sig6(o.alpha));
        out << fmt::format("{:<5}{:<6}{:>11}{:>9}{:>11}{:>9}  {}\n", "stat", "calib", "T", "sigma", "critical",
                           "min eps", "decision");
        for (const auto& r : results) {
            out << fmt::format("{:<5}{:<6}{:>11.4f}{:>9.4f}{:>11.4f}{:>9.3f}  {}\n",
                               r.kind == TestKind::Conditional ? "T_c" : "T_m", to_string(r.calibration),
                               r.statistic, r.sigma, r.critical_value, r.min_epsilon,
                               r.reject ? "H0 rejected (equivalent)" : "H0 not rejected");
        }
    }
    return results.front().reject ? kRejected : kNotRejected;
}

int cmd_min_eps(const CommonOptions& o, std::ostream& out)
{
    const auto counts = load_dataset(o.data);
    const auto p = from_counts(counts);
    const auto n = counts.n();
    if (!(o.alpha > 0.0 && o.alpha < 1.0)) {
        throw InvalidArgument("alpha must lie in (0, 1)");
    }
    const double l2 = l2_distance(p, hwe_distribution(allele_distribution(p)));
    const auto proj = project_to_hwe(p);
    if (!proj.converged) {
        throw NonConverged("projection onto the HWE family did not converge");
    }
    const double sigma_c = asymptotic_sigma(p, TestKind::Conditional);
    const double sigma_m = asymptotic_sigma(p, TestKind::MinimumDistance, &proj);
    const auto boot = bootstrap_sigmas(p.probs(), p.k(), n, o.B, o.seed, true, true, BootstrapOptions{}.projection);

    const double c_asym = min_epsilon_from_distance(l2, n, o.alpha, sigma_c);
    const double c_boot = min_epsilon_from_distance(l2, n, o.alpha, boot.conditional);
    const double m_asym = min_epsilon_from_distance(proj.distance, n, o.alpha, sigma_m);
    const double m_boot = min_epsilon_from_distance(proj.distance, n, o.alpha, boot.minimum_distance);

    if (o.json) {
        json report;
        report["command"] = "min-eps";
        report["inputs"] = inputs_json(o);
        report["k"] = counts.k();
        report["n"] = n;
        report["l2_distance"] = num(l2);
        report["min_distance"] = num(proj.distance);
        report["sigma"] = {{"c", {{"asym", num(sigma_c)}, {"boot", num(boot.conditional)}}},
                           {"m", {{"asym", num(sigma_m)}, {"boot", num(boot.minimum_distance)}}}};
        report["min_epsilon"] = {{"c", {{"asym", num(c_asym)}, {"boot", num(c_boot)}}},
                                 {"m", {{"asym", num(m_asym)}, {"boot", num(m_boot)}}}};
        report["rng"] = kRngAlgorithm;
        out << report.dump(2) << '\n';
    } else if (o.csv) {
        out << "dataset,n,l2,d,c_asym,c_boot,m_asym,m_boot\n";
        out << fmt::format("{},{},{},{},{},{},{},{}\n", csv_field(o.data), n, format_sig6(l2),
                           format_sig6(proj.distance), format_sig6(c_asym), format_sig6(c_boot), format_sig6(m_asym),
                           format_sig6(m_boot));
    } else {
        out << fmt::format("{:<12}{:>6}{:>8}{:>8}{:>8}{:>8}{:>8}{:>8}\n", "dataset", "n", "l2", "d", "T_c A",
                           "T_c B", "T_m A", "T_m B");
        out << fmt::format("{:<12}{:>6}{:>8}{:>8}{:>8}{:>8}{:>8}{:>8}\n", o.data, n, format_fixed3(l2),
                           format_fixed3(proj.distance), format_fixed3(c_asym), format_fixed3(c_boot),
                           format_fixed3(m_asym), format_fixed3(m_boot));
    }
    return kRejected;
}

StudyConfig study_config(const CommonOptions& o, double eps, int reps, int points)
{
    StudyConfig config{.dataset = load_dataset(o.data)};
    config.epsilon = eps;
    config.alpha = o.alpha;
    config.replications = reps;
    config.eval_points = points;
    config.seed = o.seed;
    config.tests = selections(o);
    config.bootstrap_B = o.B;
    return config;
}

void write_summary_csv(const std::string& data, double eps, const StudySummary& summary, std::ostream& out)
{
    out << "dataset,kind,calib,eps,min,max,mean,dev\n";
    for (const auto& row : summary.rows) {
        out << fmt::format("{},{},{},{},{},{},{},{}\n", csv_field(data), to_string(row.test.kind),
                           to_string(row.test.calibration), format_sig6(eps), format_sig6(row.min),
                           format_sig6(row.max), format_sig6(row.mean), format_sig6(row.dev));
    }
}

int cmd_power(const CommonOptions& o, const std::vector<double>& eps_list, double eps, int reps, int points,
              std::ostream& out)
{
    if (!eps_list.empty()) {
        // Tolerance is validated per grid entry.
        auto config = study_config(o, eps_list.front(), reps, points);
        const auto grid = power_grid(config, eps_list);
        out << "dataset,kind,calib,eps,rate\n";
        for (std::size_t t = 0; t < grid.tests.size(); ++t) {
            for (std::size_t e = 0; e < grid.epsilons.size(); ++e) {
                out << fmt::format("{},{},{},{},{}\n", csv_field(o.data), to_string(grid.tests[t].kind),
                                   to_string(grid.tests[t].calibration), format_sig6(grid.epsilons[e]),
                                   format_sig6(grid.rates[t][e]));
            }
        }
        return kRejected;
    }
    if (!(eps > 0.0)) {
        throw InvalidArgument("power needs --eps-list or a positive --eps");
    }
    const auto summary = sensitivity_study(study_config(o, eps, reps, points));
    write_summary_csv(o.data, eps, summary, out);
    return kRejected;
}

int cmd_boundary(const CommonOptions& o, double eps, int reps, int points, std::ostream& out)
{
    const auto summary = boundary_study(study_config(o, eps, reps, points));
    write_summary_csv(o.data, eps, summary, out);
    return kRejected;
}

int cmd_datasets(bool as_json, std::ostream& out)
{
    if (as_json) {
        json list = json::array();
        for (const auto& d : builtin_datasets()) {
            const auto counts = parse_dataset(d.text);
            list.push_back({{"id", fmt::format("builtin:{}", d.id)},
                            {"name", d.name},
                            {"provenance", d.provenance},
                            {"k", counts.k()},
                            {"n", counts.n()},
                            {"counts", counts.cells()}});
        }
        out << list.dump(2) << '\n';
        return kRejected;
    }
    for (const auto& d : builtin_datasets()) {
        const auto counts = parse_dataset(d.text);
        out << fmt::format("# builtin:{}  {}  k={} n={}\n# {}\n{}\n", d.id, d.name, counts.k(), counts.n(),
                           d.provenance, serialize_dataset(counts));
    }
    return kRejected;
}

} // namespace

std::string format_sig6(double value)
{
    return fmt::format("{:.6g}", value);
}

std::string format_fixed3(double value)
{
    return fmt::format("{:.3f}", value);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Equivalence tests for Hardy-Weinberg equilibrium with multiple alleles", "hwe-equiv"};
    app.require_subcommand(1);

    CommonOptions test_opts;
    double test_eps = 0.0;
    auto* test = app.add_subcommand("test", "run the equivalence tests on one dataset");
    add_common(test, test_opts, 500);
    add_selection(test, test_opts);
    add_format(test, test_opts);
    test->add_option("--eps", test_eps, "tolerance epsilon")->required();

    CommonOptions min_opts;
    auto* min_eps = app.add_subcommand("min-eps", "smallest tolerance at which each test rejects");
    add_common(min_eps, min_opts, 500);
    add_format(min_eps, min_opts);

    CommonOptions power_opts;
    std::vector<double> power_eps_list;
    double power_eps = 0.0;
    int power_reps = 1000;
    int power_points = 100;
    auto* power = app.add_subcommand("power", "power at the HWE law implied by the data (grid or sensitivity study)");
    add_common(power, power_opts, 250);
    add_selection(power, power_opts);
    auto* eps_list_opt = power->add_option("--eps-list", power_eps_list, "comma-separated tolerances (grid)")
                             ->delimiter(',');
    auto* eps_opt = power->add_option("--eps", power_eps, "tolerance for the sensitivity study");
    eps_list_opt->excludes(eps_opt);
    power->add_option("--reps", power_reps, "replications per point")->capture_default_str();
    power->add_option("--points", power_points, "evaluation points (sensitivity study)")->capture_default_str();

    CommonOptions boundary_opts;
    double boundary_eps = 0.0;
    int boundary_reps = 1000;
    int boundary_points = 100;
    auto* boundary = app.add_subcommand("boundary", "rejection rates at random boundary points of H0");
    add_common(boundary, boundary_opts, 250);
    add_selection(boundary, boundary_opts);
    boundary->add_option("--eps", boundary_eps, "tolerance epsilon")->required();
    boundary->add_option("--reps", boundary_reps, "replications per point")->capture_default_str();
    boundary->add_option("--points", boundary_points, "boundary points")->capture_default_str();

    bool datasets_json = false;
    auto* datasets = app.add_subcommand("datasets", "print the builtin datasets");
    datasets->add_flag("--json", datasets_json, "JSON output");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : kError;
    }

    try {
        if (test->parsed()) {
            return cmd_test(test_opts, test_eps, out);
        }
        if (min_eps->parsed()) {
            return cmd_min_eps(min_opts, out);
        }
        if (power->parsed()) {
            return cmd_power(power_opts, power_eps_list, power_eps, power_reps, power_points, out);
        }
        if (boundary->parsed()) {
            return cmd_boundary(boundary_opts, boundary_eps, boundary_reps, boundary_points, out);
        }
        if (datasets->parsed()) {
            return cmd_datasets(datasets_json, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
    return kError;
}

} // namespace hwe_equiv::cli
