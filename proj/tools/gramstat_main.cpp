// Command-line front end: moments / compare / density / sample.
//
// Every run is a single invocation: the ensemble comes from --nt/--q plus
// either --xi (exponential correlation model) or --spectrum FILE, and results
// go to stdout or --out as CSV or JSON. Output is composed in memory first,
// so a failing run never leaves a partial artifact behind.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gramstat/baseline.hpp"
#include "gramstat/density.hpp"
#include "gramstat/errors.hpp"
#include "gramstat/monte_carlo.hpp"
#include "gramstat/spectrum.hpp"
#include "gramstat/stable.hpp"
#include "gramstat/version.hpp"

namespace {

using nlohmann::json;

struct RunConfig {
    std::string command;
    int n_t = 0;
    int q = 0;
    std::optional<double> xi;
    std::optional<std::string> spectrum_path;
    std::vector<int> p_list;
    int K = 0;
    std::int64_t n_samples = 0;
    std::uint64_t seed = 1;
    std::optional<std::string> grid_spec;
    std::string format = "csv";
    std::optional<std::string> out_path;
};

std::string fmt17(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

gramstat::EnsembleConfig make_ensemble(const RunConfig& run) {
    gramstat::Spectrum spectrum =
        run.xi ? gramstat::exponential_spectrum(run.q, *run.xi)
               : gramstat::load_spectrum_file(*run.spectrum_path);
    return gramstat::validate_ensemble(run.n_t, run.q, std::move(spectrum));
}

json meta_json(const RunConfig& run) {
    json meta;
    meta["command"] = run.command;
    meta["n_t"] = run.n_t;
    meta["q"] = run.q;
    if (run.xi) meta["xi"] = *run.xi;
    if (run.spectrum_path) meta["spectrum_path"] = *run.spectrum_path;
    if (!run.p_list.empty()) meta["p_list"] = run.p_list;
    if (run.command == "density") meta["K"] = run.K;
    if (run.n_samples > 0 || run.command == "sample" || run.command == "compare") {
        meta["n_samples"] = run.n_samples;
        meta["seed"] = run.seed;
    }
    if (run.grid_spec) meta["grid"] = *run.grid_spec;
    meta["format"] = run.format;
    meta["library"] = "gramstat";
    meta["version"] = gramstat::kVersion;
    return meta;
}

void write_artifact(const RunConfig& run, const std::string& text) {
    if (run.out_path) {
        std::ofstream out(*run.out_path, std::ios::trunc | std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output path " + *run.out_path);
        out << text;
        if (!out) throw std::runtime_error("write failed for " + *run.out_path);
    } else {
        std::cout << text;
    }
}

std::vector<double> parse_grid(const std::string& spec) {
    double lo = 0.0;
    double hi = 0.0;
    int points = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &lo, &hi, &points) != 3 || points < 2 ||
        !(hi > lo) || lo < 0.0) {
        throw std::invalid_argument("--grid expects MIN:MAX:POINTS with 0 <= MIN < MAX, POINTS >= 2");
    }
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
    }
    return grid;
}

int cmd_moments(const RunConfig& run) {
    const gramstat::EnsembleConfig config = make_ensemble(run);
    gramstat::StableEngine stable(config);

    std::vector<double> stable_col;
    for (int p : run.p_list) stable_col.push_back(stable.moment(p));

    std::optional<gramstat::BaselineEngine> baseline;
    std::string baseline_omitted_reason;
    try {
        baseline.emplace(config);
    } catch (const gramstat::singular_matrix_error& e) {
        baseline_omitted_reason = e.what();
    }
    std::vector<double> baseline_col;
    bool warning = false;
    if (baseline) {
        warning = baseline->unstable();
        for (int p : run.p_list) baseline_col.push_back(baseline->moment(p));
    }

    std::ostringstream text;
    if (run.format == "csv") {
        text << (baseline ? "p,stable,baseline,baseline_condition_warning\n" : "p,stable\n");
        for (std::size_t i = 0; i < run.p_list.size(); ++i) {
            text << run.p_list[i] << ',' << fmt17(stable_col[i]);
            if (baseline) text << ',' << fmt17(baseline_col[i]) << ',' << (warning ? 1 : 0);
            text << '\n';
        }
    } else {
        json doc;
        doc["meta"] = meta_json(run);
        doc["data"]["p"] = run.p_list;
        doc["data"]["stable"] = stable_col;
        if (baseline) {
            doc["data"]["baseline"] = baseline_col;
            doc["data"]["baseline_condition_warning"] = warning;
            doc["meta"]["baseline_condition_estimate"] = baseline->system().condition_estimate;
        } else {
            doc["meta"]["baseline_omitted_reason"] = baseline_omitted_reason;
        }
        text << doc.dump(2) << '\n';
    }
    if (!baseline) {
        std::cerr << "baseline column omitted: " << baseline_omitted_reason << '\n';
    } else if (warning) {
        std::cerr << "warning: Vandermonde condition estimate "
                  << fmt17(baseline->system().condition_estimate)
                  << " exceeds 1e12; baseline column is unreliable\n";
    }
    write_artifact(run, text.str());
    return 0;
}

int cmd_compare(const RunConfig& run) {
    const gramstat::EnsembleConfig config = make_ensemble(run);
    gramstat::StableEngine stable(config);
    const gramstat::EmpiricalSample sample =
        gramstat::sample_eigenvalues(config, run.n_samples, run.seed);

    std::optional<gramstat::BaselineEngine> baseline;
    try {
        baseline.emplace(config);
    } catch (const gramstat::singular_matrix_error&) {
    }

    std::vector<double> baseline_col, empirical_col, stderr_col, stable_col;
    for (int p : run.p_list) {
        if (baseline) baseline_col.push_back(baseline->moment(p));
        const auto [estimate, se] = gramstat::empirical_moment(sample, p);
        empirical_col.push_back(estimate);
        stderr_col.push_back(se);
        stable_col.push_back(stable.moment(p));
    }

    std::ostringstream text;
    if (run.format == "csv") {
        text << (baseline ? "p,baseline,empirical,empirical_stderr,stable\n"
                          : "p,empirical,empirical_stderr,stable\n");
        for (std::size_t i = 0; i < run.p_list.size(); ++i) {
            text << run.p_list[i] << ',';
            if (baseline) text << fmt17(baseline_col[i]) << ',';
            text << fmt17(empirical_col[i]) << ',' << fmt17(stderr_col[i]) << ','
                 << fmt17(stable_col[i]) << '\n';
        }
    } else {
        json doc;
        doc["meta"] = meta_json(run);
        doc["data"]["p"] = run.p_list;
        if (baseline) doc["data"]["baseline"] = baseline_col;
        doc["data"]["empirical"] = empirical_col;
        doc["data"]["empirical_stderr"] = stderr_col;
        doc["data"]["stable"] = stable_col;
        text << doc.dump(2) << '\n';
    }
    if (baseline && baseline->unstable()) {
        std::cerr << "warning: baseline column is unreliable (condition estimate "
                  << fmt17(baseline->system().condition_estimate) << ")\n";
    }
    write_artifact(run, text.str());
    return 0;
}

int cmd_density(const RunConfig& run) {
    const gramstat::EnsembleConfig config = make_ensemble(run);
    // the fit needs mu(0..2) for scale and shape even below K = 2
    const gramstat::MomentTable moments =
        gramstat::stable_moments_upto(config, std::max(run.K, 2));
    const gramstat::DensityModel model = gramstat::fit_density(moments, run.K);

    const std::vector<double> grid =
        run.grid_spec ? parse_grid(*run.grid_spec) : gramstat::default_grid(model);
    const gramstat::DensityEvaluation eval = gramstat::evaluate_on_grid(model, grid);

    double min_pdf = 0.0;
    for (double v : eval.pdf) min_pdf = std::min(min_pdf, v);

    std::optional<gramstat::EmpiricalSample> overlay;
    double ks = 0.0;
    if (run.n_samples > 0) {
        overlay = gramstat::sample_eigenvalues(config, run.n_samples, run.seed);
        ks = gramstat::ks_distance(model, *overlay);
    }

    // Empirical PDF overlay: histogram density with bins centered on the grid.
    std::vector<double> emp_pdf, emp_cdf;
    if (overlay) {
        const double h = eval.grid.size() > 1 ? eval.grid[1] - eval.grid[0] : 1.0;
        for (double x : eval.grid) {
            const double upper = gramstat::empirical_cdf(*overlay, x + 0.5 * h);
            const double lower =
                x > 0.5 * h ? gramstat::empirical_cdf(*overlay, x - 0.5 * h) : 0.0;
            emp_pdf.push_back((upper - lower) / h);
            emp_cdf.push_back(gramstat::empirical_cdf(*overlay, x));
        }
    }

    std::vector<double> clipped = eval.pdf;
    for (double& v : clipped) v = std::max(v, 0.0);

    std::ostringstream text;
    if (run.format == "csv") {
        text << (overlay ? "lambda,pdf,cdf,empirical_pdf,empirical_cdf\n" : "lambda,pdf,cdf\n");
        for (std::size_t i = 0; i < eval.grid.size(); ++i) {
            text << fmt17(eval.grid[i]) << ',' << fmt17(clipped[i]) << ',' << fmt17(eval.cdf[i]);
            if (overlay) text << ',' << fmt17(emp_pdf[i]) << ',' << fmt17(emp_cdf[i]);
            text << '\n';
        }
    } else {
        json doc;
        doc["meta"] = meta_json(run);
        doc["meta"]["diagnostics"]["min_pdf_before_clip"] = min_pdf;
        doc["meta"]["diagnostics"]["truncation_indicator"] =
            gramstat::truncation_indicator(model, eval.grid);
        if (overlay) doc["meta"]["diagnostics"]["ks_distance"] = ks;
        doc["meta"]["fit"]["c"] = model.scale();
        doc["meta"]["fit"]["nu"] = model.shape();
        doc["data"]["lambda"] = eval.grid;
        doc["data"]["pdf"] = clipped;
        doc["data"]["cdf"] = eval.cdf;
        if (overlay) {
            doc["data"]["empirical_pdf"] = emp_pdf;
            doc["data"]["empirical_cdf"] = emp_cdf;
        }
        text << doc.dump(2) << '\n';
    }
    std::cerr << "diagnostic: min pdf before clipping = " << fmt17(min_pdf) << '\n';
    if (overlay) std::cerr << "diagnostic: ks distance = " << fmt17(ks) << '\n';
    write_artifact(run, text.str());
    return 0;
}

int cmd_sample(const RunConfig& run) {
    const gramstat::EnsembleConfig config = make_ensemble(run);
    const gramstat::EmpiricalSample sample =
        gramstat::sample_eigenvalues(config, run.n_samples, run.seed);
    if (run.format == "bin") {
        if (!run.out_path) throw std::invalid_argument("sample --format bin requires --out PATH");
        gramstat::export_binary(sample, *run.out_path);
    } else if (run.format == "csv") {
        if (run.out_path) {
            gramstat::export_csv(sample, *run.out_path);
        } else {
            gramstat::export_csv(sample, std::cout);
        }
    } else {
        throw std::invalid_argument("sample supports --format csv or bin");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moments and eigenvalue densities of one-side-correlated Gram matrices"};
    app.require_subcommand(1);

    RunConfig run;

    const auto add_common = [&run](CLI::App* cmd, bool needs_spectrum = true) {
        if (needs_spectrum) {
            cmd->add_option("--nt", run.n_t, "column dimension n_t")->required();
            cmd->add_option("--q", run.q, "row dimension q")->required();
            auto* xi = cmd->add_option("--xi", run.xi,
                                       "forgetting factor of the exponential correlation model");
            auto* path = cmd->add_option("--spectrum", run.spectrum_path,
                                         "eigenvalue file (JSON array or one value per line)");
            xi->excludes(path);
            path->excludes(xi);
        }
        cmd->add_option("--out", run.out_path, "output path (stdout when omitted)");
    };

    CLI::App* moments = app.add_subcommand("moments", "stable vs classical moment table");
    add_common(moments);
    moments->add_option("--p", run.p_list, "comma-separated moment orders")
        ->required()
        ->delimiter(',');
    moments->add_option("--format", run.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* compare = app.add_subcommand("compare", "three-way table: baseline, empirical, stable");
    add_common(compare);
    compare->add_option("--p", run.p_list, "comma-separated moment orders")
        ->required()
        ->delimiter(',');
    compare->add_option("--samples", run.n_samples, "number of Monte Carlo realizations")
        ->required()
        ->check(CLI::PositiveNumber);
    compare->add_option("--seed", run.seed, "RNG seed");
    compare->add_option("--format", run.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* density = app.add_subcommand("density", "Laguerre-series PDF/CDF grid");
    add_common(density);
    density->add_option("--K", run.K, "truncation order")->required()->check(CLI::NonNegativeNumber);
    density->add_option("--samples", run.n_samples, "empirical overlay realizations (0 = none)")
        ->check(CLI::NonNegativeNumber);
    density->add_option("--seed", run.seed, "RNG seed");
    density->add_option("--grid", run.grid_spec, "evaluation grid MIN:MAX:POINTS");
    density->add_option("--format", run.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* sample = app.add_subcommand("sample", "draw and export an empirical sample");
    add_common(sample);
    sample->add_option("--samples", run.n_samples, "number of Monte Carlo realizations")
        ->required()
        ->check(CLI::PositiveNumber);
    sample->add_option("--seed", run.seed, "RNG seed");
    sample->add_option("--format", run.format, "csv or bin")
        ->check(CLI::IsMember({"csv", "bin"}));

    CLI11_PARSE(app, argc, argv);

    try {
        for (CLI::App* cmd : {moments, compare, density, sample}) {
            if (cmd->parsed()) {
                run.command = cmd->get_name();
                if (!run.xi && !run.spectrum_path) {
                    throw std::invalid_argument("one of --xi or --spectrum is required");
                }
            }
        }
        if (moments->parsed()) return cmd_moments(run);
        if (compare->parsed()) return cmd_compare(run);
        if (density->parsed()) return cmd_density(run);
        if (sample->parsed()) return cmd_sample(run);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
