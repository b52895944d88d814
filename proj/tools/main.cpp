// splineproj command line front end.
//
// Subcommands: gram, decay, lebesgue, project, lemma2, converge, ensemble.
// Every output file starts with a comment block echoing the resolved
// configuration, so a rerun with the same flags reproduces the bytes.
// Exit codes: 0 success, 2 usage or configuration problem, 3 numerical
// failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <splineproj/analysis.hpp>
#include <splineproj/bspline.hpp>
#include <splineproj/errors.hpp>
#include <splineproj/gram.hpp>
#include <splineproj/knots.hpp>
#include <splineproj/projector.hpp>
#include <splineproj/report.hpp>
#include <splineproj/rng.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sp = splineproj;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kKnotTag = 0x6b6e6f74;  // knot draws for --random

struct CommonOpts {
    int order = 0;
    std::string knots_path;
    int uniform_n = 0;
    int random_n = 0;
    std::uint64_t seed = 1;
    double min_ratio = 1e-3;
    bool periodic = false;
    bool clamped = false;
    int quad_depth = 8;
    int grid = 0;
    std::string out;
};

void add_common_flags(CLI::App* cmd, CommonOpts& c, bool with_source) {
    cmd->add_option("-k,--order", c.order, "Spline order (degree + 1)")->required();
    if (with_source) {
        auto* knots = cmd->add_option("--knots", c.knots_path, "Knot file path");
        auto* uni = cmd->add_option("--uniform", c.uniform_n, "Uniform knots, N basis functions");
        auto* rnd = cmd->add_option("--random", c.random_n, "Seeded random knots, N basis functions");
        knots->excludes(uni)->excludes(rnd);
        uni->excludes(rnd);
        auto* per = cmd->add_flag("--periodic", c.periodic, "Periodic spline space on the circle");
        auto* cla = cmd->add_flag("--clamped", c.clamped, "Clamped spline space on an interval");
        per->excludes(cla);
    }
    cmd->add_option("--seed", c.seed, "Random seed");
    cmd->add_option("--min-ratio", c.min_ratio, "Smallest cell length relative to 1/n");
    cmd->add_option("--quad-depth", c.quad_depth, "Quadrature subdivisions per knot cell")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--grid", c.grid, "Evaluation grid density")->check(CLI::PositiveNumber);
    cmd->add_option("--out", c.out, "Output path stem");
}

// Resolved knot source: exactly one of the two optionals is set.
struct KnotSource {
    std::optional<sp::KnotVector> clamped;
    std::optional<sp::PeriodicKnotVector> periodic;
    sp::ConfigEcho echo;
};

KnotSource resolve_knots(const CommonOpts& c) {
    const int given = (!c.knots_path.empty() ? 1 : 0) + (c.uniform_n > 0 ? 1 : 0) +
                      (c.random_n > 0 ? 1 : 0);
    if (given != 1)
        throw sp::ParseError("exactly one of --knots, --uniform, --random is required");
    if (c.order < 1) throw sp::ParseError("--order must be at least 1");

    KnotSource src;
    if (!c.knots_path.empty()) {
        sp::KnotFile kf = sp::read_knot_file(c.knots_path);
        if (kf.order != c.order)
            throw sp::ParseError("knot file order " + std::to_string(kf.order) +
                                 " does not match --order " + std::to_string(c.order));
        const bool file_periodic = kf.mode == sp::KnotMode::periodic;
        if ((c.periodic && !file_periodic) || (c.clamped && file_periodic))
            throw sp::ParseError("--periodic/--clamped contradicts the knot file header");
        src.echo.emplace_back("knots", c.knots_path);
        src.echo.emplace_back("mode", file_periodic ? "periodic" : "clamped");
        if (file_periodic)
            src.periodic = sp::validate_periodic_knots(kf.order, kf.values);
        else
            src.clamped = sp::validate_clamped_knots(kf.order, kf.values);
        return src;
    }

    const bool periodic = c.periodic;  // default clamped
    const int n = c.uniform_n > 0 ? c.uniform_n : c.random_n;
    if (c.uniform_n > 0) {
        src.echo.emplace_back("uniform", std::to_string(n));
        src.echo.emplace_back("mode", periodic ? "periodic" : "clamped");
        if (periodic)
            src.periodic = sp::uniform_periodic_knots(c.order, n);
        else
            src.clamped = sp::uniform_clamped_knots(c.order, n);
    } else {
        src.echo.emplace_back("random", std::to_string(n));
        src.echo.emplace_back("mode", periodic ? "periodic" : "clamped");
        src.echo.emplace_back("seed", std::to_string(c.seed));
        src.echo.emplace_back("min_ratio", sp::format_double(c.min_ratio));
        sp::SplitRng rng = sp::SplitRng::fork(
            c.seed, {kKnotTag, static_cast<std::uint64_t>(c.order), static_cast<std::uint64_t>(n)});
        if (periodic)
            src.periodic = sp::random_periodic_knots(c.order, n, c.min_ratio, rng);
        else
            src.clamped = sp::random_clamped_knots(c.order, n, c.min_ratio, rng);
    }
    return src;
}

sp::ConfigEcho base_config(const std::string& command, const CommonOpts& c,
                           const KnotSource& src) {
    sp::ConfigEcho e;
    e.emplace_back("command", command);
    e.emplace_back("order", std::to_string(c.order));
    for (const auto& kv : src.echo) e.push_back(kv);
    return e;
}

std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += sp::format_double(v[i]);
    }
    return s;
}

ordered_json json_root(const sp::ConfigEcho& config) {
    ordered_json j;
    j["format"] = sp::kFormatVersion;
    ordered_json cfg;
    for (const auto& [k, v] : config) cfg[k] = v;
    j["config"] = cfg;
    return j;
}

// JSON payloads carry the same comment preamble as every other output; strip
// lines starting with '#' to recover plain JSON.
void write_json(const std::string& path, const sp::ConfigEcho& config, const ordered_json& j) {
    sp::write_file_atomic(path, sp::config_comment_block(config) + j.dump(2) + "\n");
}

std::string stem_or(const CommonOpts& c, const char* fallback) {
    return c.out.empty() ? std::string(fallback) : c.out;
}

sp::DenseMatrix dense_of(const sp::BandedSymmetricMatrix& m) {
    sp::DenseMatrix d(m.dim(), m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) d.at(i, j) = m.get(i, j);
    return d;
}

sp::DenseMatrix dense_of(const sp::CyclicBandedMatrix& m) {
    sp::DenseMatrix d(m.dim(), m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) d.at(i, j) = m.get(i, j);
    return d;
}

// ---- gram ----------------------------------------------------------------

int cmd_gram(const CommonOpts& c) {
    KnotSource src = resolve_knots(c);
    sp::ConfigEcho config = base_config("gram", c, src);
    config.emplace_back("quad_depth", std::to_string(c.quad_depth));
    const std::string stem = stem_or(c, "gram");

    sp::DenseMatrix g(1, 1), inv(1, 1);
    if (src.periodic) {
        sp::PeriodicBSplineBasis basis(*src.periodic);
        sp::CyclicBandedMatrix gram = sp::periodic_gram_matrix(basis);
        g = dense_of(gram);
        inv = sp::full_inverse(gram);
    } else {
        sp::BSplineBasis basis(*src.clamped);
        sp::BandedSymmetricMatrix gram = sp::gram_matrix(basis);
        g = dense_of(gram);
        inv = sp::full_inverse(gram);
    }
    sp::write_file_atomic(stem + ".txt", sp::matrix_text(g, config));
    sp::write_file_atomic(stem + "_inverse.txt", sp::matrix_text(inv, config));
    std::cout << "wrote " << stem << ".txt and " << stem << "_inverse.txt\n";
    return 0;
}

// ---- decay ---------------------------------------------------------------

int cmd_decay(const CommonOpts& c, const std::string& weighting_name) {
    KnotSource src = resolve_knots(c);
    sp::ConfigEcho config = base_config("decay", c, src);
    config.emplace_back("weighting", weighting_name);
    config.emplace_back("quad_depth", std::to_string(c.quad_depth));
    const std::string stem = stem_or(c, "decay");

    const sp::Weighting w =
        weighting_name == "maxsupp" ? sp::Weighting::maxsupp : sp::Weighting::hull;
    sp::DecayFit fit;
    if (src.periodic) {
        sp::PeriodicDualBasis dual{sp::PeriodicBSplineBasis(*src.periodic)};
        fit = sp::fit_inverse_decay(dual, w);
    } else {
        sp::DualBasis dual{sp::BSplineBasis(*src.clamped)};
        fit = sp::fit_inverse_decay(dual, w);
    }

    sp::CsvWriter csv(config);
    csv.header({"distance", "envelope"});
    for (const auto& [d, v] : fit.envelope) {
        csv.add(d).add(v);
        csv.end_row();
    }
    sp::write_file_atomic(stem + ".csv", csv.str());

    ordered_json j = json_root(config);
    j["gamma_hat"] = fit.gamma_hat;
    j["k_hat"] = fit.k_hat;
    j["max_violation_ratio"] = fit.max_violation_ratio;
    j["exact_banded"] = fit.exact_banded;
    j["geometric_decay"] = fit.exact_banded || fit.gamma_hat < 1.0;
    write_json(stem + ".json", config, j);
    std::cout << "gamma_hat = " << sp::format_double(fit.gamma_hat) << "\n";
    return 0;
}

// ---- lebesgue ------------------------------------------------------------

int cmd_lebesgue(const CommonOpts& c) {
    KnotSource src = resolve_knots(c);
    const int grid = c.grid > 0 ? c.grid : 32;
    sp::ConfigEcho config = base_config("lebesgue", c, src);
    config.emplace_back("grid", std::to_string(grid));
    const std::string stem = stem_or(c, "lebesgue");

    double leb = 0.0;
    if (src.periodic) {
        sp::PeriodicDualBasis dual{sp::PeriodicBSplineBasis(*src.periodic)};
        leb = sp::lebesgue_constant(dual, grid);
    } else {
        sp::DualBasis dual{sp::BSplineBasis(*src.clamped)};
        leb = sp::lebesgue_constant(dual, grid);
    }

    ordered_json j = json_root(config);
    j["lebesgue"] = leb;
    write_json(stem + ".json", config, j);
    std::cout << "lebesgue = " << sp::format_double(leb) << "\n";
    return 0;
}

// ---- project ---------------------------------------------------------- --

int cmd_project(const CommonOpts& c, const std::string& fn_id) {
    KnotSource src = resolve_knots(c);
    const int grid = c.grid > 0 ? c.grid : 512;
    sp::ConfigEcho config = base_config("project", c, src);
    config.emplace_back("fn", fn_id);
    config.emplace_back("quad_depth", std::to_string(c.quad_depth));
    config.emplace_back("grid", std::to_string(grid));
    const std::string stem = stem_or(c, "project");

    sp::TestFunction tf = sp::make_test_function(fn_id);

    double quad_error = 0.0;
    std::function<double(double)> pf;
    double lo = 0.0, hi = 1.0;
    if (src.periodic) {
        sp::PeriodicBSplineBasis basis(*src.periodic);
        sp::PeriodicProjection pr = sp::project(basis, tf.f, c.quad_depth, tf.singularities);
        quad_error = pr.quad_error;
        pf = pr.spline;
    } else {
        sp::BSplineBasis basis(*src.clamped);
        sp::Projection pr = sp::project(basis, tf.f, c.quad_depth, tf.singularities);
        quad_error = pr.quad_error;
        lo = basis.domain_min();
        hi = basis.domain_max();
        pf = pr.spline;
    }

    // Midpoint samples; they avoid the catalog's singular points for even
    // grid sizes.
    sp::CsvWriter csv(config);
    csv.header({"x", "f", "pf"});
    double sup_diff = 0.0;
    for (int t = 0; t < grid; ++t) {
        const double x = lo + (hi - lo) * (t + 0.5) / grid;
        const double fx = tf.f(x);
        const double px = pf(x);
        if (std::isfinite(fx)) sup_diff = std::max(sup_diff, std::abs(fx - px));
        csv.add(x).add(fx).add(px);
        csv.end_row();
    }
    sp::write_file_atomic(stem + ".csv", csv.str());

    std::string gp = sp::config_comment_block(config);
    gp += "set datafile separator comma\n";
    gp += "set key autotitle columnhead\n";
    gp += "set xlabel 'x'\n";
    gp += "plot '" + stem + ".csv' using 1:2 with lines, '' using 1:3 with lines\n";
    sp::write_file_atomic(stem + ".gp", gp);

    ordered_json j = json_root(config);
    j["quad_error"] = quad_error;
    j["sup_sample_error"] = sup_diff;
    write_json(stem + ".json", config, j);
    std::cout << "sup sample error = " << sp::format_double(sup_diff) << "\n";
    return 0;
}

// ---- lemma2 ----------------------------------------------------------- --

int cmd_lemma2(const CommonOpts& c, int cell) {
    KnotSource src = resolve_knots(c);
    if (!src.periodic)
        throw sp::ParseError("lemma2 requires a periodic knot source (--periodic)");
    const int grid = c.grid > 0 ? c.grid : 512;
    sp::ConfigEcho config = base_config("lemma2", c, src);
    config.emplace_back("cell", std::to_string(cell));
    config.emplace_back("quad_depth", std::to_string(c.quad_depth));
    config.emplace_back("grid", std::to_string(grid));
    const std::string stem = stem_or(c, "lemma2");

    sp::PeriodicBSplineBasis basis(*src.periodic);
    std::vector<double> xs(static_cast<std::size_t>(grid));
    for (int t = 0; t < grid; ++t) xs[static_cast<std::size_t>(t)] = (t + 0.5) / grid;
    sp::Lemma2Report rep = sp::check_lemma2_decay(basis, cell, xs, {}, c.quad_depth);

    sp::CsvWriter csv(config);
    csv.header({"distance", "envelope"});
    for (const auto& [d, v] : rep.envelope) {
        csv.add(d).add(v);
        csv.end_row();
    }
    sp::write_file_atomic(stem + ".csv", csv.str());

    ordered_json j = json_root(config);
    j["slope"] = rep.slope;
    j["intercept"] = rep.intercept;
    j["r_squared"] = rep.r_squared;
    j["far_field"] = rep.far_field;
    j["max_distance"] = rep.max_distance;
    j["f_sup"] = rep.f_sup;
    j["pt_term_max"] = rep.pt_term_max;
    j["g_term_max"] = rep.g_term_max;
    j["interior_moment_max"] = rep.interior_moment_max;
    j["decomposition_error"] = rep.decomposition_error;
    write_json(stem + ".json", config, j);
    std::cout << "slope = " << sp::format_double(rep.slope)
              << ", far field = " << sp::format_double(rep.far_field) << "\n";
    return 0;
}

// ---- converge --------------------------------------------------------- --

int cmd_converge(const CommonOpts& c, const std::string& fn_id, std::vector<int> ns,
                 std::vector<double> tracked, const std::string& law_name) {
    if (c.order < 1) throw sp::ParseError("--order must be at least 1");
    if (ns.empty()) ns = {16, 32, 64, 128, 256};
    if (tracked.empty()) tracked = {0.1, 0.25, 0.9};
    const int grid = c.grid > 0 ? c.grid : 2048;
    const sp::PartitionLaw law = law_name == "random" ? sp::PartitionLaw::seeded_random
                                                      : sp::PartitionLaw::uniform;

    sp::ConfigEcho config;
    config.emplace_back("command", "converge");
    config.emplace_back("order", std::to_string(c.order));
    config.emplace_back("fn", fn_id);
    config.emplace_back("ns", join_ints(ns));
    config.emplace_back("tracked", join_doubles(tracked));
    config.emplace_back("law", law_name);
    config.emplace_back("seed", std::to_string(c.seed));
    config.emplace_back("min_ratio", sp::format_double(c.min_ratio));
    config.emplace_back("grid", std::to_string(grid));
    config.emplace_back("quad_depth", std::to_string(c.quad_depth));
    const std::string stem = stem_or(c, "converge");

    sp::TestFunction tf = sp::make_test_function(fn_id);
    sp::ConvergenceTable table = sp::run_convergence_experiment(
        tf, c.order, ns, tracked, law, c.min_ratio, c.seed, grid, c.quad_depth);

    std::vector<std::string> cols = {"n", "mesh_width", "sup_error", "l1_error"};
    for (double tp : tracked) cols.push_back("err_at_" + sp::format_double(tp));
    sp::CsvWriter csv(config);
    csv.header(cols);
    for (const auto& row : table.rows) {
        csv.add(row.n).add(row.mesh_width).add(row.sup_error).add(row.l1_error);
        for (double e : row.tracked_errors) csv.add(e);
        csv.end_row();
    }
    sp::write_file_atomic(stem + ".csv", csv.str());

    ordered_json j = json_root(config);
    j["fitted_order"] = table.fitted_order;
    j["first_sup_error"] = table.rows.front().sup_error;
    j["last_sup_error"] = table.rows.back().sup_error;
    j["sup_error_decreased"] = table.rows.back().sup_error < table.rows.front().sup_error;
    write_json(stem + ".json", config, j);
    std::cout << "fitted order = " << sp::format_double(table.fitted_order) << "\n";
    return 0;
}

// ---- ensemble --------------------------------------------------------- --

int cmd_ensemble(const CommonOpts& c, std::vector<int> ns, int trials,
                 const std::string& law_name) {
    if (c.order < 1) throw sp::ParseError("--order must be at least 1");
    if (ns.empty()) ns = {16, 64, 256, 1024};
    const int grid = c.grid > 0 ? c.grid : 16;
    const sp::KnotLaw law =
        law_name == "uniform" ? sp::KnotLaw::uniform : sp::KnotLaw::seeded_random;

    sp::ConfigEcho config;
    config.emplace_back("command", "ensemble");
    config.emplace_back("order", std::to_string(c.order));
    config.emplace_back("ns", join_ints(ns));
    config.emplace_back("trials", std::to_string(trials));
    config.emplace_back("law", law_name);
    config.emplace_back("seed", std::to_string(c.seed));
    config.emplace_back("min_ratio", sp::format_double(c.min_ratio));
    config.emplace_back("grid", std::to_string(grid));
    const std::string stem = stem_or(c, "ensemble");

    sp::SweepResult res = sp::sweep_uniform_boundedness({c.order}, ns, law, c.min_ratio,
                                                        trials, c.seed, grid);

    sp::CsvWriter csv(config);
    csv.header({"order", "n", "trial", "lebesgue"});
    for (const auto& e : res.entries) {
        csv.add(e.order).add(e.n).add(e.trial).add(e.lebesgue);
        csv.end_row();
    }
    sp::write_file_atomic(stem + ".csv", csv.str());

    double per_n_min = 0.0, per_n_max = 0.0;
    bool first = true;
    ordered_json per_n = ordered_json::array();
    for (const auto& [k, n, v] : res.per_order_n_max) {
        (void)k;
        per_n.push_back({{"n", n}, {"max_lebesgue", v}});
        if (first || v < per_n_min) per_n_min = v;
        if (first || v > per_n_max) per_n_max = v;
        first = false;
    }
    const double variation = per_n_min > 0.0 ? per_n_max / per_n_min : 0.0;

    ordered_json j = json_root(config);
    j["max_lebesgue"] = res.per_order_max.front().second;
    j["per_n"] = per_n;
    j["variation_factor"] = variation;
    j["bounded"] = variation <= 1.5;
    write_json(stem + ".json", config, j);
    std::cout << "max lebesgue = " << sp::format_double(res.per_order_max.front().second)
              << ", variation factor = " << sp::format_double(variation) << "\n";
    return 0;
}

bool is_config_error(const sp::Error& e) {
    return dynamic_cast<const sp::ParseError*>(&e) || dynamic_cast<const sp::IoError*>(&e) ||
           dynamic_cast<const sp::NotSorted*>(&e) ||
           dynamic_cast<const sp::MultiplicityViolation*>(&e) ||
           dynamic_cast<const sp::TooFewKnots*>(&e) ||
           dynamic_cast<const sp::OutOfRange*>(&e) ||
           dynamic_cast<const sp::IndexOutOfRange*>(&e) ||
           dynamic_cast<const sp::DomainViolation*>(&e) ||
           dynamic_cast<const sp::EmptySet*>(&e);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orthogonal projections onto spline spaces: assembly, decay fits, "
                 "Lebesgue constants, and convergence experiments"};
    app.require_subcommand(1);

    CommonOpts c;
    std::string weighting = "hull";
    std::string fn_id = "sin";
    int cell = 0;
    std::vector<int> ns;
    std::vector<double> tracked;
    std::string conv_law = "uniform";
    std::string ens_law = "random";
    int trials = 25;

    CLI::App* gram = app.add_subcommand("gram", "Write the Gram matrix and its inverse");
    add_common_flags(gram, c, true);

    CLI::App* decay = app.add_subcommand("decay", "Fit geometric decay of the inverse Gram");
    add_common_flags(decay, c, true);
    decay->add_option("--weighting", weighting, "Envelope weighting: hull or maxsupp")
        ->check(CLI::IsMember({"hull", "maxsupp"}));

    CLI::App* lebesgue = app.add_subcommand("lebesgue", "Estimate the Lebesgue constant");
    add_common_flags(lebesgue, c, true);

    CLI::App* project = app.add_subcommand("project", "Project a test function and sample it");
    add_common_flags(project, c, true);
    project->add_option("--fn", fn_id, "Test function: sin, hat, step, pow13, pow12");

    CLI::App* lemma2 = app.add_subcommand(
        "lemma2", "Localization of the periodic projector applied to a one-cell function");
    add_common_flags(lemma2, c, true);
    lemma2->add_option("--cell", cell, "Cell index of the support");

    CLI::App* converge = app.add_subcommand("converge", "Projection errors over n");
    add_common_flags(converge, c, false);
    converge->add_option("--fn", fn_id, "Test function: sin, hat, step, pow13, pow12");
    converge->add_option("--ns", ns, "Comma separated list of n values")->delimiter(',');
    converge->add_option("--tracked", tracked, "Tracked evaluation points")->delimiter(',');
    converge->add_option("--law", conv_law, "Partition law: uniform or random")
        ->check(CLI::IsMember({"uniform", "random"}));

    CLI::App* ensemble = app.add_subcommand("ensemble", "Lebesgue constant sweep over n and trials");
    add_common_flags(ensemble, c, false);
    ensemble->add_option("--ns", ns, "Comma separated list of n values")->delimiter(',');
    ensemble->add_option("--trials", trials, "Trials per (order, n)")->check(CLI::PositiveNumber);
    ensemble->add_option("--law", ens_law, "Knot law: uniform or random")
        ->check(CLI::IsMember({"uniform", "random"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(gram)) return cmd_gram(c);
        if (app.got_subcommand(decay)) return cmd_decay(c, weighting);
        if (app.got_subcommand(lebesgue)) return cmd_lebesgue(c);
        if (app.got_subcommand(project)) return cmd_project(c, fn_id);
        if (app.got_subcommand(lemma2)) return cmd_lemma2(c, cell);
        if (app.got_subcommand(converge)) return cmd_converge(c, fn_id, ns, tracked, conv_law);
        if (app.got_subcommand(ensemble)) return cmd_ensemble(c, ns, trials, ens_law);
    } catch (const sp::Error& e) {
        std::cerr << e.what() << "\n";
        return is_config_error(e) ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
