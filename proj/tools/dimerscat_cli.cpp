// Command-line driver: loads one JSON config, dispatches a subcommand, and
// writes deterministic CSV/JSON artifacts into the output directory.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "dimerscat/dimerscat.hpp"

namespace fs = std::filesystem;
using namespace dimerscat;

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_override;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool quiet = false;
};

std::ofstream open_artifact(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream os(dir / name, std::ios::binary);
    if (!os) throw Error("cannot open output file: " + (dir / name).string());
    return os;
}

void write_json(const fs::path& dir, const std::string& name, const nlohmann::json& j) {
    auto os = open_artifact(dir, name);
    os << j.dump(2) << '\n';
}

void print_report_table(const RegimeReport& r, std::ostream& os) {
    for (const auto& c : r.checks)
        os << (c.pass ? "  pass  " : "  FAIL  ") << c.label << "  (value " << g17(c.value)
           << ", margin " << g17(c.margin) << ")\n";
}

struct RunContext {
    RunConfig cfg;
    std::string hash;
    fs::path out;
    bool quiet = false;

    void note(const std::string& line) const {
        if (!quiet) std::cout << line << '\n';
    }
};

std::pair<FullMoments, SolveReport> solve_full(const RunContext& ctx, const FullSystem& sys) {
    if (ctx.cfg.solver.method == SolveMethod::dense)
        return solve_dense(sys, ctx.cfg.solver.unknown_cap);
    return solve_block_iterative(sys, ctx.cfg.solver.method, ctx.cfg.solver.tol,
                                 ctx.cfg.solver.max_iter);
}

std::pair<ReducedMoments, SolveReport> solve_reduced(const RunContext& ctx,
                                                     const ReducedSystem& sys) {
    if (ctx.cfg.solver.method == SolveMethod::dense)
        return solve_dense(sys, ctx.cfg.solver.unknown_cap);
    return solve_block_iterative(sys, ctx.cfg.solver.method, ctx.cfg.solver.tol,
                                 ctx.cfg.solver.max_iter);
}

void run_geometry(const RunContext& ctx) {
    const auto g = build_geometry(ctx.cfg);
    {
        auto os = open_artifact(ctx.out, "geometry.txt");
        save_geometry(os, g);
    }
    const auto report = validate_geometry(g, ctx.cfg.model.scaling(), ctx.cfg.validation_tol);
    write_json(ctx.out, "geometry_report.json", to_json(report));
    ctx.note("geometry: " + std::to_string(g.size()) + " dimers, d_in " + g17(g.realized_d_in) +
             ", d_out " + g17(g.realized_d_out) + (report.all_ok() ? "" : "  [validation FAILED]"));
}

void run_check(const RunContext& ctx) {
    const auto regime = check_regime(ctx.cfg.model);
    const auto invert = check_invertibility(ctx.cfg.model, ctx.cfg.tensors);
    nlohmann::json j{{"regime", to_json(regime)}, {"invertibility", to_json(invert)}};
    write_json(ctx.out, "regime_report.json", j);
    if (!ctx.quiet) {
        std::cout << "admissibility:\n";
        print_report_table(regime, std::cout);
        std::cout << "invertibility:\n";
        print_report_table(invert, std::cout);
    }
}

void run_solve(const RunContext& ctx) {
    const auto g = build_geometry(ctx.cfg);
    const auto sys = assemble_full_system(g, ctx.cfg.model, ctx.cfg.tensors,
                                          ctx.cfg.incident_wave());
    if (ctx.cfg.dump_matrix) {
        auto os = open_artifact(ctx.out, "matrix.csv");
        dump_dense_csv(os, sys);
    }
    const auto [mom, rep] = solve_full(ctx, sys);
    {
        auto os = open_artifact(ctx.out, "moments.csv");
        write_moments_csv(os, mom, ctx.hash);
    }
    write_json(ctx.out, "solve_report.json", to_json(rep));
    ctx.note("solve: " + std::to_string(sys.unknowns()) + " unknowns, residual " +
             g17(rep.relative_residual) + (rep.converged ? "" : "  [NOT CONVERGED]"));
}

void run_farfield(const RunContext& ctx) {
    const auto g = build_geometry(ctx.cfg);
    const auto sys = assemble_full_system(g, ctx.cfg.model, ctx.cfg.tensors,
                                          ctx.cfg.incident_wave());
    const auto [mom, rep] = solve_full(ctx, sys);
    const auto pat = far_field_grid(mom, g, ctx.cfg.model.k, ctx.cfg.n_theta, ctx.cfg.n_phi);
    const double sigma = scattering_cross_section(pat);
    {
        auto os = open_artifact(ctx.out, "farfield.csv");
        write_pattern_csv(os, pat, ctx.hash);
    }
    write_json(ctx.out, "farfield_report.json",
               {{"solve", to_json(rep)}, {"cross_section", sigma}});
    ctx.note("farfield: cross section " + g17(sigma));
}

void run_reduced(const RunContext& ctx) {
    const auto g = build_geometry(ctx.cfg);
    const auto sys = assemble_reduced_system(g, ctx.cfg.model, ctx.cfg.tensors,
                                             ctx.cfg.incident_wave());
    const auto [mom, rep] = solve_reduced(ctx, sys);
    const auto pat =
        reduced_far_field_grid(mom, g, ctx.cfg.model.k, ctx.cfg.n_theta, ctx.cfg.n_phi);
    const double sigma = scattering_cross_section(pat);
    {
        auto os = open_artifact(ctx.out, "reduced_moments.csv");
        write_moments_csv(os, mom, ctx.hash);
    }
    {
        auto os = open_artifact(ctx.out, "reduced_farfield.csv");
        write_pattern_csv(os, pat, ctx.hash);
    }
    write_json(ctx.out, "reduced_report.json",
               {{"solve", to_json(rep)}, {"cross_section", sigma}});
    ctx.note("reduced: " + std::to_string(sys.unknowns()) + " unknowns, cross section " +
             g17(sigma));
}

void run_effective(const RunContext& ctx) {
    if (!ctx.cfg.geometry.orientation)
        throw Error("the effective pipeline requires identically oriented dimers; "
                    "set geometry.orientation");
    const Vec3R axis = ctx.cfg.geometry.orientation->normalized();
    const Vec3R d_vec = ctx.cfg.model.d_in() * axis;
    ClusterGeometry one = make_cluster({DimerSites{-0.5 * d_vec, 0.5 * d_vec}});
    const Mat6C A = assemble_A(0, one, ctx.cfg.model, ctx.cfg.tensors);
    const auto chi = susceptibilities(dimer_polarizability(A), number_density(ctx.cfg.model));
    const auto medium = effective_tensors(chi, ctx.cfg.model);
    {
        auto os = open_artifact(ctx.out, "effective.csv");
        write_effective_csv(os, medium, ctx.hash);
    }
    write_json(ctx.out, "effective_report.json", to_json(medium));
    ctx.note("effective: min Re eig eps " + g17(medium.min_eig_re_eps) + ", mu " +
             g17(medium.min_eig_re_mu));
}

void run_sweep(const RunContext& ctx) {
    if (ctx.cfg.sweep_a_values.empty())
        throw ConfigError("sweep requires sweep.a_values in the config");
    if (!ctx.cfg.geometry.orientation)
        throw Error("sweep requires a fixed dimer orientation");
    const auto sweep = scaling_sweep(ctx.cfg.model, ctx.cfg.tensors, ctx.cfg.sweep_a_values,
                                     *ctx.cfg.geometry.orientation);
    {
        auto os = open_artifact(ctx.out, "sweep.csv");
        write_sweep_csv(os, sweep, ctx.hash);
    }
    write_json(ctx.out, "sweep_report.json", to_json(sweep));
    ctx.note("sweep: diagonal slope " + g17(sweep.full_fit[0].slope) + " (predicted " +
             g17(sweep.predicted_diag_slope) + ")");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Foldy-Lax scattering by clusters of hybrid dielectric-plasmonic dimers"};
    app.require_subcommand(1);

    CliOptions opt;
    app.add_option("--config", opt.config_path, "JSON run configuration")->required();
    app.add_option("--out", opt.out_override, "output directory (overrides config)");
    auto* seed_opt = app.add_option("--seed", opt.seed, "geometry seed (overrides config)");
    app.add_flag("--quiet", opt.quiet, "suppress progress output");

    const auto names = {"geometry", "check", "solve", "farfield", "reduced", "effective",
                        "sweep"};
    for (const auto* n : names) app.add_subcommand(n);

    CLI11_PARSE(app, argc, argv);
    opt.seed_set = seed_opt->count() > 0;

    try {
        RunContext ctx;
        ctx.cfg = load_config(opt.config_path);
        if (opt.seed_set) ctx.cfg.geometry.seed = opt.seed;
        ctx.hash = config_hash(ctx.cfg);
        ctx.out = opt.out_override.empty() ? fs::path(ctx.cfg.output_dir)
                                           : fs::path(opt.out_override);
        ctx.quiet = opt.quiet;

        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "geometry") run_geometry(ctx);
        else if (sub == "check") run_check(ctx);
        else if (sub == "solve") run_solve(ctx);
        else if (sub == "farfield") run_farfield(ctx);
        else if (sub == "reduced") run_reduced(ctx);
        else if (sub == "effective") run_effective(ctx);
        else if (sub == "sweep") run_sweep(ctx);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
