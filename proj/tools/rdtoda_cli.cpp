// Command-line front end: classification, Dirichlet solves, weight
// extraction, zero counting, and the verification suites.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rdtoda/json_io.hpp"
#include "rdtoda/verify.hpp"

namespace {

using rdtoda::Json;

constexpr const char* kVersion = "0.1.0";

struct CommonOpts {
    std::string config;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    std::string grid_override;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
    auto* c = cmd->add_option("--config", opts.config, "input JSON file");
    if (config_required) c->required();
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "seed for randomized audits");
    cmd->add_option("--grid", opts.grid_override, "grid node override, NxM");
    cmd->add_flag("--quiet", opts.quiet, "suppress stdout reporting");
}

void apply_grid_override(rdtoda::ChartGrid& grid, const std::string& spec) {
    if (spec.empty()) return;
    const auto x = spec.find('x');
    if (x == std::string::npos)
        throw std::invalid_argument("--grid expects NxM, got: " + spec);
    grid.nx = std::stoi(spec.substr(0, x));
    grid.ny = std::stoi(spec.substr(x + 1));
    grid.validate();
}

Json base_manifest(const std::string& command, const CommonOpts& opts) {
    Json m;
    m["command"] = command;
    m["version"] = kVersion;
    m["seed"] = opts.seed;
    if (!opts.config.empty()) m["inputs"][opts.config] = rdtoda::file_hash(opts.config);
    return m;
}

void emit(const CommonOpts& opts, const std::string& name, const Json& j) {
    std::filesystem::create_directories(opts.out_dir);
    rdtoda::write_json_file(j, opts.out_dir + "/" + name);
    if (!opts.quiet) std::cout << name << ":\n" << j.dump(2) << "\n";
}

int cmd_classify(const CommonOpts& opts) {
    const Json cfg = rdtoda::read_json_file(opts.config);
    const rdtoda::RDifferential q = rdtoda::rdiff_from_json(cfg);
    Json out = rdtoda::moduli_to_json(rdtoda::classify_moduli(q));
    out["manifest"] = base_manifest("classify", opts);
    emit(opts, "moduli.json", out);
    return 0;
}

rdtoda::Fields boundary_from_config(const Json& bc, int r, const rdtoda::ChartGrid& grid) {
    const std::string kind = bc.at("kind").get<std::string>();
    if (kind == "pole") {
        rdtoda::BVector b{r, bc.value("m", 1), bc.at("b").get<std::vector<double>>()};
        return rdtoda::pole_model_fields(b, rdtoda::k_vector(b), grid);
    }
    if (kind == "special") {
        rdtoda::AVector a{r, bc.at("a").get<std::vector<double>>()};
        const auto al = bc.at("alpha");
        return rdtoda::special_model_fields(a, rdtoda::k_vector(a),
                                            rdtoda::Complex(al.at(0).get<double>(),
                                                            al.at(1).get<double>()),
                                            bc.value("rho", 1.0), grid);
    }
    if (kind == "flat")
        return rdtoda::flat_model_fields(r, bc.at("qnorm_const").get<double>(), grid);
    if (kind == "hyperbolic")
        return rdtoda::hyperbolic_oracle(bc.at("a").get<double>(), grid).w;
    throw std::invalid_argument("unknown boundary kind: " + kind);
}

int cmd_solve(const CommonOpts& opts) {
    const Json cfg = rdtoda::read_json_file(opts.config);
    rdtoda::ChartGrid grid = rdtoda::grid_from_json(cfg.at("grid"));
    apply_grid_override(grid, opts.grid_override);

    int r = cfg.value("r", 0);
    rdtoda::Field qnorm;
    std::vector<unsigned char> qflags;
    if (cfg.contains("q")) {
        const rdtoda::RDifferential q = rdtoda::rdiff_from_json(cfg.at("q"));
        if (r == 0) r = q.rank;
        rdtoda::assemble_qnorm(q, grid, qnorm, qflags);
    } else {
        const double qc = cfg.value("qnorm_const", 0.0);
        qnorm.assign(grid.nnodes(), qc);
        qflags.assign(grid.nnodes(), 0);
    }
    if (r < 2) throw std::invalid_argument("solve: rank r >= 2 required");

    const rdtoda::Fields boundary = boundary_from_config(cfg.at("boundary"), r, grid);
    rdtoda::SolveReport rep;
    const rdtoda::TodaState state =
        rdtoda::solve_dirichlet(r, grid, qnorm, qflags, boundary, rdtoda::SolverConfig{}, &rep);

    std::filesystem::create_directories(opts.out_dir);
    const std::string csv = opts.out_dir + "/state.csv";
    rdtoda::write_state_csv(state, csv);

    Json out;
    out["converged"] = rep.converged;
    out["newton_iters"] = rep.newton_iters;
    out["final_residual"] = rep.final_residual;
    out["max_trace_dev"] = rep.max_trace_dev;
    out["used_picard"] = rep.used_picard;
    out["state_csv"] = csv;
    out["state_hash"] = rdtoda::file_hash(csv);
    out["manifest"] = base_manifest("solve", opts);
    out["manifest"]["config"] = cfg;
    emit(opts, "solve_report.json", out);
    return 0;
}

int cmd_extract(const CommonOpts& opts) {
    const Json cfg = rdtoda::read_json_file(opts.config);
    const std::string csv = cfg.at("csv").get<std::string>();
    const rdtoda::TodaState state = rdtoda::read_state_csv(csv);
    const std::string kind = cfg.value("kind", "pole");

    rdtoda::WeightFit fit;
    if (kind == "pole") {
        std::vector<double> radii;
        if (cfg.contains("samples")) {
            radii = cfg.at("samples").get<std::vector<double>>();
        } else {
            const double len = state.grid.x1 - state.grid.x0;
            for (int i = 0; i < 16; ++i)
                radii.push_back(state.grid.x0 + len * (0.2 + 0.6 * i / 15.0));
        }
        fit = rdtoda::extract_pole_weights(state, radii, cfg.value("m", 1));
    } else if (kind == "special") {
        std::vector<double> ys;
        if (cfg.contains("samples")) {
            ys = cfg.at("samples").get<std::vector<double>>();
        } else {
            const double len = state.grid.y1 - state.grid.y0;
            for (int i = 0; i < 15; ++i)
                ys.push_back(state.grid.y0 + len * (0.15 + 0.7 * i / 14.0));
        }
        fit = rdtoda::extract_special_weights(state, ys);
    } else {
        throw std::invalid_argument("extract: kind must be \"pole\" or \"special\"");
    }

    Json out = rdtoda::weight_fit_to_json(fit);
    out["manifest"] = base_manifest("extract", opts);
    out["manifest"]["inputs"][csv] = rdtoda::file_hash(csv);
    emit(opts, "weights.json", out);
    return 0;
}

int cmd_zeros(const CommonOpts& opts) {
    const Json cfg = rdtoda::read_json_file(opts.config);
    const rdtoda::ExpSum F = rdtoda::expsum_from_json(cfg);
    const auto window = cfg.at("window");
    const double x1 = window.at(0).get<double>(), x2 = window.at(1).get<double>();
    const rdtoda::DensityReport rep = rdtoda::verify_density_bound(F, x1, x2);
    Json out;
    out["count"] = rep.count;
    out["bound_lo"] = rep.lo;
    out["bound_hi"] = rep.hi;
    out["pass"] = rep.pass;
    out["manifest"] = base_manifest("zeros", opts);
    emit(opts, "zeros.json", out);
    return rep.pass ? 0 : 1;
}

int cmd_verify(const CommonOpts& opts, const std::string& suite) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto results = rdtoda::run_suite(suite, opts.seed);
    bool all_pass = true;
    Json checks = Json::array();
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        if (!opts.quiet)
            std::cout << (r.pass ? "PASS" : "FAIL") << " [" << r.index << "] " << r.name
                      << ": " << r.detail << "\n";
        checks.push_back({{"index", r.index}, {"name", r.name}, {"pass", r.pass},
                          {"detail", r.detail}});
    }
    Json out;
    out["suite"] = suite;
    out["checks"] = checks;
    out["pass"] = all_pass;
    out["manifest"] = base_manifest("verify", opts);
    emit(opts, "verify_report.json", out);
    std::cerr << "verify " << suite << ": "
              << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
              << " s\n";
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"solver and classifier for Toda-type metric systems"};
    app.require_subcommand(1);

    CommonOpts o_classify, o_solve, o_extract, o_zeros, o_verify;
    std::string suite = "all";

    add_common(app.add_subcommand("classify", "classify a differential's solution moduli"),
               o_classify);
    add_common(app.add_subcommand("solve", "Dirichlet solve on a chart grid"), o_solve);
    add_common(app.add_subcommand("extract", "fit asymptotic weights from a solved state"),
               o_extract);
    add_common(app.add_subcommand("zeros", "count zeros of an exponential sum"), o_zeros);
    auto* verify_cmd =
        app.add_subcommand("verify", "run a verification suite "
                                     "(fibers|parabolic|oracle|roundtrip|zeros|all)");
    verify_cmd->add_option("suite", suite, "suite name");
    add_common(verify_cmd, o_verify, /*config_required=*/false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("classify")) return cmd_classify(o_classify);
        if (app.got_subcommand("solve")) return cmd_solve(o_solve);
        if (app.got_subcommand("extract")) return cmd_extract(o_extract);
        if (app.got_subcommand("zeros")) return cmd_zeros(o_zeros);
        if (app.got_subcommand("verify")) return cmd_verify(o_verify, suite);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
