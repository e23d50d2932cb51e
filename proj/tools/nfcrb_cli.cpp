#include "nfcrb/config.hpp"
#include "nfcrb/errors.hpp"
#include "nfcrb/report.hpp"
#include "nfcrb/sweep.hpp"
#include "nfcrb/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitVerifyFailed = 2;

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw nfcrb::InvalidArgument("bad grid value '" + item + "'");
        }
        if (used != item.size()) {
            throw nfcrb::InvalidArgument("bad grid value '" + item + "'");
        }
        grid.push_back(v);
    }
    return grid;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw nfcrb::InvalidArgument("cannot write '" + path + "'");
    }
    out << content;
    if (!out) {
        throw nfcrb::InvalidArgument("failed writing '" + path + "'");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cramer-Rao bounds for near-field sensing with antenna arrays"};
    app.set_version_flag("--version", std::string(nfcrb::kToolVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    int workers = 1;

    auto* eval = app.add_subcommand("eval", "Exact and closed-form bounds for one scene");
    eval->add_option("config", config_path, "key = value scene file")->required();
    eval->add_option("--out", out_path, "also write a CSV report");
    eval->add_option("--workers", workers, "threads for FIM assembly")->check(CLI::PositiveNumber);

    std::string variable;
    std::string grid_text;
    std::vector<std::string> bounds;
    std::vector<std::string> variants;
    auto* sweep = app.add_subcommand("sweep", "Evaluate the bounds over a parameter grid");
    sweep->add_option("config", config_path, "key = value scene file")->required();
    sweep->add_option("--var", variable, "range | angle | antennas | snapshots | power")->required();
    sweep->add_option("--grid", grid_text, "comma-separated values (m, deg, count, count or W)")
        ->required();
    sweep->add_option("--bounds", bounds, "subset of rcs vx vy x y")->delimiter(',');
    sweep->add_option("--variants", variants, "subset of exact FF NF")->delimiter(',');
    sweep->add_option("--out", out_path, "CSV output path")->required();
    sweep->add_option("--workers", workers, "grid points evaluated in parallel")
        ->check(CLI::PositiveNumber);

    nfcrb::VerifyOptions vopt;
    auto* verify = app.add_subcommand("verify", "Run the oracle batteries");
    verify->add_option("--seed", vopt.seed, "random seed");
    verify->add_option("--battery", vopt.battery, "scenes per battery")->check(CLI::PositiveNumber);
    verify->add_option("--draws", vopt.mc_draws, "Monte Carlo draws")->check(CLI::Range(1000, 10000000));
    verify->add_option("--workers", vopt.workers, "parallel scenes")->check(CLI::PositiveNumber);
    verify->add_flag("--inject-fault", vopt.inject_fault,
                     "perturb the analytic derivatives (the FIM check must fail)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    try {
        if (*eval) {
            const nfcrb::Scene scene = nfcrb::make_scene(nfcrb::load_config(config_path));
            nfcrb::EvalOptions options;
            options.fim_workers = workers;
            const nfcrb::PointEvaluation result = nfcrb::evaluate_point(scene, options);
            nfcrb::write_eval_text(scene, result, std::cout);
            if (!out_path.empty()) {
                std::ostringstream csv;
                nfcrb::write_eval_csv(scene, result, csv);
                write_file(out_path, csv.str());
            }
            return 0;
        }
        if (*sweep) {
            nfcrb::SweepSpec spec;
            spec.base = nfcrb::load_config(config_path);
            spec.variable = nfcrb::parse_sweep_variable(variable);
            spec.grid = parse_grid(grid_text);
            if (!bounds.empty()) {
                spec.bounds.clear();
                for (const auto& b : bounds) {
                    spec.bounds.push_back(nfcrb::parse_bound(b));
                }
            }
            if (!variants.empty()) {
                spec.variants.clear();
                for (const auto& v : variants) {
                    spec.variants.push_back(nfcrb::parse_variant(v));
                }
            }
            const auto rows = nfcrb::run_sweep(spec, workers);
            std::ostringstream csv;
            nfcrb::write_sweep_csv(spec, rows, csv);
            write_file(out_path, csv.str());
            std::cout << rows.size() << " rows written to " << out_path << "\n";
            return 0;
        }
        const nfcrb::VerifyResult result = nfcrb::run_verify(vopt);
        nfcrb::write_verify_report(vopt, result, std::cout);
        return result.all_pass ? 0 : kExitVerifyFailed;
    } catch (const nfcrb::ParseError& e) {
        std::cerr << "error: " << config_path << ": " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
}
