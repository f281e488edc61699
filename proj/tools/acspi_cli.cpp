#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acspi/acspi.hpp"

namespace {

std::vector<int> parse_values(const std::string& csv) {
    std::vector<int> out;
    if (csv.empty()) return out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            const int v = std::stoi(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw acspi::config_error("--values: expected a comma-separated list of integers, got '" +
                                      tok + "'");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coherent-state wave-packet propagation with a Fock-basis cross-check"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string axis = "n_steps";
    std::string values_csv;
    int stride = 0;
    bool quiet = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_path, "output path (default: config output.path, else stdout)");
        sub->add_option("--stride", stride, "sample every N steps, overrides the config")
            ->check(CLI::PositiveNumber);
        sub->add_flag("--quiet", quiet, "suppress warnings and per-time deviation lines");
        return sub;
    };

    add_common(app.add_subcommand("propagate", "run the engine, write a CSV time series"));
    add_common(app.add_subcommand("oracle", "run the Fock-basis reference, write a CSV time series"));
    add_common(app.add_subcommand("compare", "run both methods, write stacked CSV plus a deviation summary"));
    CLI::App* conv = add_common(
        app.add_subcommand("convergence", "error against the reference across a parameter sweep"));
    conv->add_option("--axis", axis, "sweep axis: n_steps, K or grid");
    conv->add_option("--values", values_csv, "comma-separated strictly increasing sweep values");
    add_common(app.add_subcommand("diagnostics", "static self-checks, nonzero exit on failure"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        acspi::RunConfig cfg = acspi::load_run_config_file(config_path);
        if (stride > 0) cfg.stride = stride;
        if (!out_path.empty()) cfg.out_path = out_path;

        std::ostream* diag = quiet ? nullptr : &std::cerr;
        std::ofstream file;
        std::ostream* out = &std::cout;
        if (!cfg.out_path.empty()) {
            file.open(cfg.out_path);
            if (!file)
                throw acspi::config_error("cannot open output file '" + cfg.out_path + "'");
            out = &file;
        }
        // Keep stdout clean CSV when it doubles as the data sink.
        std::ostream& summary = (out == &std::cout) ? std::cerr : std::cout;

        if (app.got_subcommand("propagate")) {
            acspi::run_propagate(cfg, *out, diag);
        } else if (app.got_subcommand("oracle")) {
            acspi::run_oracle(cfg, *out, diag);
        } else if (app.got_subcommand("compare")) {
            acspi::run_compare(cfg, *out, summary, !quiet, diag);
        } else if (app.got_subcommand("convergence")) {
            acspi::run_convergence(cfg, axis, parse_values(values_csv), *out, diag);
        } else {
            if (!acspi::run_diagnostics(cfg, *out)) {
                std::cerr << "diagnostics failed\n";
                return 3;
            }
        }
        return 0;
    } catch (const acspi::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const acspi::numerical_abort& e) {
        std::cerr << "numerical abort: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
