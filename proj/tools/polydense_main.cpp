// polydense CLI: experiment runner with the subcommands
//   conjugate | kernel check | approx run | flt | seq | suite
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "polydense/experiment.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw polydense::ConfigError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

polydense::ExperimentContext make_context(const std::string& config_path,
                                          const std::string& out_dir, bool plot_data,
                                          bool timings) {
    polydense::ExperimentContext ctx;
    if (!config_path.empty()) ctx.cfg = polydense::parse_config(read_file(config_path));
    ctx.out_dir = out_dir;
    ctx.plot_data = plot_data;
    ctx.timings = timings;
    return ctx;
}

void set_number(polydense::Config& cfg, const std::string& sec, const std::string& key,
                double v) {
    cfg[sec][key] = polydense::ConfigValue(v);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"polynomial density laboratory in weighted smooth-function spaces"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    bool plot_data = false;
    bool timings = false;
    app.add_option("--config", config_path, "TOML-style config file");
    app.add_option("--out", out_dir, "output directory for CSV files");
    app.add_flag("--plot-data", plot_data, "also emit gnuplot-compatible .dat files");
    app.add_flag("--timings", timings, "write wall-clock seconds columns (breaks byte-identical "
                                       "reproducibility)");

    auto* conj = app.add_subcommand("conjugate", "grid conjugates and the lemma gap");
    auto* kernel = app.add_subcommand("kernel", "kernel diagnostics");
    auto* kcheck = kernel->add_subcommand("check", "emit the kernel invariant report");
    kernel->require_subcommand(1);
    auto* approx = app.add_subcommand("approx", "three-stage approximation experiments");
    auto* arun = approx->add_subcommand("run", "run the stage sweeps and the pipeline");
    approx->require_subcommand(1);
    auto* flt = app.add_subcommand("flt", "Fourier-Laplace growth norms");
    auto* seq = app.add_subcommand("seq", "weighted sequence-space checks");
    auto* suite = app.add_subcommand("suite", "run everything and write summary.csv");
    for (auto* s : {conj, kernel, kcheck, approx, arun, flt, seq, suite}) s->fallthrough();

    std::string weight_kind;
    std::string f_name;
    double m_order = -1.0, eps = -1.0;
    std::vector<double> nu_list, lambda_list;
    double nmax = -1.0;
    arun->add_option("--weight", weight_kind, "weight family kind (power | log_penalty)");
    arun->add_option("--f", f_name, "fleet function name");
    arun->add_option("--m", m_order, "seminorm order m");
    arun->add_option("--eps", eps, "pipeline target accuracy");
    arun->add_option("--nu", nu_list, "stage-1 cutoff indices");
    arun->add_option("--lambda", lambda_list, "stage-2 kernel scales");
    arun->add_option("--nmax", nmax, "stage-3 degree cap");

    CLI11_PARSE(app, argc, argv);

    try {
        auto ctx = make_context(config_path, out_dir, plot_data, timings);
        if (arun->parsed()) {
            if (!weight_kind.empty()) ctx.cfg["weight"]["kind"] = polydense::ConfigValue(weight_kind);
            if (!f_name.empty()) ctx.cfg["approx"]["f"] = polydense::ConfigValue(f_name);
            if (m_order >= 0) set_number(ctx.cfg, "approx", "m", m_order);
            if (eps >= 0) set_number(ctx.cfg, "approx", "eps", eps);
            if (nmax >= 0) set_number(ctx.cfg, "approx", "nmax", nmax);
            if (!nu_list.empty()) {
                polydense::ConfigArray a;
                for (double v : nu_list) a.push_back(polydense::ConfigValue(v));
                ctx.cfg["approx"]["nu_list"] = polydense::ConfigValue(a);
            }
            if (!lambda_list.empty()) {
                polydense::ConfigArray a;
                for (double v : lambda_list) a.push_back(polydense::ConfigValue(v));
                ctx.cfg["approx"]["lambda_list"] = polydense::ConfigValue(a);
            }
        }

        if (conj->parsed()) {
            polydense::run_conjugate(ctx);
            polydense::write_summary(ctx);
        } else if (kcheck->parsed()) {
            polydense::run_kernel_check(ctx);
            polydense::write_summary(ctx);
        } else if (arun->parsed()) {
            polydense::run_approx(ctx);
            polydense::write_summary(ctx);
        } else if (flt->parsed()) {
            polydense::run_flt(ctx);
            polydense::write_summary(ctx);
        } else if (seq->parsed()) {
            polydense::run_seq(ctx);
            polydense::write_summary(ctx);
        } else if (suite->parsed()) {
            const int fails = polydense::run_suite(ctx);
            int pass = 0;
            for (const auto& r : ctx.summary)
                if (r.pass) ++pass;
            std::cout << "suite: " << pass << " PASS, " << fails << " FAIL -> " << ctx.out_dir
                      << "/summary.csv\n";
        }
        return 0;
    } catch (const polydense::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
