// Experiment runner shared by the CLI subcommands: deterministic sweeps,
// CSV emission, and the summary table of self-checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "polydense/approx.hpp"
#include "polydense/config.hpp"
#include "polydense/conjugate.hpp"
#include "polydense/csv.hpp"
#include "polydense/flt.hpp"
#include "polydense/kernel.hpp"
#include "polydense/seqspace.hpp"
#include "polydense/smoothfn.hpp"
#include "polydense/weights.hpp"

namespace polydense {

struct SummaryRow {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct ExperimentContext {
    Config cfg;
    std::string out_dir = "out";
    bool plot_data = false;
    bool timings = false; // when false the seconds columns are written as 0
    std::vector<SummaryRow> summary;

    std::uint64_t seed() const {
        return std::uint64_t(cfg_number(cfg, "", "seed", 42.0));
    }

    WeightFamily weight(int dim) const {
        const std::string kind = cfg_string(cfg, "weight", "kind", "power");
        if (kind == "power") return make_power_family(cfg_number(cfg, "weight", "a", 2.0), dim);
        if (kind == "log_penalty") return make_log_penalty_family(dim);
        throw ConfigError("unknown weight kind: " + kind);
    }

    void add(const std::string& name, double value, double bound, bool pass) {
        summary.push_back({name, value, bound, pass});
    }

    std::string path(const std::string& file) const {
        return (std::filesystem::path(out_dir) / file).string();
    }

    double sec(double s) const { return timings ? s : 0.0; }
};

inline void ensure_out_dir(const ExperimentContext& ctx) {
    std::filesystem::create_directories(ctx.out_dir);
}

// optional gnuplot-friendly copy of a CSV (space separated, '#' header)
inline void emit_plot_data(const ExperimentContext& ctx, const std::string& csv_path) {
    if (!ctx.plot_data) return;
    std::ifstream in(csv_path);
    std::string dat_path = csv_path.substr(0, csv_path.rfind('.')) + ".dat";
    std::ofstream out(dat_path, std::ios::binary | std::ios::trunc);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        out << (first ? "# " : "") << line << '\n';
        first = false;
    }
}

// ---- conjugate experiment ----

struct ConjugateCase {
    std::string name;
    std::function<double(double)> fn;
    double y_max;
    double h0;
    double gamma;  // grading exponent of the node spacing
    double x_max;  // conjugate arguments probed in [0, x_max]
};

inline std::vector<ConjugateCase> conjugate_cases() {
    return {
        {"half_square", [](double y) { return 0.5 * y * y; }, 32.0, 2e-4, 0.0, 5.0},
        {"exp", [](double y) { return std::exp(y); }, 10.0, 2e-4, 0.0, 5.0},
        {"xlog", [](double y) { return y * std::log1p(y); }, 8192.0, 2e-4, 0.5, 3.0},
        {"pow15", [](double y) { return std::pow(std::abs(y), 1.5); }, 256.0, 2e-4, 0.25, 5.0},
    };
}

inline SampledFunction1D sample_case(const ConjugateCase& c, double h_scale = 1.0) {
    return SampledFunction1D::sample(c.fn, graded_nodes(c.y_max, c.h0 * h_scale, c.gamma),
                                     Domain1D::half_line, true);
}

// reference maximum of x*y - fn(y) over [0, Y] by golden-section (the
// integrand is concave for the shipped convex cases)
inline double reference_conjugate(const std::function<double(double)>& fn, double Y, double x) {
    auto val = [&](double y) { return x * y - fn(y); };
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 0.0, b = Y;
    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
    double f1 = val(c1), f2 = val(c2);
    for (int it = 0; it < 300; ++it) {
        if (f1 < f2) {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + gr * (b - a);
            f2 = val(c2);
        } else {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - gr * (b - a);
            f1 = val(c1);
        }
    }
    return std::max(std::max(f1, f2), val(0.0));
}

inline void run_conjugate(ExperimentContext& ctx) {
    ensure_out_dir(ctx);
    const double x_min = cfg_number(ctx.cfg, "conjugate", "x_min", 0.1);
    const double x_max = cfg_number(ctx.cfg, "conjugate", "x_max", 20.0);
    const int x_points = int(cfg_number(ctx.cfg, "conjugate", "x_points", 60.0));
    const int conj_points = int(cfg_number(ctx.cfg, "conjugate", "conj_points", 25.0));

    CsvWriter conj_csv(ctx.path("conjugate.csv"), {"function", "x", "u_star"});
    CsvWriter gap_csv(ctx.path("lemma_gap.csv"), {"function", "x", "gap"});

    for (const auto& c : conjugate_cases()) {
        const auto u = sample_case(c);
        std::vector<double> xs = uniform_nodes(0.0, c.x_max, conj_points);
        const auto star = young_conjugate(u, xs);
        double worst_rel = 0.0;
        for (size_t i = 0; i < xs.size(); ++i) {
            conj_csv.row(c.name, xs[i], star.values[i]);
            const double ref = reference_conjugate(c.fn, c.y_max, xs[i]);
            worst_rel = std::max(worst_rel,
                                 std::abs(star.values[i] - ref) / std::max(1.0, std::abs(ref)));
        }
        ctx.add("conjugate_oracle_" + c.name, worst_rel, 1e-6, worst_rel <= 1e-6);

        std::vector<double> gx = uniform_nodes(x_min, x_max, x_points);
        const auto gaps = lemma_gap_batch(u, gx);
        double min_gap = 1e300;
        for (size_t i = 0; i < gx.size(); ++i) {
            gap_csv.row(c.name, gx[i], gaps[i]);
            min_gap = std::min(min_gap, gaps[i]);
        }
        ctx.add("lemma_min_gap_" + c.name, min_gap, -1e-8, min_gap >= -1e-8);

        // stability under 2x node refinement at a thinned probe set
        std::vector<double> probe = uniform_nodes(x_min, x_max, 11);
        const auto g1 = lemma_gap_batch(u, probe);
        const auto g2 = lemma_gap_batch(sample_case(c, 0.5), probe, LemmaGapOptions{40001});
        double drift = 0.0;
        for (size_t i = 0; i < probe.size(); ++i)
            drift = std::max(drift, std::abs(g1[i] - g2[i]));
        ctx.add("lemma_refine_drift_" + c.name, drift, 1e-6, drift < 1e-6);
    }

    // biconjugate identity for a convex case, minorant bound for a nonconvex one
    {
        const auto c = conjugate_cases()[0];
        const auto u = sample_case(c);
        std::vector<double> xg = uniform_nodes(0.0, 10.0, 5001);
        std::vector<double> yg = uniform_nodes(0.5, 3.0, 301);
        const auto bi = biconjugate(u, yg, xg);
        double worst = 0.0;
        for (size_t i = 0; i < yg.size(); ++i)
            worst = std::max(worst, std::abs(bi.values[i] - c.fn(yg[i])));
        ctx.add("biconjugate_convex_half_square", worst, 1e-4, worst <= 1e-4);

        auto noncvx = [](double y) {
            return std::min(y * y, (y - 2.0) * (y - 2.0) + 1.0);
        };
        const auto un = SampledFunction1D::sample(noncvx, uniform_nodes(0.0, 30.0, 30001),
                                                  Domain1D::half_line, false);
        const auto bn = biconjugate(un, uniform_nodes(0.0, 4.0, 401),
                                    uniform_nodes(0.0, 18.0, 1801));
        double over = -1e300;
        for (size_t i = 0; i < bn.nodes.size(); ++i)
            over = std::max(over, bn.values[i] - noncvx(bn.nodes[i]));
        ctx.add("biconjugate_minorant_nonconvex", over, 1e-12, over <= 1e-12);
    }
    conj_csv.close();
    gap_csv.close();
    emit_plot_data(ctx, ctx.path("conjugate.csv"));
    emit_plot_data(ctx, ctx.path("lemma_gap.csv"));
}

// ---- kernel experiment ----

inline void run_kernel_check(ExperimentContext& ctx) {
    ensure_out_dir(ctx);
    CsvWriter csv(ctx.path("kernel_check.csv"), {"name", "value", "bound", "pass"});
    auto emit = [&](const std::string& name, double value, double bound, bool pass) {
        csv.row(name, value, bound, pass ? "PASS" : "FAIL");
        ctx.add(name, value, bound, pass);
    };

    const double mass_err = std::abs(kernel_mass_1d() - M_PI / 2.0);
    emit("kernel_mass_1d_err", mass_err, 1e-6, mass_err <= 1e-6);
    const double mass2_err = std::abs(kernel_mass(2) - (M_PI / 2.0) * (M_PI / 2.0));
    emit("kernel_mass_2d_err", mass2_err, 3e-6, mass2_err <= 3e-6);

    // h bounds on a dense grid
    double h_min = 1e300, h_max = -1e300;
    for (int i = 0; i <= 200000; ++i) {
        const double x = -100.0 + 200.0 * double(i) / 200000.0;
        const double v = fejer_h(x);
        h_min = std::min(h_min, v);
        h_max = std::max(h_max, v);
    }
    emit("kernel_h_nonneg_min", h_min, 0.0, h_min >= 0.0);
    emit("kernel_h_sup", h_max, 0.25, h_max <= 0.25);

    // derivative certificate per order
    for (int k = 0; k <= 4; ++k) {
        const double ch = estimate_CH(k, 1);
        double measured = 0.0;
        for (int i = 0; i <= 20000; ++i) {
            const double x = -50.0 + 100.0 * double(i) / 20000.0;
            measured = std::max(measured, std::abs(fejer_h_deriv(k, x)));
        }
        emit("kernel_CH_order" + std::to_string(k), measured, ch, measured <= ch);
    }

    // remainder inequality at seeded random points
    Rng rng(ctx.seed());
    for (int n : {1, 2}) {
        const double ch = estimate_CH(0, n);
        int violations = 0;
        double worst_ratio = 0.0;
        const int npts = int(cfg_number(ctx.cfg, "kernel", "remainder_points", 2000.0));
        for (int t = 0; t < npts; ++t) {
            Point x(n);
            do {
                for (int j = 0; j < n; ++j) x[j] = rng.uniform(-5.0, 5.0);
            } while (norm2(x) > 5.0 || norm2(x) == 0.0);
            for (int N = 0; N <= 20; ++N) {
                const double err = std::abs(kernel_remainder_series(x, N));
                const double bound = remainder_bound(N, x, ch, n);
                if (err > bound) ++violations;
                worst_ratio = std::max(worst_ratio, err / bound);
            }
        }
        emit("kernel_remainder_violations_n" + std::to_string(n), double(violations), 0.0,
             violations == 0);
        emit("kernel_remainder_worst_ratio_n" + std::to_string(n), worst_ratio, 1.0,
             worst_ratio <= 1.0);
    }

    // U_N coefficient consistency and evenness
    {
        bool even_ok = true, consist_ok = true;
        for (int N : {4, 9, 16}) {
            const auto u1 = taylor_U(N, 2);
            const auto u2 = taylor_U(N + 1, 2);
            for (const auto& [a, cv] : u1.terms()) {
                if (a[0] % 2 || a[1] % 2) even_ok = false;
                if (std::abs(u2.coefficient(a) - cv) != 0.0) consist_ok = false;
            }
        }
        emit("kernel_UN_even_monomials", even_ok ? 1.0 : 0.0, 1.0, even_ok);
        emit("kernel_UN_degree_consistency", consist_ok ? 1.0 : 0.0, 1.0, consist_ok);
    }
    csv.close();
    emit_plot_data(ctx, ctx.path("kernel_check.csv"));
}

// ---- approx experiment ----

inline void run_approx(ExperimentContext& ctx) {
    ensure_out_dir(ctx);
    const int m = int(cfg_number(ctx.cfg, "approx", "m", 1.0));
    const WeightFamily w = ctx.weight(1);
    const std::string fname = cfg_string(ctx.cfg, "approx", "f", "cosh");
    SmoothFunction f = fleet_by_name(fname);
    attach_measured_certificate(f, w, m + 1, 12.0);

    // stage 1 sweep
    {
        CsvWriter csv(ctx.path("stage1.csv"), {"parameter", "measured_error", "bound", "seconds"});
        std::vector<double> nus =
            cfg_number_list(ctx.cfg, "approx", "nu_list", {1, 2, 3, 4, 5, 6, 7, 8});
        double prev = 1e300;
        bool monotone = true;
        double at6 = -1.0;
        for (double nv : nus) {
            detail::Stopwatch sw;
            const int nu = int(nv);
            const auto f_nu = stage1_cutoff(f, nu);
            const double err = stage1_error(f, f_nu, w, m, nu);
            const double cert = tail_certificate(f, w, m, double(nu));
            csv.row(double(nu), err, cert, ctx.sec(sw.seconds()));
            if (err > prev * (1.0 + 1e-12)) monotone = false;
            prev = err;
            if (nu == 6) at6 = err;
        }
        ctx.add("stage1_monotone_" + fname, monotone ? 1.0 : 0.0, 1.0, monotone);
        if (at6 >= 0.0) ctx.add("stage1_err_at_nu6_" + fname, at6, 1e-6, at6 < 1e-6);
        csv.close();
        csv.close();
    emit_plot_data(ctx, ctx.path("stage1.csv"));
    }

    // stage 2 sweep on the compactly supported bump
    {
        CsvWriter csv(ctx.path("stage2.csv"), {"parameter", "measured_error", "bound", "seconds"});
        SmoothFunction bump = make_bump();
        const int nu = 2;
        const auto f_nu = stage1_cutoff(bump, nu);
        const double K = stage2_K_factor(f_nu, m, 2048);
        const double ch = estimate_CH(m, 1);
        GridSpec probe{Box{3.0, 1}, 161};
        std::vector<double> lams =
            cfg_number_list(ctx.cfg, "approx", "lambda_list", {10.0, 100.0, 1000.0});
        std::vector<double> errs;
        for (double lam : lams) {
            detail::Stopwatch sw;
            const double ppu = 2.0 * lam + 1.0;
            auto moll = stage2_mollify(f_nu, lam, ppu);
            double err = 0.0;
            const auto alphas = multi_indices_up_to(1, std::min(m, f_nu.max_order));
            probe.for_each_point([&](const Point& x, bool) {
                for (const auto& a : alphas)
                    err = std::max(err, std::abs(moll.deriv(a, x) - f_nu.deriv(a, x)));
            });
            const auto b = split_error_bounds(lam, 1, ch, K);
            csv.row(lam, err, b.i1 + b.i2, ctx.sec(sw.seconds()));
            errs.push_back(err);
        }
        // empirical decay exponent from a log-log least squares fit
        if (errs.size() >= 2) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (size_t i = 0; i < errs.size(); ++i) {
                const double lx = std::log(lams[i]), ly = std::log(errs[i]);
                sx += lx;
                sy += ly;
                sxx += lx * lx;
                sxy += lx * ly;
            }
            const double k = double(errs.size());
            const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
            ctx.add("stage2_decay_exponent", -slope, 1.0 / 3.0, -slope >= 1.0 / 3.0);
        }
        // split errors against their paper bounds
        bool split_ok = true;
        double worst = 0.0;
        for (double lam : lams) {
            const auto b = split_error_bounds(lam, 1, ch, K);
            for (double x0 : {0.0, 0.5, 1.0}) {
                for (int k = 0; k <= std::min(m, f_nu.max_order); ++k) {
                    const auto s =
                        split_error(f_nu, lam, MultiIndex{k}, Point{x0}, 2.0 * lam + 1.0);
                    if (std::abs(s.i1) > b.i1 || std::abs(s.i2) > b.i2) split_ok = false;
                    worst = std::max(worst, std::max(std::abs(s.i1) / b.i1,
                                                     std::abs(s.i2) / b.i2));
                }
            }
        }
        ctx.add("stage2_split_within_bounds", worst, 1.0, split_ok);
        csv.close();
        csv.close();
    emit_plot_data(ctx, ctx.path("stage2.csv"));
    }

    // stage 3 curve: bump, lambda = 2, nu = 2
    {
        CsvWriter csv(ctx.path("stage3.csv"), {"parameter", "measured_error", "bound", "seconds"});
        SmoothFunction bump = make_bump();
        const auto f_nu = stage1_cutoff(bump, 2);
        const int n_max = int(cfg_number(ctx.cfg, "approx", "nmax", 30.0));
        std::vector<int> Ns;
        for (int N = 0; N <= n_max; ++N) Ns.push_back(N);
        GridSpec grid{Box{6.0, 1}, 2048};
        const auto curve = stage3_error_curve(f_nu, 2.0, m, Ns, w, grid, 8.0);
        double best = 1e300;
        int best_n = -1;
        double ratio_max = 0.0;
        for (size_t i = 0; i < curve.reports.size(); ++i) {
            const auto& r = curve.reports[i];
            csv.row(r.parameter, r.measured_error, r.bound, ctx.sec(r.seconds));
            if (r.measured_error < best && r.measured_error > 0.0) {
                best = r.measured_error;
                best_n = int(r.parameter);
            }
            if (i + 1 < curve.reports.size() && curve.reports[i].measured_error > 1e-13) {
                const double rr = curve.reports[i + 1].measured_error * (r.parameter + 1.0) /
                                  curve.reports[i].measured_error;
                ratio_max = std::max(ratio_max, rr);
            }
        }
        ctx.add("stage3_reaches_1e-4", best, 1e-4, best <= 1e-4 && best_n <= 30);
        ctx.add("stage3_factorial_ratio_bounded", ratio_max, 64.0, ratio_max <= 64.0);
        ctx.add("stage3_fitted_C2", curve.fitted_C2, 0.0, true);
        csv.close();
        csv.close();
    emit_plot_data(ctx, ctx.path("stage3.csv"));
    }

    // pipeline: a feasible coarse run, plus the canonical tight target
    {
        CsvWriter csv(ctx.path("pipeline.csv"),
                      {"stage", "parameter", "measured_error", "bound", "seconds"});
        SmoothFunction bump = make_bump();
        attach_measured_certificate(bump, w, m + 1, 12.0);
        PipelineOptions opts;
        opts.q_points = 1024;
        try {
            const auto res = pipeline_approximate(bump, w, m, 2.0, opts);
            for (const auto& r : res.reports)
                csv.row(r.stage, r.parameter, r.measured_error, r.bound, ctx.sec(r.seconds));
            csv.row("final", double(res.N), res.final_q, 2.0, 0.0);
            ctx.add("pipeline_bump_eps2", res.final_q, 2.0, res.final_q <= 2.0);
        } catch (const std::exception&) {
            ctx.add("pipeline_bump_eps2", -1.0, 2.0, false);
        }

        const double eps = cfg_number(ctx.cfg, "approx", "eps", 0.01);
        SmoothFunction g = fleet_by_name("gaussian");
        try {
            const auto res = pipeline_approximate(g, w, m, eps, opts);
            for (const auto& r : res.reports)
                csv.row(r.stage, r.parameter, r.measured_error, r.bound, ctx.sec(r.seconds));
            csv.row("final", double(res.N), res.final_q, eps, 0.0);
            ctx.add("pipeline_gaussian_eps", res.final_q, eps, res.final_q <= eps);
        } catch (const BudgetError&) {
            ctx.add("pipeline_gaussian_eps", -1.0, eps, false);
        }
        csv.close();
        csv.close();
    emit_plot_data(ctx, ctx.path("pipeline.csv"));
    }
}

// ---- flt experiment ----

inline std::vector<DiscreteFunctional> flt_fleet() {
    std::vector<DiscreteFunctional> fs;
    fs.push_back(delta(0.0));
    fs.push_back(delta(1.0));
    fs.push_back(delta(-1.0));
    fs.push_back(delta_deriv(1, 0.0));
    fs.push_back(delta_deriv(2, 0.5));
    fs.push_back({"d0+d1", {{1.0, 0, 0.0}, {1.0, 0, 1.0}}});
    fs.push_back({"d1-d-1", {{1.0, 0, 1.0}, {-1.0, 0, -1.0}}});
    fs.push_back({"d'_{0.5}+2d0", {{1.0, 1, 0.5}, {2.0, 0, 0.0}}});
    fs.push_back({"complex_mix", {{Complex(2.0, 1.0), 0, 0.5}, {Complex(0.0, -1.0), 1, -0.5}}});
    fs.push_back({"second_diff", {{1.0, 0, 1.0}, {-2.0, 0, 0.0}, {1.0, 0, -1.0}}});
    return fs;
}

inline void run_flt(ExperimentContext& ctx) {
    ensure_out_dir(ctx);
    const WeightFamily w = make_power_family(cfg_number(ctx.cfg, "weight", "a", 2.0), 1);
    CsvWriter csv(ctx.path("flt.csv"),
                  {"functional", "m", "N_m", "attained_re", "attained_im", "verdict"});
    RectGrid rect{cfg_number(ctx.cfg, "flt", "rect_r", 8.0),
                  cfg_number(ctx.cfg, "flt", "rect_y", 4.0),
                  int(cfg_number(ctx.cfg, "flt", "rect_points", 129.0))};

    const auto fleet = flt_fleet();
    double worst_moment = 0.0;
    for (const auto& F : fleet) {
        for (int k = 0; k <= 6; ++k) worst_moment = std::max(worst_moment, moment_check(F, k));
        const auto Fh = flt_transform(F);
        for (int m : {0, 1, 2, 3}) {
            const auto rep = growth_norm(Fh, m, w, rect);
            csv.row(F.name, m, rep.value, rep.attained.real(), rep.attained.imag(),
                    rep.divergent ? "DIVERGENT" : "FINITE");
        }
    }
    ctx.add("flt_moment_identity_max_residual", worst_moment, 1e-10, worst_moment < 1e-10);

    // canonical values and symmetry
    const auto d0 = flt_transform(delta(0.0));
    const auto n1 = growth_norm(d0, 1, w, rect);
    ctx.add("flt_N1_delta0", n1.value, 1.0, std::abs(n1.value - 1.0) <= 1e-9);

    const auto dp = flt_transform(delta_deriv(1, 0.0));
    const auto div0 = growth_norm(dp, 0, w, rect);
    ctx.add("flt_divergent_m0", div0.divergent ? 1.0 : 0.0, 1.0, div0.divergent);
    const auto fin1 = growth_norm(dp, 1, w, rect);
    ctx.add("flt_finite_m1", fin1.divergent ? 1.0 : 0.0, 0.0,
            !fin1.divergent && fin1.value <= 1.0 + 1e-9);

    double herm = 0.0;
    for (const auto& F : fleet)
        if (F.real_coefficients())
            herm = std::max(herm, hermitian_residual(flt_transform(F), 4.0, 4.0, 64));
    ctx.add("flt_hermitian_residual", herm, 1e-12, herm < 1e-12);

    // N_m nonincreasing in m for the power family
    bool mono = true;
    for (const auto& F : fleet) {
        const auto Fh = flt_transform(F);
        double prev = 1e300;
        for (int m = std::max(1, F.max_order()); m <= 3; ++m) {
            const auto rep = growth_norm(Fh, m, w, rect);
            if (rep.value > prev * (1.0 + 1e-12)) mono = false;
            prev = rep.value;
        }
    }
    ctx.add("flt_Nm_monotone_in_m", mono ? 1.0 : 0.0, 1.0, mono);
    csv.close();
    emit_plot_data(ctx, ctx.path("flt.csv"));
}

// ---- seq experiment ----

inline void run_seq(ExperimentContext& ctx) {
    ensure_out_dir(ctx);
    const WeightFamily w = make_power_family(cfg_number(ctx.cfg, "weight", "a", 2.0), 1);
    const auto c = SeqWeightFamily::by_name(cfg_string(ctx.cfg, "seq", "weight_kind", "geometric2"));
    const int depth = int(cfg_number(ctx.cfg, "seq", "depth", 6.0));
    const int m = int(cfg_number(ctx.cfg, "seq", "m", 1.0));

    for (int mm = 1; mm <= 6; ++mm) {
        const auto km = km_sum(c, mm, 1e-12);
        ctx.add("seq_Km_m" + std::to_string(mm), km.value, 1.0,
                !km.diverged && std::abs(km.value - 1.0) <= 1e-12);
    }
    const auto km_div = km_sum(SeqWeightFamily::powerk(), 1, 1e-12);
    ctx.add("seq_Km_powerk_divergence_flag", km_div.diverged ? 1.0 : 0.0, 1.0, km_div.diverged);

    CsvWriter csv(ctx.path("seq.csv"), {"k", "c_k_m", "q_m", "product", "running_p_m"});
    GridSpec grid{Box{6.0, 1}, 2049};
    FnSequence seq;
    for (int k = 1; k <= depth; ++k)
        seq.set(k, sf_scale(make_gaussian(), 1.0 / double(1 << k)));
    double running = 0.0;
    for (int k = 1; k <= depth; ++k) {
        const double ck = c.eval(k, m);
        const double qk = q_m(seq.entries.at(k), m, w, grid).value;
        running += ck * qk;
        csv.row(k, ck, qk, ck * qk, running);
    }
    const double pm = p_seminorm(seq, m, c, w, grid);
    ctx.add("seq_pm_matches_running_sum", std::abs(pm - running), 1e-12,
            std::abs(pm - running) <= 1e-12);

    // the computable Eq.(6)-style bound |F_k(u)| <= (sum |c_j| theta_m(a_j)) q_m(u)
    bool eq6_ok = true;
    double eq6_worst = 0.0;
    const std::vector<SmoothFunction> us{make_gaussian(), make_cosh(), make_bump(),
                                         make_sin_gaussian()};
    for (const auto& F : flt_fleet()) {
        for (const auto& u : us) {
            const int mm = std::max(2, F.max_order());
            const double q = seminorm_q(u, std::min(mm, u.max_order), mm, w, grid).value;
            double factor = 0.0;
            for (const auto& t : F.terms)
                factor += std::abs(t.coeff) * theta(w, mm, Point{t.point});
            const double lhs = std::abs(F.apply(u));
            if (lhs > factor * q * (1.0 + 1e-12)) eq6_ok = false;
            if (factor * q > 0.0) eq6_worst = std::max(eq6_worst, lhs / (factor * q));
        }
    }
    ctx.add("seq_eq6_bound_all_pairs", eq6_worst, 1.0, eq6_ok);

    // split_functional truncation consistency
    {
        std::map<int, DiscreteFunctional> Fs;
        for (int k = 1; k <= 3; ++k) Fs[k] = delta(0.0);
        const Complex full = split_functional(Fs, seq);
        std::map<int, DiscreteFunctional> trunc;
        Complex prev = 0.0;
        bool consistent = true;
        for (int j = 1; j <= depth; ++j) {
            if (j <= 3) trunc[j] = delta(0.0);
            const Complex v = split_functional(trunc, seq);
            if (j >= 3 && std::abs(v - full) != 0.0) consistent = false;
            prev = v;
        }
        (void)prev;
        ctx.add("seq_split_truncation_consistency", consistent ? 1.0 : 0.0, 1.0, consistent);
    }

    // monomial probe
    {
        std::map<int, DiscreteFunctional> zeros;
        const auto repz = monomial_probe(zeros, 4, 3);
        std::map<int, DiscreteFunctional> nz;
        nz[1] = delta(0.0);
        const auto repn = monomial_probe(nz, 4, 3);
        std::map<int, DiscreteFunctional> cancel;
        cancel[1] = DiscreteFunctional{"cancel", {{1.0, 1, 0.0}, {-1.0, 1, 0.0}}};
        const auto repc = monomial_probe(cancel, 6, 2);
        ctx.add("seq_probe_zero_functional", repz.all_zero ? 1.0 : 0.0, 1.0, repz.all_zero);
        ctx.add("seq_probe_delta_nonzero", repn.all_zero ? 0.0 : 1.0, 1.0, !repn.all_zero);
        ctx.add("seq_probe_cancelling_allzero", repc.all_zero ? 1.0 : 0.0, 1.0, repc.all_zero);
    }
    csv.close();
    emit_plot_data(ctx, ctx.path("seq.csv"));
}

inline void write_summary(ExperimentContext& ctx) {
    ensure_out_dir(ctx);
    CsvWriter csv(ctx.path("summary.csv"), {"name", "value", "bound", "verdict"});
    for (const auto& r : ctx.summary) csv.row(r.name, r.value, r.bound, r.pass ? "PASS" : "FAIL");
    csv.close();
    emit_plot_data(ctx, ctx.path("summary.csv"));
}

inline int run_suite(ExperimentContext& ctx) {
    run_conjugate(ctx);
    run_kernel_check(ctx);
    run_approx(ctx);
    run_flt(ctx);
    run_seq(ctx);
    write_summary(ctx);
    int fails = 0;
    for (const auto& r : ctx.summary)
        if (!r.pass) ++fails;
    return fails;
}

} // namespace polydense
