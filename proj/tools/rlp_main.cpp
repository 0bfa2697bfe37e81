// rlp: exact limiting objectives of Gaussian random linear programs
// (theory evaluation, Monte Carlo verification, table and sweep emission).

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rlp/lp_core.hpp"
#include "rlp/mc_harness.hpp"
#include "rlp/theory.hpp"
#include "rlp/version.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitComputation = 3;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json run_record(const std::string& command, const std::vector<std::string>& argv,
                json config, json result) {
    return json{{"command", command}, {"argv", argv},  {"version", rlp::kVersion},
                {"timestamp", utc_timestamp()}, {"config", std::move(config)},
                {"result", std::move(result)}};
}

// Shared right-hand-side flags: exactly one of constant / file / gaussian.
struct RhsFlags {
    double a_const = 1.0;
    std::string a_file;
    std::string a_gaussian;  // "mean,std"
    std::int64_t a_file_n = 0;

    void attach(CLI::App* cmd) {
        auto* c = cmd->add_option("--a-const", a_const,
                                  "Right-hand side a = value * ones (default 1.0)");
        auto* f = cmd->add_option("--a-file", a_file,
                                  "Right-hand side read from a whitespace-separated text file");
        auto* g = cmd->add_option("--a-gaussian", a_gaussian,
                                  "iid Gaussian right-hand side, 'mean,std'");
        cmd->add_option("--a-file-n", a_file_n,
                        "Normalization count n for --a-file (theory evaluation)");
        c->excludes(f)->excludes(g);
        f->excludes(g);
    }

    bool uses_file() const { return !a_file.empty(); }

    rlp::theory::RhsModel build(std::int64_t vector_n) const {
        if (!a_file.empty()) {
            std::ifstream is(a_file);
            if (!is) throw std::invalid_argument("cannot open --a-file " + a_file);
            std::vector<double> vals;
            double v;
            while (is >> v) vals.push_back(v);
            if (!is.eof()) throw std::invalid_argument("malformed number in --a-file " + a_file);
            return rlp::theory::RhsModel::vector(std::move(vals), vector_n);
        }
        if (!a_gaussian.empty()) {
            const auto comma = a_gaussian.find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("--a-gaussian expects 'mean,std'");
            const double mean = std::stod(a_gaussian.substr(0, comma));
            const double sd = std::stod(a_gaussian.substr(comma + 1));
            return rlp::theory::RhsModel::gaussian(mean, sd);
        }
        return rlp::theory::RhsModel::constant(a_const);
    }

    json describe() const {
        if (!a_file.empty()) return json{{"kind", "vector"}, {"file", a_file}, {"n", a_file_n}};
        if (!a_gaussian.empty()) return json{{"kind", "gaussian"}, {"params", a_gaussian}};
        return json{{"kind", "constant"}, {"value", a_const}};
    }
};

void set_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

json theory_result_json(const rlp::theory::TheoryResult& r) {
    json j{{"alpha", r.alpha},
           {"xi_opt", r.xi_opt},
           {"x_star", r.x_star},
           {"lambda_hat", r.lambda_hat},
           {"mean_width", 2.0 * r.xi_opt}};
    if (std::isfinite(r.x_max))
        j["x_max"] = r.x_max;
    else
        j["x_max"] = nullptr;
    return j;
}

json estimate_json(const rlp::mc::McEstimate& est) {
    return json{{"trials", est.config.trials},
                {"optimal", est.values.size()},
                {"unbounded", est.unbounded_count},
                {"infeasible", est.infeasible_count},
                {"failed", est.failure_count},
                {"mean", est.mean},
                {"std_error", est.std_error},
                {"sample_std", est.sample_std()},
                {"warning", est.warning ? json(est.warning_text) : json(nullptr)}};
}

// ---------------------------------------------------------------------- theory

struct TheoryArgs {
    double alpha = 0.0;
    double tol = 1e-10;
    RhsFlags rhs;
    bool as_json = false, as_csv = false;
};

int cmd_theory(const TheoryArgs& args, const std::vector<std::string>& argv) {
    rlp::theory::RhsModel rhs = args.rhs.build(args.rhs.a_file_n);
    double alpha = args.alpha;
    if (rhs.is_vector()) {
        const double ma = rhs.model_alpha();
        if (std::fabs(ma - alpha) > 1e-9 * std::max(1.0, alpha))
            std::cerr << "warning: --alpha " << alpha << " ignored for --a-file, using m/n = "
                      << ma << "\n";
        alpha = ma;
    }
    const rlp::theory::TheoryResult res = rlp::theory::solve_xi(rhs, alpha, args.tol);

    if (args.as_json) {
        json cfg{{"alpha", alpha}, {"tol", args.tol}, {"rhs", args.rhs.describe()}};
        std::cout << run_record("theory", argv, cfg, theory_result_json(res)).dump(2) << "\n";
    } else if (args.as_csv) {
        std::cout << "alpha,xi_opt,x_star,lambda_hat,x_max,mean_width\n"
                  << fmt17(res.alpha) << ',' << fmt17(res.xi_opt) << ',' << fmt17(res.x_star)
                  << ',' << fmt17(res.lambda_hat) << ',' << fmt17(res.x_max) << ','
                  << fmt17(2.0 * res.xi_opt) << "\n";
    } else {
        std::printf("alpha       %.6g\n", res.alpha);
        std::printf("xi_opt      %.17g\n", res.xi_opt);
        std::printf("x_star      %.17g\n", res.x_star);
        std::printf("lambda_hat  %.17g\n", res.lambda_hat);
        std::printf("x_max       %.17g\n", res.x_max);
        std::printf("mean_width  %.17g\n", 2.0 * res.xi_opt);
    }
    return kExitOk;
}

// -------------------------------------------------------------------- simulate

struct SimulateArgs {
    double alpha = 0.0;
    std::int64_t n = 50;
    std::int64_t trials = 200;
    std::uint64_t seed = 0;
    std::string c_mode = "fixed";
    std::string out_csv;
    std::string dump_instance;
    int threads = 0;
    RhsFlags rhs;
    bool as_json = false;
};

int cmd_simulate(const SimulateArgs& args, const std::vector<std::string>& argv) {
    set_threads(args.threads);
    rlp::mc::TrialConfig cfg;
    cfg.alpha = args.alpha;
    cfg.n = args.n;
    cfg.trials = args.trials;
    cfg.master_seed = args.seed;
    cfg.rhs = args.rhs.build(args.n);
    if (args.c_mode == "fixed")
        cfg.c_mode = rlp::mc::CMode::FixedAxis;
    else if (args.c_mode == "sphere")
        cfg.c_mode = rlp::mc::CMode::RandomSphere;
    else
        throw std::invalid_argument("--c-mode must be 'fixed' or 'sphere'");
    cfg.validate();

    const rlp::mc::McEstimate est = rlp::mc::run_trials(cfg);

    std::optional<rlp::theory::TheoryResult> th;
    std::string th_error;
    try {
        th = rlp::theory::solve_xi(cfg.rhs, cfg.alpha, 1e-10);
    } catch (const std::exception& e) {
        th_error = e.what();
    }

    if (!args.out_csv.empty()) {
        std::ofstream os(args.out_csv, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open --out " + args.out_csv);
        rlp::mc::write_trials_csv(est, os);
    }
    if (!args.dump_instance.empty()) {
        // instance of the first non-Optimal trial if any, else trial 0
        std::int64_t t = 0;
        for (const auto& row : est.rows)
            if (row.status != rlp::lp::SolveStatus::Optimal) {
                t = row.trial;
                break;
            }
        rlp::lp::save_instance_file(rlp::mc::materialize_instance(cfg, t),
                                    args.dump_instance);
    }

    const double rel = th && th->xi_opt != 0.0 ? (est.mean - th->xi_opt) / th->xi_opt
                                               : std::numeric_limits<double>::quiet_NaN();
    if (args.as_json) {
        json cfgj{{"alpha", cfg.alpha},     {"n", cfg.n},
                  {"trials", cfg.trials},   {"seed", cfg.master_seed},
                  {"c_mode", args.c_mode},  {"rhs", args.rhs.describe()},
                  {"threads", args.threads}};
        json result{{"estimate", estimate_json(est)}};
        result["theory"] = th ? theory_result_json(*th) : json(nullptr);
        result["relative_difference"] = th ? json(rel) : json(nullptr);
        std::cout << run_record("simulate", argv, cfgj, result).dump(2) << "\n";
    } else {
        std::printf("trials      %lld (optimal %zu, unbounded %lld, infeasible %lld, failed %lld)\n",
                    static_cast<long long>(cfg.trials), est.values.size(),
                    static_cast<long long>(est.unbounded_count),
                    static_cast<long long>(est.infeasible_count),
                    static_cast<long long>(est.failure_count));
        std::printf("mean        %.17g\n", est.mean);
        std::printf("std_error   %.17g\n", est.std_error);
        if (th) {
            std::printf("theory      %.17g\n", th->xi_opt);
            std::printf("rel_diff    %+.4f%%\n", 100.0 * rel);
        } else {
            std::printf("theory      unavailable (%s)\n", th_error.c_str());
        }
    }
    if (est.warning) std::cerr << "warning: " << est.warning_text << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------- table1

struct Table1Args {
    std::int64_t trials = 200;
    std::uint64_t seed = 0;
    bool skip_sim = false;
    double max_alpha = 400.0;
    int threads = 0;
    bool as_json = false;
};

int cmd_table1(const Table1Args& args, const std::vector<std::string>& argv) {
    set_threads(args.threads);
    const double alphas[] = {20, 40, 120, 200, 400};
    const std::int64_t n = 50;

    json rows = json::array();
    std::printf("%8s %8s %4s %12s", "alpha", "m", "n", "theory");
    if (!args.skip_sim) std::printf(" %12s %10s %9s", "simulated", "stderr", "rel_diff");
    std::printf("\n");
    for (double alpha : alphas) {
        if (alpha > args.max_alpha) continue;
        const auto rhs = rlp::theory::RhsModel::constant(1.0);
        const auto th = rlp::theory::solve_xi(rhs, alpha, 1e-10);
        const std::int64_t m = static_cast<std::int64_t>(std::llround(alpha * n));
        json row{{"alpha", alpha}, {"m", m}, {"n", n}, {"theory", th.xi_opt}};
        std::printf("%8.6g %8lld %4lld %12.5f", alpha, static_cast<long long>(m),
                    static_cast<long long>(n), th.xi_opt);
        if (!args.skip_sim) {
            rlp::mc::TrialConfig cfg;
            cfg.alpha = alpha;
            cfg.n = n;
            cfg.trials = args.trials;
            cfg.master_seed = args.seed;
            cfg.validate();
            const auto est = rlp::mc::run_trials(cfg);
            const double rel = (est.mean - th.xi_opt) / th.xi_opt;
            row["simulated"] = est.mean;
            row["std_error"] = est.std_error;
            row["relative_difference"] = rel;
            std::printf(" %12.5f %10.5f %8.3f%%", est.mean, est.std_error, 100.0 * rel);
            if (est.warning) std::cerr << "warning: " << est.warning_text << "\n";
        }
        std::printf("\n");
        rows.push_back(std::move(row));
    }
    if (args.as_json) {
        json cfg{{"trials", args.trials}, {"seed", args.seed},
                 {"skip_sim", args.skip_sim}, {"max_alpha", args.max_alpha}};
        std::cout << run_record("table1", argv, cfg, json{{"rows", rows}}).dump(2) << "\n";
    }
    return kExitOk;
}

// ----------------------------------------------------------------------- sweep

struct SweepArgs {
    double alpha_min = 0.0, alpha_max = 0.0;
    int points = 0;
    std::string out_csv;
    bool as_json = false;
};

int cmd_sweep(const SweepArgs& args, const std::vector<std::string>& argv) {
    if (!(args.alpha_min > 0.0) || !(args.alpha_max >= args.alpha_min))
        throw std::invalid_argument("sweep: need 0 < --alpha-min <= --alpha-max");
    if (args.points < 1) throw std::invalid_argument("sweep: --points must be >= 1");

    struct Row {
        double alpha = 0.0, xi = 0.0, asym = 0.0, ratio = 0.0;
        bool has_xi = false, has_asym = false;
    };
    std::vector<Row> rows;
    bool warned_asym = false, warned_xi = false;
    const auto rhs = rlp::theory::RhsModel::constant(1.0);
    for (int k = 0; k < args.points; ++k) {
        const double t = args.points == 1 ? 0.0
                                          : static_cast<double>(k) / (args.points - 1);
        const double alpha =
            args.alpha_min * std::pow(args.alpha_max / args.alpha_min, t);
        Row row;
        row.alpha = alpha;
        row.has_asym = alpha > 1.0;
        try {
            row.xi = rlp::theory::solve_xi(rhs, alpha, 1e-10).xi_opt;
            row.has_xi = true;
        } catch (const rlp::theory::SolveError& e) {
            if (!warned_xi) {
                std::cerr << "warning: " << e.what() << "; emitting empty xi cells\n";
                warned_xi = true;
            }
        }
        if (row.has_asym) {
            row.asym = rlp::theory::xi_asymptote(alpha);
            if (row.has_xi) row.ratio = row.xi / row.asym;
        } else if (!warned_asym) {
            std::cerr << "warning: asymptote undefined for alpha <= 1; emitting empty cells\n";
            warned_asym = true;
        }
        rows.push_back(row);
    }

    std::ostringstream csv;
    csv << "alpha,xi_opt,asymptote,ratio\n";
    for (const Row& r : rows) {
        csv << fmt17(r.alpha) << ',';
        if (r.has_xi) csv << fmt17(r.xi);
        csv << ',';
        if (r.has_asym) csv << fmt17(r.asym);
        csv << ',';
        if (r.has_xi && r.has_asym) csv << fmt17(r.ratio);
        csv << '\n';
    }
    if (!args.out_csv.empty()) {
        std::ofstream os(args.out_csv, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open --out " + args.out_csv);
        os << csv.str();
    } else if (!args.as_json) {
        std::cout << csv.str();
    }
    if (args.as_json) {
        json jrows = json::array();
        for (const Row& r : rows) {
            json jr{{"alpha", r.alpha}};
            jr["xi_opt"] = r.has_xi ? json(r.xi) : json(nullptr);
            jr["asymptote"] = r.has_asym ? json(r.asym) : json(nullptr);
            jr["ratio"] = r.has_xi && r.has_asym ? json(r.ratio) : json(nullptr);
            jrows.push_back(std::move(jr));
        }
        json cfg{{"alpha_min", args.alpha_min},
                 {"alpha_max", args.alpha_max},
                 {"points", args.points},
                 {"out", args.out_csv}};
        std::cout << run_record("sweep", argv, cfg, json{{"rows", jrows}}).dump(2) << "\n";
    }
    return kExitOk;
}

// ----------------------------------------------------------------------- solve

struct SolveArgs {
    std::string load_path;
    bool as_json = false;
};

int cmd_solve(const SolveArgs& args, const std::vector<std::string>& argv) {
    const rlp::lp::LpInstance inst = rlp::lp::load_instance_file(args.load_path);
    const rlp::lp::LpSolution sol = rlp::lp::solve_lp(inst);
    const rlp::lp::CertificateReport rep = rlp::lp::check_certificates(inst, sol);

    if (args.as_json) {
        json result{{"status", rlp::lp::to_string(sol.status)},
                    {"iterations", sol.iterations}};
        if (sol.status == rlp::lp::SolveStatus::Optimal) {
            result["objective"] = sol.objective;
            result["x_star"] = sol.x_star;
            result["certificates"] = json{{"primal_violation", rep.primal_violation},
                                          {"dual_residual", rep.dual_residual},
                                          {"lambda_min", rep.lambda_min},
                                          {"duality_gap", rep.duality_gap},
                                          {"comp_slack", rep.comp_slack},
                                          {"ok", rep.ok}};
        }
        if (!sol.diagnostic.empty()) result["diagnostic"] = sol.diagnostic;
        json cfg{{"load_instance", args.load_path}, {"m", inst.m}, {"n", inst.n}};
        std::cout << run_record("solve", argv, cfg, result).dump(2) << "\n";
    } else {
        std::printf("m x n       %lld x %lld\n", static_cast<long long>(inst.m),
                    static_cast<long long>(inst.n));
        std::printf("status      %s\n", rlp::lp::to_string(sol.status));
        if (sol.status == rlp::lp::SolveStatus::Optimal) {
            std::printf("objective   %.17g\n", sol.objective);
            std::printf("certificates ok: %s\n", rep.ok ? "yes" : "no");
        }
        if (!sol.diagnostic.empty()) std::printf("diagnostic  %s\n", sol.diagnostic.c_str());
    }
    if (sol.status == rlp::lp::SolveStatus::NumericalFailure) return kExitComputation;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> argv_echo(argv, argv + argc);

    CLI::App app{"Limiting objectives of Gaussian random linear programs: closed-form "
                 "evaluation and seeded Monte Carlo verification"};
    app.require_subcommand(1);

    TheoryArgs theory_args;
    auto* theory = app.add_subcommand(
        "theory", "Evaluate the limiting normalized objective xi_opt(alpha; a)");
    theory->add_option("--alpha", theory_args.alpha, "Constraint/dimension ratio m/n")
        ->required();
    theory->add_option("--tol", theory_args.tol, "Scalar search tolerance on x")
        ->default_val(1e-10);
    theory_args.rhs.attach(theory);
    theory->add_flag("--json", theory_args.as_json, "Emit a JSON run record");
    theory->add_flag("--csv", theory_args.as_csv, "Emit a one-row CSV");

    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand(
        "simulate", "Seeded Monte Carlo estimate of the normalized objective magnitude");
    simulate->add_option("--alpha", sim_args.alpha, "Constraint/dimension ratio m/n")
        ->required();
    simulate->add_option("--n", sim_args.n, "Number of unknowns")->default_val(50);
    simulate->add_option("--trials", sim_args.trials, "Number of trials")->default_val(200);
    simulate->add_option("--seed", sim_args.seed, "Master seed")->default_val(0);
    simulate->add_option("--c-mode", sim_args.c_mode, "Objective direction: fixed | sphere")
        ->default_val("fixed");
    simulate->add_option("--out", sim_args.out_csv, "Write per-trial CSV to this path");
    simulate->add_option("--dump-instance", sim_args.dump_instance,
                         "Dump one instance (first non-Optimal trial, else trial 0)");
    simulate->add_option("--threads", sim_args.threads, "Worker threads (0 = default)")
        ->default_val(0);
    sim_args.rhs.attach(simulate);
    simulate->add_flag("--json", sim_args.as_json, "Emit a JSON run record");

    Table1Args t1_args;
    auto* table1 = app.add_subcommand(
        "table1", "Theory vs simulation table at alpha in {20, 40, 120, 200, 400}, n = 50");
    table1->add_option("--trials", t1_args.trials, "Trials per row")->default_val(200);
    table1->add_option("--seed", t1_args.seed, "Master seed")->default_val(0);
    table1->add_flag("--skip-sim", t1_args.skip_sim, "Theory column only");
    table1->add_option("--max-alpha", t1_args.max_alpha, "Largest row to run")
        ->default_val(400.0);
    table1->add_option("--threads", t1_args.threads, "Worker threads (0 = default)")
        ->default_val(0);
    table1->add_flag("--json", t1_args.as_json, "Emit a JSON run record");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand(
        "sweep", "Log-spaced alpha sweep of xi_opt and the 1/sqrt(2 log alpha) curve");
    sweep->add_option("--alpha-min", sweep_args.alpha_min, "Smallest alpha")->required();
    sweep->add_option("--alpha-max", sweep_args.alpha_max, "Largest alpha")->required();
    sweep->add_option("--points", sweep_args.points, "Number of log-spaced points")
        ->required();
    sweep->add_option("--out", sweep_args.out_csv, "Write CSV to this path (default stdout)");
    sweep->add_flag("--json", sweep_args.as_json, "Emit a JSON run record");

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "Solve a dumped LP instance file");
    solve->add_option("--load-instance", solve_args.load_path, "Instance file path")
        ->required();
    solve->add_flag("--json", solve_args.as_json, "Emit a JSON run record");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (theory->parsed()) return cmd_theory(theory_args, argv_echo);
        if (simulate->parsed()) return cmd_simulate(sim_args, argv_echo);
        if (table1->parsed()) return cmd_table1(t1_args, argv_echo);
        if (sweep->parsed()) return cmd_sweep(sweep_args, argv_echo);
        if (solve->parsed()) return cmd_solve(solve_args, argv_echo);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitComputation;
    }
    return kExitUsage;
}
