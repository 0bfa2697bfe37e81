#include "rlp/mc_harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rlp::mc {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

GaussianStream::GaussianStream(std::uint64_t master_seed, std::uint64_t trial_index) {
    child_seed_ = mix64(master_seed ^ mix64(trial_index + kGolden));
    state_ = child_seed_;
}

std::uint64_t GaussianStream::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double GaussianStream::next_uniform() {
    // 53-bit mantissa, shifted into (0, 1] so log() is always finite
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double GaussianStream::next_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

void GaussianStream::fill_normal(double* out, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) out[i] = next_normal();
}

std::vector<double> gaussian_stream(std::uint64_t master_seed,
                                    std::uint64_t trial_index, std::size_t count) {
    GaussianStream g(master_seed, trial_index);
    std::vector<double> out(count);
    g.fill_normal(out.data(), count);
    return out;
}

std::int64_t TrialConfig::m() const {
    return static_cast<std::int64_t>(std::llround(alpha * static_cast<double>(n)));
}

void TrialConfig::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("TrialConfig: alpha must be positive and finite");
    if (n < 1) throw std::invalid_argument("TrialConfig: n must be >= 1");
    if (m() < 1) throw std::invalid_argument("TrialConfig: m = round(alpha*n) must be >= 1");
    if (trials < 2) throw std::invalid_argument("TrialConfig: trials must be >= 2");
    if (m() * n > 100000000)
        throw std::invalid_argument("TrialConfig: m*n exceeds the 1e8 memory guard");
    if (const auto* v = std::get_if<theory::VectorRhs>(&rhs.law)) {
        if (static_cast<std::int64_t>(v->values.size()) != m())
            throw std::invalid_argument(
                "TrialConfig: Vector rhs length must equal m = round(alpha*n)");
    }
}

lp::LpInstance materialize_instance(const TrialConfig& cfg, std::int64_t trial) {
    const std::int64_t m = cfg.m(), n = cfg.n;
    GaussianStream g(cfg.master_seed, static_cast<std::uint64_t>(trial));

    lp::LpInstance inst;
    inst.m = m;
    inst.n = n;
    inst.A.resize(m * n);
    inst.a.resize(m);
    inst.c.assign(n, 0.0);

    // Draw order is part of the reproducibility contract:
    // A row-major, then a (when random), then c (when random).
    g.fill_normal(inst.A.data(), inst.A.size());
    std::visit(
        [&](const auto& law) {
            using L = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<L, theory::ConstantRhs>) {
                std::fill(inst.a.begin(), inst.a.end(), law.value);
            } else if constexpr (std::is_same_v<L, theory::VectorRhs>) {
                std::copy(law.values.begin(), law.values.end(), inst.a.begin());
            } else if constexpr (std::is_same_v<L, theory::DiscreteRhs>) {
                for (std::int64_t i = 0; i < m; ++i) {
                    const double u = g.next_uniform();
                    double acc = 0.0;
                    double a_i = law.atoms.back();
                    for (std::size_t j = 0; j < law.atoms.size(); ++j) {
                        acc += law.probs[j];
                        if (u <= acc) {
                            a_i = law.atoms[j];
                            break;
                        }
                    }
                    inst.a[i] = a_i;
                }
            } else {
                for (std::int64_t i = 0; i < m; ++i)
                    inst.a[i] = law.mean + law.stddev * g.next_normal();
            }
        },
        cfg.rhs.law);

    const double sqrt_n = std::sqrt(static_cast<double>(n));
    if (cfg.c_mode == CMode::FixedAxis) {
        inst.c[0] = sqrt_n;
    } else {
        double norm = 0.0;
        do {
            g.fill_normal(inst.c.data(), inst.c.size());
            norm = 0.0;
            for (double v : inst.c) norm += v * v;
            norm = std::sqrt(norm);
        } while (norm == 0.0);
        for (double& v : inst.c) v *= sqrt_n / norm;
    }
    return inst;
}

namespace {

TrialRow execute_trial(const TrialConfig& cfg, std::int64_t trial) {
    TrialRow row;
    row.trial = trial;
    row.seed = GaussianStream(cfg.master_seed, static_cast<std::uint64_t>(trial)).child_seed();
    try {
        const lp::LpInstance inst = materialize_instance(cfg, trial);
        lp::LpSolution sol = lp::solve_lp(inst);
        row.status = sol.status;
        if (sol.status == lp::SolveStatus::Optimal) {
            const bool a_nonneg =
                std::all_of(inst.a.begin(), inst.a.end(), [](double v) { return v >= 0.0; });
            if (a_nonneg && sol.objective > 1e-9) {
                // the origin is feasible, so a positive minimum is impossible
                row.status = lp::SolveStatus::NumericalFailure;
            } else {
                row.value = std::fabs(sol.objective) / std::sqrt(static_cast<double>(cfg.n));
            }
        }
    } catch (const std::exception&) {
        row.status = lp::SolveStatus::NumericalFailure;
    }
    return row;
}

McEstimate aggregate(const TrialConfig& cfg, std::vector<TrialRow> rows) {
    McEstimate est;
    est.config = cfg;
    est.rows = std::move(rows);
    for (const TrialRow& row : est.rows) {
        switch (row.status) {
            case lp::SolveStatus::Optimal: est.values.push_back(row.value); break;
            case lp::SolveStatus::Unbounded: ++est.unbounded_count; break;
            case lp::SolveStatus::Infeasible: ++est.infeasible_count; break;
            case lp::SolveStatus::NumericalFailure: ++est.failure_count; break;
        }
    }
    const std::int64_t k = static_cast<std::int64_t>(est.values.size());
    if (k > 0) {
        double s = 0.0;
        for (double v : est.values) s += v;
        est.mean = s / static_cast<double>(k);
        if (k > 1) {
            double ss = 0.0;
            for (double v : est.values) ss += (v - est.mean) * (v - est.mean);
            est.std_error = std::sqrt(ss / static_cast<double>(k - 1)) /
                            std::sqrt(static_cast<double>(k));
        }
    }
    const std::int64_t non_optimal = cfg.trials - k;
    if (non_optimal * 10 > cfg.trials) {
        est.warning = true;
        std::ostringstream os;
        os << non_optimal << " of " << cfg.trials
           << " trials were not Optimal (unbounded " << est.unbounded_count
           << ", infeasible " << est.infeasible_count << ", failed "
           << est.failure_count << ")";
        est.warning_text = os.str();
    }
    return est;
}

McEstimate run_impl(const TrialConfig& cfg, bool parallel) {
    cfg.validate();
    std::vector<TrialRow> rows(cfg.trials);
    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (std::int64_t t = 0; t < cfg.trials; ++t) rows[t] = execute_trial(cfg, t);
    } else {
        for (std::int64_t t = 0; t < cfg.trials; ++t) rows[t] = execute_trial(cfg, t);
    }
    return aggregate(cfg, std::move(rows));
}

}  // namespace

double McEstimate::sample_std() const {
    return std_error * std::sqrt(static_cast<double>(values.size()));
}

McEstimate run_trials(const TrialConfig& cfg) { return run_impl(cfg, true); }

McEstimate run_trials_serial(const TrialConfig& cfg) { return run_impl(cfg, false); }

void write_trials_csv(const McEstimate& est, std::ostream& os) {
    os << "trial,seed,m,n,alpha,status,objective_magnitude\n";
    char buf[64];
    const std::int64_t m = est.config.m();
    for (const TrialRow& row : est.rows) {
        os << row.trial << ',' << row.seed << ',' << m << ',' << est.config.n << ',';
        std::snprintf(buf, sizeof buf, "%.17g", est.config.alpha);
        os << buf << ',' << lp::to_string(row.status) << ',';
        if (row.status == lp::SolveStatus::Optimal) {
            std::snprintf(buf, sizeof buf, "%.17g", row.value);
            os << buf;
        }
        os << '\n';
    }
}

ConcentrationReport concentration_report(const TrialConfig& cfg_small,
                                         const TrialConfig& cfg_large) {
    if (cfg_small.n >= cfg_large.n)
        throw std::invalid_argument("concentration_report: requires small.n < large.n");
    if (cfg_small.alpha != cfg_large.alpha || cfg_small.trials != cfg_large.trials)
        throw std::invalid_argument(
            "concentration_report: alpha and trials must match across configs");
    ConcentrationReport rep;
    rep.small_n = run_trials(cfg_small);
    rep.large_n = run_trials(cfg_large);
    rep.std_small = rep.small_n.sample_std();
    rep.std_large = rep.large_n.sample_std();
    rep.decreasing = rep.std_large < rep.std_small;
    return rep;
}

}  // namespace rlp::mc
