#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rlp/lp_core.hpp"
#include "rlp/theory.hpp"

namespace rlp::mc {

// Counter-based per-trial random stream: the child state is a splittable-mix
// hash of (master_seed, trial_index), uniforms come from the splitmix64
// sequence, and normals from the Box-Muller transform.  Identical
// (master_seed, trial_index) always reproduces the identical sequence,
// independent of thread scheduling.
class GaussianStream {
public:
    GaussianStream(std::uint64_t master_seed, std::uint64_t trial_index);

    std::uint64_t child_seed() const { return child_seed_; }
    std::uint64_t next_u64();
    double next_uniform();  // (0, 1]
    double next_normal();
    void fill_normal(double* out, std::size_t count);

private:
    std::uint64_t child_seed_ = 0;
    std::uint64_t state_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Convenience form of the stream contract as a materialized sequence.
std::vector<double> gaussian_stream(std::uint64_t master_seed,
                                    std::uint64_t trial_index, std::size_t count);

enum class CMode { FixedAxis, RandomSphere };

struct TrialConfig {
    double alpha = 20.0;
    std::int64_t n = 50;
    theory::RhsModel rhs = theory::RhsModel::constant(1.0);
    std::int64_t trials = 200;
    std::uint64_t master_seed = 0;
    CMode c_mode = CMode::FixedAxis;

    std::int64_t m() const;
    void validate() const;  // m >= 1, trials >= 2, m*n <= 1e8
};

struct TrialRow {
    std::int64_t trial = 0;
    std::uint64_t seed = 0;  // per-trial child seed
    lp::SolveStatus status = lp::SolveStatus::NumericalFailure;
    double value = 0.0;  // |objective| / sqrt(n), meaningful when Optimal
};

struct McEstimate {
    TrialConfig config;
    std::vector<TrialRow> rows;     // all trials in index order
    std::vector<double> values;     // Optimal trials only, index order
    double mean = 0.0;
    double std_error = 0.0;         // sample std / sqrt(#values)
    std::int64_t unbounded_count = 0;
    std::int64_t infeasible_count = 0;
    std::int64_t failure_count = 0;
    bool warning = false;           // > 10% of trials non-Optimal
    std::string warning_text;

    double sample_std() const;
};

// Runs cfg.trials independent instances: A is m x n iid standard normal,
// a is materialized from cfg.rhs, c is scaled to ||c||_2 = sqrt(n), and each
// trial records |min c^T x| / sqrt(n).  Non-Optimal trials are counted and
// excluded from the mean.  The parallel version distributes trials over
// OpenMP threads; aggregation is in trial order either way, so the two return
// bitwise-identical estimates.
McEstimate run_trials(const TrialConfig& cfg);
McEstimate run_trials_serial(const TrialConfig& cfg);

// Rebuilds the instance a given trial solves (for dumps / reproduction).
lp::LpInstance materialize_instance(const TrialConfig& cfg, std::int64_t trial);

// CSV export: header trial,seed,m,n,alpha,status,objective_magnitude.
void write_trials_csv(const McEstimate& est, std::ostream& os);

struct ConcentrationReport {
    McEstimate small_n;
    McEstimate large_n;
    double std_small = 0.0;
    double std_large = 0.0;
    bool decreasing = false;  // std_large < std_small
};

// Same alpha/rhs/trials at two problem sizes; the sample spread must shrink
// with n for the concentration claim to hold at finite size.
ConcentrationReport concentration_report(const TrialConfig& cfg_small,
                                         const TrialConfig& cfg_large);

}  // namespace rlp::mc
