#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rlp::lp {

// Dense instance of  min c^T x  subject to  A x <= a,  x free.
struct LpInstance {
    std::int64_t m = 0, n = 0;
    std::vector<double> A;  // row-major, m*n
    std::vector<double> a;  // m
    std::vector<double> c;  // n

    double at(std::int64_t i, std::int64_t j) const { return A[i * n + j]; }
    double& at(std::int64_t i, std::int64_t j) { return A[i * n + j]; }
    const double* row(std::int64_t i) const { return A.data() + i * n; }

    void validate() const;  // consistent dimensions, finite entries
};

enum class SolveStatus { Optimal, Unbounded, Infeasible, NumericalFailure };
const char* to_string(SolveStatus s);

struct LpSolution {
    SolveStatus status = SolveStatus::NumericalFailure;
    double objective = 0.0;           // when Optimal
    std::vector<double> x_star;       // n, when Optimal
    std::vector<double> lambda_star;  // m, >= 0, when Optimal
    std::int64_t iterations = 0;
    std::string diagnostic;           // populated on NumericalFailure
};

// Revised simplex on the dual standard form
//   max -a^T lambda   s.t.  A^T lambda = -c,  lambda >= 0
// (n x n LU-factored basis, Dantzig pricing, two-phase start, Bland's rule
// as an anti-cycling fallback).  The primal solution is recovered from the
// final basis.  Statuses:
//   Optimal   - certificates satisfy feasibility/duality tolerances
//   Unbounded - the dual is infeasible and the primal is feasible
//   Infeasible- the primal feasible set is empty
//   NumericalFailure - basis too ill-conditioned or certificates failed
LpSolution solve_lp(const LpInstance& inst);

// Brute-force oracle: enumerates all n-subsets of constraints, keeps feasible
// vertices, and tests extreme-ray directions for unboundedness.  Guarded to
// n <= 4, m <= 16.
LpSolution vertex_enumerate(const LpInstance& inst);

// Residuals of the optimality certificates for an Optimal solution.
struct CertificateReport {
    double primal_violation = 0.0;  // max_i (A x - a)_i, positive part
    double dual_residual = 0.0;     // ||A^T lambda + c||_inf
    double lambda_min = 0.0;        // min_i lambda_i
    double duality_gap = 0.0;       // |c^T x + a^T lambda|
    double comp_slack = 0.0;        // max_i lambda_i * (a - A x)_i
    bool ok = false;
};
CertificateReport check_certificates(const LpInstance& inst, const LpSolution& sol);

// Plain-text instance serialization: header line "rlp-lp 1", then "m n",
// row-major A, a, c as decimal doubles (17 significant digits).
void save_instance(const LpInstance& inst, std::ostream& os);
LpInstance load_instance(std::istream& is);
void save_instance_file(const LpInstance& inst, const std::string& path);
LpInstance load_instance_file(const std::string& path);

}  // namespace rlp::lp
