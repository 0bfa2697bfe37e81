#include "rlp/lp_core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rlp::lp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Dense LU with partial pivoting (col-major), used for the simplex basis.
// ---------------------------------------------------------------------------

class DenseLu {
public:
    // Factors the col-major n x n matrix in place; returns false on a
    // (numerically) singular pivot.
    bool factor(int n, std::vector<double> a) {
        n_ = n;
        lu_ = std::move(a);
        ipiv_.resize(n);
        max_pivot_ = 0.0;
        min_pivot_ = kInf;
        for (int k = 0; k < n; ++k) {
            int p = k;
            double best = std::fabs(lu_[k + k * n]);
            for (int i = k + 1; i < n; ++i) {
                const double v = std::fabs(lu_[i + k * n]);
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            ipiv_[k] = p;
            if (best < 1e-13) return false;
            if (p != k)
                for (int j = 0; j < n; ++j) std::swap(lu_[k + j * n], lu_[p + j * n]);
            const double piv = lu_[k + k * n];
            max_pivot_ = std::max(max_pivot_, std::fabs(piv));
            min_pivot_ = std::min(min_pivot_, std::fabs(piv));
            const double inv = 1.0 / piv;
            for (int i = k + 1; i < n; ++i) lu_[i + k * n] *= inv;
            for (int j = k + 1; j < n; ++j) {
                const double ukj = lu_[k + j * n];
                if (ukj == 0.0) continue;
                double* col = &lu_[j * n];
                const double* lcol = &lu_[k * n];
                for (int i = k + 1; i < n; ++i) col[i] -= lcol[i] * ukj;
            }
        }
        return true;
    }

    // Solves A x = b in place.
    void solve(double* b) const {
        const int n = n_;
        for (int k = 0; k < n; ++k)
            if (ipiv_[k] != k) std::swap(b[k], b[ipiv_[k]]);
        for (int j = 0; j < n; ++j) {  // L y = Pb (unit lower)
            const double bj = b[j];
            if (bj == 0.0) continue;
            const double* col = &lu_[j * n];
            for (int i = j + 1; i < n; ++i) b[i] -= col[i] * bj;
        }
        for (int j = n - 1; j >= 0; --j) {  // U x = y
            b[j] /= lu_[j + j * n];
            const double bj = b[j];
            if (bj == 0.0) continue;
            const double* col = &lu_[j * n];
            for (int i = 0; i < j; ++i) b[i] -= col[i] * bj;
        }
    }

    // Solves A^T x = b in place (A^T = U^T L^T P).
    void solve_transpose(double* b) const {
        const int n = n_;
        for (int j = 0; j < n; ++j) {  // U^T y = b (lower triangular)
            const double* col = &lu_[j * n];
            double s = b[j];
            for (int i = 0; i < j; ++i) s -= col[i] * b[i];
            b[j] = s / col[j];
        }
        for (int j = n - 1; j >= 0; --j) {  // L^T w = y (unit upper)
            const double* col = &lu_[j * n];
            double s = b[j];
            for (int i = j + 1; i < n; ++i) s -= col[i] * b[i];
            b[j] = s;
        }
        for (int k = n - 1; k >= 0; --k)
            if (ipiv_[k] != k) std::swap(b[k], b[ipiv_[k]]);
    }

    double condition_proxy() const {
        return min_pivot_ > 0.0 ? max_pivot_ / min_pivot_ : kInf;
    }

private:
    int n_ = 0;
    std::vector<double> lu_;
    std::vector<int> ipiv_;
    double max_pivot_ = 0.0, min_pivot_ = kInf;
};

// ---------------------------------------------------------------------------
// Revised simplex on  min cost^T v  s.t.  D v = d,  v >= 0  (col-major D).
// ---------------------------------------------------------------------------

struct StandardLp {
    int nr = 0;             // equality rows = basis dimension
    int nc = 0;             // structural columns
    const double* D = nullptr;  // col-major nr x nc
    std::vector<double> d;
    std::vector<double> cost;
};

struct SimplexOutcome {
    enum class Status { Optimal, Infeasible, Unbounded, Failure };
    Status status = Status::Failure;
    std::vector<double> v;  // nc structural values
    std::vector<double> w;  // nr, B^{-T} cost_B at the final basis
    double objective = 0.0;
    std::int64_t iterations = 0;
    std::string diagnostic;
};

class RevisedSimplex {
public:
    explicit RevisedSimplex(const StandardLp& lp) : lp_(lp), nr_(lp.nr), nc_(lp.nc) {
        double dmax = 0.0, cmax = 0.0;
        for (double v : lp.d) dmax = std::max(dmax, std::fabs(v));
        for (double v : lp.cost) cmax = std::max(cmax, std::fabs(v));
        dj_tol_ = 1e-9 * (1.0 + cmax);
        feas_tol_ = 1e-8 * (1.0 + dmax);
        degen_tol_ = 1e-12 * (1.0 + dmax);
        max_iterations_ = 10000 + 50 * static_cast<std::int64_t>(nr_ + nc_);
    }

    SimplexOutcome run() {
        SimplexOutcome out;
        // Phase I: all-artificial start, minimize the artificial mass.
        basis_.resize(nr_);
        pos_.assign(nc_ + nr_, -1);
        xb_.resize(nr_);
        art_sign_.resize(nr_);
        for (int i = 0; i < nr_; ++i) {
            basis_[i] = nc_ + i;
            pos_[nc_ + i] = i;
            art_sign_[i] = lp_.d[i] < 0.0 ? -1.0 : 1.0;
            xb_[i] = std::fabs(lp_.d[i]);
        }
        std::string err;
        if (!refactor(&err)) return fail(std::move(err));

        phase_ = 1;
        const Step s1 = iterate();
        if (s1 == Step::Failure) return fail(std::move(fail_msg_));
        if (s1 == Step::Unbounded)
            return fail("phase-1 objective unbounded below (inconsistent state)");
        double art_mass = 0.0;
        for (int i = 0; i < nr_; ++i)
            if (basis_[i] >= nc_) art_mass += xb_[i];
        if (art_mass > feas_tol_) {
            out.status = SimplexOutcome::Status::Infeasible;
            out.iterations = iterations_;
            return out;
        }
        if (!drive_out_artificials(&err)) return fail(std::move(err));

        phase_ = 2;
        const Step s2 = iterate();
        if (s2 == Step::Failure) return fail(std::move(fail_msg_));
        if (s2 == Step::Unbounded) {
            out.status = SimplexOutcome::Status::Unbounded;
            out.iterations = iterations_;
            return out;
        }

        out.status = SimplexOutcome::Status::Optimal;
        out.v.assign(nc_, 0.0);
        double obj = 0.0;
        for (int i = 0; i < nr_; ++i) {
            if (basis_[i] < nc_) {
                out.v[basis_[i]] = xb_[i];
                obj += lp_.cost[basis_[i]] * xb_[i];
            }
        }
        out.objective = obj;
        out.w = btran_cost();
        out.iterations = iterations_;
        return out;
    }

private:
    enum class Step { Done, Unbounded, Failure };

    const StandardLp& lp_;
    int nr_, nc_;
    std::vector<int> basis_;
    std::vector<int> pos_;          // variable -> basis position or -1
    std::vector<double> xb_;
    std::vector<double> art_sign_;
    DenseLu lu_;
    struct Eta {
        int r;
        std::vector<double> v;
    };
    std::vector<Eta> etas_;
    int phase_ = 1;
    std::int64_t iterations_ = 0, degenerate_ = 0, max_iterations_ = 0;
    bool bland_ = false;
    double dj_tol_ = 0.0, feas_tol_ = 0.0, degen_tol_ = 0.0;
    static constexpr double kPivotTol = 1e-10;
    static constexpr int kRefactorPeriod = 50;
    std::string fail_msg_;

    SimplexOutcome fail(std::string msg) {
        SimplexOutcome out;
        out.status = SimplexOutcome::Status::Failure;
        out.diagnostic = std::move(msg);
        out.iterations = iterations_;
        return out;
    }

    double cost_of(int var) const {
        if (phase_ == 1) return var >= nc_ ? 1.0 : 0.0;
        return var >= nc_ ? 0.0 : lp_.cost[var];
    }

    void column(int var, std::vector<double>& out) const {
        out.assign(nr_, 0.0);
        if (var >= nc_) {
            out[var - nc_] = art_sign_[var - nc_];
        } else {
            const double* col = lp_.D + static_cast<std::ptrdiff_t>(var) * nr_;
            std::copy(col, col + nr_, out.begin());
        }
    }

    bool refactor(std::string* err) {
        std::vector<double> B(static_cast<std::size_t>(nr_) * nr_, 0.0);
        for (int i = 0; i < nr_; ++i) {
            const int var = basis_[i];
            if (var >= nc_) {
                B[(var - nc_) + static_cast<std::size_t>(i) * nr_] = art_sign_[var - nc_];
            } else {
                const double* col = lp_.D + static_cast<std::ptrdiff_t>(var) * nr_;
                std::copy(col, col + nr_, B.begin() + static_cast<std::size_t>(i) * nr_);
            }
        }
        if (!lu_.factor(nr_, std::move(B))) {
            if (err) *err = "basis factorization failed (singular basis)";
            return false;
        }
        if (lu_.condition_proxy() > 1e14) {
            if (err) {
                std::ostringstream os;
                os << "basis condition estimate " << lu_.condition_proxy() << " exceeds 1e14";
                *err = os.str();
            }
            return false;
        }
        etas_.clear();
        // Recompute basic values from scratch to shed accumulated drift.
        std::vector<double> rhs = lp_.d;
        lu_.solve(rhs.data());
        xb_ = std::move(rhs);
        return true;
    }

    void ftran(std::vector<double>& v) const {
        lu_.solve(v.data());
        for (const Eta& e : etas_) {
            const double piv = v[e.r];
            if (piv == 0.0) continue;
            for (int i = 0; i < nr_; ++i) v[i] += e.v[i] * piv;
            v[e.r] = e.v[e.r] * piv;
        }
    }

    void btran(std::vector<double>& v) const {
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double s = 0.0;  // (E^T v)_r = eta . v, other components unchanged
            for (int i = 0; i < nr_; ++i) s += it->v[i] * v[i];
            v[it->r] = s;
        }
        lu_.solve_transpose(v.data());
    }

    std::vector<double> btran_cost() const {
        std::vector<double> w(nr_);
        for (int i = 0; i < nr_; ++i) w[i] = cost_of(basis_[i]);
        btran(w);
        return w;
    }

    // Returns Done (optimal for the phase), Unbounded, or Failure.
    Step iterate() {
        std::vector<double> w(nr_), y(nr_), col(nr_);
        for (;;) {
            if (++iterations_ > max_iterations_) {
                fail_msg_ = "iteration limit exceeded";
                return Step::Failure;
            }
            // Pricing: w = B^{-T} cost_B, then reduced costs over structural
            // nonbasic columns (artificials never re-enter).
            for (int i = 0; i < nr_; ++i) w[i] = cost_of(basis_[i]);
            btran(w);
            int enter = -1;
            double best_dj = -dj_tol_;
            for (int j = 0; j < nc_; ++j) {
                if (pos_[j] >= 0) continue;
                const double* Dj = lp_.D + static_cast<std::ptrdiff_t>(j) * nr_;
                double dj = cost_of(j);
                for (int i = 0; i < nr_; ++i) dj -= w[i] * Dj[i];
                if (dj < best_dj) {
                    best_dj = dj;
                    enter = j;
                    if (bland_) break;  // first eligible index
                }
            }
            if (enter < 0) return Step::Done;

            column(enter, col);
            y = col;
            ftran(y);

            // Ratio test.  Basic artificials are pinned at zero in phase 2:
            // any nonzero pivot entry makes them a ratio-0 blocking row.
            int leave = -1;
            double best_ratio = kInf;
            bool leave_is_art = false;
            for (int i = 0; i < nr_; ++i) {
                const bool art = basis_[i] >= nc_;
                double ratio;
                if (phase_ == 2 && art) {
                    if (std::fabs(y[i]) <= kPivotTol) continue;
                    ratio = 0.0;
                } else {
                    if (y[i] <= kPivotTol) continue;
                    ratio = xb_[i] / y[i];
                }
                bool take;
                if (leave < 0 || ratio < best_ratio) {
                    take = true;
                } else if (ratio == best_ratio) {
                    // deterministic tie-break: prefer kicking artificials,
                    // then the smallest variable index
                    take = (art && !leave_is_art) ||
                           (art == leave_is_art && basis_[i] < basis_[leave]);
                } else {
                    take = false;
                }
                if (take) {
                    best_ratio = ratio;
                    leave = i;
                    leave_is_art = art;
                }
            }
            if (leave < 0) return Step::Unbounded;

            const double theta = std::max(best_ratio, 0.0);
            if (theta <= degen_tol_) {
                if (++degenerate_ > 10 * static_cast<std::int64_t>(nc_) && !bland_)
                    bland_ = true;
            }
            for (int i = 0; i < nr_; ++i) xb_[i] -= theta * y[i];
            const int out_var = basis_[leave];
            xb_[leave] = theta;
            pos_[out_var] = -1;
            pos_[enter] = leave;
            basis_[leave] = enter;

            Eta e;
            e.r = leave;
            e.v.resize(nr_);
            const double inv = 1.0 / y[leave];
            for (int i = 0; i < nr_; ++i) e.v[i] = -y[i] * inv;
            e.v[leave] = inv;
            etas_.push_back(std::move(e));
            if (static_cast<int>(etas_.size()) >= kRefactorPeriod) {
                if (!refactor(&fail_msg_)) return Step::Failure;
            }
        }
    }

    // After phase 1: pivot basic artificials onto structural columns where
    // possible; rows with no eligible column are linearly dependent and keep
    // their artificial pinned at zero.
    bool drive_out_artificials(std::string* err) {
        std::vector<double> rho(nr_), y(nr_), col(nr_);
        for (int i = 0; i < nr_; ++i) {
            if (basis_[i] < nc_) continue;
            rho.assign(nr_, 0.0);
            rho[i] = 1.0;
            btran(rho);
            int enter = -1;
            for (int j = 0; j < nc_; ++j) {
                if (pos_[j] >= 0) continue;
                const double* Dj = lp_.D + static_cast<std::ptrdiff_t>(j) * nr_;
                double yi = 0.0;
                for (int k = 0; k < nr_; ++k) yi += rho[k] * Dj[k];
                if (std::fabs(yi) > 1e-7) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) continue;  // dependent row
            column(enter, col);
            y = col;
            ftran(y);
            if (std::fabs(y[i]) <= kPivotTol) continue;
            const double theta = xb_[i] / y[i];
            for (int k = 0; k < nr_; ++k) xb_[k] -= theta * y[k];
            const int out_var = basis_[i];
            xb_[i] = theta;
            pos_[out_var] = -1;
            pos_[enter] = i;
            basis_[i] = enter;
            Eta e;
            e.r = i;
            e.v.resize(nr_);
            const double inv = 1.0 / y[i];
            for (int k = 0; k < nr_; ++k) e.v[k] = -y[k] * inv;
            e.v[i] = inv;
            etas_.push_back(std::move(e));
            if (static_cast<int>(etas_.size()) >= kRefactorPeriod) {
                if (!refactor(err)) return false;
            }
        }
        return true;
    }
};

// Phase-1 feasibility of  D v = d, v >= 0  (used for the Farkas resolution).
bool standard_form_feasible(const StandardLp& lp) {
    RevisedSimplex simplex(lp);
    const SimplexOutcome out = simplex.run();
    return out.status == SimplexOutcome::Status::Optimal;
}

}  // namespace

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "Optimal";
        case SolveStatus::Unbounded: return "Unbounded";
        case SolveStatus::Infeasible: return "Infeasible";
        case SolveStatus::NumericalFailure: return "NumericalFailure";
    }
    return "?";
}

void LpInstance::validate() const {
    if (m < 1 || n < 1) throw std::invalid_argument("LpInstance: m and n must be >= 1");
    if (static_cast<std::int64_t>(A.size()) != m * n ||
        static_cast<std::int64_t>(a.size()) != m ||
        static_cast<std::int64_t>(c.size()) != n)
        throw std::invalid_argument("LpInstance: inconsistent dimensions");
    for (double v : A)
        if (!std::isfinite(v)) throw std::invalid_argument("LpInstance: non-finite entry in A");
    for (double v : a)
        if (!std::isfinite(v)) throw std::invalid_argument("LpInstance: non-finite entry in a");
    for (double v : c)
        if (!std::isfinite(v)) throw std::invalid_argument("LpInstance: non-finite entry in c");
}

LpSolution solve_lp(const LpInstance& inst) {
    inst.validate();
    const int n = static_cast<int>(inst.n);
    const int m = static_cast<int>(inst.m);

    // Dual standard form: columns of D are the rows of A, which is exactly
    // the row-major buffer reinterpreted as col-major n x m.
    StandardLp dual;
    dual.nr = n;
    dual.nc = m;
    dual.D = inst.A.data();
    dual.d.resize(n);
    for (int i = 0; i < n; ++i) dual.d[i] = -inst.c[i];
    dual.cost = inst.a;

    RevisedSimplex simplex(dual);
    SimplexOutcome out = simplex.run();

    LpSolution sol;
    sol.iterations = out.iterations;
    switch (out.status) {
        case SimplexOutcome::Status::Failure:
            sol.status = SolveStatus::NumericalFailure;
            sol.diagnostic = out.diagnostic;
            return sol;
        case SimplexOutcome::Status::Unbounded: {
            // dual objective unbounded => the primal feasible set is empty;
            // impossible when a >= 0 (the origin is feasible), so a claim to
            // the contrary is a numerical artifact, not a result
            bool a_nonneg = true;
            for (double v : inst.a)
                if (v < 0.0) {
                    a_nonneg = false;
                    break;
                }
            if (a_nonneg) {
                sol.status = SolveStatus::NumericalFailure;
                sol.diagnostic =
                    "dual reported unbounded although a >= 0 keeps it bounded below";
            } else {
                sol.status = SolveStatus::Infeasible;
            }
            return sol;
        }
        case SimplexOutcome::Status::Infeasible: {
            // Dual infeasible: primal is unbounded iff it is feasible.  With
            // a >= 0 the origin is feasible; otherwise decide via Farkas:
            // exists mu >= 0 with A^T mu = 0, a^T mu = -1  <=>  primal empty.
            bool a_nonneg = true;
            for (double v : inst.a)
                if (v < 0.0) {
                    a_nonneg = false;
                    break;
                }
            if (a_nonneg) {
                sol.status = SolveStatus::Unbounded;
                return sol;
            }
            StandardLp farkas;
            farkas.nr = n + 1;
            farkas.nc = m;
            std::vector<double> D2(static_cast<std::size_t>(n + 1) * m);
            for (int j = 0; j < m; ++j) {
                const double* rowj = inst.row(j);
                double* col = &D2[static_cast<std::size_t>(j) * (n + 1)];
                std::copy(rowj, rowj + n, col);
                col[n] = inst.a[j];
            }
            farkas.D = D2.data();
            farkas.d.assign(n + 1, 0.0);
            farkas.d[n] = -1.0;
            farkas.cost.assign(m, 0.0);
            sol.status = standard_form_feasible(farkas) ? SolveStatus::Infeasible
                                                        : SolveStatus::Unbounded;
            return sol;
        }
        case SimplexOutcome::Status::Optimal:
            break;
    }

    sol.lambda_star = std::move(out.v);
    sol.x_star = std::move(out.w);  // solves A_B x = a_B for the final basis
    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += inst.c[j] * sol.x_star[j];
    sol.objective = obj;
    sol.status = SolveStatus::Optimal;

    const CertificateReport rep = check_certificates(inst, sol);
    if (!rep.ok) {
        std::ostringstream os;
        os << "certificate check failed: primal_violation=" << rep.primal_violation
           << " dual_residual=" << rep.dual_residual << " lambda_min=" << rep.lambda_min
           << " duality_gap=" << rep.duality_gap << " comp_slack=" << rep.comp_slack;
        sol.status = SolveStatus::NumericalFailure;
        sol.diagnostic = os.str();
    }
    return sol;
}

CertificateReport check_certificates(const LpInstance& inst, const LpSolution& sol) {
    CertificateReport rep;
    if (sol.status != SolveStatus::Optimal ||
        static_cast<std::int64_t>(sol.x_star.size()) != inst.n ||
        static_cast<std::int64_t>(sol.lambda_star.size()) != inst.m)
        return rep;
    const std::int64_t m = inst.m, n = inst.n;

    double a_inf = 0.0, c_norm2 = 0.0;
    for (double v : inst.a) a_inf = std::max(a_inf, std::fabs(v));
    for (double v : inst.c) c_norm2 += v * v;
    c_norm2 = std::sqrt(c_norm2);

    double slack_obj = 0.0;
    for (std::int64_t i = 0; i < m; ++i) {
        const double* rowi = inst.row(i);
        double ax = 0.0;
        for (std::int64_t j = 0; j < n; ++j) ax += rowi[j] * sol.x_star[j];
        rep.primal_violation = std::max(rep.primal_violation, ax - inst.a[i]);
        rep.comp_slack = std::max(rep.comp_slack, sol.lambda_star[i] * (inst.a[i] - ax));
        slack_obj += inst.a[i] * sol.lambda_star[i];
    }
    rep.lambda_min = 0.0;
    for (double v : sol.lambda_star) rep.lambda_min = std::min(rep.lambda_min, v);
    for (std::int64_t j = 0; j < n; ++j) {
        double atl = 0.0;
        for (std::int64_t i = 0; i < m; ++i) atl += inst.at(i, j) * sol.lambda_star[i];
        rep.dual_residual = std::max(rep.dual_residual, std::fabs(atl + inst.c[j]));
    }
    rep.duality_gap = std::fabs(sol.objective + slack_obj);

    rep.ok = rep.primal_violation <= 1e-8 * (1.0 + a_inf) &&
             rep.dual_residual <= 1e-8 * (c_norm2 > 0.0 ? c_norm2 : 1.0) &&
             rep.lambda_min >= -1e-12 &&
             rep.duality_gap <= 1e-7 * (1.0 + std::fabs(sol.objective)) &&
             rep.comp_slack <= 1e-7;
    return rep;
}

// ---------------------------------------------------------------------------
// Vertex enumeration oracle (independent of the simplex path).
// ---------------------------------------------------------------------------

namespace {

// Row-major Gaussian elimination with partial pivoting; returns false if the
// system is numerically singular.
bool ve_solve(int n, std::vector<double> M, std::vector<double> rhs,
              std::vector<double>& out) {
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::fabs(M[k * n + k]);
        for (int i = k + 1; i < n; ++i) {
            const double v = std::fabs(M[i * n + k]);
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best < 1e-12) return false;
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(M[k * n + j], M[p * n + j]);
            std::swap(rhs[k], rhs[p]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = M[i * n + k] / M[k * n + k];
            if (f == 0.0) continue;
            for (int j = k; j < n; ++j) M[i * n + j] -= f * M[k * n + j];
            rhs[i] -= f * rhs[k];
        }
    }
    out.assign(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = rhs[i];
        for (int j = i + 1; j < n; ++j) s -= M[i * n + j] * out[j];
        out[i] = s / M[i * n + i];
    }
    return true;
}

struct ReducedProblem {
    std::int64_t m = 0, nn = 0;
    std::vector<double> A;  // row-major m x nn
    std::vector<double> a;
    std::vector<double> c;
    double scale = 1.0;  // max |A| entry, for ray tolerances
};

// Enumerates vertices and extreme-ray directions of a full-column-rank
// reduced problem (pointed recession cone).
LpSolution enumerate_pointed(const ReducedProblem& rp, std::int64_t* subsets) {
    const int m = static_cast<int>(rp.m), nn = static_cast<int>(rp.nn);
    LpSolution sol;
    double a_inf = 0.0;
    for (double v : rp.a) a_inf = std::max(a_inf, std::fabs(v));
    const double feas_tol = 1e-9 * (1.0 + a_inf);
    double best_obj = kInf;
    std::vector<double> best_z;
    std::vector<int> best_active;

    // vertices: all nn-subsets, lexicographic
    std::vector<int> idx(nn);
    for (int i = 0; i < nn; ++i) idx[i] = i;
    std::vector<double> M, rhs, z;
    auto advance = [&](std::vector<int>& comb, int k, int mm) {
        int i = k - 1;
        while (i >= 0 && comb[i] == mm - k + i) --i;
        if (i < 0) return false;
        ++comb[i];
        for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
        return true;
    };
    bool any_feasible = false;
    if (nn <= m) {
        for (;;) {
            ++*subsets;
            M.assign(static_cast<std::size_t>(nn) * nn, 0.0);
            rhs.resize(nn);
            for (int k = 0; k < nn; ++k) {
                const double* rowk = &rp.A[static_cast<std::size_t>(idx[k]) * nn];
                std::copy(rowk, rowk + nn, M.begin() + static_cast<std::size_t>(k) * nn);
                rhs[k] = rp.a[idx[k]];
            }
            if (ve_solve(nn, M, rhs, z)) {
                bool feasible = true;
                for (int i = 0; i < m && feasible; ++i) {
                    const double* rowi = &rp.A[static_cast<std::size_t>(i) * nn];
                    double ax = 0.0;
                    for (int j = 0; j < nn; ++j) ax += rowi[j] * z[j];
                    if (ax > rp.a[i] + feas_tol) feasible = false;
                }
                if (feasible) {
                    any_feasible = true;
                    double obj = 0.0;
                    for (int j = 0; j < nn; ++j) obj += rp.c[j] * z[j];
                    if (obj < best_obj) {
                        best_obj = obj;
                        best_z = z;
                        best_active.assign(idx.begin(), idx.end());
                    }
                }
            }
            if (!advance(idx, nn, m)) break;
        }
    }

    // extreme rays: null directions of (nn-1)-subsets
    const double ray_tol = 1e-9 * (1.0 + rp.scale);
    double c_inf = 0.0;
    for (double v : rp.c) c_inf = std::max(c_inf, std::fabs(v));
    const double obj_tol = 1e-9 * (1.0 + c_inf);
    bool improving_ray = false;
    const int k = nn - 1;
    std::vector<int> ridx(k);
    for (int i = 0; i < k; ++i) ridx[i] = i;
    std::vector<std::vector<double>> ortho;
    for (;;) {
        ++*subsets;
        // orthonormalize the subset rows; need rank exactly nn-1
        ortho.clear();
        for (int s = 0; s < k; ++s) {
            std::vector<double> v(rp.A.begin() + static_cast<std::size_t>(ridx[s]) * nn,
                                  rp.A.begin() + static_cast<std::size_t>(ridx[s] + 1) * nn);
            for (const auto& u : ortho) {
                double dot = 0.0;
                for (int j = 0; j < nn; ++j) dot += u[j] * v[j];
                for (int j = 0; j < nn; ++j) v[j] -= dot * u[j];
            }
            double norm = 0.0;
            for (double t : v) norm += t * t;
            norm = std::sqrt(norm);
            if (norm > 1e-10 * (1.0 + rp.scale)) {
                for (double& t : v) t /= norm;
                ortho.push_back(std::move(v));
            }
        }
        if (static_cast<int>(ortho.size()) == k) {
            // null direction: largest residual of a coordinate axis
            std::vector<double> d, bestd;
            double best_norm = 0.0;
            for (int axis = 0; axis < nn; ++axis) {
                d.assign(nn, 0.0);
                d[axis] = 1.0;
                for (const auto& u : ortho) {
                    const double dot = u[axis];
                    for (int j = 0; j < nn; ++j) d[j] -= dot * u[j];
                }
                double norm = 0.0;
                for (double t : d) norm += t * t;
                norm = std::sqrt(norm);
                if (norm > best_norm) {
                    best_norm = norm;
                    bestd = d;
                }
            }
            if (best_norm > 1e-8) {
                for (double& t : bestd) t /= best_norm;
                for (int sgn = 0; sgn < 2; ++sgn) {
                    const double s = sgn == 0 ? 1.0 : -1.0;
                    bool in_cone = true;
                    for (int i = 0; i < m && in_cone; ++i) {
                        const double* rowi = &rp.A[static_cast<std::size_t>(i) * nn];
                        double ad = 0.0;
                        for (int j = 0; j < nn; ++j) ad += rowi[j] * bestd[j];
                        if (s * ad > ray_tol) in_cone = false;
                    }
                    if (!in_cone) continue;
                    double cd = 0.0;
                    for (int j = 0; j < nn; ++j) cd += rp.c[j] * bestd[j];
                    if (s * cd < -obj_tol) {
                        improving_ray = true;
                        break;
                    }
                }
            }
        }
        if (improving_ray) break;
        if (k == 0 || !advance(ridx, k, m)) break;
    }

    if (!any_feasible) {
        sol.status = SolveStatus::Infeasible;
        return sol;
    }
    if (improving_ray) {
        sol.status = SolveStatus::Unbounded;
        return sol;
    }
    sol.status = SolveStatus::Optimal;
    sol.objective = best_obj;
    sol.x_star = best_z;
    // dual multipliers on the active set: A_B^T lambda_B = -c
    sol.lambda_star.assign(m, 0.0);
    std::vector<double> Mt(static_cast<std::size_t>(nn) * nn), rhs2(nn), lam;
    for (int kk = 0; kk < nn; ++kk) {
        const double* rowk = &rp.A[static_cast<std::size_t>(best_active[kk]) * nn];
        for (int j = 0; j < nn; ++j) Mt[static_cast<std::size_t>(j) * nn + kk] = rowk[j];
    }
    for (int j = 0; j < nn; ++j) rhs2[j] = -rp.c[j];
    if (ve_solve(nn, Mt, rhs2, lam))
        for (int kk = 0; kk < nn; ++kk) sol.lambda_star[best_active[kk]] = lam[kk];
    return sol;
}

}  // namespace

LpSolution vertex_enumerate(const LpInstance& inst) {
    inst.validate();
    if (inst.n > 4 || inst.m > 16)
        throw std::invalid_argument("vertex_enumerate: guarded to n <= 4, m <= 16");
    const int m = static_cast<int>(inst.m), n = static_cast<int>(inst.n);

    double scale = 0.0;
    for (double v : inst.A) scale = std::max(scale, std::fabs(v));

    // Orthonormal basis of the row space of A (modified Gram-Schmidt).
    std::vector<std::vector<double>> V;
    for (int i = 0; i < m; ++i) {
        std::vector<double> v(inst.row(i), inst.row(i) + n);
        for (const auto& u : V) {
            double dot = 0.0;
            for (int j = 0; j < n; ++j) dot += u[j] * v[j];
            for (int j = 0; j < n; ++j) v[j] -= dot * u[j];
        }
        double norm = 0.0;
        for (double t : v) norm += t * t;
        norm = std::sqrt(norm);
        if (norm > 1e-10 * (1.0 + scale)) {
            for (double& t : v) t /= norm;
            V.push_back(std::move(v));
        }
        if (static_cast<int>(V.size()) == n) break;
    }
    const int r = static_cast<int>(V.size());

    // Objective component in the null space of A: an unbounded direction
    // whenever the feasible set is nonempty.
    std::vector<double> c_row(n, 0.0);
    for (const auto& u : V) {
        double dot = 0.0;
        for (int j = 0; j < n; ++j) dot += u[j] * inst.c[j];
        for (int j = 0; j < n; ++j) c_row[j] += dot * u[j];
    }
    double c_null_inf = 0.0, c_inf = 0.0;
    for (int j = 0; j < n; ++j) {
        c_null_inf = std::max(c_null_inf, std::fabs(inst.c[j] - c_row[j]));
        c_inf = std::max(c_inf, std::fabs(inst.c[j]));
    }
    const bool c_escapes = c_null_inf > 1e-10 * (1.0 + c_inf);

    LpSolution sol;
    sol.iterations = 0;
    if (r == 0) {
        // A == 0: constraints read 0 <= a
        for (double v : inst.a)
            if (v < -1e-12) {
                sol.status = SolveStatus::Infeasible;
                return sol;
            }
        if (c_escapes) {
            sol.status = SolveStatus::Unbounded;
            return sol;
        }
        sol.status = SolveStatus::Optimal;
        sol.objective = 0.0;
        sol.x_star.assign(n, 0.0);
        sol.lambda_star.assign(m, 0.0);
        return sol;
    }

    ReducedProblem rp;
    rp.m = m;
    rp.nn = r;
    rp.scale = scale;
    rp.A.resize(static_cast<std::size_t>(m) * r);
    rp.a = inst.a;
    rp.c.resize(r);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < r; ++k) {
            double dot = 0.0;
            for (int j = 0; j < n; ++j) dot += inst.at(i, j) * V[k][j];
            rp.A[static_cast<std::size_t>(i) * r + k] = dot;
        }
    for (int k = 0; k < r; ++k) {
        double dot = 0.0;
        for (int j = 0; j < n; ++j) dot += inst.c[j] * V[k][j];
        rp.c[k] = dot;
    }

    std::int64_t subsets = 0;
    LpSolution red = enumerate_pointed(rp, &subsets);
    red.iterations = subsets;
    if (red.status == SolveStatus::Optimal && r < n && c_escapes)
        red.status = SolveStatus::Unbounded;
    if (red.status != SolveStatus::Optimal) {
        red.x_star.clear();
        red.lambda_star.clear();
        red.objective = 0.0;
        return red;
    }
    // Map back to the ambient coordinates.
    sol = red;
    sol.x_star.assign(n, 0.0);
    for (int k = 0; k < r; ++k)
        for (int j = 0; j < n; ++j) sol.x_star[j] += red.x_star[k] * V[k][j];
    return sol;
}

// ---------------------------------------------------------------------------
// Instance serialization
// ---------------------------------------------------------------------------

void save_instance(const LpInstance& inst, std::ostream& os) {
    inst.validate();
    os << "rlp-lp 1\n" << inst.m << ' ' << inst.n << '\n';
    os << std::setprecision(17);
    for (std::int64_t i = 0; i < inst.m; ++i) {
        const double* rowi = inst.row(i);
        for (std::int64_t j = 0; j < inst.n; ++j) os << (j ? " " : "") << rowi[j];
        os << '\n';
    }
    for (std::int64_t i = 0; i < inst.m; ++i) os << (i ? " " : "") << inst.a[i];
    os << '\n';
    for (std::int64_t j = 0; j < inst.n; ++j) os << (j ? " " : "") << inst.c[j];
    os << '\n';
}

LpInstance load_instance(std::istream& is) {
    std::string magic;
    int version = 0;
    if (!(is >> magic >> version) || magic != "rlp-lp" || version != 1)
        throw std::runtime_error("load_instance: bad header (expected 'rlp-lp 1')");
    LpInstance inst;
    if (!(is >> inst.m >> inst.n) || inst.m < 1 || inst.n < 1)
        throw std::runtime_error("load_instance: bad dimensions");
    inst.A.resize(inst.m * inst.n);
    inst.a.resize(inst.m);
    inst.c.resize(inst.n);
    for (double& v : inst.A)
        if (!(is >> v)) throw std::runtime_error("load_instance: truncated matrix data");
    for (double& v : inst.a)
        if (!(is >> v)) throw std::runtime_error("load_instance: truncated rhs data");
    for (double& v : inst.c)
        if (!(is >> v)) throw std::runtime_error("load_instance: truncated objective data");
    inst.validate();
    return inst;
}

void save_instance_file(const LpInstance& inst, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_instance_file: cannot open " + path);
    save_instance(inst, os);
    if (!os) throw std::runtime_error("save_instance_file: write failed for " + path);
}

LpInstance load_instance_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_instance_file: cannot open " + path);
    return load_instance(is);
}

}  // namespace rlp::lp
