#include "rlp/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "rlp/specfun.hpp"

namespace rlp::theory {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_positive_x(double x, const char* fn) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::invalid_argument(std::string(fn) + ": x must be positive and finite");
}

// T(u) = E[max(g - u, 0)^2].  Three regimes keep the relative error ~1e-12
// over the whole representable range:
//   u <= 4   closed form 0.5*(1+u^2)*erfc(u/sqrt(2)) - u*pdf(u); the
//            cancellation amplification u^6 eps/4 is still ~2e-13 here
//   4 < u <= 8   scaled bracket e^{-u^2/2} [0.5*(1+u^2) erfcx(u/sqrt(2)) -
//            u/sqrt(2 pi)]; erfcx is flat in its argument, so no rounding
//            amplification, and the bracket cancels only ~u^4 eps/2
//   u > 8    expansion from T(u) = pdf(u) int_0^inf s^2 e^{-u s - s^2/2} ds:
//            T(u) = pdf(u)/u^3 sum_k (-1)^k (2k+2)!/(2^k k!) u^{-2k},
//            truncated at the smallest term (< 2e-14 relative at u = 8)
double tail_second_moment(double u) {
    constexpr double kInvSqrt2Pi = 0.39894228040143267794;
    if (u <= 4.0) {
        return 0.5 * (1.0 + u * u) * specfun::erfc(u * kInvSqrt2) -
               u * specfun::gauss_pdf(u);
    }
    if (u <= 8.0) {
        const double bracket =
            0.5 * (1.0 + u * u) * specfun::erfcx(u * kInvSqrt2) - u * kInvSqrt2Pi;
        return std::exp(-0.5 * u * u) * bracket;
    }
    const double inv_u2 = 1.0 / (u * u);
    double term = 2.0, sum = 2.0;
    for (int k = 1; k <= 48; ++k) {
        const double next = term * (-(2.0 * k + 2.0) * (2.0 * k + 1.0) / (2.0 * k)) * inv_u2;
        if (std::fabs(next) >= std::fabs(term)) break;  // asymptotic tail
        term = next;
        sum += term;
        if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
    }
    return specfun::gauss_pdf(u) * sum / (u * u * u);
}

const specfun::QuadratureRule& cached_rule(int order) {
    thread_local std::map<int, specfun::QuadratureRule> cache;
    auto it = cache.find(order);
    if (it == cache.end())
        it = cache.emplace(order, specfun::gauss_hermite_rule(order)).first;
    return it->second;
}

// (1/n) sum_i T(a_i/x), i.e. f1(x)^2 / x^2.
double normalized_load(double x, const RhsModel& rhs, double alpha) {
    return std::visit(
        [&](const auto& law) -> double {
            using L = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<L, ConstantRhs>) {
                return alpha * tail_second_moment(law.value / x);
            } else if constexpr (std::is_same_v<L, VectorRhs>) {
                double s = 0.0;
                for (double ai : law.values) s += tail_second_moment(ai / x);
                return s / static_cast<double>(law.n);
            } else if constexpr (std::is_same_v<L, DiscreteRhs>) {
                double s = 0.0;
                for (std::size_t j = 0; j < law.atoms.size(); ++j)
                    s += law.probs[j] * tail_second_moment(law.atoms[j] / x);
                return alpha * s;
            } else {
                const auto& rule = cached_rule(law.quad_order);
                double s = 0.0;
                for (int k = 0; k < rule.order; ++k)
                    s += rule.weights[k] *
                         tail_second_moment((law.mean + law.stddev * rule.nodes[k]) / x);
                return alpha * s;
            }
        },
        rhs.law);
}

void check_alpha(const RhsModel& rhs, double alpha, const char* fn) {
    if (!rhs.is_vector() && (!(alpha > 0.0) || !std::isfinite(alpha)))
        throw std::invalid_argument(std::string(fn) + ": alpha must be positive and finite");
}

}  // namespace

RhsModel RhsModel::constant(double value) {
    if (!std::isfinite(value))
        throw std::invalid_argument("RhsModel::constant: value must be finite");
    return RhsModel{ConstantRhs{value}};
}

RhsModel RhsModel::vector(std::vector<double> values, std::int64_t n) {
    if (values.empty())
        throw std::invalid_argument("RhsModel::vector: values must be nonempty");
    if (n < 1) throw std::invalid_argument("RhsModel::vector: n must be >= 1");
    for (double v : values)
        if (!std::isfinite(v))
            throw std::invalid_argument("RhsModel::vector: entries must be finite");
    return RhsModel{VectorRhs{std::move(values), n}};
}

RhsModel RhsModel::atoms(std::vector<double> atoms, std::vector<double> probs) {
    if (atoms.empty() || atoms.size() != probs.size())
        throw std::invalid_argument("RhsModel::atoms: atoms/probs size mismatch");
    double sum = 0.0;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        if (!std::isfinite(atoms[j]))
            throw std::invalid_argument("RhsModel::atoms: atoms must be finite");
        if (!(probs[j] >= 0.0))
            throw std::invalid_argument("RhsModel::atoms: probabilities must be >= 0");
        sum += probs[j];
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("RhsModel::atoms: probabilities must sum to 1");
    return RhsModel{DiscreteRhs{std::move(atoms), std::move(probs)}};
}

RhsModel RhsModel::gaussian(double mean, double stddev, int quad_order) {
    if (!std::isfinite(mean) || !std::isfinite(stddev) || stddev < 0.0)
        throw std::invalid_argument("RhsModel::gaussian: invalid mean/stddev");
    if (quad_order < 1 || quad_order > 256)
        throw std::invalid_argument("RhsModel::gaussian: quad_order must be in [1, 256]");
    return RhsModel{GaussianRhs{mean, stddev, quad_order}};
}

double RhsModel::model_alpha() const {
    const auto* v = std::get_if<VectorRhs>(&law);
    if (v == nullptr)
        throw std::logic_error("RhsModel::model_alpha: only defined for the Vector variant");
    return static_cast<double>(v->values.size()) / static_cast<double>(v->n);
}

double per_constraint_term(double x, double a_i) {
    require_positive_x(x, "per_constraint_term");
    if (!std::isfinite(a_i))
        throw std::invalid_argument("per_constraint_term: a_i must be finite");
    return tail_second_moment(a_i / x);
}

double f1(double x, const RhsModel& rhs, double alpha) {
    require_positive_x(x, "f1");
    check_alpha(rhs, alpha, "f1");
    return x * std::sqrt(normalized_load(x, rhs, alpha));
}

double q(double x, const RhsModel& rhs, double alpha) {
    require_positive_x(x, "q");
    check_alpha(rhs, alpha, "q");
    return x * x * (1.0 - normalized_load(x, rhs, alpha));
}

double lambda_hat(double x, const RhsModel& rhs, double alpha) {
    const double qv = q(x, rhs, alpha);
    if (!(qv > 0.0)) {
        std::ostringstream os;
        os << "lambda_hat: dual scalar diverges, q(" << x << ") = " << qv << " <= 0";
        throw std::domain_error(os.str());
    }
    const double f = f1(x, rhs, alpha);
    if (f == 0.0) return 0.0;
    return f / std::sqrt(qv);
}

TheoryResult solve_xi(const RhsModel& rhs, double alpha, double tol) {
    check_alpha(rhs, alpha, "solve_xi");
    if (!(tol > 0.0) || tol > 1e-4)
        throw std::invalid_argument("solve_xi: tol must be in (0, 1e-4]");
    const double alpha_eff = rhs.is_vector() ? rhs.model_alpha() : alpha;

    // Scan q on a 64-point log grid over [1e-6, 1e6]: locates the growth
    // region, supplies the unimodality check, and brackets the upper root.
    constexpr int kGrid = 64;
    constexpr double kLo = 1e-6, kHi = 1e6;
    double xs[kGrid], qs[kGrid];
    const double step = std::log(kHi / kLo) / (kGrid - 1);
    for (int i = 0; i < kGrid; ++i) {
        xs[i] = kLo * std::exp(step * i);
        qs[i] = q(xs[i], rhs, alpha);
    }
    int best = 0;
    for (int i = 1; i < kGrid; ++i)
        if (qs[i] > qs[best]) best = i;

    if (!(qs[best] > 0.0)) {
        std::ostringstream os;
        os << "solve_xi: no feasible scale, q(x) <= 0 for all probed x in [1e-6, 1e6]"
           << " (max q = " << qs[best] << " at x = " << xs[best] << ")";
        throw SolveError(SolveError::Kind::NoFeasibleScale, os.str());
    }

    // Reject multiple separated near-best local maxima (unimodality guard):
    // qualifying points above (1 - 1e-6) * best must form one contiguous run.
    {
        const double cut = (1.0 - 1e-6) * qs[best];
        int components = 0;
        bool in_run = false;
        for (int i = 0; i < kGrid; ++i) {
            const bool qual = qs[i] > cut;
            if (qual && !in_run) ++components;
            in_run = qual;
        }
        if (components > 1) {
            std::ostringstream os;
            os << "solve_xi: q has " << components
               << " separated near-optimal maxima on the probe grid; refusing to pick one";
            throw SolveError(SolveError::Kind::NotUnimodal, os.str());
        }
    }

    if (best == kGrid - 1) {
        std::ostringstream os;
        os << "solve_xi: q is still growing at x = " << xs[best]
           << " (q = " << qs[best] << "); no interior stationary point to bracket";
        throw SolveError(SolveError::Kind::NoStationaryPoint, os.str());
    }

    // Golden-section maximization of q on the grid bracket around the peak.
    double lo = (best > 0) ? xs[best - 1] : xs[0] * 0.1;
    double hi = xs[best + 1];
    {
        const double gr = 0.61803398874989484820;
        double c = hi - gr * (hi - lo);
        double d = lo + gr * (hi - lo);
        double qc = q(c, rhs, alpha);
        double qd = q(d, rhs, alpha);
        int guard = 0;
        while (hi - lo > tol && ++guard < 400) {
            if (qc > qd) {
                hi = d;
                d = c;
                qd = qc;
                c = hi - gr * (hi - lo);
                qc = q(c, rhs, alpha);
            } else {
                lo = c;
                c = d;
                qc = qd;
                d = lo + gr * (hi - lo);
                qd = q(d, rhs, alpha);
            }
        }
    }
    const double x_star = 0.5 * (lo + hi);
    const double q_star = q(x_star, rhs, alpha);
    if (!(q_star > 0.0)) {
        std::ostringstream os;
        os << "solve_xi: scalar search converged to q(" << x_star << ") = " << q_star
           << " <= 0";
        throw SolveError(SolveError::Kind::NoStationaryPoint, os.str());
    }

    // Upper feasibility boundary: first sign change past the peak, bisected
    // to machine resolution; +inf when q stays positive on the whole range.
    double x_max = std::numeric_limits<double>::infinity();
    for (int i = best; i + 1 < kGrid; ++i) {
        if (qs[i] > 0.0 && qs[i + 1] <= 0.0) {
            double a = xs[i], b = xs[i + 1];
            for (int it = 0; it < 200 && (b - a) > 1e-15 * b; ++it) {
                const double mid = 0.5 * (a + b);
                if (q(mid, rhs, alpha) > 0.0)
                    a = mid;
                else
                    b = mid;
            }
            x_max = 0.5 * (a + b);
            break;
        }
    }

    TheoryResult res;
    res.alpha = alpha_eff;
    res.x_star = x_star;
    res.xi_opt = std::sqrt(q_star);
    res.lambda_hat = f1(x_star, rhs, alpha) / res.xi_opt;
    res.x_max = x_max;
    return res;
}

double xi_asymptote(double alpha) {
    if (!(alpha > 1.0) || !std::isfinite(alpha))
        throw std::invalid_argument("xi_asymptote: alpha must be > 1 and finite");
    return 1.0 / std::sqrt(2.0 * std::log(alpha));
}

double mean_width(const RhsModel& rhs, double alpha, double tol) {
    return 2.0 * solve_xi(rhs, alpha, tol).xi_opt;
}

}  // namespace rlp::theory
