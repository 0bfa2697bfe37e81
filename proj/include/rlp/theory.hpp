#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rlp::theory {

// Right-hand-side models for the constraint vector a.

// a = value * 1 (every component equal).
struct ConstantRhs {
    double value = 1.0;
};

// Explicit finite instance: a = values (m components), normalized by n.
// The effective constraint ratio is values.size() / n.
struct VectorRhs {
    std::vector<double> values;
    std::int64_t n = 0;
};

// iid components drawn from a discrete law sum_j probs[j] * delta(atoms[j]).
struct DiscreteRhs {
    std::vector<double> atoms;
    std::vector<double> probs;
};

// iid components a_i ~ N(mean, stddev^2); expectations via Gauss-Hermite.
struct GaussianRhs {
    double mean = 0.0;
    double stddev = 1.0;
    int quad_order = 64;
};

struct RhsModel {
    std::variant<ConstantRhs, VectorRhs, DiscreteRhs, GaussianRhs> law;

    static RhsModel constant(double value);
    static RhsModel vector(std::vector<double> values, std::int64_t n);
    static RhsModel atoms(std::vector<double> atoms, std::vector<double> probs);
    static RhsModel gaussian(double mean, double stddev, int quad_order = 64);

    bool is_vector() const { return std::holds_alternative<VectorRhs>(law); }
    // For the Vector variant, the ratio m/n implied by the model itself.
    double model_alpha() const;
};

// Output of the scalar extremization: the concentration point xi_opt of the
// normalized objective magnitude together with the extremizing scale x_star,
// the optimal dual norm scale lambda_hat, and the upper boundary x_max of the
// domain where x^2 > f1(x)^2 (+infinity when no boundary exists on the
// search range).
struct TheoryResult {
    double xi_opt = 0.0;
    double x_star = 0.0;
    double lambda_hat = 0.0;
    double x_max = 0.0;
    double alpha = 0.0;
};

class SolveError : public std::runtime_error {
public:
    enum class Kind { NoFeasibleScale, NoStationaryPoint, NotUnimodal };
    SolveError(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// T(a_i/x) = E[max(g - a_i/x, 0)^2] for standard normal g:
//   0.5*((a_i/x)^2 + 1)*erfc(a_i/(x sqrt(2))) - (a_i/x)*pdf(a_i/x).
// Evaluated through the scaled complement for large ratios, keeping relative
// accuracy ~1e-12 up to a_i/x ~ 40 (where the value underflows).
double per_constraint_term(double x, double a_i);

// Aggregate f1(x; a) = x * sqrt((1/n) sum_i T(a_i/x)); for Constant and
// distribution models the normalized sum is alpha * E[T(a_i/x)].  Degree-1
// homogeneous: f1(g*x, g*a, alpha) = g * f1(x, a, alpha).  For the Vector
// variant alpha is ignored in favor of the model's own m/n.
double f1(double x, const RhsModel& rhs, double alpha);

// q(x) = x^2 - f1(x)^2; negative q signals an infeasible scale.
double q(double x, const RhsModel& rhs, double alpha);

// Optimal dual norm scale f1 / sqrt(q); requires q(x) > 0.
double lambda_hat(double x, const RhsModel& rhs, double alpha);

// Locates the interior stationary point x_star maximizing q on (0, x_max)
// and returns xi_opt = sqrt(q(x_star)).  x_max is found by bisection on
// q = 0 past the growth region (geometric bracket within [1e-6, 1e6]).
// tol is the absolute x-resolution of the scalar search, in (0, 1e-4].
TheoryResult solve_xi(const RhsModel& rhs, double alpha, double tol = 1e-10);

// Large-alpha limit curve 1/sqrt(2 log alpha); requires alpha > 1.
double xi_asymptote(double alpha);

// 2 * xi_opt: the concentration point of the mean width of {x | Ax <= a}.
double mean_width(const RhsModel& rhs, double alpha, double tol = 1e-10);

}  // namespace rlp::theory
