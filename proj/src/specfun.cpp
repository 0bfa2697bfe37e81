#include "rlp/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rlp::specfun {
namespace {

void require_finite(double z, const char* fn) {
    if (!std::isfinite(z))
        throw std::domain_error(std::string(fn) + ": non-finite argument");
}

// Rational Chebyshev approximations for erf/erfc/erfcx from W. J. Cody,
// "Rational Chebyshev approximation for the error function",
// Math. Comp. 23 (1969) 631-638, coefficients as distributed in netlib
// SPECFUN.  Worst-case relative error is a few ulps in double precision.

constexpr double kThresh = 0.46875;
constexpr double kErfcBig = 26.543;   // erfc underflows to 0 past this
constexpr double kErfcxHuge = 6.71e7; // 1 - 1/(2y^2) == 1 past this
constexpr double kErfcxNeg = -26.628; // erfcx overflows below this
constexpr double kInvSqrtPi = 0.56418958354775628695;

constexpr double kA[5] = {3.16112374387056560e0, 1.13864154151050156e2,
                          3.77485237685302021e2, 3.20937758913846947e3,
                          1.85777706184603153e-1};
constexpr double kB[4] = {2.36012909523441209e1, 2.44024637934444173e2,
                          1.28261652607737228e3, 2.84423683343917062e3};
constexpr double kC[9] = {5.64188496988670089e-1, 8.88314979438837594e0,
                          6.61191906371416295e1,  2.98635138197400131e2,
                          8.81952221241769090e2,  1.71204761263407058e3,
                          2.05107837782607147e3,  1.23033935479799725e3,
                          2.15311535474403846e-8};
constexpr double kD[8] = {1.57449261107098347e1, 1.17693950891312499e2,
                          5.37181101862009858e2, 1.62138957456669019e3,
                          3.29079923573345963e3, 4.36261909014324716e3,
                          3.43936767414372164e3, 1.23033935480374942e3};
constexpr double kP[6] = {3.05326634961232344e-1, 3.60344899949804439e-1,
                          1.25781726111229246e-1, 1.60837851487422766e-2,
                          6.58749161529837803e-4, 1.63153871373020978e-2};
constexpr double kQ[5] = {2.56852019228982242e0,  1.87295284992346047e0,
                          5.27905102951428412e-1, 6.05183413124413191e-2,
                          2.33520497626869185e-3};

// exp(-y*y) with the argument split so the reduction y*y is exact:
// hi = trunc(16y)/16 has a short mantissa, del = (y-hi)(y+hi) is small.
double exp_neg_square(double y) {
    const double hi = std::trunc(y * 16.0) / 16.0;
    const double del = (y - hi) * (y + hi);
    return std::exp(-hi * hi) * std::exp(-del);
}

// erf(x) for |x| <= 0.46875 (signed).
double erf_small(double x) {
    const double ysq = x * x;
    double num = kA[4] * ysq, den = ysq;
    for (int i = 0; i < 3; ++i) {
        num = (num + kA[i]) * ysq;
        den = (den + kB[i]) * ysq;
    }
    return x * (num + kA[3]) / (den + kB[3]);
}

// e^{y^2} erfc(y) for 0.46875 < y <= 4.
double erfcx_mid(double y) {
    double num = kC[8] * y, den = y;
    for (int i = 0; i < 7; ++i) {
        num = (num + kC[i]) * y;
        den = (den + kD[i]) * y;
    }
    return (num + kC[7]) / (den + kD[7]);
}

// e^{y^2} erfc(y) for y > 4.
double erfcx_large(double y) {
    if (y >= kErfcxHuge) return kInvSqrtPi / y;
    const double ysq = 1.0 / (y * y);
    double num = kP[5] * ysq, den = ysq;
    for (int i = 0; i < 4; ++i) {
        num = (num + kP[i]) * ysq;
        den = (den + kQ[i]) * ysq;
    }
    const double r = ysq * (num + kP[4]) / (den + kQ[4]);
    return (kInvSqrtPi - r) / y;
}

// e^{y^2} erfc(y) for y >= 0.
double erfcx_nonneg(double y) {
    if (y <= kThresh) return std::exp(y * y) * (1.0 - erf_small(y));
    if (y <= 4.0) return erfcx_mid(y);
    return erfcx_large(y);
}

}  // namespace

double erfc(double z) {
    require_finite(z, "erfc");
    const double y = std::fabs(z);
    if (y <= kThresh) return 1.0 - erf_small(z);
    double r = 0.0;
    if (y < kErfcBig) r = exp_neg_square(y) * erfcx_nonneg(y);
    return z < 0.0 ? 2.0 - r : r;
}

double erfcx(double z) {
    require_finite(z, "erfcx");
    if (z >= 0.0) return erfcx_nonneg(z);
    // erfcx(-y) = 2 e^{y^2} - erfcx(y), overflowing past y ~ 26.6
    if (z < kErfcxNeg) return std::numeric_limits<double>::infinity();
    const double y = -z;
    const double hi = std::trunc(y * 16.0) / 16.0;
    const double del = (y - hi) * (y + hi);
    const double e = std::exp(hi * hi) * std::exp(del);
    return 2.0 * e - erfcx_nonneg(y);
}

double gauss_pdf(double z) {
    require_finite(z, "gauss_pdf");
    constexpr double inv_sqrt_2pi = 0.39894228040143267794;
    return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

namespace {

// Implicit-QL diagonalization of a symmetric tridiagonal matrix, tracking the
// first row of the eigenvector matrix (Golub-Welsch).  d: diagonal, e:
// subdiagonal (e[n-1] ignored), z: workspace initialized to e_0.  On return d
// holds eigenvalues in ascending order and z the first eigenvector
// components, permuted consistently.
bool tridiagonal_ql(int n, std::vector<double>& d, std::vector<double>& e,
                    std::vector<double>& z) {
    if (n == 1) return true;
    e[n - 1] = 0.0;
    const double prec = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < n; ++l) {
        for (int iter = 0;; ++iter) {
            int m = l;
            while (m < n - 1 &&
                   std::fabs(e[m]) > prec * (std::fabs(d[m]) + std::fabs(d[m + 1])))
                ++m;
            if (m == l) break;
            if (iter >= 60) return false;
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {  // recover and retry the sweep
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    // insertion sort ascending, carrying z
    for (int i = 1; i < n; ++i) {
        const double dv = d[i], zv = z[i];
        int j = i - 1;
        while (j >= 0 && d[j] > dv) {
            d[j + 1] = d[j];
            z[j + 1] = z[j];
            --j;
        }
        d[j + 1] = dv;
        z[j + 1] = zv;
    }
    return true;
}

}  // namespace

QuadratureRule gauss_hermite_rule(int order) {
    if (order < 1 || order > 256)
        throw std::invalid_argument("gauss_hermite_rule: order must be in [1, 256]");

    // Golub-Welsch on the Jacobi matrix of the standard-normal weight: zero
    // diagonal, subdiagonal sqrt(k).  Eigenvalues are the nodes and the
    // squared first eigenvector components the weights (summing to 1 exactly
    // up to roundoff).
    const int n = order;
    std::vector<double> d(n, 0.0), e(n, 0.0), z(n, 0.0);
    for (int i = 0; i + 1 < n; ++i) e[i] = std::sqrt(i + 1.0);
    z[0] = 1.0;
    if (!tridiagonal_ql(n, d, e, z))
        throw std::runtime_error("gauss_hermite_rule: QL iteration failed");

    QuadratureRule rule;
    rule.order = n;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = d[i];
        rule.weights[i] = z[i] * z[i];
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;  // center node is exact
    for (int i = 0; i + 1 < n; ++i) {
        if (!(rule.nodes[i] < rule.nodes[i + 1]))
            throw std::runtime_error("gauss_hermite_rule: nodes not increasing");
    }
    double sum = 0.0;
    for (double wk : rule.weights) {
        if (!(wk > 0.0)) throw std::runtime_error("gauss_hermite_rule: nonpositive weight");
        sum += wk;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        throw std::runtime_error("gauss_hermite_rule: weights do not sum to 1");
    return rule;
}

}  // namespace rlp::specfun
