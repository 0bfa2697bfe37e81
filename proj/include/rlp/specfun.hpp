#pragma once

#include <vector>

namespace rlp::specfun {

// Gauss-Hermite rule rescaled for standard-normal expectations:
//   E[g(Z)] ~ sum_k weights[k] * g(nodes[k]),  Z ~ N(0,1).
// Exact for polynomials of degree <= 2*order - 1.
struct QuadratureRule {
    std::vector<double> nodes;    // strictly increasing
    std::vector<double> weights;  // positive, sum to 1
    int order = 0;

    // E[g(mean + stddev*Z)]
    template <class Fn>
    double expect(Fn&& g, double mean = 0.0, double stddev = 1.0) const {
        double s = 0.0;
        for (int k = 0; k < order; ++k) s += weights[k] * g(mean + stddev * nodes[k]);
        return s;
    }
};

// Complementary error function, relative error ~1e-15 over the representable
// range; underflows to 0 for z beyond ~26.5.
double erfc(double z);

// Scaled complement e^{z^2} erfc(z); stays O(1/z) for large positive z where
// plain erfc underflows.
double erfcx(double z);

// Standard normal density e^{-z^2/2} / sqrt(2 pi).
double gauss_pdf(double z);

// Nodes/weights via Newton iteration on the orthonormal Hermite recurrence.
// order in [1, 256].
QuadratureRule gauss_hermite_rule(int order);

}  // namespace rlp::specfun
