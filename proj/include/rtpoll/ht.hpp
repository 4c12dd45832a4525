#pragma once

#include <complex>
#include <utility>

#include "rtpoll/rng.hpp"
#include "rtpoll/talbot.hpp"

namespace rtpoll {

// Symmetric heavy-traffic regime: both queues share mu and the visit rate c.
struct HTSymmetric {
    double mu = 1.0;
    double c = 0.1;

    void validate() const;
};

// Rightward-opening parabola v^2 = opening * (u - vertex_u) in the complex
// plane, stored by vertex and opening coefficient.
struct ParabolaGeometry {
    double vertex_u = 0.0;
    double opening = 1.0;

    // Boundary point with imaginary part v.
    Cpx point(double v) const;
    // Closed convex region bounded by the parabola.
    bool contains(Cpx z, double tol = 0.0) const;
};

// Parabola traced by the s2-roots as s1 runs over (c/mu, inf):
// v^2 = (16c/mu) (u + 3c/mu).
ParabolaGeometry ht_parabola(const HTSymmetric& h);

// s1 + s2 + (mu/8c)(s1 - s2)^2
Cpx ht_kernel(const HTSymmetric& h, Cpx s1, Cpx s2);

// The two s2-solutions of ht_kernel(s1, s2) = 0; the first one vanishes at
// s1 = 0, the second sits at -8c/mu there.
std::pair<Cpx, Cpx> ht_kernel_roots(const HTSymmetric& h, Cpx s1);

// The roots coincide at s1 = c/mu.
double ht_branch_point(const HTSymmetric& h);

// Conformal map of the parabola interior onto the unit disk,
// psi(0) = 0 and psi(vertex) = 1.
Cpx conformal_psi(const HTSymmetric& h, Cpx z);

// Scaled total workload LST, (pi/4)(mu/c) s / cosh((pi/2) sqrt(mu s/c - 1)).
// Requires Re[s] > -3c/mu.
Cpx ht_total_lst(const HTSymmetric& h, Cpx s);

// Same function wrapped for numerical inversion; the evaluator analytically
// continues past the strip, up to the rightmost pole at -8c/mu.
LstEvaluator ht_total_lst_evaluator(const HTSymmetric& h);

// Partial product over n = 1..n_terms of a_n/(s + a_n), a_n = (c/mu)((2n+1)^2 - 1).
Cpx ht_total_lst_product(const HTSymmetric& h, Cpx s, int n_terms);

// Density of the scaled total workload at x > 0. Alternating exponential
// series for x >= 0.05 mu/c, numerical inversion below.
double ht_total_density(const HTSymmetric& h, double x);

// One draw of sum_{n<=n_terms} E_n/a_n with unit exponentials E_n.
double ht_total_sample(const HTSymmetric& h, Rng& rng, int n_terms);

// Mean shortfall of the truncated sampler: sum_{n>n_terms} 1/a_n.
double ht_total_sampler_bias(const HTSymmetric& h, int n_terms);

// Scaled joint workload LST; removable points (s_j = 0, kernel zeros) are
// evaluated by analytic limits or a symmetric diagonal shift.
Cpx ht_joint_lst(const HTSymmetric& h, Cpx s1, Cpx s2);

struct HTMoments {
    double mean1 = 0.0;
    double mean2 = 0.0;
    double second1 = 0.0;
    double second2 = 0.0;
    double cross = 0.0;
    double correlation = 0.0;
};

// Closed-form limit moments; correlation = 2 pi^2/3 - 7, parameter free.
HTMoments ht_moments(const HTSymmetric& h);

// Density of the first time reflected standard Brownian motion started at 0
// hits 1. Theta series on either side of the crossover x = 4/pi^2.
double biane_density_C(double x);

} // namespace rtpoll
