#pragma once

#include <complex>
#include <utility>

#include "rtpoll/params.hpp"

namespace rtpoll {

using Cpx = std::complex<double>;

// Coefficients of the stationary marginal workload LST (1 + a s)/(1 + b s)
// for queue j. The law is a mixture of an atom at zero (weight a/b) and an
// exponential with rate 1/b, so the mean is b - a.
double marginal_a(const AsymmetricParams& p, int j);
double marginal_b(const AsymmetricParams& p, int j);

Cpx marginal_lst(const AsymmetricParams& p, int j, Cpx s);
double marginal_mean(const AsymmetricParams& p, int j); // b - a
double marginal_atom(const AsymmetricParams& p, int j); // P(V_j = 0)

// Rates of the two exponentials in the convolution identity
// V_j + Exp(theta1) =d= Exp(theta2): theta1 = 1/a, theta2 = 1/b.
double marginal_theta1(const AsymmetricParams& p, int j);
double marginal_theta2(const AsymmetricParams& p, int j);

// Mean of the limit law of (c_{3-j}/(c1+c2) - rho_j) V_j as the margin
// shrinks to zero: c1 c2 mu_j / (c1+c2)^3.
double ht_marginal_limit_mean(const AsymmetricParams& p, int j);

// Bilinear form and kernel of the symmetric-case functional equation.
Cpx f_bilinear(const SymmetricParams& p, Cpx s1, Cpx s2);
Cpx kernel(const SymmetricParams& p, Cpx s1, Cpx s2);

// The two roots in s2 of kernel(s1, s2) = 0, "-" root first. Near a double
// root the midpoint is returned twice.
std::pair<Cpx, Cpx> kernel_roots_s2(const SymmetricParams& p, Cpx s1);

// Discriminant of the root formula: s1^2 - (c/mu) s1/(1/2 - rho) + c^2/mu^2.
Cpx kernel_discriminant(const SymmetricParams& p, Cpx s1);

// The two real branch points where the discriminant vanishes, ascending.
std::pair<double, double> branch_points(const SymmetricParams& p);

struct EllipseGeometry {
    double kappa;
    double tau;  // < 0
    double xi;   // > 0
    double r_sq; // > 0
    double u_min, u_max; // horizontal extent (tau -+ r xi)/kappa
};

// Constants of the ellipse traced by the complex kernel roots u + iv:
// v^2 + (u kappa - tau)^2 / xi^2 = r^2.
EllipseGeometry ellipse_geometry(const SymmetricParams& p);

// The real s1 paired with a root abscissa u on the ellipse:
// s1 = (c(mu-2lambda) + 2 lambda u (mu-lambda)) / xi.
double ellipse_s1_from_u(const SymmetricParams& p, double u);

// Real and imaginary parts of -i f(s2, s1)/(c s2) at s2 = u + iv on the
// ellipse, with s1 recovered from u. Throws if s2 = 0.
std::pair<double, double> boundary_ab(const SymmetricParams& p, double u, double v);

} // namespace rtpoll
