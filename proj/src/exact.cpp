#include "rtpoll/exact.hpp"

#include <cmath>
#include <stdexcept>

namespace rtpoll {

namespace {

struct MarginalRates {
    double lambda, mu, c_own, c_other;
};

MarginalRates rates_for(const AsymmetricParams& p, int j) {
    p.validate();
    if (j == 1) return {p.lambda1, p.mu1, p.c1, p.c2};
    if (j == 2) return {p.lambda2, p.mu2, p.c2, p.c1};
    throw std::invalid_argument("queue index must be 1 or 2");
}

double b_denominator(const MarginalRates& r) {
    double rho = r.lambda / r.mu;
    return r.c_other * (1.0 - (r.c_own / r.c_other) * rho / (1.0 - rho));
}

} // namespace

double marginal_a(const AsymmetricParams& p, int j) {
    auto r = rates_for(p, j);
    return (r.lambda / r.mu) * r.mu / (p.c1 + p.c2);
}

double marginal_b(const AsymmetricParams& p, int j) {
    auto r = rates_for(p, j);
    double den = b_denominator(r);
    if (den <= 0.0) throw std::domain_error("marginal_b: unstable parameters");
    return (r.lambda / r.mu) * r.mu / den;
}

Cpx marginal_lst(const AsymmetricParams& p, int j, Cpx s) {
    double a = marginal_a(p, j);
    double b = marginal_b(p, j);
    return (1.0 + a * s) / (1.0 + b * s);
}

double marginal_mean(const AsymmetricParams& p, int j) {
    return marginal_b(p, j) - marginal_a(p, j);
}

double marginal_atom(const AsymmetricParams& p, int j) {
    auto r = rates_for(p, j);
    // zero input: the queue stays empty, the stationary law is a point mass
    if (r.lambda == 0.0) return 1.0;
    return marginal_a(p, j) / marginal_b(p, j);
}

double marginal_theta1(const AsymmetricParams& p, int j) {
    return 1.0 / marginal_a(p, j);
}

double marginal_theta2(const AsymmetricParams& p, int j) {
    return 1.0 / marginal_b(p, j);
}

double ht_marginal_limit_mean(const AsymmetricParams& p, int j) {
    auto r = rates_for(p, j);
    double total = p.c1 + p.c2;
    return p.c1 * p.c2 * r.mu / (total * total * total);
}

Cpx f_bilinear(const SymmetricParams& p, Cpx s1, Cpx s2) {
    p.validate();
    return s1 * p.lambda + p.c + s2 * (p.lambda - p.mu);
}

Cpx kernel(const SymmetricParams& p, Cpx s1, Cpx s2) {
    return f_bilinear(p, s1, s2) * f_bilinear(p, s2, s1) - p.c * p.c;
}

Cpx kernel_discriminant(const SymmetricParams& p, Cpx s1) {
    p.validate();
    double g = p.c / p.mu;
    double half_gap = 0.5 - p.rho();
    if (half_gap == 0.0)
        throw std::domain_error("kernel_discriminant: undefined at lambda = mu/2");
    return s1 * s1 - s1 * (g / half_gap) + g * g;
}

std::pair<Cpx, Cpx> kernel_roots_s2(const SymmetricParams& p, Cpx s1) {
    p.validate();
    const double lam = p.lambda, mu = p.mu, c = p.c;
    if (lam >= mu) throw std::domain_error("kernel_roots_s2: requires lambda < mu");
    if (lam == 0.0) throw std::domain_error("kernel_roots_s2: quadratic degenerates at lambda = 0");
    if (lam == 0.5 * mu) return {s1, s1}; // kernel collapses to -lambda^2 (s2-s1)^2
    const Cpx lin = -c * (2.0 * lam - mu) - ((lam - mu) * (lam - mu) + lam * lam) * s1;
    const double denom = 2.0 * lam * (lam - mu);
    const Cpx disc = kernel_discriminant(p, s1);
    const double scale = std::norm(s1) + (c / mu) * std::abs(s1) + (c / mu) * (c / mu);
    if (std::abs(disc) < 1e-14 * scale) {
        Cpx mid = lin / denom;
        return {mid, mid};
    }
    const Cpx spread = (mu - 2.0 * lam) * mu * std::sqrt(disc);
    return {(lin - spread) / denom, (lin + spread) / denom};
}

std::pair<double, double> branch_points(const SymmetricParams& p) {
    p.validate();
    double half_gap = 0.5 - p.rho();
    if (!(half_gap > 0.0)) throw std::domain_error("branch_points: requires lambda < mu/2");
    double g = p.c / p.mu;
    double root = std::sqrt(1.0 - 4.0 * half_gap * half_gap);
    double lo = g * (1.0 - root) / half_gap;
    double hi = g * (1.0 + root) / half_gap;
    return {lo, hi};
}

EllipseGeometry ellipse_geometry(const SymmetricParams& p) {
    p.validate();
    const double lam = p.lambda, mu = p.mu, c = p.c;
    if (!(lam > 0.0 && lam < 0.5 * mu))
        throw std::domain_error("ellipse_geometry: requires 0 < lambda < mu/2");
    EllipseGeometry g{};
    g.kappa = std::sqrt((3.0 * lam * lam - 3.0 * lam * mu + mu * mu) *
                        (lam * lam - lam * mu + mu * mu));
    g.tau = -c * mu * (mu - 2.0 * lam);
    g.xi = 2.0 * lam * lam - 2.0 * lam * mu + mu * mu;
    const double q = lam * lam - lam * mu + mu * mu;
    const double w = lam * (mu - lam) * (3.0 * lam * lam - 3.0 * lam * mu + mu * mu) +
                     (2.0 * lam - mu) * (2.0 * lam - mu);
    g.r_sq = c * c * q * w / (lam * (mu - lam) * g.xi * g.xi);
    const double r = std::sqrt(g.r_sq);
    g.u_min = (g.tau - r * g.xi) / g.kappa;
    g.u_max = (g.tau + r * g.xi) / g.kappa;
    return g;
}

double ellipse_s1_from_u(const SymmetricParams& p, double u) {
    p.validate();
    const double lam = p.lambda, mu = p.mu, c = p.c;
    const double xi = 2.0 * lam * lam - 2.0 * lam * mu + mu * mu;
    return (c * (mu - 2.0 * lam) + 2.0 * lam * u * (mu - lam)) / xi;
}

std::pair<double, double> boundary_ab(const SymmetricParams& p, double u, double v) {
    p.validate();
    const double lam = p.lambda, mu = p.mu, c = p.c;
    const double mod2 = u * u + v * v;
    if (mod2 == 0.0) throw std::domain_error("boundary_ab: s2 = 0");
    const double xi = 2.0 * lam * lam - 2.0 * lam * mu + mu * mu;
    const double d = c * xi * mod2;
    const double a = lam * v * (2.0 * u * (mu - lam) * (mu - lam) - c * mu) / d;
    const double b = -lam * (mu * u * (c + 2.0 * lam * u - mu * u) + v * v * xi) / d;
    return {a, b};
}

} // namespace rtpoll
