#include "rtpoll/ht.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rtpoll {

namespace {

constexpr double kPi = 3.14159265358979323846;
const Cpx kI(0.0, 1.0);

// z / sinh(z) with the removable point at 0 filled in.
Cpx sinh_ratio(Cpx z) {
    if (z == Cpx(0.0, 0.0)) return Cpx(1.0, 0.0);
    return z / std::sinh(z);
}

// Rewrites cosh((pi/2) sqrt(x-1)) = i sinh(m) with m = (pi/2) x / (sqrt(x-1) + i).
// The denominator never vanishes because the principal root cannot equal -i.
Cpx cosh_shift_arg(Cpx x) {
    Cpx w = std::sqrt(x - 1.0);
    return (0.5 * kPi) * x / (w + kI);
}

// (pi/4)(mu/c) s / cosh((pi/2) sqrt(mu s/c - 1)) in a form exact at s = 0:
// (1/2)(1 - i sqrt(x-1)) * m/sinh(m), x = mu s/c.
Cpx total_lst_formula(const HTSymmetric& h, Cpx s) {
    Cpx x = (h.mu / h.c) * s;
    Cpx w = std::sqrt(x - 1.0);
    Cpx m = (0.5 * kPi) * x / (w + kI);
    return 0.5 * (1.0 - kI * w) * sinh_ratio(m);
}

// s / cosh((pi/2) sqrt(mu s/c - 1)), stable near s = 0, as a single factor.
Cpx s_over_cosh(const HTSymmetric& h, Cpx s) {
    if (s == Cpx(0.0, 0.0)) return Cpx(4.0 * h.c / (kPi * h.mu), 0.0);
    Cpx m = cosh_shift_arg((h.mu / h.c) * s);
    return s * (-kI) / std::sinh(m);
}

double a_coef(const HTSymmetric& h, int n) {
    double k = 2.0 * n + 1.0;
    return (h.c / h.mu) * (k * k - 1.0);
}

} // namespace

void HTSymmetric::validate() const {
    if (!(std::isfinite(mu) && mu > 0.0)) throw std::invalid_argument("HTSymmetric: mu must be positive");
    if (!(std::isfinite(c) && c > 0.0)) throw std::invalid_argument("HTSymmetric: c must be positive");
}

Cpx ParabolaGeometry::point(double v) const {
    return Cpx(vertex_u + v * v / opening, v);
}

bool ParabolaGeometry::contains(Cpx z, double tol) const {
    return z.imag() * z.imag() <= opening * (z.real() - vertex_u) + tol;
}

ParabolaGeometry ht_parabola(const HTSymmetric& h) {
    h.validate();
    return ParabolaGeometry{-3.0 * h.c / h.mu, 16.0 * h.c / h.mu};
}

Cpx ht_kernel(const HTSymmetric& h, Cpx s1, Cpx s2) {
    h.validate();
    Cpx d = s1 - s2;
    return s1 + s2 + (h.mu / (8.0 * h.c)) * d * d;
}

std::pair<Cpx, Cpx> ht_kernel_roots(const HTSymmetric& h, Cpx s1) {
    h.validate();
    double q = h.mu / (4.0 * h.c);
    Cpx rad = std::sqrt(Cpx(1.0, 0.0) - (h.mu / h.c) * s1);
    return {(-1.0 + q * s1 + rad) / q, (-1.0 + q * s1 - rad) / q};
}

double ht_branch_point(const HTSymmetric& h) {
    h.validate();
    return h.c / h.mu;
}

Cpx conformal_psi(const HTSymmetric& h, Cpx z) {
    h.validate();
    const double rt2 = std::sqrt(2.0);
    Cpx q = std::cosh(0.25 * kPi * std::sqrt((h.mu / h.c) * z - 1.0));
    Cpx den = 1.0 + rt2 * q;
    if (std::abs(den) == 0.0) throw std::domain_error("conformal_psi: denominator vanishes");
    return (1.0 - rt2 * q) / den;
}

Cpx ht_total_lst(const HTSymmetric& h, Cpx s) {
    h.validate();
    if (s.real() <= -3.0 * h.c / h.mu)
        throw std::domain_error("ht_total_lst: Re[s] must exceed -3c/mu");
    if (std::abs(s) < 1e-6 * h.c / h.mu) return ht_total_lst_product(h, s, 10000);
    return total_lst_formula(h, s);
}

LstEvaluator ht_total_lst_evaluator(const HTSymmetric& h) {
    h.validate();
    HTSymmetric copy = h;
    return make_lst_evaluator([copy](Cpx s) { return total_lst_formula(copy, s); },
                              -8.0 * copy.c / copy.mu);
}

Cpx ht_total_lst_product(const HTSymmetric& h, Cpx s, int n_terms) {
    h.validate();
    if (n_terms < 1) throw std::invalid_argument("ht_total_lst_product: n_terms must be >= 1");
    Cpx prod(1.0, 0.0);
    for (int n = 1; n <= n_terms; ++n) {
        double a = a_coef(h, n);
        Cpx den = s + a;
        if (den == Cpx(0.0, 0.0))
            throw std::domain_error("ht_total_lst_product: s hits a pole of the product");
        prod *= a / den;
    }
    return prod;
}

double ht_total_density(const HTSymmetric& h, double x) {
    h.validate();
    if (!(x > 0.0)) throw std::invalid_argument("ht_total_density: x must be positive");
    if (x < 0.05 * h.mu / h.c) {
        LstEvaluator f = ht_total_lst_evaluator(h);
        return talbot_invert_pdf(f, x, 48);
    }
    double sum = 0.0;
    for (int n = 1; n <= 100000; ++n) {
        double a = a_coef(h, n);
        double term = (n % 2 == 1 ? 1.0 : -1.0) * (2.0 * n + 1.0) * a * std::exp(-a * x);
        sum += term;
        if (n >= 2 && std::abs(term) < 1e-14 * (std::abs(sum) + 1e-30)) break;
    }
    return sum;
}

double ht_total_sample(const HTSymmetric& h, Rng& rng, int n_terms) {
    h.validate();
    if (n_terms < 1) throw std::invalid_argument("ht_total_sample: n_terms must be >= 1");
    double sum = 0.0;
    for (int n = 1; n <= n_terms; ++n) sum += rng.exponential(1.0) / a_coef(h, n);
    return sum;
}

double ht_total_sampler_bias(const HTSymmetric& h, int n_terms) {
    h.validate();
    if (n_terms < 1) throw std::invalid_argument("ht_total_sampler_bias: n_terms must be >= 1");
    // sum over n > N of 1/a_n telescopes: (mu/4c) sum 1/(n(n+1)) = (mu/4c)/(N+1)
    return h.mu / (4.0 * h.c * (n_terms + 1.0));
}

namespace {

Cpx joint_lst_direct(const HTSymmetric& h, Cpx s1, Cpx s2) {
    Cpx k = ht_kernel(h, s1, s2);
    Cpx t1 = s_over_cosh(h, s1);
    Cpx t2 = s_over_cosh(h, s2);
    return (0.25 * kPi) * (h.mu / h.c) * (s2 * t1 + s1 * t2) / k;
}

} // namespace

Cpx ht_joint_lst(const HTSymmetric& h, Cpx s1, Cpx s2) {
    h.validate();
    double vertex = -3.0 * h.c / h.mu;
    if (s1.real() <= vertex || s2.real() <= vertex)
        throw std::domain_error("ht_joint_lst: Re[s_j] must exceed -3c/mu");
    bool z1 = (s1 == Cpx(0.0, 0.0)), z2 = (s2 == Cpx(0.0, 0.0));
    if (z1 && z2) return Cpx(1.0, 0.0);
    if (z1) return 1.0 / (1.0 + h.mu * s2 / (8.0 * h.c));
    if (z2) return 1.0 / (1.0 + h.mu * s1 / (8.0 * h.c));

    Cpx k = ht_kernel(h, s1, s2);
    double kscale = std::abs(s1) + std::abs(s2) + (h.mu / (8.0 * h.c)) * std::norm(s1 - s2);
    if (std::abs(k) <= 1e-9 * std::max(kscale, 1e-30)) {
        // removable kernel zero: the kernel moves at exact rate 2 along the
        // diagonal, so a symmetric shift stays well conditioned
        double delta = 1e-7 * std::max({h.c / h.mu, std::abs(s1), std::abs(s2)});
        return 0.5 * (joint_lst_direct(h, s1 + delta, s2 + delta) +
                      joint_lst_direct(h, s1 - delta, s2 - delta));
    }
    return joint_lst_direct(h, s1, s2);
}

HTMoments ht_moments(const HTSymmetric& h) {
    h.validate();
    double g = h.mu / h.c;
    HTMoments m;
    m.mean1 = m.mean2 = g / 8.0;
    m.second1 = m.second2 = g * g / 32.0;
    m.cross = (g * g / 32.0) * (kPi * kPi - 9.0) / 3.0;
    m.correlation = 2.0 * kPi * kPi / 3.0 - 7.0;
    return m;
}

double biane_density_C(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("biane_density_C: x must be positive");
    const double crossover = 4.0 / (kPi * kPi);
    double sum = 0.0;
    if (x > crossover) {
        for (int n = 1; n <= 10000; ++n) {
            double half = n - 0.5;
            double term = (n % 2 == 1 ? 1.0 : -1.0) * half * std::exp(-half * half * kPi * kPi * x / 2.0);
            sum += term;
            if (n >= 2 && std::abs(term) < 1e-14 * (std::abs(sum) + 1e-30)) break;
        }
        return kPi * sum;
    }
    for (int n = 1; n <= 10000; ++n) {
        double odd = 2.0 * n - 1.0;
        double term = (n % 2 == 1 ? 1.0 : -1.0) * odd * std::exp(-odd * odd / (2.0 * x));
        sum += term;
        if (n >= 2 && std::abs(term) < 1e-14 * (std::abs(sum) + 1e-30)) break;
    }
    return std::sqrt(2.0 / (kPi * x * x * x)) * sum;
}

} // namespace rtpoll
