#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rtpoll/exact.hpp"
#include "rtpoll/ht.hpp"
#include "rtpoll/rng.hpp"

using namespace rtpoll;

namespace {
const HTSymmetric kH{1.0, 0.1};
constexpr double kPi = 3.14159265358979323846;

double simpson(const std::function<double(double)>& f, double lo, double hi, int n) {
    double h = (hi - lo) / n;
    double s = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}
} // namespace

TEST_CASE("ht parameter validation") {
    CHECK_NOTHROW(kH.validate());
    CHECK_THROWS_AS(HTSymmetric{-1.0, 0.1}.validate(), std::invalid_argument);
    CHECK_THROWS_AS(HTSymmetric{1.0, 0.0}.validate(), std::invalid_argument);
}

TEST_CASE("ht kernel value and symmetry") {
    CHECK(ht_kernel(kH, Cpx(1, 0), Cpx(2, 0)).real() == doctest::Approx(4.25).epsilon(1e-14));
    Cpx s1(0.3, -0.4), s2(-0.1, 0.2);
    CHECK(std::abs(ht_kernel(kH, s1, s2) - ht_kernel(kH, s2, s1)) < 1e-15);
}

TEST_CASE("ht kernel is the scaling limit of the exact kernel") {
    const double eps = 1e-4; // 1/2 - rho
    const SymmetricParams p{0.5 - eps, 1.0, 0.1};
    for (Cpx s1 : {Cpx(0.5, 0.0), Cpx(0.2, 0.7), Cpx(-0.1, -0.3)}) {
        for (Cpx s2 : {Cpx(1.0, 0.0), Cpx(0.4, -0.2)}) {
            Cpx lim = -kernel(p, eps * s1, eps * s2) / (2.0 * p.mu * p.c * eps * eps);
            Cpx want = ht_kernel(kH, s1, s2);
            CHECK(std::abs(lim - want) < 1e-5 * std::abs(want));
        }
    }
}

TEST_CASE("ht kernel roots") {
    auto [r1, r2] = ht_kernel_roots(kH, Cpx(0.0, 0.0));
    CHECK(std::abs(r1) < 1e-15);
    CHECK(r2.real() == doctest::Approx(-0.8).epsilon(1e-14));

    for (Cpx s1 : {Cpx(0.05, 0.0), Cpx(0.3, 0.2), Cpx(-0.2, -0.6), Cpx(2.0, 1.0)}) {
        auto [a, b] = ht_kernel_roots(kH, s1);
        CHECK(std::abs(ht_kernel(kH, s1, a)) < 1e-12 * std::max(1.0, std::norm(s1)));
        CHECK(std::abs(ht_kernel(kH, s1, b)) < 1e-12 * std::max(1.0, std::norm(s1)));
    }

    double bp = ht_branch_point(kH);
    CHECK(bp == doctest::Approx(0.1).epsilon(1e-14));
    auto [d1, d2] = ht_kernel_roots(kH, Cpx(bp, 0.0));
    CHECK(std::abs(d1 - d2) < 1e-12);
    CHECK(d1.real() == doctest::Approx(-0.3).epsilon(1e-12));
}

TEST_CASE("roots past the branch point trace the parabola") {
    ParabolaGeometry g = ht_parabola(kH);
    CHECK(g.vertex_u == doctest::Approx(-0.3).epsilon(1e-14));
    CHECK(g.opening == doctest::Approx(1.6).epsilon(1e-14));

    for (int i = 1; i <= 30; ++i) {
        double s1 = 0.1 + 0.25 * i;
        auto [r1, r2] = ht_kernel_roots(kH, Cpx(s1, 0.0));
        for (Cpx r : {r1, r2}) {
            double resid = r.imag() * r.imag() - g.opening * (r.real() - g.vertex_u);
            CHECK(std::abs(resid) < 1e-10 * std::max(1.0, std::norm(r)));
        }
    }

    CHECK(g.contains(Cpx(-0.2, 0.0)));
    CHECK(!g.contains(Cpx(-0.4, 0.0)));
    Cpx bpt = g.point(1.3);
    CHECK(bpt.imag() == doctest::Approx(1.3));
    CHECK(bpt.real() == doctest::Approx(g.vertex_u + 1.3 * 1.3 / g.opening).epsilon(1e-14));
}

TEST_CASE("conformal map normalization and boundary modulus") {
    CHECK(std::abs(conformal_psi(kH, Cpx(0.0, 0.0))) < 1e-12);
    CHECK(std::abs(conformal_psi(kH, Cpx(-0.3, 0.0)) - 1.0) < 1e-12);

    ParabolaGeometry g = ht_parabola(kH);
    for (int i = 0; i < 50; ++i) {
        double v = -5.0 + 10.0 * i / 49.0;
        CHECK(std::abs(std::abs(conformal_psi(kH, g.point(v))) - 1.0) < 1e-10);
    }

    Cpx w = conformal_psi(kH, Cpx(-0.1, 0.2));
    CHECK(w.real() == doctest::Approx(0.072048779559940638).epsilon(1e-12));
    CHECK(w.imag() == doctest::Approx(-0.48473953264028553).epsilon(1e-12));
    CHECK(conformal_psi(kH, Cpx(0.05, 0.0)).real() ==
          doctest::Approx(-0.091599517324143287).epsilon(1e-12));
}

TEST_CASE("scaled total workload transform") {
    CHECK(ht_total_lst(kH, Cpx(0.0, 0.0)) == Cpx(1.0, 0.0));
    CHECK(ht_total_lst(kH, Cpx(1.0, 0.0)).real() ==
          doctest::Approx(0.14109781885928465).epsilon(1e-13));
    CHECK(std::abs(ht_total_lst(kH, Cpx(1.0, 0.0)).imag()) < 1e-15);
    // below the branch point the continuation is real analytic
    CHECK(ht_total_lst(kH, Cpx(0.04, 0.0)).real() ==
          doctest::Approx(0.90611178132735652).epsilon(1e-13));
    Cpx v = ht_total_lst(kH, Cpx(0.3, 0.7));
    CHECK(v.real() == doctest::Approx(0.073968329252116715).epsilon(1e-12));
    CHECK(v.imag() == doctest::Approx(-0.39885306471351461).epsilon(1e-12));

    // monotone decreasing along the positive reals
    double prev = 1.0;
    for (double s : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        double cur = ht_total_lst(kH, Cpx(s, 0.0)).real();
        CHECK(cur < prev);
        CHECK(cur > 0.0);
        prev = cur;
    }

    // derivative at zero gives the total mean mu/(4c)
    double h = 1e-3 * kH.c / kH.mu;
    auto at = [&](double s) { return ht_total_lst(kH, Cpx(s, 0.0)).real(); };
    double d1 = (at(h) - at(-h)) / (2 * h);
    double d2 = (at(h / 2) - at(-h / 2)) / h;
    double mean = -(4.0 * d2 - d1) / 3.0;
    CHECK(mean == doctest::Approx(kH.mu / (4 * kH.c)).epsilon(1e-8));

    LstEvaluator ev = ht_total_lst_evaluator(kH);
    CHECK(ev.abscissa == doctest::Approx(-0.8).epsilon(1e-14));
    CHECK(std::abs(ev.eval(Cpx(0.7, 0.1)) - ht_total_lst(kH, Cpx(0.7, 0.1))) < 1e-15);
}

TEST_CASE("product form of the total transform") {
    // a_n = (c/mu)((2n+1)^2 - 1); with one factor the value at s = a_1 is 1/2
    CHECK(ht_total_lst_product(kH, Cpx(0.8, 0.0), 1).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(ht_total_lst_product(kH, Cpx(0.0, 0.0), 100) == Cpx(1.0, 0.0));

    double closed = ht_total_lst(kH, Cpx(1.0, 0.0)).real();
    double e10 = std::abs(ht_total_lst_product(kH, Cpx(1.0, 0.0), 10).real() - closed);
    double e100 = std::abs(ht_total_lst_product(kH, Cpx(1.0, 0.0), 100).real() - closed);
    double e1000 = std::abs(ht_total_lst_product(kH, Cpx(1.0, 0.0), 1000).real() - closed);
    CHECK(e100 < e10);
    CHECK(e1000 < e100);

    // truncation error law: ~= F(x) (e^{x/(4(N+1))} - 1), x = mu s / c
    double e4 = std::abs(ht_total_lst_product(kH, Cpx(1.0, 0.0), 10000).real() - closed);
    double predicted = closed * (std::exp(10.0 / (4.0 * 10001.0)) - 1.0);
    CHECK(e4 == doctest::Approx(predicted).epsilon(0.05));
    CHECK(e4 > 2e-5);
    CHECK(e4 < 6e-5);
}

TEST_CASE("density series") {
    CHECK(ht_total_density(kH, 5.0) == doctest::Approx(0.043883804053166995).epsilon(1e-12));
    CHECK(ht_total_density(kH, 20.0) == doctest::Approx(2.7008441932620477e-7).epsilon(1e-9));
    CHECK(ht_total_density(kH, 0.6) == doctest::Approx(0.025403679009263934).epsilon(1e-10));

    for (int i = 1; i <= 50; ++i) CHECK(ht_total_density(kH, 0.4 * i) >= 0.0);

    double total = simpson([&](double x) { return ht_total_density(kH, x); }, 1e-6, 120.0, 24000);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("sampler matches the mean with its documented bias") {
    const int n_terms = 2000;
    double bias = ht_total_sampler_bias(kH, n_terms);
    CHECK(bias == doctest::Approx(kH.mu / (4 * kH.c * (n_terms + 1))).epsilon(1e-14));

    Rng rng(2026);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        double d = ht_total_sample(kH, rng, n_terms);
        CHECK(d >= 0.0);
        sum += d;
        sq += d * d;
    }
    double mean = sum / n;
    double sd = std::sqrt((sq / n - mean * mean) / n);
    double want = kH.mu / (4 * kH.c) - bias;
    CHECK(std::abs(mean - want) < 4.0 * sd);

    Rng r1(99), r2(99);
    CHECK(ht_total_sample(kH, r1, 50) == ht_total_sample(kH, r2, 50));
}

TEST_CASE("joint transform values") {
    CHECK(ht_joint_lst(kH, Cpx(0, 0), Cpx(0, 0)) == Cpx(1.0, 0.0));
    // marginals are exponential with rate 8c/mu
    for (double s : {0.1, 0.4, 2.0}) {
        Cpx m1 = ht_joint_lst(kH, Cpx(s, 0.0), Cpx(0.0, 0.0));
        CHECK(m1.real() == doctest::Approx(1.0 / (1.0 + kH.mu * s / (8 * kH.c))).epsilon(1e-13));
        Cpx m2 = ht_joint_lst(kH, Cpx(0.0, 0.0), Cpx(s, 0.0));
        CHECK(std::abs(m1 - m2) < 1e-15);
    }

    Cpx j1 = ht_joint_lst(kH, Cpx(0.5, 0.0), Cpx(0.25, 0.1));
    CHECK(j1.real() == doctest::Approx(0.43598800131559158).epsilon(1e-12));
    CHECK(j1.imag() == doctest::Approx(-0.051272211117018062).epsilon(1e-12));
    CHECK(ht_joint_lst(kH, Cpx(0.2, 0.0), Cpx(0.8, 0.0)).real() ==
          doctest::Approx(0.37254638314743231).epsilon(1e-12));
}

TEST_CASE("joint transform diagonal equals the total transform") {
    for (Cpx s : {Cpx(0.3, 0.0), Cpx(1.0, 0.5), Cpx(0.05, -0.2), Cpx(1e-9, 0.0)}) {
        Cpx diag = ht_joint_lst(kH, s, s);
        Cpx tot = ht_total_lst(kH, s);
        CHECK(std::abs(diag - tot) < 1e-12 * std::max(1.0, std::abs(tot)));
    }
}

TEST_CASE("joint transform is finite across kernel zeros") {
    // pick s2 on the root locus so the kernel vanishes
    Cpx s1(0.5, 0.0);
    auto [r1, r2] = ht_kernel_roots(kH, s1);
    for (Cpx r : {r1, r2}) {
        Cpx at = ht_joint_lst(kH, s1, r);
        CHECK(std::isfinite(at.real()));
        CHECK(std::isfinite(at.imag()));
        Cpx near = ht_joint_lst(kH, s1, r * (1.0 + 1e-5) + Cpx(1e-7, 0.0));
        CHECK(std::abs(at - near) < 1e-3 * std::max(1.0, std::abs(at)));
    }
}

TEST_CASE("limit moments") {
    HTMoments m = ht_moments(kH);
    CHECK(m.mean1 == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(m.mean2 == m.mean1);
    CHECK(m.second1 == doctest::Approx(3.125).epsilon(1e-14));
    CHECK(m.cross == doctest::Approx(3.125 * (kPi * kPi - 9.0) / 3.0).epsilon(1e-14));
    CHECK(m.correlation == doctest::Approx(2.0 * kPi * kPi / 3.0 - 7.0).epsilon(1e-14));

    // self-consistency of the closed forms
    double var = m.second1 - m.mean1 * m.mean1;
    double cov = m.cross - m.mean1 * m.mean2;
    CHECK(cov / var == doctest::Approx(m.correlation).epsilon(1e-13));
}

TEST_CASE("mixed derivative of the joint transform reproduces the cross moment") {
    HTMoments m = ht_moments(kH);
    auto L = [&](double a, double b) { return ht_joint_lst(kH, Cpx(a, 0.0), Cpx(b, 0.0)).real(); };
    auto mixed = [&](double h) {
        return (L(h, h) - L(h, -h) - L(-h, h) + L(-h, -h)) / (4.0 * h * h);
    };
    double h = 2e-3 * kH.c / kH.mu;
    double refined = (4.0 * mixed(h / 2) - mixed(h)) / 3.0;
    CHECK(refined == doctest::Approx(m.cross).epsilon(1e-6));
}

TEST_CASE("hitting-density values") {
    CHECK(biane_density_C(0.1) == doctest::Approx(0.17000733205040683).epsilon(1e-13));
    CHECK(biane_density_C(0.25) == doctest::Approx(0.86385517256863204).epsilon(1e-13));
    CHECK(biane_density_C(0.405285) == doctest::Approx(0.90041533036777682).epsilon(1e-13));
    CHECK(biane_density_C(0.5) == doctest::Approx(0.82937947668621758).epsilon(1e-13));
    CHECK(biane_density_C(1.0) == doctest::Approx(0.45736522563391993).epsilon(1e-13));
    CHECK(biane_density_C(2.0) == doctest::Approx(0.13321133818243176).epsilon(1e-13));
    CHECK(biane_density_C(4.0) == doctest::Approx(0.011296983958069409).epsilon(1e-13));
}

TEST_CASE("hitting-density structure") {
    // the two series branches agree at the crossover
    double x0 = 4.0 / (kPi * kPi);
    CHECK(std::abs(biane_density_C(x0 - 1e-9) - biane_density_C(x0 + 1e-9)) < 1e-8);

    // reciprocal identity f(x) = (2/(pi x))^{3/2} f(4/(pi^2 x))
    for (double x : {0.3, 0.7, 1.5, 3.0}) {
        double lhs = biane_density_C(x);
        double rhs = std::pow(2.0 / (kPi * x), 1.5) * biane_density_C(4.0 / (kPi * kPi * x));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }

    double total = simpson([](double x) { return biane_density_C(x); }, 1e-9, 30.0, 30000);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));

    // Laplace transform 1/cosh(sqrt(2s))
    for (double s : {0.5, 1.0, 2.0}) {
        double lt = simpson([s](double x) { return biane_density_C(x) * std::exp(-s * x); }, 1e-9,
                            30.0, 30000);
        CHECK(lt == doctest::Approx(1.0 / std::cosh(std::sqrt(2.0 * s))).epsilon(1e-6));
    }
}
