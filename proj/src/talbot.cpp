#include "rtpoll/talbot.hpp"

#include <cmath>
#include <stdexcept>

namespace rtpoll {

LstEvaluator make_lst_evaluator(std::function<Cpx(Cpx)> fn, double abscissa) {
    if (!fn) throw std::invalid_argument("make_lst_evaluator: empty function");
    Cpx at0 = fn(Cpx(0.0, 0.0));
    if (std::abs(at0 - Cpx(1.0, 0.0)) > 1e-8)
        throw std::invalid_argument("make_lst_evaluator: value at 0 is not 1");
    return LstEvaluator{std::move(fn), abscissa};
}

namespace {

// One fixed-Talbot pass over the deformed contour s_k = r*theta*(cot(theta) + i),
// theta = k*pi/m. The k = 0 node sits at s = r on the real axis.
double talbot_sum(const std::function<Cpx(Cpx)>& fn, double x, int m) {
    if (!(x > 0.0)) throw std::invalid_argument("talbot: x must be positive");
    if (m < 8) throw std::invalid_argument("talbot: need at least 8 nodes");
    const double pi = 3.14159265358979323846;
    const double r = 2.0 * m / (5.0 * x);

    double sum = 0.5 * std::exp(r * x) * fn(Cpx(r, 0.0)).real();
    double comp = 0.0; // Kahan carry
    for (int k = 1; k < m; ++k) {
        double theta = k * pi / m;
        double cot = std::cos(theta) / std::sin(theta);
        Cpx s(r * theta * cot, r * theta);
        double sigma = theta + (theta * cot - 1.0) * cot;
        Cpx term = std::exp(s * x) * fn(s) * Cpx(1.0, sigma);
        double y = term.real() - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum * r / m;
}

} // namespace

double talbot_invert_pdf(const LstEvaluator& f, double x, int m) {
    if (f.abscissa >= 2.0 * m / (5.0 * x))
        throw std::domain_error("talbot_invert_pdf: contour would cross a singularity");
    return talbot_sum(f.eval, x, m);
}

double talbot_invert_cdf(const LstEvaluator& f, double x, int m) {
    if (f.abscissa >= 0.0 && f.abscissa >= 2.0 * m / (5.0 * x))
        throw std::domain_error("talbot_invert_cdf: contour would cross a singularity");
    auto integrated = [&f](Cpx s) { return f.eval(s) / s; };
    double v = talbot_sum(integrated, x, m);
    if (v < 0.0) return 0.0;
    if (v > 1.0) return 1.0;
    return v;
}

CdfGrid talbot_cdf_grid(const LstEvaluator& f, const std::vector<double>& xs, int m) {
    CdfGrid g;
    g.x = xs;
    g.cdf.reserve(xs.size());
    for (double x : xs) g.cdf.push_back(talbot_invert_cdf(f, x, m));
    for (size_t i = 1; i < g.cdf.size(); ++i) {
        if (g.cdf[i] < g.cdf[i - 1] - 1e-6) {
            g.monotone_ok = false;
            break;
        }
    }
    return g;
}

} // namespace rtpoll
