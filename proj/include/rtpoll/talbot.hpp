#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace rtpoll {

using Cpx = std::complex<double>;

// A Laplace transform of a probability law on [0, inf), wrapped together with
// the rightmost real part at which it may be evaluated. eval must be analytic
// for Re(s) > abscissa.
struct LstEvaluator {
    std::function<Cpx(Cpx)> eval;
    double abscissa = 0.0;
};

// Wraps fn after checking that fn(0) is 1 to within 1e-8 (total mass one).
// Throws std::invalid_argument otherwise.
LstEvaluator make_lst_evaluator(std::function<Cpx(Cpx)> fn, double abscissa = 0.0);

// Fixed-Talbot inversion of f at x > 0 with m nodes. Returns the density value.
double talbot_invert_pdf(const LstEvaluator& f, double x, int m = 48);

// Inverts f(s)/s at x > 0 and clamps the result to [0, 1].
double talbot_invert_cdf(const LstEvaluator& f, double x, int m = 48);

// CDF evaluated on an increasing grid. monotone_ok is set to false when some
// successive pair decreases by more than 1e-6.
struct CdfGrid {
    std::vector<double> x;
    std::vector<double> cdf;
    bool monotone_ok = true;
};

CdfGrid talbot_cdf_grid(const LstEvaluator& f, const std::vector<double>& xs, int m = 48);

} // namespace rtpoll
