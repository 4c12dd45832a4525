#include "rtpoll/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rtpoll {

namespace {

void require_finite_positive(double x, const char* what) {
    if (!std::isfinite(x) || x <= 0.0)
        throw std::invalid_argument(std::string(what) + " must be positive and finite");
}

void require_finite_nonnegative(double x, const char* what) {
    if (!std::isfinite(x) || x < 0.0)
        throw std::invalid_argument(std::string(what) + " must be nonnegative and finite");
}

} // namespace

void AsymmetricParams::validate() const {
    require_finite_nonnegative(lambda1, "lambda1");
    require_finite_nonnegative(lambda2, "lambda2");
    require_finite_positive(mu1, "mu1");
    require_finite_positive(mu2, "mu2");
    require_finite_positive(c1, "c1");
    require_finite_positive(c2, "c2");
}

bool AsymmetricParams::is_stable() const {
    auto [m1, m2] = stability_margins(*this);
    return m1 > 0.0 && m2 > 0.0;
}

void SymmetricParams::validate() const {
    require_finite_nonnegative(lambda, "lambda");
    require_finite_positive(mu, "mu");
    require_finite_positive(c, "c");
}

std::pair<double, double> stability_margins(const AsymmetricParams& p) {
    p.validate();
    double total = p.c1 + p.c2;
    return {p.c2 / total - p.rho1(), p.c1 / total - p.rho2()};
}

std::pair<double, double> switch_epoch_update(double v1, double v2, double t1, double t2,
                                              const AsymmetricParams& p) {
    p.validate();
    if (v1 < 0.0 || v2 < 0.0 || t1 < 0.0 || t2 < 0.0)
        throw std::invalid_argument("switch_epoch_update: negative input");
    double w1 = std::max(0.0, v1 + (p.lambda1 - p.mu1) * t1);
    double w2 = v2 + p.lambda2 * t1;
    w2 = std::max(0.0, w2 + (p.lambda2 - p.mu2) * t2);
    w1 = w1 + p.lambda1 * t2;
    return {w1, w2};
}

} // namespace rtpoll
