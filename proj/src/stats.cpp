#include "rtpoll/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rtpoll {

Ecdf::Ecdf(std::vector<double> samples) : values_(std::move(samples)) {
    std::sort(values_.begin(), values_.end());
}

double Ecdf::eval(double x) const {
    if (values_.empty()) return 0.0;
    auto it = std::upper_bound(values_.begin(), values_.end(), x);
    return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) throw std::invalid_argument("sample_variance: need at least 2 values");
    double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

double inv_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("inv_normal_cdf: p outside (0,1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double q, r, x;
    if (p < plow) {
        q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        q = p - 0.5;
        r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    return x;
}

std::pair<double, double> batch_ci(const std::vector<double>& batch_values, double level) {
    if (batch_values.size() < 2) throw std::invalid_argument("batch_ci: need at least 2 batches");
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("batch_ci: level outside (0,1)");
    double m = mean_of(batch_values);
    double s = std::sqrt(sample_variance(batch_values) / static_cast<double>(batch_values.size()));
    double z = inv_normal_cdf(0.5 * (1.0 + level));
    return {m - z * s, m + z * s};
}

double ks_distance(const Ecdf& e, const std::function<double(double)>& model_cdf) {
    if (e.empty()) throw std::invalid_argument("ks_distance: empty ECDF");
    const auto& v = e.values();
    const double n = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double f = model_cdf(v[i]);
        double hi = (static_cast<double>(i) + 1.0) / n - f; // jump top vs model
        double lo = f - static_cast<double>(i) / n;         // model vs jump bottom
        d = std::max(d, std::max(hi, lo));
    }
    return d;
}

std::vector<double> batch_mean_covariance(const std::vector<std::vector<double>>& batch_vectors) {
    const std::size_t B = batch_vectors.size();
    if (B < 2) throw std::invalid_argument("batch_mean_covariance: need at least 2 batches");
    const std::size_t dim = batch_vectors.front().size();
    std::vector<double> mean(dim, 0.0);
    for (const auto& bv : batch_vectors)
        for (std::size_t k = 0; k < dim; ++k) mean[k] += bv[k];
    for (auto& m : mean) m /= static_cast<double>(B);
    std::vector<double> cov(dim * dim, 0.0);
    for (const auto& bv : batch_vectors)
        for (std::size_t j = 0; j < dim; ++j)
            for (std::size_t k = 0; k < dim; ++k)
                cov[j * dim + k] += (bv[j] - mean[j]) * (bv[k] - mean[k]);
    const double denom = static_cast<double>(B - 1) * static_cast<double>(B);
    for (auto& cmat : cov) cmat /= denom;
    return cov;
}

double delta_se(const std::vector<double>& grad, const std::vector<double>& cov) {
    const std::size_t dim = grad.size();
    double q = 0.0;
    for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t k = 0; k < dim; ++k)
            q += grad[j] * cov[j * dim + k] * grad[k];
    return q > 0.0 ? std::sqrt(q) : 0.0;
}

double moments_correlation(const MomentSet& m) {
    double v1 = m.q1 - m.m1 * m.m1;
    double v2 = m.q2 - m.m2 * m.m2;
    if (!(v1 > 0.0) || !(v2 > 0.0)) return 0.0;
    return (m.x - m.m1 * m.m2) / std::sqrt(v1 * v2);
}

std::vector<double> correlation_gradient(const MomentSet& m) {
    double v1 = m.q1 - m.m1 * m.m1;
    double v2 = m.q2 - m.m2 * m.m2;
    if (!(v1 > 0.0) || !(v2 > 0.0)) return std::vector<double>(5, 0.0);
    double d = std::sqrt(v1 * v2);
    double g = (m.x - m.m1 * m.m2) / d;
    return {
        -m.m2 / d + g * m.m1 / v1,
        -m.m1 / d + g * m.m2 / v2,
        -0.5 * g / v1,
        -0.5 * g / v2,
        1.0 / d,
    };
}

} // namespace rtpoll
