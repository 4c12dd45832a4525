#include "rtpoll/levy.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

#include "rtpoll/sim.hpp"

namespace rtpoll {

namespace {

constexpr double kPi = 3.14159265358979323846;
const Cpx kI(0.0, 1.0);

Cpx sinh_ratio(Cpx z) {
    if (z == Cpx(0.0, 0.0)) return Cpx(1.0, 0.0);
    return z / std::sinh(z);
}

void check_index(int j, const char* where) {
    if (j != 1 && j != 2) throw std::invalid_argument(std::string(where) + ": index must be 1 or 2");
}

struct PairMoments {
    double mean1 = 0.0, mean2 = 0.0;
    double var1 = 0.0, var2 = 0.0, cov = 0.0;
    double se_mean1 = 0.0, se_mean2 = 0.0;
    double se_var1 = 0.0, se_var2 = 0.0, se_cov = 0.0;
};

PairMoments sample_pair_moments(const std::function<std::pair<double, double>(Rng&)>& sampler,
                                std::uint64_t seed, std::size_t n, const char* where) {
    Rng rng(seed);
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto [a, b] = sampler(rng);
        if (!(a >= 0.0) || !(b >= 0.0))
            throw std::invalid_argument(std::string(where) + ": sampler produced a negative draw");
        xs[i] = a;
        ys[i] = b;
    }
    PairMoments m;
    for (std::size_t i = 0; i < n; ++i) {
        m.mean1 += xs[i];
        m.mean2 += ys[i];
    }
    m.mean1 /= n;
    m.mean2 /= n;
    double s4x = 0.0, s4y = 0.0, sxy2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = xs[i] - m.mean1, dy = ys[i] - m.mean2;
        m.var1 += dx * dx;
        m.var2 += dy * dy;
        m.cov += dx * dy;
        s4x += dx * dx * dx * dx;
        s4y += dy * dy * dy * dy;
        sxy2 += dx * dy * dx * dy;
    }
    m.var1 /= n;
    m.var2 /= n;
    m.cov /= n;
    s4x /= n;
    s4y /= n;
    sxy2 /= n;
    m.se_mean1 = std::sqrt(std::max(0.0, m.var1) / n);
    m.se_mean2 = std::sqrt(std::max(0.0, m.var2) / n);
    m.se_var1 = std::sqrt(std::max(0.0, s4x - m.var1 * m.var1) / n);
    m.se_var2 = std::sqrt(std::max(0.0, s4y - m.var2 * m.var2) / n);
    m.se_cov = std::sqrt(std::max(0.0, sxy2 - m.cov * m.cov) / n);
    return m;
}

void check_close(double declared, double sampled, double se, const char* what, const char* where) {
    double tol = 4.0 * se + 1e-9 * (1.0 + std::abs(declared));
    if (std::abs(declared - sampled) > tol)
        throw std::invalid_argument(std::string(where) + ": declared " + what + " " +
                                    std::to_string(declared) + " disagrees with sampler estimate " +
                                    std::to_string(sampled));
}

} // namespace

SwitchLaw make_switch_law(double mean1, double mean2, double var1, double var2, double cov,
                          std::function<std::pair<double, double>(Rng&)> sampler) {
    const char* where = "make_switch_law";
    if (!(std::isfinite(mean1) && mean1 > 0.0) || !(std::isfinite(mean2) && mean2 > 0.0))
        throw std::invalid_argument("make_switch_law: means must be positive");
    if (!(var1 >= 0.0) || !(var2 >= 0.0))
        throw std::invalid_argument("make_switch_law: variances must be nonnegative");
    if (!(cov * cov <= var1 * var2 * (1.0 + 1e-12) + 1e-300))
        throw std::invalid_argument("make_switch_law: covariance violates Cauchy-Schwarz");
    if (!sampler) throw std::invalid_argument("make_switch_law: sampler is empty");

    PairMoments m = sample_pair_moments(sampler, 0x5EEDC0DEull, 200000, where);
    check_close(mean1, m.mean1, m.se_mean1, "mean1", where);
    check_close(mean2, m.mean2, m.se_mean2, "mean2", where);
    check_close(var1, m.var1, m.se_var1, "var1", where);
    check_close(var2, m.var2, m.se_var2, "var2", where);
    check_close(cov, m.cov, m.se_cov, "cov", where);

    SwitchLaw sw;
    sw.mean1 = mean1;
    sw.mean2 = mean2;
    sw.var1 = var1;
    sw.var2 = var2;
    sw.cov = cov;
    sw.sampler = std::move(sampler);
    return sw;
}

SwitchLaw exponential_switch_law(double c1, double c2) {
    if (!(std::isfinite(c1) && c1 > 0.0) || !(std::isfinite(c2) && c2 > 0.0))
        throw std::invalid_argument("exponential_switch_law: rates must be positive");
    auto sampler = [c1, c2](Rng& r) {
        return std::make_pair(r.exponential(c1), r.exponential(c2));
    };
    return make_switch_law(1.0 / c1, 1.0 / c2, 1.0 / (c1 * c1), 1.0 / (c2 * c2), 0.0, sampler);
}

SubordinatorSpec make_subordinator_spec(double drift1, double drift2, double jump_rate,
                                        std::function<std::pair<double, double>(Rng&)> jump_sampler,
                                        double lambda1, double lambda2,
                                        double sigma11, double sigma12, double sigma22) {
    const char* where = "make_subordinator_spec";
    if (!(drift1 >= 0.0) || !(drift2 >= 0.0))
        throw std::invalid_argument("make_subordinator_spec: drifts must be nonnegative");
    if (!(jump_rate >= 0.0) || !std::isfinite(jump_rate))
        throw std::invalid_argument("make_subordinator_spec: jump_rate must be nonnegative");
    if (!(sigma11 >= 0.0) || !(sigma22 >= 0.0) ||
        sigma11 * sigma22 - sigma12 * sigma12 < -1e-12 * (sigma11 * sigma22 + sigma12 * sigma12 + 1e-300))
        throw std::invalid_argument("make_subordinator_spec: Sigma is not positive semidefinite");

    if (jump_rate > 0.0) {
        if (!jump_sampler) throw std::invalid_argument("make_subordinator_spec: jump sampler is empty");
        PairMoments m = sample_pair_moments(jump_sampler, 0xA5A5F00Dull, 200000, where);
        check_close(lambda1, drift1 + jump_rate * m.mean1, jump_rate * m.se_mean1, "lambda1", where);
        check_close(lambda2, drift2 + jump_rate * m.mean2, jump_rate * m.se_mean2, "lambda2", where);
    } else {
        if (std::abs(lambda1 - drift1) > 1e-12 * (1.0 + std::abs(lambda1)) ||
            std::abs(lambda2 - drift2) > 1e-12 * (1.0 + std::abs(lambda2)))
            throw std::invalid_argument("make_subordinator_spec: without jumps lambda_j must equal drift_j");
    }

    SubordinatorSpec sp;
    sp.drift1 = drift1;
    sp.drift2 = drift2;
    sp.jump_rate = jump_rate;
    sp.jump_sampler = std::move(jump_sampler);
    sp.lambda1 = lambda1;
    sp.lambda2 = lambda2;
    sp.sigma11 = sigma11;
    sp.sigma12 = sigma12;
    sp.sigma22 = sigma22;
    return sp;
}

void HTDrifts::validate() const {
    if (!(std::isfinite(theta1_hat) && theta1_hat > 0.0) ||
        !(std::isfinite(theta2_hat) && theta2_hat > 0.0))
        throw std::invalid_argument("HTDrifts: both drifts must be positive");
}

double switching_bm_variance(const SwitchLaw& sw) {
    if (!(sw.mean1 > 0.0) || !(sw.mean2 > 0.0))
        throw std::invalid_argument("switching_bm_variance: invalid SwitchLaw");
    const double c1 = sw.c1(), c2 = sw.c2();
    const double q = c1 * c1 * sw.var1 - 2.0 * c1 * c2 * sw.cov + c2 * c2 * sw.var2;
    const double tot = c1 + c2;
    return std::max(0.0, c1 * c2 * q / (tot * tot * tot));
}

HTDrifts hat_drifts(std::pair<double, double> theta, std::pair<double, double> lambdas,
                    double p1, double sigma) {
    if (!(theta.first > 0.0) || !(theta.second > 0.0))
        throw std::invalid_argument("hat_drifts: theta_j must be positive");
    if (!(lambdas.first > 0.0) || !(lambdas.second > 0.0))
        throw std::invalid_argument("hat_drifts: lambda_j must be positive");
    if (!(p1 > 0.0 && p1 < 1.0)) throw std::invalid_argument("hat_drifts: p1 must lie in (0,1)");
    if (!(sigma > 0.0))
        throw std::invalid_argument("hat_drifts: sigma must be positive (constant switch pair excluded)");
    return HTDrifts{p1 * theta.first / (lambdas.first * sigma),
                    (1.0 - p1) * theta.second / (lambdas.second * sigma)};
}

Cpx levy_ht_kernel(const HTDrifts& d, Cpx s1, Cpx s2) {
    d.validate();
    Cpx df = s1 - s2;
    return d.theta1_hat * s1 + d.theta2_hat * s2 + 0.5 * df * df;
}

std::pair<Cpx, Cpx> levy_kernel_roots(const HTDrifts& d, Cpx s1) {
    d.validate();
    const double t2 = d.theta2_hat;
    Cpx rad = std::sqrt(Cpx(t2 * t2, 0.0) - 2.0 * d.sigma_sum() * s1);
    return {s1 - t2 + rad, s1 - t2 - rad};
}

double levy_branch_point(const HTDrifts& d) {
    d.validate();
    return d.theta2_hat * d.theta2_hat / (2.0 * d.sigma_sum());
}

ParabolaGeometry levy_parabola(const HTDrifts& d, int j) {
    d.validate();
    check_index(j, "levy_parabola");
    const double tj = d.theta(j);
    const double sg = d.sigma_sum();
    return ParabolaGeometry{(tj * tj - sg * sg) / (2.0 * sg), 2.0 * sg};
}

double levy_strip_edge(const HTDrifts& d, int j) {
    d.validate();
    check_index(j, "levy_strip_edge");
    const double tj = d.theta(j), to = d.theta(3 - j);
    return -tj * (2.0 * to + tj) / (2.0 * d.sigma_sum());
}

Cpx levy_conformal(const HTDrifts& d, int j, Cpx z) {
    d.validate();
    check_index(j, "levy_conformal");
    const double tj = d.theta(j);
    const double sg = d.sigma_sum();
    const double rt2 = std::sqrt(2.0);
    Cpx q = std::cosh((kPi / (2.0 * sg)) * std::sqrt(2.0 * sg * z - tj * tj));
    Cpx den = 1.0 + rt2 * q;
    if (std::abs(den) == 0.0) throw std::domain_error("levy_conformal: denominator vanishes");
    return (1.0 - rt2 * q) / den;
}

Cpx f_hat(const HTDrifts& d, int j, Cpx s) {
    d.validate();
    check_index(j, "f_hat");
    if (s.real() <= levy_strip_edge(d, j))
        throw std::domain_error("f_hat: Re[s] outside the analyticity strip");
    const double tj = d.theta(j);
    if (s == Cpx(0.0, 0.0)) return Cpx(tj, 0.0);
    const double sg = d.sigma_sum();
    const double sinb = std::sin(kPi * tj / sg);
    Cpx r = std::sqrt(2.0 * sg * s - tj * tj);
    Cpx rp = r + Cpx(0.0, tj);
    Cpx m = kPi * s / rp;
    Cpx big = (kPi / (2.0 * sg)) * rp;
    return sinb * rp * sinh_ratio(m) / (2.0 * std::sinh(big));
}

namespace {

Cpx joint_direct(const HTDrifts& d, Cpx s1, Cpx s2) {
    Cpx k = levy_ht_kernel(d, s1, s2);
    return (s1 * f_hat(d, 1, s2) + s2 * f_hat(d, 2, s1)) / k;
}

} // namespace

Cpx levy_joint_lst(const HTDrifts& d, Cpx s1, Cpx s2) {
    d.validate();
    if (s2.real() <= levy_strip_edge(d, 1) || s1.real() <= levy_strip_edge(d, 2))
        throw std::domain_error("levy_joint_lst: Re[s_j] outside the analyticity strips");
    const bool z1 = (s1 == Cpx(0.0, 0.0)), z2 = (s2 == Cpx(0.0, 0.0));
    if (z1 && z2) return Cpx(1.0, 0.0);
    if (z1) return 2.0 * d.theta2_hat / (2.0 * d.theta2_hat + s2);
    if (z2) return 2.0 * d.theta1_hat / (2.0 * d.theta1_hat + s1);

    Cpx k = levy_ht_kernel(d, s1, s2);
    const double kscale = d.theta1_hat * std::abs(s1) + d.theta2_hat * std::abs(s2) +
                          0.5 * std::norm(s1 - s2);
    if (std::abs(k) <= 1e-9 * std::max(kscale, 1e-30)) {
        // the kernel moves at exact rate theta1 + theta2 along the diagonal
        const double delta =
            1e-7 * std::max({d.theta1_hat, d.theta2_hat, std::abs(s1), std::abs(s2)});
        return 0.5 * (joint_direct(d, s1 + delta, s2 + delta) +
                      joint_direct(d, s1 - delta, s2 - delta));
    }
    return joint_direct(d, s1, s2);
}

LevyPoleFamilies levy_pole_families(const HTDrifts& d, int j, int n_range) {
    d.validate();
    check_index(j, "levy_pole_families");
    if (n_range < 1) throw std::invalid_argument("levy_pole_families: n_range must be >= 1");
    const double tj = d.theta(j);
    const double sg = d.sigma_sum();
    LevyPoleFamilies out;
    out.strip_edge = levy_strip_edge(d, j);
    for (int n = -n_range; n <= n_range; ++n) {
        const double q1 = 2.0 * sg * (0.75 + 2.0 * n);
        out.family1.push_back((tj * tj - q1 * q1) / (2.0 * sg));
        if (n != 0) {
            const double q2 = -tj + 4.0 * sg * n;
            out.family2.push_back((tj * tj - q2 * q2) / (2.0 * sg));
        }
    }
    std::sort(out.family1.rbegin(), out.family1.rend());
    std::sort(out.family2.rbegin(), out.family2.rend());
    return out;
}

VanishingLimitRecord f_hat_vanishing_limit(double theta_other, int j, Cpx s) {
    check_index(j, "f_hat_vanishing_limit");
    if (!(theta_other > 0.0))
        throw std::invalid_argument("f_hat_vanishing_limit: fixed drift must be positive");
    VanishingLimitRecord rec;
    rec.theta_values = {1e-1, 1e-2, 1e-3, 1e-4};
    for (double t : rec.theta_values) {
        HTDrifts d = (j == 1) ? HTDrifts{t, theta_other} : HTDrifts{theta_other, t};
        const double mag = std::abs(f_hat(d, j, s));
        rec.magnitudes.push_back(mag);
        rec.ratios.push_back(mag / t);
    }
    rec.monotone_tail =
        rec.magnitudes[1] > rec.magnitudes[2] && rec.magnitudes[2] > rec.magnitudes[3];
    return rec;
}

RbmResult rbm_simulate(const HTDrifts& d, const RbmConfig& cfg) {
    d.validate();
    if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon))
        throw std::invalid_argument("rbm_simulate: horizon must be positive");
    const double tmax = std::max(d.theta1_hat * d.theta1_hat, d.theta2_hat * d.theta2_hat);
    const double dt = cfg.dt > 0.0 ? cfg.dt : 1e-3 / std::max(tmax, 1.0);
    const double warmup = cfg.warmup >= 0.0 ? cfg.warmup : cfg.horizon / 20.0;
    if (warmup >= cfg.horizon)
        throw std::invalid_argument("rbm_simulate: warmup must be below horizon");
    if (cfg.batches < 2) throw std::invalid_argument("rbm_simulate: need at least 2 batches");

    const auto warm_steps = static_cast<long long>(warmup / dt);
    const auto total_steps = static_cast<long long>(cfg.horizon / dt);
    const long long measured = total_steps - warm_steps;
    if (measured < cfg.batches)
        throw std::invalid_argument("rbm_simulate: horizon too short for the batch count");
    const long long per_batch = measured / cfg.batches;

    const double sdt = std::sqrt(dt);
    const double th1 = d.theta1_hat, th2 = d.theta2_hat;
    const std::size_t G = cfg.lst_grid.size();

    Rng rng(cfg.seed);
    double v1 = 0.0, v2 = 0.0;
    for (long long i = 0; i < warm_steps; ++i) {
        const double dw = sdt * rng.normal();
        v1 = std::max(0.0, v1 - th1 * dt - dw);
        v2 = std::max(0.0, v2 - th2 * dt + dw);
    }

    std::vector<std::vector<double>> bvecs;
    bvecs.reserve(cfg.batches);
    std::vector<std::vector<double>> lst_batches(G);
    double S1 = 0.0, S2 = 0.0, Q1 = 0.0, Q2 = 0.0, X = 0.0;
    std::vector<double> lst_tot(G, 0.0);
    for (int b = 0; b < cfg.batches; ++b) {
        double s1 = 0.0, s2 = 0.0, q1 = 0.0, q2 = 0.0, x = 0.0;
        std::vector<double> lst(G, 0.0);
        for (long long i = 0; i < per_batch; ++i) {
            const double dw = sdt * rng.normal();
            v1 = std::max(0.0, v1 - th1 * dt - dw);
            v2 = std::max(0.0, v2 - th2 * dt + dw);
            s1 += v1;
            s2 += v2;
            q1 += v1 * v1;
            q2 += v2 * v2;
            x += v1 * v2;
            for (std::size_t g = 0; g < G; ++g)
                lst[g] += std::exp(-cfg.lst_grid[g].first * v1 - cfg.lst_grid[g].second * v2);
        }
        const double inv = 1.0 / static_cast<double>(per_batch);
        bvecs.push_back({s1 * inv, s2 * inv, q1 * inv, q2 * inv, x * inv});
        S1 += s1;
        S2 += s2;
        Q1 += q1;
        Q2 += q2;
        X += x;
        for (std::size_t g = 0; g < G; ++g) {
            lst_batches[g].push_back(lst[g] * inv);
            lst_tot[g] += lst[g];
        }
    }

    const double n_used = static_cast<double>(per_batch) * cfg.batches;
    RbmResult r;
    r.moments = {S1 / n_used, S2 / n_used, Q1 / n_used, Q2 / n_used, X / n_used};
    r.correlation = moments_correlation(r.moments);
    const std::vector<double> cov = batch_mean_covariance(bvecs);
    for (int k = 0; k < 5; ++k) r.moment_se[k] = std::sqrt(std::max(0.0, cov[k * 5 + k]));
    r.correlation_se = delta_se(correlation_gradient(r.moments), cov);
    r.lst_values.resize(G);
    r.lst_se.resize(G);
    for (std::size_t g = 0; g < G; ++g) {
        r.lst_values[g] = lst_tot[g] / n_used;
        const double se2 = sample_variance(lst_batches[g]) / cfg.batches;
        r.lst_se[g] = se2 > 0.0 ? std::sqrt(se2) : 0.0;
    }
    r.dt_used = dt;
    r.time_averaged = n_used * dt;
    return r;
}

PrelimitResult prelimit_simulate(const SubordinatorSpec& sub, const SwitchLaw& sw,
                                 const PrelimitConfig& cfg) {
    if (!sw.sampler) throw std::invalid_argument("prelimit_simulate: switch law has no sampler");
    if (!(cfg.n >= 1.0)) throw std::invalid_argument("prelimit_simulate: n must be >= 1");
    if (!(cfg.horizon_scaled > 0.0))
        throw std::invalid_argument("prelimit_simulate: horizon must be positive");
    if (!(cfg.mu_n.first > 0.0) || !(cfg.mu_n.second > 0.0))
        throw std::invalid_argument("prelimit_simulate: service rates must be positive");
    if (cfg.batches < 2) throw std::invalid_argument("prelimit_simulate: need at least 2 batches");
    const double warm_scaled = cfg.warmup_scaled >= 0.0 ? cfg.warmup_scaled : cfg.horizon_scaled / 20.0;
    if (warm_scaled >= cfg.horizon_scaled)
        throw std::invalid_argument("prelimit_simulate: warmup must be below horizon");

    const double T = cfg.n * cfg.horizon_scaled;
    const double W = cfg.n * warm_scaled;
    const int B = cfg.batches;
    const double L = (T - W) / B;

    // between jumps the paths are the fluid dynamics with input drift_j
    const AsymmetricParams slopes{sub.drift1, sub.drift2, cfg.mu_n.first, cfg.mu_n.second, 1.0, 1.0};
    const bool jumps = sub.jump_rate > 0.0;
    const double inf = std::numeric_limits<double>::infinity();

    Rng rng(cfg.seed);
    WorkloadState st{0.0, 0.0, 1, 0.0};
    auto cyc = sw.sampler(rng);
    double phase_end = cyc.first;
    double pending = cyc.second;
    double next_jump = jumps ? rng.exponential(sub.jump_rate) : inf;

    std::vector<MomentAccumulator> batches(B);
    MomentAccumulator scratch;
    int cur_batch = (W > 0.0) ? -1 : 0;
    double cur_bound = (W > 0.0) ? W : W + L;
    double t = 0.0;

    while (t < T) {
        double event = std::min(std::min(phase_end, next_jump), T);
        while (t < event) {
            if (t == cur_bound && cur_batch < B - 1) {
                ++cur_batch;
                cur_bound = (cur_batch == B - 1) ? T : W + (cur_batch + 1) * L;
            }
            const double bound = std::min(cur_bound, event);
            MomentAccumulator& acc = (cur_batch >= 0) ? batches[cur_batch] : scratch;
            st = segment_accumulate(st, bound - t, slopes, acc);
            t = bound;
        }
        if (t >= T) break;
        if (event == next_jump) {
            auto [y1, y2] = sub.jump_sampler(rng);
            st.v1 += y1;
            st.v2 += y2;
            next_jump = t + rng.exponential(sub.jump_rate);
        } else {
            if (st.serving == 1) {
                st.serving = 2;
                phase_end += pending;
            } else {
                st.serving = 1;
                cyc = sw.sampler(rng);
                phase_end += cyc.first;
                pending = cyc.second;
            }
        }
    }

    MomentAccumulator total;
    for (const auto& b : batches) total.add(b);
    const double rn = std::sqrt(cfg.n);
    auto scaled = [&](const MomentSet& m) {
        return MomentSet{m.m1 / rn, m.m2 / rn, m.q1 / cfg.n, m.q2 / cfg.n, m.x / cfg.n};
    };

    PrelimitResult r;
    r.moments = scaled(total.time_averaged());
    r.correlation = moments_correlation(r.moments);
    std::vector<std::vector<double>> bvecs;
    bvecs.reserve(batches.size());
    for (const auto& b : batches) bvecs.push_back(scaled(b.time_averaged()).as_vector());
    const std::vector<double> cov = batch_mean_covariance(bvecs);
    for (int k = 0; k < 5; ++k) r.moment_se[k] = std::sqrt(std::max(0.0, cov[k * 5 + k]));
    r.correlation_se = delta_se(correlation_gradient(r.moments), cov);
    r.time_averaged_raw = total.time;
    return r;
}

} // namespace rtpoll
