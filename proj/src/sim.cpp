#include "rtpoll/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "rtpoll/rng.hpp"

namespace rtpoll {

void SimConfig::validate() const {
    if (!(std::isfinite(total_time) && total_time > 0.0))
        throw std::invalid_argument("SimConfig: total_time must be positive");
    if (!(std::isfinite(warmup_time) && warmup_time >= 0.0 && warmup_time < total_time))
        throw std::invalid_argument("SimConfig: warmup_time must lie in [0, total_time)");
    if (batch_count < 2) throw std::invalid_argument("SimConfig: batch_count must be at least 2");
    if (collect_ecdf && !(ecdf_dt > 0.0))
        throw std::invalid_argument("SimConfig: ecdf_dt must be positive");
    if (forced_initial_server < 0 || forced_initial_server > 2)
        throw std::invalid_argument("SimConfig: forced_initial_server must be 0, 1, or 2");
}

void MomentAccumulator::add(const MomentAccumulator& o) {
    time += o.time;
    iv1 += o.iv1;
    iv2 += o.iv2;
    iv1sq += o.iv1sq;
    iv2sq += o.iv2sq;
    iv12 += o.iv12;
    zero1 += o.zero1;
    zero2 += o.zero2;
}

MomentSet MomentAccumulator::time_averaged() const {
    if (!(time > 0.0)) return {};
    return {iv1 / time, iv2 / time, iv1sq / time, iv2sq / time, iv12 / time};
}

namespace {

struct Affine {
    double a, b; // a + b t
};

double int_lin(Affine f, double L) { return f.a * L + 0.5 * f.b * L * L; }

double int_sq(Affine f, double L) {
    return f.a * f.a * L + f.a * f.b * L * L + f.b * f.b * L * L * L / 3.0;
}

double int_cross(Affine f, Affine g, double L) {
    return f.a * g.a * L + 0.5 * (f.a * g.b + f.b * g.a) * L * L + f.b * g.b * L * L * L / 3.0;
}

} // namespace

WorkloadState segment_accumulate(const WorkloadState& s, double duration,
                                 const AsymmetricParams& p, MomentAccumulator& acc) {
    if (!(duration >= 0.0)) throw std::invalid_argument("segment_accumulate: negative duration");
    if (s.serving != 1 && s.serving != 2)
        throw std::invalid_argument("segment_accumulate: serving index must be 1 or 2");
    if (duration == 0.0) return s;

    const bool one = (s.serving == 1);
    const double vs = one ? s.v1 : s.v2;
    const double vi = one ? s.v2 : s.v1;
    const double lam_s = one ? p.lambda1 : p.lambda2;
    const double mu_s = one ? p.mu1 : p.mu2;
    const double lam_i = one ? p.lambda2 : p.lambda1;
    const double d = lam_s - mu_s;

    bool kink = false;
    double t_kink = duration;
    if (d < 0.0) {
        double ts = vs / (-d);
        if (ts < duration) {
            kink = true;
            t_kink = ts;
        }
    }

    double zero_s = 0.0;
    if (kink) zero_s = duration - t_kink;
    else if (d == 0.0 && vs == 0.0) zero_s = duration;

    const double zero_i = (vi == 0.0 && lam_i == 0.0) ? duration : 0.0;

    const Affine fs{vs, d};
    const Affine fi{vi, lam_i};
    const double Ls = kink ? t_kink : duration;
    const double served1 = int_lin(fs, Ls);
    const double served2 = int_sq(fs, Ls);
    const double cross = int_cross(fs, fi, Ls); // served side is 0 past the kink
    const double idle1 = int_lin(fi, duration);
    const double idle2 = int_sq(fi, duration);

    acc.time += duration;
    acc.iv12 += cross;
    if (one) {
        acc.iv1 += served1;
        acc.iv1sq += served2;
        acc.iv2 += idle1;
        acc.iv2sq += idle2;
        acc.zero1 += zero_s;
        acc.zero2 += zero_i;
    } else {
        acc.iv2 += served1;
        acc.iv2sq += served2;
        acc.iv1 += idle1;
        acc.iv1sq += idle2;
        acc.zero2 += zero_s;
        acc.zero1 += zero_i;
    }

    WorkloadState out = s;
    out.clock += duration;
    const double vs_end = kink ? 0.0 : std::max(0.0, vs + d * duration);
    const double vi_end = vi + lam_i * duration;
    if (one) {
        out.v1 = vs_end;
        out.v2 = vi_end;
    } else {
        out.v2 = vs_end;
        out.v1 = vi_end;
    }
    return out;
}

std::pair<double, double> segment_value_after(const WorkloadState& s, double duration,
                                              const AsymmetricParams& p) {
    if (!(duration >= 0.0)) throw std::invalid_argument("segment_value_after: negative duration");
    const bool one = (s.serving == 1);
    const double vs = one ? s.v1 : s.v2;
    const double vi = one ? s.v2 : s.v1;
    const double lam_s = one ? p.lambda1 : p.lambda2;
    const double mu_s = one ? p.mu1 : p.mu2;
    const double lam_i = one ? p.lambda2 : p.lambda1;
    const double vs_t = std::max(0.0, vs + (lam_s - mu_s) * duration);
    const double vi_t = vi + lam_i * duration;
    return one ? std::make_pair(vs_t, vi_t) : std::make_pair(vi_t, vs_t);
}

SimResult simulate(const AsymmetricParams& p, const SimConfig& cfg) {
    p.validate();
    cfg.validate();

    Rng rng(cfg.seed, cfg.stream);
    int serving = cfg.forced_initial_server;
    if (serving == 0) serving = (rng.uniform01() < p.c2 / (p.c1 + p.c2)) ? 1 : 2;
    WorkloadState st{0.0, 0.0, serving, 0.0};

    const double T = cfg.total_time;
    const double W = cfg.warmup_time;
    const int B = cfg.batch_count;
    const double L = (T - W) / B;

    std::vector<MomentAccumulator> batches(B);
    MomentAccumulator scratch; // pre-warmup, discarded
    std::vector<double> samples;
    const double scale = 0.5 - p.rho1();
    std::size_t n_sampled = 0;

    int cur_batch = (W > 0.0) ? -1 : 0;
    double cur_bound = (W > 0.0) ? W : W + L;
    std::uint64_t switches = 0;
    double t = 0.0;
    bool done = false;

    while (!done) {
        const double rate = (st.serving == 1) ? p.c1 : p.c2;
        double seg_end = t + rng.exponential(rate);
        if (seg_end >= T) {
            seg_end = T;
            done = true;
        }
        while (t < seg_end) {
            if (t == cur_bound && cur_batch < B - 1) {
                ++cur_batch;
                cur_bound = (cur_batch == B - 1) ? T : W + (cur_batch + 1) * L;
            }
            const double bound = std::min(cur_bound, seg_end);
            const double h = bound - t;
            if (cfg.collect_ecdf && cur_batch >= 0) {
                double next = W + (n_sampled + 1) * cfg.ecdf_dt;
                while (next <= bound) {
                    auto [w1, w2] = segment_value_after(st, next - t, p);
                    samples.push_back(scale * (w1 + w2));
                    ++n_sampled;
                    next = W + (n_sampled + 1) * cfg.ecdf_dt;
                }
            }
            MomentAccumulator& acc = (cur_batch >= 0) ? batches[cur_batch] : scratch;
            st = segment_accumulate(st, h, p, acc);
            t = bound;
        }
        if (!done) {
            st.serving = 3 - st.serving;
            ++switches;
        }
    }

    MomentAccumulator total;
    for (const auto& b : batches) total.add(b);
    const MomentSet mom = total.time_averaged();

    std::vector<std::vector<double>> bvecs;
    bvecs.reserve(batches.size());
    for (const auto& b : batches) bvecs.push_back(b.time_averaged().as_vector());
    const std::vector<double> cov = batch_mean_covariance(bvecs);
    const double corr = moments_correlation(mom);
    const double se = delta_se(correlation_gradient(mom), cov);
    const double z = inv_normal_cdf(0.975);

    SimResult r;
    r.mean_v1 = mom.m1;
    r.mean_v2 = mom.m2;
    r.mean_v1sq = mom.q1;
    r.mean_v2sq = mom.q2;
    r.mean_v1v2 = mom.x;
    r.frac_zero1 = total.zero1 / total.time;
    r.frac_zero2 = total.zero2 / total.time;
    r.correlation = corr;
    r.ci_low = corr - z * se;
    r.ci_high = corr + z * se;
    for (int k = 0; k < 5; ++k) r.moment_se[k] = std::sqrt(std::max(0.0, cov[k * 5 + k]));
    std::vector<double> bz1, bz2;
    bz1.reserve(batches.size());
    bz2.reserve(batches.size());
    for (const auto& b : batches) {
        bz1.push_back(b.zero1 / b.time);
        bz2.push_back(b.zero2 / b.time);
    }
    r.se_zero1 = std::sqrt(sample_variance(bz1) / B);
    r.se_zero2 = std::sqrt(sample_variance(bz2) / B);
    r.stable = p.is_stable();
    r.measured_time = total.time;
    r.switch_count = switches;
    if (cfg.collect_ecdf) r.ecdf_total = Ecdf(std::move(samples));
    return r;
}

PooledCorrelation pooled_correlation(const AsymmetricParams& p, const SimConfig& per_rep,
                                     int replications, int workers, double level) {
    p.validate();
    per_rep.validate();
    if (replications < 2)
        throw std::invalid_argument("pooled_correlation: need at least 2 replications");
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("pooled_correlation: level must lie in (0,1)");

    int n_threads = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::max(1, std::min(n_threads, replications));

    std::vector<MomentSet> reps(replications);
    std::vector<std::exception_ptr> errors(n_threads);
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int w = 0; w < n_threads; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (int k = w; k < replications; k += n_threads) {
                    SimConfig c = per_rep;
                    c.stream = per_rep.stream + static_cast<std::uint64_t>(k);
                    c.collect_ecdf = false;
                    reps[k] = simulate(p, c).moments();
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    const int R = replications;
    MomentSet sum;
    for (const auto& m : reps) {
        sum.m1 += m.m1;
        sum.m2 += m.m2;
        sum.q1 += m.q1;
        sum.q2 += m.q2;
        sum.x += m.x;
    }
    MomentSet pooled{sum.m1 / R, sum.m2 / R, sum.q1 / R, sum.q2 / R, sum.x / R};
    const double corr = moments_correlation(pooled);

    std::vector<double> loo(R);
    for (int i = 0; i < R; ++i) {
        const MomentSet& m = reps[i];
        MomentSet rest{(sum.m1 - m.m1) / (R - 1), (sum.m2 - m.m2) / (R - 1),
                       (sum.q1 - m.q1) / (R - 1), (sum.q2 - m.q2) / (R - 1),
                       (sum.x - m.x) / (R - 1)};
        loo[i] = moments_correlation(rest);
    }
    const double loo_mean = mean_of(loo);
    double ssq = 0.0;
    for (double v : loo) ssq += (v - loo_mean) * (v - loo_mean);
    const double se = std::sqrt(ssq * (R - 1) / static_cast<double>(R));
    const double z = inv_normal_cdf(0.5 + 0.5 * level);

    PooledCorrelation out;
    out.correlation = corr;
    out.jackknife_se = se;
    out.ci_low = corr - z * se;
    out.ci_high = corr + z * se;
    out.pooled = pooled;
    out.per_replication = std::move(reps);
    return out;
}

} // namespace rtpoll
