#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rtpoll/params.hpp"
#include "rtpoll/stats.hpp"

namespace rtpoll {

struct SimConfig {
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    double total_time = 0.0;
    double warmup_time = 0.0;
    int batch_count = 100;
    bool collect_ecdf = false;
    double ecdf_dt = 1.0; // sampling interval for the scaled-total ECDF
    int forced_initial_server = 0; // 0 draws the stationary phase, 1/2 pin it

    void validate() const;
};

// Running exact time integrals over processed segments.
struct MomentAccumulator {
    double time = 0.0;
    double iv1 = 0.0;
    double iv2 = 0.0;
    double iv1sq = 0.0;
    double iv2sq = 0.0;
    double iv12 = 0.0;
    double zero1 = 0.0; // occupation time of {V1 = 0}
    double zero2 = 0.0;

    void add(const MomentAccumulator& o);
    MomentSet time_averaged() const;
};

// Evolves the state through one constant-phase segment and adds the exact
// polynomial integrals (and zero-occupation measure) to acc. The served
// queue moves at lambda - mu clamped at 0, the idle queue at +lambda.
WorkloadState segment_accumulate(const WorkloadState& s, double duration,
                                 const AsymmetricParams& p, MomentAccumulator& acc);

// Workload values duration units into a segment, without accumulating.
std::pair<double, double> segment_value_after(const WorkloadState& s, double duration,
                                              const AsymmetricParams& p);

struct SimResult {
    double mean_v1 = 0.0;
    double mean_v2 = 0.0;
    double mean_v1sq = 0.0;
    double mean_v2sq = 0.0;
    double mean_v1v2 = 0.0;
    double frac_zero1 = 0.0;
    double frac_zero2 = 0.0;
    double correlation = 0.0;
    double ci_low = 0.0;  // 95% delta-method CI on the correlation
    double ci_high = 0.0;
    std::array<double, 5> moment_se{}; // batch-mean standard errors of the five moments
    double se_zero1 = 0.0;
    double se_zero2 = 0.0;
    bool stable = true;
    double measured_time = 0.0;
    std::uint64_t switch_count = 0;
    Ecdf ecdf_total; // scaled total workload on the sampling grid

    MomentSet moments() const { return {mean_v1, mean_v2, mean_v1sq, mean_v2sq, mean_v1v2}; }
};

// Event-driven run with exponential visit durations; statistics cover
// [warmup_time, total_time] split into batch_count equal batches.
SimResult simulate(const AsymmetricParams& p, const SimConfig& cfg);

// Grand-mean pooling across independent replications: moments averaged over
// replications first, correlation taken of the pooled moments, CI by
// leave-one-replication-out jackknife.
struct PooledCorrelation {
    double correlation = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double jackknife_se = 0.0;
    MomentSet pooled;
    std::vector<MomentSet> per_replication;
};

PooledCorrelation pooled_correlation(const AsymmetricParams& p, const SimConfig& per_rep,
                                     int replications, int workers, double level = 0.95);

} // namespace rtpoll
