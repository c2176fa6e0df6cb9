#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "phiproj/asymptotics.hpp"
#include "phiproj/divergence.hpp"
#include "phiproj/error.hpp"
#include "phiproj/measure.hpp"
#include "phiproj/model.hpp"
#include "phiproj/projection.hpp"
#include "phiproj/rng.hpp"

namespace phiproj {

struct SimulationConfig
{
    long n = 5000;
    long N = 5000;
    std::uint64_t seed = 0;
    /// Worker threads; 0 picks the hardware concurrency.  PHIPROJ_THREADS caps it.
    int parallel_streams = 0;

    void validate() const
    {
        if (n < 1 || N < 1)
            throw ValidationError("simulation needs n >= 1 and N >= 1");
        if (parallel_streams < 0)
            throw ValidationError("parallel_streams must be >= 0");
    }
};

struct ComparisonReport
{
    Matrix sigma;
    Matrix sigma_empirical;
    Matrix elementwise_diffs;
    double max_abs_diff = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    long replicates_used = 0;
    long replicates_skipped = 0;
};

/// Empirical frequencies of n categorical draws from q0, by inverse CDF.
inline ProbabilityVector sample_frequencies(const Vector& q0, long n, PhiloxEngine& rng)
{
    ProbabilityVector check(q0);
    if (n < 1)
        throw ValidationError("sample_frequencies needs n >= 1");
    const Eigen::Index m = q0.size();
    std::vector<double> cdf(m);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < m; ++i)
        cdf[i] = acc += q0[i];
    std::vector<long> counts(m, 0);
    for (long j = 0; j < n; ++j) {
        double u = rng.uniform() * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end() - 1, u);
        ++counts[it - cdf.begin()];
    }
    Vector q(m);
    for (Eigen::Index i = 0; i < m; ++i)
        q[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
    // counts sum to n, so q sums to 1 up to rounding of the divisions
    return ProbabilityVector(q);
}

namespace detail {

inline int worker_count(int requested, long jobs)
{
    long workers = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("PHIPROJ_THREADS")) {
        long c = std::strtol(cap, nullptr, 10);
        if (c >= 1)
            workers = std::min(workers, c);
    }
    return static_cast<int>(std::clamp(workers, 1L, std::max(1L, jobs)));
}

}  // namespace detail

/// Simulates N replicates of sqrt(n) S*(q_n) and compares their sample
/// covariance with the delta-method covariance at q0.
///
/// Replicate r draws from PhiloxEngine(seed, r) only, and the reduction runs
/// in replicate order, so the result does not depend on the thread count.
/// Replicates whose q_n has a zero entry are skipped; more than 1% skipped
/// is a DataDegeneracyError.
inline ComparisonReport empirical_covariance(const Divergence& div, const ParametricModel& model,
                                             const Vector& q0, const SimulationConfig& config,
                                             SolverOptions opts = {}, double tolerance = 0.01)
{
    config.validate();
    auto asym = asymptotic_covariance(div, model, q0, opts);
    // strictly convex affine problems have a single minimizer: one start suffices
    if (model.is_affine() && div.has_kappa())
        opts.multistart_count = 1;

    const Eigen::Index m = model.m();
    const long N = config.N;
    const double root_n = std::sqrt(static_cast<double>(config.n));
    Matrix draws(m, N);
    std::vector<char> used(N, 0);
    std::vector<std::exception_ptr> failures(N);

    auto run_range = [&](long begin, long end) {
        for (long r = begin; r < end; ++r) {
            try {
                PhiloxEngine rng(config.seed, static_cast<std::uint64_t>(r));
                Vector qn = sample_frequencies(q0, config.n, rng);
                if ((qn.array() <= 0.0).any())
                    continue;
                auto res = project(div, model, qn, opts);
                draws.col(r) = root_n * res.s_star;
                used[r] = 1;
            } catch (...) {
                failures[r] = std::current_exception();
            }
        }
    };

    const int workers = detail::worker_count(config.parallel_streams, N);
    if (workers == 1) {
        run_range(0, N);
    } else {
        std::vector<std::thread> pool;
        long chunk = (N + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            long begin = w * chunk;
            long end = std::min(N, begin + chunk);
            if (begin < end)
                pool.emplace_back(run_range, begin, end);
        }
        for (auto& th : pool)
            th.join();
    }
    for (auto& f : failures)
        if (f)
            std::rethrow_exception(f);

    ComparisonReport rep;
    for (long r = 0; r < N; ++r)
        (used[r] ? rep.replicates_used : rep.replicates_skipped) += 1;
    if (rep.replicates_skipped * 100 > N)
        throw DataDegeneracyError(std::to_string(rep.replicates_skipped) + " of "
                                  + std::to_string(N)
                                  + " replicates had a zero frequency (limit 1%)");
    if (rep.replicates_used < 2)
        throw DataDegeneracyError("fewer than two usable replicates");

    Vector mean = Vector::Zero(m);
    for (long r = 0; r < N; ++r)
        if (used[r])
            mean += draws.col(r);
    mean /= static_cast<double>(rep.replicates_used);
    Matrix cov = Matrix::Zero(m, m);
    for (long r = 0; r < N; ++r) {
        if (!used[r])
            continue;
        Vector c = draws.col(r) - mean;
        cov.noalias() += c * c.transpose();
    }
    cov /= static_cast<double>(rep.replicates_used - 1);

    rep.sigma = asym.sigma;
    rep.sigma_empirical = 0.5 * (cov + cov.transpose());
    rep.elementwise_diffs = rep.sigma_empirical - rep.sigma;
    rep.max_abs_diff = rep.elementwise_diffs.cwiseAbs().maxCoeff();
    rep.tolerance = tolerance;
    rep.pass = rep.max_abs_diff <= tolerance;
    return rep;
}

}  // namespace phiproj
