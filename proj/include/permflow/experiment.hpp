#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "permflow/caps.hpp"
#include "permflow/process.hpp"

namespace permflow {

/// One checkpoint of a limit experiment: the observed quantity at column
/// count n against its analytic target.
struct ConvergenceRecord {
    std::uint64_t n = 0;
    double observed = 0.0;
    double target = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
};

ConvergenceRecord make_record(std::uint64_t n, double observed, double target);

/// Geometric checkpoint grid. Errors are expected to decay polynomially, so
/// checkpoints are spaced by a constant factor; the final length is always
/// included.
struct CheckpointSchedule {
    std::uint64_t n_max = 0;
    double factor = 1.5;
    std::vector<std::uint64_t> points;

    static CheckpointSchedule geometric(std::uint64_t n_max, double factor = 1.5,
                                        std::uint64_t start = 1);
};

/// Records plus enough metadata to reproduce the run.
struct RunResult {
    std::string experiment;
    ProcessSpec spec;
    CheckpointSchedule schedule;
    /// Set when a run was asked to check a limit whose hypothesis the spec
    /// does not satisfy (e.g. Aaronson with p >= tail index). The run still
    /// executes; it just must not be read as a convergence witness.
    bool hypothesis_warning = false;
    double wall_seconds = 0.0;
    std::vector<ConvergenceRecord> records;

    const ConvergenceRecord& final_record() const;
};

/// Streams columns through the subset sums and records
/// per(A(n,w)) / n^(falling m) against prod_i integral(f_i). Checkpoints
/// below m are skipped. Never materializes the matrix.
RunResult run_permanent_convergence(const ProcessSpec& spec,
                                    const CheckpointSchedule& schedule,
                                    const Caps& caps = {});

/// Records s_I(n) / n^|I| for one row subset (bitmask over rows); the target
/// is the coordinate integral for singletons and 0 for |I| > 1.
RunResult run_subset_ratio(const ProcessSpec& spec, std::uint32_t subset_mask,
                           const CheckpointSchedule& schedule);

/// Records n^(-1/p) * sum of f along the orbit, target 0, for p in (0,1).
/// Sets hypothesis_warning instead of refusing when f is not in L^p.
RunResult run_aaronson_ratio(const ProcessSpec& spec, double p,
                             const CheckpointSchedule& schedule);

/// Records the m-th symmetric mean of the first n orbit values against the
/// integral of f (one-dimensional spec, f >= 0, fixed small m).
RunResult run_symmetric_mean_low(const ProcessSpec& spec, unsigned m_sym,
                                 const CheckpointSchedule& schedule);

/// Records the (n-m)-th symmetric mean against exp(integral of log f),
/// using the factorization M_(n-m) = M_n * M_m(1/f)^(m/(n-m)) so the state
/// stays O(m). Requires strictly positive f; m_sym = 0 reduces to the
/// geometric mean.
RunResult run_symmetric_mean_high(const ProcessSpec& spec, unsigned m_sym,
                                  const CheckpointSchedule& schedule);

/// Records max |f| over the first n steps divided by n, target 0.
RunResult run_max_ratio(const ProcessSpec& spec,
                        const CheckpointSchedule& schedule);

/// Runs `runner` on copies of `base` seeded base.seed, base.seed+1, ...,
/// base.seed+count-1, in parallel; results come back ordered by seed.
std::vector<RunResult> run_seed_sweep(
    const ProcessSpec& base, unsigned count,
    const std::function<RunResult(const ProcessSpec&)>& runner);

double median(std::vector<double> values);
double median_final_rel_err(std::span<const RunResult> results);

/// Least-squares slope of log(observed) against log(n) over checkpoints with
/// n >= min_n and observed > 0.
double loglog_slope(std::span<const ConvergenceRecord> records,
                    std::uint64_t min_n);

/// CSV with header n,observed,target,abs_err,rel_err. Deterministic bytes
/// for identical runs.
void write_records_csv(std::ostream& out, const RunResult& result);

/// CSV with a leading seed column, one block per sweep entry.
void write_sweep_csv(std::ostream& out, std::span<const RunResult> results);

/// JSON document with spec, seed, schedule, experiment name, wall time and
/// the record list.
void write_json(std::ostream& out, const RunResult& result);

}  // namespace permflow
