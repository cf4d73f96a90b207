#include "permflow/experiment.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <future>
#include <ostream>

#include "permflow/errors.hpp"
#include "permflow/permanent.hpp"
#include "permflow/subset_sums.hpp"
#include "permflow/sym_means.hpp"

namespace permflow {

namespace {

constexpr std::size_t kBlockColumns = 512;

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// Drives a process through the checkpoint grid: absorb(cols, count) per
// block, checkpoint(n) at every grid point >= min_n.
template <typename Absorb, typename Checkpoint>
void stream_through(const ProcessSpec& spec, const CheckpointSchedule& sched,
                    std::uint64_t min_n, Absorb&& absorb,
                    Checkpoint&& checkpoint) {
    ProcessState state(spec);
    std::vector<double> block(kBlockColumns * spec.m);
    std::uint64_t n = 0;
    for (std::uint64_t cp : sched.points) {
        if (cp < min_n) continue;
        while (n < cp) {
            const std::size_t take = static_cast<std::size_t>(
                std::min<std::uint64_t>(kBlockColumns, cp - n));
            state.fill_columns(block.data(), take);
            absorb(block.data(), take);
            n += take;
        }
        checkpoint(n);
    }
}

void require_one_dimensional(const ProcessSpec& spec, const char* what) {
    if (spec.m != 1) {
        throw InputError(std::string(what) +
                         ": requires a one-dimensional spec");
    }
}

}  // namespace

ConvergenceRecord make_record(std::uint64_t n, double observed, double target) {
    ConvergenceRecord r;
    r.n = n;
    r.observed = observed;
    r.target = target;
    r.abs_err = std::fabs(observed - target);
    r.rel_err = r.abs_err / std::max(std::fabs(target), 1e-300);
    return r;
}

CheckpointSchedule CheckpointSchedule::geometric(std::uint64_t n_max,
                                                 double factor,
                                                 std::uint64_t start) {
    if (n_max < 1) throw InputError("schedule: n_max must be at least 1");
    if (!(factor > 1.0)) throw InputError("schedule: factor must exceed 1");
    if (start < 1) start = 1;
    CheckpointSchedule s;
    s.n_max = n_max;
    s.factor = factor;
    std::uint64_t p = start;
    while (p < n_max) {
        s.points.push_back(p);
        const double next = static_cast<double>(p) * factor;
        p = std::max(p + 1, static_cast<std::uint64_t>(std::llround(next)));
    }
    s.points.push_back(n_max);
    return s;
}

const ConvergenceRecord& RunResult::final_record() const {
    if (records.empty()) throw InputError("run has no records");
    return records.back();
}

RunResult run_permanent_convergence(const ProcessSpec& spec,
                                    const CheckpointSchedule& schedule,
                                    const Caps& caps) {
    spec.validate();
    const double target = spec.expected_product();
    const unsigned m = spec.m;

    RunResult rr{"permanent", spec, schedule, false, 0.0, {}};
    Stopwatch clock;
    SubsetSums sums(m);
    stream_through(
        spec, schedule, m,
        [&](const double* cols, std::size_t take) { sums.absorb(cols, take); },
        [&](std::uint64_t n) {
            const double observed = permanent_binet_minc_normalized(sums, caps) *
                                    falling_power_correction(n, m);
            rr.records.push_back(make_record(n, observed, target));
        });
    rr.wall_seconds = clock.seconds();
    return rr;
}

RunResult run_subset_ratio(const ProcessSpec& spec, std::uint32_t subset_mask,
                           const CheckpointSchedule& schedule) {
    spec.validate();
    if (subset_mask == 0) throw InputError("subset ratio: empty row subset");
    if (subset_mask >> spec.m) {
        throw InputError("subset ratio: mask names rows beyond m");
    }
    const unsigned size = static_cast<unsigned>(std::popcount(subset_mask));
    const double target =
        size == 1
            ? spec.coordinate_mean(
                  static_cast<unsigned>(std::countr_zero(subset_mask)))
            : 0.0;

    RunResult rr{"subset-ratio", spec, schedule, false, 0.0, {}};
    Stopwatch clock;
    double sum = 0.0;
    const unsigned m = spec.m;
    stream_through(
        spec, schedule, 1,
        [&](const double* cols, std::size_t take) {
            for (std::size_t cidx = 0; cidx < take; ++cidx) {
                const double* col = cols + cidx * m;
                double prod = 1.0;
                std::uint32_t bits = subset_mask;
                while (bits != 0) {
                    prod *= col[std::countr_zero(bits)];
                    bits &= bits - 1;
                }
                sum += prod;
            }
        },
        [&](std::uint64_t n) {
            const double observed =
                sum / upow(static_cast<double>(n), size);
            rr.records.push_back(make_record(n, observed, target));
        });
    rr.wall_seconds = clock.seconds();
    return rr;
}

RunResult run_aaronson_ratio(const ProcessSpec& spec, double p,
                             const CheckpointSchedule& schedule) {
    spec.validate();
    require_one_dimensional(spec, "aaronson ratio");
    if (!(p > 0.0 && p < 1.0)) {
        throw InputError("aaronson ratio: p must lie in (0, 1)");
    }
    // All kinds but Pareto are bounded, hence in every L^p. A Pareto tail is
    // in L^p iff p < alpha_tail; outside that the run proceeds flagged.
    const bool in_lp =
        spec.kind != ProcessKind::ParetoTail || p < spec.alpha_tail;

    RunResult rr{"aaronson", spec, schedule, !in_lp, 0.0, {}};
    Stopwatch clock;
    double sum = 0.0;
    stream_through(
        spec, schedule, 1,
        [&](const double* cols, std::size_t take) {
            for (std::size_t cidx = 0; cidx < take; ++cidx) sum += cols[cidx];
        },
        [&](std::uint64_t n) {
            const double observed =
                sum / std::pow(static_cast<double>(n), 1.0 / p);
            rr.records.push_back(make_record(n, observed, 0.0));
        });
    rr.wall_seconds = clock.seconds();
    return rr;
}

RunResult run_symmetric_mean_low(const ProcessSpec& spec, unsigned m_sym,
                                 const CheckpointSchedule& schedule) {
    spec.validate();
    require_one_dimensional(spec, "symmetric mean (low)");
    if (m_sym < 1) throw InputError("symmetric mean (low): m must be >= 1");
    if (spec.observable_min(0) < 0.0) {
        throw InputError("symmetric mean (low): observable must be nonnegative");
    }
    const double target = spec.coordinate_mean(0);

    RunResult rr{"symmean-low", spec, schedule, false, 0.0, {}};
    Stopwatch clock;
    StreamingElementarySymmetric stream(m_sym);
    stream_through(
        spec, schedule, m_sym,
        [&](const double* cols, std::size_t take) {
            for (std::size_t cidx = 0; cidx < take; ++cidx) {
                stream.push(cols[cidx]);
            }
        },
        [&](std::uint64_t n) {
            rr.records.push_back(
                make_record(n, stream.symmetric_mean(m_sym), target));
        });
    rr.wall_seconds = clock.seconds();
    return rr;
}

RunResult run_symmetric_mean_high(const ProcessSpec& spec, unsigned m_sym,
                                  const CheckpointSchedule& schedule) {
    spec.validate();
    require_one_dimensional(spec, "symmetric mean (high)");
    if (!(spec.observable_min(0) > 0.0)) {
        throw InputError(
            "symmetric mean (high): observable must be strictly positive");
    }
    const double target = std::exp(spec.log_integral(0));

    RunResult rr{"symmean-high", spec, schedule, false, 0.0, {}};
    Stopwatch clock;
    // Complement reduction: E_(n-m)(f) = (prod f) * E_m(1/f), hence
    // log M_(n-m) = (sum log f + m log M_m(1/f)) / (n - m). Needs only the
    // running log sum and the degree-m reciprocal coefficients, O(m) state.
    StreamingElementarySymmetric recip(std::max(m_sym, 1u));
    double log_sum = 0.0;
    stream_through(
        spec, schedule, m_sym + 1,
        [&](const double* cols, std::size_t take) {
            for (std::size_t cidx = 0; cidx < take; ++cidx) {
                const double v = cols[cidx];
                log_sum += std::log(v);
                if (m_sym > 0) recip.push(1.0 / v);
            }
        },
        [&](std::uint64_t n) {
            double observed;
            if (m_sym == 0) {
                observed = std::exp(log_sum / static_cast<double>(n));
            } else {
                const double mm = recip.symmetric_mean(m_sym);
                observed = std::exp(
                    (log_sum + static_cast<double>(m_sym) * std::log(mm)) /
                    static_cast<double>(n - m_sym));
            }
            rr.records.push_back(make_record(n, observed, target));
        });
    rr.wall_seconds = clock.seconds();
    return rr;
}

RunResult run_max_ratio(const ProcessSpec& spec,
                        const CheckpointSchedule& schedule) {
    spec.validate();
    require_one_dimensional(spec, "max ratio");
    if (spec.kind == ProcessKind::ParetoTail && spec.alpha_tail <= 1.0) {
        throw InputError("max ratio: observable must be integrable (L1)");
    }

    RunResult rr{"max-ratio", spec, schedule, false, 0.0, {}};
    Stopwatch clock;
    double max_abs = 0.0;
    stream_through(
        spec, schedule, 1,
        [&](const double* cols, std::size_t take) {
            for (std::size_t cidx = 0; cidx < take; ++cidx) {
                max_abs = std::max(max_abs, std::fabs(cols[cidx]));
            }
        },
        [&](std::uint64_t n) {
            rr.records.push_back(
                make_record(n, max_abs / static_cast<double>(n), 0.0));
        });
    rr.wall_seconds = clock.seconds();
    return rr;
}

std::vector<RunResult> run_seed_sweep(
    const ProcessSpec& base, unsigned count,
    const std::function<RunResult(const ProcessSpec&)>& runner) {
    if (count < 1) throw InputError("seed sweep: count must be >= 1");
    std::vector<std::future<RunResult>> futures;
    futures.reserve(count);
    for (unsigned t = 0; t < count; ++t) {
        ProcessSpec spec = base;
        spec.seed = base.seed + t;
        futures.push_back(std::async(std::launch::async,
                                     [spec, &runner] { return runner(spec); }));
    }
    std::vector<RunResult> results;
    results.reserve(count);
    for (auto& f : futures) results.push_back(f.get());
    return results;
}

double median(std::vector<double> values) {
    if (values.empty()) throw InputError("median of nothing");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

double median_final_rel_err(std::span<const RunResult> results) {
    std::vector<double> finals;
    finals.reserve(results.size());
    for (const RunResult& r : results) {
        finals.push_back(r.final_record().rel_err);
    }
    return median(std::move(finals));
}

double loglog_slope(std::span<const ConvergenceRecord> records,
                    std::uint64_t min_n) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t count = 0;
    for (const ConvergenceRecord& r : records) {
        if (r.n < min_n || !(r.observed > 0.0)) continue;
        const double x = std::log(static_cast<double>(r.n));
        const double y = std::log(r.observed);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 2) throw InputError("loglog_slope: needs two usable records");
    const double denom = static_cast<double>(count) * sxx - sx * sx;
    return (static_cast<double>(count) * sxy - sx * sy) / denom;
}

namespace {

void append_field(std::string& line, double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    line.append(buf, res.ptr);
}

void append_record(std::string& line, const ConvergenceRecord& r) {
    line += std::to_string(r.n);
    line += ',';
    append_field(line, r.observed);
    line += ',';
    append_field(line, r.target);
    line += ',';
    append_field(line, r.abs_err);
    line += ',';
    append_field(line, r.rel_err);
    line += '\n';
}

nlohmann::json record_json(const ConvergenceRecord& r) {
    return nlohmann::json{{"n", r.n},
                          {"observed", r.observed},
                          {"target", r.target},
                          {"abs_err", r.abs_err},
                          {"rel_err", r.rel_err}};
}

}  // namespace

void write_records_csv(std::ostream& out, const RunResult& result) {
    std::string body = "n,observed,target,abs_err,rel_err\n";
    for (const ConvergenceRecord& r : result.records) {
        append_record(body, r);
    }
    out << body;
}

void write_sweep_csv(std::ostream& out, std::span<const RunResult> results) {
    std::string body = "seed,n,observed,target,abs_err,rel_err\n";
    for (const RunResult& rr : results) {
        for (const ConvergenceRecord& r : rr.records) {
            body += std::to_string(rr.spec.seed);
            body += ',';
            append_record(body, r);
        }
    }
    out << body;
}

void write_json(std::ostream& out, const RunResult& result) {
    nlohmann::json j;
    j["experiment"] = result.experiment;
    j["spec"] = result.spec.to_json();
    j["seed"] = result.spec.seed;
    j["schedule"] = {{"n_max", result.schedule.n_max},
                     {"factor", result.schedule.factor},
                     {"points", result.schedule.points}};
    j["hypothesis_warning"] = result.hypothesis_warning;
    j["wall_time_s"] = result.wall_seconds;
    nlohmann::json recs = nlohmann::json::array();
    for (const ConvergenceRecord& r : result.records) {
        recs.push_back(record_json(r));
    }
    j["records"] = recs;
    out << j.dump(2) << '\n';
}

}  // namespace permflow
