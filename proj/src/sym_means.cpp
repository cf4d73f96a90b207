#include "permflow/sym_means.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "permflow/errors.hpp"
#include "permflow/kernels.hpp"
#include "permflow/partitions.hpp"

namespace permflow {

namespace {

double log_gamma(double v) {
#if defined(__GLIBC__)
    int sign = 0;
    return lgamma_r(v, &sign);
#else
    return std::lgamma(v);
#endif
}

// Fast-path eligibility: inputs whose magnitude cannot push a window-checked
// sweep past double range within one column step.
bool inputs_in_window(std::span<const double> x) {
    for (double v : x) {
        const double a = std::fabs(v);
        if (a != 0.0 && (a < 0x1.0p-500 || a > 0x1.0p+500)) return false;
    }
    return true;
}

void require_finite(std::span<const double> x) {
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw InputError("symmetric polynomials: entries must be finite");
        }
    }
}

// Scaled-arithmetic version of the kernel sweep; bit-identical to the raw
// pass whenever the raw pass succeeds, and immune to range excursions.
void esym_sweep_scaled(std::vector<ScaledReal>& e, std::size_t kmax,
                       std::span<const double> x) {
    for (std::size_t j = 0; j < x.size(); ++j) {
        std::size_t hi = j + 1;
        if (hi > kmax) hi = kmax;
        for (std::size_t t = hi; t >= 1; --t) {
            e[t] += e[t - 1] * x[j];
        }
    }
}

double mean_from_log(double log_ek, std::uint64_t n, std::size_t k) {
    return std::exp((log_ek - log_binomial(n, k)) / static_cast<double>(k));
}

}  // namespace

double upow(double x, unsigned e) {
    double p = 1.0;
    for (unsigned i = 0; i < e; ++i) p *= x;
    return p;
}

double log_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) throw InputError("log_binomial: k must not exceed n");
    return log_gamma(static_cast<double>(n) + 1.0) -
           log_gamma(static_cast<double>(k) + 1.0) -
           log_gamma(static_cast<double>(n - k) + 1.0);
}

ScaledReal elementary_symmetric(std::span<const double> x, std::size_t k) {
    const std::size_t n = x.size();
    if (k > n) throw InputError("elementary_symmetric: k must not exceed n");
    require_finite(x);
    if (k == 0) return ScaledReal::from(1.0);

    if (inputs_in_window(x)) {
        std::vector<double> e(k + 1, 0.0);
        e[0] = 1.0;
        if (kernels::active().esym_sweep(e.data(), k, x.data(), n, 0)) {
            return ScaledReal::from(e[k]);
        }
    }
    std::vector<ScaledReal> e(k + 1);
    e[0] = ScaledReal::from(1.0);
    esym_sweep_scaled(e, k, x);
    return e[k];
}

double symmetric_mean(std::span<const double> x, std::size_t k) {
    const std::size_t n = x.size();
    if (k < 1 || k > n) {
        throw InputError("symmetric_mean: k must be in [1, n]");
    }
    for (double v : x) {
        if (v < 0.0) {
            throw InputError("symmetric_mean: entries must be nonnegative");
        }
    }
    const ScaledReal ek = elementary_symmetric(x, k);
    if (ek.is_zero()) return 0.0;
    if (k == 1) return ek.to_double() / static_cast<double>(n);
    return mean_from_log(ek.log_abs(), n, k);
}

SymmetricMeanProfile symmetric_mean_profile(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 1) throw InputError("symmetric_mean_profile: empty input");
    for (double v : x) {
        if (v < 0.0) {
            throw InputError(
                "symmetric_mean_profile: entries must be nonnegative");
        }
    }
    require_finite(x);

    // One full-width pass; raw doubles when possible, scaled otherwise.
    std::vector<double> log_e(n + 1, 0.0);
    double e1_raw = 0.0;
    bool fast_ok = inputs_in_window(x);
    if (fast_ok) {
        std::vector<double> e(n + 1, 0.0);
        e[0] = 1.0;
        fast_ok = kernels::active().esym_sweep(e.data(), n, x.data(), n, 0);
        if (fast_ok) {
            for (std::size_t k = 1; k <= n; ++k) {
                log_e[k] = e[k] == 0.0 ? -HUGE_VAL : std::log(e[k]);
            }
            e1_raw = e[1];
        }
    }
    if (!fast_ok) {
        std::vector<ScaledReal> e(n + 1);
        e[0] = ScaledReal::from(1.0);
        esym_sweep_scaled(e, n, x);
        for (std::size_t k = 1; k <= n; ++k) log_e[k] = e[k].log_abs();
        e1_raw = e[1].to_double();
    }

    SymmetricMeanProfile prof;
    prof.n = n;
    prof.values.resize(n);
    prof.log_values.resize(n);
    for (std::size_t k = 1; k <= n; ++k) {
        const double lv =
            log_e[k] == -HUGE_VAL
                ? -HUGE_VAL
                : (log_e[k] - log_binomial(n, k)) / static_cast<double>(k);
        prof.log_values[k - 1] = lv;
        if (k == 1) {
            // E_1 / n computed directly, matching the streaming path.
            prof.values[0] = e1_raw / static_cast<double>(n);
        } else {
            prof.values[k - 1] = lv == -HUGE_VAL ? 0.0 : std::exp(lv);
        }
    }
    return prof;
}

std::size_t maclaurin_violations(const SymmetricMeanProfile& profile,
                                 double slack) {
    std::size_t count = 0;
    for (std::size_t k = 0; k + 1 < profile.values.size(); ++k) {
        const double mk = profile.values[k];
        const double mk1 = profile.values[k + 1];
        if (mk1 > mk + slack * std::max(1.0, mk)) ++count;
    }
    return count;
}

double elementary_from_power_sums(std::span<const double> p, const Caps& caps) {
    const unsigned m = static_cast<unsigned>(p.size());
    if (m < 1) throw InputError("elementary_from_power_sums: empty input");
    static const double kFact[17] = {
        1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0, 40320.0, 362880.0,
        3628800.0, 39916800.0, 479001600.0, 6227020800.0, 87178291200.0,
        1307674368000.0, 20922789888000.0};
    double acc = 0.0;
    for_each_partition(m, caps, [&](const SetPartition& part) {
        double term = 1.0;
        for (unsigned b = 0; b < part.block_count; ++b) {
            const int size = std::popcount(part.block_masks[b]);
            term *= kFact[size - 1] * p[size - 1];
        }
        acc += ((m - part.block_count) & 1u) ? -term : term;
    });
    return acc / kFact[m];
}

StreamingElementarySymmetric::StreamingElementarySymmetric(std::size_t kmax)
    : coeff_(kmax + 1) {
    coeff_[0] = ScaledReal::from(1.0);
}

void StreamingElementarySymmetric::push(double x) {
    if (!std::isfinite(x)) {
        throw InputError("streaming symmetric: values must be finite");
    }
    const std::size_t kmax = coeff_.size() - 1;
    std::size_t hi = static_cast<std::size_t>(n_) + 1;
    if (hi > kmax) hi = kmax;
    for (std::size_t t = hi; t >= 1; --t) {
        coeff_[t] += coeff_[t - 1] * x;
    }
    ++n_;
}

double StreamingElementarySymmetric::symmetric_mean(std::size_t k) const {
    if (k < 1 || k > n_) {
        throw InputError("streaming symmetric mean: k must be in [1, count]");
    }
    if (k > degree_cap()) {
        throw InputError("streaming symmetric mean: k exceeds tracked degrees");
    }
    const ScaledReal& ek = coeff_[k];
    if (ek.is_zero()) return 0.0;
    if (k == 1) return ek.to_double() / static_cast<double>(n_);
    return mean_from_log(ek.log_abs(), n_, k);
}

}  // namespace permflow
