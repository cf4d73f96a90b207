#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "permflow/caps.hpp"
#include "permflow/scaled_real.hpp"

namespace permflow {

/// E_k(x), the sum of all products of k distinct entries, via the column
/// recurrence e_t += x_j * e_(t-1) (t descending). Runs in raw doubles while
/// every coefficient stays inside the representable window and transparently
/// redoes the pass in scaled arithmetic otherwise, so n up to 1e6 and |x| up
/// to 1e3 cannot overflow. E_0 = 1.
ScaledReal elementary_symmetric(std::span<const double> x, std::size_t k);

/// k-th symmetric mean (E_k(x) / C(n,k))^(1/k) for nonnegative x, evaluated
/// in the log domain. M_1 is the arithmetic mean (computed directly), M_n
/// the geometric mean. Returns 0 when E_k = 0.
double symmetric_mean(std::span<const double> x, std::size_t k);

struct SymmetricMeanProfile {
    std::size_t n = 0;
    /// values[k-1] = M_k for k = 1..n.
    std::vector<double> values;
    /// log_values[k-1] = log M_k; -inf when E_k = 0.
    std::vector<double> log_values;
};

/// All symmetric means M_1..M_n from one recurrence pass retaining every
/// coefficient (O(n^2)).
SymmetricMeanProfile symmetric_mean_profile(std::span<const double> x);

/// Number of adjacent pairs violating M_k >= M_(k+1) - slack * max(1, M_k).
std::size_t maclaurin_violations(const SymmetricMeanProfile& profile,
                                 double slack = 1e-12);

/// E_m rebuilt from power sums p[0] = p_1, ..., p[m-1] = p_m via the signed
/// set-partition sweep (the equal-rows specialization of the permanent
/// expansion, equivalent to Newton's identities).
double elementary_from_power_sums(std::span<const double> p,
                                  const Caps& caps = {});

/// log C(n, k).
double log_binomial(std::uint64_t n, std::uint64_t k);

/// x^e by repeated multiplication; used instead of std::pow for small
/// integer exponents so normalization is identical on every code path.
double upow(double x, unsigned e);

/// Streaming form of the recurrence: absorbs one value at a time and keeps
/// only the scaled coefficients of degree 0..kmax. The convergence runs use
/// it to track E_m along a process orbit in O(kmax) per step.
class StreamingElementarySymmetric {
public:
    explicit StreamingElementarySymmetric(std::size_t kmax);

    void push(double x);

    std::uint64_t count() const { return n_; }
    std::size_t degree_cap() const { return coeff_.size() - 1; }
    const ScaledReal& coefficient(std::size_t k) const { return coeff_[k]; }

    /// M_k of the absorbed values (requires k <= count()).
    double symmetric_mean(std::size_t k) const;

private:
    std::vector<ScaledReal> coeff_;
    std::uint64_t n_ = 0;
};

}  // namespace permflow
