#include "permflow/permanent.hpp"

#include <bit>
#include <cmath>
#include <string>
#include <vector>

#include "permflow/errors.hpp"
#include "permflow/partitions.hpp"
#include "permflow/sym_means.hpp"

namespace permflow {

namespace {

constexpr double kExactIntLimit = 9007199254740992.0;  // 2^53

// (k)! for k <= 15, exact in double.
const double* factorial_table() {
    static const double fact[16] = {
        1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0, 40320.0, 362880.0,
        3628800.0, 39916800.0, 479001600.0, 6227020800.0, 87178291200.0,
        1307674368000.0};
    return fact;
}

double injection_count(std::uint64_t n, unsigned m) {
    double terms = 1.0;
    for (unsigned k = 0; k < m; ++k) terms *= static_cast<double>(n - k);
    return terms;
}

double naive_rec(const OblongMatrix& a, unsigned row,
                 std::vector<std::uint8_t>& used) {
    const unsigned m = static_cast<unsigned>(a.rows());
    const unsigned n = static_cast<unsigned>(a.cols());
    if (row == m) return 1.0;
    double acc = 0.0;
    for (unsigned j = 0; j < n; ++j) {
        if (used[j]) continue;
        used[j] = 1;
        acc += a.at(row, j) * naive_rec(a, row + 1, used);
        used[j] = 0;
    }
    return acc;
}

// Signed partition sweep shared by the raw and normalized evaluations.
template <typename SOfMask>
PermanentTerms binet_sweep(unsigned m, const Caps& caps, SOfMask&& s_of_mask) {
    const double* fact = factorial_table();
    PermanentTerms out;
    for_each_partition(m, caps, [&](const SetPartition& p) {
        double term = 1.0;
        for (unsigned b = 0; b < p.block_count; ++b) {
            const std::uint32_t mask = p.block_masks[b];
            term *= fact[std::popcount(mask) - 1] * s_of_mask(mask);
        }
        out.value += ((m - p.block_count) & 1u) ? -term : term;
        out.magnitude += std::fabs(term);
    });
    return out;
}

template <typename Swap>
void rd_walk(unsigned n, unsigned k, bool rev, Swap& swap) {
    if (k == 0 || k >= n) return;
    const unsigned m = n - 1;
    // The element leaving when the walk crosses from the subsets without
    // column m to those containing it (derived from the recursive two-part
    // construction; see the enumeration tests for the exhaustive check).
    const unsigned o = (k >= 2) ? (k - 2) : (m == 1 ? 0u : m - 1);
    if (!rev) {
        rd_walk(m, k, false, swap);
        swap(o, m);
        rd_walk(m, k - 1, true, swap);
    } else {
        rd_walk(m, k - 1, false, swap);
        swap(m, o);
        rd_walk(m, k, true, swap);
    }
}

// C(n, k) by the multiplicative rule; every intermediate is itself a
// binomial, so the result is exact while below 2^53.
double binomial(std::uint64_t n, unsigned k) {
    double c = 1.0;
    for (unsigned t = 1; t <= k; ++t) {
        c = c * static_cast<double>(n - k + t) / static_cast<double>(t);
    }
    return c;
}

}  // namespace

double falling_power(std::uint64_t n, unsigned m) {
    if (m > n) {
        throw InputError("falling_power: m must not exceed n");
    }
    double p = 1.0;
    for (unsigned k = 0; k < m; ++k) {
        p *= static_cast<double>(n - k);
        if (p > kExactIntLimit) return std::exp(falling_power_log(n, m));
    }
    return p;
}

double falling_power_log(std::uint64_t n, unsigned m) {
    if (m > n) {
        throw InputError("falling_power_log: m must not exceed n");
    }
    double s = 0.0;
    for (unsigned k = 0; k < m; ++k) {
        s += std::log(static_cast<double>(n - k));
    }
    return s;
}

double falling_power_correction(std::uint64_t n, unsigned m) {
    double c = 1.0;
    for (unsigned k = 1; k < m; ++k) {
        c *= static_cast<double>(n) / static_cast<double>(n - k);
    }
    return c;
}

double permanent_naive(const OblongMatrix& a, const Caps& caps) {
    const unsigned m = static_cast<unsigned>(a.rows());
    const double terms = injection_count(a.cols(), m);
    if (terms > caps.naive_term_cap) {
        throw CapError("permanent_naive: " + std::to_string(terms) +
                       " injection terms exceed cap " +
                       std::to_string(caps.naive_term_cap));
    }
    std::vector<std::uint8_t> used(a.cols(), 0);
    return naive_rec(a, 0, used);
}

PermanentTerms permanent_binet_minc_terms(const SubsetSums& s,
                                          const Caps& caps) {
    const double* raw = s.raw();
    return binet_sweep(s.rows(), caps,
                       [raw](std::uint32_t mask) { return raw[mask]; });
}

double permanent_binet_minc(const SubsetSums& s, const Caps& caps) {
    return permanent_binet_minc_terms(s, caps).value;
}

double permanent_binet_minc_normalized(const SubsetSums& s, const Caps& caps) {
    const unsigned m = s.rows();
    const std::uint64_t n = s.columns();
    if (n == 0) {
        throw InputError("normalized permanent: no columns absorbed yet");
    }
    // Pre-normalized sums s_I / n^|I|: singletons are empirical means, larger
    // blocks decay, so the sweep never sees large magnitudes.
    std::vector<double> norm(std::size_t{1} << m, 0.0);
    const double* raw = s.raw();
    const double nd = static_cast<double>(n);
    for (std::uint32_t mask = 1; mask < norm.size(); ++mask) {
        norm[mask] =
            raw[mask] / upow(nd, static_cast<unsigned>(std::popcount(mask)));
    }
    return binet_sweep(m, caps, [&norm](std::uint32_t mask) {
               return norm[mask];
           })
        .value;
}

void revolving_door_ksubsets(
    unsigned n, unsigned k,
    const std::function<void(unsigned, unsigned)>& swap) {
    if (k > n) throw InputError("revolving door: k must not exceed n");
    auto fn = [&swap](unsigned out, unsigned in) { swap(out, in); };
    rd_walk(n, k, false, fn);
}

double permanent_ryser_oblong(const OblongMatrix& a, const Caps& caps) {
    const unsigned m = static_cast<unsigned>(a.rows());
    const std::uint64_t n = a.cols();

    double subsets = 0.0;
    for (unsigned k = 1; k <= m; ++k) subsets += binomial(n, k);
    if (subsets > caps.subset_enum_cap) {
        throw CapError("permanent_ryser_oblong: " + std::to_string(subsets) +
                       " column subsets exceed cap " +
                       std::to_string(caps.subset_enum_cap));
    }

    std::vector<double> sigma(m + 1, 0.0);
    std::vector<double> rowsum(m, 0.0);
    for (unsigned k = 1; k <= m; ++k) {
        for (unsigned i = 0; i < m; ++i) {
            double s = 0.0;
            for (unsigned j = 0; j < k; ++j) s += a.at(i, j);
            rowsum[i] = s;
        }
        double acc = 1.0;
        for (unsigned i = 0; i < m; ++i) acc *= rowsum[i];
        sigma[k] = acc;

        auto step = [&](unsigned out, unsigned in) {
            double prod = 1.0;
            for (unsigned i = 0; i < m; ++i) {
                rowsum[i] = rowsum[i] + a.at(i, in) - a.at(i, out);
                prod *= rowsum[i];
            }
            sigma[k] += prod;
        };
        rd_walk(static_cast<unsigned>(n), k, false, step);
    }

    double per = 0.0;
    for (unsigned r = 0; r < m; ++r) {
        const double coeff = binomial(n - m + r, r) * sigma[m - r];
        per += (r & 1u) ? -coeff : coeff;
    }
    return per;
}

}  // namespace permflow
