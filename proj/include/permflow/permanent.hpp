#pragma once

#include <cstdint>
#include <functional>

#include "permflow/caps.hpp"
#include "permflow/matrix.hpp"
#include "permflow/subset_sums.hpp"

namespace permflow {

/// n * (n-1) * ... * (n-m+1), the number of injections from an m-set into an
/// n-set. Exact while the product fits the 2^53 integer range of a double,
/// exp(falling_power_log) beyond that.
double falling_power(std::uint64_t n, unsigned m);

/// log of the falling power, summed term by term.
double falling_power_log(std::uint64_t n, unsigned m);

/// Sum of a(1,t(1))...a(m,t(m)) over all injections t, by direct enumeration.
/// The oracle the other algorithms are validated against. Throws CapError
/// when the term count n^(falling m) exceeds caps.naive_term_cap.
double permanent_naive(const OblongMatrix& a, const Caps& caps = {});

/// Permanent from streamed subset sums: signed sweep over all set
/// partitions of the rows, each partition contributing
/// (-1)^(m-|P|) * prod over blocks I of (|I|-1)! * s_I.
double permanent_binet_minc(const SubsetSums& s, const Caps& caps = {});

struct PermanentTerms {
    double value = 0.0;
    /// Sum of |partition term| — the cancellation scale. Comparisons of
    /// near-zero permanents are tolerated relative to this magnitude.
    double magnitude = 0.0;
};

PermanentTerms permanent_binet_minc_terms(const SubsetSums& s,
                                          const Caps& caps = {});

/// per(A) / n^m evaluated from the pre-normalized sums s_I / n^|I| without
/// ever forming the raw permanent; safe for very long streams where the raw
/// alternating sum would overflow. Multiply by n^m / n^(falling m)
/// (see falling_power_correction) to recover per(A) / n^(falling m).
double permanent_binet_minc_normalized(const SubsetSums& s,
                                       const Caps& caps = {});

/// prod over k < m of n / (n - k) = n^m / n^(falling m).
double falling_power_correction(std::uint64_t n, unsigned m);

/// Permanent via the size-partitioned subset expansion
///   per(A) = sum over r in [0, m) of (-1)^r C(n-m+r, r) sigma_(m-r),
/// where sigma_k sums, over all k-column subsets S, the product over rows of
/// the row sums restricted to S. Subsets of each size are walked in
/// revolving-door order so each step updates the row-sum vector in O(m).
double permanent_ryser_oblong(const OblongMatrix& a, const Caps& caps = {});

/// Revolving-door walk over all k-element subsets of {0..n-1}. The implicit
/// initial subset is {0,...,k-1}; `swap(out, in)` fires once per transition
/// and consecutive subsets differ by exactly that one exchange. Exposed for
/// the enumeration property tests.
void revolving_door_ksubsets(unsigned n, unsigned k,
                             const std::function<void(unsigned, unsigned)>& swap);

}  // namespace permflow
