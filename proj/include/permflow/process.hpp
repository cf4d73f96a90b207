#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace permflow {

/// Process families available to the convergence experiments. They span
/// i.i.d., quasi-periodic, mixing and finite-state behavior, and every
/// coordinate exposes its integral in closed form (the analytic targets).
enum class ProcessKind { Iid, Rotation, DoublingBits, MarkovChain, ParetoTail };

std::string to_string(ProcessKind kind);
ProcessKind process_kind_from_string(const std::string& name);

/// Immutable description of a seeded stationary process emitting columns in
/// R^m. Serializes to/from JSON (see README for the schema). The stream
/// contract: identical (spec, seed) produce bit-identical column streams,
/// whether generated one column at a time or in batches.
struct ProcessSpec {
    ProcessKind kind = ProcessKind::Iid;
    unsigned m = 1;
    std::uint64_t seed = 0;

    // iid: coordinate i is uniform on [lo[i], hi[i]] (lo == hi: constant).
    std::vector<double> lo;
    std::vector<double> hi;

    // rotation / doubling_bits: f_i(w) = c[i] + cos(2*pi*(w + beta[i])).
    // rotation additionally advances w by alpha mod 1 per step; the default
    // angle is the golden-ratio conjugate.
    double alpha = 0.61803398874989485;
    std::vector<double> c;
    std::vector<double> beta;

    // markov_chain: row-stochastic irreducible transition matrix over K
    // states and an m x K observable table.
    std::vector<std::vector<double>> transition;
    std::vector<std::vector<double>> observables;

    // pareto_tail: P(f > t) = t^(-alpha_tail) for t >= 1; one coordinate.
    double alpha_tail = 1.5;

    static ProcessSpec iid_uniform(unsigned m, double lo, double hi,
                                   std::uint64_t seed);
    static ProcessSpec iid_uniform(std::vector<double> lo,
                                   std::vector<double> hi, std::uint64_t seed);
    static ProcessSpec constant(unsigned m, double value, std::uint64_t seed);
    static ProcessSpec rotation(std::vector<double> c, std::vector<double> beta,
                                double alpha, std::uint64_t seed);
    static ProcessSpec doubling_bits(std::vector<double> c,
                                     std::vector<double> beta,
                                     std::uint64_t seed);
    static ProcessSpec markov_chain(std::vector<std::vector<double>> transition,
                                    std::vector<std::vector<double>> observables,
                                    std::uint64_t seed);
    static ProcessSpec pareto_tail(double alpha_tail, std::uint64_t seed);

    /// Throws InputError on structural problems (non-stochastic or reducible
    /// transition matrix, mismatched parameter lengths, alpha_tail <= 0, ...).
    void validate() const;

    /// lambda_i, the integral of coordinate i. Throws InputError for
    /// Pareto tails with alpha_tail <= 1 (not integrable).
    double coordinate_mean(unsigned i) const;

    /// Product of the coordinate integrals, the limit the permanent
    /// experiment converges to.
    double expected_product() const;

    /// Integral of log f_i: closed form where available, adaptive Simpson
    /// quadrature (absolute 1e-10) for the explicit-on-[0,1) observables.
    /// Requires a strictly positive coordinate.
    double log_integral(unsigned i) const;

    /// Infimum of coordinate i over the state space.
    double observable_min(unsigned i) const;

    /// Stationary distribution of the Markov kinds.
    std::vector<double> stationary() const;

    nlohmann::json to_json() const;
    static ProcessSpec from_json(const nlohmann::json& j);
};

/// Orbit value of the bit-shift dynamics: the 64-bit window starting at bit
/// j of the seeded fair-bit stream. Consecutive windows obey
/// window(j+1) == (window(j) << 1) | next bit, exactly — the doubling map is
/// never iterated in floating point.
std::uint64_t doubling_window(std::uint64_t seed, std::uint64_t j);

/// Mutable orbit position. Single-threaded by contract; independent states
/// (distinct seeds) can run fully in parallel.
class ProcessState {
public:
    explicit ProcessState(const ProcessSpec& spec);

    unsigned dim() const { return spec_.m; }
    std::uint64_t steps() const { return step_; }
    const ProcessSpec& spec() const { return spec_; }

    /// Emit the next column f(T^j w) and advance one step.
    void next_column(std::span<double> out);

    /// Emit `ncols` consecutive columns, column-major. Bit-identical to the
    /// same number of next_column calls.
    void fill_columns(double* out, std::size_t ncols);

private:
    ProcessSpec spec_;
    std::uint64_t step_ = 0;
    double omega_ = 0.0;        // rotation
    unsigned markov_state_ = 0;  // markov chain

    void emit_iid(double* out, std::size_t ncols);
    void emit_pareto(double* out, std::size_t ncols);
};

}  // namespace permflow
