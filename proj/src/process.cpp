#include "permflow/process.hpp"

#include <cmath>
#include <numbers>

#include "permflow/errors.hpp"
#include "permflow/kernels.hpp"
#include "permflow/rng.hpp"

namespace permflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wave(double c, double beta, double omega) {
    return c + std::cos(kTwoPi * (omega + beta));
}

// Adaptive Simpson with the usual 15x error heuristic.
template <typename F>
double simpson_segment(const F& f, double a, double b, double fa, double fm,
                       double fb, double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double sum = left + right;
    if (depth <= 0 || std::fabs(sum - whole) <= 15.0 * eps) {
        return sum + (sum - whole) / 15.0;
    }
    return simpson_segment(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) +
           simpson_segment(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double eps) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_segment(f, a, b, fa, fm, fb, whole, eps, 48);
}

void check_coordinate(const ProcessSpec& s, unsigned i) {
    if (i >= s.m) throw InputError("process: coordinate index out of range");
}

// Strong connectivity of the positive-probability transition graph.
bool irreducible(const std::vector<std::vector<double>>& p) {
    const std::size_t k = p.size();
    auto reachable = [&](bool forward) {
        std::vector<char> seen(k, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            const std::size_t s = stack.back();
            stack.pop_back();
            for (std::size_t t = 0; t < k; ++t) {
                const double w = forward ? p[s][t] : p[t][s];
                if (w > 0.0 && !seen[t]) {
                    seen[t] = 1;
                    stack.push_back(t);
                }
            }
        }
        for (char c : seen) {
            if (!c) return false;
        }
        return true;
    };
    return reachable(true) && reachable(false);
}

std::vector<double> stationary_of(const std::vector<std::vector<double>>& p) {
    // Solve pi (P - I) = 0 with sum(pi) = 1 by Gaussian elimination on the
    // transposed system; K is small.
    const std::size_t k = p.size();
    std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
    for (std::size_t r = 0; r + 1 < k; ++r) {
        for (std::size_t cidx = 0; cidx < k; ++cidx) {
            a[r][cidx] = p[cidx][r] - (r == cidx ? 1.0 : 0.0);
        }
    }
    for (std::size_t cidx = 0; cidx < k; ++cidx) a[k - 1][cidx] = 1.0;
    a[k - 1][k] = 1.0;

    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < k; ++r) {
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        }
        std::swap(a[col], a[piv]);
        if (std::fabs(a[col][col]) < 1e-14) {
            throw InputError("markov: singular stationary system");
        }
        for (std::size_t r = 0; r < k; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (std::size_t t = col; t <= k; ++t) a[r][t] -= f * a[col][t];
        }
    }
    std::vector<double> pi(k);
    for (std::size_t r = 0; r < k; ++r) pi[r] = a[r][k] / a[r][r];
    return pi;
}

unsigned sample_discrete(const std::vector<double>& weights, double u) {
    double acc = 0.0;
    for (std::size_t s = 0; s + 1 < weights.size(); ++s) {
        acc += weights[s];
        if (u < acc) return static_cast<unsigned>(s);
    }
    return static_cast<unsigned>(weights.size() - 1);
}

}  // namespace

std::string to_string(ProcessKind kind) {
    switch (kind) {
        case ProcessKind::Iid: return "iid";
        case ProcessKind::Rotation: return "rotation";
        case ProcessKind::DoublingBits: return "doubling_bits";
        case ProcessKind::MarkovChain: return "markov_chain";
        case ProcessKind::ParetoTail: return "pareto_tail";
    }
    return "unknown";
}

ProcessKind process_kind_from_string(const std::string& name) {
    if (name == "iid") return ProcessKind::Iid;
    if (name == "rotation") return ProcessKind::Rotation;
    if (name == "doubling_bits") return ProcessKind::DoublingBits;
    if (name == "markov_chain") return ProcessKind::MarkovChain;
    if (name == "pareto_tail") return ProcessKind::ParetoTail;
    throw InputError("process: unknown kind '" + name + "'");
}

ProcessSpec ProcessSpec::iid_uniform(unsigned m, double lo, double hi,
                                     std::uint64_t seed) {
    return iid_uniform(std::vector<double>(m, lo), std::vector<double>(m, hi),
                       seed);
}

ProcessSpec ProcessSpec::iid_uniform(std::vector<double> lo,
                                     std::vector<double> hi,
                                     std::uint64_t seed) {
    ProcessSpec s;
    s.kind = ProcessKind::Iid;
    s.m = static_cast<unsigned>(lo.size());
    s.lo = std::move(lo);
    s.hi = std::move(hi);
    s.seed = seed;
    s.validate();
    return s;
}

ProcessSpec ProcessSpec::constant(unsigned m, double value,
                                  std::uint64_t seed) {
    return iid_uniform(std::vector<double>(m, value),
                       std::vector<double>(m, value), seed);
}

ProcessSpec ProcessSpec::rotation(std::vector<double> c,
                                  std::vector<double> beta, double alpha,
                                  std::uint64_t seed) {
    ProcessSpec s;
    s.kind = ProcessKind::Rotation;
    s.m = static_cast<unsigned>(c.size());
    s.c = std::move(c);
    s.beta = std::move(beta);
    s.alpha = alpha;
    s.seed = seed;
    s.validate();
    return s;
}

ProcessSpec ProcessSpec::doubling_bits(std::vector<double> c,
                                       std::vector<double> beta,
                                       std::uint64_t seed) {
    ProcessSpec s;
    s.kind = ProcessKind::DoublingBits;
    s.m = static_cast<unsigned>(c.size());
    s.c = std::move(c);
    s.beta = std::move(beta);
    s.seed = seed;
    s.validate();
    return s;
}

ProcessSpec ProcessSpec::markov_chain(
    std::vector<std::vector<double>> transition,
    std::vector<std::vector<double>> observables, std::uint64_t seed) {
    ProcessSpec s;
    s.kind = ProcessKind::MarkovChain;
    s.m = static_cast<unsigned>(observables.size());
    s.transition = std::move(transition);
    s.observables = std::move(observables);
    s.seed = seed;
    s.validate();
    return s;
}

ProcessSpec ProcessSpec::pareto_tail(double alpha_tail, std::uint64_t seed) {
    ProcessSpec s;
    s.kind = ProcessKind::ParetoTail;
    s.m = 1;
    s.alpha_tail = alpha_tail;
    s.seed = seed;
    s.validate();
    return s;
}

void ProcessSpec::validate() const {
    if (m < 1) throw InputError("process: m must be at least 1");
    auto check_len = [this](const std::vector<double>& v, const char* what) {
        if (v.size() != m) {
            throw InputError(std::string("process: ") + what +
                             " must have m entries");
        }
        for (double x : v) {
            if (!std::isfinite(x)) {
                throw InputError(std::string("process: ") + what +
                                 " entries must be finite");
            }
        }
    };
    switch (kind) {
        case ProcessKind::Iid:
            check_len(lo, "lo");
            check_len(hi, "hi");
            for (unsigned i = 0; i < m; ++i) {
                if (lo[i] > hi[i]) {
                    throw InputError("process: iid needs lo <= hi");
                }
            }
            break;
        case ProcessKind::Rotation:
        case ProcessKind::DoublingBits:
            check_len(c, "c");
            check_len(beta, "beta");
            if (kind == ProcessKind::Rotation) {
                if (!std::isfinite(alpha) ||
                    alpha - std::floor(alpha) == 0.0) {
                    throw InputError(
                        "process: rotation angle must have a nonzero "
                        "fractional part");
                }
            }
            break;
        case ProcessKind::MarkovChain: {
            const std::size_t k = transition.size();
            if (k < 1) throw InputError("markov: empty transition matrix");
            for (const auto& row : transition) {
                if (row.size() != k) {
                    throw InputError("markov: transition matrix must be square");
                }
                double sum = 0.0;
                for (double w : row) {
                    if (!(w >= 0.0) || !std::isfinite(w)) {
                        throw InputError(
                            "markov: transition entries must be nonnegative");
                    }
                    sum += w;
                }
                if (std::fabs(sum - 1.0) > 1e-12) {
                    throw InputError("markov: rows must sum to 1");
                }
            }
            if (!irreducible(transition)) {
                throw InputError("markov: transition matrix is reducible");
            }
            if (observables.size() != m) {
                throw InputError("markov: observables must have m rows");
            }
            for (const auto& row : observables) {
                if (row.size() != k) {
                    throw InputError(
                        "markov: each observable needs one value per state");
                }
                for (double v : row) {
                    if (!std::isfinite(v)) {
                        throw InputError("markov: observables must be finite");
                    }
                }
            }
            break;
        }
        case ProcessKind::ParetoTail:
            if (!(alpha_tail > 0.0)) {
                throw InputError("pareto: tail index must be positive");
            }
            if (m != 1) {
                throw InputError("pareto: a single coordinate only");
            }
            break;
    }
}

double ProcessSpec::coordinate_mean(unsigned i) const {
    check_coordinate(*this, i);
    switch (kind) {
        case ProcessKind::Iid: return 0.5 * (lo[i] + hi[i]);
        case ProcessKind::Rotation:
        case ProcessKind::DoublingBits: return c[i];
        case ProcessKind::MarkovChain: {
            const std::vector<double> pi = stationary();
            double mean = 0.0;
            for (std::size_t s = 0; s < pi.size(); ++s) {
                mean += pi[s] * observables[i][s];
            }
            return mean;
        }
        case ProcessKind::ParetoTail:
            if (alpha_tail <= 1.0) {
                throw InputError(
                    "pareto: no closed-form mean for tail index <= 1");
            }
            return alpha_tail / (alpha_tail - 1.0);
    }
    throw InputError("process: unknown kind");
}

double ProcessSpec::expected_product() const {
    double p = 1.0;
    for (unsigned i = 0; i < m; ++i) p *= coordinate_mean(i);
    return p;
}

double ProcessSpec::observable_min(unsigned i) const {
    check_coordinate(*this, i);
    switch (kind) {
        case ProcessKind::Iid: return lo[i];
        case ProcessKind::Rotation:
        case ProcessKind::DoublingBits: return c[i] - 1.0;
        case ProcessKind::MarkovChain: {
            double mn = observables[i][0];
            for (double v : observables[i]) mn = std::min(mn, v);
            return mn;
        }
        case ProcessKind::ParetoTail: return 1.0;
    }
    throw InputError("process: unknown kind");
}

double ProcessSpec::log_integral(unsigned i) const {
    check_coordinate(*this, i);
    switch (kind) {
        case ProcessKind::Iid: {
            const double a = lo[i];
            const double b = hi[i];
            if (a < 0.0 || b <= 0.0) {
                throw InputError("log_integral: observable must be positive");
            }
            if (a == b) return std::log(a);
            // (b log b - a log a)/(b - a) - 1, with a log a -> 0 at a = 0.
            const double atop = a == 0.0 ? 0.0 : a * std::log(a);
            return (b * std::log(b) - atop) / (b - a) - 1.0;
        }
        case ProcessKind::Rotation:
        case ProcessKind::DoublingBits: {
            if (observable_min(i) <= 0.0) {
                throw InputError("log_integral: observable must be positive");
            }
            const double ci = c[i];
            const double bi = beta[i];
            return adaptive_simpson(
                [ci, bi](double u) { return std::log(wave(ci, bi, u)); }, 0.0,
                1.0, 1e-10);
        }
        case ProcessKind::MarkovChain: {
            if (observable_min(i) <= 0.0) {
                throw InputError("log_integral: observable must be positive");
            }
            const std::vector<double> pi = stationary();
            double acc = 0.0;
            for (std::size_t s = 0; s < pi.size(); ++s) {
                acc += pi[s] * std::log(observables[i][s]);
            }
            return acc;
        }
        case ProcessKind::ParetoTail:
            return 1.0 / alpha_tail;
    }
    throw InputError("process: unknown kind");
}

std::vector<double> ProcessSpec::stationary() const {
    if (kind != ProcessKind::MarkovChain) {
        throw InputError("stationary: only defined for markov_chain");
    }
    return stationary_of(transition);
}

std::uint64_t doubling_window(std::uint64_t seed, std::uint64_t j) {
    const std::uint64_t a = j >> 6;
    const unsigned r = static_cast<unsigned>(j & 63u);
    const std::uint64_t wa = stream_word(seed, a);
    if (r == 0) return wa;
    const std::uint64_t wb = stream_word(seed, a + 1);
    return (wa << r) | (wb >> (64u - r));
}

ProcessState::ProcessState(const ProcessSpec& spec) : spec_(spec) {
    spec_.validate();
    switch (spec_.kind) {
        case ProcessKind::Rotation:
            omega_ = to_unit(stream_word(spec_.seed, 0));
            break;
        case ProcessKind::MarkovChain:
            markov_state_ = sample_discrete(spec_.stationary(),
                                            to_unit(stream_word(spec_.seed, 0)));
            break;
        default: break;
    }
}

void ProcessState::next_column(std::span<double> out) {
    if (out.size() != spec_.m) {
        throw InputError("process: output span has wrong length");
    }
    fill_columns(out.data(), 1);
}

void ProcessState::emit_iid(double* out, std::size_t ncols) {
    const unsigned m = spec_.m;
    kernels::active().uniform_fill(out, ncols * m, spec_.seed, step_ * m);
    for (std::size_t cidx = 0; cidx < ncols; ++cidx) {
        double* col = out + cidx * m;
        for (unsigned i = 0; i < m; ++i) {
            col[i] = spec_.lo[i] + col[i] * (spec_.hi[i] - spec_.lo[i]);
        }
    }
}

void ProcessState::emit_pareto(double* out, std::size_t ncols) {
    kernels::active().uniform_fill(out, ncols, spec_.seed, step_);
    const double inv = -1.0 / spec_.alpha_tail;
    for (std::size_t cidx = 0; cidx < ncols; ++cidx) {
        out[cidx] = std::pow(1.0 - out[cidx], inv);
    }
}

void ProcessState::fill_columns(double* out, std::size_t ncols) {
    const unsigned m = spec_.m;
    switch (spec_.kind) {
        case ProcessKind::Iid:
            emit_iid(out, ncols);
            step_ += ncols;
            return;
        case ProcessKind::ParetoTail:
            emit_pareto(out, ncols);
            step_ += ncols;
            return;
        case ProcessKind::Rotation:
            for (std::size_t cidx = 0; cidx < ncols; ++cidx) {
                double* col = out + cidx * m;
                for (unsigned i = 0; i < m; ++i) {
                    col[i] = wave(spec_.c[i], spec_.beta[i], omega_);
                }
                omega_ += spec_.alpha - std::floor(spec_.alpha);
                if (omega_ >= 1.0) omega_ -= 1.0;
                ++step_;
            }
            return;
        case ProcessKind::DoublingBits:
            for (std::size_t cidx = 0; cidx < ncols; ++cidx) {
                const double w =
                    static_cast<double>(doubling_window(spec_.seed, step_)) *
                    0x1.0p-64;
                double* col = out + cidx * m;
                for (unsigned i = 0; i < m; ++i) {
                    col[i] = wave(spec_.c[i], spec_.beta[i], w);
                }
                ++step_;
            }
            return;
        case ProcessKind::MarkovChain:
            for (std::size_t cidx = 0; cidx < ncols; ++cidx) {
                double* col = out + cidx * m;
                for (unsigned i = 0; i < m; ++i) {
                    col[i] = spec_.observables[i][markov_state_];
                }
                markov_state_ = sample_discrete(
                    spec_.transition[markov_state_],
                    to_unit(stream_word(spec_.seed, step_ + 1)));
                ++step_;
            }
            return;
    }
    throw InputError("process: unknown kind");
}

nlohmann::json ProcessSpec::to_json() const {
    nlohmann::json j;
    j["kind"] = permflow::to_string(kind);
    j["m"] = m;
    j["seed"] = seed;
    nlohmann::json params;
    switch (kind) {
        case ProcessKind::Iid:
            params["lo"] = lo;
            params["hi"] = hi;
            break;
        case ProcessKind::Rotation:
            params["alpha"] = alpha;
            params["c"] = c;
            params["beta"] = beta;
            break;
        case ProcessKind::DoublingBits:
            params["c"] = c;
            params["beta"] = beta;
            break;
        case ProcessKind::MarkovChain:
            params["transition"] = transition;
            params["observables"] = observables;
            break;
        case ProcessKind::ParetoTail:
            params["alpha_tail"] = alpha_tail;
            break;
    }
    j["params"] = params;
    return j;
}

ProcessSpec ProcessSpec::from_json(const nlohmann::json& j) {
    try {
        ProcessSpec s;
        s.kind = process_kind_from_string(j.at("kind").get<std::string>());
        s.m = j.at("m").get<unsigned>();
        s.seed = j.at("seed").get<std::uint64_t>();
        const nlohmann::json& params = j.at("params");
        switch (s.kind) {
            case ProcessKind::Iid:
                s.lo = params.at("lo").get<std::vector<double>>();
                s.hi = params.at("hi").get<std::vector<double>>();
                break;
            case ProcessKind::Rotation:
                s.alpha = params.value("alpha", s.alpha);
                s.c = params.at("c").get<std::vector<double>>();
                s.beta = params.at("beta").get<std::vector<double>>();
                break;
            case ProcessKind::DoublingBits:
                s.c = params.at("c").get<std::vector<double>>();
                s.beta = params.at("beta").get<std::vector<double>>();
                break;
            case ProcessKind::MarkovChain:
                s.transition =
                    params.at("transition").get<std::vector<std::vector<double>>>();
                s.observables =
                    params.at("observables").get<std::vector<std::vector<double>>>();
                break;
            case ProcessKind::ParetoTail:
                s.alpha_tail = params.at("alpha_tail").get<double>();
                break;
        }
        s.validate();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("process spec json: ") + e.what());
    }
}

}  // namespace permflow
