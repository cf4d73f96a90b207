// permflow: exact permanents of oblong matrices, symmetric means, and
// seeded convergence experiments against their analytic limits.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "permflow/errors.hpp"
#include "permflow/experiment.hpp"
#include "permflow/matrix.hpp"
#include "permflow/permanent.hpp"
#include "permflow/process.hpp"
#include "permflow/rng.hpp"
#include "permflow/subset_sums.hpp"
#include "permflow/sym_means.hpp"

namespace {

using namespace permflow;

std::string fmt(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

struct PermOptions {
    std::string file;
    std::string algo = "auto";
};

struct SymmeanOptions {
    std::string file;
    std::size_t k = 0;
    bool all = false;
    bool check_maclaurin = false;
};

struct ConvergeOptions {
    std::string spec_file;
    std::string experiment;
    std::optional<std::uint64_t> seed;
    unsigned seeds = 1;
    std::uint64_t n_max = 100000;
    double factor = 1.5;
    std::string format = "csv";
    std::string out;
    std::string subset = "1";
    double p = 0.5;
    unsigned sym_m = 1;
};

struct BenchOptions {
    std::vector<unsigned> m_list{2, 4, 6};
    std::vector<std::uint64_t> n_list{100, 1000};
    std::vector<std::string> algos{"naive", "binet-minc", "ryser"};
    unsigned reps = 5;
    std::uint64_t seed = 1;
};

double run_algorithm(const std::string& algo, const OblongMatrix& a,
                     const Caps& caps) {
    if (algo == "naive") return permanent_naive(a, caps);
    if (algo == "binet-minc") return permanent_binet_minc(SubsetSums::of(a), caps);
    if (algo == "ryser") return permanent_ryser_oblong(a, caps);
    if (algo == "auto") {
        const double ratio =
            static_cast<double>(a.cols()) / static_cast<double>(a.rows());
        return ratio >= 2.0
                   ? permanent_binet_minc(SubsetSums::of(a), caps)
                   : permanent_ryser_oblong(a, caps);
    }
    throw InputError("unknown algorithm '" + algo + "'");
}

int cmd_perm(const PermOptions& opt, const Caps& caps) {
    const OblongMatrix a = OblongMatrix::from_csv_file(opt.file);
    const double t0 = now_seconds();
    const double value = run_algorithm(opt.algo, a, caps);
    const double dt = now_seconds() - t0;
    std::cout << fmt(value) << "\n";
    std::cerr << "algorithm=" << opt.algo << " wall_seconds=" << fmt(dt)
              << "\n";
    return 0;
}

int cmd_symmean(const SymmeanOptions& opt) {
    const std::vector<double> x = vector_from_csv_file(opt.file);
    if (opt.all || opt.check_maclaurin) {
        const SymmetricMeanProfile prof = symmetric_mean_profile(x);
        if (opt.all) {
            std::string line;
            for (std::size_t i = 0; i < prof.values.size(); ++i) {
                if (i > 0) line += ", ";
                line += fmt(prof.values[i]);
            }
            std::cout << line << "\n";
        }
        if (opt.check_maclaurin) {
            const std::size_t bad = maclaurin_violations(prof);
            if (bad == 0) {
                std::cout << "OK\n";
            } else {
                std::cout << bad << " Maclaurin violations\n";
                return 1;
            }
        }
        return 0;
    }
    if (opt.k < 1) {
        throw InputError("symmean: pass -k K or --all");
    }
    std::cout << fmt(symmetric_mean(x, opt.k)) << "\n";
    return 0;
}

std::uint32_t parse_subset_mask(const std::string& text, unsigned m) {
    std::uint32_t mask = 0;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        int row = 0;
        std::size_t used = 0;
        try {
            row = std::stoi(tok, &used);
        } catch (const std::exception&) {
            throw InputError("subset: bad row token '" + tok + "'");
        }
        while (used < tok.size() && std::isspace(tok[used]) != 0) ++used;
        if (used != tok.size()) {
            throw InputError("subset: bad row token '" + tok + "'");
        }
        if (row < 1 || static_cast<unsigned>(row) > m) {
            throw InputError("subset: row " + tok + " out of [1, m]");
        }
        mask |= 1u << (row - 1);
    }
    if (mask == 0) throw InputError("subset: no rows given");
    return mask;
}

int cmd_converge(const ConvergeOptions& opt, const Caps& caps) {
    std::ifstream in(opt.spec_file);
    if (!in) throw InputError("cannot open " + opt.spec_file);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("spec json: ") + e.what());
    }
    ProcessSpec spec = ProcessSpec::from_json(j);

    if (opt.seed.has_value()) {
        spec.seed = *opt.seed;
    } else if (const char* env = std::getenv("PERMFLOW_SEED")) {
        spec.seed = std::strtoull(env, nullptr, 10);
    }

    std::uint64_t start = 1;
    if (opt.experiment == "permanent") start = spec.m;
    if (opt.experiment == "symmean-low") start = opt.sym_m;
    if (opt.experiment == "symmean-high") start = opt.sym_m + 1;
    const CheckpointSchedule sched =
        CheckpointSchedule::geometric(opt.n_max, opt.factor, std::max<std::uint64_t>(1, start));

    auto runner = [&](const ProcessSpec& s) -> RunResult {
        if (opt.experiment == "permanent") {
            return run_permanent_convergence(s, sched, caps);
        }
        if (opt.experiment == "subset-ratio") {
            return run_subset_ratio(s, parse_subset_mask(opt.subset, s.m), sched);
        }
        if (opt.experiment == "aaronson") {
            return run_aaronson_ratio(s, opt.p, sched);
        }
        if (opt.experiment == "symmean-low") {
            return run_symmetric_mean_low(s, opt.sym_m, sched);
        }
        if (opt.experiment == "symmean-high") {
            return run_symmetric_mean_high(s, opt.sym_m, sched);
        }
        if (opt.experiment == "max-ratio") {
            return run_max_ratio(s, sched);
        }
        throw InputError("unknown experiment '" + opt.experiment + "'");
    };

    std::ostringstream body;
    std::string summary;
    if (opt.seeds <= 1) {
        const RunResult rr = runner(spec);
        if (opt.format == "json") {
            write_json(body, rr);
        } else {
            write_records_csv(body, rr);
        }
        summary = "final rel_err = " + fmt(rr.final_record().rel_err);
        if (rr.hypothesis_warning) summary += " (hypothesis warning)";
    } else {
        const std::vector<RunResult> sweep =
            run_seed_sweep(spec, opt.seeds, runner);
        if (opt.format == "json") {
            nlohmann::json all = nlohmann::json::array();
            for (const RunResult& rr : sweep) {
                std::ostringstream one;
                write_json(one, rr);
                all.push_back(nlohmann::json::parse(one.str()));
            }
            body << all.dump(2) << "\n";
        } else {
            write_sweep_csv(body, sweep);
        }
        summary = "median final rel_err = " + fmt(median_final_rel_err(sweep));
    }

    if (opt.out.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream of(opt.out);
        if (!of) throw InputError("cannot write " + opt.out);
        of << body.str();
    }
    std::cerr << summary << "\n";
    return 0;
}

OblongMatrix bench_matrix(unsigned m, std::uint64_t n, std::uint64_t seed) {
    SplitMix64 rng(seed * 1000003ull + m * 1009ull + n);
    std::vector<double> entries(m * n);
    for (double& v : entries) v = 2.0 * rng.next_unit() - 1.0;
    return OblongMatrix(m, n, std::move(entries));
}

int cmd_bench(const BenchOptions& opt, const Caps& caps) {
    std::string table = "algorithm,m,n,reps,median_seconds,status\n";
    for (unsigned m : opt.m_list) {
        for (std::uint64_t n : opt.n_list) {
            if (n < m) continue;
            const OblongMatrix a = bench_matrix(m, n, opt.seed);

            // Cross-check every runnable algorithm before timing anything.
            std::vector<std::pair<std::string, double>> values;
            std::vector<std::string> skipped;
            for (const std::string& algo : opt.algos) {
                try {
                    values.emplace_back(algo, run_algorithm(algo, a, caps));
                } catch (const CapError&) {
                    skipped.push_back(algo);
                }
            }
            if (!values.empty()) {
                const double ref = values.front().second;
                double scale = std::fabs(ref);
                for (const auto& [algo, value] : values) {
                    scale = std::max(scale, std::fabs(value));
                }
                try {
                    scale = std::max(scale, permanent_binet_minc_terms(
                                                SubsetSums::of(a), caps)
                                                .magnitude);
                } catch (const CapError&) {
                }
                scale = std::max(scale, 1e-300);
                for (const auto& [algo, value] : values) {
                    if (std::fabs(value - ref) > 1e-9 * scale) {
                        std::cerr << "bench: " << algo << " disagrees at m="
                                  << m << " n=" << n << ": " << fmt(value)
                                  << " vs " << fmt(ref) << "\n";
                        return 1;
                    }
                }
            }

            for (const auto& [algo, value] : values) {
                (void)value;
                std::vector<double> times;
                times.reserve(opt.reps);
                for (unsigned rep = 0; rep < opt.reps; ++rep) {
                    // Repeat tiny cells until the sample is ~2ms long.
                    std::size_t iters = 1;
                    double dt = 0.0;
                    for (;;) {
                        const double t0 = now_seconds();
                        for (std::size_t it = 0; it < iters; ++it) {
                            volatile double sink = run_algorithm(algo, a, caps);
                            (void)sink;
                        }
                        dt = (now_seconds() - t0) / static_cast<double>(iters);
                        if (dt * static_cast<double>(iters) >= 2e-3 ||
                            iters >= 65536) {
                            break;
                        }
                        iters *= 4;
                    }
                    times.push_back(dt);
                }
                table += algo + "," + std::to_string(m) + "," +
                         std::to_string(n) + "," + std::to_string(opt.reps) +
                         "," + fmt(median(times)) + ",ok\n";
            }
            for (const std::string& algo : skipped) {
                table += algo + "," + std::to_string(m) + "," +
                         std::to_string(n) + "," + std::to_string(opt.reps) +
                         ",,skipped\n";
            }
        }
    }
    std::cout << table;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact permanents, symmetric means and ergodic-limit runs"};
    app.require_subcommand(1);

    Caps caps;
    app.add_option("--cap-naive", caps.naive_term_cap,
                   "maximum naive injection terms");
    app.add_option("--cap-subsets", caps.subset_enum_cap,
                   "maximum column subsets for ryser");
    app.add_option("--cap-m", caps.partition_m_cap,
                   "maximum rows for partition sweeps");

    PermOptions perm;
    CLI::App* perm_cmd = app.add_subcommand("perm", "permanent of a CSV matrix");
    perm_cmd->add_option("file", perm.file, "matrix CSV")->required();
    perm_cmd->add_option("--algo", perm.algo, "naive|binet-minc|ryser|auto")
        ->check(CLI::IsMember({"naive", "binet-minc", "ryser", "auto"}));

    SymmeanOptions symmean;
    CLI::App* sym_cmd =
        app.add_subcommand("symmean", "symmetric means of a CSV vector");
    sym_cmd->add_option("file", symmean.file, "vector CSV")->required();
    sym_cmd->add_option("-k", symmean.k, "mean order");
    sym_cmd->add_flag("--all", symmean.all, "print the whole profile");
    sym_cmd->add_flag("--check-maclaurin", symmean.check_maclaurin,
                      "verify the profile is nonincreasing");

    ConvergeOptions conv;
    CLI::App* conv_cmd =
        app.add_subcommand("converge", "run a convergence experiment");
    conv_cmd->add_option("--spec", conv.spec_file, "process spec JSON")
        ->required();
    conv_cmd
        ->add_option("--experiment", conv.experiment,
                     "permanent|subset-ratio|aaronson|symmean-low|"
                     "symmean-high|max-ratio")
        ->required()
        ->check(CLI::IsMember({"permanent", "subset-ratio", "aaronson",
                               "symmean-low", "symmean-high", "max-ratio"}));
    conv_cmd->add_option("--seed", conv.seed,
                         "override the spec seed (PERMFLOW_SEED also works)");
    conv_cmd->add_option("--seeds", conv.seeds,
                         "median mode: run this many consecutive seeds");
    conv_cmd->add_option("--n-max", conv.n_max, "final column count");
    conv_cmd->add_option("--factor", conv.factor, "checkpoint spacing");
    conv_cmd->add_option("--format", conv.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    conv_cmd->add_option("--out", conv.out, "write records here instead of stdout");
    conv_cmd->add_option("--subset", conv.subset,
                         "subset-ratio rows, e.g. 1,2 (1-based)");
    conv_cmd->add_option("--p", conv.p, "aaronson exponent in (0,1)");
    conv_cmd->add_option("--sym-m", conv.sym_m, "symmetric-mean order");

    BenchOptions bench;
    CLI::App* bench_cmd =
        app.add_subcommand("bench", "timing table across algorithms and sizes");
    bench_cmd->add_option("--m-list", bench.m_list, "row counts")
        ->delimiter(',');
    bench_cmd->add_option("--n-list", bench.n_list, "column counts")
        ->delimiter(',');
    bench_cmd->add_option("--algos", bench.algos, "algorithms to time")
        ->delimiter(',');
    bench_cmd->add_option("--reps", bench.reps, "repetitions per cell");
    bench_cmd->add_option("--seed", bench.seed, "matrix seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (perm_cmd->parsed()) return cmd_perm(perm, caps);
        if (sym_cmd->parsed()) return cmd_symmean(symmean);
        if (conv_cmd->parsed()) return cmd_converge(conv, caps);
        if (bench_cmd->parsed()) return cmd_bench(bench, caps);
    } catch (const CapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
