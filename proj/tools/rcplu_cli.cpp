// rcplu command-line harness: matrix generation, factorization, solves and
// the experiment suites, all emitting CSV or Matrix Market.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rcplu/rcplu.hpp"

namespace {

using namespace rcplu;
namespace ex = rcplu::experiments;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

const std::vector<std::string> kCommands = {
    "generate",         "factor",   "solve",       "bench",         "growth-sweep",
    "residual-experiment", "element-growth", "jl-check", "theory-check"};

const std::vector<std::string> kAllStrategies = {"genp", "gepp", "gecp", "gerp", "ge2cp", "gercp"};

struct Options {
    std::string command;
    std::string family = "gaussian";
    std::size_t n = 0;
    std::vector<std::string> params;
    std::vector<std::string> sizes;
    std::vector<std::string> strategies;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    std::string out;
    std::string matrix;
    std::string rhs;
    std::string lu_out;
    std::string config;
    std::optional<std::size_t> r;
    std::optional<double> g;
    std::optional<double> epsilon;
    std::optional<double> delta;
    std::optional<std::size_t> block_size;
    bool force_stable = false;
    bool track_growth = false;
};

/// Usage problems discovered after CLI11 has parsed the flags.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Accepts "10,20,30" style lists (CLI11 already split on commas) and
// "lo:hi:step" ranges.
std::vector<std::size_t> parse_sizes(const std::vector<std::string>& items) {
    std::vector<std::size_t> out;
    for (const auto& item : items) {
        std::vector<std::size_t> parts;
        std::stringstream ss(item);
        std::string tok;
        while (std::getline(ss, tok, ':')) {
            try {
                std::size_t used = 0;
                const long long v = std::stoll(tok, &used);
                if (used != tok.size() || v < 1) {
                    throw std::invalid_argument(tok);
                }
                parts.push_back(static_cast<std::size_t>(v));
            } catch (const std::exception&) {
                throw UsageError("bad size '" + item + "'");
            }
        }
        if (parts.size() == 1) {
            out.push_back(parts[0]);
        } else if (parts.size() == 2 || parts.size() == 3) {
            const std::size_t step = parts.size() == 3 ? parts[2] : 1;
            for (std::size_t v = parts[0]; v <= parts[1]; v += step) {
                out.push_back(v);
            }
        } else {
            throw UsageError("bad size range '" + item + "'");
        }
    }
    return out;
}

SketchConfig sketch_config(const Options& o) {
    SketchConfig c = o.config.empty() ? SketchConfig{} : read_sketch_config_file(o.config);
    if (o.r) c.r = *o.r;
    if (o.g) c.g = *o.g;
    if (o.epsilon) c.epsilon = *o.epsilon;
    if (o.delta) c.delta = *o.delta;
    if (o.block_size) c.block_size = *o.block_size;
    if (o.force_stable) c.force_stable_update = true;
    c.seed = o.seed;
    c.validate();
    return c;
}

gen::GeneratorSpec generator_spec(const Options& o, std::size_t n) {
    gen::GeneratorSpec g;
    g.family = gen::parse_family(o.family);
    g.n = n;
    g.seed = o.seed;
    for (const auto& kv : o.params) {
        gen::add_param(g, kv);
    }
    g.validate();
    return g;
}

std::vector<std::string> strategies_or(const Options& o, std::vector<std::string> fallback) {
    std::vector<std::string> s = o.strategies.empty() ? std::move(fallback) : o.strategies;
    for (const auto& name : s) {
        parse_strategy(name);
    }
    return s;
}

ex::ExperimentSpec experiment_spec(const Options& o, std::vector<std::string> default_strategies) {
    ex::ExperimentSpec spec;
    spec.sizes = parse_sizes(o.sizes);
    spec.strategies = strategies_or(o, std::move(default_strategies));
    spec.trials = o.trials;
    spec.seed = o.seed;
    spec.sketch = sketch_config(o);
    spec.family = gen::parse_family(o.family);
    for (const auto& kv : o.params) {
        gen::GeneratorSpec tmp;
        gen::add_param(tmp, kv);
        spec.family_params.insert(tmp.params.begin(), tmp.params.end());
    }
    spec.validate();
    gen::GeneratorSpec check;
    check.params = spec.family_params;
    check.n = 1;
    check.validate();
    return spec;
}

// Opens --out or falls back to stdout.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) {
                throw std::runtime_error("cannot open '" + path + "' for writing");
            }
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    void finish() {
        stream().flush();
        if (!stream()) {
            throw std::runtime_error("write failed");
        }
    }

private:
    std::ofstream file_;
};

Matrix input_matrix(const Options& o, std::string& source) {
    if (!o.matrix.empty()) {
        source = o.matrix;
        Matrix a = mm::read_file(o.matrix);
        if (!a.square()) {
            throw std::runtime_error("matrix in '" + o.matrix + "' is not square");
        }
        return a;
    }
    if (o.n == 0) {
        throw UsageError("give --matrix FILE or --family NAME --n N");
    }
    source = o.family;
    return gen::generate(generator_spec(o, o.n));
}

// Validation happens before any work so that usage problems exit with 1.
struct Plan {
    std::function<int()> run;
};

Plan plan_generate(const Options& o) {
    if (o.n == 0) {
        throw UsageError("generate needs --n");
    }
    const gen::GeneratorSpec spec = generator_spec(o, o.n);
    return {[o, spec]() {
        const Matrix a = gen::generate(spec);
        Output out(o.out);
        mm::write(out.stream(), a,
                  "family=" + std::string(gen::family_name(spec.family)) +
                      " n=" + std::to_string(spec.n) + " seed=" + std::to_string(spec.seed));
        out.finish();
        return kExitOk;
    }};
}

void warn_if_clamped(const Factorization& f, std::size_t requested) {
    if (f.sketch && f.sketch->r_clamped) {
        std::cerr << "warning: r=" << requested << " exceeds n; clamped to " << f.sketch->sampling_dim
                  << '\n';
    }
}

Plan plan_factor(const Options& o) {
    const auto strategies = strategies_or(o, {"gepp"});
    const SketchConfig cfg = sketch_config(o);
    if (!o.lu_out.empty() && strategies.size() != 1) {
        throw UsageError("--lu-out needs exactly one strategy");
    }
    if (o.matrix.empty()) {
        if (o.n == 0) {
            throw UsageError("give --matrix FILE or --family NAME --n N");
        }
        generator_spec(o, o.n);
    }
    return {[o, strategies, cfg]() {
        std::string source;
        const Matrix a = input_matrix(o, source);
        ex::CsvTable table("rcplu.factor.v1",
                           {"source", "n", "strategy", "seed", "singular", "rho_elem", "rho_col",
                            "backward_error", "comparisons", "row_entry_swaps", "col_entry_swaps",
                            "rook_alternations", "sketched_pivots", "exact_pivots", "fast_updates",
                            "stable_updates", "wall_seconds", "status"});
        int code = kExitOk;
        for (const auto& name : strategies) {
            std::vector<std::string> row{source, std::to_string(a.rows()), name,
                                         std::to_string(o.seed)};
            try {
                const auto t0 = std::chrono::steady_clock::now();
                const Factorization f =
                    factorize(a, PivotStrategy::named(name, cfg), o.track_growth, o.seed);
                const double secs =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                const auto cnt = [](std::size_t v) { return std::to_string(v); };
                warn_if_clamped(f, cfg.r);
                const SketchUsage su = f.sketch.value_or(SketchUsage{});
                row.insert(row.end(),
                           {f.singular ? "1" : "0",
                            f.stats ? ex::fmt(element_growth(*f.stats)) : "",
                            f.stats ? ex::fmt(column_growth(*f.stats)) : "",
                            ex::fmt(backward_error(a, f)), cnt(f.counters.comparisons),
                            cnt(f.counters.row_entry_swaps), cnt(f.counters.col_entry_swaps),
                            cnt(f.counters.rook_alternations), cnt(su.sketched_pivots),
                            cnt(su.exact_pivots), cnt(su.fast_updates), cnt(su.stable_updates),
                            ex::fmt(secs), "ok"});
                if (!o.lu_out.empty()) {
                    mm::write_file(o.lu_out, f.lu, "packed LU, strategy=" + name);
                }
            } catch (const std::exception& e) {
                row.resize(4);
                row.insert(row.end(), 13, "");
                row.push_back(std::string("error:") + e.what());
                code = kExitRuntime;
            }
            table.add(std::move(row));
        }
        Output out(o.out);
        table.write(out.stream());
        out.finish();
        return code;
    }};
}

Plan plan_solve(const Options& o) {
    const auto strategies = strategies_or(o, {"gepp"});
    if (strategies.size() != 1) {
        throw UsageError("solve takes exactly one strategy");
    }
    const SketchConfig cfg = sketch_config(o);
    if (o.matrix.empty()) {
        if (o.n == 0) {
            throw UsageError("give --matrix FILE or --family NAME --n N");
        }
        generator_spec(o, o.n);
    }
    return {[o, strategy = strategies.front(), cfg]() {
        std::string source;
        const Matrix a = input_matrix(o, source);
        const Vector b =
            o.rhs.empty() ? gen::rhs_gaussian(a.rows(), o.seed) : mm::to_vector(mm::read_file(o.rhs));
        const Factorization f = factorize(a, PivotStrategy::named(strategy, cfg), false, o.seed);
        warn_if_clamped(f, cfg.r);
        const Vector x = solve(f, b);
        std::cerr << "relative_residual=" << ex::fmt(relative_residual(a, x, b)) << '\n';
        Output out(o.out);
        mm::write(out.stream(), mm::as_column(x), "solution, strategy=" + strategy);
        out.finish();
        return kExitOk;
    }};
}

Plan plan_table(const Options& o, std::function<ex::CsvTable(const ex::ExperimentSpec&)> fn,
                std::vector<std::string> default_strategies) {
    if (o.sizes.empty()) {
        throw UsageError("--sizes is required for this command");
    }
    const ex::ExperimentSpec spec = experiment_spec(o, std::move(default_strategies));
    return {[o, spec, fn]() {
        const ex::CsvTable table = fn(spec);
        Output out(o.out);
        table.write(out.stream());
        out.finish();
        return kExitOk;
    }};
}

Plan plan_bench(const Options& o) {
    if (o.sizes.empty()) {
        throw UsageError("--sizes is required for bench");
    }
    const ex::ExperimentSpec spec = experiment_spec(o, {"gepp", "gercp"});
    return {[o, spec]() {
        const ex::BenchResult res = ex::run_bench(spec);
        Output out(o.out);
        res.result.table.write(out.stream());
        out.finish();
        for (const auto& ov : res.overhead) {
            std::cerr << "n=" << ov.n << " gercp overhead vs gepp: mean "
                      << ex::fmt(100.0 * ov.mean_based) << "%, best-of " << ex::fmt(100.0 * ov.min_based)
                      << "%\n";
        }
        return kExitOk;
    }};
}

Plan plan_jl(const Options& o) {
    if (o.sizes.empty()) {
        throw UsageError("--sizes (vector dimensions) is required for jl-check");
    }
    ex::ExperimentSpec spec;
    spec.sizes = parse_sizes(o.sizes);
    spec.trials = o.trials;
    spec.seed = o.seed;
    spec.sketch = sketch_config(o);
    return {[o, spec]() {
        const ex::CsvTable table = ex::run_jl_check(spec);
        Output out(o.out);
        table.write(out.stream());
        out.finish();
        return kExitOk;
    }};
}

Plan plan_theory(const Options& o) {
    return {[o]() {
        const std::size_t trials = std::max<std::size_t>(o.trials, 1000);
        const ex::CsvTable table = ex::run_theory_check(trials, o.seed);
        Output out(o.out);
        table.write(out.stream());
        out.finish();
        std::size_t failed = 0;
        for (const auto& row : table.rows()) {
            failed += row.back() != "pass";
        }
        if (failed) {
            std::cerr << failed << " of " << table.rows().size() << " checks failed\n";
            return kExitRuntime;
        }
        return kExitOk;
    }};
}

Plan make_plan(const Options& o) {
    if (o.trials < 1) {
        throw UsageError("--trials must be at least 1");
    }
    const std::string& c = o.command;
    if (c == "generate") return plan_generate(o);
    if (c == "factor") return plan_factor(o);
    if (c == "solve") return plan_solve(o);
    if (c == "bench") return plan_bench(o);
    if (c == "growth-sweep")
        return plan_table(o, [](const auto& s) { return ex::run_growth_sweep(s).table; }, kAllStrategies);
    if (c == "residual-experiment")
        return plan_table(o, [](const auto& s) { return ex::run_residual_experiment(s).table; },
                          kAllStrategies);
    if (c == "element-growth")
        return plan_table(o, [](const auto& s) { return ex::run_element_growth_random(s).table; },
                          kAllStrategies);
    if (c == "jl-check") return plan_jl(o);
    if (c == "theory-check") return plan_theory(o);
    throw UsageError("unknown command '" + c + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rcplu: dense LU with classical and randomized complete pivoting"};
    app.set_version_flag("--version", "rcplu 0.1.0");
    Options o;
    std::string positional;
    app.add_option("command_pos", positional, "Command (same as --command)")
        ->check(CLI::IsMember(kCommands));
    app.add_option("--command", o.command, "Command to run")->check(CLI::IsMember(kCommands));
    app.add_option("--family", o.family, "Matrix family for generated inputs");
    app.add_option("--n", o.n, "Matrix size for generate/factor/solve");
    app.add_option("--param", o.params, "Family parameter key=val (repeatable)");
    app.add_option("--sizes", o.sizes, "Sizes: comma list or lo:hi[:step]")->delimiter(',');
    app.add_option("--strategies", o.strategies, "Strategies: genp,gepp,gecp,gerp,ge2cp,gercp")
        ->delimiter(',');
    app.add_option("--trials", o.trials, "Trials per (n, strategy)");
    app.add_option("--seed", o.seed, "Base seed; trial t uses seed + t");
    app.add_option("--out", o.out, "Output path (default stdout)");
    app.add_option("--matrix", o.matrix, "Input matrix (Matrix Market)");
    app.add_option("--rhs", o.rhs, "Right-hand side (Matrix Market, n x 1)");
    app.add_option("--lu-out", o.lu_out, "Write the packed LU factors (factor)");
    app.add_option("--config", o.config, "Sketch config file (key = value)");
    app.add_option("--r", o.r, "Sampling dimension");
    app.add_option("--g", o.g, "Column threshold in (0, 1]");
    app.add_option("--epsilon", o.epsilon, "JL distortion");
    app.add_option("--delta", o.delta, "Failure probability");
    app.add_option("--block-size", o.block_size, "Panel width");
    app.add_flag("--force-stable-update", o.force_stable, "Always use the division-free update");
    app.add_flag("--track-growth", o.track_growth, "Record growth statistics (factor)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    if (!positional.empty() && !o.command.empty() && positional != o.command) {
        std::cerr << "error: command given twice ('" << positional << "' and '" << o.command << "')\n";
        return kExitUsage;
    }
    if (o.command.empty()) {
        o.command = positional;
    }
    if (o.command.empty()) {
        std::cerr << app.help();
        return kExitUsage;
    }

    Plan plan;
    try {
        plan = make_plan(o);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ArgumentError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    try {
        return plan.run();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
