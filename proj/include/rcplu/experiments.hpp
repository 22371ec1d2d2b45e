#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rcplu/diagnostics.hpp"
#include "rcplu/errors.hpp"
#include "rcplu/genmat.hpp"
#include "rcplu/lu.hpp"
#include "rcplu/matrix.hpp"
#include "rcplu/sketch.hpp"

// Experiment drivers behind the command-line tool. Each driver returns a
// CsvTable (rows in deterministic (n, strategy, trial) order) plus the
// aggregates the caller may want to assert on.

namespace rcplu::experiments {

class CsvTable {
public:
    CsvTable(std::string schema, std::vector<std::string> header)
        : schema_(std::move(schema)), header_(std::move(header)) {}

    void add(std::vector<std::string> row) {
        if (row.size() != header_.size()) {
            throw InternalInvariantError("csv row has " + std::to_string(row.size()) +
                                         " cells, header has " + std::to_string(header_.size()));
        }
        rows_.push_back(std::move(row));
    }

    const std::vector<std::string>& header() const noexcept { return header_; }
    const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }
    const std::string& schema() const noexcept { return schema_; }

    void write(std::ostream& out) const {
        out << "# schema=" << schema_ << '\n';
        write_row(out, header_);
        for (const auto& r : rows_) {
            write_row(out, r);
        }
    }

private:
    static std::string quote(const std::string& cell) {
        if (cell.find_first_of(",\"\n") == std::string::npos) {
            return cell;
        }
        std::string q = "\"";
        for (char c : cell) {
            if (c == '"') {
                q += '"';
            }
            q += c == '\n' ? ' ' : c;
        }
        return q + '"';
    }

    static void write_row(std::ostream& out, const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out << ',';
            }
            out << quote(row[i]);
        }
        out << '\n';
    }

    std::string schema_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

struct ExperimentSpec {
    std::vector<std::size_t> sizes;
    std::vector<std::string> strategies;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    SketchConfig sketch;
    gen::Family family = gen::Family::gaussian;
    std::map<std::string, double> family_params;

    void validate() const {
        if (sizes.empty()) {
            throw ArgumentError("no matrix sizes given");
        }
        if (strategies.empty()) {
            throw ArgumentError("no strategies given");
        }
        if (trials < 1) {
            throw ArgumentError("trials must be at least 1");
        }
        for (std::size_t n : sizes) {
            if (n < 1) {
                throw ArgumentError("matrix sizes must be positive");
            }
        }
        for (const auto& s : strategies) {
            parse_strategy(s);
        }
        sketch.validate();
    }

    std::uint64_t trial_seed(std::size_t trial) const { return seed + trial; }

    PivotStrategy strategy(const std::string& name) const {
        return PivotStrategy::named(name, sketch);
    }

    Matrix matrix(std::size_t n, std::uint64_t s) const {
        gen::GeneratorSpec g;
        g.family = family;
        g.n = n;
        g.params = family_params;
        g.seed = s;
        return gen::generate(g);
    }
};

/// Mean (and minimum) of one metric over the successful trials of an
/// (n, strategy) cell.
struct Aggregate {
    std::size_t n = 0;
    std::string strategy;
    double mean = 0.0;
    double min = 0.0;
    std::size_t count = 0;
};

struct ExperimentResult {
    CsvTable table;
    std::vector<Aggregate> aggregates;

    const Aggregate* find(std::size_t n, const std::string& strategy) const {
        for (const auto& a : aggregates) {
            if (a.n == n && a.strategy == strategy) {
                return &a;
            }
        }
        return nullptr;
    }
};

namespace detail {

inline std::string error_tag(const std::exception& e) { return std::string("error:") + e.what(); }

inline Aggregate aggregate(std::size_t n, const std::string& strategy, const std::vector<double>& v) {
    Aggregate a;
    a.n = n;
    a.strategy = strategy;
    a.count = v.size();
    if (!v.empty()) {
        double s = 0.0;
        for (double x : v) {
            s += x;
        }
        a.mean = s / static_cast<double>(v.size());
        a.min = *std::min_element(v.begin(), v.end());
    }
    return a;
}

} // namespace detail

/// Growth factors and backward error per (n, strategy, trial) for the
/// configured matrix family.
inline ExperimentResult run_growth_sweep(const ExperimentSpec& spec) {
    spec.validate();
    ExperimentResult res{CsvTable("rcplu.growth-sweep.v1",
                                  {"family", "n", "strategy", "trial", "seed", "rho_elem", "rho_col",
                                   "backward_error", "status"}),
                         {}};
    const std::string family(gen::family_name(spec.family));
    for (std::size_t n : spec.sizes) {
        for (const auto& name : spec.strategies) {
            std::vector<double> errs;
            for (std::size_t t = 0; t < spec.trials; ++t) {
                const std::uint64_t s = spec.trial_seed(t);
                std::vector<std::string> row{family, std::to_string(n), name, std::to_string(t),
                                             std::to_string(s)};
                try {
                    const Matrix a = spec.matrix(n, s);
                    const Factorization f = factorize(a, spec.strategy(name), true, s);
                    const double be = backward_error(a, f);
                    errs.push_back(be);
                    row.insert(row.end(), {fmt(element_growth(*f.stats)),
                                           fmt(column_growth(*f.stats)), fmt(be), "ok"});
                } catch (const std::exception& e) {
                    row.insert(row.end(), {"", "", "", detail::error_tag(e)});
                }
                res.table.add(std::move(row));
            }
            res.aggregates.push_back(detail::aggregate(n, name, errs));
        }
    }
    return res;
}

/// Relative residual of A x = b for Gaussian A and b, with a mean row per
/// (n, strategy). Aggregates hold the residual means.
inline ExperimentResult run_residual_experiment(const ExperimentSpec& spec) {
    spec.validate();
    ExperimentResult res{CsvTable("rcplu.residual-experiment.v1",
                                  {"n", "strategy", "trial", "seed", "relative_residual", "status"}),
                         {}};
    for (std::size_t n : spec.sizes) {
        for (const auto& name : spec.strategies) {
            std::vector<double> vals;
            for (std::size_t t = 0; t < spec.trials; ++t) {
                const std::uint64_t s = spec.trial_seed(t);
                std::vector<std::string> row{std::to_string(n), name, std::to_string(t),
                                             std::to_string(s)};
                try {
                    const Matrix a = gen::gaussian(n, s);
                    const Vector b = gen::rhs_gaussian(n, s);
                    const Factorization f = factorize(a, spec.strategy(name), false, s);
                    const Vector x = solve(f, b);
                    const double rr = relative_residual(a, x, b);
                    vals.push_back(rr);
                    row.insert(row.end(), {fmt(rr), "ok"});
                } catch (const std::exception& e) {
                    row.insert(row.end(), {"", detail::error_tag(e)});
                }
                res.table.add(std::move(row));
            }
            const Aggregate agg = detail::aggregate(n, name, vals);
            res.table.add({std::to_string(n), name, "mean", "",
                           agg.count ? fmt(agg.mean) : "", agg.count ? "ok" : "error:no trials"});
            res.aggregates.push_back(agg);
        }
    }
    return res;
}

/// Mean element growth on Gaussian matrices.
inline ExperimentResult run_element_growth_random(const ExperimentSpec& spec) {
    spec.validate();
    ExperimentResult res{CsvTable("rcplu.element-growth-random.v1",
                                  {"n", "strategy", "trial", "seed", "rho_elem", "status"}),
                         {}};
    for (std::size_t n : spec.sizes) {
        for (const auto& name : spec.strategies) {
            std::vector<double> vals;
            for (std::size_t t = 0; t < spec.trials; ++t) {
                const std::uint64_t s = spec.trial_seed(t);
                std::vector<std::string> row{std::to_string(n), name, std::to_string(t),
                                             std::to_string(s)};
                try {
                    const Matrix a = gen::gaussian(n, s);
                    const Factorization f = factorize(a, spec.strategy(name), true, s);
                    const double g = element_growth(*f.stats);
                    vals.push_back(g);
                    row.insert(row.end(), {fmt(g), "ok"});
                } catch (const std::exception& e) {
                    row.insert(row.end(), {"", detail::error_tag(e)});
                }
                res.table.add(std::move(row));
            }
            const Aggregate agg = detail::aggregate(n, name, vals);
            res.table.add({std::to_string(n), name, "mean", "",
                           agg.count ? fmt(agg.mean) : "", agg.count ? "ok" : "error:no trials"});
            res.aggregates.push_back(agg);
        }
    }
    return res;
}

struct Overhead {
    std::size_t n;
    double mean_based; ///< (mean_gercp - mean_gepp) / mean_gepp
    double min_based;  ///< same with the fastest trial of each
};

struct BenchResult {
    ExperimentResult result;
    std::vector<Overhead> overhead; ///< filled when both gepp and gercp ran
};

/// Wall-clock time of the factorization call only. One untimed warm-up run
/// per (n, strategy) precedes the trials, which alternate between
/// strategies; matrix generation is excluded.
inline BenchResult run_bench(const ExperimentSpec& spec) {
    spec.validate();
    BenchResult out{ExperimentResult{CsvTable("rcplu.bench.v1", {"n", "strategy", "trial", "seed",
                                                                   "wall_seconds", "status"}),
                                     {}},
                    {}};
    auto& table = out.result.table;
    for (std::size_t n : spec.sizes) {
        const std::size_t ns = spec.strategies.size();
        std::vector<PivotStrategy> strats;
        for (const auto& name : spec.strategies) {
            strats.push_back(spec.strategy(name));
            try {
                (void)factorize(spec.matrix(n, spec.seed), strats.back(), false, spec.seed);
            } catch (const std::exception&) {
                // The timed trials below report the failure.
            }
        }
        std::vector<std::vector<double>> times(ns);
        std::vector<std::vector<std::vector<std::string>>> rows(ns);
        for (std::size_t t = 0; t < spec.trials; ++t) {
            const std::uint64_t s = spec.trial_seed(t);
            std::optional<Matrix> a;
            std::string gen_error;
            try {
                a = spec.matrix(n, s);
            } catch (const std::exception& e) {
                gen_error = detail::error_tag(e);
            }
            for (std::size_t q = 0; q < ns; ++q) {
                std::vector<std::string> row{std::to_string(n), spec.strategies[q], std::to_string(t),
                                             std::to_string(s)};
                if (!a) {
                    row.insert(row.end(), {"", gen_error});
                    rows[q].push_back(std::move(row));
                    continue;
                }
                try {
                    const auto t0 = std::chrono::steady_clock::now();
                    const Factorization f = factorize(*a, strats[q], false, s);
                    const auto t1 = std::chrono::steady_clock::now();
                    const double secs = std::chrono::duration<double>(t1 - t0).count();
                    times[q].push_back(secs);
                    row.insert(row.end(), {fmt(secs), f.singular ? "ok:singular" : "ok"});
                } catch (const std::exception& e) {
                    row.insert(row.end(), {"", detail::error_tag(e)});
                }
                rows[q].push_back(std::move(row));
            }
        }
        for (std::size_t q = 0; q < ns; ++q) {
            for (auto& row : rows[q]) {
                table.add(std::move(row));
            }
            const Aggregate agg = detail::aggregate(n, spec.strategies[q], times[q]);
            table.add({std::to_string(n), spec.strategies[q], "mean", "", agg.count ? fmt(agg.mean) : "",
                       agg.count ? "ok" : "error:no trials"});
            out.result.aggregates.push_back(agg);
        }
        const Aggregate* pp = out.result.find(n, "gepp");
        const Aggregate* rc = out.result.find(n, "gercp");
        if (pp && rc && pp->count && rc->count && pp->mean > 0.0 && pp->min > 0.0) {
            out.overhead.push_back(
                {n, (rc->mean - pp->mean) / pp->mean, (rc->min - pp->min) / pp->min});
        }
    }
    return out;
}

/// Empirical JL failure frequency per (d = n, r) against 2 exp(-(eps^2 - eps^3) r / 4).
/// `sizes` supplies the dimensions d and the configured r the sketch size.
inline CsvTable run_jl_check(const ExperimentSpec& spec) {
    if (spec.sizes.empty() || spec.trials < 1) {
        throw ArgumentError("jl-check needs sizes and at least one trial");
    }
    spec.sketch.validate();
    CsvTable table("rcplu.jl-check.v1",
                   {"d", "r", "epsilon", "trials", "violation_fraction", "bound", "allowed", "status"});
    for (std::size_t d : spec.sizes) {
        const double frac =
            jl_empirical_check(d, spec.sketch.r, spec.sketch.epsilon, spec.trials, spec.seed);
        const double bound = jl_failure_bound(spec.sketch.r, spec.sketch.epsilon);
        const double allowed = std::min(1.0, bound) + binomial_slack(bound, spec.trials);
        table.add({std::to_string(d), std::to_string(spec.sketch.r), fmt(spec.sketch.epsilon),
                   std::to_string(spec.trials), fmt(frac), fmt(bound), fmt(allowed),
                   frac <= allowed ? "pass" : "fail"});
    }
    return table;
}

struct TheoryCheck {
    std::string name;
    double computed;
    double bound;
    bool pass;
};

/// Numeric checks of the supporting lemmas and bound calculators. `trials`
/// drives the sampling-based checks.
inline std::vector<TheoryCheck> theory_checks(std::size_t trials, std::uint64_t seed) {
    std::vector<TheoryCheck> out;
    auto le = [&](std::string name, double computed, double bound) {
        out.push_back({std::move(name), computed, bound, computed <= bound});
    };
    for (std::size_t n : {1u, 3u, 10u, 100u, 500u}) {
        le("special_inverse_n" + std::to_string(n), verify_special_inverse(n), 1e-12);
    }
    for (auto [r, q] : {std::pair<std::size_t, std::size_t>{1, 2}, {2, 4}, {7, 1000}, {1, 100000}}) {
        le("telescoping_r" + std::to_string(r) + "_q" + std::to_string(q), telescoping_check(r, q),
           1e-14);
    }
    for (double t : {0.0, 1.0, 10.0, 100.0}) {
        double worst = -1e300;
        for (std::size_t m = 2; m <= 200; ++m) {
            worst = std::max(worst, log_wilkinson_function(m, t) - log_wilkinson_function_bound(m, t));
        }
        le("wilkinson_function_t" + fmt(t) + "_log_margin", worst, 0.0);
    }
    for (double c : {2.0, std::numbers::e, 10.0, 100.0}) {
        const IntegralCheck ic = improper_integral_check(c);
        le("improper_integral_c" + fmt(c), ic.numeric, ic.bound);
    }
    for (const auto& res : lipschitz_concentration_check(20, 20, trials, seed)) {
        le("lipschitz_t" + fmt(res.t), res.exceedance, res.bound + binomial_slack(res.bound, trials));
    }
    {
        const std::size_t r = 400;
        const double bound = jl_failure_bound(r, 0.5);
        le("jl_r400_eps0.5", jl_empirical_check(50, r, 0.5, trials, seed + 1),
           bound + binomial_slack(bound, trials));
    }
    le("gecp_bound_n3", std::abs(gecp_growth_bound(3) - std::sqrt(3.0) * std::sqrt(2.0 * std::sqrt(3.0))),
       1e-12);
    le("gepp_bounds_n4", std::abs(gepp_growth_bounds(4).elem - 8.0) + std::abs(gepp_growth_bounds(4).col - 4.0),
       1e-12);
    {
        double prev = log_gercp_growth_bound(1, 0.5, 1.0);
        bool mono = true;
        for (std::size_t n = 2; n <= 1000000; n = n * 3 / 2 + 1) {
            const double cur = log_gercp_growth_bound(n, 0.5, 1.0);
            mono = mono && std::isfinite(cur) && cur > prev;
            prev = cur;
        }
        out.push_back({"gercp_bound_monotone_finite", mono ? 1.0 : 0.0, 1.0, mono});
    }
    return out;
}

inline CsvTable run_theory_check(std::size_t trials, std::uint64_t seed) {
    CsvTable table("rcplu.theory-check.v1", {"check", "computed", "bound", "margin", "status"});
    for (const auto& c : theory_checks(trials, seed)) {
        table.add({c.name, fmt(c.computed), fmt(c.bound), fmt(c.bound - c.computed),
                   c.pass ? "pass" : "fail"});
    }
    return table;
}

} // namespace rcplu::experiments
