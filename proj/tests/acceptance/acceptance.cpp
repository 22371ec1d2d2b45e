// Acceptance runner: one PASS/FAIL line per criterion.
//
//   rcplu_acceptance        run all criteria
//   rcplu_acceptance N      run criterion N only

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "rcplu/rcplu.hpp"

using namespace rcplu;
namespace ex = rcplu::experiments;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

const std::vector<std::string> kAll = {"genp", "gepp", "gecp", "gerp", "ge2cp", "gercp"};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. GEPP on wilkinson(n): rho_elem = 2^{n-1} exactly, rho_col = 2^{n-1}/sqrt(n).
Outcome criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    double worst_col = 0.0;
    for (std::size_t n : {5u, 10u, 20u, 30u}) {
        const auto f = factorize(gen::wilkinson(n), PivotStrategy::make(PivotKind::partial), true);
        const double elem = element_growth(*f.stats);
        const double expect = std::ldexp(1.0, static_cast<int>(n) - 1);
        ok = ok && elem == expect;
        const double col = column_growth(*f.stats);
        const double rel = std::abs(col - expect / std::sqrt(static_cast<double>(n))) /
                           (expect / std::sqrt(static_cast<double>(n)));
        worst_col = std::max(worst_col, rel);
    }
    const double secs = seconds_since(t0);
    ok = ok && worst_col <= 1e-12 && secs < 1.0;
    return {ok, "rho_elem exact, rho_col rel err " + fmt("%.2e", worst_col) + ", " +
                    fmt("%.3f", secs) + " s"};
}

// 2. Diabolical matrices: GERCP backward error <= 1e-12 in >= 95% of runs;
// GEPP >= 1e-6 on wilkinson(100).
Outcome criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    const PivotStrategy rcp = PivotStrategy::make(PivotKind::rercp);
    std::size_t runs = 0;
    std::size_t good = 0;
    double worst = 0.0;
    auto run = [&](const Matrix& a, std::uint64_t seed) {
        const double be = backward_error(a, factorize(a, rcp, false, seed));
        ++runs;
        good += be <= 1e-12 ? 1 : 0;
        worst = std::max(worst, be);
    };
    const Matrix w = gen::wilkinson(100);
    gen::GeneratorSpec vs;
    vs.family = gen::Family::volterra;
    vs.n = 200;
    const Matrix v = gen::generate(vs);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        run(w, seed);
        run(gen::generalized_wilkinson(100, 3, seed), seed);
        run(v, seed);
    }
    const double gepp = backward_error(w, factorize(w, PivotStrategy::make(PivotKind::partial)));
    const double frac = static_cast<double>(good) / static_cast<double>(runs);
    const double secs = seconds_since(t0);
    const bool ok = frac >= 0.95 && gepp >= 1e-6 && secs < 30.0;
    return {ok, "gercp good fraction " + fmt("%.3f", frac) + " (worst " + fmt("%.2e", worst) +
                    "), gepp wilkinson(100) " + fmt("%.2e", gepp) + ", " + fmt("%.1f", secs) + " s"};
}

// 3. Psi tracks Omega_R S_k under both update formulas; the formulas agree.
Outcome criterion_3() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng pick(3, Rng::Stream::check);
    double worst_identity = 0.0;
    double worst_agree = 0.0;
    std::size_t compared = 0;
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 2 + pick.engine()() % 99;
        const std::size_t r = 1 + pick.engine()() % 20;
        const std::uint64_t seed = pick.engine()();
        const Matrix a = gen::gaussian(n, seed);
        for (bool force : {false, true}) {
            SketchConfig c;
            c.r = r;
            c.seed = seed;
            c.force_stable_update = force;
            GercpOptions opts;
            opts.tail = TailRule::sketch_always;
            opts.observer = [&](const StepEvent& ev) {
                const SketchState& s = *ev.sketch;
                if (ev.phase == StepPhase::before_select) {
                    const Matrix schur = oracle::submatrix(ev.work, ev.k, ev.k);
                    const Matrix expect = oracle::multiply(oracle::submatrix(s.omega, 0, ev.k), schur);
                    const Matrix live = oracle::submatrix(s.psi, 0, ev.k);
                    double e = 0.0;
                    for (std::size_t j = 0; j < live.cols(); ++j) {
                        double ss = 0.0;
                        for (std::size_t i = 0; i < live.rows(); ++i) {
                            const double d = live(i, j) - expect(i, j);
                            ss += d * d;
                        }
                        e = std::max(e, std::sqrt(ss));
                    }
                    worst_identity = std::max(worst_identity, e / s.psi1_norm);
                } else if (!force &&
                           choose_update_path(s, ev.work(ev.k, ev.k), false) == UpdatePath::fast) {
                    SketchState f = s;
                    SketchState st = s;
                    update_sketch_fast(f, ev.work.view(), ev.k);
                    update_sketch_stable(st, ev.work.view(), ev.k);
                    const Matrix lf = oracle::submatrix(f.psi, 0, ev.k + 1);
                    const Matrix ls = oracle::submatrix(st.psi, 0, ev.k + 1);
                    worst_agree = std::max(worst_agree, oracle::max_diff(lf, ls) / s.psi1_norm);
                    ++compared;
                }
            };
            gercp_factorize(a, c, opts);
        }
    }
    const double secs = seconds_since(t0);
    const bool ok = worst_identity <= 1e-10 && worst_agree <= 1e-12 && compared > 0 && secs < 30.0;
    return {ok, "max identity err/psi1 " + fmt("%.2e", worst_identity) + ", max fast-stable gap " +
                    fmt("%.2e", worst_agree) + " over " + std::to_string(compared) + " steps, " +
                    fmt("%.1f", secs) + " s"};
}

// Shared by criteria 4 and 5: 200 seeded GERCP runs on one Gaussian
// matrix, with r from the JL lemma and the sketch kept to the last step.
struct JlRun {
    bool violated;
    double rho_col;
};

std::vector<JlRun> jl_runs(std::size_t n, std::size_t r) {
    const Matrix a = gen::gaussian(n, 2025);
    std::vector<JlRun> out;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        SketchConfig c;
        c.r = r;
        c.seed = seed;
        GercpOptions opts;
        opts.tail = TailRule::sketch_always;
        opts.track_growth = true;
        std::size_t bad = 0;
        opts.observer = [&](const StepEvent& ev) {
            if (ev.phase != StepPhase::before_select) {
                return;
            }
            const std::size_t m = n - ev.k;
            bad += count_jl_violations(ev.work.block(ev.k, ev.k, m, m),
                                       ev.sketch->psi.block(0, ev.k, r, m), 0.5);
        };
        const auto f = gercp_factorize(a, c, opts);
        out.push_back({bad > 0, column_growth(*f.stats)});
    }
    return out;
}

Outcome criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t r = required_sampling_dim(100, 0.5, 0.05);
    std::size_t bad = 0;
    for (const auto& run : jl_runs(100, r)) {
        bad += run.violated ? 1 : 0;
    }
    const double frac = static_cast<double>(bad) / 200.0;
    const double secs = seconds_since(t0);
    const bool ok = frac <= 0.05 + 0.05 && secs < 300.0;
    return {ok, "r=" + std::to_string(r) + ", runs with a JL violation " + fmt("%.3f", frac) + ", " +
                    fmt("%.1f", secs) + " s"};
}

Outcome criterion_5() {
    const std::size_t n = 100;
    const std::size_t r = required_sampling_dim(n, 0.5, 0.05);
    const double bound = gercp_growth_bound(n, 0.5, 1.0);
    const double fallback = gepp_growth_bounds(n).col;
    double worst_clean = 0.0;
    double worst_all = 0.0;
    bool ok = true;
    std::size_t clean = 0;
    for (const auto& run : jl_runs(n, r)) {
        worst_all = std::max(worst_all, run.rho_col);
        ok = ok && run.rho_col <= fallback;
        if (!run.violated) {
            ++clean;
            worst_clean = std::max(worst_clean, run.rho_col);
            ok = ok && run.rho_col <= bound;
        }
    }
    return {ok, "max rho_col " + fmt("%.3f", worst_clean) + " over " + std::to_string(clean) +
                    " clean runs (bound " + fmt("%.3e", bound) + "), max over all " +
                    fmt("%.3f", worst_all) + " (fallback " + fmt("%.3e", fallback) + ")"};
}

// 6. Every strictly-lower LU entry has magnitude <= 1 for top-heavy strategies.
Outcome criterion_6() {
    std::vector<Matrix> corpus;
    for (std::size_t n : {1u, 2u, 3u, 10u, 33u, 64u, 65u, 100u, 150u}) {
        for (std::uint64_t seed : {0u, 1u}) {
            corpus.push_back(gen::gaussian(n, seed));
            corpus.push_back(gen::diag_dominant(n, seed));
            corpus.push_back(gen::spd(n, seed));
        }
        corpus.push_back(gen::wilkinson(n));
        corpus.push_back(gen::rook_adversarial(n));
        corpus.push_back(gen::identity(n));
        if (n >= 2) {
            corpus.push_back(gen::generalized_wilkinson(n, 3, n));
            gen::GeneratorSpec v;
            v.family = gen::Family::volterra;
            v.n = n;
            corpus.push_back(gen::generate(v));
            v.params["volterra_border"] = 1.0;
            corpus.push_back(gen::generate(v));
        }
    }
    corpus.push_back(Matrix(5, 5));
    corpus.push_back(Matrix::from_rows({{1, 2, 3}, {2, 4, 6}, {1, 1, 1}}));
    double worst = 0.0;
    std::size_t factorizations = 0;
    SketchConfig small;
    small.r = 4;
    small.block_size = 8;
    for (const auto& a : corpus) {
        for (const auto& name : kAll) {
            if (name == "genp") {
                continue;
            }
            for (const SketchConfig& cfg : {SketchConfig{}, small}) {
                for (bool track : {false, true}) {
                    const auto f = factorize(a, PivotStrategy::named(name, cfg), track, 7);
                    ++factorizations;
                    for (std::size_t j = 0; j < f.n(); ++j) {
                        for (std::size_t i = j + 1; i < f.n(); ++i) {
                            worst = std::max(worst, std::abs(f.lu(i, j)));
                        }
                    }
                }
            }
        }
    }
    return {worst <= 1.0 + 1e-15, "max |L| " + fmt("%.17g", worst) + " over " +
                                      std::to_string(factorizations) + " factorizations"};
}

// 7. Mean residuals at n = 1000: GECP <= GERCP <= GEPP, GERCP/GEPP <= 0.9.
Outcome criterion_7() {
    const auto t0 = std::chrono::steady_clock::now();
    ex::ExperimentSpec s;
    s.sizes = {1000};
    s.strategies = {"gecp", "gercp", "gepp"};
    s.trials = 10;
    const auto res = ex::run_residual_experiment(s);
    const auto* cp = res.find(1000, "gecp");
    const auto* rcp = res.find(1000, "gercp");
    const auto* pp = res.find(1000, "gepp");
    const double secs = seconds_since(t0);
    const bool complete = cp->count == 10 && rcp->count == 10 && pp->count == 10;
    const double ratio = rcp->mean / pp->mean;
    const bool ok = complete && cp->mean <= rcp->mean && rcp->mean <= pp->mean && ratio <= 0.9 &&
                    secs < 300.0;
    return {ok, "means gecp " + fmt("%.3e", cp->mean) + ", gercp " + fmt("%.3e", rcp->mean) +
                    ", gepp " + fmt("%.3e", pp->mean) + ", ratio " + fmt("%.3f", ratio) + ", " +
                    fmt("%.1f", secs) + " s"};
}

// 8. GERCP overhead over GEPP <= 30% at 2048 and non-increasing 1024 -> 4096.
Outcome criterion_8() {
    ex::ExperimentSpec s;
    s.sizes = {1024, 2048, 4096};
    s.strategies = {"gepp", "gercp"};
    s.trials = 5;
    const auto b = ex::run_bench(s);
    if (b.overhead.size() != 3) {
        return {false, "benchmark did not produce three overhead values"};
    }
    const double o1 = b.overhead[0].min_based;
    const double o2 = b.overhead[1].min_based;
    const double o4 = b.overhead[2].min_based;
    const bool ok = o2 <= 0.30 && o2 <= o1 && o4 <= o2;
    return {ok, "overhead 1024 " + fmt("%.1f%%", 100 * o1) + ", 2048 " + fmt("%.1f%%", 100 * o2) +
                    ", 4096 " + fmt("%.1f%%", 100 * o4)};
}

// 9. Numeric checks of the supporting lemmas.
Outcome criterion_9() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string failed;
    auto check = [&](bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            failed += " " + what;
        }
    };
    double inv = 0.0;
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 10u, 50u, 100u, 200u, 333u, 500u}) {
        inv = std::max(inv, verify_special_inverse(n));
    }
    check(inv <= 1e-12, "special_inverse");
    double tele = 0.0;
    for (std::size_t r : {1u, 2u, 3u, 7u, 50u, 999u}) {
        for (std::size_t q : {r + 1, 2 * r + 1, r + 1000, r + 100000}) {
            tele = std::max(tele, telescoping_check(r, q));
        }
    }
    check(tele <= 1e-14, "telescoping");
    double wf = -1e300;
    for (double t : {0.0, 1.0, 10.0, 100.0}) {
        for (std::size_t m = 2; m <= 200; ++m) {
            wf = std::max(wf, wilkinson_function(m, t) / wilkinson_function_bound(m, t));
        }
    }
    check(wf <= 1.0, "wilkinson_function");
    for (double c : {2.0, std::numbers::e, 10.0, 100.0}) {
        const auto ic = improper_integral_check(c);
        check(ic.numeric <= ic.bound, "improper_integral c=" + fmt("%g", c));
    }
    const std::size_t trials = 20000;
    for (const auto& res : lipschitz_concentration_check(10, 30, trials, 91)) {
        check(res.exceedance <= res.bound + binomial_slack(res.bound, trials),
              "lipschitz t=" + fmt("%g", res.t));
    }
    for (std::size_t r : {20u, 100u, 400u}) {
        const double p = jl_failure_bound(r, 0.5);
        const double frac = jl_empirical_check(40, r, 0.5, trials, 92 + r);
        check(frac <= std::min(1.0, p) + binomial_slack(p, trials), "jl r=" + std::to_string(r));
    }
    const double secs = seconds_since(t0);
    check(secs < 60.0, "runtime");
    return {ok, "special inverse " + fmt("%.2e", inv) + ", telescoping " + fmt("%.2e", tele) +
                    ", f/bound max " + fmt("%.3f", wf) + ", " + fmt("%.1f", secs) + " s" +
                    (failed.empty() ? "" : ", failed:" + failed)};
}

// 10. Each strategy agrees with naive elimination under its own pivots, and
// the pivot searches agree with brute force.
Outcome criterion_10() {
    double worst = 0.0;
    for (std::size_t n = 1; n <= 50; n += (n < 10 ? 1 : 7)) {
        for (const auto& name : kAll) {
            for (std::uint64_t seed : {0u, 1u}) {
                const Matrix a = name == "genp" ? gen::diag_dominant(n, seed) : gen::gaussian(n, seed);
                for (bool track : {false, true}) {
                    const auto f = factorize(a, PivotStrategy::named(name), track, seed);
                    const Matrix ref = oracle::eliminate(a, f.perm_r.map(), f.perm_c.map());
                    const Matrix pa = oracle::permuted(a, f.perm_r.map(), f.perm_c.map());
                    const Matrix lu = oracle::lu_product(f.lu);
                    const Matrix lu_ref = oracle::lu_product(ref);
                    const double scale = oracle::max_abs(a);
                    worst = std::max(worst, oracle::max_diff(f.lu, ref) / std::max(1.0, oracle::max_abs(ref)));
                    worst = std::max(worst, oracle::max_diff(lu, pa) / scale);
                    worst = std::max(worst, oracle::max_diff(lu_ref, pa) / scale);
                }
            }
        }
    }
    Rng rng(10, Rng::Stream::check);
    std::size_t mismatches = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t m = 1 + rng.engine()() % 7;
        const std::size_t n = 1 + rng.engine()() % 7;
        Matrix a(m, n);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < m; ++i) {
                a(i, j) = t % 2 ? rng.normal() : static_cast<double>(static_cast<int>(rng.engine()() % 5) - 2);
            }
        }
        const auto c = pivot_complete(a.view());
        const auto oc = oracle::argmax_complete(a);
        mismatches += c.row != oc.row || c.col != oc.col;
        PivotCounters counters;
        const auto rk = pivot_rook(a.view(), counters);
        mismatches += rk.magnitude > 0.0 && !oracle::is_rook_pivot(a, rk.row, rk.col);
        mismatches += pivot_l2col(a.view()) != oracle::argmax_colnorm(a);
    }
    const bool ok = worst <= 1e-13 && mismatches == 0;
    return {ok, "max relative deviation " + fmt("%.2e", worst) + ", pivot mismatches " +
                    std::to_string(mismatches) + "/3000"};
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Outcome()>> criteria = {
        criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
        criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
    std::vector<std::size_t> which;
    if (argc > 1) {
        const int k = std::atoi(argv[1]);
        if (k < 1 || k > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "usage: %s [1-%zu]\n", argv[0], criteria.size());
            return 2;
        }
        which.push_back(static_cast<std::size_t>(k));
    } else {
        for (std::size_t k = 1; k <= criteria.size(); ++k) {
            which.push_back(k);
        }
    }
    int failures = 0;
    for (std::size_t k : which) {
        Outcome o;
        try {
            o = criteria[k - 1]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %zu: %s %s\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
