#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "rcplu/detail/kernels.hpp"
#include "rcplu/errors.hpp"
#include "rcplu/factorization.hpp"
#include "rcplu/matrix.hpp"
#include "rcplu/pivot.hpp"
#include "rcplu/sketch.hpp"

namespace rcplu {

struct PivotStrategy {
    PivotKind kind = PivotKind::partial;
    std::optional<SketchConfig> rercp_config; ///< present iff kind == rercp
    std::size_t block_size = 64;              ///< panel width for blocked GENP/GEPP

    static PivotStrategy make(PivotKind k, SketchConfig cfg = {}) {
        PivotStrategy s;
        s.kind = k;
        if (k == PivotKind::rercp) {
            s.rercp_config = cfg;
        }
        s.block_size = cfg.block_size;
        return s;
    }

    static PivotStrategy named(std::string_view name, SketchConfig cfg = {}) {
        return make(parse_strategy(name), cfg);
    }

    void validate() const {
        if (kind == PivotKind::rercp) {
            if (!rercp_config) {
                throw ArgumentError("gercp strategy requires a sketch configuration");
            }
            rercp_config->validate();
        } else if (rercp_config) {
            throw ArgumentError("sketch configuration given for a non-gercp strategy");
        }
        if (block_size < 1) {
            throw ArgumentError("block size must be at least 1");
        }
    }
};

/// How scalar GERCP picks columns once the trailing dimension m = n - k no
/// longer exceeds r.
enum class TailRule {
    exact_when_small, ///< switch to exact trailing column norms (default)
    sketch_always,    ///< keep using the sketch; r is never clamped
};

enum class StepPhase { before_select, before_update };

struct StepEvent {
    StepPhase phase;
    std::size_t k;
    const Matrix& work;          ///< rows/cols k.. hold S_k before_select
    const SketchState* sketch;   ///< null for strategies without a sketch
};

using StepObserver = std::function<void(const StepEvent&)>;

struct GercpOptions {
    TailRule tail = TailRule::exact_when_small;
    bool track_growth = false;
    StepObserver observer;
};

namespace detail {

class Eliminator {
public:
    Eliminator(const Matrix& a, PivotKind kind, bool track)
        : work_(a), pr_(a.rows()), pc_(a.rows()), kind_(kind) {
        if (!a.square() || a.empty()) {
            throw ArgumentError("factorize: matrix must be square and nonempty");
        }
        if (track) {
            stats_.emplace();
            stats_->input_max_entry = norm_one_inf(a);
            stats_->input_max_colnorm = norm_one_two(a);
        }
    }

    void attach_sketch(SketchState* s, const SketchConfig* cfg, TailRule tail,
                       const StepObserver* observer) {
        sketch_ = s;
        cfg_ = cfg;
        tail_ = tail;
        observer_ = observer;
        usage_.emplace();
        usage_->sampling_dim = s->r();
        usage_->r_clamped = s->r_clamped;
    }

    void set_observer(const StepObserver* observer) { observer_ = observer; }

    void run_unblocked(std::size_t k_begin) {
        for (std::size_t k = k_begin; k < n(); ++k) {
            step_unblocked(k);
        }
    }

    void run_blocked(std::size_t b);

    Factorization finish() && {
        Factorization f;
        f.lu = std::move(work_);
        f.perm_r = std::move(pr_);
        f.perm_c = std::move(pc_);
        f.singular = singular_;
        f.stats = std::move(stats_);
        f.counters = counters_;
        f.sketch = usage_;
        return f;
    }

private:
    std::size_t n() const noexcept { return work_.rows(); }

    void notify(StepPhase phase, std::size_t k) {
        if (observer_ && *observer_) {
            (*observer_)(StepEvent{phase, k, work_, sketch_});
        }
    }

    void record_growth(std::size_t k) {
        if (!stats_) {
            return;
        }
        const std::size_t m = n() - k;
        const ConstMatrixView s = std::as_const(work_).block(k, k, m, m);
        stats_->per_step_max_entry.push_back(norm_one_inf(s));
        stats_->per_step_max_colnorm.push_back(norm_one_two(s));
    }

    void swap_columns(std::size_t k, std::size_t alpha) {
        if (alpha == k) {
            return;
        }
        work_.swap_cols(k, alpha);
        pc_.swap(k, alpha);
        counters_.col_entry_swaps += n();
        if (sketch_) {
            sketch_->swap_psi_cols(k, alpha);
        }
    }

    void swap_rows(std::size_t k, std::size_t beta) {
        if (beta == k) {
            return;
        }
        work_.swap_rows(k, beta);
        pr_.swap(k, beta);
        counters_.row_entry_swaps += n();
        if (sketch_) {
            sketch_->swap_omega_cols(k, beta);
        }
    }

    std::size_t row_pivot(std::size_t k) {
        const std::size_t m = n() - k;
        counters_.comparisons += m - 1;
        return k + pivot_partial(std::span<const double>(work_.data() + k + k * n(), m)).row;
    }

    bool column_is_zero(std::size_t j, std::size_t from) const {
        const double* c = work_.data() + j * n();
        for (std::size_t i = from; i < n(); ++i) {
            if (c[i] != 0.0) {
                return false;
            }
        }
        return true;
    }

    std::size_t exact_column(std::size_t k) {
        const std::size_t m = n() - k;
        ++usage_->exact_pivots;
        return k + pivot_l2col(std::as_const(work_).block(k, k, m, m));
    }

    // Column choice for GERCP in the unblocked engine, where every trailing
    // column is current.
    std::size_t rercp_column(std::size_t k) {
        const std::size_t m = n() - k;
        counters_.comparisons += m - 1;
        if (sketch_->degenerate()) {
            return k;
        }
        const bool use_sketch =
            maintain_sketch_ && (tail_ == TailRule::sketch_always || m > sketch_->r());
        if (!use_sketch) {
            return exact_column(k);
        }
        const std::size_t alpha = select_pivot_column(*sketch_, k, cfg_->g).column;
        if (column_is_zero(alpha, k)) {
            return exact_column(k);
        }
        ++usage_->sketched_pivots;
        return alpha;
    }

    void eliminate_pivot(std::size_t k) {
        const std::size_t nn = n();
        double* ck = work_.data() + k * nn;
        const double pivot = ck[k];
        if (pivot == 0.0) {
            if (kind_ == PivotKind::none) {
                throw ZeroPivotError(k + 1);
            }
            singular_ = true;
            std::fill(ck + k + 1, ck + nn, 0.0);
            return;
        }
        for (std::size_t i = k + 1; i < nn; ++i) {
            ck[i] /= pivot;
        }
    }

    void advance_sketch(std::size_t k) {
        if (!sketch_ || !maintain_sketch_ || k + 1 >= n()) {
            return;
        }
        notify(StepPhase::before_update, k);
        const UpdatePath path = choose_update(*sketch_, std::as_const(work_).view(), k,
                                              cfg_->force_stable_update);
        if (path == UpdatePath::fast) {
            ++usage_->fast_updates;
        } else {
            ++usage_->stable_updates;
        }
    }

    void step_unblocked(std::size_t k) {
        const std::size_t nn = n();
        const std::size_t m = nn - k;
        record_growth(k);
        notify(StepPhase::before_select, k);

        std::size_t alpha = k;
        std::size_t beta = k;
        bool row_done = false;
        const ConstMatrixView s = std::as_const(work_).block(k, k, m, m);
        switch (kind_) {
        case PivotKind::none:
            row_done = true;
            break;
        case PivotKind::partial:
            break;
        case PivotKind::complete: {
            const PivotPair p = pivot_complete(s);
            counters_.comparisons += m * m - 1;
            alpha = k + p.col;
            beta = k + p.row;
            row_done = true;
            break;
        }
        case PivotKind::rook: {
            const PivotPair p = pivot_rook(s, counters_);
            alpha = k + p.col;
            beta = k + p.row;
            row_done = true;
            break;
        }
        case PivotKind::l2complete:
            counters_.comparisons += m - 1;
            alpha = k + pivot_l2col(s);
            break;
        case PivotKind::rercp:
            alpha = rercp_column(k);
            break;
        }
        swap_columns(k, alpha);
        if (!row_done) {
            beta = row_pivot(k);
        }
        swap_rows(k, beta);
        if (stats_) {
            stats_->per_step_pivot_colnorm.push_back(col_norm2(work_, k, k));
        }
        eliminate_pivot(k);

        const double* lk = work_.data() + k * nn;
        for (std::size_t j = k + 1; j < nn; ++j) {
            double* cj = work_.data() + j * nn;
            const double u = cj[k];
            if (u != 0.0) {
                axpy_minus(cj + k + 1, lk + k + 1, u, m - 1);
            }
        }
        advance_sketch(k);
    }

    Matrix work_;
    Permutation pr_;
    Permutation pc_;
    PivotKind kind_;
    bool singular_ = false;
    std::optional<GrowthStats> stats_;
    PivotCounters counters_;
    std::optional<SketchUsage> usage_;
    SketchState* sketch_ = nullptr;
    const SketchConfig* cfg_ = nullptr;
    TailRule tail_ = TailRule::exact_when_small;
    const StepObserver* observer_ = nullptr;
    bool maintain_sketch_ = true;
};

// Right-looking blocked elimination for GENP, GEPP and GERCP.
//
// Inside a panel [k0, k1) only the panel columns receive rank-1 updates;
// row k of the columns beyond the panel is brought up to date on demand
// (it is needed for the sketch update), and the rest of the trailing matrix
// is updated by one GEMM per panel.
//
// GERCP may pick a column alpha >= k1 whose rows >= k are stale. That
// column is refreshed from the panel's L before the swap, and the stale
// copy of column k (kept from panel start, with later row swaps applied)
// moves to position alpha so that the GEMM still sees consistent data.
inline void Eliminator::run_blocked(std::size_t b) {
    const std::size_t nn = n();
    const bool rercp = kind_ == PivotKind::rercp;
    Matrix panel;
    std::vector<double> lrow;
    std::vector<double> fresh;
    bool exact_next = false;

    std::size_t k0 = 0;
    while (k0 < nn) {
        if (rercp && nn - k0 <= sketch_->r()) {
            maintain_sketch_ = false;
            tail_ = TailRule::exact_when_small;
            run_unblocked(k0);
            return;
        }
        std::size_t k1 = k0 + std::min(b, nn - k0);
        if (rercp) {
            k1 = std::min(k1, nn - sketch_->r());
        }
        const std::size_t rows0 = nn - k0;
        auto snapshot_panel = [&]() {
            panel = Matrix(rows0, k1 - k0);
            for (std::size_t j = k0; j < k1; ++j) {
                std::copy_n(work_.data() + k0 + j * nn, rows0, panel.data() + (j - k0) * rows0);
            }
        };
        if (rercp) {
            snapshot_panel();
        }

        bool flushed = false;
        std::size_t k = k0;
        for (; k < k1; ++k) {
            const std::size_t m = nn - k;
            if (rercp) {
                counters_.comparisons += m - 1;
                std::size_t alpha = k;
                bool from_sketch = false;
                if (!sketch_->degenerate()) {
                    if (exact_next) {
                        alpha = exact_column(k);
                        exact_next = false;
                    } else {
                        alpha = select_pivot_column(*sketch_, k, cfg_->g).column;
                        ++usage_->sketched_pivots;
                        from_sketch = true;
                    }
                }
                if (alpha >= k1) {
                    // Refresh the stale column alpha for rows >= k.
                    fresh.assign(work_.data() + k + alpha * nn, work_.data() + (alpha + 1) * nn);
                    gemv_minus(fresh.data(), std::as_const(work_).block(k, k0, m, k - k0),
                               work_.data() + k0 + alpha * nn);
                    double* ck = work_.data() + k * nn;
                    double* ca = work_.data() + alpha * nn;
                    std::swap_ranges(ck, ck + k, ca);
                    double* stale_k = panel.data() + (k - k0) * rows0 + (k - k0);
                    std::swap_ranges(ca + k, ca + nn, stale_k);
                    std::copy(fresh.begin(), fresh.end(), ck + k);
                    // Column alpha now holds the stale old column k; the panel
                    // copy of position k now holds the stale alpha.
                    pc_.swap(k, alpha);
                    counters_.col_entry_swaps += nn;
                    sketch_->swap_psi_cols(k, alpha);
                } else if (alpha != k) {
                    swap_columns(k, alpha);
                    panel.swap_cols(k - k0, alpha - k0);
                }
                if (from_sketch && column_is_zero(k, k)) {
                    // The sketch picked an exactly zero column. Fall back to
                    // exact norms, which need a fully updated trailing matrix.
                    --usage_->sketched_pivots;
                    if (k > k0) {
                        gemm_accumulate(work_.block(k, k1, m, nn - k1),
                                        std::as_const(work_).block(k, k0, m, k - k0),
                                        std::as_const(work_).block(k0, k1, k - k0, nn - k1), -1.0);
                        flushed = true;
                        exact_next = true;
                        break;
                    }
                    const std::size_t alt = exact_column(k);
                    swap_columns(k, alt);
                    snapshot_panel();
                }
            }
            const std::size_t beta = kind_ == PivotKind::none ? k : row_pivot(k);
            if (beta != k) {
                swap_rows(k, beta);
                if (rercp) {
                    panel.swap_rows(k - k0, beta - k0);
                }
            }
            eliminate_pivot(k);

            const double* lk = work_.data() + k * nn;
            for (std::size_t j = k + 1; j < k1; ++j) {
                double* cj = work_.data() + j * nn;
                const double u = cj[k];
                if (u != 0.0) {
                    axpy_minus(cj + k + 1, lk + k + 1, u, m - 1);
                }
            }
            if (k > k0) {
                lrow.resize(k - k0);
                for (std::size_t p = k0; p < k; ++p) {
                    lrow[p - k0] = work_(k, p);
                }
                for (std::size_t j = k1; j < nn; ++j) {
                    const double* cj = work_.data() + j * nn + k0;
                    double acc = 0.0;
                    for (std::size_t p = 0; p < k - k0; ++p) {
                        acc += lrow[p] * cj[p];
                    }
                    work_(k, j) -= acc;
                }
            }
            if (rercp) {
                advance_sketch(k);
            }
        }
        if (flushed) {
            k0 = k;
            continue;
        }
        if (k1 < nn) {
            gemm_accumulate(work_.block(k1, k1, nn - k1, nn - k1),
                            std::as_const(work_).block(k1, k0, nn - k1, k1 - k0),
                            std::as_const(work_).block(k0, k1, k1 - k0, nn - k1), -1.0);
        }
        k0 = k1;
    }
}

} // namespace detail

/// Scalar GERCP: one sketched column choice, one partial row pivot and one
/// rank-1 update per step, with Psi advanced after every step.
inline Factorization gercp_factorize(const Matrix& a, const SketchConfig& config,
                                     const GercpOptions& options = {}) {
    config.validate();
    if (!a.square() || a.empty()) {
        throw ArgumentError("gercp_factorize: matrix must be square and nonempty");
    }
    SketchState sketch = init_sketch(a, config, options.tail == TailRule::exact_when_small);
    detail::Eliminator e(a, PivotKind::rercp, options.track_growth);
    e.attach_sketch(&sketch, &config, options.tail, &options.observer);
    e.run_unblocked(0);
    return std::move(e).finish();
}

/// Blocked GERCP with panels of width config.block_size. Once the trailing
/// dimension drops to r the remaining block is finished with exact column
/// norms and the sketch is no longer advanced.
inline Factorization block_gercp_factorize(const Matrix& a, const SketchConfig& config) {
    config.validate();
    if (!a.square() || a.empty()) {
        throw ArgumentError("block_gercp_factorize: matrix must be square and nonempty");
    }
    SketchState sketch = init_sketch(a, config, true);
    detail::Eliminator e(a, PivotKind::rercp, false);
    e.attach_sketch(&sketch, &config, TailRule::exact_when_small, nullptr);
    e.run_blocked(config.block_size);
    return std::move(e).finish();
}

/// Factorizes with any strategy. GENP, GEPP and GERCP use the blocked
/// engine unless growth tracking is requested; the other strategies always
/// run unblocked. For GERCP `seed` replaces the configured sketch seed.
inline Factorization factorize(const Matrix& a, const PivotStrategy& strategy,
                               bool track_growth = false, std::uint64_t seed = 0) {
    strategy.validate();
    if (!a.square() || a.empty()) {
        throw ArgumentError("factorize: matrix must be square and nonempty");
    }
    if (strategy.kind == PivotKind::rercp) {
        SketchConfig cfg = *strategy.rercp_config;
        cfg.seed = seed;
        if (track_growth) {
            GercpOptions opts;
            opts.track_growth = true;
            return gercp_factorize(a, cfg, opts);
        }
        return block_gercp_factorize(a, cfg);
    }
    detail::Eliminator e(a, strategy.kind, track_growth);
    const bool blocked = !track_growth &&
                         (strategy.kind == PivotKind::none || strategy.kind == PivotKind::partial);
    if (blocked) {
        e.run_blocked(strategy.block_size);
    } else {
        e.run_unblocked(0);
    }
    return std::move(e).finish();
}

/// Replays elimination with externally supplied pivots: at step k, columns
/// k and col_pivots[k] are exchanged, then rows k and row_pivots[k]. Used to
/// compare any strategy against a fixed pivot sequence.
inline Factorization factorize_with_pivots(const Matrix& a, std::span<const std::size_t> row_pivots,
                                           std::span<const std::size_t> col_pivots) {
    const std::size_t n = a.rows();
    if (!a.square() || a.empty() || row_pivots.size() != n || col_pivots.size() != n) {
        throw ArgumentError("factorize_with_pivots: shape mismatch");
    }
    Factorization f;
    f.lu = a;
    f.perm_r = Permutation(n);
    f.perm_c = Permutation(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (row_pivots[k] < k || row_pivots[k] >= n || col_pivots[k] < k || col_pivots[k] >= n) {
            throw ArgumentError("factorize_with_pivots: pivot index outside the trailing block");
        }
        f.lu.swap_cols(k, col_pivots[k]);
        f.perm_c.swap(k, col_pivots[k]);
        f.lu.swap_rows(k, row_pivots[k]);
        f.perm_r.swap(k, row_pivots[k]);
        const double pivot = f.lu(k, k);
        if (pivot == 0.0) {
            f.singular = true;
            for (std::size_t i = k + 1; i < n; ++i) {
                f.lu(i, k) = 0.0;
            }
            continue;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            f.lu(i, k) /= pivot;
        }
        for (std::size_t j = k + 1; j < n; ++j) {
            for (std::size_t i = k + 1; i < n; ++i) {
                f.lu(i, j) -= f.lu(i, k) * f.lu(k, j);
            }
        }
    }
    return f;
}

/// Recovers the per-step pivot indices from a permutation's recorded swaps.
inline std::vector<std::size_t> pivot_sequence(const Permutation& p) {
    std::vector<std::size_t> seq(p.size());
    for (std::size_t k = 0; k < seq.size(); ++k) {
        seq[k] = k;
    }
    for (const auto& s : p.swaps()) {
        seq[s.position] = s.target;
    }
    return seq;
}

} // namespace rcplu
