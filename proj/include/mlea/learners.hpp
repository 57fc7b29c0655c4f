// learners.hpp: The algorithm stacks: the unconstrained potential-method
// learner, the spectraplex reduction wrapper around it, the MMWU baseline, and
// the OCO gradient-linearization entry point. The composite learner runs the
// structural invariants (per-step one-sided Jensen, reduction guarantees,
// telescoping total-loss bound) on every round when monitoring is enabled.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mlea/eig.hpp"
#include "mlea/errors.hpp"
#include "mlea/matrix.hpp"
#include "mlea/potentials.hpp"
#include "mlea/rng.hpp"
#include "mlea/spectral.hpp"

namespace mlea {

// ------------------------------- domain types --------------------------------

/// Sufficient statistic of the unconstrained learner: S_t is the negated sum
/// of the surrogate losses seen so far (S_1 = 0), eps = 2l.
struct LearnerState {
    HermitianMatrix S;
    long t = 1;
    double eps = 0.0;
    PotentialSpec potential;

    static LearnerState initial(PotentialSpec pot, double loss_bound, int dim) {
        if (loss_bound <= 0.0) throw contract_error("LearnerState: loss bound must be > 0");
        LearnerState s;
        s.S = HermitianMatrix::zero(dim);
        s.t = 1;
        s.eps = 2.0 * loss_bound;
        s.potential = pot;
        return s;
    }
};

/// Everything the reduction remembers between emitting X_t and processing G_t.
struct ReductionContext {
    long round = 0;
    HermitianMatrix x_tilde;     // unconstrained prediction
    EigenDecomposition eig;      // its eigendecomposition (ascending)
    DensityMatrix x;             // constrained prediction
    HermitianMatrix u;           // Frobenius-normalized negative part, if any
    bool has_negative = false;
    double pos_trace = 0.0;
};

struct RegretTraceRow {
    long t = 0;
    double loss = 0.0;
    double cum_regret = 0.0;
    double bound = 0.0;
};

struct RegretTrace {
    std::vector<RegretTraceRow> rows;
};

// --------------------------- unconstrained learner ---------------------------

// X_t = [Phi_t(S_t + eps I) - Phi_t(S_t - eps I)] / (2 eps), assembled in the
// eigenbasis of S_t (with which it therefore commutes).
inline HermitianMatrix unconstrained_predict(const LearnerState& state,
                                             const EigenDecomposition& eig_S) {
    std::vector<double> f(eig_S.dim);
    for (int i = 0; i < eig_S.dim; ++i) {
        const double lam = eig_S.values[i];
        f[i] = (potential_eval(state.potential, lam + state.eps, state.t) -
                potential_eval(state.potential, lam - state.eps, state.t)) /
               (2.0 * state.eps);
    }
    return spectral_assemble(eig_S, f);
}

inline HermitianMatrix unconstrained_predict(const LearnerState& state) {
    return unconstrained_predict(state, eig_hermitian(state.S));
}

// S <- S - G, t <- t + 1. The operator-norm contract is a hard error: a
// clamped loss would silently void the regret guarantee.
inline LearnerState unconstrained_update(LearnerState state, const HermitianMatrix& G) {
    state.S.check_same_dim(G);
    const double gnorm = op_norm(G);
    if (gnorm > state.eps + 1e-9)
        throw contract_error("unconstrained_update: |G|_op = " + std::to_string(gnorm) +
                             " exceeds eps = " + std::to_string(state.eps));
    state.S -= G;
    state.t += 1;
    return state;
}

// ------------------------------ reduction layer ------------------------------

namespace detail {

// Shared clamp/normalize step given the eigendecomposition of x_tilde.
inline std::pair<DensityMatrix, ReductionContext> reduce_from_eig(EigenDecomposition eig,
                                                                  HermitianMatrix x_tilde) {
    const int d = eig.dim;
    ReductionContext ctx;
    ctx.x_tilde = std::move(x_tilde);

    double pos_trace = 0.0, neg_fro2 = 0.0;
    double max_val = -std::numeric_limits<double>::infinity();
    bool any_negative = false;
    for (double v : eig.values) {
        max_val = std::max(max_val, v);
        if (v > 0.0) pos_trace += v;
        if (v < 0.0) {
            any_negative = true;
            neg_fro2 += v * v;
        }
    }
    ctx.has_negative = any_negative;
    ctx.pos_trace = pos_trace;

    if (any_negative) {
        std::vector<double> nw(d, 0.0);
        const double nf = std::sqrt(neg_fro2);
        for (int i = 0; i < d; ++i)
            if (eig.values[i] < 0.0) nw[i] = eig.values[i] / nf;
        ctx.u = spectral_assemble(eig, nw);
    }

    if (max_val <= 1e-14) {
        ctx.x = DensityMatrix::maximally_mixed(d);
    } else {
        std::vector<double> pw(d, 0.0);
        for (int i = 0; i < d; ++i)
            if (eig.values[i] > 0.0) pw[i] = eig.values[i] / pos_trace;
        ctx.x = DensityMatrix::from_psd_unit_trace(spectral_assemble(eig, pw));
    }
    ctx.eig = std::move(eig);
    return {ctx.x, std::move(ctx)};
}

}  // namespace detail

// Positive eigenvalue part normalized to unit trace; the maximally mixed state
// when nothing positive remains (all eigenvalues <= 1e-14).
inline std::pair<DensityMatrix, ReductionContext> reduce_predict(const HermitianMatrix& x_tilde) {
    return detail::reduce_from_eig(eig_hermitian(x_tilde), x_tilde);
}

// Two-step projection of the true loss G into the surrogate loss sent to the
// unconstrained learner: Gbar = G - <G, X> I, then the U-direction correction
// when the unconstrained prediction had negative eigenvalues.
inline HermitianMatrix surrogate_loss(const HermitianMatrix& G, const ReductionContext& ctx) {
    if (ctx.x.empty()) throw usage_error("surrogate_loss: context not initialized");
    G.check_same_dim(ctx.x_tilde);
    const double gx = inner(G, ctx.x);
    HermitianMatrix gbar = G;
    HermitianMatrix id = HermitianMatrix::identity(G.dim());
    gbar -= gx * id;
    if (!ctx.has_negative) return gbar;
    const double c = inner(gbar, ctx.u);
    if (c >= 0.0) return gbar;
    gbar -= c * ctx.u;
    return gbar;
}

// ---------------------------------- MMWU -------------------------------------

// Normalized matrix exponential of the negated (learning-rate scaled)
// cumulative loss.
inline DensityMatrix mmwu_predict(const HermitianMatrix& cumulative_loss, double eta_t) {
    if (eta_t <= 0.0) throw contract_error("mmwu_predict: eta must be > 0");
    HermitianMatrix a = cumulative_loss;
    a *= -eta_t;
    return matrix_exp_normalized(a);
}

// ----------------------------- invariant options -----------------------------

struct InvariantOptions {
    bool enabled = true;
    int comparator_samples = 32;
    std::uint64_t seed = 0x11C0FFEEull;
    double tol_jensen = 1e-8;      // per-step one-sided Jensen, scale-relative
    double tol_reduction = 1e-9;   // both reduction clauses, scale-relative
    double tol_telescope = 1e-6;   // telescoping sum, per-round scale-relative
};

// ----------------------------- composite learner -----------------------------

/// The full matrix LEA algorithm: potential-method learner on Hermitian
/// matrices wrapped by the spectraplex reduction. predict() and observe(G)
/// alternate; finalize() closes the telescoping check.
class LeaLearner {
  public:
    LeaLearner(PotentialSpec pot, double loss_bound, int dim,
               InvariantOptions inv = InvariantOptions{})
        : state_(LearnerState::initial(pot, loss_bound, dim)),
          l_(loss_bound),
          inv_(inv),
          rng_(inv.seed),
          surrogate_sum_(HermitianMatrix::zero(dim)) {
        if (pot.dim != dim)
            throw contract_error("LeaLearner: potential dim must match matrix dim");
    }

    int dim() const { return state_.S.dim(); }
    long round() const { return state_.t; }
    double loss_bound() const { return l_; }
    const LearnerState& state() const { return state_; }

    const DensityMatrix& predict() {
        if (!ctx_ || ctx_->round != state_.t) {
            if (!eig_current_) eig_current_ = eig_hermitian(state_.S);
            const int d = dim();
            f_current_.assign(d, 0.0);
            for (int i = 0; i < d; ++i) {
                const double lam = eig_current_->values[i];
                f_current_[i] =
                    (potential_eval(state_.potential, lam + state_.eps, state_.t) -
                     potential_eval(state_.potential, lam - state_.eps, state_.t)) /
                    (2.0 * state_.eps);
            }
            HermitianMatrix x_tilde = spectral_assemble(*eig_current_, f_current_);
            // X~ shares the eigenbasis of S_t: reuse it, re-sorted by f value.
            std::vector<int> idx(d);
            std::iota(idx.begin(), idx.end(), 0);
            std::stable_sort(idx.begin(), idx.end(),
                             [&](int a, int b) { return f_current_[a] < f_current_[b]; });
            EigenDecomposition ex;
            ex.dim = d;
            ex.values.resize(d);
            ex.vectors.resize(static_cast<size_t>(d) * d);
            for (int k = 0; k < d; ++k) {
                ex.values[k] = f_current_[idx[k]];
                std::copy_n(eig_current_->vectors.begin() + static_cast<size_t>(idx[k]) * d, d,
                            ex.vectors.begin() + static_cast<size_t>(k) * d);
            }
            auto [x, ctx] = detail::reduce_from_eig(std::move(ex), std::move(x_tilde));
            (void)x;
            ctx.round = state_.t;
            ctx_ = std::move(ctx);
        }
        return ctx_->x;
    }

    const ReductionContext& context() {
        predict();
        return *ctx_;
    }

    void observe(const HermitianMatrix& G) {
        predict();
        if (ctx_->round != state_.t)
            throw usage_error("observe: stale reduction context (round mismatch)");
        G.check_same_dim(state_.S);
        const std::vector<double> g_vals = eigvals_hermitian(G);
        const double gnorm = std::max(std::fabs(g_vals.front()), std::fabs(g_vals.back()));
        if (gnorm > l_ + 1e-9)
            throw contract_error("observe: |G|_op = " + std::to_string(gnorm) +
                                 " exceeds declared bound l = " + std::to_string(l_));

        HermitianMatrix gt = surrogate_loss(G, *ctx_);
        const std::vector<double> gt_vals = eigvals_hermitian(gt);
        const double gtnorm = std::max(std::fabs(gt_vals.front()), std::fabs(gt_vals.back()));

        // <G~, X~> in the shared eigenbasis of S_t.
        const std::vector<double> w = basis_quadratic_forms(*eig_current_, gt);
        double gt_xt = 0.0;
        for (int i = 0; i < dim(); ++i) gt_xt += f_current_[i] * w[i];

        if (inv_.enabled) check_reduction_clauses(G, gnorm, gt, gtnorm, gt_xt);

        if (state_.t == 1) {
            double phi1 = 0.0;
            for (double g : gt_vals) phi1 += potential_eval(state_.potential, -g, 1);
            boundary_term_ = gt_xt + phi1;
            if (inv_.enabled && state_.potential.family == PotentialFamily::Erfi &&
                phi1 > 1e-12 * std::max(1.0, std::fabs(phi1)))
                throw invariant_error("round-1 boundary term tr Phi_1(-G~_1) = " +
                                      std::to_string(phi1) + " is positive for erfi");
        }

        // Advance the state; the new eigendecomposition feeds both the Jensen
        // check and the next round's prediction.
        HermitianMatrix s_next = state_.S;
        s_next -= gt;
        EigenDecomposition eig_next = eig_hermitian(s_next);

        if (inv_.enabled) check_per_step_jensen(gt_xt, eig_next);

        surrogate_total_ += gt_xt;
        surrogate_sum_ += gt;
        state_.S = std::move(s_next);
        state_.t += 1;
        eig_current_ = std::move(eig_next);
        ctx_.reset();
    }

    // Telescoping total-loss bound over everything observed so far.
    void finalize() const {
        if (!inv_.enabled || state_.t == 1) return;
        const long T = state_.t - 1;
        double phi_T = 0.0;
        for (double v : eig_current_->values)
            phi_T += potential_eval(state_.potential, -v, T);  // eig of S_{T+1} = -sum G~
        const double rhs = boundary_term_ - phi_T;
        const double scale =
            std::max({1.0, std::fabs(surrogate_total_), std::fabs(boundary_term_),
                      std::fabs(phi_T)});
        if (surrogate_total_ > rhs + inv_.tol_telescope * static_cast<double>(T) * scale)
            throw invariant_error("telescoping bound violated: total " +
                                  std::to_string(surrogate_total_) + " > " + std::to_string(rhs));
    }

    double surrogate_loss_total() const { return surrogate_total_; }
    const HermitianMatrix& surrogate_sum() const { return surrogate_sum_; }

  private:
    void check_reduction_clauses(const HermitianMatrix& G, double gnorm, const HermitianMatrix& gt,
                                 double gtnorm, double gt_xt) {
        if (gtnorm > 2.0 * gnorm + inv_.tol_reduction * std::max(1.0, gnorm))
            throw invariant_error("reduction clause 1 violated: |G~|_op = " +
                                  std::to_string(gtnorm) + " > 2 |G|_op = " +
                                  std::to_string(2.0 * gnorm));
        const double g_x = inner(G, ctx_->x);
        for (int s = 0; s < inv_.comparator_samples; ++s) {
            const std::vector<cplx> v = haar_unit_vector(dim(), rng_);
            const double vgv = quadratic_form(G, v);
            const double vgtv = quadratic_form(gt, v);
            const double lhs = g_x - vgv;
            const double rhs = gt_xt - vgtv;
            const double scale =
                std::max({1.0, std::fabs(g_x), std::fabs(gt_xt), std::fabs(vgv), std::fabs(vgtv)});
            if (lhs > rhs + inv_.tol_reduction * scale)
                throw invariant_error("reduction clause 2 violated on sampled comparator: " +
                                      std::to_string(lhs) + " > " + std::to_string(rhs));
        }
    }

    void check_per_step_jensen(double gt_xt, const EigenDecomposition& eig_next) {
        double lhs = 0.0;
        for (double v : eig_next.values) lhs += potential_eval(state_.potential, v, state_.t);
        double half_sum = 0.0;
        for (double lam : eig_current_->values)
            half_sum += 0.5 * (potential_eval(state_.potential, lam + state_.eps, state_.t) +
                               potential_eval(state_.potential, lam - state_.eps, state_.t));
        const double rhs = half_sum - gt_xt;
        const double scale = std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
        if (lhs > rhs + inv_.tol_jensen * scale)
            throw invariant_error("per-step one-sided Jensen violated at t = " +
                                  std::to_string(state_.t) + ": " + std::to_string(lhs) + " > " +
                                  std::to_string(rhs));
    }

    LearnerState state_;
    double l_;
    InvariantOptions inv_;
    Rng rng_;
    std::optional<EigenDecomposition> eig_current_;
    std::optional<ReductionContext> ctx_;
    std::vector<double> f_current_;
    HermitianMatrix surrogate_sum_{};
    double surrogate_total_ = 0.0;
    double boundary_term_ = 0.0;
};

// Gradient-linearization entry points.
inline DensityMatrix lea_step(LeaLearner& learner, const HermitianMatrix& G) {
    DensityMatrix x = learner.predict();
    learner.observe(G);
    return x;
}

inline DensityMatrix oco_step(LeaLearner& learner, const HermitianMatrix& grad, double L) {
    if (L > learner.loss_bound() + 1e-12)
        throw contract_error("oco_step: Lipschitz bound exceeds the learner's declared bound");
    return lea_step(learner, grad);
}

// ------------------------------- MMWU learner --------------------------------

enum class MmwuEta { Minimax, Oracle, Fixed };

/// FTRL with negative quantum entropy. Learning-rate menu: minimax
/// eta_t = sqrt(log d / t), oracle eta_t = sqrt(S_rel / t) (needs the
/// comparator's relative entropy; benchmark-only), or a fixed eta. Rates apply
/// to losses normalized by the declared bound l.
class MmwuLearner {
  public:
    MmwuLearner(int dim, double loss_bound, MmwuEta mode, double fixed_eta = 0.0,
                double oracle_S_rel = 0.0)
        : L_(HermitianMatrix::zero(dim)), l_(loss_bound), mode_(mode), fixed_eta_(fixed_eta),
          oracle_S_(oracle_S_rel) {
        if (loss_bound <= 0.0) throw contract_error("MmwuLearner: loss bound must be > 0");
        if (mode == MmwuEta::Fixed && fixed_eta <= 0.0)
            throw contract_error("MmwuLearner: fixed eta must be > 0");
        if (mode == MmwuEta::Oracle && oracle_S_rel < 0.0)
            throw contract_error("MmwuLearner: oracle S_rel must be >= 0");
    }

    double eta_at(long t) const {
        switch (mode_) {
            case MmwuEta::Minimax:
                return std::sqrt(std::log(static_cast<double>(L_.dim())) / static_cast<double>(t));
            case MmwuEta::Oracle:
                return oracle_S_ > 0.0 ? std::sqrt(oracle_S_ / static_cast<double>(t)) : 0.0;
            case MmwuEta::Fixed:
                return fixed_eta_;
        }
        return 0.0;
    }

    long round() const { return t_; }
    double loss_bound() const { return l_; }

    const DensityMatrix& predict() {
        if (!x_ || cached_round_ != t_) {
            const double eta = eta_at(t_);
            if (eta <= 0.0) {
                x_ = DensityMatrix::maximally_mixed(L_.dim());
            } else {
                x_ = mmwu_predict(L_ * (1.0 / l_), eta);
            }
            cached_round_ = t_;
        }
        return *x_;
    }

    void observe(const HermitianMatrix& G) {
        predict();
        G.check_same_dim(L_);
        const double gnorm = op_norm(G);
        if (gnorm > l_ + 1e-9)
            throw contract_error("mmwu observe: |G|_op exceeds declared bound");
        const double r = gnorm / l_;
        bound_sum_ += 0.5 * eta_at(t_) * r * r;
        L_ += G;
        t_ += 1;
    }

    // Eq-style guarantee for the comparator whose relative entropy is given:
    // l (S_rel / eta_T + (1/2) sum_t eta_t |G_t / l|_op^2). Zero-rate oracle
    // runs (S_rel = 0) predict the mixed state forever and owe zero regret.
    double bound_for(double S_rel) const {
        if (t_ == 1) return 0.0;
        const double eta_T = eta_at(t_ - 1);
        if (eta_T <= 0.0) return 0.0;
        return l_ * (S_rel / eta_T + bound_sum_);
    }

  private:
    HermitianMatrix L_;
    double l_;
    MmwuEta mode_;
    double fixed_eta_;
    double oracle_S_;
    long t_ = 1;
    double bound_sum_ = 0.0;
    std::optional<DensityMatrix> x_;
    long cached_round_ = 0;
};

}  // namespace mlea
