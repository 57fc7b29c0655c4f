// potentials.hpp: The time-indexed potential family driving the unconstrained
// learner (exponential, exp-square, erfi, cosh), the one-dimensional recursion
// check, the Laplace-transform and Gaussian-ensemble quadrature identities,
// and the closed-form regret bounds.

#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mlea/errors.hpp"
#include "mlea/special.hpp"

namespace mlea {

enum class PotentialFamily { Exponential, ExpSquare, Erfi, Cosh };

inline const char* to_string(PotentialFamily f) {
    switch (f) {
        case PotentialFamily::Exponential: return "exponential";
        case PotentialFamily::ExpSquare: return "exp_square";
        case PotentialFamily::Erfi: return "erfi";
        case PotentialFamily::Cosh: return "cosh";
    }
    return "?";
}

/// A member of the potential family with its parameters. eps is the loss-sum
/// step bound (eps = 2l in the learner); dim divides the potential so that the
/// matrix trace of Phi stays O(1) at the start.
struct PotentialSpec {
    PotentialFamily family = PotentialFamily::Erfi;
    double eps = 0.0;
    int dim = 0;
    double eta = 0.0;  // exponential rate
    double z = 0.0;    // cosh parameter

    static PotentialSpec exp_square(double eps, int dim) {
        return validated({PotentialFamily::ExpSquare, eps, dim, 0.0, 0.0});
    }
    static PotentialSpec erfi(double eps, int dim) {
        return validated({PotentialFamily::Erfi, eps, dim, 0.0, 0.0});
    }
    static PotentialSpec cosh_pot(double eps, int dim, double z) {
        return validated({PotentialFamily::Cosh, eps, dim, 0.0, z});
    }
    static PotentialSpec exponential(double eps, int dim, double eta) {
        return validated({PotentialFamily::Exponential, eps, dim, eta, 0.0});
    }

  private:
    static PotentialSpec validated(PotentialSpec p) {
        if (p.eps <= 0.0) throw contract_error("PotentialSpec: eps must be > 0");
        if (p.dim < 1) throw contract_error("PotentialSpec: dim must be >= 1");
        if (p.family == PotentialFamily::Cosh && p.z < 0.0)
            throw contract_error("PotentialSpec: cosh requires z >= 0");
        if (p.family == PotentialFamily::Exponential && p.eta <= 0.0)
            throw contract_error("PotentialSpec: exponential requires eta > 0");
        return p;
    }
};

namespace detail {
inline void potential_range_error(const char* fam, double s, long t) {
    throw range_error(std::string("potential eval overflow for ") + fam +
                      " at s = " + std::to_string(s) + ", t = " + std::to_string(t));
}
}  // namespace detail

// Phi_t(s). Families:
//   exp_square : (eps/(d sqrt t)) exp(s^2 / (2 eps^2 t))
//   erfi       : (sqrt2 s/d) F(s/(eps sqrt(2t))) - (eps sqrt t/d) exp(s^2/(2 eps^2 t)),
//                F(x) = int_0^x exp(u^2) du  (closed form of the double-integral
//                definition; even in s, second derivative = exp_square/eps^2)
//   cosh       : (eps/(d sqrt t)) cosh(z s/(eps sqrt t))
//   exponential: exp(eta s)   (time-independent)
inline double potential_eval(const PotentialSpec& p, double s, long t) {
    if (t < 1) throw contract_error("potential_eval: t must be >= 1");
    const double sqt = std::sqrt(static_cast<double>(t));
    switch (p.family) {
        case PotentialFamily::ExpSquare: {
            const double u = s * s / (2.0 * p.eps * p.eps * static_cast<double>(t));
            if (u > 700.0) detail::potential_range_error("exp_square", s, t);
            return p.eps / (p.dim * sqt) * std::exp(u);
        }
        case PotentialFamily::Erfi: {
            const double x = s / (p.eps * std::sqrt(2.0 * static_cast<double>(t)));
            if (std::fabs(x) > 26.0) detail::potential_range_error("erfi", s, t);
            return std::sqrt(2.0) * s / p.dim * erfi_integral(x) -
                   p.eps * sqt / p.dim * std::exp(x * x);
        }
        case PotentialFamily::Cosh: {
            const double arg = p.z * s / (p.eps * sqt);
            if (std::fabs(arg) > 709.0) detail::potential_range_error("cosh", s, t);
            return p.eps / (p.dim * sqt) * std::cosh(arg);
        }
        case PotentialFamily::Exponential: {
            const double arg = p.eta * s;
            if (arg > 709.0) detail::potential_range_error("exponential", s, t);
            return std::exp(arg);
        }
    }
    throw contract_error("potential_eval: unknown family");
}

// Minimum over the grid of Phi_t(s) - [Phi_{t+1}(s+eps) + Phi_{t+1}(s-eps)]/2.
// Non-negative (up to round-off) for exp_square and erfi; fails for the
// time-independent exponential potential.
inline double check_recursion(const PotentialSpec& p, long t, std::span<const double> s_grid) {
    if (s_grid.empty()) throw contract_error("check_recursion: empty grid");
    double min_margin = std::numeric_limits<double>::infinity();
    for (double s : s_grid) {
        const double margin =
            potential_eval(p, s, t) -
            0.5 * (potential_eval(p, s + p.eps, t + 1) + potential_eval(p, s - p.eps, t + 1));
        min_margin = std::min(min_margin, margin);
    }
    return min_margin;
}

// Numerically evaluates the two-sided Laplace transform
//   int mu(z) exp(-z s) dz,  mu(z) = (eps^2 / (sqrt(2 pi) d)) exp(-eps^2 t z^2 / 2),
// which must reproduce Phi_t^expsq(s). Simpson rule on z in [-12, 12]/(eps sqrt t).
inline double laplace_quadrature_expsq(const PotentialSpec& p, double s, long t) {
    if (p.family != PotentialFamily::ExpSquare)
        throw contract_error("laplace_quadrature_expsq: spec must be exp_square");
    const double u = s * s / (2.0 * p.eps * p.eps * static_cast<double>(t));
    if (u > 700.0) detail::potential_range_error("exp_square(laplace)", s, t);
    const double zmax = 12.0 / (p.eps * std::sqrt(static_cast<double>(t)));
    const double c0 = p.eps * p.eps / (std::sqrt(2.0 * M_PI) * p.dim);
    const double a = 0.5 * p.eps * p.eps * static_cast<double>(t);
    return simpson([&](double z) { return c0 * std::exp(-a * z * z - z * s); }, -zmax, zmax, 4000);
}

// Numerically evaluates the Gaussian ensemble identity
//   int_0^inf phi(z) Phi_t^cosh(s; z) dz,  phi(z) = sqrt(2/pi) exp(-z^2/2),
// which must reproduce Phi_t^expsq(s). Simpson rule on z in [0, 12].
inline double gaussian_ensemble_decomposition(const PotentialSpec& p, double s, long t) {
    if (p.family != PotentialFamily::ExpSquare)
        throw contract_error("gaussian_ensemble_decomposition: spec must be exp_square");
    const double u = s * s / (2.0 * p.eps * p.eps * static_cast<double>(t));
    if (u > 700.0) detail::potential_range_error("exp_square(ensemble)", s, t);
    const double sqt = std::sqrt(static_cast<double>(t));
    const double pref = std::sqrt(2.0 / M_PI) * p.eps / (p.dim * sqt);
    const double w = s / (p.eps * sqt);
    return simpson([&](double z) { return pref * std::exp(-0.5 * z * z) * std::cosh(z * w); },
                   0.0, 12.0, 4000);
}

// ------------------------------ regret bounds -------------------------------

enum class RegretBoundKind { ErfiMain, ExpSq, MmwuOracle, MmwuMinimax };

inline const char* to_string(RegretBoundKind k) {
    switch (k) {
        case RegretBoundKind::ErfiMain: return "erfi_main";
        case RegretBoundKind::ExpSq: return "expsq";
        case RegretBoundKind::MmwuOracle: return "mmwu_oracle";
        case RegretBoundKind::MmwuMinimax: return "mmwu_minimax";
    }
    return "?";
}

// Closed-form regret bounds at horizon T, loss scale l, dimension d and
// comparator relative entropy S_rel:
//   erfi_main   : l sqrt(T) (sqrt(8 S_rel) + 6 + 2 sqrt 2)
//   expsq       : 2 sqrt2 l sqrt(T S_rel) + 4 sqrt2 l sqrt(T log T) + 2 sqrt(e) l
//   mmwu_minimax: l (sqrt(T log d) + (1/2) sum_t sqrt(log d / t)), the
//                 worst-case guarantee of eta_t = sqrt(log d / t)
//   mmwu_oracle : l (sqrt(T S_rel) + (1/2) sqrt(S_rel) sum_t 1/sqrt(t)), the
//                 oracle tuning eta_t = sqrt(S_rel / t)
inline double regret_bound(RegretBoundKind kind, long T, double l, int d, double S_rel) {
    if (T < 1) throw contract_error("regret_bound: T must be >= 1");
    if (l <= 0.0) throw contract_error("regret_bound: l must be > 0");
    if (d < 1) throw contract_error("regret_bound: d must be >= 1");
    const double logd = std::log(static_cast<double>(d));
    if (S_rel < -1e-12 || S_rel > logd + 1e-9)
        throw contract_error("regret_bound: S_rel outside [0, log d]");
    S_rel = std::max(S_rel, 0.0);
    const double sqT = std::sqrt(static_cast<double>(T));
    switch (kind) {
        case RegretBoundKind::ErfiMain:
            return l * sqT * (std::sqrt(8.0 * S_rel) + 6.0 + 2.0 * std::sqrt(2.0));
        case RegretBoundKind::ExpSq:
            return 2.0 * std::sqrt(2.0) * l * std::sqrt(static_cast<double>(T) * S_rel) +
                   4.0 * std::sqrt(2.0) * l *
                       std::sqrt(static_cast<double>(T) * std::log(static_cast<double>(T))) +
                   2.0 * std::sqrt(std::exp(1.0)) * l;
        case RegretBoundKind::MmwuMinimax: {
            double eta_sum = 0.0;
            for (long t = 1; t <= T; ++t) eta_sum += std::sqrt(logd / static_cast<double>(t));
            return l * (std::sqrt(static_cast<double>(T) * logd) + 0.5 * eta_sum);
        }
        case RegretBoundKind::MmwuOracle: {
            if (S_rel == 0.0) return 0.0;
            double inv_sqrt_sum = 0.0;
            for (long t = 1; t <= T; ++t) inv_sqrt_sum += 1.0 / std::sqrt(static_cast<double>(t));
            return l * (std::sqrt(static_cast<double>(T) * S_rel) +
                        0.5 * std::sqrt(S_rel) * inv_sqrt_sum);
        }
    }
    throw contract_error("regret_bound: unknown kind");
}

}  // namespace mlea
