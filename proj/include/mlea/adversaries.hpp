// adversaries.hpp: Loss-sequence generators, the top-k comparator
// construction from the regret lower bound, the anti-concentration check for
// unimodal order statistics, and the lower-bound measurement harness.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "mlea/errors.hpp"
#include "mlea/matrix.hpp"
#include "mlea/quantum.hpp"
#include "mlea/rng.hpp"
#include "mlea/spectral.hpp"

namespace mlea {

enum class AdversaryKind { UniformDiag, GreedySign, RandomPauli, RandomHermitian };

inline const char* to_string(AdversaryKind k) {
    switch (k) {
        case AdversaryKind::UniformDiag: return "uniform_diag";
        case AdversaryKind::GreedySign: return "greedy_sign";
        case AdversaryKind::RandomPauli: return "random_pauli";
        case AdversaryKind::RandomHermitian: return "random_hermitian";
    }
    return "?";
}

struct AdversarySpec {
    AdversaryKind kind = AdversaryKind::UniformDiag;
    double l = 1.0;
    std::uint64_t seed = 0;
};

/// Emits one loss matrix per round with |G_t|_op <= l by construction.
class Adversary {
  public:
    Adversary(AdversarySpec spec, int dim) : spec_(spec), dim_(dim), rng_(spec.seed) {
        if (spec.l <= 0.0) throw contract_error("Adversary: l must be > 0");
        if (dim < 1) throw dimension_error("Adversary: dim must be >= 1");
        if (spec.kind == AdversaryKind::RandomPauli) {
            int n = 0;
            while ((1 << n) < dim) ++n;
            if ((1 << n) != dim)
                throw dimension_error("random_pauli adversary requires dim = 2^n");
            qubits_ = n;
        }
    }

    HermitianMatrix next_loss(const DensityMatrix& x_t, const DensityMatrix* truth = nullptr) {
        switch (spec_.kind) {
            case AdversaryKind::UniformDiag: {
                std::vector<double> diag(dim_);
                for (double& v : diag) v = rng_.uniform(-spec_.l, spec_.l);
                return HermitianMatrix::diagonal(diag);
            }
            case AdversaryKind::GreedySign: {
                if (!truth) throw contract_error("greedy_sign adversary requires a truth state");
                HermitianMatrix m = x_t.matrix() - truth->matrix();
                HermitianMatrix g = spectral_sign(m);
                g *= spec_.l;
                return g;
            }
            case AdversaryKind::RandomPauli: {
                PauliString p = PauliString::uniform(qubits_, rng_);
                HermitianMatrix g = p.to_matrix();
                g *= spec_.l;
                return g;
            }
            case AdversaryKind::RandomHermitian: {
                HermitianMatrix g = gaussian_hermitian(dim_, rng_);
                const double n = op_norm(g);
                if (n > 0.0) g *= spec_.l / n;
                return g;
            }
        }
        throw contract_error("Adversary: unknown kind");
    }

    const AdversarySpec& spec() const { return spec_; }

  private:
    AdversarySpec spec_;
    int dim_;
    Rng rng_;
    int qubits_ = 0;
};

// ------------------------------ top-k comparator -----------------------------

// k = ceil(d e^{-r}), guarded against the roundoff of d exp(-r) landing just
// above an integer (r = log d must give exactly k = 1).
inline int topk_count(int d, double r) {
    const int k = static_cast<int>(std::ceil(static_cast<double>(d) * std::exp(-r) - 1e-9));
    return std::min(std::max(k, 1), d);
}

// Diagonal comparator placing uniform mass on the k = ceil(d e^{-r}) largest
// coordinates of the cumulative negated loss vector; its relative entropy is
// log(d / k) <= r exactly.
inline DensityMatrix topk_comparator(std::span<const double> y, double r) {
    const int d = static_cast<int>(y.size());
    if (d < 1) throw dimension_error("topk_comparator: empty vector");
    const double logd = std::log(static_cast<double>(d));
    if (r < 0.0 || r > logd + 1e-12)
        throw range_error("topk_comparator: r must lie in [0, log d]");
    const int k = topk_count(d, r);

    std::vector<int> idx(d);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return y[a] > y[b]; });
    std::vector<double> diag(d, 0.0);
    for (int i = 0; i < k; ++i) diag[idx[i]] = 1.0 / k;
    return DensityMatrix::from_psd_unit_trace(HermitianMatrix::diagonal(diag));
}

// -------------------------- anti-concentration check -------------------------

struct AntiConcentrationResult {
    double empirical = 0.0;  // Monte-Carlo mean of the top-k order statistic average
    double bound = 0.0;      // sigma sqrt(n) (sqrt(2 log(d / (sqrt(2 pi)(k+1)))) - 1)
    double std_error = 0.0;
    bool pass = false;
};

// Sums of n Uniform[-1,1] variables across d coordinates: the average of the
// top k order statistics must clear the closed-form lower bound. Preconditions:
// k <= (d+1)/(sqrt(2 pi) e^2) - 1 and n >= (rho^2 / sigma^6)(d+1)^2 with
// sigma^2 = 1/3 and rho = 1/4 for this distribution.
inline AntiConcentrationResult anticoncentration_check(int d, long n, int k, int trials,
                                                       std::uint64_t seed) {
    const double sqrt2pi = std::sqrt(2.0 * M_PI);
    const double e2 = std::exp(2.0);
    if (k < 1 || k > static_cast<int>((d + 1) / (sqrt2pi * e2) - 1.0))
        throw contract_error("anticoncentration_check: k exceeds (d+1)/(sqrt(2 pi) e^2) - 1");
    const double sigma2 = 1.0 / 3.0, rho = 0.25;
    const double n_min = (rho * rho / (sigma2 * sigma2 * sigma2)) * (d + 1.0) * (d + 1.0);
    if (static_cast<double>(n) < n_min)
        throw contract_error("anticoncentration_check: n below (rho^2/sigma^6)(d+1)^2 = " +
                             std::to_string(n_min));
    if (trials < 2) throw contract_error("anticoncentration_check: trials must be >= 2");

    Rng rng(seed);
    std::vector<double> z(d);
    double sum = 0.0, sum2 = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        for (int i = 0; i < d; ++i) {
            double s = 0.0;
            for (long m = 0; m < n; ++m) s += rng.uniform(-1.0, 1.0);
            z[i] = s;
        }
        std::nth_element(z.begin(), z.begin() + (d - k), z.end());
        double top = 0.0;
        for (int i = d - k; i < d; ++i) top += z[i];
        top /= k;
        sum += top;
        sum2 += top * top;
    }
    AntiConcentrationResult res;
    res.empirical = sum / trials;
    const double var = std::max(0.0, sum2 / trials - res.empirical * res.empirical);
    res.std_error = std::sqrt(var / trials);
    const double sigma = std::sqrt(sigma2);
    res.bound = sigma * std::sqrt(static_cast<double>(n)) *
                (std::sqrt(2.0 * std::log(d / (sqrt2pi * (k + 1.0)))) - 1.0);
    res.pass = res.empirical >= res.bound - 3.0 * res.std_error;
    return res;
}

// --------------------------- lower-bound measurement --------------------------

struct LowerBoundRow {
    double r = 0.0;
    int k = 0;
    double payoff_mean = 0.0;  // E <Y_T, u_k(Y_T)> over seeds
    double c_emp = 0.0;        // sqrt(2r) - payoff / (l sqrt(T/3))
};

// The uniform-diagonal adversary plays T rounds; the comparator puts uniform
// mass on the top-k coordinates of Y_T = -sum_t diag(G_t). Reports the
// empirical constant C_emp of the lower-bound shape sqrt(T/3)(sqrt(2r) - C).
inline std::vector<LowerBoundRow> lower_bound_harness(int d, long T, std::span<const double> rs,
                                                      int seeds, double l, std::uint64_t seed0) {
    if (d < 1 || T < 1 || seeds < 1 || l <= 0.0)
        throw contract_error("lower_bound_harness: bad arguments");
    std::vector<double> payoff_sums(rs.size(), 0.0);
    Rng root(seed0);
    for (int s = 0; s < seeds; ++s) {
        Rng rng = root.split(static_cast<std::uint64_t>(s));
        std::vector<double> y(d, 0.0);
        for (long t = 0; t < T; ++t)
            for (int i = 0; i < d; ++i) y[i] -= rng.uniform(-l, l);
        std::vector<double> sorted = y;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        for (size_t ri = 0; ri < rs.size(); ++ri) {
            const int k = topk_count(d, rs[ri]);
            double top = 0.0;
            for (int i = 0; i < k; ++i) top += sorted[i];
            payoff_sums[ri] += top / k;
        }
    }
    std::vector<LowerBoundRow> rows;
    for (size_t ri = 0; ri < rs.size(); ++ri) {
        LowerBoundRow row;
        row.r = rs[ri];
        row.k = topk_count(d, rs[ri]);
        row.payoff_mean = payoff_sums[ri] / seeds;
        row.c_emp = std::sqrt(2.0 * rs[ri]) -
                    row.payoff_mean / (l * std::sqrt(static_cast<double>(T) / 3.0));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace mlea
