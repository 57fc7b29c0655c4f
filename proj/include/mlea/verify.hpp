// verify.hpp: The self-check battery behind the `verify` CLI subcommand:
// one quick pass over every module's key invariants on a fresh checkout.

#pragma once

#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "mlea/adversaries.hpp"
#include "mlea/bench.hpp"
#include "mlea/jensen.hpp"
#include "mlea/learners.hpp"
#include "mlea/potentials.hpp"
#include "mlea/quantum.hpp"
#include "mlea/spectral.hpp"

namespace mlea {

inline bool verify_suite(std::ostream& os) {
    struct Check {
        std::string name;
        std::function<bool()> fn;
    };

    std::vector<Check> checks;
    auto add = [&](std::string name, std::function<bool()> fn) {
        checks.push_back({std::move(name), std::move(fn)});
    };

    add("eig reconstruction (d=16)", [] {
        Rng rng(1);
        HermitianMatrix A = gaussian_hermitian(16, rng);
        EigenDecomposition e = eig_hermitian(A);
        HermitianMatrix back = spectral_assemble(e, e.values);
        return (back - A).frobenius_norm() <= 1e-10 * (1.0 + A.frobenius_norm());
    });
    add("golden-thompson (200 pairs)", [] {
        Rng rng(2);
        auto mexp = [](const HermitianMatrix& m) {
            return apply_spectral(m, [](double x) { return std::exp(x); });
        };
        for (int i = 0; i < 200; ++i) {
            const int d = 2 + rng.uniform_int(5);
            HermitianMatrix A = gaussian_hermitian(d, rng), B = gaussian_hermitian(d, rng);
            const double lhs = mexp(A + B).trace();
            const double rhs = trace(mat_mul(mexp(A).to_cmatrix(), mexp(B).to_cmatrix())).real();
            if (lhs > rhs + 1e-9 * std::max({1.0, lhs, rhs})) return false;
        }
        return true;
    });
    add("potential recursion (t <= 16)", [] {
        std::vector<double> grid(201);
        for (int i = 0; i < 201; ++i) grid[i] = -20.0 + 0.2 * i;
        for (long t = 1; t <= 16; ++t) {
            if (check_recursion(PotentialSpec::exp_square(2.0, 4), t, grid) < -1e-10) return false;
            if (check_recursion(PotentialSpec::erfi(2.0, 4), t, grid) < -1e-10) return false;
        }
        return true;
    });
    add("laplace + ensemble identities", [] {
        PotentialSpec es = PotentialSpec::exp_square(2.0, 4);
        for (double s : {0.0, 1.5, -3.0}) {
            for (long t : {1L, 4L}) {
                const double ref = potential_eval(es, s, t);
                if (std::fabs(laplace_quadrature_expsq(es, s, t) - ref) > 1e-8 * std::fabs(ref))
                    return false;
                if (std::fabs(gaussian_ensemble_decomposition(es, s, t) - ref) >
                    1e-8 * std::fabs(ref))
                    return false;
            }
        }
        return true;
    });
    add("appendix counterexample", [] {
        std::vector<cplx> se = {0.0, 1.0, 1.0, 0.0};
        HermitianMatrix S = HermitianMatrix::from_entries(2, se);
        HermitianMatrix G = HermitianMatrix::diagonal(std::vector<double>{1.0, -1.0});
        const double gap = jensen_gap(SpectralFunction::abs(), S, G, 1.0);
        return std::fabs(gap - (2.0 - 2.0 * std::sqrt(2.0))) < 1e-10;
    });
    add("jensen suites (quick)", [] {
        if (random_jensen_suite(SpectralFunction::exp(0.5), 4, 500, 7).min_normalized_gap < -1e-9)
            return false;
        if (random_jensen_suite(SpectralFunction::erfi(1, 1.0, 4), 4, 500, 8).min_normalized_gap <
            -1e-8)
            return false;
        return random_jensen_suite(SpectralFunction::abs(), 4, 1000, 9).confirmed_violations > 0;
    });
    add("erfi run with structural invariants (d=8, T=64)", [] {
        LeaLearner learner(PotentialSpec::erfi(2.0, 8), 1.0, 8);
        Adversary adv({AdversaryKind::UniformDiag, 1.0, 3}, 8);
        for (int t = 0; t < 64; ++t) lea_step(learner, adv.next_loss(learner.predict()));
        learner.finalize();
        return true;
    });
    add("mmwu bound (d=8, T=64)", [] {
        ExperimentConfig c;
        c.seed = 4;
        c.d = 8;
        c.T = 64;
        c.l = 1.0;
        c.learner.kind = LearnerKind::MmwuMinimax;
        c.adversary = AdversaryKind::UniformDiag;
        c.comparator.kind = ComparatorPolicy::Kind::TopK;
        c.comparator.r = 1.0;
        run(c);  // throws if the bound invariant fails
        return true;
    });
    add("quantum losses: gradient checks", [] {
        Rng rng(5);
        DensityMatrix rho = DensityMatrix::pure(haar_unit_vector(4, rng));
        rho = depolarize_global(rho, 0.5);
        DensityMatrix truth = DensityMatrix::maximally_mixed(4);
        for (LossKind kind : {LossKind::L1, LossKind::VirtualCooling, LossKind::Renyi2}) {
            CMatrix g(4, 4);
            for (cplx& v : g.a) v = cplx(rng.normal(), rng.normal());
            HermitianMatrix O = HermitianMatrix::from_cmatrix(mat_mul(g, adjoint(g)));
            O *= 1.0 / op_norm(O);
            LossEval le = loss_and_grad(kind, O, rho, &truth);
            (void)le;
        }
        return true;
    });
    add("anti-concentration (quick)", [] {
        return anticoncentration_check(64, 7130, 2, 50, 11).pass;
    });
    add("determinism: identical configs, identical traces", [] {
        ExperimentConfig c;
        c.seed = 6;
        c.d = 8;
        c.T = 32;
        c.l = 1.0;
        c.learner.kind = LearnerKind::Erfi;
        c.adversary = AdversaryKind::RandomHermitian;
        c.comparator.kind = ComparatorPolicy::Kind::TopK;
        c.comparator.r = 0.5;
        return trace_to_csv(run(c).trace) == trace_to_csv(run(c).trace);
    });

    bool all_ok = true;
    for (const Check& c : checks) {
        bool ok = false;
        std::string what;
        try {
            ok = c.fn();
        } catch (const std::exception& e) {
            ok = false;
            what = e.what();
        }
        os << (ok ? "[PASS] " : "[FAIL] ") << c.name;
        if (!ok && !what.empty()) os << " (" << what << ")";
        os << "\n";
        all_ok = all_ok && ok;
    }
    return all_ok;
}

}  // namespace mlea
