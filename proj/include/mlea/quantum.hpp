// quantum.hpp: Target-state generators and loss machinery for quantum-state
// online learning: depolarization channels, noisy brickwork circuits, Haar
// subsystems, random product states with their Pauli second moments, Gibbs
// states of GUE / random-sparse-Pauli Hamiltonians, spectral cumulants, and
// the three loss/gradient pairs.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mlea/eig.hpp"
#include "mlea/errors.hpp"
#include "mlea/matrix.hpp"
#include "mlea/rng.hpp"
#include "mlea/spectral.hpp"
#include "mlea/tensor.hpp"

namespace mlea {

// -------------------------------- Pauli strings ------------------------------

enum class PauliLetter : unsigned char { I, X, Y, Z };

/// n-qubit Pauli observable; Hermitian unitary with entries realized sparsely
/// (one nonzero per column). Qubit 0 is the leftmost tensor factor (most
/// significant bit of the index).
struct PauliString {
    std::vector<PauliLetter> letters;

    int qubits() const { return static_cast<int>(letters.size()); }
    int dim() const { return 1 << letters.size(); }

    bool is_identity() const {
        for (PauliLetter p : letters)
            if (p != PauliLetter::I) return false;
        return true;
    }

    // column i maps to row i ^ xmask with the phase below
    unsigned xmask() const {
        unsigned m = 0;
        const int n = qubits();
        for (int q = 0; q < n; ++q)
            if (letters[q] == PauliLetter::X || letters[q] == PauliLetter::Y)
                m |= 1u << (n - 1 - q);
        return m;
    }

    cplx phase(unsigned col) const {
        const int n = qubits();
        cplx ph = 1.0;
        for (int q = 0; q < n; ++q) {
            const bool bit = (col >> (n - 1 - q)) & 1u;
            if (letters[q] == PauliLetter::Y)
                ph *= bit ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
            else if (letters[q] == PauliLetter::Z && bit)
                ph = -ph;
        }
        return ph;
    }

    void add_scaled_to(std::vector<cplx>& entries, int d, double coef) const {
        const unsigned m = xmask();
        for (unsigned col = 0; col < static_cast<unsigned>(d); ++col)
            entries[static_cast<size_t>(col ^ m) * d + col] += coef * phase(col);
    }

    HermitianMatrix to_matrix() const {
        const int d = dim();
        std::vector<cplx> e(static_cast<size_t>(d) * d, cplx(0.0, 0.0));
        add_scaled_to(e, d, 1.0);
        return HermitianMatrix::symmetrized(d, std::move(e));
    }

    static PauliString uniform(int n, Rng& rng) {
        PauliString p;
        p.letters.resize(n);
        for (int q = 0; q < n; ++q) p.letters[q] = static_cast<PauliLetter>(rng.uniform_int(4));
        return p;
    }
};

// ---------------------------- depolarization noise ---------------------------

// (1 - gamma) rho + gamma I/d.
inline DensityMatrix depolarize_global(const DensityMatrix& rho, double gamma) {
    if (gamma < 0.0 || gamma > 1.0) throw contract_error("depolarize_global: gamma in [0,1]");
    const int d = rho.dim();
    HermitianMatrix out = rho.matrix();
    out *= 1.0 - gamma;
    out += (gamma / d) * HermitianMatrix::identity(d);
    return DensityMatrix::from_psd_unit_trace(std::move(out));
}

// (1 - gamma) rho + gamma (I_2/2 (x)_q tr_q rho) with the identity factor in
// the targeted qubit slot.
inline DensityMatrix depolarize_local(const DensityMatrix& rho, int qubit, double gamma) {
    if (gamma < 0.0 || gamma > 1.0) throw contract_error("depolarize_local: gamma in [0,1]");
    const int d = rho.dim();
    int n = 0;
    while ((1 << n) < d) ++n;
    if ((1 << n) != d) throw dimension_error("depolarize_local: dim must be a power of 2");
    if (qubit < 0 || qubit >= n) throw dimension_error("depolarize_local: qubit out of range");

    const unsigned m = 1u << (n - 1 - qubit);
    std::vector<cplx> out(static_cast<size_t>(d) * d, cplx(0.0, 0.0));
    const auto& a = rho.matrix().data();
    for (unsigned i = 0; i < static_cast<unsigned>(d); ++i)
        for (unsigned j = 0; j < static_cast<unsigned>(d); ++j) {
            cplx v = (1.0 - gamma) * a[static_cast<size_t>(i) * d + j];
            if ((i & m) == (j & m)) {
                const unsigned i0 = i & ~m, j0 = j & ~m;
                v += gamma * 0.5 *
                     (a[static_cast<size_t>(i0) * d + j0] +
                      a[static_cast<size_t>(i0 | m) * d + (j0 | m)]);
            }
            out[static_cast<size_t>(i) * d + j] = v;
        }
    return DensityMatrix::from_psd_unit_trace(HermitianMatrix::symmetrized(d, std::move(out)));
}

// ----------------------------- random circuits -------------------------------

// Haar-distributed unitary via modified Gram-Schmidt QR of a complex Gaussian
// matrix; MGS leaves the R diagonal real positive, which is the phase fixing
// that makes the law exactly Haar.
inline CMatrix haar_unitary(int d, Rng& rng) {
    CMatrix z(d, d);
    for (cplx& v : z.a) v = cplx(rng.normal(), rng.normal());
    // orthonormalize columns in place
    for (int k = 0; k < d; ++k) {
        for (int j = 0; j < k; ++j) {
            cplx dot = 0.0;
            for (int i = 0; i < d; ++i) dot += std::conj(z(i, j)) * z(i, k);
            for (int i = 0; i < d; ++i) z(i, k) -= dot * z(i, j);
        }
        double nrm = 0.0;
        for (int i = 0; i < d; ++i) nrm += std::norm(z(i, k));
        nrm = std::sqrt(nrm);
        for (int i = 0; i < d; ++i) z(i, k) /= nrm;
    }
    return z;
}

// Brickwork circuit of depth D on n qubits: layers of Haar 2-qubit gates on
// (0,1),(2,3),... then (1,2),(3,4),..., each layer followed by single-qubit
// depolarization of rate gamma on every qubit; applied to |0...0><0...0|.
inline DensityMatrix noisy_circuit_state(int n, int depth, double gamma, std::uint64_t seed) {
    if (n < 1 || n > 10) throw contract_error("noisy_circuit_state: n in [1,10]");
    if (depth < 1) throw contract_error("noisy_circuit_state: depth >= 1");
    if (gamma < 0.0 || gamma > 1.0) throw contract_error("noisy_circuit_state: gamma in [0,1]");
    Rng rng(seed);
    const int d = 1 << n;

    std::vector<cplx> zero(d, cplx(0.0, 0.0));
    zero[0] = 1.0;
    DensityMatrix rho = DensityMatrix::pure(zero);

    for (int layer = 0; layer < depth; ++layer) {
        const int offset = layer % 2;
        CMatrix u_layer = CMatrix::identity(d);
        bool any_gate = false;
        for (int q = offset; q + 1 < n; q += 2) {
            CMatrix g = haar_unitary(4, rng);
            CMatrix full = g;
            if (q > 0) full = kron(CMatrix::identity(1 << q), full);
            if (q + 2 < n) full = kron(full, CMatrix::identity(1 << (n - q - 2)));
            u_layer = mat_mul(full, u_layer);
            any_gate = true;
        }
        if (any_gate) {
            CMatrix conj = mat_mul(mat_mul(u_layer, rho.matrix().to_cmatrix()), adjoint(u_layer));
            rho = DensityMatrix::from_psd_unit_trace(HermitianMatrix::symmetrized(d, conj.a));
        }
        for (int q = 0; q < n; ++q) rho = depolarize_local(rho, q, gamma);
    }
    return rho;
}

// d-dimensional reduction of a Haar-random pure state on d_prime dimensions.
inline DensityMatrix haar_subsystem_state(int d, int d_prime, std::uint64_t seed) {
    if (d < 1 || d_prime < d || d_prime % d != 0)
        throw dimension_error("haar_subsystem_state: d must divide d_prime");
    Rng rng(seed);
    const int tail = d_prime / d;
    std::vector<cplx> psi(d_prime);
    double nrm = 0.0;
    for (cplx& v : psi) {
        v = cplx(rng.normal(), rng.normal());
        nrm += std::norm(v);
    }
    nrm = std::sqrt(nrm);
    for (cplx& v : psi) v /= nrm;

    std::vector<cplx> out(static_cast<size_t>(d) * d, cplx(0.0, 0.0));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            cplx acc = 0.0;
            for (int k = 0; k < tail; ++k)
                acc += psi[static_cast<size_t>(i) * tail + k] *
                       std::conj(psi[static_cast<size_t>(j) * tail + k]);
            out[static_cast<size_t>(i) * d + j] = acc;
        }
    return DensityMatrix::from_psd_unit_trace(HermitianMatrix::symmetrized(d, std::move(out)));
}

// ------------------------------ product ensembles ----------------------------

/// Distribution over single-qubit Bloch vectors.
struct BlochEnsemble {
    enum class Kind { Point, UniformSphere };
    Kind kind = Kind::UniformSphere;
    std::array<double, 3> r{0.0, 0.0, 0.0};  // Point
    double radius = 1.0;                     // UniformSphere scaling

    static BlochEnsemble point(std::array<double, 3> r) {
        const double nrm = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
        if (nrm > 1.0 + 1e-12) throw contract_error("BlochEnsemble: |r| must be <= 1");
        BlochEnsemble e;
        e.kind = Kind::Point;
        e.r = r;
        return e;
    }
    static BlochEnsemble uniform_sphere(double radius = 1.0) {
        if (radius < 0.0 || radius > 1.0 + 1e-12)
            throw contract_error("BlochEnsemble: radius must be in [0, 1]");
        BlochEnsemble e;
        e.kind = Kind::UniformSphere;
        e.radius = radius;
        return e;
    }

    std::array<double, 3> sample(Rng& rng) const {
        if (kind == Kind::Point) return r;
        // uniform on the sphere of the given radius
        const double z = rng.uniform(-1.0, 1.0);
        const double phi = rng.uniform(0.0, 2.0 * M_PI);
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {radius * s * std::cos(phi), radius * s * std::sin(phi), radius * z};
    }
};

inline HermitianMatrix bloch_to_qubit(const std::array<double, 3>& r) {
    std::vector<cplx> e = {cplx(0.5 * (1.0 + r[2]), 0.0), cplx(0.5 * r[0], -0.5 * r[1]),
                           cplx(0.5 * r[0], 0.5 * r[1]), cplx(0.5 * (1.0 - r[2]), 0.0)};
    return HermitianMatrix::symmetrized(2, std::move(e));
}

// Tensor product of n independent draws from the ensemble.
inline DensityMatrix random_product_state(int n, const BlochEnsemble& ensemble,
                                          std::uint64_t seed) {
    if (n < 1 || n > 10) throw contract_error("random_product_state: n in [1,10]");
    Rng rng(seed);
    HermitianMatrix rho = bloch_to_qubit(ensemble.sample(rng));
    for (int q = 1; q < n; ++q) rho = kron(rho, bloch_to_qubit(ensemble.sample(rng)));
    return DensityMatrix::from_psd_unit_trace(std::move(rho));
}

// Monte-Carlo estimate of the Pauli second moment matrix E[r r^T].
inline std::array<std::array<double, 3>, 3> pauli_second_moment(const BlochEnsemble& ensemble,
                                                                int samples, std::uint64_t seed) {
    if (samples < 1) throw contract_error("pauli_second_moment: samples >= 1");
    Rng rng(seed);
    std::array<std::array<double, 3>, 3> m{};
    for (int s = 0; s < samples; ++s) {
        const std::array<double, 3> r = ensemble.sample(rng);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] += r[i] * r[j];
    }
    for (auto& row : m)
        for (double& v : row) v /= samples;
    return m;
}

// Largest eigenvalue (operator norm) of a symmetric 3x3 moment matrix.
inline double moment_matrix_op_norm(const std::array<std::array<double, 3>, 3>& m) {
    std::vector<double> flat;
    for (const auto& row : m)
        for (double v : row) flat.push_back(v);
    std::vector<cplx> e(flat.begin(), flat.end());
    HermitianMatrix h = HermitianMatrix::symmetrized(3, std::move(e));
    return op_norm(h);
}

// ------------------------------- Hamiltonians --------------------------------

struct HamiltonianSample {
    HermitianMatrix H;
    std::string ensemble;
    std::uint64_t seed = 0;
};

// GUE with the 1/sqrt(d) normalization: H_jj = g/sqrt(d),
// H_jk = (g + i g')/sqrt(2 d) above the diagonal.
inline HamiltonianSample sample_gue(int d, std::uint64_t seed) {
    if (d < 1 || d > 1024) throw contract_error("sample_gue: d in [1,1024]");
    Rng rng(seed);
    HermitianMatrix h = HermitianMatrix::zero(d);
    const double sd = std::sqrt(static_cast<double>(d));
    const double s2d = std::sqrt(2.0 * d);
    for (int j = 0; j < d; ++j) {
        h.at(j, j) = rng.normal() / sd;
        for (int k = j + 1; k < d; ++k) {
            const cplx v = cplx(rng.normal(), rng.normal()) / s2d;
            h.at(j, k) = v;
            h.at(k, j) = std::conj(v);
        }
    }
    return {std::move(h), "gue", seed};
}

// Random sparse Pauli string ensemble: H = sum_{a=1}^J r_a P_a / sqrt(J),
// r_a uniform in {-1, +1}, P_a uniform over the n-qubit Pauli basis.
inline HamiltonianSample sample_rsps(int n, long J, std::uint64_t seed) {
    if (n < 1 || n > 10) throw contract_error("sample_rsps: n in [1,10]");
    if (J < 1) throw contract_error("sample_rsps: J >= 1");
    Rng rng(seed);
    const int d = 1 << n;
    std::vector<cplx> entries(static_cast<size_t>(d) * d, cplx(0.0, 0.0));
    const double inv = 1.0 / std::sqrt(static_cast<double>(J));
    for (long a = 0; a < J; ++a) {
        PauliString p = PauliString::uniform(n, rng);
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        p.add_scaled_to(entries, d, sign * inv);
    }
    return {HermitianMatrix::symmetrized(d, std::move(entries)), "rsps", seed};
}

// e^{-beta H} / tr e^{-beta H}.
inline DensityMatrix gibbs_state(const HermitianMatrix& H, double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw contract_error("gibbs_state: beta must be finite and >= 0");
    HermitianMatrix a = H;
    a *= -beta;
    return matrix_exp_normalized(a);
}

// ------------------------------ spectral cumulants ---------------------------

namespace detail {

// All partitions of {0..k-1} enumerated as restricted growth strings; calls
// fn with the block sizes of each partition.
template <typename Fn>
inline void for_each_partition(int k, Fn&& fn) {
    std::vector<int> a(k, 0);
    std::vector<int> sizes;
    while (true) {
        int nblocks = 0;
        for (int i = 0; i < k; ++i) nblocks = std::max(nblocks, a[i] + 1);
        sizes.assign(nblocks, 0);
        for (int i = 0; i < k; ++i) sizes[a[i]] += 1;
        fn(sizes);

        // next string: increment the rightmost digit below its running max + 1
        int i = k - 1;
        while (i > 0) {
            int mx = 0;
            for (int j = 0; j < i; ++j) mx = std::max(mx, a[j]);
            if (a[i] <= mx) break;
            --i;
        }
        if (i == 0) break;
        a[i] += 1;
        for (int j = i + 1; j < k; ++j) a[j] = 0;
    }
}

}  // namespace detail

// Normalized spectral cumulants kappa_1..kappa_kmax of H from the moments
// mu_k = tr(H^k)/d, via the set-partition Moebius formula
// kappa_k = sum_{pi} (|pi|-1)! (-1)^{|pi|-1} prod_B mu_{|B|}.
inline std::vector<double> hamiltonian_cumulants(const HermitianMatrix& H, int k_max) {
    if (k_max < 1 || k_max > 8) throw contract_error("hamiltonian_cumulants: k_max in [1,8]");
    const std::vector<double> ev = eigvals_hermitian(H);
    const int d = H.dim();
    std::vector<double> mu(k_max + 1, 0.0);
    mu[0] = 1.0;
    for (int k = 1; k <= k_max; ++k) {
        double s = 0.0;
        for (double lam : ev) s += std::pow(lam, k);
        mu[k] = s / d;
    }
    std::vector<double> factorial = {1, 1, 2, 6, 24, 120, 720, 5040, 40320};
    std::vector<double> kappa(k_max + 1, 0.0);
    for (int k = 1; k <= k_max; ++k) {
        double acc = 0.0;
        detail::for_each_partition(k, [&](const std::vector<int>& sizes) {
            const int nb = static_cast<int>(sizes.size());
            double prod = 1.0;
            for (int sz : sizes) prod *= mu[sz];
            acc += factorial[nb - 1] * ((nb - 1) % 2 == 0 ? 1.0 : -1.0) * prod;
        });
        kappa[k] = acc;
    }
    return std::vector<double>(kappa.begin() + 1, kappa.end());
}

// --------------------------------- losses ------------------------------------

enum class LossKind { L1, VirtualCooling, Renyi2 };

inline const char* to_string(LossKind k) {
    switch (k) {
        case LossKind::L1: return "l1";
        case LossKind::VirtualCooling: return "virtual_cooling";
        case LossKind::Renyi2: return "renyi2";
    }
    return "?";
}

// Lipschitz bound of the gradient for observables with |O|_op <= l.
inline double loss_grad_bound(LossKind kind, double l) {
    switch (kind) {
        case LossKind::L1: return l;
        case LossKind::VirtualCooling: return 2.0 * l;
        case LossKind::Renyi2: return 2.0 * l * l;
    }
    return l;
}

struct LossEval {
    double loss = 0.0;
    HermitianMatrix grad;
};

// Loss and (sub)gradient in rho_t:
//   l1             : |tr(O rho_t) - tr(O rho)|, grad = sgn(.) O with sgn(0)=0
//   virtual_cooling: tr(O rho_t^2),             grad = O rho_t + rho_t O
//   renyi2         : tr(O rho_t O rho_t),       grad = 2 O rho_t O
// The nonlinear kinds require O PSD; gradient norms are asserted against the
// per-kind bound.
inline LossEval loss_and_grad(LossKind kind, const HermitianMatrix& O, const DensityMatrix& rho_t,
                              const DensityMatrix* rho_truth = nullptr) {
    O.check_same_dim(rho_t.matrix());
    const std::vector<double> o_vals = eigvals_hermitian(O);
    const double o_norm = std::max(std::fabs(o_vals.front()), std::fabs(o_vals.back()));

    LossEval out;
    switch (kind) {
        case LossKind::L1: {
            if (!rho_truth) throw contract_error("l1 loss requires the ground-truth state");
            const double diff = inner(O, rho_t) - inner(O, *rho_truth);
            out.loss = std::fabs(diff);
            out.grad = O;
            out.grad *= diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
            break;
        }
        case LossKind::VirtualCooling: {
            if (o_vals.front() < -1e-9 * std::max(1.0, o_norm))
                throw contract_error("virtual_cooling requires O PSD");
            const CMatrix orho = mat_mul(O.to_cmatrix(), rho_t.matrix().to_cmatrix());
            out.loss = trace(mat_mul(orho, rho_t.matrix().to_cmatrix())).real();
            CMatrix grad = orho;
            const CMatrix rhoo = adjoint(orho);
            for (size_t i = 0; i < grad.a.size(); ++i) grad.a[i] += rhoo.a[i];
            out.grad = HermitianMatrix::symmetrized(O.dim(), std::move(grad.a));
            break;
        }
        case LossKind::Renyi2: {
            if (o_vals.front() < -1e-9 * std::max(1.0, o_norm))
                throw contract_error("renyi2 requires O PSD");
            const CMatrix orho = mat_mul(O.to_cmatrix(), rho_t.matrix().to_cmatrix());
            out.loss = trace(mat_mul(orho, orho)).real();
            CMatrix grad = mat_mul(orho, O.to_cmatrix());
            for (cplx& v : grad.a) v *= 2.0;
            out.grad = HermitianMatrix::symmetrized(O.dim(), std::move(grad.a));
            break;
        }
    }
    const double bound = loss_grad_bound(kind, o_norm);
    const double gnorm = op_norm(out.grad);
    if (gnorm > bound + 1e-9 * std::max(1.0, bound))
        throw invariant_error("loss gradient norm " + std::to_string(gnorm) +
                              " exceeds its bound " + std::to_string(bound));
    return out;
}

}  // namespace mlea
