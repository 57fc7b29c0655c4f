// spectral.hpp: Spectral calculus on Hermitian matrices: scalar functions
// lifted to the eigenbasis, norms, the normalized matrix exponential, and the
// entropy functionals, plus the DensityMatrix (spectraplex) carrier.

#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "mlea/eig.hpp"
#include "mlea/errors.hpp"
#include "mlea/matrix.hpp"

namespace mlea {

// ---------------------------- spectral functions ----------------------------

// f(A) = V diag(f(lambda)) V^dag. Errors if f is not finite on the spectrum.
inline HermitianMatrix apply_spectral(const EigenDecomposition& eig,
                                      const std::function<double(double)>& f) {
    std::vector<double> g(eig.dim);
    for (int i = 0; i < eig.dim; ++i) {
        g[i] = f(eig.values[i]);
        if (!std::isfinite(g[i]))
            throw range_error("apply_spectral: function not finite at eigenvalue " +
                              std::to_string(eig.values[i]));
    }
    return spectral_assemble(eig, g);
}

inline HermitianMatrix apply_spectral(const HermitianMatrix& A,
                                      const std::function<double(double)>& f) {
    return apply_spectral(eig_hermitian(A), f);
}

// sgn(A) in the spectral sense with sgn(0) = 0.
inline HermitianMatrix spectral_sign(const HermitianMatrix& A) {
    if (A.frobenius_norm() == 0.0) return HermitianMatrix::zero(A.dim());
    return apply_spectral(A, [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
}

// --------------------------------- norms ------------------------------------

struct MatrixNorms {
    double op = 0.0;
    double trace = 0.0;
    double frobenius = 0.0;
};

// All three norms from one eigenvalue pass, so op <= frobenius <= trace holds
// exactly as computed.
inline MatrixNorms norms(const HermitianMatrix& A) {
    const std::vector<double> ev = eigvals_hermitian(A);
    MatrixNorms n;
    for (double v : ev) {
        const double a = std::fabs(v);
        n.op = std::max(n.op, a);
        n.trace += a;
        n.frobenius += v * v;
    }
    n.frobenius = std::sqrt(n.frobenius);
    return n;
}

inline double op_norm(const HermitianMatrix& A) {
    double m = 0.0;
    for (double v : eigvals_hermitian(A)) m = std::max(m, std::fabs(v));
    return m;
}

inline double trace_norm(const HermitianMatrix& A) {
    double s = 0.0;
    for (double v : eigvals_hermitian(A)) s += std::fabs(v);
    return s;
}

// ------------------------------ density matrices ----------------------------

/// Spectraplex element: Hermitian, PSD up to -1e-10, unit trace up to 1e-10.
/// Eigenvalues in (-1e-10, 0) are treated as exact zeros (solver noise floor).
class DensityMatrix {
  public:
    DensityMatrix() = default;

    // Validating route; costs one eigenvalue solve.
    static DensityMatrix checked(HermitianMatrix h) {
        const double tr = h.trace();
        if (std::fabs(tr - 1.0) > 1e-10)
            throw contract_error("DensityMatrix: trace " + std::to_string(tr));
        const std::vector<double> ev = eigvals_hermitian(h);
        if (!ev.empty() && ev.front() < -1e-10)
            throw contract_error("DensityMatrix: negative eigenvalue " +
                                 std::to_string(ev.front()));
        DensityMatrix d;
        d.m_ = std::move(h);
        return d;
    }

    // For matrices whose PSD-ness is known by construction (spectral clamps,
    // normalized exponentials). Still enforces the trace.
    static DensityMatrix from_psd_unit_trace(HermitianMatrix h) {
        const double tr = h.trace();
        if (std::fabs(tr - 1.0) > 1e-10)
            throw contract_error("DensityMatrix: trace " + std::to_string(tr));
        DensityMatrix d;
        d.m_ = std::move(h);
        return d;
    }

    static DensityMatrix maximally_mixed(int dim) {
        HermitianMatrix h = HermitianMatrix::identity(dim);
        h *= 1.0 / dim;
        return from_psd_unit_trace(std::move(h));
    }

    // Rank-1 projector from a unit vector.
    static DensityMatrix pure(std::span<const cplx> psi) {
        const int d = static_cast<int>(psi.size());
        double nrm = 0.0;
        for (const cplx& v : psi) nrm += std::norm(v);
        if (std::fabs(nrm - 1.0) > 1e-10) throw contract_error("pure: state vector not normalized");
        std::vector<cplx> a(static_cast<size_t>(d) * d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) a[static_cast<size_t>(i) * d + j] = psi[i] * std::conj(psi[j]);
        return from_psd_unit_trace(HermitianMatrix::symmetrized(d, std::move(a)));
    }

    const HermitianMatrix& matrix() const { return m_; }
    int dim() const { return m_.dim(); }
    bool empty() const { return m_.empty(); }

  private:
    HermitianMatrix m_;
};

inline double inner(const HermitianMatrix& A, const DensityMatrix& X) {
    return inner(A, X.matrix());
}

// ------------------------- exponentials and entropy -------------------------

// exp(A)/tr exp(A), computed on the spectrum shifted by max(lambda) so the
// largest weight is exp(0) = 1 (log-sum-exp stabilization).
inline DensityMatrix matrix_exp_normalized(const HermitianMatrix& A) {
    const EigenDecomposition eig = eig_hermitian(A);
    const double m = eig.values.back();
    std::vector<double> w(eig.dim);
    double z = 0.0;
    for (int i = 0; i < eig.dim; ++i) {
        w[i] = std::exp(eig.values[i] - m);
        z += w[i];
    }
    for (double& v : w) v /= z;
    return DensityMatrix::from_psd_unit_trace(spectral_assemble(eig, w));
}

// Von Neumann entropy -sum lambda log lambda, eigenvalues below 1e-14 treated
// as exact zeros with 0 log 0 = 0.
inline double von_neumann_entropy(const DensityMatrix& X) {
    double s = 0.0;
    for (double v : eigvals_hermitian(X.matrix()))
        if (v > 1e-14) s -= v * std::log(v);
    return s;
}

// S(X || d^{-1} I) = log d - S(X), clamped into [0, log d] by contract.
inline double relative_entropy_vs_mixed(const DensityMatrix& X) {
    const double logd = std::log(static_cast<double>(X.dim()));
    const double v = logd - von_neumann_entropy(X);
    return std::min(std::max(v, 0.0), logd);
}

}  // namespace mlea
