// tensor.hpp: Kronecker products and partial traces over factorized systems.

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "mlea/errors.hpp"
#include "mlea/matrix.hpp"

namespace mlea {

inline CMatrix kron(const CMatrix& A, const CMatrix& B) {
    CMatrix C(A.rows * B.rows, A.cols * B.cols);
    for (int ia = 0; ia < A.rows; ++ia)
        for (int ja = 0; ja < A.cols; ++ja) {
            const cplx a = A(ia, ja);
            if (a == cplx(0.0, 0.0)) continue;
            for (int ib = 0; ib < B.rows; ++ib)
                for (int jb = 0; jb < B.cols; ++jb)
                    C(ia * B.rows + ib, ja * B.cols + jb) = a * B(ib, jb);
        }
    return C;
}

inline HermitianMatrix kron(const HermitianMatrix& A, const HermitianMatrix& B) {
    return HermitianMatrix::from_cmatrix(kron(A.to_cmatrix(), B.to_cmatrix()));
}

// Partial trace of A over the subsystems NOT listed in keep. dims lists the
// factor dimensions in tensor order (leftmost factor = most significant index
// block); their product must equal dim(A). keep holds the factor indices to
// retain, in their original order.
inline HermitianMatrix partial_trace(const HermitianMatrix& A, const std::vector<int>& dims,
                                     const std::vector<int>& keep) {
    const int nsys = static_cast<int>(dims.size());
    long prod = 1;
    for (int d : dims) {
        if (d < 1) throw dimension_error("partial_trace: factor dims must be >= 1");
        prod *= d;
    }
    if (prod != A.dim()) throw dimension_error("partial_trace: dims do not factor dim(A)");
    std::vector<bool> kept(nsys, false);
    for (int k : keep) {
        if (k < 0 || k >= nsys) throw dimension_error("partial_trace: keep index out of range");
        if (kept[k]) throw dimension_error("partial_trace: duplicate keep index");
        kept[k] = true;
    }

    // Strides of each factor inside the flat index.
    std::vector<long> stride(nsys, 1);
    for (int s = nsys - 2; s >= 0; --s) stride[s] = stride[s + 1] * dims[s + 1];

    std::vector<int> keep_sorted;
    std::vector<int> traced;
    for (int s = 0; s < nsys; ++s) (kept[s] ? keep_sorted : traced).push_back(s);

    long dk = 1;
    for (int s : keep_sorted) dk *= dims[s];
    long dt = 1;
    for (int s : traced) dt *= dims[s];

    // Flat base indices for every kept / traced multi-index.
    auto enumerate = [&](const std::vector<int>& systems, long count) {
        std::vector<long> base(count, 0);
        for (long idx = 0; idx < count; ++idx) {
            long rem = idx;
            for (int pos = static_cast<int>(systems.size()) - 1; pos >= 0; --pos) {
                const int s = systems[pos];
                base[idx] += (rem % dims[s]) * stride[s];
                rem /= dims[s];
            }
        }
        return base;
    };
    const std::vector<long> kbase = enumerate(keep_sorted, dk);
    const std::vector<long> tbase = enumerate(traced, dt);

    const int da = A.dim();
    std::vector<cplx> out(static_cast<size_t>(dk) * dk, cplx(0.0, 0.0));
    for (long i = 0; i < dk; ++i)
        for (long j = 0; j < dk; ++j) {
            cplx acc = 0.0;
            for (long k = 0; k < dt; ++k)
                acc += A.data()[static_cast<size_t>(kbase[i] + tbase[k]) * da +
                                (kbase[j] + tbase[k])];
            out[static_cast<size_t>(i) * dk + j] = acc;
        }
    return HermitianMatrix::symmetrized(static_cast<int>(dk), std::move(out));
}

}  // namespace mlea
