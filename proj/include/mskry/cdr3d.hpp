/// @file cdr3d.hpp
/// @brief 7-point finite-difference generator for the 3D convection-diffusion-reaction
///        operator on (0,1)^3 with homogeneous Dirichlet boundary, natural (x-fastest)
///        ordering. The produced matrix is the A of du/dt = Au; negate for the
///        positive-definite seed convention.

#ifndef MSKRY_CDR3D_HPP
#define MSKRY_CDR3D_HPP

#include <array>
#include <cmath>

#include "mskry/sparse_matrix.hpp"

namespace mskry {

struct Cdr3dSpec {
    double h = 0.1;                        ///< grid spacing; 1/h must be an integer >= 2
    double eps = 1.0;                      ///< diffusion coefficient
    std::array<double, 3> beta{0, 0, 0};   ///< convection vector
    double react = 0.0;                    ///< reaction coefficient
};

inline SparseMatrix<double> generate_cdr3d(const Cdr3dSpec& spec) {
    const double inv = 1.0 / spec.h;
    const index_t cells = static_cast<index_t>(std::llround(inv));
    if (std::abs(inv - static_cast<double>(cells)) > 1e-9 * inv || cells < 2)
        throw std::invalid_argument("cdr3d: 1/h must be an integer >= 2");
    const index_t N = cells - 1;
    const index_t n = N * N * N;
    const double h2 = spec.h * spec.h;
    const double diag = -6.0 * spec.eps / h2 + spec.react;

    // centered differences: forward neighbor in axis k gets eps/h^2 - beta_k/(2h),
    // backward gets eps/h^2 + beta_k/(2h)
    std::array<double, 3> fwd{}, bwd{};
    for (int k = 0; k < 3; ++k) {
        fwd[k] = spec.eps / h2 - spec.beta[static_cast<std::size_t>(k)] / (2.0 * spec.h);
        bwd[k] = spec.eps / h2 + spec.beta[static_cast<std::size_t>(k)] / (2.0 * spec.h);
    }

    std::vector<Triplet<double>> tr;
    tr.reserve(static_cast<std::size_t>(7 * n));
    auto idx = [N](index_t ix, index_t iy, index_t iz) { return ix + N * (iy + N * iz); };
    for (index_t iz = 0; iz < N; ++iz)
        for (index_t iy = 0; iy < N; ++iy)
            for (index_t ix = 0; ix < N; ++ix) {
                const index_t row = idx(ix, iy, iz);
                if (iz > 0) tr.push_back({row, idx(ix, iy, iz - 1), bwd[2]});
                if (iy > 0) tr.push_back({row, idx(ix, iy - 1, iz), bwd[1]});
                if (ix > 0) tr.push_back({row, idx(ix - 1, iy, iz), bwd[0]});
                tr.push_back({row, row, diag});
                if (ix < N - 1) tr.push_back({row, idx(ix + 1, iy, iz), fwd[0]});
                if (iy < N - 1) tr.push_back({row, idx(ix, iy + 1, iz), fwd[1]});
                if (iz < N - 1) tr.push_back({row, idx(ix, iy, iz + 1), fwd[2]});
            }
    return SparseMatrix<double>::from_triplets(n, std::move(tr));
}

}  // namespace mskry

#endif  // MSKRY_CDR3D_HPP
