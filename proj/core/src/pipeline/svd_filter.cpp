#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "awsalm/pipeline.hpp"
#include "../internal_util.hpp"

namespace awsalm::pipeline {

namespace {

using Eigen::MatrixXd;

// Gram matrix G = X^T X of the (pixels x frames) Casorati block, accumulated
// in double. Each output tile is produced entirely by one worker scanning the
// pixel dimension in fixed chunk order, so the result does not depend on the
// thread count.
MatrixXd casorati_gram(const float* data, std::size_t pixels, int frames) {
    constexpr int kTile = 48;
    constexpr std::size_t kChunk = 4096;
    const int tiles = (frames + kTile - 1) / kTile;
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < tiles; ++i)
        for (int j = i; j < tiles; ++j) pairs.emplace_back(i, j);

    MatrixXd gram(frames, frames);
    detail::parallel_for(static_cast<std::int64_t>(pairs.size()), [&](std::int64_t k) {
        const auto [ti, tj] = pairs[k];
        const int i0 = ti * kTile, i1 = std::min(frames, i0 + kTile);
        const int j0 = tj * kTile, j1 = std::min(frames, j0 + kTile);
        const int ni = i1 - i0, nj = j1 - j0;
        MatrixXd acc = MatrixXd::Zero(ni, nj);
        MatrixXd a(kChunk, ni), b(kChunk, nj);
        for (std::size_t p0 = 0; p0 < pixels; p0 += kChunk) {
            const std::size_t n = std::min(kChunk, pixels - p0);
            for (int c = 0; c < ni; ++c) {
                const float* col = data + static_cast<std::size_t>(i0 + c) * pixels + p0;
                for (std::size_t p = 0; p < n; ++p) a(p, c) = col[p];
            }
            for (int c = 0; c < nj; ++c) {
                const float* col = data + static_cast<std::size_t>(j0 + c) * pixels + p0;
                for (std::size_t p = 0; p < n; ++p) b(p, c) = col[p];
            }
            acc.noalias() += a.topRows(n).transpose() * b.topRows(n);
        }
        gram.block(i0, j0, ni, nj) = acc;
        if (ti != tj) gram.block(j0, i0, nj, ni) = acc.transpose();
    });
    return gram;
}

void filter_block(float* data, std::size_t pixels, int frames, int low_cut,
                  int high_cut) {
    require(low_cut >= 1, "low_cut must be >= 1");
    require(high_cut <= frames,
            "stack shorter than the requested rank band (high_cut > n_frames)");
    require(low_cut < high_cut, "low_cut must be below high_cut");

    // Removed ranks: [1, low_cut) and (high_cut, frames]. Nothing to do when
    // the full band is retained.
    const int n_removed = (low_cut - 1) + (frames - high_cut);
    if (n_removed == 0) return;

    const MatrixXd gram = casorati_gram(data, pixels, frames);
    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(gram);
    require(solver.info() == Eigen::Success, "Casorati eigendecomposition failed");
    // Eigenvalues ascend; singular rank r (1-based, descending) maps to
    // eigencolumn frames - r.
    MatrixXd v_rem(frames, n_removed);
    int col = 0;
    for (int r = 1; r < low_cut; ++r) v_rem.col(col++) = solver.eigenvectors().col(frames - r);
    for (int r = high_cut + 1; r <= frames; ++r)
        v_rem.col(col++) = solver.eigenvectors().col(frames - r);

    // X -= (X V)(V^T), panel by panel over pixels. Fixed panel extents keep
    // the arithmetic identical for any thread count.
    constexpr std::size_t kPanel = 8192;
    const std::int64_t n_panels =
        static_cast<std::int64_t>((pixels + kPanel - 1) / kPanel);
    detail::parallel_for(n_panels, [&](std::int64_t pi) {
        const std::size_t p0 = static_cast<std::size_t>(pi) * kPanel;
        const std::size_t rows = std::min(kPanel, pixels - p0);
        MatrixXd panel(rows, frames);
        for (int f = 0; f < frames; ++f) {
            const float* col_f = data + static_cast<std::size_t>(f) * pixels + p0;
            for (std::size_t p = 0; p < rows; ++p) panel(p, f) = col_f[p];
        }
        MatrixXd r = panel * v_rem;               // rows x n_removed
        panel.noalias() -= r * v_rem.transpose();
        for (int f = 0; f < frames; ++f) {
            float* col_f = data + static_cast<std::size_t>(f) * pixels + p0;
            for (std::size_t p = 0; p < rows; ++p)
                col_f[p] = static_cast<float>(panel(p, f));
        }
    });
}

}  // namespace

void svd_clutter_filter(FrameStack& stack, int low_cut, int high_cut) {
    require(stack.n_frames > 0, "SVD filter needs a non-empty stack");
    filter_block(stack.data.data(), stack.grid.pixels(), stack.n_frames, low_cut,
                 high_cut);
}

void svd_clutter_filter_blocks(FrameStack& stack,
                               std::span<const std::pair<int, int>> blocks,
                               double low_frac, double high_frac) {
    require(!blocks.empty(), "no frame blocks given");
    for (const auto& [first, last] : blocks) {
        require(first >= 0 && last > first && last <= stack.n_frames,
                "invalid frame block for SVD filtering");
        const int n = last - first;
        const auto [low, high] = svd_rank_band(n, low_frac, high_frac);
        filter_block(stack.data.data() + stack.grid.pixels() * first,
                     stack.grid.pixels(), n, low, high);
    }
}

std::pair<int, int> svd_rank_band(int n_frames, double low_frac, double high_frac) {
    require(n_frames >= 2, "rank band needs at least two frames");
    require(low_frac >= 0.0 && high_frac <= 1.0 && low_frac < high_frac,
            "rank fractions must satisfy 0 <= low < high <= 1");
    int low = std::max(1, static_cast<int>(std::lround(low_frac * n_frames)));
    int high = std::min(n_frames, static_cast<int>(std::lround(high_frac * n_frames)));
    if (high <= low) high = std::min(n_frames, low + 1);
    return {low, high};
}

}  // namespace awsalm::pipeline
