#pragma once

#include <cstdint>
#include <vector>

#include <omp.h>

namespace awsalm::detail {

inline int max_threads() { return omp_get_max_threads(); }

inline void set_num_threads(int n) {
    if (n > 0) omp_set_num_threads(n);
}

// Parallel index loop. Safe only for bodies with disjoint writes; results are
// then independent of the thread count and schedule.
template <typename F>
void parallel_for(std::int64_t n, F&& fn) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) fn(i);
}

// Normalized 1-D Gaussian taps, odd length, truncated at `truncate` sigmas.
// sigma <= 0 yields the identity kernel.
std::vector<double> gaussian_kernel(double sigma, double truncate = 4.0);

// Separable Gaussian blur of a column-major (axial-fastest) image with
// edge-replicated boundaries.
void blur_2d_replicate(std::vector<float>& img, int n_ax, int n_lat,
                       double sigma_ax_px, double sigma_lat_px);

}  // namespace awsalm::detail
