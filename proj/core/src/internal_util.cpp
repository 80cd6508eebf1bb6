#include "internal_util.hpp"

#include <algorithm>
#include <cmath>

namespace awsalm::detail {

std::vector<double> gaussian_kernel(double sigma, double truncate) {
    if (sigma <= 0.0) return {1.0};
    const int radius = std::max(1, static_cast<int>(std::ceil(truncate * sigma)));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-0.5 * (i / sigma) * (i / sigma));
        sum += k[i + radius];
    }
    for (auto& v : k) v /= sum;
    return k;
}

namespace {

// 1-D replicate-boundary convolution of a strided line.
void convolve_line(const float* in, float* out, int n, std::ptrdiff_t stride,
                   const std::vector<double>& kernel) {
    const int radius = static_cast<int>(kernel.size() / 2);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k) {
            const int j = std::clamp(i + k, 0, n - 1);
            acc += kernel[k + radius] * in[j * stride];
        }
        out[i * stride] = static_cast<float>(acc);
    }
}

}  // namespace

void blur_2d_replicate(std::vector<float>& img, int n_ax, int n_lat,
                       double sigma_ax_px, double sigma_lat_px) {
    std::vector<float> tmp(img.size());
    const auto kz = gaussian_kernel(sigma_ax_px);
    const auto kx = gaussian_kernel(sigma_lat_px);
    // axial pass (contiguous columns)
    for (int ix = 0; ix < n_lat; ++ix) {
        convolve_line(img.data() + static_cast<std::size_t>(ix) * n_ax,
                      tmp.data() + static_cast<std::size_t>(ix) * n_ax, n_ax, 1, kz);
    }
    // lateral pass (stride n_ax)
    for (int iz = 0; iz < n_ax; ++iz) {
        convolve_line(tmp.data() + iz, img.data() + iz, n_lat, n_ax, kx);
    }
}

}  // namespace awsalm::detail
