#include "awsalm/maps.hpp"

namespace awsalm::maps {

std::vector<std::uint8_t> rasterize_polygon(const GridSpec& grid, const Polygon& roi) {
    require(roi.vertices.size() >= 3, "ROI polygon needs at least 3 vertices");
    std::vector<std::uint8_t> mask(grid.pixels(), 0);
    for (int ix = 0; ix < grid.n_lat; ++ix) {
        for (int iz = 0; iz < grid.n_ax; ++iz) {
            if (roi.contains({grid.z_at(iz), grid.x_at(ix)}))
                mask[static_cast<std::size_t>(ix) * grid.n_ax + iz] = 1;
        }
    }
    return mask;
}

std::vector<std::uint8_t> rasterize_vessels(const GridSpec& grid,
                                            const phantom::Phantom& ph,
                                            double dilation_mm) {
    std::vector<std::uint8_t> mask(grid.pixels(), 0);
    for (int ix = 0; ix < grid.n_lat; ++ix) {
        for (int iz = 0; iz < grid.n_ax; ++iz) {
            const Vec2 p{grid.z_at(iz), grid.x_at(ix)};
            for (int s = 0; s < static_cast<int>(ph.segments.size()); ++s) {
                if (ph.inside_lumen(p, s, dilation_mm)) {
                    mask[static_cast<std::size_t>(ix) * grid.n_ax + iz] = 1;
                    break;
                }
            }
        }
    }
    return mask;
}

std::vector<double> roi_intensity_curve(const FrameStack& stack,
                                        std::span<const std::uint8_t> mask) {
    require(mask.size() == stack.grid.pixels(), "ROI mask size mismatch");
    std::size_t n_roi = 0;
    for (auto m : mask) n_roi += m;
    require(n_roi > 0, "ROI covers no pixels");

    std::vector<double> curve(stack.n_frames, 0.0);
    for (int f = 0; f < stack.n_frames; ++f) {
        auto frame = stack.frame(f);
        double sum = 0.0;
        for (std::size_t i = 0; i < mask.size(); ++i)
            if (mask[i]) sum += frame[i];
        curve[f] = sum / static_cast<double>(n_roi);
    }
    return curve;
}

std::vector<double> roi_intensity_curve(const FrameStack& stack, const Polygon& roi) {
    return roi_intensity_curve(stack, rasterize_polygon(stack.grid, roi));
}

}  // namespace awsalm::maps
