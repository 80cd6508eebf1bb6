#include <algorithm>
#include <cmath>
#include <fstream>

#include "awsalm/io.hpp"

namespace awsalm::io {

namespace {

void hsv_to_rgb(double h, double s, double v, unsigned char rgb[3]) {
    h = std::fmod(std::fmod(h, 1.0) + 1.0, 1.0) * 6.0;
    const int i = static_cast<int>(h);
    const double f = h - i;
    const double p = v * (1.0 - s);
    const double q = v * (1.0 - s * f);
    const double t = v * (1.0 - s * (1.0 - f));
    double r, g, b;
    switch (i % 6) {
        case 0: r = v; g = t; b = p; break;
        case 1: r = q; g = v; b = p; break;
        case 2: r = p; g = v; b = t; break;
        case 3: r = p; g = q; b = v; break;
        case 4: r = t; g = p; b = v; break;
        default: r = v; g = p; b = q; break;
    }
    rgb[0] = static_cast<unsigned char>(std::lround(r * 255.0));
    rgb[1] = static_cast<unsigned char>(std::lround(g * 255.0));
    rgb[2] = static_cast<unsigned char>(std::lround(b * 255.0));
}

}  // namespace

void write_pgm(const std::string& path, std::span<const float> map,
               const GridSpec& grid) {
    require(map.size() == grid.pixels(), "map size mismatch");
    float vmax = 0.0f;
    for (float v : map) vmax = std::max(vmax, v);
    const double scale = vmax > 0.0f ? 65535.0 / vmax : 0.0;

    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot open " + path + " for writing");
    out << "P5\n# scale_per_count " << (vmax > 0 ? vmax / 65535.0 : 0.0) << "\n"
        << grid.n_lat << " " << grid.n_ax << "\n65535\n";
    // Rows run along depth, columns along lateral position.
    std::vector<unsigned char> row(static_cast<std::size_t>(grid.n_lat) * 2);
    for (int iz = 0; iz < grid.n_ax; ++iz) {
        for (int ix = 0; ix < grid.n_lat; ++ix) {
            const float v = map[static_cast<std::size_t>(ix) * grid.n_ax + iz];
            const unsigned val = static_cast<unsigned>(
                std::clamp(v * scale, 0.0, 65535.0));
            row[2 * ix] = static_cast<unsigned char>(val >> 8);
            row[2 * ix + 1] = static_cast<unsigned char>(val & 0xff);
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size()));
    }
}

void write_direction_ppm(const std::string& path, const maps::SRMaps& maps) {
    const GridSpec& grid = maps.grid;
    float dmax = 0.0f;
    for (float v : maps.density) dmax = std::max(dmax, v);

    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot open " + path + " for writing");
    out << "P6\n" << grid.n_lat << " " << grid.n_ax << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(grid.n_lat) * 3);
    for (int iz = 0; iz < grid.n_ax; ++iz) {
        for (int ix = 0; ix < grid.n_lat; ++ix) {
            const std::size_t i = static_cast<std::size_t>(ix) * grid.n_ax + iz;
            unsigned char* rgb = &row[static_cast<std::size_t>(ix) * 3];
            if (maps.counts[i] >= 2 && std::isfinite(maps.direction[i]) && dmax > 0) {
                const double hue = (maps.direction[i] + kPi) / (2.0 * kPi);
                const double val = std::min(1.0, static_cast<double>(maps.density[i] / dmax));
                hsv_to_rgb(hue, 1.0, val, rgb);
            } else {
                rgb[0] = rgb[1] = rgb[2] = 0;
            }
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size()));
    }
}

}  // namespace awsalm::io
