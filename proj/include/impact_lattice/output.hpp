#pragma once
// Byte-exact text and Netpbm serialisation of lattice states and sustain fields.

#include "core.hpp"
#include "observables.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

namespace impact_lattice {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Rgb {
    std::uint8_t r, g, b;
};

/// Opinion colours; opinion k uses entry k mod 12.
inline constexpr std::array<Rgb, 12> kOpinionPalette{{
    {220, 50, 47},    // red
    {133, 153, 0},    // green
    {38, 139, 210},   // blue
    {181, 137, 0},    // yellow
    {211, 54, 130},   // magenta
    {42, 161, 152},   // cyan
    {203, 75, 22},    // orange
    {108, 113, 196},  // violet
    {0, 43, 54},
    {131, 148, 150},
    {238, 232, 213},
    {88, 110, 117},
}};

/// Fixed-point with 6 decimals, ties rounded up (away from zero for negatives).
inline std::string format_fixed6(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    const bool negative = v < 0.0;
    const auto scaled = static_cast<long long>(std::floor(std::fabs(v) * 1e6 + 0.5));
    std::string frac = std::to_string(scaled % 1000000);
    frac.insert(0, 6 - frac.size(), '0');
    std::string out = (negative && scaled != 0) ? "-" : "";
    return out + std::to_string(scaled / 1000000) + "." + frac;
}

/// Gray level of a probability: round(255 p), ties up.
inline std::uint8_t probability_to_gray(double p) noexcept {
    const double clamped = std::clamp(p, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::floor(255.0 * clamped + 0.5));
}

inline std::string opinions_csv(std::span<const Opinion> opinions, std::size_t side) {
    std::string out;
    for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < side; ++c) {
            if (c) out += ',';
            out += std::to_string(opinions[r * side + c]);
        }
        out += '\n';
    }
    return out;
}

inline std::string opinions_ppm(std::span<const Opinion> opinions, std::size_t side) {
    std::string out = "P6\n" + std::to_string(side) + " " + std::to_string(side) + "\n255\n";
    for (Opinion k : opinions) {
        const Rgb& c = kOpinionPalette[k % kOpinionPalette.size()];
        out += static_cast<char>(c.r);
        out += static_cast<char>(c.g);
        out += static_cast<char>(c.b);
    }
    return out;
}

inline std::string sustain_csv(const SustainField& field) {
    std::string out;
    for (std::size_t r = 0; r < field.side; ++r) {
        for (std::size_t c = 0; c < field.side; ++c) {
            if (c) out += ',';
            out += format_fixed6(field.values[r * field.side + c]);
        }
        out += '\n';
    }
    return out;
}

inline std::string sustain_pgm(const SustainField& field) {
    std::string out = "P5\n" + std::to_string(field.side) + " " + std::to_string(field.side) + "\n255\n";
    for (double p : field.values) out += static_cast<char>(probability_to_gray(p));
    return out;
}

/// Writes through a temporary sibling and renames; nothing is left behind on failure.
inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
    auto tmp = path;
    tmp += ".partial";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (f) f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!f || !f.flush()) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("cannot write " + path.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot write " + path.string());
    }
}

/// opinions_t<step>.csv and opinions_t<step>.ppm in `dir`. Returns the paths written.
inline std::vector<std::filesystem::path> emit_snapshot(const Configuration& config, const std::filesystem::path& dir) {
    const std::string stem = "opinions_t" + std::to_string(config.step_index());
    const auto opinions = config.opinions();
    std::vector<std::filesystem::path> written;
    try {
        written.push_back(dir / (stem + ".csv"));
        write_file(written.back(), opinions_csv(opinions, config.side()));
        written.push_back(dir / (stem + ".ppm"));
        write_file(written.back(), opinions_ppm(opinions, config.side()));
    } catch (const IoError&) {
        std::error_code ec;
        for (const auto& p : written) std::filesystem::remove(p, ec);
        throw;
    }
    return written;
}

/// sustain_t<step>.csv and sustain_t<step>.pgm in `dir`.
inline std::vector<std::filesystem::path> emit_sustain_map(const SustainField& field, const std::filesystem::path& dir) {
    const std::string stem = "sustain_t" + std::to_string(field.step_index);
    std::vector<std::filesystem::path> written;
    try {
        written.push_back(dir / (stem + ".csv"));
        write_file(written.back(), sustain_csv(field));
        written.push_back(dir / (stem + ".pgm"));
        write_file(written.back(), sustain_pgm(field));
    } catch (const IoError&) {
        std::error_code ec;
        for (const auto& p : written) std::filesystem::remove(p, ec);
        throw;
    }
    return written;
}

}  // namespace impact_lattice
