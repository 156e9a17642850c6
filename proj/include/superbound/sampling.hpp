#pragma once

#include "graded_core.hpp"

#include <cstdlib>
#include <random>
#include <utility>
#include <vector>

namespace superbound {

/// Seeded sampler of spectral points. Uniform variates are built from the
/// raw mt19937_64 stream so the sequence is the same on every platform.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    /// Point in [-half,half] x [-half,half] i, at least `gap` away from every excluded point.
    cplx point(double half, const std::vector<cplx>& exclude, double gap = 0.1) {
        for (int attempt = 0; attempt < 1000; ++attempt) {
            const cplx z(uniform(-half, half), uniform(-half, half));
            bool ok = true;
            for (const auto& e : exclude) ok = ok && std::abs(z - e) >= gap;
            if (ok) return z;
        }
        throw std::runtime_error("sampler could not avoid excluded points");
    }

    std::vector<std::pair<cplx, cplx>> pairs(int count, double half, const std::vector<cplx>& exclude) {
        std::vector<std::pair<cplx, cplx>> out;
        for (int i = 0; i < count; ++i) {
            const cplx a = point(half, exclude);
            const cplx b = point(half, exclude);
            out.emplace_back(a, b);
        }
        return out;
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

/// Zeros of lambda^2 + 1, avoided by the rational samplers.
inline std::vector<cplx> rational_exclusions() { return {cplx(0, 0), cplx(0, 1), cplx(0, -1)}; }

/// Seed default: SUPERBOUND_SEED if set, otherwise the given fallback.
inline std::uint64_t default_seed(std::uint64_t fallback = 20240611ULL) {
    if (const char* s = std::getenv("SUPERBOUND_SEED")) {
        char* end = nullptr;
        const auto v = std::strtoull(s, &end, 10);
        if (end && *end == '\0') return v;
    }
    return fallback;
}

}  // namespace superbound
