#pragma once

// Seeded randomness with deterministic sub-stream derivation. Every
// randomized operation in the library takes an explicit 64-bit seed and
// derives per-restart / per-batch streams through mix(), so results do not
// depend on evaluation order.

#include <cstdint>
#include <random>

#include "confcurve/linalg.hpp"

namespace confcurve {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derive the seed of sub-stream `index` from a master seed.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x51ed2701a4b1c23fULL));
}

class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

    // uniform in [0, 1)
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform in (0, 1]
    double uniform01_open_low() { return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller with a cached spare.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01_open_low();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    Vec gaussian_vec(int n) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = gaussian();
        return v;
    }

    Mat gaussian_mat(int rows, int cols) {
        Mat m(rows, cols);
        for (double& x : m.a) x = gaussian();
        return m;
    }

  private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Haar-random orthonormal n-frame in R^m (QR of a Gaussian matrix).
inline Mat random_orthonormal_columns(int m, int n, RandomStream& rs) {
    for (;;) {
        Mat g = rs.gaussian_mat(m, n);
        if (orthonormalize_columns(g)) return g;
    }
}

// Haar-random rotation in SO(m).
inline Mat random_rotation(int m, RandomStream& rs) {
    Mat q = random_orthonormal_columns(m, m, rs);
    if (det(q) < 0.0)
        for (int i = 0; i < m; ++i) q(i, m - 1) = -q(i, m - 1);
    return q;
}

}  // namespace confcurve
