#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fracks {

inline constexpr double pi = 3.14159265358979323846;

using Point = std::array<double, 3>;

inline double norm(const Point& p, int d) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += p[j] * p[j];
    return std::sqrt(s);
}

inline double dot(const Point& a, const Point& b, int d) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += a[j] * b[j];
    return s;
}

// Lebesgue measure of the unit ball in R^d.
inline double unit_ball_measure(int d) {
    switch (d) {
        case 1: return 2.0;
        case 2: return pi;
        case 3: return 4.0 * pi / 3.0;
        default: return std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
    }
}

// Surface measure of the unit sphere S^{d-1}.
inline double unit_sphere_measure(int d) {
    return d * unit_ball_measure(d);
}

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

inline int thread_cap() {
    if (const char* env = std::getenv("FRACKS_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<int>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Splits [0, count) into a fixed number of chunks, evaluates `partial` on each
// chunk, and combines the chunk results in index order. The chunk layout does
// not depend on the worker count, so the reduction is deterministic under any
// FRACKS_THREADS setting.
inline double parallel_sum(std::size_t count,
                           const std::function<double(std::size_t, std::size_t)>& partial) {
    if (count == 0) return 0.0;
    constexpr std::size_t n_chunks = 64;
    const std::size_t chunk = (count + n_chunks - 1) / n_chunks;
    std::vector<double> partials(n_chunks, 0.0);

    const int workers = thread_cap();
    if (workers <= 1 || count < 4096) {
        for (std::size_t c = 0; c < n_chunks; ++c) {
            const std::size_t lo = c * chunk;
            if (lo >= count) break;
            partials[c] = partial(lo, std::min(lo + chunk, count));
        }
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        auto body = [&] {
            for (;;) {
                const std::size_t c = next.fetch_add(1);
                if (c >= n_chunks) return;
                const std::size_t lo = c * chunk;
                if (lo >= count) continue;
                partials[c] = partial(lo, std::min(lo + chunk, count));
            }
        };
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }

    double total = 0.0;
    for (double v : partials) total += v;
    return total;
}

}  // namespace fracks
