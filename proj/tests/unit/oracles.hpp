#pragma once
// Brute-force reference computations used to freeze expected values.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

inline std::vector<std::vector<double>> floyd_warshall(std::size_t n,
                                                       const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
    for (auto [u, v, w] : edges) {
        d[u][v] = std::min(d[u][v], w);
        d[v][u] = std::min(d[v][u], w);
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return d;
}

/// Smallest number of sets (bitmasks over n <= 24 targets) whose union is full,
/// by trying every subset size in increasing order.
inline std::size_t min_cover(const std::vector<std::uint32_t>& sets, std::size_t n) {
    const std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);
    for (std::size_t k = 1; k <= sets.size(); ++k) {
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = i;
        for (;;) {
            std::uint32_t u = 0;
            for (auto i : idx) u |= sets[i];
            if ((u & full) == full) return k;
            std::size_t i = k;
            while (i > 0 && idx[i - 1] == sets.size() - k + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return sets.size();
}

/// Rank over the rationals by fraction-free elimination.
inline std::size_t rational_rank(std::vector<std::vector<boost::multiprecision::cpp_int>> m) {
    using boost::multiprecision::cpp_int;
    std::size_t rank = 0;
    const std::size_t cols = m.empty() ? 0 : m[0].size();
    for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
        std::size_t p = rank;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[rank]);
        for (std::size_t r = rank + 1; r < m.size(); ++r) {
            if (m[r][c] == 0) continue;
            const cpp_int a = m[rank][c];
            const cpp_int b = m[r][c];
            for (std::size_t k = c; k < cols; ++k) m[r][k] = m[r][k] * a - m[rank][k] * b;
            cpp_int g = 0;
            for (std::size_t k = c; k < cols; ++k) g = gcd(g, m[r][k]);
            if (g > 1)
                for (std::size_t k = c; k < cols; ++k) m[r][k] /= g;
        }
        ++rank;
    }
    return rank;
}

}  // namespace oracle
