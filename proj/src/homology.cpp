#include <algorithm>
#include <cstdlib>
#include <limits>
#include <queue>

#include <boost/multiprecision/cpp_int.hpp>

#include "disco/chassis.hpp"
#include "disco/error.hpp"

namespace disco {

namespace {

using boost::multiprecision::cpp_int;
using Entry = std::pair<std::uint32_t, std::int64_t>;
using SparseRow = std::vector<Entry>;

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_add_overflow(a, b, &out)) throw Error("CoefficientOverflow", "integer elimination overflowed");
    return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_mul_overflow(a, b, &out)) throw Error("CoefficientOverflow", "integer elimination overflowed");
    return out;
}

// a + k * b on sorted sparse rows.
SparseRow axpy(const SparseRow& a, std::int64_t k, const SparseRow& b) {
    SparseRow out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.emplace_back(b[j].first, checked_mul(k, b[j].second));
            ++j;
        } else {
            const std::int64_t v = checked_add(a[i].second, checked_mul(k, b[j].second));
            if (v != 0) out.emplace_back(a[i].first, v);
            ++i;
            ++j;
        }
    }
    return out;
}

// Smith normal form of a dense integer matrix, tracking the column
// transform Q so that P * A * Q = D.
struct Smith {
    std::vector<cpp_int> diag;
    std::vector<std::vector<cpp_int>> q;  // n x n
};

Smith smith_normal_form(std::vector<std::vector<cpp_int>> a, std::size_t cols) {
    const std::size_t rows = a.size();
    Smith s;
    s.q.assign(cols, std::vector<cpp_int>(cols, 0));
    for (std::size_t i = 0; i < cols; ++i) s.q[i][i] = 1;
    auto col_op = [&](std::size_t dst, std::size_t src, const cpp_int& k) {  // col dst -= k * col src
        for (std::size_t r = 0; r < rows; ++r)
            if (a[r][src] != 0) a[r][dst] -= k * a[r][src];
        for (std::size_t r = 0; r < cols; ++r)
            if (s.q[r][src] != 0) s.q[r][dst] -= k * s.q[r][src];
    };
    auto swap_cols = [&](std::size_t x, std::size_t y) {
        if (x == y) return;
        for (auto& row : a) std::swap(row[x], row[y]);
        for (auto& row : s.q) std::swap(row[x], row[y]);
    };

    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
        for (;;) {
            // Smallest nonzero magnitude in the trailing block.
            std::size_t pr = rows, pc = cols;
            cpp_int best = 0;
            for (std::size_t r = t; r < rows; ++r)
                for (std::size_t c = t; c < cols; ++c)
                    if (a[r][c] != 0 && (best == 0 || abs(a[r][c]) < best)) {
                        best = abs(a[r][c]);
                        pr = r;
                        pc = c;
                    }
            if (pr == rows) return s;
            std::swap(a[t], a[pr]);
            swap_cols(t, pc);
            if (a[t][t] < 0)
                for (auto& v : a[t]) v = -v;
            bool clean = true;
            for (std::size_t r = t + 1; r < rows; ++r) {
                if (a[r][t] == 0) continue;
                const cpp_int k = a[r][t] / a[t][t];
                for (std::size_t c = t; c < cols; ++c)
                    if (a[t][c] != 0) a[r][c] -= k * a[t][c];
                if (a[r][t] != 0) clean = false;
            }
            for (std::size_t c = t + 1; c < cols; ++c) {
                if (a[t][c] == 0) continue;
                const cpp_int k = a[t][c] / a[t][t];
                col_op(c, t, k);
                if (a[t][c] != 0) clean = false;
            }
            if (!clean) continue;
            // Divisibility of the trailing block by the pivot.
            std::size_t bad = rows;
            for (std::size_t r = t + 1; r < rows && bad == rows; ++r)
                for (std::size_t c = t + 1; c < cols; ++c)
                    if (a[r][c] % a[t][t] != 0) {
                        bad = r;
                        break;
                    }
            if (bad == rows) break;
            for (std::size_t c = t; c < cols; ++c) a[t][c] += a[bad][c];
        }
        s.diag.push_back(a[t][t]);
    }
    return s;
}

}  // namespace

bool H1Class::zero() const {
    return std::all_of(free.begin(), free.end(), [](auto v) { return v == 0; }) &&
           std::all_of(torsion.begin(), torsion.end(), [](auto v) { return v == 0; });
}

H1Class H1Class::negated(const std::vector<std::int64_t>& orders) const {
    H1Class out = *this;
    for (auto& v : out.free) v = -v;
    for (std::size_t i = 0; i < out.torsion.size(); ++i) out.torsion[i] = (orders[i] - out.torsion[i]) % orders[i];
    return out;
}

H1Map H1Map::compute(const Chassis& chassis, std::size_t max_entries) {
    H1Map map;
    map.chassis_ = &chassis;
    const std::size_t edge_count = chassis.edges.size();

    // One variable per non-tree edge.
    std::vector<std::int64_t> var_of_edge(edge_count, -1);
    std::uint32_t vars = 0;
    for (EdgeId e = 0; e < edge_count; ++e)
        if (!chassis.in_tree[e]) var_of_edge[e] = vars++;
    map.summary_.cycle_rank = vars;

    std::vector<SparseRow> rows;
    rows.reserve(chassis.triangles.size());
    for (const auto& t : chassis.triangles) {
        SparseRow row;
        const std::int64_t ab = var_of_edge[chassis.find_edge(t[0], t[1])];
        const std::int64_t bc = var_of_edge[chassis.find_edge(t[1], t[2])];
        const std::int64_t ac = var_of_edge[chassis.find_edge(t[0], t[2])];
        if (ab >= 0) row.emplace_back(static_cast<std::uint32_t>(ab), 1);
        if (bc >= 0) row.emplace_back(static_cast<std::uint32_t>(bc), 1);
        if (ac >= 0) row.emplace_back(static_cast<std::uint32_t>(ac), -1);
        if (row.empty()) continue;
        std::sort(row.begin(), row.end());
        rows.push_back(std::move(row));
    }

    std::vector<std::vector<std::uint32_t>> col(vars);
    std::size_t entries = 0;
    for (std::uint32_t r = 0; r < rows.size(); ++r) {
        entries += rows[r].size();
        for (auto [v, _] : rows[r]) col[v].push_back(r);
    }
    using Item = std::pair<std::size_t, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (std::uint32_t r = 0; r < rows.size(); ++r) pq.emplace(rows[r].size(), r);

    std::vector<char> row_live(rows.size(), 1);
    std::vector<char> pivoted(vars, 0);
    // Pivot variable -> expression in the other variables.
    std::vector<std::pair<std::uint32_t, SparseRow>> pivots;
    std::vector<std::uint32_t> stamp(rows.size(), 0);
    std::uint32_t round = 0;
    std::size_t rank = 0;

    while (!pq.empty()) {
        auto [len, r] = pq.top();
        pq.pop();
        if (!row_live[r] || rows[r].size() != len) continue;
        if (rows[r].empty()) {
            row_live[r] = 0;
            continue;
        }
        std::int64_t pv = -1;
        std::size_t best = std::numeric_limits<std::size_t>::max();
        std::int64_t pc = 0;
        for (auto [v, c] : rows[r]) {
            if ((c == 1 || c == -1) && col[v].size() < best) {
                best = col[v].size();
                pv = v;
                pc = c;
            }
        }
        if (pv < 0) continue;  // stays in the residual block unless touched again
        const auto x = static_cast<std::uint32_t>(pv);
        const SparseRow pivot_row = rows[r];
        row_live[r] = 0;
        ++rank;
        pivoted[x] = 1;
        // c*x + sum a_i y_i = 0  =>  x = -c * sum a_i y_i.
        SparseRow expr;
        for (auto [v, c] : pivot_row)
            if (v != x) expr.emplace_back(v, -pc * c);
        pivots.emplace_back(x, std::move(expr));

        ++round;
        const auto users = std::move(col[x]);
        col[x].clear();
        for (auto q : users) {
            if (!row_live[q] || stamp[q] == round) continue;
            stamp[q] = round;
            auto it = std::lower_bound(rows[q].begin(), rows[q].end(), Entry{x, std::numeric_limits<std::int64_t>::min()});
            if (it == rows[q].end() || it->first != x) continue;
            const std::int64_t b = it->second;
            entries -= rows[q].size();
            rows[q] = axpy(rows[q], -b * pc, pivot_row);
            entries += rows[q].size();
            if (entries > max_entries) throw Error("MatrixTooLarge", "homology elimination exceeded its fill budget");
            for (auto [v, _] : pivot_row)
                if (v != x) col[v].push_back(q);
            if (rows[q].empty())
                row_live[q] = 0;
            else
                pq.emplace(rows[q].size(), q);
        }
    }

    // Residual block over the remaining variables.
    std::vector<std::int64_t> slot(vars, -1);
    std::vector<std::uint32_t> remaining;
    for (std::uint32_t v = 0; v < vars; ++v)
        if (!pivoted[v]) {
            slot[v] = static_cast<std::int64_t>(remaining.size());
            remaining.push_back(v);
        }
    const std::size_t m = remaining.size();
    std::vector<std::vector<cpp_int>> dense;
    for (std::uint32_t r = 0; r < rows.size(); ++r) {
        if (!row_live[r] || rows[r].empty()) continue;
        std::vector<cpp_int> row(m, 0);
        for (auto [v, c] : rows[r]) row[static_cast<std::size_t>(slot[v])] = c;
        dense.push_back(std::move(row));
    }
    const Smith snf = smith_normal_form(std::move(dense), m);
    rank += snf.diag.size();
    map.summary_.boundary_rank = rank;

    // Reduced coordinate j of y*Q: dropped when d_j = 1, torsion when d_j > 1,
    // free beyond the rank.
    std::vector<std::int64_t> coord(m, -1);
    std::size_t betti = m - snf.diag.size();
    for (std::size_t j = snf.diag.size(); j < m; ++j) coord[j] = static_cast<std::int64_t>(j - snf.diag.size());
    std::size_t next = betti;
    for (std::size_t j = 0; j < snf.diag.size(); ++j) {
        if (snf.diag[j] > 1) {
            coord[j] = static_cast<std::int64_t>(next++);
            map.summary_.torsion.push_back(static_cast<std::int64_t>(snf.diag[j]));
        }
    }
    map.summary_.betti1 = betti;

    // Each remaining variable's row of Q in reduced coordinates.
    std::vector<SparseRow> image(vars);
    for (std::size_t i = 0; i < m; ++i) {
        SparseRow row;
        for (std::size_t j = 0; j < m; ++j) {
            if (coord[j] < 0 || snf.q[i][j] == 0) continue;
            if (snf.q[i][j] > std::numeric_limits<std::int64_t>::max() ||
                snf.q[i][j] < std::numeric_limits<std::int64_t>::min())
                throw Error("CoefficientOverflow", "homology basis change does not fit in 64 bits");
            row.emplace_back(static_cast<std::uint32_t>(coord[j]), static_cast<std::int64_t>(snf.q[i][j]));
        }
        std::sort(row.begin(), row.end());
        image[remaining[i]] = std::move(row);
    }
    for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
        SparseRow acc;
        for (auto [v, c] : it->second) acc = axpy(acc, c, image[v]);
        image[it->first] = std::move(acc);
    }
    map.edge_coords_.assign(edge_count, {});
    for (EdgeId e = 0; e < edge_count; ++e)
        if (var_of_edge[e] >= 0) map.edge_coords_[e] = std::move(image[static_cast<std::size_t>(var_of_edge[e])]);
    return map;
}

H1Class H1Map::edge_class(VertexId u, VertexId v) const {
    H1Class out;
    out.free.assign(summary_.betti1, 0);
    out.torsion.assign(summary_.torsion.size(), 0);
    if (u == v) return out;
    const EdgeId e = chassis_->find_edge(u, v);
    if (e == kNoEdge) throw Error("NotSimplicial", "vertices are not joined by an edge");
    const std::int64_t sign = u < v ? 1 : -1;
    for (auto [j, c] : edge_coords_[e]) {
        if (j < summary_.betti1) {
            out.free[j] = sign * c;
        } else {
            const std::size_t t = j - summary_.betti1;
            const std::int64_t order = summary_.torsion[t];
            out.torsion[t] = (((sign * c) % order) + order) % order;
        }
    }
    return out;
}

H1Class H1Map::loop_class(const std::vector<VertexId>& loop) const {
    H1Class out;
    out.free.assign(summary_.betti1, 0);
    out.torsion.assign(summary_.torsion.size(), 0);
    for (std::size_t i = 0; i + 1 < loop.size(); ++i) {
        const H1Class step = edge_class(loop[i], loop[i + 1]);
        for (std::size_t j = 0; j < out.free.size(); ++j) out.free[j] = checked_add(out.free[j], step.free[j]);
        for (std::size_t j = 0; j < out.torsion.size(); ++j)
            out.torsion[j] = (out.torsion[j] + step.torsion[j]) % summary_.torsion[j];
    }
    return out;
}

}  // namespace disco
