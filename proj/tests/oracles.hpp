// Test-only oracles, independent of the library's implementation paths:
// brute-force grid critical point enumeration, marching-squares contour
// tracing, an independently written copy of the closed-form densities, and
// small statistical test helpers.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "exlb/grid.hpp"

namespace oracle {

// Strict (value, index) order, mirroring the library's tie-break rule but
// written independently.
inline bool above(const exlb::FieldGrid& g, std::int64_t a, std::int64_t b) {
    const double va = g.values[a], vb = g.values[b];
    return va != vb ? va > vb : a > b;
}

// Vertices that are strict local maxima of the grid under `conn` neighbours.
inline std::vector<std::int64_t> brute_force_local_maxima(const exlb::FieldGrid& g,
                                                          int conn) {
    const int n = g.n();
    std::vector<std::int64_t> out;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const std::int64_t idx = static_cast<std::int64_t>(r) * n + c;
            bool is_max = true;
            for (int dr = -1; dr <= 1 && is_max; ++dr) {
                for (int dc = -1; dc <= 1 && is_max; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    if (conn == 4 && dr != 0 && dc != 0) continue;
                    const int rr = r + dr, cc = c + dc;
                    if (rr < 0 || rr >= n || cc < 0 || cc >= n) continue;
                    if (above(g, static_cast<std::int64_t>(rr) * n + cc, idx))
                        is_max = false;
                }
            }
            if (is_max) out.push_back(idx);
        }
    }
    return out;
}

inline std::vector<std::int64_t> brute_force_local_minima(const exlb::FieldGrid& g,
                                                          int conn) {
    exlb::FieldGrid neg = g;
    for (auto& v : neg.values) v = -v;
    return brute_force_local_maxima(neg, conn);
}

// Counts closed level curves of {f = level} strictly inside the window by
// marching-squares crack tracing. Ambiguous (checkerboard) cells are resolved
// by connecting the ABOVE diagonal, matching 8-connectivity for the
// superlevel set and 4 for the sublevel set. Each sign-change lattice edge is
// a node; nodes are linked within cells; closed curves are the components in
// which every node has degree 2 (curves reaching the window border have
// degree-1 end nodes).
inline std::int64_t trace_closed_contours(const exlb::FieldGrid& g, double level) {
    const int n = g.n();
    auto above_level = [&](int r, int c) { return g.at(r, c) > level; };
    // Edge nodes: horizontal edge (r, c)-(r, c+1) id = 2*(r*n+c); vertical
    // edge (r, c)-(r+1, c) id = 2*(r*n+c)+1.
    auto h_edge = [&](int r, int c) { return 2 * (static_cast<std::int64_t>(r) * n + c); };
    auto v_edge = [&](int r, int c) {
        return 2 * (static_cast<std::int64_t>(r) * n + c) + 1;
    };
    std::map<std::int64_t, std::vector<std::int64_t>> links;
    auto link = [&](std::int64_t a, std::int64_t b) {
        links[a].push_back(b);
        links[b].push_back(a);
    };
    for (int r = 0; r + 1 < n; ++r) {
        for (int c = 0; c + 1 < n; ++c) {
            const bool tl = above_level(r, c), tr = above_level(r, c + 1);
            const bool bl = above_level(r + 1, c), br = above_level(r + 1, c + 1);
            const std::int64_t top = h_edge(r, c), bottom = h_edge(r + 1, c);
            const std::int64_t left = v_edge(r, c), right = v_edge(r, c + 1);
            const int code = (tl ? 8 : 0) | (tr ? 4 : 0) | (br ? 2 : 0) | (bl ? 1 : 0);
            switch (code) {
                case 0: case 15: break;
                case 8: case 7: link(top, left); break;
                case 4: case 11: link(top, right); break;
                case 2: case 13: link(bottom, right); break;
                case 1: case 14: link(bottom, left); break;
                case 12: case 3: link(left, right); break;
                case 9: case 6: link(top, bottom); break;
                case 10: // tl, br above: keep the above diagonal connected
                    link(top, right);
                    link(bottom, left);
                    break;
                case 5: // tr, bl above
                    link(top, left);
                    link(bottom, right);
                    break;
            }
        }
    }
    // Union the link graph; a component is a closed curve iff no node in it
    // has degree 1 (all interior links have degree exactly 2).
    std::map<std::int64_t, std::int64_t> parent;
    std::function<std::int64_t(std::int64_t)> find = [&](std::int64_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [node, nbrs] : links)
        parent.emplace(node, node);
    for (const auto& [node, nbrs] : links)
        for (auto m : nbrs) {
            const auto a = find(node), b = find(m);
            if (a != b) parent[a] = b;
        }
    std::set<std::int64_t> open_roots;
    for (const auto& [node, nbrs] : links)
        if (nbrs.size() == 1) open_roots.insert(find(node));
    std::set<std::int64_t> all_roots;
    for (const auto& [node, nbrs] : links) all_roots.insert(find(node));
    std::int64_t closed = 0;
    for (auto r : all_roots)
        if (!open_roots.count(r)) ++closed;
    return closed;
}

struct Moments {
    double mean = 0.0;
    double var = 0.0;
    std::int64_t n = 0;
    double std_error() const { return std::sqrt(var / static_cast<double>(n)); }
};

inline Moments moments(const std::vector<double>& xs) {
    Moments m;
    m.n = static_cast<std::int64_t>(xs.size());
    for (double x : xs) m.mean += x;
    m.mean /= static_cast<double>(m.n);
    for (double x : xs) m.var += (x - m.mean) * (x - m.mean);
    m.var /= static_cast<double>(m.n - 1);
    return m;
}

// Kolmogorov-Smirnov test against the standard normal; returns the p-value
// from the asymptotic Kolmogorov distribution.
inline double ks_normal_pvalue(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const auto n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double cdf = 0.5 * std::erfc(-xs[i] / std::sqrt(2.0));
        d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf));
    }
    const double t = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k)
        p += 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * t * t);
    return std::clamp(p, 0.0, 1.0);
}

// Two-sample chi-square on integer counts with pooled binning; returns the
// p-value (upper tail, Wilson-Hilferty approximation of the chi-square CDF).
inline double chi_square_two_sample_pvalue(const std::vector<std::int64_t>& a,
                                           const std::vector<std::int64_t>& b) {
    std::vector<std::int64_t> all(a);
    all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    // ~6 bins with equal pooled occupancy
    const int n_bins = 6;
    std::vector<std::int64_t> edges;
    for (int i = 1; i < n_bins; ++i)
        edges.push_back(all[all.size() * i / n_bins]);
    auto bin_of = [&](std::int64_t x) {
        int bin = 0;
        for (auto e : edges)
            if (x > e) ++bin;
        return bin;
    };
    std::vector<double> ca(n_bins, 0.0), cb(n_bins, 0.0);
    for (auto x : a) ca[bin_of(x)] += 1.0;
    for (auto x : b) cb[bin_of(x)] += 1.0;
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    double chi2 = 0.0;
    int dof = -1;
    for (int i = 0; i < n_bins; ++i) {
        const double tot = ca[i] + cb[i];
        if (tot < 1.0) continue;
        ++dof;
        const double ea = tot * na / (na + nb), eb = tot * nb / (na + nb);
        chi2 += (ca[i] - ea) * (ca[i] - ea) / ea + (cb[i] - eb) * (cb[i] - eb) / eb;
    }
    if (dof < 1) return 1.0;
    // Wilson-Hilferty: chi2/dof ~ N(1 - 2/(9 dof), 2/(9 dof))^3
    const double z = (std::cbrt(chi2 / dof) - (1.0 - 2.0 / (9.0 * dof))) /
                     std::sqrt(2.0 / (9.0 * dof));
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

} // namespace oracle
