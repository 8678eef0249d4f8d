#include "exlb/sweep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "exlb/errors.hpp"

namespace exlb {

namespace {

// Minimal union-find with path halving; rank by size.
class UnionFind {
  public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    // Returns the surviving root.
    std::size_t unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return a;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return a;
    }

  private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

// Strict total order on vertices: (value, index) lexicographic.
inline bool higher(const std::vector<double>& v, std::size_t a, std::size_t b) {
    return v[a] != v[b] ? v[a] > v[b] : a > b;
}

void check_conn(Connectivity conn) {
    const bool ok = (conn.superlevel == 8 && conn.sublevel == 4) ||
                    (conn.superlevel == 4 && conn.sublevel == 8);
    if (!ok) throw ConfigError("connectivity must pair 8 with 4");
}

int neighbours(int n, std::size_t idx, int connectivity, std::array<std::size_t, 8>& out) {
    const int r = static_cast<int>(idx) / n;
    const int c = static_cast<int>(idx) % n;
    static const int d4[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
    static const int d8[8][2] = {{-1, 0}, {1, 0},  {0, -1}, {0, 1},
                                 {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
    const auto* d = connectivity == 8 ? d8 : d4;
    const int count = connectivity;
    int found = 0;
    for (int k = 0; k < count; ++k) {
        const int rr = r + d[k][0], cc = c + d[k][1];
        if (rr < 0 || rr >= n || cc < 0 || cc >= n) continue;
        out[found++] = static_cast<std::size_t>(rr) * n + cc;
    }
    return found;
}

// One directional union-find pass. Ascending swaps the order and event kinds.
void run_pass(const FieldGrid& g, int connectivity, bool descending,
              std::vector<CriticalEvent>& events) {
    const int n = g.n();
    const std::size_t total = g.values.size();
    std::vector<std::uint32_t> order(total);
    std::iota(order.begin(), order.end(), 0u);
    const auto& v = g.values;
    if (descending) {
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            return v[a] != v[b] ? v[a] > v[b] : a > b;
        });
    } else {
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            return v[a] != v[b] ? v[a] < v[b] : a < b;
        });
    }

    UnionFind uf(total);
    std::vector<char> active(total, 0);
    std::array<std::size_t, 8> nbr;
    std::array<std::size_t, 8> roots;
    for (std::uint32_t idx : order) {
        const int deg = neighbours(n, idx, connectivity, nbr);
        int k = 0;
        for (int i = 0; i < deg; ++i) {
            if (!active[nbr[i]]) continue;
            const std::size_t root = uf.find(nbr[i]);
            bool dup = false;
            for (int j = 0; j < k; ++j)
                if (roots[j] == root) { dup = true; break; }
            if (!dup) roots[k++] = root;
        }
        active[idx] = 1;
        if (k == 0) {
            events.push_back({descending ? EventKind::Max : EventKind::Min, v[idx],
                              static_cast<std::int64_t>(idx), 1});
        } else {
            for (int j = 0; j < k; ++j) uf.unite(idx, roots[j]);
            if (k >= 2)
                events.push_back({descending ? EventKind::LowerSaddle : EventKind::UpperSaddle,
                                  v[idx], static_cast<std::int64_t>(idx), k - 1});
        }
    }
}

} // namespace

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::Max: return "max";
        case EventKind::Min: return "min";
        case EventKind::LowerSaddle: return "lower_saddle";
        case EventKind::UpperSaddle: return "upper_saddle";
    }
    return "?";
}

std::int64_t SweepResult::count_events(EventKind k) const {
    std::int64_t c = 0;
    for (const auto& e : events)
        if (e.kind == k) ++c;
    return c;
}

std::int64_t SweepResult::maxima_at_or_above(double level) const {
    std::int64_t c = 0;
    for (const auto& e : events)
        if (e.kind == EventKind::Max && e.level >= level) ++c;
    return c;
}

std::int64_t SweepResult::lower_saddle_mult_at_or_above(double level) const {
    std::int64_t c = 0;
    for (const auto& e : events)
        if (e.kind == EventKind::LowerSaddle && e.level >= level) c += e.multiplicity;
    return c;
}

std::int64_t SweepResult::minima_at_or_below(double level) const {
    std::int64_t c = 0;
    for (const auto& e : events)
        if (e.kind == EventKind::Min && e.level <= level) ++c;
    return c;
}

std::int64_t SweepResult::upper_saddle_mult_at_or_below(double level) const {
    std::int64_t c = 0;
    for (const auto& e : events)
        if (e.kind == EventKind::UpperSaddle && e.level <= level) c += e.multiplicity;
    return c;
}

std::vector<CriticalEvent> sweep_events(const FieldGrid& g, int connectivity,
                                        bool descending) {
    if (connectivity != 4 && connectivity != 8)
        throw ConfigError("connectivity must be 4 or 8");
    std::vector<CriticalEvent> events;
    run_pass(g, connectivity, descending, events);
    return events;
}

SweepResult sweep(const FieldGrid& g, Connectivity conn, std::span<const double> levels) {
    check_conn(conn);
    if (g.n() < 3) throw ConfigError("sweep requires a grid of side >= 3");
    SweepResult sr;
    run_pass(g, conn.superlevel, /*descending=*/true, sr.events);
    run_pass(g, conn.sublevel, /*descending=*/false, sr.events);
    std::sort(sr.events.begin(), sr.events.end(),
              [](const CriticalEvent& a, const CriticalEvent& b) {
                  if (a.level != b.level) return a.level < b.level;
                  return a.grid_index < b.grid_index;
              });
    sr.boundary_tangents = boundary_tangent_count(g);
    sr.component_counts.reserve(levels.size());
    for (double l : levels) {
        ComponentCounts cc;
        cc.level = l;
        cc.super_all = count_components(g, l, SetKind::Superlevel, Containment::All, conn);
        cc.super_contained =
            count_components(g, l, SetKind::Superlevel, Containment::Contained, conn);
        cc.sub_all = count_components(g, l, SetKind::Sublevel, Containment::All, conn);
        cc.sub_contained =
            count_components(g, l, SetKind::Sublevel, Containment::Contained, conn);
        cc.levelset_contained = cc.super_contained + cc.sub_contained;
        sr.component_counts.push_back(cc);
    }
    return sr;
}

std::int64_t count_components(const FieldGrid& g, double level, SetKind set_kind,
                              Containment containment, Connectivity conn) {
    check_conn(conn);
    const int n = g.n();
    const std::size_t total = g.values.size();
    const int connectivity = set_kind == SetKind::Superlevel ? conn.superlevel : conn.sublevel;
    const bool super = set_kind == SetKind::Superlevel;
    const auto& v = g.values;
    auto in_set = [&](std::size_t i) { return super ? v[i] > level : v[i] < level; };

    UnionFind uf(total);
    std::array<std::size_t, 8> nbr;
    for (std::size_t i = 0; i < total; ++i) {
        if (!in_set(i)) continue;
        const int deg = neighbours(n, i, connectivity, nbr);
        for (int k = 0; k < deg; ++k)
            if (nbr[k] < i && in_set(nbr[k])) uf.unite(i, nbr[k]);
    }
    std::vector<char> touching(total, 0);
    if (containment == Containment::Contained) {
        for (int c = 0; c < n; ++c) {
            for (std::size_t i : {static_cast<std::size_t>(c),
                                  static_cast<std::size_t>(n - 1) * n + c,
                                  static_cast<std::size_t>(c) * n,
                                  static_cast<std::size_t>(c) * n + (n - 1)}) {
                if (in_set(i)) touching[uf.find(i)] = 1;
            }
        }
    }
    std::int64_t count = 0;
    for (std::size_t i = 0; i < total; ++i) {
        if (!in_set(i) || uf.find(i) != i) continue;
        if (containment == Containment::Contained && touching[i]) continue;
        ++count;
    }
    return count;
}

std::int64_t count_level_components(const FieldGrid& g, double level, Connectivity conn) {
    return count_components(g, level, SetKind::Superlevel, Containment::Contained, conn) +
           count_components(g, level, SetKind::Sublevel, Containment::Contained, conn);
}

std::int64_t boundary_tangent_count(const FieldGrid& g) {
    const int n = g.n();
    if (n < 3) throw ConfigError("boundary cycle requires grid side >= 3");
    std::vector<std::size_t> cycle;
    cycle.reserve(4 * (n - 1));
    for (int c = 0; c < n - 1; ++c) cycle.push_back(c);
    for (int r = 0; r < n - 1; ++r) cycle.push_back(static_cast<std::size_t>(r) * n + (n - 1));
    for (int c = n - 1; c > 0; --c)
        cycle.push_back(static_cast<std::size_t>(n - 1) * n + c);
    for (int r = n - 1; r > 0; --r) cycle.push_back(static_cast<std::size_t>(r) * n);

    const std::size_t m = cycle.size();
    std::int64_t count = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t prev = cycle[(i + m - 1) % m];
        const std::size_t next = cycle[(i + 1) % m];
        const std::size_t cur = cycle[i];
        const bool is_max = higher(g.values, cur, prev) && higher(g.values, cur, next);
        const bool is_min = higher(g.values, prev, cur) && higher(g.values, next, cur);
        if (is_max || is_min) ++count;
    }
    return count;
}

AuditReport audit_morse_identity(const SweepResult& sr, std::span<const double> levels) {
    AuditReport report;
    report.boundary_tangents = sr.boundary_tangents;
    const std::int64_t slack = sr.boundary_tangents + 2;
    for (double l : levels) {
        const ComponentCounts* cc = nullptr;
        for (const auto& c : sr.component_counts)
            if (c.level == l) { cc = &c; break; }
        if (!cc) throw ConfigError("audit level was not queried in the sweep");
        AuditRow row;
        row.level = l;
        row.super_all = cc->super_all;
        row.census = sr.maxima_at_or_above(l) - sr.lower_saddle_mult_at_or_above(l);
        row.delta_all = cc->super_all - row.census;
        const std::int64_t census_sub =
            sr.minima_at_or_below(l) - sr.upper_saddle_mult_at_or_below(l);
        row.delta_all_dual = cc->sub_all - census_sub;
        row.delta_contained = cc->super_contained - row.census;
        report.rows.push_back(row);
        report.max_abs_delta_all = std::max(
            {report.max_abs_delta_all, std::abs(row.delta_all), std::abs(row.delta_all_dual)});
        report.max_abs_delta_contained =
            std::max(report.max_abs_delta_contained, std::abs(row.delta_contained));
        if (std::abs(row.delta_contained) > slack) report.contained_within_slack = false;
    }
    if (report.max_abs_delta_all != 0) {
        std::ostringstream os;
        os << "Morse identity violated:";
        for (const auto& r : report.rows) {
            if (r.delta_all != 0)
                os << " level " << r.level << " delta_all=" << r.delta_all
                   << " (components " << r.super_all << " vs census " << r.census << ")";
            if (r.delta_all_dual != 0)
                os << " level " << r.level << " delta_all_dual=" << r.delta_all_dual;
        }
        throw IdentityViolationError(os.str());
    }
    return report;
}

std::string events_to_csv(const SweepResult& sr) {
    std::ostringstream os;
    os << "kind,level,grid_index,multiplicity\n";
    os.precision(17);
    for (const auto& e : sr.events)
        os << event_kind_name(e.kind) << ',' << e.level << ',' << e.grid_index << ','
           << e.multiplicity << '\n';
    return os.str();
}

std::string counts_to_csv(const SweepResult& sr) {
    std::ostringstream os;
    os << "level,n_super_all,n_super_contained,n_sub_all,n_sub_contained,n_levelset_contained\n";
    os.precision(17);
    for (const auto& c : sr.component_counts)
        os << c.level << ',' << c.super_all << ',' << c.super_contained << ',' << c.sub_all
           << ',' << c.sub_contained << ',' << c.levelset_contained << '\n';
    return os.str();
}

} // namespace exlb
