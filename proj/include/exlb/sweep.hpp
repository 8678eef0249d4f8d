#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "exlb/grid.hpp"

namespace exlb {

enum class EventKind { Max, Min, LowerSaddle, UpperSaddle };

const char* event_kind_name(EventKind k);

// One critical event of the level sweep. A vertex whose insertion merges k
// components carries multiplicity k-1 (degenerate grid saddles collapse to a
// single vertex even when the continuum field is Morse).
struct CriticalEvent {
    EventKind kind;
    double level;
    std::int64_t grid_index;
    int multiplicity;
};

// Dual connectivity pair; one side 4-adjacent, the other 8-adjacent, so a set
// and its complement are never both connected across a diagonal.
struct Connectivity {
    int superlevel = 8;
    int sublevel = 4;
};

enum class SetKind { Superlevel, Sublevel };
enum class Containment { All, Contained };

struct ComponentCounts {
    double level;
    std::int64_t super_all;
    std::int64_t super_contained;
    std::int64_t sub_all;
    std::int64_t sub_contained;
    std::int64_t levelset_contained;
};

// Census of one realization: all critical events of both sweeps (sorted by
// level), boundary-cycle extremum count, and component counts at the queried
// levels (computed by an independent union-find flood, not from the events —
// the Morse audit compares the two routes).
struct SweepResult {
    std::vector<CriticalEvent> events;
    std::int64_t boundary_tangents = 0;
    std::vector<ComponentCounts> component_counts;

    std::int64_t count_events(EventKind k) const;
    // Census sums over events; ties with query levels never occur for the
    // continuous fields these are used with.
    std::int64_t maxima_at_or_above(double level) const;
    std::int64_t lower_saddle_mult_at_or_above(double level) const;
    std::int64_t minima_at_or_below(double level) const;
    std::int64_t upper_saddle_mult_at_or_below(double level) const;
};

// Two dual union-find passes over the vertices in tie-broken (value, index)
// order. Descending pass: a vertex with no higher neighbour is a Max event, a
// vertex joining k >= 2 components is a LowerSaddle merge of multiplicity k-1.
// Ascending pass is the mirror (Min, UpperSaddle). Deterministic.
SweepResult sweep(const FieldGrid& g, Connectivity conn,
                  std::span<const double> levels = {});

// One directional pass only (Max/LowerSaddle when descending, Min/UpperSaddle
// when ascending) under a single connectivity. Density estimation uses an
// ascending pass at the superlevel connectivity so that both extremum
// families carry the same discretization; 4-connected minima are inflated by
// a scale-free trough artifact that never converges with resolution.
std::vector<CriticalEvent> sweep_events(const FieldGrid& g, int connectivity,
                                        bool descending);

// Fresh union-find component count of {f > level} or {f < level} with the
// matching connectivity; Contained drops components touching the window edge.
std::int64_t count_components(const FieldGrid& g, double level, SetKind set_kind,
                              Containment containment, Connectivity conn);

// Contained level-set components. On a convex window every closed interior
// level curve is the outer boundary of exactly one contained super- or
// sublevel component, so the count is the sum of the two contained counts.
std::int64_t count_level_components(const FieldGrid& g, double level, Connectivity conn);

// Strict local extrema of the field restricted to the boundary cycle, both
// kinds, under the tie-broken order.
std::int64_t boundary_tangent_count(const FieldGrid& g);

struct AuditRow {
    double level;
    std::int64_t super_all;
    std::int64_t census; // #Max(>=l) - sum mult LowerSaddle(>=l)
    std::int64_t delta_all;       // must be exactly 0
    std::int64_t delta_all_dual;  // sublevel mirror, must be exactly 0
    std::int64_t delta_contained; // |.| <= boundary_tangents + 2
};

struct AuditReport {
    std::vector<AuditRow> rows;
    std::int64_t boundary_tangents = 0;
    std::int64_t max_abs_delta_all = 0;
    std::int64_t max_abs_delta_contained = 0;
    bool contained_within_slack = true;
};

// Exact discrete Morse identity audit. Throws IdentityViolationError when any
// delta_all is nonzero; that is an implementation bug by construction.
AuditReport audit_morse_identity(const SweepResult& sr, std::span<const double> levels);

std::string events_to_csv(const SweepResult& sr);
std::string counts_to_csv(const SweepResult& sr);

} // namespace exlb
