#pragma once

// Combinatorics of the (q+1)-regular tree with a marked geodesic segment.
//
// Coordinates: the segment x = sigma(0), ..., y = sigma(d) sits on a
// doubly-infinite spine sigma(k), k in Z. Every spine vertex carries q-1
// hanging subtrees (branch symbol 0..q-2); inside a subtree every vertex has
// q children (branch symbols 0..q-1). A vertex is (spine anchor, branch
// word); the word is the path from sigma(anchor) into its hanging subtree.
// This addresses each vertex of the tree exactly once and makes distances a
// matter of prefix bookkeeping.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace bpt {

struct ProblemInstance {
    long long q = 2; // branching: the tree is (q+1)-regular
    long long d = 0; // length of the marked segment [x, y]
};

inline void validate_instance(const ProblemInstance& inst) {
    if (inst.q < 2) {
        throw InvalidParameters("instance: q must be at least 2, got " + std::to_string(inst.q));
    }
    if (inst.d < 0) {
        throw InvalidParameters("instance: d must be nonnegative, got " + std::to_string(inst.d));
    }
}

struct Vertex {
    long long spine = 0;
    std::vector<int> branch;

    friend bool operator==(const Vertex& a, const Vertex& b) {
        return a.spine == b.spine && a.branch == b.branch;
    }
    friend bool operator!=(const Vertex& a, const Vertex& b) { return !(a == b); }
    friend bool operator<(const Vertex& a, const Vertex& b) {
        if (a.spine != b.spine) return a.spine < b.spine;
        return a.branch < b.branch;
    }
};

inline Vertex spine_vertex(long long k) { return Vertex{k, {}}; }

inline std::string to_string(const Vertex& v) {
    std::string s = "sigma(" + std::to_string(v.spine) + ")";
    if (!v.branch.empty()) {
        s += "+[";
        for (std::size_t m = 0; m < v.branch.size(); ++m) {
            if (m) s += ",";
            s += std::to_string(v.branch[m]);
        }
        s += "]";
    }
    return s;
}

inline void validate_vertex(const ProblemInstance& inst, const Vertex& v) {
    for (std::size_t m = 0; m < v.branch.size(); ++m) {
        int sym = v.branch[m];
        int hi = (m == 0) ? static_cast<int>(inst.q) - 2 : static_cast<int>(inst.q) - 1;
        if (sym < 0 || sym > hi) {
            throw InvalidParameters("vertex " + to_string(v) + ": branch symbol " +
                                    std::to_string(sym) + " out of range 0.." + std::to_string(hi));
        }
    }
}

inline long long distance(const Vertex& u, const Vertex& v) {
    if (u.spine == v.spine) {
        std::size_t p = 0;
        while (p < u.branch.size() && p < v.branch.size() && u.branch[p] == v.branch[p]) {
            ++p;
        }
        return static_cast<long long>(u.branch.size() - p) +
               static_cast<long long>(v.branch.size() - p);
    }
    long long gap = u.spine < v.spine ? v.spine - u.spine : u.spine - v.spine;
    return static_cast<long long>(u.branch.size()) + gap + static_cast<long long>(v.branch.size());
}

// First step of the geodesic from u to v (u != v).
inline Vertex step_toward(const Vertex& u, const Vertex& v) {
    if (u == v) {
        throw InvalidParameters("step_toward: identical vertices");
    }
    if (u.spine == v.spine) {
        if (u.branch.size() < v.branch.size() &&
            std::equal(u.branch.begin(), u.branch.end(), v.branch.begin())) {
            Vertex next = u;
            next.branch.push_back(v.branch[u.branch.size()]);
            return next;
        }
        Vertex next = u;
        next.branch.pop_back(); // not a prefix of v (or deeper), so back off toward the anchor
        return next;
    }
    if (!u.branch.empty()) {
        Vertex next = u;
        next.branch.pop_back();
        return next;
    }
    return spine_vertex(u.spine + (v.spine > u.spine ? 1 : -1));
}

inline bool adjacent(const Vertex& u, const Vertex& v) { return distance(u, v) == 1; }

inline std::vector<Vertex> neighbors(const ProblemInstance& inst, const Vertex& v) {
    std::vector<Vertex> out;
    out.reserve(static_cast<std::size_t>(inst.q) + 1);
    if (v.branch.empty()) {
        out.push_back(spine_vertex(v.spine - 1));
        out.push_back(spine_vertex(v.spine + 1));
        for (int c = 0; c + 1 < inst.q; ++c) {
            Vertex child = v;
            child.branch.push_back(c);
            out.push_back(child);
        }
    } else {
        Vertex parent = v;
        parent.branch.pop_back();
        out.push_back(parent);
        for (int c = 0; c < inst.q; ++c) {
            Vertex child = v;
            child.branch.push_back(c);
            out.push_back(child);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Edge classification relative to the segment [x, y].
//
// Conventional orientation: Aligned(i) is the directed edge
// (sigma(i), sigma(i+1)); Transverse(i, j) points from depth j toward the
// spine at anchor sigma(i). `reversed` records that the pair handed in runs
// against that convention.
// ---------------------------------------------------------------------------

enum class EdgeKind { aligned, transverse };

struct EdgeClass {
    EdgeKind kind = EdgeKind::aligned;
    long long i = 0;
    long long j = 0; // depth of the deeper endpoint; 0 for aligned classes
    bool reversed = false;

    static EdgeClass make_aligned(long long i, bool reversed = false) {
        return EdgeClass{EdgeKind::aligned, i, 0, reversed};
    }
    static EdgeClass make_transverse(long long i, long long j, bool reversed = false) {
        return EdgeClass{EdgeKind::transverse, i, j, reversed};
    }

    friend bool operator==(const EdgeClass& a, const EdgeClass& b) {
        return a.kind == b.kind && a.i == b.i && a.j == b.j && a.reversed == b.reversed;
    }
    friend bool operator!=(const EdgeClass& a, const EdgeClass& b) { return !(a == b); }
    friend bool operator<(const EdgeClass& a, const EdgeClass& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.i != b.i) return a.i < b.i;
        if (a.j != b.j) return a.j < b.j;
        return a.reversed < b.reversed;
    }
};

inline std::string to_string(const EdgeClass& c) {
    std::string s = c.kind == EdgeKind::aligned
                        ? "Aligned(" + std::to_string(c.i) + ")"
                        : "Transverse(" + std::to_string(c.i) + "," + std::to_string(c.j) + ")";
    if (c.reversed) s += " reversed";
    return s;
}

inline void validate_class(const ProblemInstance& inst, const EdgeClass& cls) {
    validate_instance(inst);
    if (cls.kind == EdgeKind::transverse) {
        if (cls.i < 1 || cls.i > inst.d - 1 || cls.j < 1) {
            throw InvalidParameters("transverse class requires 1 <= i <= d-1 and j >= 1, got i=" +
                                    std::to_string(cls.i) + " j=" + std::to_string(cls.j) +
                                    " with d=" + std::to_string(inst.d));
        }
    }
}

inline EdgeClass classify_edge(const ProblemInstance& inst, const Vertex& u, const Vertex& v) {
    validate_instance(inst);
    validate_vertex(inst, u);
    validate_vertex(inst, v);
    if (!adjacent(u, v)) {
        throw NotAnEdge("classify_edge: " + to_string(u) + " and " + to_string(v) +
                        " are not adjacent");
    }
    const Vertex x = spine_vertex(0);
    const Vertex y = spine_vertex(inst.d);
    const long long dux = distance(u, x), duy = distance(u, y);
    const long long dvx = distance(v, x), dvy = distance(v, y);
    const long long d = inst.d;

    // Both endpoints on the segment itself.
    if (dux + duy == d && dvx + dvy == d) {
        return dux < dvx ? EdgeClass::make_aligned(dux, false)
                         : EdgeClass::make_aligned(dvx, true);
    }
    // Both endpoints behind x (every geodesic to y passes through x). The
    // conventional origin sigma(i), i < 0, is the endpoint farther from x.
    if (duy == dux + d && dvy == dvx + d) {
        return dux > dvx ? EdgeClass::make_aligned(-dux, false)
                         : EdgeClass::make_aligned(-dvx, true);
    }
    // Both endpoints beyond y; the conventional origin is the one nearer y.
    if (dux == duy + d && dvx == dvy + d) {
        return duy < dvy ? EdgeClass::make_aligned(d + duy, false)
                         : EdgeClass::make_aligned(d + dvy, true);
    }
    // Otherwise the edge hangs in a subtree rooted strictly inside the
    // segment: gate = anchor index, depth = distance to the segment.
    const long long gate = (dux - duy + d) / 2;
    const long long ju = (dux + duy - d) / 2;
    const long long jv = (dvx + dvy - d) / 2;
    if (gate < 1 || gate > d - 1) {
        throw ProjectionAtEndpoint("classify_edge: transverse projection lands on gate " +
                                   std::to_string(gate) + " outside 1.." + std::to_string(d - 1));
    }
    return ju > jv ? EdgeClass::make_transverse(gate, ju, false)
                   : EdgeClass::make_transverse(gate, jv, true);
}

// A concrete edge of the requested class, in the handed-in orientation.
inline std::pair<Vertex, Vertex> realize_edge(const ProblemInstance& inst, const EdgeClass& cls) {
    validate_class(inst, cls);
    Vertex o, t;
    if (cls.kind == EdgeKind::aligned) {
        o = spine_vertex(cls.i);
        t = spine_vertex(cls.i + 1);
    } else {
        o = Vertex{cls.i, std::vector<int>(static_cast<std::size_t>(cls.j), 0)};
        t = Vertex{cls.i, std::vector<int>(static_cast<std::size_t>(cls.j - 1), 0)};
    }
    if (cls.reversed) std::swap(o, t);
    return {o, t};
}

// Number of edges in a class (orientation ignored). Valid for d >= 1; for
// d = 0 the aligned/transverse decomposition degenerates.
inline Int count_edges(const ProblemInstance& inst, const EdgeClass& cls) {
    validate_class(inst, cls);
    auto qpow = [&](long long e) {
        Int acc = 1;
        for (long long k = 0; k < e; ++k) acc *= inst.q;
        return acc;
    };
    if (cls.kind == EdgeKind::transverse) {
        return (inst.q - 1) * qpow(cls.j - 1);
    }
    if (cls.i < 0) return qpow(-cls.i);
    if (cls.i < inst.d) return 1;
    return qpow(cls.i - inst.d + 1);
}

// ---------------------------------------------------------------------------
// Shadows: Omega_base(interior) = ends whose ray from `base` passes through
// `interior`. Internally a shadow is the directed cut (w -> z): removing the
// edge {w, z} leaves the component of z, whose ends form the shadow.
// ---------------------------------------------------------------------------

struct Shadow {
    Vertex base;
    Vertex interior;
};

struct DirectedCut {
    Vertex w; // outside endpoint (toward the base)
    Vertex z; // subtree side
};

inline DirectedCut cut_of(const Shadow& s) {
    if (s.base == s.interior) {
        throw InvalidParameters("shadow: base and interior must differ");
    }
    return DirectedCut{step_toward(s.interior, s.base), s.interior};
}

inline bool in_subtree(const Vertex& v, const DirectedCut& c) {
    return distance(v, c.w) == distance(v, c.z) + 1;
}

enum class ShadowRelation {
    equal,
    first_inside_second,
    second_inside_first,
    disjoint,
    complement_overlap, // union is the whole boundary, intersection is proper
};

inline ShadowRelation shadow_relation(const Shadow& s1, const Shadow& s2) {
    const DirectedCut c1 = cut_of(s1), c2 = cut_of(s2);
    const bool same_edge = (c1.w == c2.w && c1.z == c2.z) || (c1.w == c2.z && c1.z == c2.w);
    if (same_edge) {
        return c1.z == c2.z ? ShadowRelation::equal : ShadowRelation::disjoint;
    }
    // Distinct cut edges: each lies wholly on one side of the other, so one
    // endpoint probe per cut decides containment.
    const bool second_in_first = in_subtree(c2.z, c1);
    const bool first_in_second = in_subtree(c1.z, c2);
    if (second_in_first && first_in_second) return ShadowRelation::complement_overlap;
    if (second_in_first) return ShadowRelation::second_inside_first;
    if (first_in_second) return ShadowRelation::first_inside_second;
    return ShadowRelation::disjoint;
}

// ---------------------------------------------------------------------------
// Enumeration helpers (spheres around x; all edges near the segment). These
// power the brute-force cross-checks.
// ---------------------------------------------------------------------------

namespace detail {
inline void enum_branches(const ProblemInstance& inst, Vertex& cur, long long depth_left,
                          const std::function<void(const Vertex&)>& fn) {
    if (depth_left == 0) {
        fn(cur);
        return;
    }
    int hi = cur.branch.empty() ? static_cast<int>(inst.q) - 2 : static_cast<int>(inst.q) - 1;
    for (int c = 0; c <= hi; ++c) {
        cur.branch.push_back(c);
        enum_branches(inst, cur, depth_left - 1, fn);
        cur.branch.pop_back();
    }
}
} // namespace detail

// All vertices at distance exactly R from x = sigma(0); R >= 0.
inline std::vector<Vertex> sphere_vertices(const ProblemInstance& inst, long long R) {
    validate_instance(inst);
    if (R < 0) {
        throw InvalidParameters("sphere_vertices: negative radius");
    }
    std::vector<Vertex> out;
    if (R == 0) {
        out.push_back(spine_vertex(0));
        return out;
    }
    for (long long s = -R; s <= R; ++s) {
        long long depth = R - (s < 0 ? -s : s);
        Vertex anchor = spine_vertex(s);
        if (depth == 0) {
            out.push_back(anchor);
        } else {
            detail::enum_branches(inst, anchor, depth,
                                  [&](const Vertex& v) { out.push_back(v); });
        }
    }
    return out;
}

// Distance from v to the segment [x, y].
inline long long distance_to_segment(const ProblemInstance& inst, const Vertex& v) {
    long long spread = std::max<long long>({0, -v.spine, v.spine - inst.d});
    return spread + static_cast<long long>(v.branch.size());
}

namespace detail {
inline void emit_subtree_edges(const ProblemInstance& inst, Vertex& v, long long depth_left,
                               const std::function<void(const Vertex&, const Vertex&)>& fn) {
    int hi = v.branch.empty() ? static_cast<int>(inst.q) - 2 : static_cast<int>(inst.q) - 1;
    for (int c = 0; c <= hi; ++c) {
        v.branch.push_back(c);
        Vertex child = v;
        v.branch.pop_back();
        fn(v, child);
        if (depth_left > 0) {
            v.branch.push_back(c);
            emit_subtree_edges(inst, v, depth_left - 1, fn);
            v.branch.pop_back();
        }
    }
}
} // namespace detail

// Every geometric edge whose nearer endpoint is within distance W of the
// segment, each exactly once. Order: spine edges first, then hanging
// subtrees anchor by anchor.
inline void for_each_edge_near_segment(const ProblemInstance& inst, long long W,
                                       const std::function<void(const Vertex&, const Vertex&)>& fn) {
    validate_instance(inst);
    if (W < 0) {
        throw InvalidParameters("for_each_edge_near_segment: negative window");
    }
    for (long long s = -(W + 1); s <= inst.d + W; ++s) {
        fn(spine_vertex(s), spine_vertex(s + 1));
    }
    for (long long a = -W; a <= inst.d + W; ++a) {
        Vertex anchor = spine_vertex(a);
        long long budget = W - distance_to_segment(inst, anchor);
        detail::emit_subtree_edges(inst, anchor, budget, fn);
    }
}

// All vertices within distance W of the segment (used for harmonicity sweeps).
inline std::vector<Vertex> vertices_near_segment(const ProblemInstance& inst, long long W) {
    validate_instance(inst);
    std::vector<Vertex> out;
    for (long long a = -W; a <= inst.d + W; ++a) {
        Vertex anchor = spine_vertex(a);
        long long budget = W - distance_to_segment(inst, anchor);
        for (long long depth = 0; depth <= budget; ++depth) {
            detail::enum_branches(inst, anchor, depth,
                                  [&](const Vertex& v) { out.push_back(v); });
        }
    }
    return out;
}

} // namespace bpt
