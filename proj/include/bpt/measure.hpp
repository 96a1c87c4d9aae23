#pragma once

// Boundary measures: the visual measure seen from a vertex, the signed
// difference measure attached to a directed edge, and the closed-form cell
// weights used to integrate against it. All values are exact rationals.

#include <string>
#include <utility>

#include "errors.hpp"
#include "rational.hpp"
#include "tree.hpp"

namespace bpt {

namespace detail {

// Pointwise geometric weights; the kernel module builds the full piecewise
// objects, these are the two point values the cell formulas need.
inline Rational g_half_at(long long q, long long k) {
    if (k <= 0) return int_pow(q, k);
    return -int_pow(q, -(k - 1));
}

inline Rational h_at(long long q, long long k) {
    if (k == 0) return Rational(0);
    long long a = k < 0 ? -k : k;
    return int_pow(q, -(a - 1));
}

} // namespace detail

// nu_base(Omega_base(interior)) = 1 / (q^{n-1} (q+1)), n = d(base, interior).
// The handed-in base must be the shadow's own base point.
inline Rational visual_measure(const ProblemInstance& inst, const Vertex& base,
                               const Shadow& shadow) {
    validate_instance(inst);
    if (!(base == shadow.base)) {
        throw BaseMismatch("visual_measure: basepoint " + to_string(base) +
                           " is not the shadow's base " + to_string(shadow.base));
    }
    long long n = distance(shadow.base, shadow.interior);
    if (n < 1) {
        throw InvalidParameters("visual_measure: shadow needs base != interior");
    }
    return Rational(1) / (int_pow(inst.q, n - 1) * Rational(inst.q + 1));
}

// nu_u(shadow) for an arbitrary basepoint u: the shadow subtree either does
// not contain u (a plain shadow seen from u) or contains it (complement of
// the reversed shadow).
inline Rational visual_measure_general(const ProblemInstance& inst, const Vertex& u,
                                       const Shadow& shadow) {
    validate_instance(inst);
    const DirectedCut c = cut_of(shadow);
    if (in_subtree(u, c)) {
        long long m = distance(u, c.w);
        return Rational(1) - Rational(1) / (int_pow(inst.q, m - 1) * Rational(inst.q + 1));
    }
    long long m = distance(u, c.z);
    return Rational(1) / (int_pow(inst.q, m - 1) * Rational(inst.q + 1));
}

// dnu_x / dnu_y takes the value q^level on the Busemann level set `level`;
// admissible levels for a segment of length d are d-2k, k = 0..d.
inline Rational radon_nikodym(const ProblemInstance& inst, long long level) {
    validate_instance(inst);
    long long a = level < 0 ? -level : level;
    if (a > inst.d || ((level - inst.d) % 2) != 0) {
        throw InvalidLevel("radon_nikodym: level " + std::to_string(level) +
                           " not of the form d-2k for d=" + std::to_string(inst.d));
    }
    return int_pow(inst.q, level);
}

namespace detail {

// nu_o(S ∩ Omega) resolved through the lattice relation of the two shadows.
inline Rational measure_of_intersection(const ProblemInstance& inst, const Vertex& basepoint,
                                        const Shadow& s, const Shadow& omega) {
    switch (shadow_relation(s, omega)) {
        case ShadowRelation::equal:
        case ShadowRelation::first_inside_second:
            return visual_measure_general(inst, basepoint, s);
        case ShadowRelation::second_inside_first:
            return visual_measure_general(inst, basepoint, omega);
        case ShadowRelation::disjoint:
            return Rational(0);
        case ShadowRelation::complement_overlap:
            return visual_measure_general(inst, basepoint, s) +
                   visual_measure_general(inst, basepoint, omega) - Rational(1);
    }
    throw Error("measure_of_intersection: unreachable");
}

} // namespace detail

// Signed edge measure nu_e(S) for the directed edge e = (o, t):
//   nu_e(S) = (q+1)/q * nu_o(S ∩ Omega_e^+)  -  (q+1) * nu_o(S ∩ Omega_e^-)
// with Omega_e^+ = Omega_t(o) (ends behind the origin) and
// Omega_e^- = Omega_o(t) (ends past the terminus).
inline Rational edge_measure_shadow(const ProblemInstance& inst, const Vertex& o, const Vertex& t,
                                    const Shadow& s) {
    validate_instance(inst);
    if (!adjacent(o, t)) {
        throw NotAnEdge("edge_measure_shadow: " + to_string(o) + " -> " + to_string(t));
    }
    const Shadow plus{t, o};
    const Shadow minus{o, t};
    const Rational mp = detail::measure_of_intersection(inst, o, s, plus);
    const Rational mm = detail::measure_of_intersection(inst, o, s, minus);
    return ratio(Int(inst.q + 1), Int(inst.q)) * mp - Rational(inst.q + 1) * mm;
}

// nu_e(A ∩ B) for two shadows; the building block for cell-by-cell checks.
inline Rational edge_measure_intersection(const ProblemInstance& inst, const Vertex& o,
                                          const Vertex& t, const Shadow& a, const Shadow& b) {
    switch (shadow_relation(a, b)) {
        case ShadowRelation::equal:
        case ShadowRelation::first_inside_second:
            return edge_measure_shadow(inst, o, t, a);
        case ShadowRelation::second_inside_first:
            return edge_measure_shadow(inst, o, t, b);
        case ShadowRelation::disjoint:
            return Rational(0);
        case ShadowRelation::complement_overlap:
            // nu_e of the full boundary vanishes, so inclusion-exclusion
            // reduces to the sum.
            return edge_measure_shadow(inst, o, t, a) + edge_measure_shadow(inst, o, t, b);
    }
    throw Error("edge_measure_intersection: unreachable");
}

// Total mass of the positive (resp. negative) part of nu_e; both equal 1 for
// every edge, which the tests verify rather than assume.
inline Rational edge_measure_positive_mass(const ProblemInstance& inst, const Vertex& o,
                                           const Vertex& t) {
    validate_instance(inst);
    if (!adjacent(o, t)) {
        throw NotAnEdge("edge_measure_positive_mass: not an edge");
    }
    return ratio(Int(inst.q + 1), Int(inst.q)) *
           visual_measure_general(inst, o, Shadow{t, o});
}

inline Rational edge_measure_negative_mass(const ProblemInstance& inst, const Vertex& o,
                                           const Vertex& t) {
    validate_instance(inst);
    if (!adjacent(o, t)) {
        throw NotAnEdge("edge_measure_negative_mass: not an edge");
    }
    return Rational(inst.q + 1) * visual_measure_general(inst, o, Shadow{o, t});
}

// Closed form for nu_e(Omega^sigma_k), e the conventional Aligned(i) edge:
// the spine cell at sigma(k) carries weight (q-1)/q * g_half(k - i).
inline Rational spine_cell_measure(const ProblemInstance& inst, long long i, long long k) {
    validate_instance(inst);
    return ratio(Int(inst.q - 1), Int(inst.q)) * detail::g_half_at(inst.q, k - i);
}

// Closed form for nu_e(Omega^sigma_k ∩ Omega^tau_l), e the conventional
// Transverse(i, j) edge. Off-gate, off-depth cells vanish; the gate row and
// depth column factor through g_half and h; the corner carries (q-3)/q.
inline Rational cross_cell_measure(const ProblemInstance& inst, long long i, long long j,
                                   long long k, long long l) {
    validate_class(inst, EdgeClass::make_transverse(i, j));
    const Rational gh_j = detail::g_half_at(inst.q, j);
    if (k == i && l == j) {
        return ratio(Int(inst.q - 3), Int(inst.q)) * gh_j;
    }
    if (k == i) {
        return ratio(Int(inst.q - 1), Int(inst.q)) * detail::g_half_at(inst.q, l);
    }
    if (l == j) {
        return ratio(Int(inst.q - 1), Int(inst.q)) * gh_j * ratio(Int(1), Int(inst.q)) *
               detail::h_at(inst.q, k - i);
    }
    return Rational(0);
}

} // namespace bpt
