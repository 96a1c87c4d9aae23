#pragma once

// The transform of the segment cocycle against a directed edge, computed by
// three independent routes:
//
//   * series     — the integration formulae, summed exactly over Z;
//   * rearranged — endpoint-averaged spherical rearrangement (aligned) and
//                  the closed form with its internal rearrangement identity
//                  (transverse);
//   * geometric  — integration of the level-set decomposition of the cocycle
//                  against the signed edge measure, straight from shadows.
//
// Route agreement is a theorem; the test suite and the verification harness
// treat any disagreement as a failure witness.

#include <map>
#include <utility>

#include "errors.hpp"
#include "kernel.hpp"
#include "measure.hpp"
#include "rational.hpp"
#include "tree.hpp"

namespace bpt {

// P(i) via the pairing (q-1)/q * <f, tau_i g_half>.
inline Rational value_aligned_series(const ProblemInstance& inst, long long i) {
    validate_instance(inst);
    return ratio(Int(inst.q - 1), Int(inst.q)) *
           pairing(make_f(inst), translate(make_g_half(inst), i));
}

// P(i) via the endpoint average: 2(q-1)/q * || T_i f * g_half ||_{l1, k>=1}.
inline Rational value_aligned_rearranged(const ProblemInstance& inst, long long i) {
    validate_instance(inst);
    Rational n = l1_norm_positives(multiply(average_endpoints(inst, i), make_g_half(inst)));
    return Rational(2) * ratio(Int(inst.q - 1), Int(inst.q)) * n;
}

// P(i, j) via the pairing -(2/q) f(i) g_half(j) + (q-1)/q^2 g_half(j) <f, tau_i h>.
inline Rational value_transverse_series(const ProblemInstance& inst, long long i, long long j) {
    validate_class(inst, EdgeClass::make_transverse(i, j));
    const Kernel f = make_f(inst);
    const Rational fi = evaluate(f, i);
    const Rational ghj = detail::g_half_at(inst.q, j);
    const Rational inner = pairing(f, translate(make_h(inst), i));
    return -ratio(2, inst.q) * fi * ghj +
           ratio(Int(inst.q - 1), Int(inst.q) * Int(inst.q)) * ghj * inner;
}

// P(i, j) in closed form, reduced to 1 <= i <= d/2 by the antisymmetry
// P(d - i, j) = -P(i, j). The closed form is checked on every call against
// the endpoint-difference rearrangement it was derived from.
inline Rational value_transverse_closed(const ProblemInstance& inst, long long i, long long j) {
    validate_class(inst, EdgeClass::make_transverse(i, j));
    long long i0 = i;
    int sign = 1;
    if (2 * i > inst.d) {
        i0 = inst.d - i;
        sign = -1;
    }
    const Rational fi0 = evaluate(make_f(inst), i0);
    const Rational ghj = detail::g_half_at(inst.q, j);
    const Rational q1 = Rational(inst.q - 1);

    const Rational closed = -Rational(2) * int_pow(inst.q, -i0) / q1 * ghj *
                            (Rational(1) - pow_rational(Rational(inst.q),
                                                        -numerator(fi0).convert_to<long long>()));

    // Rearrangement identity: P(i0, j) = 2(q-1)/q^2 * g_half(j) * Sigma(i0)
    // with Sigma = || T~_{i0} f * h ||_{l1, k>=1} - q f(i0)/(q-1).
    const Rational delta =
        l1_norm_positives(multiply(average_endpoints_diff(inst, i0), make_h(inst)));
    const Rational sigma = delta - Rational(inst.q) * fi0 / q1;
    const Rational via_rearranged =
        Rational(2) * q1 / Rational(inst.q * inst.q) * ghj * sigma;
    if (closed != via_rearranged) {
        throw Error("transverse closed form disagrees with its rearrangement at i=" +
                    std::to_string(i0) + " j=" + std::to_string(j));
    }
    return sign > 0 ? closed : Rational(-closed);
}

// Dispatchers honoring the orientation flag.
inline Rational transform_series(const ProblemInstance& inst, const EdgeClass& cls) {
    Rational v = cls.kind == EdgeKind::aligned ? value_aligned_series(inst, cls.i)
                                               : value_transverse_series(inst, cls.i, cls.j);
    return cls.reversed ? Rational(-v) : v;
}

inline Rational transform_rearranged(const ProblemInstance& inst, const EdgeClass& cls) {
    Rational v = cls.kind == EdgeKind::aligned ? value_aligned_rearranged(inst, cls.i)
                                               : value_transverse_closed(inst, cls.i, cls.j);
    return cls.reversed ? Rational(-v) : v;
}

// Level-set route: realize a concrete edge of the class (in the handed-in
// orientation) and integrate the cocycle's level decomposition against the
// signed edge measure. No kernel machinery involved.
inline Rational transform_geometric(const ProblemInstance& inst, const EdgeClass& cls) {
    validate_class(inst, cls);
    if (inst.d == 0) return Rational(0);
    auto [o, t] = realize_edge(inst, cls);
    const long long d = inst.d;

    // w[k] = nu_e(Omega_x(sigma(k))), the nested tail shadows along the segment.
    std::vector<Rational> w(static_cast<std::size_t>(d) + 1);
    for (long long k = 1; k <= d; ++k) {
        w[static_cast<std::size_t>(k)] =
            edge_measure_shadow(inst, o, t, Shadow{spine_vertex(k - 1), spine_vertex(k)});
    }
    // Total signed mass, computed (not assumed zero).
    const Rational total =
        edge_measure_positive_mass(inst, o, t) - edge_measure_negative_mass(inst, o, t);

    Rational acc = Rational(d) * (total - w[1]); // level set behind x carries value d
    for (long long k = 1; k < d; ++k) {
        acc += Rational(d - 2 * k) *
               (w[static_cast<std::size_t>(k)] - w[static_cast<std::size_t>(k + 1)]);
    }
    acc += Rational(-d) * w[static_cast<std::size_t>(d)];
    return acc;
}

// Printed envelope for |transform| per class; orientation-independent.
inline Rational per_edge_bound(const ProblemInstance& inst, const EdgeClass& cls) {
    validate_class(inst, cls);
    const Rational c = ratio(Int(2), Int(inst.q - 1));
    if (cls.kind == EdgeKind::aligned) {
        if (cls.i < 0) return c * int_pow(inst.q, -(-cls.i - 1));
        if (cls.i < inst.d) return ratio(Int(2) * Int(inst.q + 1), Int(inst.q - 1));
        return c * int_pow(inst.q, -(cls.i - inst.d - 1));
    }
    if (2 * cls.i <= inst.d) return c * int_pow(inst.q, -(cls.i + cls.j - 1));
    return c * int_pow(inst.q, -(inst.d - cls.i + cls.j - 1));
}

// Integrate a function that is constant on each depth-R shadow around x
// against the edge measure. `values` maps each vertex u on the R-sphere to
// the constant on Omega_x(u).
inline Rational transform_locally_constant(const ProblemInstance& inst, long long R,
                                           const std::map<Vertex, Rational>& values,
                                           const EdgeClass& cls) {
    validate_class(inst, cls);
    if (R < 1) {
        throw InvalidParameters("transform_locally_constant: radius must be >= 1");
    }
    auto [o, t] = realize_edge(inst, cls);
    const Vertex x = spine_vertex(0);
    Rational acc(0);
    for (const Vertex& u : sphere_vertices(inst, R)) {
        auto it = values.find(u);
        if (it == values.end()) {
            throw IncompleteCover("transform_locally_constant: no value on shadow at " +
                                  to_string(u));
        }
        acc += it->second * edge_measure_shadow(inst, o, t, Shadow{x, u});
    }
    return acc;
}

// The cocycle's own depth-R sampling: constant d - 2*clamp(anchor, 0, d) on
// the shadow of each R-sphere vertex. Exactly locally constant once R >= d.
inline std::map<Vertex, Rational> busemann_profile(const ProblemInstance& inst, long long R) {
    validate_instance(inst);
    std::map<Vertex, Rational> out;
    for (const Vertex& u : sphere_vertices(inst, R)) {
        long long a = std::max<long long>(0, std::min(u.spine, inst.d));
        out[u] = Rational(inst.d - 2 * a);
    }
    return out;
}

} // namespace bpt
