#pragma once

// The squared l2-norm of the transform over all directed edges, its growth
// bounds, the two-point growth-identity fit, brute-force windowed
// cross-checks, and the verification suite the CLI exposes.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "poisson.hpp"
#include "rational.hpp"
#include "tree.hpp"

namespace bpt {

namespace detail {

// sum_{m >= m0} q^m P(-m)^2 : the left aligned tail. The geometric ratio is
// extracted by exact division and its constancy verified over five
// consecutive indices before the closed form is trusted.
inline Rational aligned_left_tail(const ProblemInstance& inst, long long m0) {
    const Rational p0 = value_aligned_series(inst, -m0);
    if (p0 == 0) {
        throw Error("aligned left tail: vanishing head value at i=" + std::to_string(-m0));
    }
    const Rational rho = value_aligned_series(inst, -(m0 + 1)) / p0;
    for (long long t = 1; t <= 5; ++t) {
        if (value_aligned_series(inst, -(m0 + t + 1)) !=
            rho * value_aligned_series(inst, -(m0 + t))) {
            throw Error("aligned left tail: ratio not constant at i=" +
                        std::to_string(-(m0 + t + 1)));
        }
    }
    const Rational r = Rational(inst.q) * rho * rho;
    if (!(r < 1)) {
        throw NotSummable("aligned left tail: weighted ratio >= 1");
    }
    return int_pow(inst.q, m0) * p0 * p0 / (Rational(1) - r);
}

// sum_{m >= m0} q^{m+1} P(d+m)^2 : the right aligned tail.
inline Rational aligned_right_tail(const ProblemInstance& inst, long long m0) {
    const Rational p0 = value_aligned_series(inst, inst.d + m0);
    if (p0 == 0) {
        throw Error("aligned right tail: vanishing head value at i=" +
                    std::to_string(inst.d + m0));
    }
    const Rational rho = value_aligned_series(inst, inst.d + m0 + 1) / p0;
    for (long long t = 1; t <= 5; ++t) {
        if (value_aligned_series(inst, inst.d + m0 + t + 1) !=
            rho * value_aligned_series(inst, inst.d + m0 + t)) {
            throw Error("aligned right tail: ratio not constant at i=" +
                        std::to_string(inst.d + m0 + t + 1));
        }
    }
    const Rational r = Rational(inst.q) * rho * rho;
    if (!(r < 1)) {
        throw NotSummable("aligned right tail: weighted ratio >= 1");
    }
    return int_pow(inst.q, m0 + 1) * p0 * p0 / (Rational(1) - r);
}

// sum_{j >= j0} n(i,j) P(i,j)^2 for one gate i; the j-decay is g_half's
// ratio 1/q, verified over five consecutive depths.
inline Rational transverse_row_tail(const ProblemInstance& inst, long long i, long long j0) {
    const Rational p1 = value_transverse_closed(inst, i, 1);
    if (p1 == 0) {
        for (long long j = 2; j <= 6; ++j) {
            if (value_transverse_closed(inst, i, j) != 0) {
                throw Error("transverse row: zero head but nonzero depth value at i=" +
                            std::to_string(i));
            }
        }
        return Rational(0);
    }
    const Rational rho = ratio(1, inst.q);
    for (long long j = 1; j <= 5; ++j) {
        if (value_transverse_closed(inst, i, j + 1) !=
            rho * value_transverse_closed(inst, i, j)) {
            throw Error("transverse row: depth ratio not 1/q at i=" + std::to_string(i) +
                        " j=" + std::to_string(j + 1));
        }
    }
    // closed geometric sum: n(i,j) P(i,j)^2 = (q-1) P(i,1)^2 q^{-(j-1)}
    return Rational(inst.q) * p1 * p1 * int_pow(inst.q, -(j0 - 1));
}

} // namespace detail

// || transform ||^2 over all directed edges, exact.
inline Rational norm_squared(const ProblemInstance& inst) {
    validate_instance(inst);
    if (inst.d == 0) return Rational(0);
    Rational acc(0);
    for (long long i = 0; i < inst.d; ++i) {
        const Rational p = value_aligned_series(inst, i);
        acc += p * p;
    }
    acc += detail::aligned_left_tail(inst, 1);
    acc += detail::aligned_right_tail(inst, 0);
    for (long long i = 1; i <= inst.d - 1; ++i) {
        acc += detail::transverse_row_tail(inst, i, 1);
    }
    return Rational(2) * acc;
}

struct NormBounds {
    Rational lower; // 4d
    Rational upper; // C d + K
};

inline Rational growth_slope_constant(long long q) {
    // C = 8 (q+1)^2 / (q-1)^2
    return Rational(8) * Rational(q + 1) * Rational(q + 1) /
           (Rational(q - 1) * Rational(q - 1));
}

inline Rational growth_offset_constant(long long q) {
    // K = 16 q^2 (2q+1) / ((q-1)^3 (q+1))
    return Rational(16) * Rational(q) * Rational(q) * Rational(2 * q + 1) /
           (Rational(q - 1) * Rational(q - 1) * Rational(q - 1) * Rational(q + 1));
}

inline NormBounds theorem_bounds(const ProblemInstance& inst) {
    validate_instance(inst);
    return NormBounds{Rational(4) * Rational(inst.d),
                      growth_slope_constant(inst.q) * Rational(inst.d) +
                          growth_offset_constant(inst.q)};
}

struct GrowthFit {
    Rational c_prime;
    Rational k_prime;
};

// Fit norm^2(d) = C' d - K'(1 - q^{-d}) on d = 1, 2.
inline GrowthFit fit_growth_identity(long long q) {
    validate_instance(ProblemInstance{q, 0});
    const Rational n1 = norm_squared(ProblemInstance{q, 1});
    const Rational n2 = norm_squared(ProblemInstance{q, 2});
    const Rational a1 = Rational(1) - int_pow(q, -1);
    const Rational a2 = Rational(1) - int_pow(q, -2);
    // | 1  -a1 | (C')   (n1)
    // | 2  -a2 | (K') = (n2)
    const Rational det = -a2 + Rational(2) * a1;
    if (det == 0) {
        throw SingularSystem("growth identity fit: degenerate two-point system");
    }
    GrowthFit fit;
    fit.c_prime = (-a2 * n1 + a1 * n2) / det;
    fit.k_prime = (n2 - Rational(2) * n1) / det;
    return fit;
}

inline Rational growth_identity_prediction(const GrowthFit& fit, long long q, long long d) {
    return fit.c_prime * Rational(d) - fit.k_prime * (Rational(1) - int_pow(q, -d));
}

struct NormReport {
    long long d = 0;
    Rational norm_sq;
    Rational lower;
    Rational upper;
    Rational gj_prediction;
    Rational gj_residual;
};

inline std::vector<NormReport> norm_table(long long q, long long d_max) {
    if (d_max < 1) {
        throw InvalidParameters("norm table: d_max must be >= 1");
    }
    const GrowthFit fit = fit_growth_identity(q);
    std::vector<NormReport> rows;
    rows.reserve(static_cast<std::size_t>(d_max));
    for (long long d = 1; d <= d_max; ++d) {
        const ProblemInstance inst{q, d};
        NormReport row;
        row.d = d;
        row.norm_sq = norm_squared(inst);
        const NormBounds nb = theorem_bounds(inst);
        row.lower = nb.lower;
        row.upper = nb.upper;
        row.gj_prediction = growth_identity_prediction(fit, q, d);
        row.gj_residual = row.norm_sq - row.gj_prediction;
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Windowed brute force: enumerate, classify and tally every edge whose
// nearer endpoint is within W of the segment, then sum the per-class value
// squares (both orientations).
// ---------------------------------------------------------------------------

inline Rational norm_squared_windowed(const ProblemInstance& inst, long long W) {
    validate_instance(inst);
    std::map<EdgeClass, long long> tally;
    for_each_edge_near_segment(inst, W, [&](const Vertex& u, const Vertex& v) {
        EdgeClass c = classify_edge(inst, u, v);
        c.reversed = false;
        ++tally[c];
    });
    Rational acc(0);
    for (const auto& [cls, n] : tally) {
        const Rational val = transform_series(inst, cls);
        acc += Rational(n) * val * val;
    }
    return Rational(2) * acc;
}

// Exact mass of the classes excluded by window W (closed geometric tails).
inline Rational norm_tail_exact(const ProblemInstance& inst, long long W) {
    validate_instance(inst);
    if (inst.d == 0) return Rational(0);
    Rational acc = detail::aligned_left_tail(inst, W + 2);
    acc += detail::aligned_right_tail(inst, W + 1);
    for (long long i = 1; i <= inst.d - 1; ++i) {
        acc += detail::transverse_row_tail(inst, i, W + 2);
    }
    return Rational(2) * acc;
}

// Upper bound on that excluded mass from the printed per-class envelopes
// and the class counts; independent of any computed transform value.
inline Rational norm_tail_envelope(const ProblemInstance& inst, long long W) {
    validate_instance(inst);
    const long long q = inst.q;
    const Rational c2 = Rational(4) / (Rational(q - 1) * Rational(q - 1));
    // left: sum_{m >= W+2} q^m (2/(q-1))^2 q^{-2(m-1)}
    const Rational geo = Rational(q) / Rational(q - 1); // sum_{t>=0} q^{-t}
    const Rational left = c2 * int_pow(q, 2) * int_pow(q, -(W + 2)) * geo;
    // right: sum_{m >= W+1} q^{m+1} (2/(q-1))^2 q^{-2(m-1)}
    const Rational right = c2 * int_pow(q, 3) * int_pow(q, -(W + 1)) * geo;
    // transverse: sum_i sum_{j >= W+2} (q-1) q^{j-1} (2/(q-1))^2 q^{-2(min(i,d-i)+j-1)}
    Rational trans(0);
    for (long long i = 1; i <= inst.d - 1; ++i) {
        const long long m = std::min(i, inst.d - i);
        trans += c2 * Rational(q - 1) * int_pow(q, -2 * m) * int_pow(q, -(W + 1)) * geo;
    }
    return Rational(2) * (left + right + trans);
}

// ---------------------------------------------------------------------------
// Verification suite.
// ---------------------------------------------------------------------------

struct CheckResult {
    std::string name;
    long long passes = 0;
    long long failures = 0;
    std::string witness; // first failure, as "q=.. d=.. i=.. j=..: detail"

    bool ok() const { return failures == 0; }
};

// Knobs for negative controls: each scales or replaces one constant so the
// suite's sensitivity can be demonstrated; all default to the true values.
struct VerifyOptions {
    std::optional<std::string> suite;      // run a single named check
    Rational theorem_k_scale{1};           // scales K in the upper bound
    Rational gj_k_prime_scale{1};          // scales the fitted K'
    Rational edge_bound_scale{1};          // scales the per-edge envelope
    std::optional<Rational> g_half_at_one; // overrides g_half(1) in the series route
};

inline const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names = {
        "routes",     "symmetry",    "harmonicity", "alternation", "edge-bounds",
        "spine-lower", "t-envelope", "norm-bounds", "gj"};
    return names;
}

namespace detail {

struct CheckContext {
    CheckResult result;

    void pass() { ++result.passes; }
    void fail(const std::string& w) {
        if (result.failures == 0) result.witness = w;
        ++result.failures;
    }
    void check(bool ok, const std::function<std::string()>& w) {
        if (ok) {
            pass();
        } else {
            fail(w());
        }
    }
};

inline std::string witness_prefix(long long q, long long d, long long i, long long j) {
    return "q=" + std::to_string(q) + " d=" + std::to_string(d) + " i=" + std::to_string(i) +
           " j=" + std::to_string(j);
}

// Series value with the optional g_half(1) override threaded in.
inline Rational mutated_aligned_series(const ProblemInstance& inst, long long i,
                                       const VerifyOptions& opts) {
    if (!opts.g_half_at_one) return value_aligned_series(inst, i);
    Kernel gh = make_g_half(inst);
    gh.overrides[1] = *opts.g_half_at_one;
    return ratio(Int(inst.q - 1), Int(inst.q)) * pairing(make_f(inst), translate(gh, i));
}

inline Rational mutated_transverse_series(const ProblemInstance& inst, long long i, long long j,
                                          const VerifyOptions& opts) {
    if (!opts.g_half_at_one) return value_transverse_series(inst, i, j);
    Kernel gh = make_g_half(inst);
    gh.overrides[1] = *opts.g_half_at_one;
    const Kernel f = make_f(inst);
    const Rational fi = evaluate(f, i);
    const Rational ghj = evaluate(gh, j);
    const Rational inner = pairing(f, translate(make_h(inst), i));
    return -ratio(2, inst.q) * fi * ghj +
           ratio(Int(inst.q - 1), Int(inst.q) * Int(inst.q)) * ghj * inner;
}

} // namespace detail

// Run the named checks for every d in 1..d_max (transverse parts from d=2).
// Failures carry a witness; they are data, not exceptions.
inline std::vector<CheckResult> verify_suite(long long q, long long d_max,
                                             const VerifyOptions& opts = {}) {
    validate_instance(ProblemInstance{q, 0});
    if (d_max < 1) {
        throw InvalidParameters("verify: d_max must be >= 1");
    }
    if (opts.suite) {
        const auto& names = verify_suite_names();
        if (std::find(names.begin(), names.end(), *opts.suite) == names.end()) {
            throw InvalidParameters("verify: unknown suite '" + *opts.suite + "'");
        }
    }
    auto wants = [&](const char* name) { return !opts.suite || *opts.suite == name; };
    std::vector<CheckResult> out;

    if (wants("routes")) {
        detail::CheckContext cx;
        cx.result.name = "routes";
        for (long long d = 1; d <= d_max; ++d) {
            const ProblemInstance inst{q, d};
            for (long long i = -6; i <= d + 6; ++i) {
                const Rational a = detail::mutated_aligned_series(inst, i, opts);
                const Rational b = value_aligned_rearranged(inst, i);
                const Rational c = transform_geometric(inst, EdgeClass::make_aligned(i));
                cx.check(a == b && b == c, [&] {
                    return detail::witness_prefix(q, d, i, 0) + ": series=" + fraction_string(a) +
                           " rearranged=" + fraction_string(b) +
                           " geometric=" + fraction_string(c);
                });
            }
            for (long long i = 1; i <= d - 1; ++i) {
                for (long long j = 1; j <= 6; ++j) {
                    const Rational a = detail::mutated_transverse_series(inst, i, j, opts);
                    const Rational b = value_transverse_closed(inst, i, j);
                    const Rational c =
                        transform_geometric(inst, EdgeClass::make_transverse(i, j));
                    cx.check(a == b && b == c, [&] {
                        return detail::witness_prefix(q, d, i, j) +
                               ": series=" + fraction_string(a) +
                               " closed=" + fraction_string(b) +
                               " geometric=" + fraction_string(c);
                    });
                }
            }
        }
        out.push_back(cx.result);
    }

    if (wants("symmetry")) {
        detail::CheckContext cx;
        cx.result.name = "symmetry";
        for (long long d = 1; d <= d_max; ++d) {
            const ProblemInstance inst{q, d};
            for (long long i = -6; i <= d + 6; ++i) {
                const Rational lhs = value_aligned_series(inst, i);
                const Rational rhs = value_aligned_series(inst, d - 1 - i);
                cx.check(lhs == rhs, [&] {
                    return detail::witness_prefix(q, d, i, 0) + ": P(i)=" + fraction_string(lhs) +
                           " P(d-1-i)=" + fraction_string(rhs);
                });
            }
            for (long long i = 1; i <= d - 1; ++i) {
                for (long long j = 1; j <= 6; ++j) {
                    const Rational lhs = value_transverse_series(inst, i, j);
                    const Rational rhs = value_transverse_series(inst, d - i, j);
                    cx.check(lhs == -rhs, [&] {
                        return detail::witness_prefix(q, d, i, j) +
                               ": P(i,j)=" + fraction_string(lhs) +
                               " P(d-i,j)=" + fraction_string(rhs);
                    });
                }
            }
        }
        out.push_back(cx.result);
    }

    if (wants("harmonicity")) {
        detail::CheckContext cx;
        cx.result.name = "harmonicity";
        for (long long d = 1; d <= d_max; ++d) {
            const ProblemInstance inst{q, d};
            std::map<EdgeClass, Rational> cache;
            auto edge_value = [&](const Vertex& a, const Vertex& b) {
                EdgeClass cls = classify_edge(inst, a, b);
                const bool rev = cls.reversed;
                cls.reversed = false;
                auto it = cache.find(cls);
                if (it == cache.end()) {
                    it = cache.emplace(cls, transform_series(inst, cls)).first;
                }
                return rev ? Rational(-it->second) : it->second;
            };
            for (const Vertex& v : vertices_near_segment(inst, 3)) {
                Rational sum(0);
                for (const Vertex& u : neighbors(inst, v)) {
                    sum += edge_value(v, u);
                }
                cx.check(sum == 0, [&] {
                    return "q=" + std::to_string(q) + " d=" + std::to_string(d) + " at " +
                           to_string(v) + ": outgoing sum=" + fraction_string(sum);
                });
            }
        }
        out.push_back(cx.result);
    }

    if (wants("alternation")) {
        detail::CheckContext cx;
        cx.result.name = "alternation";
        for (long long d = 1; d <= d_max; ++d) {
            const ProblemInstance inst{q, d};
            auto probe = [&](const EdgeClass& cls) {
                EdgeClass rev = cls;
                rev.reversed = true;
                const Rational fwd = transform_geometric(inst, cls);
                const Rational bwd = transform_geometric(inst, rev);
                cx.check(fwd == -bwd, [&] {
                    return detail::witness_prefix(q, d, cls.i, cls.j) + ": forward=" +
                           fraction_string(fwd) + " reversed=" + fraction_string(bwd);
                });
            };
            for (long long i = -6; i <= d + 6; ++i) probe(EdgeClass::make_aligned(i));
            for (long long i = 1; i <= d - 1; ++i) {
                for (long long j = 1; j <= 4; ++j) probe(EdgeClass::make_transverse(i, j));
            }
        }
        out.push_back(cx.result);
    }

    if (wants("edge-bounds")) {
        detail::CheckContext cx;
        cx.result.name = "edge-bounds";
        for (long long d = 1; d <= d_max; ++d) {
            const ProblemInstance inst{q, d};
            auto probe = [&](const EdgeClass& cls) {
                const Rational v = rational_abs(transform_series(inst, cls));
                const Rational b = per_edge_bound(inst, cls) * opts.edge_bound_scale;
                cx.check(v <= b, [&] {
                    return detail::witness_prefix(q, d, cls.i, cls.j) + ": |value|=" +
                           fraction_string(v) + " bound=" + fraction_string(b);
                });
            };
            for (long long i = -6; i <= d + 6; ++i) probe(EdgeClass::make_aligned(i));
            for (long long i = 1; i <= d - 1; ++i) {
                for (long long j = 1; j <= 6; ++j) probe(EdgeClass::make_transverse(i, j));
            }
        }
        out.push_back(cx.result);
    }

    if (wants("spine-lower")) {
        detail::CheckContext cx;
        cx.result.name = "spine-lower";
        for (long long d = 1; d <= d_max; ++d) {
            const ProblemInstance inst{q, d};
            for (long long i = -6; i <= d + 6; ++i) {
                const Rational p = value_aligned_series(inst, i);
                cx.check(p >= 0, [&] {
                    return detail::witness_prefix(q, d, i, 0) + ": P(i)=" + fraction_string(p) +
                           " negative";
                });
                if (i >= 0 && i < d) {
                    cx.check(p >= 2, [&] {
                        return detail::witness_prefix(q, d, i, 0) + ": on-segment P(i)=" +
                               fraction_string(p) + " below 2";
                    });
                }
            }
            for (long long i = 0; i < d; ++i) {
                const Kernel t = average_endpoints(inst, i);
                for (long long k = -12; k <= 12; ++k) {
                    const Rational v = rational_abs(evaluate(t, k));
                    cx.check(v >= 1, [&] {
                        return detail::witness_prefix(q, d, i, 0) + " k=" + std::to_string(k) +
                               ": |T_i f(k)|=" + fraction_string(v) + " below 1";
                    });
                }
            }
        }
        out.push_back(cx.result);
    }

    if (wants("t-envelope")) {
        detail::CheckContext cx;
        cx.result.name = "t-envelope";
        for (long long d = 1; d <= d_max; ++d) {
            const ProblemInstance inst{q, d};
            for (long long i = -6; i <= d + 6; ++i) {
                const Kernel t = average_endpoints(inst, i);
                for (long long k = 1; k <= d + 12; ++k) {
                    Rational cap;
                    if (i < 0) {
                        cap = k >= -i ? Rational(k + i) : Rational(0);
                    } else if (i < d) {
                        cap = Rational(2 * k - 1);
                    } else {
                        cap = k >= i - d + 1 ? Rational(k - (i - d + 1)) : Rational(0);
                    }
                    const Rational v = rational_abs(evaluate(t, k));
                    cx.check(v <= cap, [&] {
                        return detail::witness_prefix(q, d, i, 0) + " k=" + std::to_string(k) +
                               ": |T_i f(k)|=" + fraction_string(v) + " cap=" +
                               fraction_string(cap);
                    });
                }
            }
        }
        out.push_back(cx.result);
    }

    if (wants("norm-bounds")) {
        detail::CheckContext cx;
        cx.result.name = "norm-bounds";
        for (long long d = 1; d <= d_max; ++d) {
            const ProblemInstance inst{q, d};
            const Rational n = norm_squared(inst);
            const NormBounds nb = theorem_bounds(inst);
            const Rational upper = growth_slope_constant(q) * Rational(d) +
                                   growth_offset_constant(q) * opts.theorem_k_scale;
            cx.check(nb.lower <= n, [&] {
                return detail::witness_prefix(q, d, 0, 0) + ": norm_sq=" + fraction_string(n) +
                       " below lower bound " + fraction_string(nb.lower);
            });
            cx.check(n <= upper, [&] {
                return detail::witness_prefix(q, d, 0, 0) + ": norm_sq=" + fraction_string(n) +
                       " above upper bound " + fraction_string(upper);
            });
        }
        out.push_back(cx.result);
    }

    if (wants("gj")) {
        detail::CheckContext cx;
        cx.result.name = "gj";
        GrowthFit fit = fit_growth_identity(q);
        fit.k_prime *= opts.gj_k_prime_scale;
        Rational prev(0);
        for (long long d = 1; d <= d_max; ++d) {
            const Rational n = norm_squared(ProblemInstance{q, d});
            const Rational pred = growth_identity_prediction(fit, q, d);
            cx.check(n == pred, [&] {
                return detail::witness_prefix(q, d, 0, 0) + ": norm_sq=" + fraction_string(n) +
                       " prediction=" + fraction_string(pred) + " residual=" +
                       fraction_string(n - pred);
            });
            cx.check(n > prev, [&] {
                return detail::witness_prefix(q, d, 0, 0) + ": norm_sq=" + fraction_string(n) +
                       " not increasing past " + fraction_string(prev);
            });
            prev = n;
        }
        out.push_back(cx.result);
    }

    return out;
}

} // namespace bpt
