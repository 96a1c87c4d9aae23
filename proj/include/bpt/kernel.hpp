#pragma once

// Kernels on Z: piecewise families of terms polynomial(k) * base^k over a
// partition of Z into intervals, plus isolated point overrides. The family
// is closed under translation, reflection, sum, and product, and admits
// exact summation over Z (geometric tails) and an exact one-sided l1 norm.
//
// The four named kernels of the transform live here together with the two
// endpoint-averaging operators used by the rearrangement route.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"
#include "tree.hpp"

namespace bpt {

namespace poly {

// Polynomials as ascending coefficient vectors over Rational.
using Poly = std::vector<Rational>;

inline void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline bool is_zero(const Poly& p) {
    for (const auto& c : p)
        if (c != 0) return false;
    return true;
}

inline Rational eval(const Poly& p, const Rational& k) {
    Rational acc(0);
    for (std::size_t i = p.size(); i-- > 0;) {
        acc = acc * k + p[i];
    }
    return acc;
}

inline Poly add(const Poly& a, const Poly& b) {
    Poly out(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    trim(out);
    return out;
}

inline Poly scale(const Poly& a, const Rational& c) {
    if (c == 0) return {};
    Poly out = a;
    for (auto& x : out) x *= c;
    trim(out);
    return out;
}

inline Poly mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    trim(out);
    return out;
}

// Coefficients of m -> p(m + s).
inline Poly shifted(const Poly& p, const Rational& s) {
    Poly out;
    Poly pw{Rational(1)};
    for (std::size_t i = 0; i < p.size(); ++i) {
        out = add(out, scale(pw, p[i]));
        pw = mul(pw, Poly{s, Rational(1)});
    }
    trim(out);
    return out;
}

// Coefficients of k -> p(-k).
inline Poly reflected(const Poly& p) {
    Poly out = p;
    for (std::size_t i = 1; i < out.size(); i += 2) out[i] = -out[i];
    trim(out);
    return out;
}

} // namespace poly

struct KernelTerm {
    poly::Poly coeffs;  // polynomial in k
    Rational base;      // strictly positive geometric base
};

struct KernelPiece {
    std::optional<long long> lo; // empty = -infinity
    std::optional<long long> hi; // empty = +infinity
    std::vector<KernelTerm> terms;

    bool contains(long long k) const {
        return (!lo || *lo <= k) && (!hi || k <= *hi);
    }
};

struct Kernel {
    std::vector<KernelPiece> pieces;          // sorted, disjoint, covering Z
    std::map<long long, Rational> overrides;  // isolated point values
};

namespace detail {

inline std::vector<KernelTerm> merge_terms(const std::vector<KernelTerm>& terms) {
    std::map<Rational, poly::Poly> by_base;
    for (const auto& t : terms) {
        auto it = by_base.find(t.base);
        if (it == by_base.end()) {
            by_base.emplace(t.base, t.coeffs);
        } else {
            it->second = poly::add(it->second, t.coeffs);
        }
    }
    std::vector<KernelTerm> out;
    for (auto& [base, p] : by_base) {
        if (!poly::is_zero(p)) out.push_back(KernelTerm{p, base});
    }
    return out;
}

inline Rational piece_formula_value(const KernelPiece& piece, long long k) {
    Rational acc(0);
    for (const auto& t : piece.terms) {
        acc += poly::eval(t.coeffs, Rational(k)) * pow_rational(t.base, k);
    }
    return acc;
}

inline const KernelPiece& piece_at(const Kernel& kernel, long long k) {
    for (const auto& p : kernel.pieces) {
        if (p.contains(k)) return p;
    }
    throw Error("kernel: pieces do not cover k=" + std::to_string(k));
}

} // namespace detail

inline Rational evaluate(const Kernel& kernel, long long k) {
    auto ov = kernel.overrides.find(k);
    if (ov != kernel.overrides.end()) return ov->second;
    return detail::piece_formula_value(detail::piece_at(kernel, k), k);
}

inline Kernel make_zero() {
    Kernel z;
    z.pieces.push_back(KernelPiece{std::nullopt, std::nullopt, {}});
    return z;
}

inline Kernel make_constant(const Rational& c) {
    Kernel k = make_zero();
    if (c != 0) k.pieces[0].terms.push_back(KernelTerm{poly::Poly{c}, Rational(1)});
    return k;
}

inline Kernel make_indicator(long long at, const Rational& value = Rational(1)) {
    Kernel k = make_zero();
    k.overrides[at] = value;
    return k;
}

// tau_t: value at k is the old value at k - t.
inline Kernel translate(const Kernel& kernel, long long t) {
    Kernel out;
    for (const auto& p : kernel.pieces) {
        KernelPiece np;
        if (p.lo) np.lo = *p.lo + t;
        if (p.hi) np.hi = *p.hi + t;
        for (const auto& term : p.terms) {
            Rational factor = pow_rational(term.base, -t);
            np.terms.push_back(
                KernelTerm{poly::scale(poly::shifted(term.coeffs, Rational(-t)), factor), term.base});
        }
        np.terms = detail::merge_terms(np.terms);
        out.pieces.push_back(std::move(np));
    }
    for (const auto& [k, v] : kernel.overrides) out.overrides[k + t] = v;
    return out;
}

// Reflection k -> -k.
inline Kernel reflect(const Kernel& kernel) {
    Kernel out;
    for (auto it = kernel.pieces.rbegin(); it != kernel.pieces.rend(); ++it) {
        KernelPiece np;
        if (it->hi) np.lo = -*it->hi;
        if (it->lo) np.hi = -*it->lo;
        for (const auto& term : it->terms) {
            np.terms.push_back(
                KernelTerm{poly::reflected(term.coeffs),
                           Rational(denominator(term.base), numerator(term.base))});
        }
        np.terms = detail::merge_terms(np.terms);
        out.pieces.push_back(std::move(np));
    }
    for (const auto& [k, v] : kernel.overrides) out.overrides[-k] = v;
    return out;
}

inline Kernel scale(const Kernel& kernel, const Rational& c) {
    if (c == 0) return make_zero();
    Kernel out = kernel;
    for (auto& p : out.pieces) {
        for (auto& t : p.terms) t.coeffs = poly::scale(t.coeffs, c);
    }
    for (auto& [k, v] : out.overrides) v *= c;
    return out;
}

inline Kernel negate(const Kernel& kernel) { return scale(kernel, Rational(-1)); }

namespace detail {

// Common refinement of the two partitions, as a sorted list of pieces of Z.
inline std::vector<KernelPiece> refine(const Kernel& a, const Kernel& b) {
    std::vector<long long> cuts; // each cut c starts a new interval at c
    auto collect = [&](const Kernel& k) {
        for (const auto& p : k.pieces) {
            if (p.lo) cuts.push_back(*p.lo);
            if (p.hi) cuts.push_back(*p.hi + 1);
        }
    };
    collect(a);
    collect(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<KernelPiece> out;
    if (cuts.empty()) {
        out.push_back(KernelPiece{std::nullopt, std::nullopt, {}});
        return out;
    }
    out.push_back(KernelPiece{std::nullopt, cuts.front() - 1, {}});
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        out.push_back(KernelPiece{cuts[i], cuts[i + 1] - 1, {}});
    }
    out.push_back(KernelPiece{cuts.back(), std::nullopt, {}});
    return out;
}

inline long long representative(const KernelPiece& p) {
    if (p.lo) return *p.lo;
    if (p.hi) return *p.hi;
    return 0;
}

} // namespace detail

inline Kernel add(const Kernel& a, const Kernel& b) {
    Kernel out;
    out.pieces = detail::refine(a, b);
    for (auto& np : out.pieces) {
        long long rep = detail::representative(np);
        std::vector<KernelTerm> terms = detail::piece_at(a, rep).terms;
        const auto& bt = detail::piece_at(b, rep).terms;
        terms.insert(terms.end(), bt.begin(), bt.end());
        np.terms = detail::merge_terms(terms);
    }
    for (const auto& kv : a.overrides) out.overrides[kv.first] = evaluate(a, kv.first) + evaluate(b, kv.first);
    for (const auto& kv : b.overrides) out.overrides[kv.first] = evaluate(a, kv.first) + evaluate(b, kv.first);
    return out;
}

inline Kernel multiply(const Kernel& a, const Kernel& b) {
    Kernel out;
    out.pieces = detail::refine(a, b);
    for (auto& np : out.pieces) {
        long long rep = detail::representative(np);
        std::vector<KernelTerm> terms;
        for (const auto& ta : detail::piece_at(a, rep).terms) {
            for (const auto& tb : detail::piece_at(b, rep).terms) {
                terms.push_back(KernelTerm{poly::mul(ta.coeffs, tb.coeffs), ta.base * tb.base});
            }
        }
        np.terms = detail::merge_terms(terms);
    }
    for (const auto& kv : a.overrides) out.overrides[kv.first] = evaluate(a, kv.first) * evaluate(b, kv.first);
    for (const auto& kv : b.overrides) out.overrides[kv.first] = evaluate(a, kv.first) * evaluate(b, kv.first);
    return out;
}

namespace detail {

// S_j(r) = sum_{m >= 0} m^j r^m for 0 <= j <= jmax, |r| < 1, exact.
inline std::vector<Rational> power_sums(const Rational& r, std::size_t jmax) {
    std::vector<Rational> s(jmax + 1);
    const Rational one_minus = Rational(1) - r;
    s[0] = Rational(1) / one_minus;
    // Binomial triangle alongside the recurrence
    std::vector<std::vector<Rational>> choose(jmax + 1);
    for (std::size_t n = 0; n <= jmax; ++n) {
        choose[n].assign(n + 1, Rational(1));
        for (std::size_t t = 1; t < n; ++t) {
            choose[n][t] = choose[n - 1][t - 1] + choose[n - 1][t];
        }
    }
    for (std::size_t j = 1; j <= jmax; ++j) {
        // (1-r) S_j = sum_{t<j} C(j,t) (-1)^{j-t+1} (S_t - [t==0])
        Rational rhs(0);
        for (std::size_t t = 0; t < j; ++t) {
            Rational contrib = choose[j][t] * (s[t] - (t == 0 ? Rational(1) : Rational(0)));
            if (((j - t + 1) % 2) != 0) contrib = -contrib;
            rhs += contrib;
        }
        s[j] = rhs / one_minus;
    }
    return s;
}

// sum_{k >= from} p(k) base^k, requires 0 < base < 1.
inline Rational tail_sum(const poly::Poly& p, const Rational& base, long long from) {
    if (poly::is_zero(p)) return Rational(0);
    if (!(base > 0) || !(base < 1)) {
        throw NotSummable("geometric tail with base outside (0,1)");
    }
    poly::Poly q = poly::shifted(p, Rational(from));
    auto s = power_sums(base, q.empty() ? 0 : q.size() - 1);
    Rational acc(0);
    for (std::size_t j = 0; j < q.size(); ++j) acc += q[j] * s[j];
    return acc * pow_rational(base, from);
}

constexpr long long max_pointwise_span = 1 << 22;

inline Rational bounded_piece_sum(const KernelPiece& piece) {
    if (piece.terms.empty()) return Rational(0);
    long long lo = *piece.lo, hi = *piece.hi;
    if (hi - lo + 1 > max_pointwise_span) {
        throw Error("kernel: bounded piece too wide to iterate");
    }
    Rational acc(0);
    for (const auto& t : piece.terms) {
        Rational pw = pow_rational(t.base, lo);
        for (long long k = lo; k <= hi; ++k) {
            acc += poly::eval(t.coeffs, Rational(k)) * pw;
            pw *= t.base;
        }
    }
    return acc;
}

inline Rational piece_sum(const KernelPiece& piece) {
    if (piece.terms.empty()) return Rational(0);
    if (piece.lo && piece.hi) return bounded_piece_sum(piece);
    if (!piece.lo && !piece.hi) {
        throw NotSummable("nonzero kernel on the whole line");
    }
    Rational acc(0);
    if (piece.lo) {
        for (const auto& t : piece.terms) acc += tail_sum(t.coeffs, t.base, *piece.lo);
    } else {
        // substitute k -> -k and sum the reflected upper tail
        for (const auto& t : piece.terms) {
            acc += tail_sum(poly::reflected(t.coeffs),
                            Rational(denominator(t.base), numerator(t.base)), -*piece.hi);
        }
    }
    return acc;
}

// Smallest index >= lo past which the polynomial's sign is constant
// (Cauchy root bound).
inline long long sign_stable_from(const poly::Poly& p, long long lo) {
    if (p.size() <= 1) return lo;
    Rational lead = rational_abs(p.back());
    Rational worst(0);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        Rational r = rational_abs(p[i]) / lead;
        if (r > worst) worst = r;
    }
    Rational bound = Rational(1) + worst;
    Int fl = numerator(bound) / denominator(bound);
    long long m = fl.convert_to<long long>() + 1;
    return std::max(lo, m);
}

} // namespace detail

// sum over all of Z of the kernel's values; throws NotSummable when a tail
// fails geometric decay.
inline Rational sum_over_line(const Kernel& kernel) {
    Rational acc(0);
    for (const auto& p : kernel.pieces) acc += detail::piece_sum(p);
    for (const auto& [k, v] : kernel.overrides) {
        acc += v - detail::piece_formula_value(detail::piece_at(kernel, k), k);
    }
    return acc;
}

// The bilinear pairing <a, b> = sum_k a(k) b(k).
inline Rational pairing(const Kernel& a, const Kernel& b) { return sum_over_line(multiply(a, b)); }

// sum_{k >= 1} |kernel(k)|, exact. Unbounded pieces must reduce to a single
// geometric term after merging, which every kernel built from f, g, g_half
// and h does.
inline Rational l1_norm_positives(const Kernel& kernel) {
    Rational acc(0);
    for (const auto& p : kernel.pieces) {
        long long lo = p.lo ? std::max<long long>(*p.lo, 1) : 1;
        if (p.hi && *p.hi < lo) continue;
        if (p.terms.empty()) continue;
        if (p.hi) {
            if (*p.hi - lo + 1 > detail::max_pointwise_span) {
                throw Error("kernel: bounded piece too wide to iterate");
            }
            for (long long k = lo; k <= *p.hi; ++k) {
                acc += rational_abs(detail::piece_formula_value(p, k));
            }
            continue;
        }
        if (p.terms.size() > 1) {
            throw NotSummable("one-sided l1 norm with mixed geometric tails");
        }
        const KernelTerm& t = p.terms.front();
        long long stable = detail::sign_stable_from(t.coeffs, lo);
        for (long long k = lo; k <= stable; ++k) {
            acc += rational_abs(detail::piece_formula_value(p, k));
        }
        acc += rational_abs(detail::tail_sum(t.coeffs, t.base, stable + 1));
    }
    for (const auto& [k, v] : kernel.overrides) {
        if (k < 1) continue;
        acc += rational_abs(v) -
               rational_abs(detail::piece_formula_value(detail::piece_at(kernel, k), k));
    }
    return acc;
}

// ---------------------------------------------------------------------------
// The named kernels.
// ---------------------------------------------------------------------------

// Cocycle profile along the spine: d on k <= 0, d - 2k across the segment,
// -d on k >= d.
inline Kernel make_f(const ProblemInstance& inst) {
    validate_instance(inst);
    const long long d = inst.d;
    Kernel k;
    if (d == 0) return make_zero();
    k.pieces.push_back(
        KernelPiece{std::nullopt, 0, {KernelTerm{poly::Poly{Rational(d)}, Rational(1)}}});
    if (d >= 2) {
        k.pieces.push_back(KernelPiece{
            1, d - 1, {KernelTerm{poly::Poly{Rational(d), Rational(-2)}, Rational(1)}}});
    }
    k.pieces.push_back(
        KernelPiece{d, std::nullopt, {KernelTerm{poly::Poly{Rational(-d)}, Rational(1)}}});
    return k;
}

// Symmetric geometric decay q^{-|k|}.
inline Kernel make_g(const ProblemInstance& inst) {
    validate_instance(inst);
    const Rational q(inst.q);
    Kernel k;
    k.pieces.push_back(KernelPiece{std::nullopt, -1, {KernelTerm{poly::Poly{Rational(1)}, q}}});
    k.pieces.push_back(
        KernelPiece{0, std::nullopt, {KernelTerm{poly::Poly{Rational(1)}, Rational(1) / q}}});
    return k;
}

// One-sided signed variant: q^k for k <= 0, -q^{-(k-1)} for k >= 1.
inline Kernel make_g_half(const ProblemInstance& inst) {
    validate_instance(inst);
    const Rational q(inst.q);
    Kernel k;
    k.pieces.push_back(KernelPiece{std::nullopt, 0, {KernelTerm{poly::Poly{Rational(1)}, q}}});
    k.pieces.push_back(
        KernelPiece{1, std::nullopt, {KernelTerm{poly::Poly{-q}, Rational(1) / q}}});
    return k;
}

// q^{-(|k|-1)} away from the origin with an explicit zero at k = 0.
inline Kernel make_h(const ProblemInstance& inst) {
    validate_instance(inst);
    const Rational q(inst.q);
    Kernel k;
    k.pieces.push_back(KernelPiece{std::nullopt, -1, {KernelTerm{poly::Poly{q}, q}}});
    k.pieces.push_back(KernelPiece{0, std::nullopt, {KernelTerm{poly::Poly{q}, Rational(1) / q}}});
    k.overrides[0] = Rational(0);
    return k;
}

// Endpoint average T_i f(k) = (f(k+i) + f(k+d-i-1)) / 2.
inline Kernel average_endpoints(const ProblemInstance& inst, long long i) {
    Kernel f = make_f(inst);
    return scale(add(translate(f, -i), translate(f, i + 1 - inst.d)), ratio(1, 2));
}

// Endpoint difference average T~_i f(k) = (f(k+i) - f(k+d-i)) / 2.
inline Kernel average_endpoints_diff(const ProblemInstance& inst, long long i) {
    Kernel f = make_f(inst);
    return scale(add(translate(f, -i), negate(translate(f, i - inst.d))), ratio(1, 2));
}

} // namespace bpt
