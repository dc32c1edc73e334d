#include "pcov/torsor_p2.hpp"

#include "pcov/residue_fn.hpp"

#include <algorithm>

namespace pcov {

namespace {

constexpr i64 kNone = std::numeric_limits<i64>::min();

i64 big_k(i64 pv) { return pv * (pv - 1) + 1; } // p(p-1)+1

YPolyBi ypoly_add(const YPolyBi& a, const YPolyBi& b) {
    YPolyBi r = a;
    for (auto& [d, c] : b) {
        auto it = r.find(d);
        if (it == r.end())
            r.emplace(d, c);
        else {
            it->second = it->second + c;
            if (it->second.window_empty() && it->second.exact()) r.erase(it);
        }
    }
    return r;
}

YPolyBi ypoly_neg(const YPolyBi& a) {
    YPolyBi r;
    for (auto& [d, c] : a) r.emplace(d, -c);
    return r;
}

YPolyBi ypoly_mul(const YPolyBi& a, const YPolyBi& b) {
    YPolyBi r;
    for (auto& [d1, c1] : a)
        for (auto& [d2, c2] : b) {
            BiElement prod = c1 * c2;
            auto it = r.find(d1 + d2);
            if (it == r.end())
                r.emplace(d1 + d2, prod);
            else
                it->second = it->second + prod;
        }
    for (auto it = r.begin(); it != r.end();)
        it = (it->second.window_empty() && it->second.exact()) ? r.erase(it) : std::next(it);
    return r;
}

YPolyBi ypoly_pi_shift(const YPolyBi& a, i64 d) {
    YPolyBi r;
    for (auto& [deg, c] : a) r.emplace(deg, c.pi_shifted(d));
    return r;
}

// (sum comp_d Y^d)^p = sum comp_d^p Y^{pd}: exact in characteristic p
YPolyBi ypoly_frobenius(const YPolyBi& a, PrimeChar p) {
    YPolyBi r;
    for (auto& [d, c] : a) r.emplace(d * p.value(), c.pow(p.value()));
    return r;
}

i64 ypoly_min_pi(const YPolyBi& a) {
    i64 m = BiElement::kValInf;
    for (auto& [d, c] : a)
        if (!c.window_empty()) m = std::min(m, c.gauss_valuation());
    return m;
}

YPolyRes ypoly_reduce(const YPolyBi& a) {
    YPolyRes r;
    for (auto& [d, c] : a) {
        ResidueSeries s = c.reduce_mod_pi();
        if (!s.window_empty()) r.emplace(d, s);
    }
    return r;
}

// p-th powers of the cover ring all lie in the base: a fibre element is one
// iff its y-reduction mod (y^p = vbar) is base-valued and in the span.
bool fibre_is_pth_power(const YPolyRes& fib, const ResidueSeries& vbar, bool germ) {
    if (fib.empty()) return true;
    PrimeChar p = vbar.prime();
    const i64 pv = p.value();
    std::vector<ResidueSeries> comps(static_cast<std::size_t>(pv), ResidueSeries(p));
    for (auto& [d, c] : fib) {
        i64 k = floor_div(d, pv), rest = mod_euclid(d, pv);
        comps[static_cast<std::size_t>(rest)] =
            comps[static_cast<std::size_t>(rest)] + c * vbar.pow(static_cast<std::uint64_t>(k));
    }
    for (i64 j = 1; j < pv; ++j)
        if (!comps[static_cast<std::size_t>(j)].window_empty()) return false;
    auto solve = residue_span_solve(comps[0], vbar, germ);
    return solve.status == SpanSolve::Status::InSpan;
}

} // namespace

// ---------------------------------------------------------------- pairs

PairCheck admissible_pair_check(PrimeChar p, const DegTypeP2& pair) {
    const i64 pv = p.value();
    const i64 K = big_k(pv);
    const i64 n1 = pair.first.n, m1 = pair.first.m;
    const i64 n2 = pair.second.n, m2 = pair.second.m;
    PairCheck out;
    auto prime_to_p = [&](i64 x) { return mod_euclid(x, pv) != 0; };
    if (n1 < 0 || n2 < 0) return out;

    if (n1 == 0 && n2 == 0) {
        if (!(m1 < 0 && m2 < 0)) return out;
        // m2 = inf(m1 K, m2aux p - m1 (p-1)) for some negative m2aux prime to p
        if (m2 == m1 * K) {
            // need some negative prime-to-p m2aux with m2aux p - m1(p-1) >= m2;
            // -1 works whenever the interval reaches it
            i64 lo = ceil_div(m2 + m1 * (pv - 1), pv);
            if (lo <= -1) {
                out.ok = true;
                out.branch = "n1=n2=0, inf attained at m1(p(p-1)+1)";
                out.witness_m2 = -1;
                return out;
            }
            return out;
        }
        i64 num = m2 + m1 * (pv - 1);
        if (num % pv == 0) {
            i64 cand = num / pv;
            if (cand < 0 && prime_to_p(cand) && m2 <= m1 * K) {
                out.ok = true;
                out.branch = "n1=n2=0, inf attained at m2 p - m1 (p-1)";
                out.witness_m2 = cand;
                return out;
            }
        }
        return out;
    }
    if (n1 == 0 && n2 != 0) {
        // m2 = p m2' - m1 (p-1) in type variables (the convention the
        // boundary classification and the double-point catalog both use)
        if (m1 > -1) return out;
        i64 num = m2 + m1 * (pv - 1);
        if (num % pv != 0) return out;
        i64 cand = num / pv;
        if (!prime_to_p(cand)) return out;
        out.ok = true;
        out.branch = "n1=0, n2!=0: m2 = p m2' - m1 (p-1)";
        out.witness_m2 = cand;
        return out;
    }
    // n1 != 0
    if (pv * n2 > n1 * K) {
        i64 num = m2 + m1 * (pv - 1);
        if (num % pv != 0) return out;
        i64 cand = num / pv;
        if (!prime_to_p(cand)) return out;
        out.ok = true;
        out.branch = "n1!=0, n2 > n1(p(p-1)+1)/p: m2 = p m2' - m1 (p-1)";
        out.witness_m2 = cand;
        return out;
    }
    if (pv * n2 == n1 * K) {
        if (m2 == m1 * K) {
            out.ok = true;
            out.branch = "n1!=0, n2 = n1(p(p-1)+1)/p: m2 = m1(p(p-1)+1)";
            return out;
        }
        i64 num = m2 + m1 * (pv - 1);
        if (num % pv == 0) {
            i64 cand = num / pv;
            if (prime_to_p(cand) && cand < pv * m1) {
                out.ok = true;
                out.branch = "n1!=0, n2 = n1(p(p-1)+1)/p: m2 = m2' p - m1 (p-1), m2' < p m1";
                out.witness_m2 = cand;
                return out;
            }
        }
        return out;
    }
    return out; // p n2 < n1 K: below the level bound
}

PairCheck condition_star_check(PrimeChar p, const DegTypeP2& pair) {
    const i64 pv = p.value();
    const i64 K = big_k(pv);
    const i64 n1 = pair.first.n, m1 = pair.first.m;
    const i64 n2 = pair.second.n, m2 = pair.second.m;
    PairCheck out;
    auto prime_to_p = [&](i64 x) { return mod_euclid(x, pv) != 0; };

    if (n1 == 0 && n2 == 0) {
        if (m1 > -1) return out;
        // m2 = inf(m1 K, m2aux p - m1 (p-1)) with m2aux negative prime to p
        // (type-variable form of the smooth-germ catalog types)
        if (m2 == m1 * K) {
            i64 lo = ceil_div(m2 + m1 * (pv - 1), pv);
            if (lo <= -1) {
                out.ok = true;
                out.branch = "smooth, n1=n2=0, inf attained at m1(p(p-1)+1)";
                out.witness_m2 = -1;
                return out;
            }
            return out;
        }
        i64 num = m2 + m1 * (pv - 1);
        if (num % pv != 0) return out;
        i64 cand = num / pv;
        if (cand < 0 && prime_to_p(cand) && m2 <= m1 * K) {
            out.ok = true;
            out.branch = "smooth, n1=n2=0, inf attained at m2 p - m1 (p-1)";
            out.witness_m2 = cand;
            return out;
        }
        return out;
    }
    if (n1 == 0 && n2 != 0) {
        if (m1 > -1) return out;
        i64 num = m2 + m1 * (pv - 1);
        if (num % pv != 0) return out;
        i64 cand = num / pv;
        if (!prime_to_p(cand)) return out;
        if (!(cand <= -pv * m1)) return out; // -m2' >= p m1
        out.ok = true;
        out.branch = "smooth, n1=0, n2!=0";
        out.witness_m2 = cand;
        return out;
    }
    if (!(m1 <= -1 && m2 <= -1)) return out;
    if (pv * n2 > n1 * K) {
        i64 num = m2 + m1 * (pv - 1);
        if (num % pv != 0) return out;
        i64 cand = num / pv;
        if (!prime_to_p(cand)) return out;
        if (!(-cand >= -pv * m1)) return out;
        out.ok = true;
        out.branch = "smooth, n1!=0, strict level inequality";
        out.witness_m2 = cand;
        return out;
    }
    if (pv * n2 == n1 * K) {
        if (m2 == m1 * K) {
            out.ok = true;
            out.branch = "smooth, n1!=0, level equality: m2 = m1(p(p-1)+1)";
            return out;
        }
        i64 num = m2 + m1 * (pv - 1);
        if (num % pv == 0) {
            i64 cand = num / pv;
            if (prime_to_p(cand) && cand < pv * m1) {
                out.ok = true;
                out.branch = "smooth, n1!=0, level equality: m2 = m2' p - m1 (p-1)";
                out.witness_m2 = cand;
                return out;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------- Av

AvDecomposition decompose_Av(const BiElement& u, const BiElement& v) {
    PrimeChar p = u.prime();
    const i64 pv = p.value();
    if (!u.window_empty() && u.gauss_valuation() < 0)
        throw schema_error("decompose_Av expects an integral element");
    ResidueSeries vbar = v.reduce_mod_pi();
    ResidueSeries ubar = u.reduce_mod_pi();
    auto solve = residue_span_solve(ubar, vbar, u.is_germ());
    if (solve.status == SpanSolve::Status::NotInSpan)
        throw error("decompose_Av: residue class not in A^p + A^p v + ... + A^p v^{p-1} "
                    "(NotInSpan)");
    if (solve.status == SpanSolve::Status::Inconclusive)
        throw precision_error("decompose_Av: bounded solve inconclusive; enlarge the window");
    AvDecomposition d(p);
    d.coeffs = solve.coeffs;
    d.v = v;
    BiElement f(p, BiElement::kExact, u.t_window());
    for (i64 j = 0; j < pv; ++j) {
        BiElement lift = BiElement::lift(solve.coeffs[static_cast<std::size_t>(j)],
                                         BiElement::kExact, u.t_window());
        d.lifts.push_back(lift);
        f = f + lift.pow(pv) * v.pow(static_cast<std::uint64_t>(j));
    }
    d.f_of_v = f;
    BiElement diff = u - f;
    if (!diff.window_empty() && diff.gauss_valuation() < 1)
        throw error("internal: decompose_Av remainder not divisible by pi");
    d.remainder = diff.pi_shifted(-1);
    return d;
}

GTildeTransform transform_g_tilde(const AvDecomposition& d, i64 n, i64 m) {
    PrimeChar p = d.v.prime();
    const i64 pv = p.value();
    GTildeTransform out(p);
    if (pv * m - n * (pv - 1) <= 0)
        throw hypothesis_error("transform exponent pm - n(p-1) <= 0: branch elsewhere");
    if (d.lifts.size() != static_cast<std::size_t>(pv))
        throw schema_error("transform needs all p coefficient lifts");
    auto window = d.v.t_window();

    // V = Y^p - pi^{(p-1)n} Y
    YPolyBi V;
    V.emplace(pv, BiElement::monomial(p, 0, 0, 1, BiElement::kExact, window));
    V.emplace(1, BiElement::monomial(p, (pv - 1) * n, 0, -1, BiElement::kExact, window));

    // g = pi^{-pm} sum_j a_j^p V^j
    YPolyBi g;
    YPolyBi Vj;
    Vj.emplace(0, BiElement::monomial(p, 0, 0, 1, BiElement::kExact, window));
    for (i64 j = 0; j < pv; ++j) {
        if (j > 0) Vj = ypoly_mul(Vj, V);
        const BiElement& aj = d.lifts[static_cast<std::size_t>(j)];
        if (aj.window_empty()) continue;
        BiElement ajp = aj.pow(pv);
        YPolyBi term;
        for (auto& [deg, c] : Vj) term.emplace(deg, c * ajp);
        g = ypoly_add(g, term);
    }
    g = ypoly_pi_shift(g, -pv * m);

    // b = pi^{-m} sum_j a_j Y^j
    YPolyBi b;
    for (i64 j = 0; j < pv; ++j) {
        const BiElement& aj = d.lifts[static_cast<std::size_t>(j)];
        if (!aj.window_empty()) b.emplace(j, aj.pi_shifted(-m));
    }
    out.lead = b;
    out.transformed = ypoly_add(ypoly_add(g, b), ypoly_neg(ypoly_frobenius(b, p)));

    // middle = -pi^{-(pm - n(p-1))} sum_{j>=1} j a_j^p Y^{p(j-1)+1}
    for (i64 j = 1; j < pv; ++j) {
        const BiElement& aj = d.lifts[static_cast<std::size_t>(j)];
        if (aj.window_empty()) continue;
        BiElement c = aj.pow(pv).scaled(-j).pi_shifted(-(pv * m - n * (pv - 1)));
        if (c.window_empty()) continue;
        out.middle.emplace(pv * (j - 1) + 1, c);
        out.middle_nonzero = true;
    }

    // h = pi^{pm - 2n(p-1)} (transformed - lead - middle) must be integral
    out.h_part = ypoly_add(ypoly_add(out.transformed, ypoly_neg(out.lead)), ypoly_neg(out.middle));
    i64 hmin = ypoly_min_pi(out.h_part);
    if (hmin != BiElement::kValInf && hmin < -(pv * m - 2 * n * (pv - 1)))
        throw error("internal: h-part exceeds its pi-level in the transform");

    if (out.middle_nonzero) {
        YPolyRes mid = ypoly_reduce(ypoly_pi_shift(out.middle, pv * m - n * (pv - 1)));
        if (!mid.empty()) out.middle_fibre = mid.begin()->second;
        // the y-degrees p(j-1)+1 are prime to p, so a nonzero middle can
        // never be a p-th power in the cover ring
    }
    return out;
}

// ---------------------------------------------------------------- germ engine

namespace {

// sum_k [C(p,k)/p] A^k B^{p-k} on monomial arguments A = sA Y^{dA} pi^{eA},
// B = sB Y^{dB} pi^{eB}, as an unreduced y-polynomial
YPolyBi carry_of_monomials(PrimeChar p, i64 dA, i64 eA, i64 sA, i64 dB, i64 eB, i64 sB,
                           std::optional<i64> win) {
    const i64 pv = p.value();
    const auto& cc = witt_carry_coeffs(p);
    YPolyBi out;
    for (i64 k = 1; k < pv; ++k) {
        i64 deg = dA * k + dB * (pv - k);
        i64 pe = eA * k + eB * (pv - k);
        i64 coeff = static_cast<i64>(cc[static_cast<std::size_t>(k - 1)]);
        i64 sign = 1;
        for (i64 i = 0; i < k; ++i) sign *= sA;
        for (i64 i = 0; i < pv - k; ++i) sign *= sB;
        coeff *= sign;
        if (fp_reduce(coeff, p) == 0) continue;
        BiElement mono = BiElement::monomial(p, pe, 0, coeff, BiElement::kExact, win);
        auto it = out.find(deg);
        if (it == out.end())
            out.emplace(deg, mono);
        else
            it->second = it->second + mono;
    }
    for (auto it = out.begin(); it != out.end();)
        it = (it->second.window_empty() && it->second.exact()) ? out.erase(it) : std::next(it);
    return out;
}

// Correction term of the second Artin-Schreier equation of the tower, for
// generic first coordinate x1 = Y/pi^{m1'}:
//   correction(x1) = carry(x1^p, -x1) - carry(x1, -x1).
// The second summand vanishes for odd p; for p = 2 it contributes the
// group-law square term the short displayed formula omits.
YPolyBi second_equation_carry(PrimeChar p, i64 m1p, std::optional<i64> germ_window) {
    std::optional<i64> win = germ_window ? std::optional<i64>(0) : std::nullopt;
    const i64 pv = p.value();
    YPolyBi a = carry_of_monomials(p, pv, -pv * m1p, 1, 1, -m1p, -1, win);
    YPolyBi b = carry_of_monomials(p, 1, -m1p, 1, 1, -m1p, -1, win);
    return ypoly_add(a, ypoly_neg(b));
}

} // namespace

NormalizedP2Cover normalize_germ_p2(const WittBi& pair, const NormalizeOptions& opt) {
    PrimeChar p = pair.x1.prime();
    const i64 pv = p.value();
    const i64 K = big_k(pv);
    if (!(pair.twist == Twist{0, 0}))
        throw schema_error("normalize_germ_p2 expects generic Witt coordinates (twist (0,0))");
    if (!pair.x1.is_germ() || !pair.x2.is_germ())
        throw schema_error("normalize_germ_p2 expects germ elements");
    NormalizedP2Cover out(p);
    auto window = pair.x1.t_window();
    BiElement zero(p, BiElement::kExact, window);

    // first coordinate; the coboundary is applied to the pair so the Witt
    // carry corrections reach the second coordinate
    out.first = normalize_germ_p(pair.x1, opt);
    WittBi cur = witt_coboundary_apply(pair, -out.first.coboundary_witness, zero);

    if (out.first.type.split) {
        out.split_level = DegTypeP2::SplitLevel::TopOnly;
        out.case_tag = "split";
        out.notes.push_back("first-level torsor is trivial; residual cover is rank p");
        NormalizedPCover res = normalize_germ_p(cur.x2, opt);
        if (res.type.split) out.split_level = DegTypeP2::SplitLevel::Full;
        out.second_level = res.type.n;
        out.second_group = res.group;
        out.delta2 = res.different;
        out.second_integral_rhs.emplace(0, res.integral_rhs);
        if (!res.special_fibre_rhs.window_empty()) out.second_fibre.emplace(0, res.special_fibre_rhs);
        return out;
    }

    if (out.first.type.n == 0) {
        // m1 = 0: cases a and b via a rank-p pass on the second coordinate
        NormalizedPCover f2 = normalize_germ_p(cur.x2, opt);
        out.delta1 = 0;
        out.second_level = f2.type.n;
        out.delta2 = f2.different;
        out.second_group = f2.group;
        if (f2.type.split) {
            // trivial second coordinate: the tower is still cyclic of order
            // p^2 (the first class has order p); this is case a with a2 = 0
            out.case_tag = "a";
            out.notes.push_back("second Witt coordinate is a coboundary");
            out.total_group = GroupSchemeTag::EtaleZp2Z();
            out.second_integral_rhs.emplace(0, f2.integral_rhs);
            return out;
        }
        if (f2.type.n == 0) {
            out.case_tag = "a";
            out.total_group = GroupSchemeTag::EtaleZp2Z();
            out.second_integral_rhs.emplace(0, f2.integral_rhs);
            out.second_fibre.emplace(0, f2.special_fibre_rhs);
            return out;
        }
        // case b: the cover is a W_{0,m2'} torsor
        out.case_tag = "b";
        i64 m2p = f2.type.n;
        out.total_group = GroupSchemeTag::Wm1m2(0, m2p);
        out.second_integral_rhs =
            ypoly_add(YPolyBi{{0, f2.integral_rhs}},
                      ypoly_pi_shift(second_equation_carry(p, 0, window), pv * m2p));
        out.second_fibre.emplace(0, f2.special_fibre_rhs);
        return out;
    }

    // case c: f1 is a nontrivial M_{m1'}-torsor
    const i64 m1p = out.first.type.n;
    out.delta1 = out.first.different;
    const i64 D1 = m1p * K;
    const ResidueSeries vbar = out.first.special_fibre_rhs;
    const BiElement& vint = out.first.integral_rhs;

    YPolyBi carry = second_equation_carry(p, m1p, window);
    YPolyBi settled;
    BiElement tau = cur.x2;
    i64 Ds = kNone;
    i64 rounds = 0;
    bool redescended = false;
    bool stopped_not_in_span = false;

    i64 budget = opt.iteration_budget > 0 ? opt.iteration_budget : 64;
    for (i64 step = 0;; ++step) {
        if (step > budget) throw precision_error("second-coordinate descent budget exceeded");
        if (tau.window_empty()) {
            if (tau.is_exact_zero()) break;
            throw precision_error("second coordinate vanishes on its pi-window; undecidable");
        }
        i64 v = tau.gauss_valuation();
        if (v >= 0) break;
        i64 nu = -v;
        if (nu <= std::max(D1, Ds)) break;
        BiElement u = tau.pi_shifted(nu);
        ResidueSeries ubar = u.reduce_mod_pi();
        if (ubar.is_pth_power()) {
            // plain base re-descent
            if (mod_euclid(nu, pv) != 0)
                throw ramification_error("second level totally ramified: pi-denominator " +
                                         std::to_string(nu) + " prime to p during re-descent");
            ResidueSeries broot = ubar.pth_root();
            BiElement B = BiElement::lift(broot, BiElement::kExact, window);
            BiElement w = u - B.pow(pv);
            tau = B.pi_shifted(-nu / pv) + w.pi_shifted(-nu);
            redescended = true;
            continue;
        }
        auto solve = residue_span_solve(ubar, vbar, true);
        if (solve.status == SpanSolve::Status::NotInSpan) {
            stopped_not_in_span = true;
            break;
        }
        if (solve.status == SpanSolve::Status::Inconclusive)
            throw precision_error("span membership inconclusive at the working window");
        if (mod_euclid(nu, pv) != 0)
            throw ramification_error("second level totally ramified: pi-denominator " +
                                     std::to_string(nu) + " prime to p at a transform round");
        AvDecomposition d(p);
        d.coeffs = solve.coeffs;
        d.v = vint;
        BiElement f(p, BiElement::kExact, window);
        for (i64 j = 0; j < pv; ++j) {
            BiElement lift = BiElement::lift(solve.coeffs[static_cast<std::size_t>(j)],
                                             BiElement::kExact, window);
            d.lifts.push_back(lift);
            f = f + lift.pow(pv) * vint.pow(static_cast<std::uint64_t>(j));
        }
        d.f_of_v = f;
        GTildeTransform tr = transform_g_tilde(d, m1p, nu / pv);
        settled = ypoly_add(settled, tr.transformed);
        if (rounds == 0) Ds = nu - m1p * (pv - 1);
        ++rounds;
        BiElement rest = u - f;
        if (!rest.window_empty() && rest.gauss_valuation() < 1)
            throw error("internal: transform round left a unit remainder");
        tau = rest.pi_shifted(-nu);
    }

    i64 d_tail = kNone;
    if (!tau.window_empty()) {
        i64 v = tau.gauss_valuation();
        if (v < 0) d_tail = -v;
    }

    YPolyBi total = ypoly_add(ypoly_add(carry, settled), YPolyBi{{0, tau}});
    i64 ell = std::max({D1, Ds, d_tail});
    i64 actual = ypoly_min_pi(total);
    if (actual != -ell)
        throw precision_error("cancellation at the dominant pi-level (actual " +
                              std::to_string(actual) + " vs nominal " + std::to_string(-ell) +
                              "); input outside the printed analysis");
    if (mod_euclid(ell, pv) != 0)
        throw ramification_error("second level totally ramified: dominant denominator " +
                                 std::to_string(ell) + " prime to p");
    const i64 n2 = ell / pv;
    out.second_level = n2;
    out.second_group = GroupSchemeTag::Mn(n2);
    out.delta2 = n2 * (pv - 1);
    out.second_integral_rhs = ypoly_pi_shift(total, ell);
    out.second_fibre = ypoly_reduce(out.second_integral_rhs);

    if (fibre_is_pth_power(out.second_fibre, vbar, true))
        throw precision_error("second-level fibre is a p-th power in the cover ring; a deeper "
                              "descent than the printed analysis would be needed");
    if (pv * n2 < m1p * K) throw error("internal: n2 >= n1(p(p-1)+1)/p violated");

    bool at_c = (D1 == ell), at_s = (Ds == ell), at_t = (d_tail == ell);
    if (rounds == 0) {
        if (at_c && !at_t) {
            out.case_tag = "c-1";
        } else if (at_c && at_t) {
            out.case_tag = "c-1";
            out.tie = "m1'(p(p-1)+1) = -m2";
        } else {
            out.case_tag = "c-3"; // no decomposition terms: f_i = 0, direct g
            if (!stopped_not_in_span)
                out.notes.push_back("tail dominates without an explicit span certificate");
        }
    } else {
        if (at_s && !at_c && !at_t) {
            out.case_tag = "c-2";
        } else if (at_s && at_c && !at_t) {
            out.case_tag = "c-2";
            out.tie = "pm2'-(p-1)m1' = m1'(p(p-1)+1)";
        } else if (at_t && !at_s && !at_c) {
            out.case_tag = "c-3";
        } else if (at_t && at_s && !at_c) {
            out.case_tag = "c-3";
            out.tie = "pm2'-(p-1)m1' = pm2'-t_1-...-t_r";
        } else if (at_c && !at_s && !at_t) {
            out.case_tag = "c-4";
        } else if (at_c && at_t && !at_s) {
            out.case_tag = "c-4";
            out.tie = "pm2'-t_1-...-t_r = m1'(p(p-1)+1)";
        } else {
            out.case_tag = "c-5";
            out.tie = "triple equality";
        }
    }
    if (out.case_tag == "c-3" && rounds == 0 && !redescended) {
        out.total_group = GroupSchemeTag::Hm1m2(m1p, n2);
        out.notes.push_back("H-torsor configuration: all t_i = 0, f_i = 0");
    }
    return out;
}

// ---------------------------------------------------------------- boundary

BoundaryP2Classification classify_boundary_p2(const WittBi& pair, const NormalizeOptions& opt) {
    PrimeChar p = pair.x1.prime();
    const i64 pv = p.value();
    const i64 K = big_k(pv);
    if (!(pair.twist == Twist{0, 0}))
        throw schema_error("classify_boundary_p2 expects generic Witt coordinates");
    if (pair.x1.is_germ() || pair.x2.is_germ())
        throw schema_error("classify_boundary_p2 expects boundary elements");
    BoundaryP2Classification out(p);
    BiElement zero(p);

    out.first = normalize_boundary_p(pair.x1, opt);
    WittBi cur = witt_coboundary_apply(pair, -out.first.coboundary_witness, zero);

    if (out.first.type.split) {
        out.type.split_level = DegTypeP2::SplitLevel::TopOnly;
        out.type.first = out.first.type;
        NormalizedPCover res = normalize_boundary_p(cur.x2, opt);
        out.type.second = res.type;
        if (res.type.split) out.type.split_level = DegTypeP2::SplitLevel::Full;
        out.case_tag = "split";
        out.notes.push_back("first level trivial: the special fibre has p components; the "
                            "residual rank-p type sits in the second slot");
        return out;
    }
    out.type.first = out.first.type;

    if (out.first.type.n == 0) {
        i64 m1c = -out.first.type.m;
        if (m1c <= 0)
            throw hypothesis_error("first level unramified (conductor 0): classification needs an "
                                   "algebraically closed residue field or a ramified first level");
        NormalizedPCover f2 = normalize_boundary_p(cur.x2, opt);
        if (f2.type.n == 0) {
            // split second coordinate included: the pair (a1, coboundary) is
            // still a cyclic p^2-cover; the carry then drives the conductor
            i64 m2 = f2.type.split ? 0 : std::max<i64>(0, -f2.type.m);
            if (m2 == 0)
                out.notes.push_back(
                    "second coordinate has no residue pole; the carry drives the conductor");
            i64 mt2 = (m2 >= pv * m1c) ? (-pv * m2 + m1c * (pv - 1)) : (-m1c * K);
            out.case_tag = "a";
            out.type.second = DegTypeP{0, mt2, false};
            return out;
        }
        out.case_tag = "b";
        out.type.second = DegTypeP{f2.type.n, pv * f2.type.m + m1c * (pv - 1), false};
        return out;
    }

    // case c
    const i64 n1 = out.first.type.n, m1 = out.first.type.m;
    BiElement tau = cur.x2;
    i64 budget = opt.iteration_budget > 0 ? opt.iteration_budget : 64;
    i64 n2 = 0;
    ResidueSeries fbar(p);
    for (i64 step = 0;; ++step) {
        if (step > budget) throw precision_error("boundary second-coordinate descent budget");
        if (tau.window_empty()) {
            if (tau.is_exact_zero()) break;
            throw precision_error("second coordinate vanishes on its pi-window");
        }
        i64 v = tau.gauss_valuation();
        if (v >= 0) {
            fbar = tau.reduce_mod_pi();
            break;
        }
        i64 nu = -v;
        if (mod_euclid(nu, pv) != 0) {
            // leftover denominator prime to p: present as f / pi^{p n2} with
            // n2 = ceil(nu/p); the pi^0 slice of f carries no unit, so the
            // conductor comes from the other summands of the presentation
            n2 = ceil_div(nu, pv);
            fbar = ResidueSeries(p, 0);
            break;
        }
        BiElement u = tau.pi_shifted(nu);
        ResidueSeries ubar = u.reduce_mod_pi();
        if (!ubar.is_pth_power()) {
            n2 = nu / pv;
            fbar = ubar;
            break;
        }
        ResidueSeries broot = ubar.pth_root();
        BiElement B = BiElement::lift(broot);
        tau = B.pi_shifted(-nu / pv) + (u - B.pow(pv)).pi_shifted(-nu);
    }
    // conductor of f: smallest prime-to-p exponent carrying a unit
    std::optional<i64> m2;
    for (auto& [e, c] : fbar.coeffs())
        if (mod_euclid(e, pv) != 0) {
            m2 = e;
            break;
        }

    i64 lhs = pv * n2 - (pv - 1) * n1;
    i64 rhs = n1 * K;
    if (lhs > rhs) {
        if (mod_euclid(lhs, pv) != 0)
            throw ramification_error("case c-1 level p*n2 - (p-1)*n1 not divisible by p");
        if (!m2) throw hypothesis_error("case c-1 needs a prime-to-p unit coefficient in f");
        out.case_tag = "c-1";
        out.type.second = DegTypeP{lhs / pv, *m2 * pv - m1 * (pv - 1), false};
        return out;
    }
    if (mod_euclid(rhs, pv) != 0)
        throw ramification_error("level n1(p(p-1)+1) not divisible by p in case c-2/c-3");
    if (lhs < rhs) {
        out.case_tag = "c-2";
        out.type.second = DegTypeP{rhs / pv, m1 * K, false};
        return out;
    }
    out.case_tag = "c-3";
    out.tie = true;
    i64 mt2 = m1 * K;
    if (m2)
        mt2 = std::min(mt2, *m2 * pv - m1 * (pv - 1));
    else
        out.notes.push_back("no prime-to-p unit coefficient in f; conductor from the carry");
    out.type.second = DegTypeP{rhs / pv, mt2, false};
    return out;
}

// ---------------------------------------------------------------- data

DegenDataP2 extract_degen_data(const NormalizedP2Cover& cover) {
    PrimeChar p = cover.first.special_fibre_rhs.prime();
    const i64 pv = p.value();
    DegenDataP2 d(p);
    if (cover.case_tag == "a") {
        d.kind = DegenDataP2::Kind::A;
        d.a1bar = cover.first.special_fibre_rhs;
        if (cover.second_fibre.count(0)) d.a2bar = cover.second_fibre.at(0);
        return d;
    }
    if (cover.case_tag == "b") {
        d.kind = DegenDataP2::Kind::B;
        d.n2v = cover.second_level;
        d.a1bar = cover.first.special_fibre_rhs;
        if (cover.second_fibre.count(0))
            d.a2bar = strip_pth_power_monomials(cover.second_fibre.at(0)).stripped;
        return d;
    }
    if (cover.case_tag.rfind("c-", 0) != 0)
        throw schema_error("extract_degen_data: split or unclassified cover");
    d.kind = DegenDataP2::Kind::C;
    d.n1v = cover.first.type.n;
    d.n2v = cover.second_level;
    d.a1bar = cover.first.special_fibre_rhs;
    d.cbars.assign(static_cast<std::size_t>(pv - 1), ResidueSeries(p));
    for (auto& [deg, c] : cover.second_fibre) {
        if (deg == 0) {
            d.gbar = strip_pth_power_monomials(c).stripped;
            continue;
        }
        if (deg == pv * (pv - 1) + 1) {
            d.include_t1_term = true;
            continue;
        }
        if (mod_euclid(deg - 1, pv) != 0)
            throw error("internal: unexpected fibre y-degree " + std::to_string(deg));
        i64 j = (deg - 1) / pv + 1;
        if (j < 1 || j >= pv) throw error("internal: fibre y-degree out of range");
        u32 jinv = fp_inv(fp_reduce(j, p), p);
        ResidueSeries cj_p = c.scaled(-static_cast<i64>(jinv)); // c = -j cbar_j^p
        if (!cj_p.is_pth_power())
            throw error("internal: middle fibre coefficient is not a p-th power");
        d.cbars[static_cast<std::size_t>(j - 1)] = cj_p.pth_root();
    }
    return d;
}

BiElement lift_degen_data_p(const DegenDataP& data, std::optional<i64> t_window) {
    PrimeChar p = data.abar.prime();
    const i64 pv = p.value();
    if (data.n < 0) throw schema_error("lift: negative level");
    if (data.n > 0 && data.abar.is_pth_power())
        throw schema_error("lift: radicial datum must not be a p-th power");
    std::optional<i64> win = t_window;
    if (win && !data.abar.window_empty()) win = std::min(*win, data.abar.valuation());
    return BiElement::lift(data.abar, BiElement::kExact, win).pi_shifted(-pv * data.n);
}

WittBi lift_degen_data_p2(const DegenDataP2& data, std::optional<i64> t_window) {
    PrimeChar p = data.a1bar.prime();
    const i64 pv = p.value();
    const i64 K = big_k(pv);
    std::optional<i64> win = t_window;
    auto widen = [&](const ResidueSeries& s) {
        if (win && !s.window_empty()) win = std::min(*win, s.valuation());
    };
    widen(data.a1bar);
    widen(data.a2bar);
    widen(data.gbar);
    for (auto& c : data.cbars) widen(c);
    auto L = [&](const ResidueSeries& s) { return BiElement::lift(s, BiElement::kExact, win); };

    switch (data.kind) {
        case DegenDataP2::Kind::A: return WittBi{L(data.a1bar), L(data.a2bar), Twist{0, 0}};
        case DegenDataP2::Kind::B: {
            if (data.n2v <= 0) throw schema_error("kind B lift needs n2 > 0");
            if (data.a2bar.is_pth_power())
                throw schema_error("kind B lift: radicial datum is a p-th power");
            return WittBi{L(data.a1bar), L(data.a2bar).pi_shifted(-pv * data.n2v), Twist{0, 0}};
        }
        case DegenDataP2::Kind::C: break;
    }
    if (data.a1bar.is_pth_power()) throw schema_error("kind C lift: a1 is a p-th power");
    if (data.n1v <= 0 || data.n2v <= 0) throw schema_error("kind C lift needs positive levels");
    bool has_c = false;
    for (auto& c : data.cbars)
        if (!c.window_empty()) has_c = true;
    bool equality = (pv * data.n2v == data.n1v * K);
    if (!equality && pv * data.n2v < data.n1v * K)
        throw schema_error("kind C lift: levels below n2 >= n1(p(p-1)+1)/p");
    if (equality != data.include_t1_term)
        throw schema_error("kind C lift: include_t1_term must match the level-equality branch");

    BiElement a1 = L(data.a1bar).pi_shifted(-pv * data.n1v);
    if (!has_c) {
        if (data.gbar.window_empty()) throw schema_error("kind C lift: empty payload");
        return WittBi{a1, L(data.gbar).pi_shifted(-pv * data.n2v), Twist{0, 0}};
    }
    if (data.n1v % pv != 0)
        throw schema_error("kind C lift with a nonzero c-tuple needs p | n1 (the displayed "
                           "lifting shapes)");
    const i64 np = data.n1v; // n' of the displayed equations
    i64 m;
    if (equality) {
        m = pv * np; // first variant: m = n'p, n' = p n''
    } else {
        // second variant: mp - n'(p-1) = p n2
        if ((np * (pv - 1)) % pv != 0) throw schema_error("kind C lift: n'(p-1) not divisible by p");
        m = data.n2v + np * (pv - 1) / pv;
    }
    BiElement a1int = L(data.a1bar);
    BiElement f(p, BiElement::kExact, win);
    for (i64 j = 1; j < pv; ++j) {
        const ResidueSeries& cj = data.cbars[static_cast<std::size_t>(j - 1)];
        if (cj.window_empty()) continue;
        f = f + L(cj).pow(pv) * a1int.pow(static_cast<std::uint64_t>(j));
    }
    BiElement x2 = f.pi_shifted(-pv * m) + L(data.gbar).pi_shifted(-pv * m + np * (pv - 1));
    return WittBi{a1, x2, Twist{0, 0}};
}

LiftPrediction lift_prediction_p2(PrimeChar p, const DegenDataP2& data) {
    const i64 pv = p.value();
    LiftPrediction pred;
    switch (data.kind) {
        case DegenDataP2::Kind::A: return pred;
        case DegenDataP2::Kind::B: pred.delta2 = data.n2v * (pv - 1); return pred;
        case DegenDataP2::Kind::C:
            pred.delta1 = data.n1v * (pv - 1);
            pred.delta2 = data.n2v * (pv - 1);
            return pred;
    }
    return pred;
}

} // namespace pcov
