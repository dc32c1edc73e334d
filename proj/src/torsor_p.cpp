#include "pcov/torsor_p.hpp"

#include <algorithm>

namespace pcov {

namespace {

i64 auto_budget(const BiElement& a, const NormalizeOptions& opt) {
    if (opt.iteration_budget > 0) return opt.iteration_budget;
    if (a.pi_prec() != BiElement::kExact) return 4 * std::max<i64>(a.pi_prec(), 2);
    i64 span = 8;
    if (!a.terms().empty()) {
        i64 lo = a.terms().begin()->first.first;
        i64 hi = lo;
        for (auto& [k, c] : a.terms()) hi = std::max(hi, k.first);
        span += (hi - lo) + std::max<i64>(-lo, 0);
    }
    return 4 * span;
}

// truncated split witness b with b^p - b = a, valid for v(a) >= 1:
// b = -(a + a^p + a^{p^2} + ...)
BiElement split_witness_series(const BiElement& a) {
    PrimeChar p = a.prime();
    i64 limit = a.pi_prec() == BiElement::kExact ? 64 : a.pi_prec();
    BiElement acc(p, a.pi_prec(), a.t_window(), a.t_prec());
    BiElement pw = a;
    while (!pw.window_empty() && pw.pi_lower_bound() < limit) {
        acc = acc + pw;
        pw = pw.pow(p.value());
    }
    return -acc;
}

} // namespace

namespace {
u32 mult_order(u32 c, PrimeChar p) {
    u32 o = 1;
    u32 x = c % p.value();
    while (x != 1) {
        x = fp_mul(x, c, p);
        ++o;
    }
    return o;
}
unsigned __int128 gcd128(unsigned __int128 a, unsigned __int128 b) {
    while (b) {
        auto t = a % b;
        a = b;
        b = t;
    }
    return a;
}
} // namespace

MthRootReport mth_root_in_fp(u32 c, i64 m, PrimeChar p) {
    MthRootReport rep;
    const u32 pv = p.value();
    c %= pv;
    if (c == 0) throw schema_error("m-th root of zero unit requested");
    i64 mm = mod_euclid(m, pv == 2 ? 1 : pv - 1);
    for (u32 d = 1; d < pv; ++d)
        if (fp_pow(d, static_cast<std::uint64_t>(mm == 0 ? (pv - 1) : mm), p) == c) {
            rep.exists = true;
            rep.root = d;
            return rep;
        }
    // c is an m-th power in F_{p^ell} iff ord(c) divides (p^ell-1)/gcd(m, p^ell-1)
    u32 ord = mult_order(c, p);
    unsigned __int128 md = m < 0 ? -static_cast<unsigned __int128>(m) : static_cast<unsigned __int128>(m);
    if (md == 0) md = 1;
    unsigned __int128 q = 1;
    for (u32 ell = 1; ell <= 40; ++ell) {
        if (q > (static_cast<unsigned __int128>(1) << 120) / pv) break;
        q *= pv;
        if (ell == 1) continue;
        unsigned __int128 card = q - 1;
        unsigned __int128 g = gcd128(md, card);
        if ((card / g) % ord == 0) {
            rep.exists = false;
            rep.extension_degree = ell;
            return rep;
        }
    }
    rep.exists = false;
    rep.extension_degree = 0; // not located within the search bound
    return rep;
}

namespace {

NormalizedPCover normalize_core(const BiElement& input, bool germ, const NormalizeOptions& opt) {
    PrimeChar p = input.prime();
    const i64 pv = p.value();
    if (germ && !input.is_germ())
        throw schema_error("germ normalization expects an element with a germ window");
    if (!germ && input.is_germ())
        throw schema_error("boundary normalization got a germ element; coerce with as_boundary");

    NormalizedPCover out(p);
    out.coboundary_witness = BiElement(p, BiElement::kExact, input.t_window());
    BiElement cur = input;
    i64 budget = auto_budget(input, opt);

    auto apply_move = [&](const BiElement& b) {
        // cur := cur - (b^p - b); torsor class is unchanged
        cur = cur - b.pow(pv) + b;
        out.coboundary_witness = out.coboundary_witness + b;
    };

    for (i64 step = 0;; ++step) {
        if (step > budget)
            throw precision_error("normalization iteration budget exceeded (insufficient precision "
                                  "or pathological input)");
        if (cur.window_empty()) {
            if (cur.is_exact_zero()) {
                out.type = {0, 0, true};
                out.group = GroupSchemeTag::EtaleZpZ();
                out.integral_rhs = cur;
                out.special_fibre_rhs = ResidueSeries(p);
                out.remark = "trivial torsor: right-hand side is exactly zero";
                return out;
            }
            throw precision_error("cannot decide split vs nonsplit: rhs vanishes on the known "
                                  "pi-window");
        }
        i64 v = cur.gauss_valuation();
        if (v > 0) {
            out.type = {0, 0, true};
            out.group = GroupSchemeTag::EtaleZpZ();
            out.integral_rhs = cur;
            out.special_fibre_rhs = ResidueSeries(p);
            out.remark = "split: positive Gauss valuation";
            if (opt.emit_split_witness) out.split_witness = split_witness_series(cur);
            return out;
        }
        if (v == 0) {
            ResidueSeries abar = cur.reduce_mod_pi();
            ArtinSchreierStrip strip = artin_schreier_reduce(abar, false);
            if (!strip.witness.window_empty())
                apply_move(BiElement::lift(strip.witness, BiElement::kExact, cur.t_window()));
            ResidueSeries red = strip.reduced;
            i64 neg_lead = 0;
            bool has_neg = false;
            for (auto& [e, c] : red.coeffs())
                if (e < 0) { neg_lead = e; has_neg = true; break; }
            if (has_neg) {
                out.type = {0, neg_lead, false};
                out.group = GroupSchemeTag::EtaleZpZ();
                out.integral_rhs = cur;
                out.special_fibre_rhs = red;
                out.different = 0;
                return out;
            }
            // no pole left: the residue torsor is split by Hensel on the
            // positive part; only a constant can obstruct over F_p
            u32 c0 = red.coeff(0);
            if (c0 == 0) {
                if (red.window_empty() && !red.exact())
                    throw precision_error("residue reduction indeterminate");
                out.type = {0, 0, true};
                out.group = GroupSchemeTag::EtaleZpZ();
                out.integral_rhs = cur;
                out.special_fibre_rhs = red;
                out.remark = "split: residue class lies in (t)k[[t]], Hensel section exists";
                return out;
            }
            out.type = {0, 0, false};
            out.group = GroupSchemeTag::EtaleZpZ();
            out.integral_rhs = cur;
            out.special_fibre_rhs = red;
            out.remark = "unramified nontrivial: residue constant " + std::to_string(c0) +
                         " needs the degree-p constant-field extension of F_p";
            return out;
        }
        // v < 0
        i64 nu = -v;
        if (mod_euclid(nu, pv) != 0)
            throw ramification_error("totally ramified: pi-denominator " + std::to_string(nu) +
                                     " is prime to p");
        BiElement u = cur.pi_shifted(nu);
        ResidueSeries ubar = u.reduce_mod_pi();
        if (!ubar.is_pth_power()) {
            i64 n = nu / pv;
            // strip p-th power monomials of the reduction; each removal is the
            // move u -= h^p - pi^{n(p-1)} h, i.e. a coboundary in generic
            // coordinates
            PthPowerStrip st = strip_pth_power_monomials(ubar);
            if (!st.root.window_empty()) {
                BiElement h = BiElement::lift(st.root, BiElement::kExact, cur.t_window());
                apply_move(h.pi_shifted(-n));
                u = cur.pi_shifted(nu);
            }
            ResidueSeries fib = u.reduce_mod_pi();
            if (fib.window_empty())
                throw precision_error("alpha_p fibre vanished after stripping; precision too low");
            out.type = {n, fib.valuation(), false};
            out.group = GroupSchemeTag::Mn(n);
            out.integral_rhs = u;
            out.special_fibre_rhs = fib;
            out.different = n * (pv - 1);
            return out;
        }
        // re-descent: ubar = broot^p, replace a = u/pi^nu by
        // broot/pi^{nu/p} + (u - B^p)/pi^nu
        ResidueSeries broot = ubar.pth_root();
        BiElement B = BiElement::lift(broot, BiElement::kExact, cur.t_window());
        apply_move(B.pi_shifted(-nu / pv));
        if (!cur.window_empty() && cur.gauss_valuation() <= v)
            throw error("internal: re-descent failed to raise the valuation");
    }
}

// Optional cleanup toward the canonical "rhs = T^m" shape. The type never
// depends on it. Applied only when the fibre is a single monomial c t^m:
// then T |-> root^{-1} T with root^m = c rescales exactly.
void attempt_parameter_cleanup(NormalizedPCover& out, PrimeChar p) {
    if (out.type.split || out.special_fibre_rhs.window_empty()) return;
    const auto& coeffs = out.special_fibre_rhs.coeffs();
    if (coeffs.size() != 1) {
        out.remark += (out.remark.empty() ? "" : "; ");
        out.remark += "parameter cleanup skipped: fibre is not a monomial";
        return;
    }
    i64 m = coeffs.begin()->first;
    u32 c = coeffs.begin()->second;
    if (m == 0 || c == 1) return;
    MthRootReport rep = mth_root_in_fp(c, m, p);
    out.remark += (out.remark.empty() ? "" : "; ");
    if (!rep.exists) {
        out.remark += "leading unit " + std::to_string(c) + " has no " + std::to_string(m) +
                      "-th root in F_p (needs extension of degree " +
                      std::to_string(rep.extension_degree) + ")";
        return;
    }
    const u32 ordexp = p.value() == 2 ? 1 : p.value() - 1;
    u32 rinv = fp_inv(rep.root, p);
    BiElement scaledrhs(p, out.integral_rhs.pi_prec(), out.integral_rhs.t_window(),
                        out.integral_rhs.t_prec());
    for (auto& [k, cc] : out.integral_rhs.terms()) {
        u32 f = fp_pow(rinv, static_cast<std::uint64_t>(mod_euclid(k.second, ordexp)), p);
        scaledrhs.set_coeff(k.first, k.second, fp_mul(cc, f, p));
    }
    ResidueSeries fib(p, out.special_fibre_rhs.prec());
    for (auto& [e, cc] : out.special_fibre_rhs.coeffs()) {
        u32 f = fp_pow(rinv, static_cast<std::uint64_t>(mod_euclid(e, ordexp)), p);
        fib.set_coeff(e, fp_mul(cc, f, p));
    }
    out.integral_rhs = scaledrhs;
    out.special_fibre_rhs = fib;
    out.remark += "parameter scaled by the inverse " + std::to_string(m) + "-th root " +
                  std::to_string(rep.root);
}

} // namespace

NormalizedPCover normalize_boundary_p(const BiElement& a_K, const NormalizeOptions& opt) {
    NormalizedPCover out = normalize_core(a_K, false, opt);
    if (opt.normalize_parameter) attempt_parameter_cleanup(out, a_K.prime());
    return out;
}

NormalizedPCover normalize_germ_p(const BiElement& a_K, const NormalizeOptions& opt) {
    NormalizedPCover out = normalize_core(a_K, true, opt);
    if (opt.normalize_parameter) attempt_parameter_cleanup(out, a_K.prime());
    return out;
}

} // namespace pcov
