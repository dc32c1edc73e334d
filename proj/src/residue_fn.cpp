#include "pcov/residue_fn.hpp"

#include <algorithm>
#include <sstream>

namespace pcov {

Poly poly_add(const Poly& a, const Poly& b, PrimeChar p) {
    Poly r = a;
    for (auto& [e, c] : b) {
        u32 s = fp_add(r.count(e) ? r[e] : 0, c, p);
        if (s == 0)
            r.erase(e);
        else
            r[e] = s;
    }
    return r;
}

Poly poly_neg(const Poly& a, PrimeChar p) {
    Poly r;
    for (auto& [e, c] : a) r[e] = fp_neg(c, p);
    return r;
}

Poly poly_mul(const Poly& a, const Poly& b, PrimeChar p) {
    Poly r;
    for (auto& [e1, c1] : a)
        for (auto& [e2, c2] : b) {
            u32 s = fp_add(r.count(e1 + e2) ? r[e1 + e2] : 0, fp_mul(c1, c2, p), p);
            if (s == 0)
                r.erase(e1 + e2);
            else
                r[e1 + e2] = s;
        }
    return r;
}

Poly poly_scale(const Poly& a, u32 c, PrimeChar p) {
    Poly r;
    if (c % p.value() == 0) return r;
    for (auto& [e, v] : a) r[e] = fp_mul(v, c, p);
    return r;
}

Poly poly_pow(const Poly& a, std::uint64_t k, PrimeChar p) {
    Poly r{{0, 1}};
    Poly b = a;
    while (k) {
        if (k & 1) r = poly_mul(r, b, p);
        b = poly_mul(b, b, p);
        k >>= 1;
    }
    return r;
}

i64 poly_deg(const Poly& a) { return a.empty() ? -1 : a.rbegin()->first; }

RationalFn RationalFn::from_poly(PrimeChar p, const Poly& q) {
    RationalFn f(p);
    f.poly_ = q;
    f.trim();
    return f;
}

RationalFn RationalFn::pole_term(PrimeChar p, u32 center, i64 order, i64 coeff) {
    if (order < 1) throw schema_error("pole order must be >= 1");
    RationalFn f(p);
    u32 c = fp_reduce(coeff, p);
    if (c != 0) f.poles_[center % p.value()][order] = c;
    return f;
}

RationalFn RationalFn::x_power(PrimeChar p, i64 d, i64 coeff) {
    if (d < 0) throw schema_error("x_power wants d >= 0; use pole_term");
    RationalFn f(p);
    u32 c = fp_reduce(coeff, p);
    if (c != 0) f.poly_[d] = c;
    return f;
}

void RationalFn::trim() {
    for (auto it = poly_.begin(); it != poly_.end();)
        it = it->second == 0 ? poly_.erase(it) : std::next(it);
    for (auto pit = poles_.begin(); pit != poles_.end();) {
        for (auto it = pit->second.begin(); it != pit->second.end();)
            it = it->second == 0 ? pit->second.erase(it) : std::next(it);
        pit = pit->second.empty() ? poles_.erase(pit) : std::next(pit);
    }
}

RationalFn RationalFn::operator+(const RationalFn& o) const {
    RationalFn r(p_);
    r.poly_ = poly_add(poly_, o.poly_, p_);
    r.poles_ = poles_;
    for (auto& [c, tail] : o.poles_)
        for (auto& [e, v] : tail) {
            u32 s = fp_add(r.poles_[c].count(e) ? r.poles_[c][e] : 0, v, p_);
            if (s == 0)
                r.poles_[c].erase(e);
            else
                r.poles_[c][e] = s;
        }
    r.trim();
    return r;
}

RationalFn RationalFn::operator-() const {
    RationalFn r(p_);
    r.poly_ = poly_neg(poly_, p_);
    for (auto& [c, tail] : poles_)
        for (auto& [e, v] : tail) r.poles_[c][e] = fp_neg(v, p_);
    return r;
}

RationalFn RationalFn::scaled(i64 c) const {
    u32 cc = fp_reduce(c, p_);
    RationalFn r(p_);
    if (cc == 0) return r;
    r.poly_ = poly_scale(poly_, cc, p_);
    for (auto& [ctr, tail] : poles_)
        for (auto& [e, v] : tail) r.poles_[ctr][e] = fp_mul(v, cc, p_);
    return r;
}

namespace {

// binom(n, k) mod p for small n via exact integers
u32 binom_mod(i64 n, i64 k, PrimeChar p) {
    if (k < 0 || k > n) return 0;
    unsigned __int128 b = 1;
    if (k > n - k) k = n - k;
    for (i64 i = 1; i <= k; ++i) b = b * static_cast<unsigned __int128>(n - k + i) / i;
    return static_cast<u32>(b % p.value());
}

// (1 + a u)^{-e} truncated below prec, as a series in u (valuation 0).
ResidueSeries neg_binom_series(PrimeChar p, u32 a, i64 e, i64 prec) {
    // coefficient of u^k: binom(-e, k) a^k = (-1)^k binom(e+k-1, k) a^k
    ResidueSeries s(p, prec);
    for (i64 k = 0; k < std::max<i64>(prec, 0); ++k) {
        u32 c = binom_mod(e + k - 1, k, p);
        if (k % 2 == 1) c = fp_neg(c, p);
        c = fp_mul(c, fp_pow(a, static_cast<std::uint64_t>(k), p), p);
        s.set_coeff(k, c);
    }
    return s;
}

} // namespace

ResidueSeries RationalFn::principal_part(const P1Point& pt) const {
    ResidueSeries s(p_);
    if (pt.at_infinity) {
        // local parameter w = 1/x: x^d -> w^{-d}
        for (auto& [d, c] : poly_)
            if (d > 0) s.set_coeff(-d, c);
    } else {
        auto it = poles_.find(pt.c);
        if (it != poles_.end())
            for (auto& [e, c] : it->second) s.set_coeff(-e, c);
    }
    return s;
}

ResidueSeries RationalFn::expand_at(const P1Point& pt, i64 prec) const {
    ResidueSeries s(p_, prec);
    if (pt.at_infinity) {
        for (auto& [d, c] : poly_) s.set_coeff(-d, c);
        // (x - a)^{-e} = w^e (1 - a w)^{-e}
        for (auto& [a, tail] : poles_)
            for (auto& [e, c] : tail) {
                ResidueSeries t = neg_binom_series(p_, fp_neg(a, p_), e, prec - e).shifted(e);
                s = s + t.scaled(c);
            }
        return s.truncated(prec);
    }
    const u32 c0 = pt.c;
    // polynomial part: x = c0 + u
    for (auto& [d, c] : poly_) {
        for (i64 k = 0; k <= d && k < std::max<i64>(prec, 0); ++k) {
            u32 term = fp_mul(binom_mod(d, k, p_),
                              fp_pow(c0, static_cast<std::uint64_t>(d - k), p_), p_);
            s.set_coeff(k, fp_add(s.coeff(k), fp_mul(c, term, p_), p_));
        }
    }
    for (auto& [a, tail] : poles_) {
        if (a == c0) {
            for (auto& [e, c] : tail)
                if (-e < prec) s.set_coeff(-e, fp_add(s.coeff(-e), c, p_));
            continue;
        }
        // (x - a)^{-e} = (d + u)^{-e} = d^{-e} (1 + u/d)^{-e}, d = c0 - a
        u32 d = fp_sub(c0, a, p_);
        for (auto& [e, c] : tail) {
            u32 lead = fp_pow(fp_inv(d, p_), static_cast<std::uint64_t>(e), p_);
            ResidueSeries t = neg_binom_series(p_, fp_inv(d, p_), e, prec);
            s = s + t.scaled(fp_mul(lead, c, p_));
        }
    }
    return s.truncated(prec);
}

RationalFn RationalFn::derivative() const {
    RationalFn r(p_);
    for (auto& [d, c] : poly_)
        if (d >= 1) {
            u32 cc = fp_mul(fp_reduce(d, p_), c, p_);
            if (cc) r.poly_[d - 1] = fp_add(r.poly_.count(d - 1) ? r.poly_[d - 1] : 0, cc, p_);
        }
    for (auto& [a, tail] : poles_)
        for (auto& [e, c] : tail) {
            u32 cc = fp_mul(fp_reduce(-e, p_), c, p_);
            if (cc) r.poles_[a][e + 1] = fp_add(r.poles_[a].count(e + 1) ? r.poles_[a][e + 1] : 0, cc, p_);
        }
    r.trim();
    return r;
}

std::pair<Poly, Poly> RationalFn::to_fraction() const {
    Poly den{{0, 1}};
    for (auto& [a, tail] : poles_) {
        i64 maxe = tail.rbegin()->first;
        Poly lin{{1, 1}, {0, fp_neg(a, p_)}};
        den = poly_mul(den, poly_pow(lin, static_cast<std::uint64_t>(maxe), p_), p_);
    }
    Poly num = poly_mul(poly_, den, p_);
    for (auto& [a, tail] : poles_) {
        i64 maxe = tail.rbegin()->first;
        Poly lin{{1, 1}, {0, fp_neg(a, p_)}};
        // den / (x-a)^{maxe} as polynomial: rebuild from the other centers
        Poly rest{{0, 1}};
        for (auto& [b, tail2] : poles_) {
            if (b == a) continue;
            Poly lin2{{1, 1}, {0, fp_neg(b, p_)}};
            rest = poly_mul(rest, poly_pow(lin2, static_cast<std::uint64_t>(tail2.rbegin()->first), p_),
                            p_);
        }
        for (auto& [e, c] : tail) {
            Poly part = poly_mul(rest, poly_pow(lin, static_cast<std::uint64_t>(maxe - e), p_), p_);
            num = poly_add(num, poly_scale(part, c, p_), p_);
        }
    }
    return {num, den};
}

std::string RationalFn::str(const std::string& var) const {
    std::ostringstream os;
    bool first = true;
    for (auto& [d, c] : poly_) {
        if (!first) os << " + ";
        first = false;
        if (c != 1 || d == 0) os << c;
        if (d != 0) {
            if (c != 1) os << "*";
            os << var;
            if (d != 1) os << "^" << d;
        }
    }
    for (auto& [a, tail] : poles_)
        for (auto& [e, c] : tail) {
            if (!first) os << " + ";
            first = false;
            if (c != 1) os << c << "*";
            os << "(" << var;
            if (a != 0) os << " - " << a;
            os << ")^-" << e;
        }
    if (first) os << "0";
    return os.str();
}

namespace {

// shared p-power reduction of a local tail
i64 conductor_from_tail(ResidueSeries tail, TorsorKind kind) {
    if (kind == TorsorKind::Radicial) {
        ResidueSeries stripped = strip_pth_power_monomials(tail).stripped;
        if (stripped.window_empty()) return 0;
        return -stripped.valuation();
    }
    ResidueSeries red = artin_schreier_reduce(tail, false).reduced;
    i64 cond = 0;
    for (auto& [e, c] : red.coeffs())
        if (e < 0) {
            cond = -e;
            break;
        }
    return cond;
}

} // namespace

i64 conductor_at_point(const RationalFn& fbar, const P1Point& pt, TorsorKind kind) {
    return conductor_from_tail(fbar.principal_part(pt), kind);
}

XYPoly XYPoly::from_base(PrimeChar pr, const Poly& q) {
    XYPoly r(pr);
    if (!q.empty()) r.comps[0] = q;
    return r;
}

XYPoly XYPoly::y_power(PrimeChar pr, i64 d, i64 coeff) {
    XYPoly r(pr);
    u32 c = fp_reduce(coeff, pr);
    if (c != 0) r.comps[d] = Poly{{0, c}};
    return r;
}

XYPoly XYPoly::operator+(const XYPoly& o) const {
    XYPoly r = *this;
    for (auto& [d, q] : o.comps) {
        Poly s = poly_add(r.comps.count(d) ? r.comps[d] : Poly{}, q, p);
        if (s.empty())
            r.comps.erase(d);
        else
            r.comps[d] = s;
    }
    return r;
}

XYPoly XYPoly::operator-() const {
    XYPoly r(p);
    for (auto& [d, q] : comps) r.comps[d] = poly_neg(q, p);
    return r;
}

XYPoly XYPoly::operator*(const XYPoly& o) const {
    XYPoly r(p);
    for (auto& [d1, q1] : comps)
        for (auto& [d2, q2] : o.comps) {
            Poly s = poly_add(r.comps.count(d1 + d2) ? r.comps[d1 + d2] : Poly{},
                              poly_mul(q1, q2, p), p);
            if (s.empty())
                r.comps.erase(d1 + d2);
            else
                r.comps[d1 + d2] = s;
        }
    return r;
}

bool XYPoly::is_zero() const {
    for (auto& [d, q] : comps)
        if (!q.empty()) return false;
    return true;
}

XYPoly XYPoly::reduced_mod_relation(const Poly& v) const {
    XYPoly r(p);
    const i64 pv = p.value();
    for (auto& [d, q] : comps) {
        i64 k = d / pv, rest = d % pv;
        Poly coeff = poly_mul(q, poly_pow(v, static_cast<std::uint64_t>(k), p), p);
        Poly s = poly_add(r.comps.count(rest) ? r.comps[rest] : Poly{}, coeff, p);
        if (s.empty())
            r.comps.erase(rest);
        else
            r.comps[rest] = s;
    }
    return r;
}

std::string XYPoly::str() const {
    std::ostringstream os;
    bool first = true;
    for (auto& [d, q] : comps) {
        if (!first) os << " + ";
        first = false;
        os << "(";
        bool f2 = true;
        for (auto& [e, c] : q) {
            if (!f2) os << " + ";
            f2 = false;
            os << c;
            if (e) os << "*x^" << e;
        }
        if (f2) os << "0";
        os << ")";
        if (d) os << "*y^" << d;
    }
    if (first) os << "0";
    return os.str();
}

namespace {

// Gaussian elimination over F_p: solve M a = rhs. Columns = unknowns.
std::optional<std::vector<u32>> solve_linear(std::vector<std::vector<u32>> M, std::vector<u32> rhs,
                                             PrimeChar p) {
    const std::size_t rows = M.size();
    const std::size_t cols = rows ? M[0].size() : 0;
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t sel = r;
        while (sel < rows && M[sel][c] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(M[sel], M[r]);
        std::swap(rhs[sel], rhs[r]);
        u32 inv = fp_inv(M[r][c], p);
        for (std::size_t j = c; j < cols; ++j) M[r][j] = fp_mul(M[r][j], inv, p);
        rhs[r] = fp_mul(rhs[r], inv, p);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || M[i][c] == 0) continue;
            u32 f = M[i][c];
            for (std::size_t j = c; j < cols; ++j) M[i][j] = fp_sub(M[i][j], fp_mul(f, M[r][j], p), p);
            rhs[i] = fp_sub(rhs[i], fp_mul(f, rhs[r], p), p);
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (rhs[i] != 0) return std::nullopt;
    std::vector<u32> sol(cols, 0);
    for (std::size_t i = 0; i < r; ++i) sol[pivot_col[i]] = rhs[i];
    return sol;
}

} // namespace

std::optional<std::vector<Poly>> pth_span_solve_poly(const Poly& h, const Poly& v, PrimeChar p,
                                                     i64 degree_cap) {
    const i64 pv = p.value();
    // unknowns: coefficients a_{j,s}, 0 <= j < p, 0 <= s <= cap_j
    std::vector<std::pair<i64, i64>> unknowns; // (j, s)
    std::vector<Poly> vj(pv);
    vj[0] = Poly{{0, 1}};
    for (i64 j = 1; j < pv; ++j) vj[j] = poly_mul(vj[j - 1], v, p);
    i64 maxdeg = poly_deg(h);
    for (i64 j = 0; j < pv; ++j) {
        i64 cap = std::min(degree_cap, floor_div(std::max<i64>(maxdeg, 0) + pv, pv));
        for (i64 s = 0; s <= cap; ++s) unknowns.push_back({j, s});
    }
    // equation rows: every degree up to the max any unknown can reach
    i64 maxrow = maxdeg;
    for (auto& [j, s] : unknowns)
        if (poly_deg(vj[j]) >= 0) maxrow = std::max(maxrow, pv * s + poly_deg(vj[j]));
    if (maxrow < 0) maxrow = 0;
    std::vector<std::vector<u32>> M(static_cast<std::size_t>(maxrow + 1),
                                    std::vector<u32>(unknowns.size(), 0));
    std::vector<u32> rhs(static_cast<std::size_t>(maxrow + 1), 0);
    for (auto& [e, c] : h) rhs[static_cast<std::size_t>(e)] = c;
    for (std::size_t col = 0; col < unknowns.size(); ++col) {
        auto [j, s] = unknowns[col];
        // a_{j,s} t^s contributes a_{j,s}^p t^{ps} v^j = a_{j,s} t^{ps} v^j over F_p
        for (auto& [e, c] : vj[j]) {
            i64 row = pv * s + e;
            M[static_cast<std::size_t>(row)][col] = fp_add(M[static_cast<std::size_t>(row)][col], c, p);
        }
    }
    auto sol = solve_linear(std::move(M), std::move(rhs), p);
    if (!sol) return std::nullopt;
    std::vector<Poly> out(pv);
    for (std::size_t col = 0; col < unknowns.size(); ++col) {
        auto [j, s] = unknowns[col];
        if ((*sol)[col] != 0) out[static_cast<std::size_t>(j)][s] = (*sol)[col];
    }
    return out;
}

bool alpha_p_equivalent(const XYPoly& f, const XYPoly& g, const Poly& v) {
    PrimeChar p = f.p;
    // v must not be a p-th power in k[x] (all exponents p-divisible would do it
    // over F_p)
    bool vp = true;
    for (auto& [e, c] : v)
        if (e % p.value() != 0) vp = false;
    if (vp) throw schema_error("alpha_p_equivalent: v is a p-th power, basis argument fails");
    XYPoly d = (f - g).reduced_mod_relation(v);
    for (auto& [deg, q] : d.comps)
        if (deg != 0 && !q.empty()) return false;
    Poly h = d.comps.count(0) ? d.comps.at(0) : Poly{};
    if (h.empty()) return true;
    i64 cap = floor_div(poly_deg(h), p.value()) + poly_deg(v) + 4;
    return pth_span_solve_poly(h, v, p, cap).has_value();
}

// ---------- residue-level span solving ----------

namespace {

// exact linear solve of u = sum a_j^p v^j where all series are finite
// Laurent polynomials; shifts exponents to >= 0 first. Germ flavor requires
// coefficients supported in exponents >= 0.
SpanSolve span_solve_linear(const ResidueSeries& u, const ResidueSeries& v, bool germ) {
    PrimeChar p = u.prime();
    const i64 pv = p.value();
    if (u.window_empty()) {
        SpanSolve s{SpanSolve::Status::InSpan, {}};
        for (i64 j = 0; j < pv; ++j) s.coeffs.push_back(ResidueSeries(p));
        return s;
    }
    i64 vval = v.valuation();
    i64 uval = u.valuation();
    // shift u by t^{p*sigma} so that candidate coefficients a_j t^{sigma}
    // stay polynomial; sigma chosen from the lowest possible solve exponent
    i64 lowest = std::min<i64>(0, floor_div(uval - (pv - 1) * std::max<i64>(vval, 0) - (pv - 1) * std::min<i64>(vval, 0), pv) - 1);
    if (germ) lowest = 0;
    i64 sigma = -lowest;
    // build polynomial problem: u * t^{p*sigma} = sum (a_j t^{sigma})^p v^j
    ResidueSeries ush = u.shifted(pv * sigma);
    if (!ush.window_empty() && ush.valuation() < 0) {
        // still negative: enlarge sigma
        i64 extra = ceil_div(-ush.valuation(), pv);
        sigma += extra;
        ush = u.shifted(pv * sigma);
    }
    // v may be Laurent too: shift v^j contributions via exponent bookkeeping
    // handle by shifting v to nonneg: v = t^{vval} v0
    ResidueSeries v0 = v.shifted(-vval);
    // a_j^p v^j = a_j^p t^{j*vval} v0^j ; absorb t^{j*vval} into the row index
    Poly h;
    for (auto& [e, c] : ush.coeffs()) {
        if (e < 0) return {SpanSolve::Status::NotInSpan, {}};
        h[e] = c;
    }
    std::vector<Poly> v0j(pv);
    v0j[0] = Poly{{0, 1}};
    Poly v0p;
    for (auto& [e, c] : v0.coeffs()) v0p[e] = c;
    for (i64 j = 1; j < pv; ++j) v0j[j] = poly_mul(v0j[j - 1], v0p, p);

    i64 maxdeg = poly_deg(h);
    // unknowns (j, s): contributes t^{ps + j*vval + supp(v0^j)}
    std::vector<std::pair<i64, i64>> unknowns;
    for (i64 j = 0; j < pv; ++j) {
        i64 smin = germ ? 0 : 0; // after shifting, coefficients start at 0
        i64 smax = floor_div(maxdeg - j * vval, pv) + 2;
        for (i64 s = smin; s <= smax; ++s)
            if (pv * s + j * vval >= 0) unknowns.push_back({j, s});
    }
    i64 maxrow = std::max<i64>(maxdeg, 0);
    for (auto& [j, s] : unknowns) maxrow = std::max(maxrow, pv * s + j * vval + std::max<i64>(poly_deg(v0j[static_cast<std::size_t>(j)]), 0));
    std::vector<std::vector<u32>> M(static_cast<std::size_t>(maxrow + 1),
                                    std::vector<u32>(unknowns.size(), 0));
    std::vector<u32> rhs(static_cast<std::size_t>(maxrow + 1), 0);
    for (auto& [e, c] : h) rhs[static_cast<std::size_t>(e)] = c;
    for (std::size_t col = 0; col < unknowns.size(); ++col) {
        auto [j, s] = unknowns[col];
        for (auto& [e, c] : v0j[static_cast<std::size_t>(j)]) {
            i64 row = pv * s + j * vval + e;
            if (row >= 0 && row <= maxrow)
                M[static_cast<std::size_t>(row)][col] =
                    fp_add(M[static_cast<std::size_t>(row)][col], c, p);
            else if (row > maxrow)
                throw error("internal: span solve row overflow");
        }
    }
    auto sol = solve_linear(std::move(M), std::move(rhs), p);
    if (!sol) return {SpanSolve::Status::NotInSpan, {}};
    SpanSolve out{SpanSolve::Status::InSpan, {}};
    out.coeffs.assign(static_cast<std::size_t>(pv), ResidueSeries(p));
    for (std::size_t col = 0; col < unknowns.size(); ++col) {
        auto [j, s] = unknowns[col];
        if ((*sol)[col] != 0)
            out.coeffs[static_cast<std::size_t>(j)].set_coeff(
                s - sigma, fp_add(out.coeffs[static_cast<std::size_t>(j)].coeff(s - sigma),
                                  (*sol)[col], p));
    }
    // verify reconstruction exactly (the solve was over a bounded window)
    ResidueSeries recon(p);
    for (i64 j = 0; j < pv; ++j)
        recon = recon + out.coeffs[static_cast<std::size_t>(j)].frobenius() *
                            v.pow(static_cast<std::uint64_t>(j));
    if (!((recon - u).window_empty())) return {SpanSolve::Status::Inconclusive, {}};
    if (germ)
        for (auto& a : out.coeffs)
            if (!a.window_empty() && a.valuation() < 0) return {SpanSolve::Status::NotInSpan, {}};
    return out;
}

} // namespace

SpanSolve residue_span_solve(const ResidueSeries& u, const ResidueSeries& v, bool germ) {
    PrimeChar p = u.prime();
    const i64 pv = p.value();
    if (v.window_empty()) throw schema_error("span solve against zero v");
    if (v.is_pth_power()) throw schema_error("span solve: v is a p-th power, not a p-basis");
    if (u.window_empty() && u.exact()) {
        SpanSolve s{SpanSolve::Status::InSpan, {}};
        s.coeffs.assign(static_cast<std::size_t>(pv), ResidueSeries(p));
        return s;
    }
    i64 w = v.valuation();
    if (!germ && mod_euclid(w, pv) != 0) {
        // greedy valuation matching: exponent classes j*w mod p are distinct
        ResidueSeries rem = u;
        std::vector<ResidueSeries> coeffs(static_cast<std::size_t>(pv), ResidueSeries(p));
        u32 winv = fp_inv(fp_reduce(w, p), p);
        u32 lc = v.coeffs().begin()->second;
        int guard = 0;
        const int guard_max = 4096;
        while (!rem.window_empty()) {
            if (++guard > guard_max) return span_solve_linear(u, v, germ);
            i64 e = rem.valuation();
            u32 c = rem.coeffs().begin()->second;
            i64 j = fp_mul(fp_reduce(e, p), winv, p); // solves e = j*w mod p
            i64 s = (e - j * w) / pv;
            if ((e - j * w) % pv != 0) return span_solve_linear(u, v, germ);
            u32 gamma = fp_mul(c, fp_inv(fp_pow(lc, static_cast<std::uint64_t>(j), p), p), p);
            // subtract (gamma t^s)^p v^j
            ResidueSeries term = ResidueSeries::monomial(p, pv * s, gamma) *
                                 v.pow(static_cast<std::uint64_t>(j));
            rem = rem - term;
            coeffs[static_cast<std::size_t>(j)].set_coeff(
                s, fp_add(coeffs[static_cast<std::size_t>(j)].coeff(s), gamma, p));
            if (!rem.window_empty() && rem.valuation() <= e)
                throw error("internal: greedy span solve failed to ascend");
        }
        return {SpanSolve::Status::InSpan, coeffs};
    }
    return span_solve_linear(u, v, germ);
}

} // namespace pcov
