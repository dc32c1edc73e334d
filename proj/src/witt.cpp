#include "pcov/witt.hpp"

#include <sstream>

namespace pcov {

void check_twist(const Twist& t, PrimeChar p) {
    if (t.m1 < 0 || t.m2 < 0 || t.m2 - static_cast<i64>(p.value()) * t.m1 < 0)
        throw schema_error("invalid twist (m1, m2) = (" + std::to_string(t.m1) + ", " +
                           std::to_string(t.m2) + "): need m1, m2 >= 0 and m2 - p*m1 >= 0");
}

GroupSchemeTag GroupSchemeTag::Mn(i64 n) {
    if (n < 0) throw schema_error("M_n needs n >= 0");
    if (n == 0) return EtaleZpZ();
    return {Kind::Mn, n, 0};
}

std::string GroupSchemeTag::str() const {
    switch (kind) {
        case Kind::EtaleZpZ: return "Z/pZ";
        case Kind::Mn: return "M_" + std::to_string(a);
        case Kind::EtaleZp2Z: return "Z/p^2Z";
        case Kind::Wm1m2: return "W_{" + std::to_string(a) + "," + std::to_string(b) + "}";
        case Kind::Hm1m2: return "H_{" + std::to_string(a) + "," + std::to_string(b) + "}";
        case Kind::AlphaP: return "alpha_p";
        case Kind::Hk: return "H_k";
        case Kind::Gk: return "G_k";
    }
    return "?";
}

ResidueSeries witt_carry(const ResidueSeries& x1, const ResidueSeries& y1) {
    PrimeChar p = x1.prime();
    const auto& cc = witt_carry_coeffs(p);
    const u32 pv = p.value();
    ResidueSeries acc(p);
    // powers built incrementally: x1^k, y1^{p-k}
    std::vector<ResidueSeries> xp, yp;
    xp.reserve(pv);
    yp.reserve(pv);
    ResidueSeries one = ResidueSeries::monomial(p, 0, 1);
    xp.push_back(one);
    yp.push_back(one);
    for (u32 k = 1; k < pv; ++k) {
        xp.push_back(xp.back() * x1);
        yp.push_back(yp.back() * y1);
    }
    for (u32 k = 1; k < pv; ++k) acc = acc + (xp[k] * yp[pv - k]).scaled(cc[k - 1]);
    return acc;
}

BiElement witt_carry(const BiElement& x1, const BiElement& y1, i64 scale_exp) {
    if (scale_exp < 0) throw schema_error("witt_carry: negative pi-scale exponent");
    PrimeChar p = x1.prime();
    const auto& cc = witt_carry_coeffs(p);
    const u32 pv = p.value();
    BiElement acc(p, BiElement::kExact, x1.t_window() ? std::optional<i64>(0) : std::nullopt);
    std::vector<BiElement> xp, yp;
    BiElement one = BiElement::monomial(p, 0, 0, 1, BiElement::kExact,
                                        x1.t_window() ? std::optional<i64>(0) : std::nullopt);
    xp.push_back(one);
    yp.push_back(one);
    for (u32 k = 1; k < pv; ++k) {
        xp.push_back(xp.back() * x1);
        yp.push_back(yp.back() * y1);
    }
    for (u32 k = 1; k < pv; ++k) acc = acc + (xp[k] * yp[pv - k]).scaled(cc[k - 1]);
    return acc.pi_shifted(scale_exp);
}

namespace {
template <class W>
void check_same_twist(const W& u, const W& v) {
    if (!(u.twist == v.twist)) throw schema_error("twist mismatch in Witt arithmetic");
}
} // namespace

// Residue-domain law: the special fibre of W_{m1,m2}. pi^{m2-pm1} reduces to
// 0 unless m2 - p*m1 = 0, so the carry only survives in the untwisted case.
WittRes witt_add(const WittRes& u, const WittRes& v) {
    check_same_twist(u, v);
    PrimeChar p = u.x1.prime();
    check_twist(u.twist, p);
    i64 s = u.twist.m2 - static_cast<i64>(p.value()) * u.twist.m1;
    WittRes r{u.x1 + v.x1, u.x2 + v.x2, u.twist};
    if (s == 0) r.x2 = r.x2 - witt_carry(u.x1, v.x1);
    return r;
}

WittRes witt_neg(const WittRes& u) {
    PrimeChar p = u.x1.prime();
    i64 s = u.twist.m2 - static_cast<i64>(p.value()) * u.twist.m1;
    WittRes r{-u.x1, -u.x2, u.twist};
    if (s == 0) r.x2 = r.x2 + witt_carry(u.x1, -u.x1);
    return r;
}

WittRes witt_sub(const WittRes& u, const WittRes& v) { return witt_add(u, witt_neg(v)); }

WittBi witt_add(const WittBi& u, const WittBi& v) {
    check_same_twist(u, v);
    PrimeChar p = u.x1.prime();
    check_twist(u.twist, p);
    i64 s = u.twist.m2 - static_cast<i64>(p.value()) * u.twist.m1;
    WittBi r{u.x1 + v.x1, u.x2 + v.x2 - witt_carry(u.x1, v.x1, s), u.twist};
    return r;
}

WittBi witt_neg(const WittBi& u) {
    PrimeChar p = u.x1.prime();
    i64 s = u.twist.m2 - static_cast<i64>(p.value()) * u.twist.m1;
    WittBi r{-u.x1, -u.x2 + witt_carry(u.x1, -u.x1, s), u.twist};
    return r;
}

WittBi witt_sub(const WittBi& u, const WittBi& v) { return witt_add(u, witt_neg(v)); }

BiElement isogeny_phi_n(const BiElement& x, i64 n) {
    if (n < 0) throw schema_error("isogeny level n must be >= 0");
    PrimeChar p = x.prime();
    return x.pow(p.value()) - x.pi_shifted((p.value() - 1) * n);
}

WittBi isogeny_phi_m1m2(const WittBi& u) {
    PrimeChar p = u.x1.prime();
    check_twist(u.twist, p);
    const i64 pv = p.value();
    const auto& cc = witt_carry_coeffs(p);
    const i64 m1 = u.twist.m1, m2 = u.twist.m2;

    WittBi r{u.x1.pow(pv) - u.x1.pi_shifted(m1 * (pv - 1)), u.x2, Twist{pv * m1, pv * m2}};
    BiElement corr(p, BiElement::kExact, u.x1.t_window() ? std::optional<i64>(0) : std::nullopt);
    BiElement neg = -u.x1;
    for (i64 k = 1; k < pv; ++k) {
        i64 e = m2 * pv - m1 * (pv * k + pv - k);
        if (e < 0)
            throw schema_error("isogeny exponent m2*p - m1*(pk+p-k) negative; twist invalid");
        corr = corr + (u.x1.pow(pv * k) * neg.pow(pv - k)).scaled(cc[k - 1]).pi_shifted(e);
    }
    r.x2 = u.x2.pow(pv) - u.x2.pi_shifted(m2 * (pv - 1)) - corr;
    return r;
}

WittBi untwist_to_generic(const WittBi& u) {
    return WittBi{u.x1.pi_shifted(-u.twist.m1), u.x2.pi_shifted(-u.twist.m2), Twist{0, 0}};
}

WittBi twist_from_generic(const WittBi& u, const Twist& t) {
    check_twist(t, u.x1.prime());
    return WittBi{u.x1.pi_shifted(t.m1), u.x2.pi_shifted(t.m2), t};
}

WittBi witt_coboundary_apply(const WittBi& a, const BiElement& b1, const BiElement& b2) {
    PrimeChar p = a.x1.prime();
    if (!(a.twist == Twist{0, 0}))
        throw schema_error("coboundary application expects generic (untwisted) coordinates");
    const i64 pv = p.value();
    // F(b) - b with the honest group operations (for p = 2 this differs from
    // the short component formula by an additive square term).
    WittBi Fb{b1.pow(pv), b2.pow(pv), Twist{0, 0}};
    WittBi phi_b = witt_sub(Fb, WittBi{b1, b2, Twist{0, 0}});
    return witt_add(a, phi_b);
}

EquationRecord torsor_equations(const GroupSchemeTag& tag, const std::vector<BiElement>& rhs) {
    auto arity = [&]() -> std::size_t {
        switch (tag.kind) {
            case GroupSchemeTag::Kind::EtaleZpZ:
            case GroupSchemeTag::Kind::Mn:
            case GroupSchemeTag::Kind::AlphaP: return 1;
            default: return 2;
        }
    }();
    if (rhs.size() != arity)
        throw schema_error("torsor_equations: expected " + std::to_string(arity) +
                           " right-hand side(s) for " + tag.str());
    PrimeChar p = rhs[0].prime();
    const i64 pv = p.value();
    EquationRecord rec;
    rec.group = tag;
    switch (tag.kind) {
        case GroupSchemeTag::Kind::EtaleZpZ:
            rec.lines.push_back({"X", 0, true, rhs[0], ""});
            break;
        case GroupSchemeTag::Kind::Mn:
            rec.lines.push_back({"X", tag.a * (pv - 1), true, rhs[0], ""});
            break;
        case GroupSchemeTag::Kind::AlphaP:
            rec.lines.push_back({"x", 0, false, rhs[0], ""});
            break;
        case GroupSchemeTag::Kind::EtaleZp2Z: {
            rec.lines.push_back({"X1", 0, true, rhs[0], ""});
            rec.lines.push_back({"X2", 0, true, rhs[1], "+ (1/p) sum_k C(p,k) X1^{pk} (-X1)^{p-k}"});
            break;
        }
        case GroupSchemeTag::Kind::Wm1m2:
        case GroupSchemeTag::Kind::Hm1m2: {
            i64 m1 = tag.a, m2 = tag.b;
            rec.lines.push_back({"T1", m1 * (pv - 1), true, rhs[0], ""});
            std::ostringstream carry;
            carry << "+ (1/p) sum_k C(p,k) pi^{" << pv * m2 << " - " << m1
                  << "*(pk+p-k)} T1^{pk} (-T1)^{p-k}";
            rec.lines.push_back({"T2", m2 * (pv - 1), true, rhs[1], carry.str()});
            break;
        }
        case GroupSchemeTag::Kind::Hk: {
            rec.lines.push_back({"t1", 0, true, rhs[0], ""});
            rec.lines.push_back({"t2", 0, false, rhs[1], ""});
            break;
        }
        case GroupSchemeTag::Kind::Gk: {
            rec.lines.push_back({"t1", 0, false, rhs[0], ""});
            rec.lines.push_back({"t2", 0, false, rhs[1], ""});
            break;
        }
    }
    return rec;
}

std::string EquationRecord::text() const {
    std::ostringstream os;
    os << "[" << group.str() << "]";
    for (auto& l : lines) {
        os << " " << l.var << "^p";
        if (l.has_linear) {
            if (l.twist_exp == 0)
                os << " - " << l.var;
            else
                os << " - pi^" << l.twist_exp << " " << l.var;
        }
        os << " = " << l.rhs.str();
        if (!l.carry.empty()) os << " " << l.carry;
        os << ";";
    }
    return os.str();
}

std::string EquationRecord::latex() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto& l = lines[i];
        if (i) os << ", \\quad ";
        os << l.var << "^p";
        if (l.has_linear) {
            if (l.twist_exp == 0)
                os << " - " << l.var;
            else
                os << " - \\pi^{" << l.twist_exp << "} " << l.var;
        }
        os << " = " << l.rhs.str("\\pi", "T");
        if (!l.carry.empty()) os << " " << l.carry;
    }
    return os.str();
}

} // namespace pcov
