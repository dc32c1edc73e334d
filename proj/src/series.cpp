#include "pcov/series.hpp"

#include <algorithm>
#include <sstream>

namespace pcov {

ResidueSeries ResidueSeries::monomial(PrimeChar p, i64 exp, i64 coeff, i64 prec) {
    ResidueSeries s(p, prec);
    s.set_coeff(exp, coeff);
    return s;
}

ResidueSeries ResidueSeries::from_terms(PrimeChar p, const std::vector<std::pair<i64, i64>>& terms,
                                        i64 prec) {
    ResidueSeries s(p, prec);
    for (auto& [e, c] : terms) s.set_coeff(e, fp_add(s.coeff(e), fp_reduce(c, p), p));
    return s;
}

u32 ResidueSeries::coeff(i64 exp) const {
    auto it = coeffs_.find(exp);
    return it == coeffs_.end() ? 0 : it->second;
}

void ResidueSeries::set_coeff(i64 exp, i64 c) {
    u32 r = fp_reduce(c, p_);
    if (exp >= prec_) {
        if (r != 0) throw precision_error("coefficient set beyond precision window");
        return;
    }
    if (r == 0)
        coeffs_.erase(exp);
    else
        coeffs_[exp] = r;
}

i64 ResidueSeries::valuation() const {
    if (!coeffs_.empty()) return coeffs_.begin()->first;
    if (exact()) return kValInf;
    throw precision_error("valuation indeterminate: zero up to O(t^" + std::to_string(prec_) + ")");
}

i64 ResidueSeries::val_lower_bound() const {
    if (!coeffs_.empty()) return coeffs_.begin()->first;
    return prec_ == kExact ? kValInf : prec_;
}

void ResidueSeries::check_compatible(const ResidueSeries& o) const {
    if (p_ != o.p_) throw schema_error("mixed characteristics in series arithmetic");
}

ResidueSeries ResidueSeries::operator-() const {
    ResidueSeries r(p_, prec_);
    for (auto& [e, c] : coeffs_) r.coeffs_[e] = fp_neg(c, p_);
    return r;
}

ResidueSeries ResidueSeries::operator+(const ResidueSeries& o) const {
    check_compatible(o);
    ResidueSeries r(p_, std::min(prec_, o.prec_));
    for (auto& [e, c] : coeffs_)
        if (e < r.prec_) r.coeffs_[e] = c;
    for (auto& [e, c] : o.coeffs_) {
        if (e >= r.prec_) continue;
        u32 s = fp_add(r.coeff(e), c, p_);
        if (s == 0)
            r.coeffs_.erase(e);
        else
            r.coeffs_[e] = s;
    }
    return r;
}

ResidueSeries ResidueSeries::operator-(const ResidueSeries& o) const { return *this + (-o); }

ResidueSeries ResidueSeries::operator*(const ResidueSeries& o) const {
    check_compatible(o);
    i64 prec = kExact;
    if (!exact() || !o.exact()) {
        // interval-of-knowledge propagation
        i64 a = (prec_ == kExact || o.val_lower_bound() == kValInf)
                    ? kExact
                    : prec_ + o.val_lower_bound();
        i64 b = (o.prec_ == kExact || val_lower_bound() == kValInf)
                    ? kExact
                    : o.prec_ + val_lower_bound();
        prec = std::min(a, b);
    }
    ResidueSeries r(p_, prec);
    for (auto& [e1, c1] : coeffs_)
        for (auto& [e2, c2] : o.coeffs_) {
            i64 e = e1 + e2;
            if (e >= r.prec_) continue;
            u32 s = fp_add(r.coeff(e), fp_mul(c1, c2, p_), p_);
            if (s == 0)
                r.coeffs_.erase(e);
            else
                r.coeffs_[e] = s;
        }
    return r;
}

ResidueSeries ResidueSeries::scaled(i64 c) const {
    u32 cc = fp_reduce(c, p_);
    ResidueSeries r(p_, prec_);
    if (cc == 0) return r;
    for (auto& [e, v] : coeffs_) r.coeffs_[e] = fp_mul(v, cc, p_);
    return r;
}

ResidueSeries ResidueSeries::shifted(i64 dexp) const {
    ResidueSeries r(p_, prec_ == kExact ? kExact : prec_ + dexp);
    for (auto& [e, c] : coeffs_) r.coeffs_[e + dexp] = c;
    return r;
}

ResidueSeries ResidueSeries::pow(std::uint64_t k) const {
    ResidueSeries r = monomial(p_, 0, 1);
    ResidueSeries b = *this;
    while (k) {
        if (k & 1) r = r * b;
        b = b * b;
        k >>= 1;
    }
    return r;
}

ResidueSeries ResidueSeries::truncated(i64 new_prec) const {
    ResidueSeries r(p_, std::min(prec_, new_prec));
    for (auto& [e, c] : coeffs_)
        if (e < r.prec_) r.coeffs_[e] = c;
    return r;
}

bool ResidueSeries::is_pth_power() const {
    for (auto& [e, c] : coeffs_)
        if (mod_euclid(e, p_.value()) != 0) return false;
    return true;
}

ResidueSeries ResidueSeries::pth_root() const {
    if (!is_pth_power()) throw error("pth_root of a non-p-th power");
    i64 prec = prec_ == kExact ? kExact : ceil_div(prec_, p_.value());
    ResidueSeries r(p_, prec);
    for (auto& [e, c] : coeffs_) r.coeffs_[e / static_cast<i64>(p_.value())] = c;
    return r;
}

ResidueSeries ResidueSeries::frobenius() const {
    i64 prec = kExact;
    if (prec_ != kExact) prec = prec_ * static_cast<i64>(p_.value());
    ResidueSeries r(p_, prec);
    for (auto& [e, c] : coeffs_) r.coeffs_[e * static_cast<i64>(p_.value())] = c;
    return r;
}

std::string ResidueSeries::str(const std::string& var) const {
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : coeffs_) {
        if (!first) os << " + ";
        first = false;
        if (c != 1 || e == 0) os << c;
        if (e != 0) {
            if (c != 1) os << "*";
            os << var;
            if (e != 1) os << "^" << e;
        }
    }
    if (first) os << "0";
    if (prec_ != kExact) os << " + O(" << var << "^" << prec_ << ")";
    return os.str();
}

PthPowerStrip strip_pth_power_monomials(const ResidueSeries& s) {
    PrimeChar p = s.prime();
    ResidueSeries stripped(p, s.prec());
    ResidueSeries root(p);
    for (auto& [e, c] : s.coeffs()) {
        if (mod_euclid(e, p.value()) == 0)
            root.set_coeff(floor_div(e, p.value()), c); // c^{1/p} = c over F_p
        else
            stripped.set_coeff(e, c);
    }
    return {stripped, root};
}

ArtinSchreierStrip artin_schreier_reduce(const ResidueSeries& s, bool germ) {
    PrimeChar p = s.prime();
    const i64 pv = p.value();
    ResidueSeries cur = s;
    ResidueSeries witness(p);
    for (;;) {
        i64 target = 0;
        bool found = false;
        for (auto& [e, c] : cur.coeffs()) {
            if (e == 0 || mod_euclid(e, pv) != 0) continue;
            i64 e2 = e / pv;
            if (germ && e2 < 0) continue;
            target = e;
            found = true;
            break;
        }
        if (!found) break;
        u32 c = cur.coeff(target);
        ResidueSeries b = ResidueSeries::monomial(p, target / pv, c);
        // cur - (b^p - b)
        cur = cur - b.frobenius() + b;
        witness = witness + b;
    }
    return {cur, witness};
}

} // namespace pcov
