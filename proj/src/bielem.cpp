#include "pcov/bielem.hpp"

#include <algorithm>
#include <sstream>

namespace pcov {

namespace {
i64 add_clamped(i64 a, i64 b) {
    if (a == BiElement::kExact || b == BiElement::kExact) return BiElement::kExact;
    return a + b;
}
} // namespace

BiElement BiElement::monomial(PrimeChar p, i64 i, i64 j, i64 coeff, i64 pi_prec,
                              std::optional<i64> t_window) {
    BiElement e(p, pi_prec, t_window);
    e.set_coeff(i, j, coeff);
    return e;
}

BiElement BiElement::from_terms(PrimeChar p, const std::vector<std::pair<Key, i64>>& terms,
                                i64 pi_prec, std::optional<i64> t_window) {
    BiElement e(p, pi_prec, t_window);
    for (auto& [k, c] : terms) e.set_coeff(k.first, k.second, fp_add(e.coeff(k.first, k.second), fp_reduce(c, p), p));
    return e;
}

BiElement BiElement::lift(const ResidueSeries& s, i64 pi_prec, std::optional<i64> t_window) {
    BiElement e(s.prime(), pi_prec, t_window, s.prec());
    for (auto& [j, c] : s.coeffs()) e.set_coeff(0, j, c);
    return e;
}

u32 BiElement::coeff(i64 i, i64 j) const {
    auto it = terms_.find({i, j});
    return it == terms_.end() ? 0 : it->second;
}

void BiElement::set_coeff(i64 i, i64 j, i64 c) {
    u32 r = fp_reduce(c, p_);
    if (i >= pi_prec_ || j >= t_prec_) {
        if (r != 0) throw precision_error("coefficient set beyond precision window");
        return;
    }
    if (t_window_ && j < *t_window_)
        throw schema_error("T-exponent " + std::to_string(j) + " below germ window");
    if (r == 0)
        terms_.erase({i, j});
    else
        terms_[{i, j}] = r;
}

void BiElement::add_term(i64 i, i64 j, u32 c) {
    if (i >= pi_prec_ || j >= t_prec_ || c == 0) return;
    u32 s = fp_add(coeff(i, j), c, p_);
    if (s == 0)
        terms_.erase({i, j});
    else
        terms_[{i, j}] = s;
}

i64 BiElement::gauss_valuation() const {
    if (!terms_.empty()) return terms_.begin()->first.first;
    if (pi_prec_ == kExact) return kValInf;
    throw precision_error("Gauss valuation indeterminate: zero up to O(pi^" +
                          std::to_string(pi_prec_) + ")");
}

i64 BiElement::pi_lower_bound() const {
    if (!terms_.empty()) return terms_.begin()->first.first;
    return pi_prec_ == kExact ? kValInf : pi_prec_;
}

i64 BiElement::t_lower_bound() const {
    if (terms_.empty()) return t_prec_ == kExact ? kValInf : t_prec_;
    i64 m = terms_.begin()->first.second;
    for (auto& [k, c] : terms_) m = std::min(m, k.second);
    return m;
}

void BiElement::check_compatible(const BiElement& o) const {
    if (p_ != o.p_) throw schema_error("mixed characteristics in ring arithmetic");
    if (t_window_.has_value() != o.t_window_.has_value())
        throw schema_error("mixing germ and boundary elements without explicit coercion");
}

BiElement BiElement::operator-() const {
    BiElement r = *this;
    for (auto& [k, c] : r.terms_) c = fp_neg(c, p_);
    return r;
}

BiElement BiElement::operator+(const BiElement& o) const {
    check_compatible(o);
    BiElement r(p_, std::min(pi_prec_, o.pi_prec_),
                t_window_ ? std::optional<i64>(std::min(*t_window_, *o.t_window_)) : std::nullopt,
                std::min(t_prec_, o.t_prec_));
    for (auto& [k, c] : terms_)
        if (k.first < r.pi_prec_ && k.second < r.t_prec_) r.terms_[k] = c;
    for (auto& [k, c] : o.terms_) r.add_term(k.first, k.second, c);
    return r;
}

BiElement BiElement::operator-(const BiElement& o) const { return *this + (-o); }

BiElement BiElement::operator*(const BiElement& o) const {
    check_compatible(o);
    i64 pi_prec = kExact;
    if (pi_prec_ != kExact || o.pi_prec_ != kExact) {
        i64 a = (pi_prec_ == kExact || o.pi_lower_bound() == kValInf)
                    ? kExact
                    : pi_prec_ + o.pi_lower_bound();
        i64 b = (o.pi_prec_ == kExact || pi_lower_bound() == kValInf)
                    ? kExact
                    : o.pi_prec_ + pi_lower_bound();
        pi_prec = std::min(a, b);
    }
    i64 t_prec = kExact;
    if (t_prec_ != kExact || o.t_prec_ != kExact) {
        i64 a = (t_prec_ == kExact || o.t_lower_bound() == kValInf) ? kExact
                                                                    : t_prec_ + o.t_lower_bound();
        i64 b = (o.t_prec_ == kExact || t_lower_bound() == kValInf) ? kExact
                                                                    : o.t_prec_ + t_lower_bound();
        t_prec = std::min(a, b);
    }
    BiElement r(p_, pi_prec,
                t_window_ ? std::optional<i64>(*t_window_ + *o.t_window_) : std::nullopt, t_prec);
    for (auto& [k1, c1] : terms_)
        for (auto& [k2, c2] : o.terms_)
            r.add_term(k1.first + k2.first, k1.second + k2.second, fp_mul(c1, c2, p_));
    return r;
}

BiElement BiElement::scaled(i64 c) const {
    u32 cc = fp_reduce(c, p_);
    BiElement r(p_, pi_prec_, t_window_, t_prec_);
    if (cc == 0) return r;
    for (auto& [k, v] : terms_) r.terms_[k] = fp_mul(v, cc, p_);
    return r;
}

BiElement BiElement::pi_shifted(i64 d) const {
    BiElement r(p_, add_clamped(pi_prec_, d), t_window_, t_prec_);
    for (auto& [k, c] : terms_) r.terms_[{k.first + d, k.second}] = c;
    return r;
}

BiElement BiElement::t_shifted(i64 d) const {
    std::optional<i64> w = t_window_;
    if (w) w = *w + d;
    BiElement r(p_, pi_prec_, w, add_clamped(t_prec_, d));
    for (auto& [k, c] : terms_) r.terms_[{k.first, k.second + d}] = c;
    return r;
}

BiElement BiElement::pow(std::uint64_t k) const {
    BiElement r = monomial(p_, 0, 0, 1, kExact, t_window_ ? std::optional<i64>(0) : std::nullopt);
    BiElement b = *this;
    while (k) {
        if (k & 1) r = r * b;
        b = b * b;
        k >>= 1;
    }
    return r;
}

BiElement BiElement::as_boundary() const {
    BiElement r(p_, pi_prec_, std::nullopt, t_prec_);
    r.terms_ = terms_;
    return r;
}

ResidueSeries BiElement::reduce_mod_pi() const {
    i64 v = pi_lower_bound();
    if (v != kValInf && v < 0)
        throw error("reduce_mod_pi on an element of negative Gauss valuation");
    if (pi_prec_ != kExact && pi_prec_ <= 0)
        throw precision_error("reduction mod pi unknown at precision O(pi^" +
                              std::to_string(pi_prec_) + ")");
    ResidueSeries s(p_, t_prec_ == kExact ? ResidueSeries::kExact : t_prec_);
    for (auto& [k, c] : terms_)
        if (k.first == 0) s.set_coeff(k.second, c);
    return s;
}

std::string BiElement::str(const std::string& pi, const std::string& T) const {
    std::ostringstream os;
    bool first = true;
    for (auto& [k, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        bool lead = false;
        if (c != 1 || (k.first == 0 && k.second == 0)) {
            os << c;
            lead = true;
        }
        if (k.first != 0) {
            if (lead) os << "*";
            os << pi;
            if (k.first != 1) os << "^" << k.first;
            lead = true;
        }
        if (k.second != 0) {
            if (lead) os << "*";
            os << T;
            if (k.second != 1) os << "^" << k.second;
        }
    }
    if (first) os << "0";
    if (pi_prec_ != kExact) os << " + O(" << pi << "^" << pi_prec_ << ")";
    if (t_prec_ != kExact) os << " + O(" << T << "^" << t_prec_ << ")";
    return os.str();
}

} // namespace pcov
