#ifndef PCOV_WITT_HPP
#define PCOV_WITT_HPP

#include <optional>
#include <string>
#include <vector>

#include "pcov/bielem.hpp"
#include "pcov/series.hpp"

namespace pcov {

// Twist parameters (m1, m2) of the twisted length-2 Witt group scheme;
// m2 - p*m1 >= 0. (0, 0) is the classical group law.
struct Twist {
    i64 m1 = 0;
    i64 m2 = 0;
    friend bool operator==(const Twist& a, const Twist& b) { return a.m1 == b.m1 && a.m2 == b.m2; }
};

void check_twist(const Twist& t, PrimeChar p);

// Tags for the finite flat group schemes the engines produce. Group schemes
// are carried as tags plus parameters only; every computation factors
// through equations.
struct GroupSchemeTag {
    enum class Kind { EtaleZpZ, Mn, EtaleZp2Z, Wm1m2, Hm1m2, AlphaP, Hk, Gk };
    Kind kind = Kind::EtaleZpZ;
    i64 a = 0, b = 0; // Mn: a = n.  Wm1m2 / Hm1m2: (a, b) = (m1, m2).

    // M_0 is the etale constant group scheme Z/pZ.
    static GroupSchemeTag Mn(i64 n);
    static GroupSchemeTag EtaleZpZ() { return {Kind::EtaleZpZ, 0, 0}; }
    static GroupSchemeTag EtaleZp2Z() { return {Kind::EtaleZp2Z, 0, 0}; }
    static GroupSchemeTag Wm1m2(i64 m1, i64 m2) { return {Kind::Wm1m2, m1, m2}; }
    static GroupSchemeTag Hm1m2(i64 m1, i64 m2) { return {Kind::Hm1m2, m1, m2}; }
    static GroupSchemeTag AlphaP() { return {Kind::AlphaP, 0, 0}; }
    static GroupSchemeTag Hk() { return {Kind::Hk, 0, 0}; }
    static GroupSchemeTag Gk() { return {Kind::Gk, 0, 0}; }

    std::string str() const;
    friend bool operator==(const GroupSchemeTag& x, const GroupSchemeTag& y) {
        return x.kind == y.kind && x.a == y.a && x.b == y.b;
    }
};

// sum_{k=1}^{p-1} [binom(p,k)/p mod p] x1^k y1^{p-k}, the correction term of
// the length-2 group law. The bivariate overload scales by pi^{scale_exp}
// (scale_exp = m2 - p*m1 >= 0).
ResidueSeries witt_carry(const ResidueSeries& x1, const ResidueSeries& y1);
BiElement witt_carry(const BiElement& x1, const BiElement& y1, i64 scale_exp);

template <class Dom>
struct WittVec2 {
    Dom x1, x2;
    Twist twist;
};

using WittRes = WittVec2<ResidueSeries>;
using WittBi = WittVec2<BiElement>;

WittRes witt_add(const WittRes& u, const WittRes& v);
WittRes witt_neg(const WittRes& u);
WittRes witt_sub(const WittRes& u, const WittRes& v);

WittBi witt_add(const WittBi& u, const WittBi& v);
WittBi witt_neg(const WittBi& u);
WittBi witt_sub(const WittBi& u, const WittBi& v);

// x -> x^p - pi^{(p-1)n} x, the isogeny with kernel M_n.
BiElement isogeny_phi_n(const BiElement& x, i64 n);

// Frobenius minus the twisted inclusion: W_{m1,m2} -> W_{p m1, p m2}.
// Kernel H_{m1,m2}.
WittBi isogeny_phi_m1m2(const WittBi& u);

// The explicit generic-fibre identification (W_{m1,m2})_K ~ W_{2,K}:
// (x1, x2) -> (x1/pi^{m1}, x2/pi^{m2}), and its inverse.
WittBi untwist_to_generic(const WittBi& u);
WittBi twist_from_generic(const WittBi& u, const Twist& t);

// Apply the Artin-Schreier-Witt coboundary to a generic Witt coordinate
// pair: (a1, a2) + F(b1, b2) - (b1, b2) at twist (0,0).
WittBi witt_coboundary_apply(const WittBi& a, const BiElement& b1, const BiElement& b2);

// Structured torsor equation(s) for a group scheme tag: lhs operator data
// plus right-hand sides, printable and consumable by the engines.
struct EquationRecord {
    struct Line {
        std::string var;    // cover variable name
        i64 twist_exp;      // X^p - pi^{twist_exp} X = ...; twist_exp = 0 means X^p - X
        bool has_linear;    // false: radicial lhs X^p = ...
        BiElement rhs;      // the coefficient datum a_i
        std::string carry;  // rendered correction term involving lower variables, if any
    };
    GroupSchemeTag group;
    std::vector<Line> lines;

    std::string text() const;
    std::string latex() const;
};

EquationRecord torsor_equations(const GroupSchemeTag& tag, const std::vector<BiElement>& rhs);

} // namespace pcov

#endif
