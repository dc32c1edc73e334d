#ifndef PCOV_RESIDUE_FN_HPP
#define PCOV_RESIDUE_FN_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pcov/series.hpp"

namespace pcov {

// A point of P^1(F_p).
struct P1Point {
    bool at_infinity = false;
    u32 c = 0;
    static P1Point finite(u32 c) { return {false, c}; }
    static P1Point infinity() { return {true, 0}; }
    friend bool operator==(const P1Point& a, const P1Point& b) {
        return a.at_infinity == b.at_infinity && (a.at_infinity || a.c == b.c);
    }
    friend bool operator<(const P1Point& a, const P1Point& b) {
        if (a.at_infinity != b.at_infinity) return b.at_infinity;
        return a.c < b.c;
    }
    std::string str() const { return at_infinity ? "inf" : std::to_string(c); }
};

// Dense-enough polynomial over F_p (exponents >= 0).
using Poly = std::map<i64, u32>;

Poly poly_add(const Poly& a, const Poly& b, PrimeChar p);
Poly poly_neg(const Poly& a, PrimeChar p);
Poly poly_mul(const Poly& a, const Poly& b, PrimeChar p);
Poly poly_scale(const Poly& a, u32 c, PrimeChar p);
Poly poly_pow(const Poly& a, std::uint64_t k, PrimeChar p);
i64 poly_deg(const Poly& a); // -1 for 0

// A rational function on P^1_k in partial-fraction form: a polynomial part
// plus finite pole tails c_e (x - a)^{-e} at F_p-rational centers.
class RationalFn {
  public:
    explicit RationalFn(PrimeChar p) : p_(p) {}

    static RationalFn from_poly(PrimeChar p, const Poly& q);
    // c * (x - center)^{-order}
    static RationalFn pole_term(PrimeChar p, u32 center, i64 order, i64 coeff);
    static RationalFn x_power(PrimeChar p, i64 d, i64 coeff = 1);

    PrimeChar prime() const { return p_; }
    const Poly& poly_part() const { return poly_; }
    const std::map<u32, std::map<i64, u32>>& pole_parts() const { return poles_; }

    RationalFn operator+(const RationalFn& o) const;
    RationalFn operator-() const;
    RationalFn operator-(const RationalFn& o) const { return *this + (-o); }
    RationalFn scaled(i64 c) const;

    bool is_zero() const { return poly_.empty() && poles_.empty(); }
    bool operator==(const RationalFn& o) const {
        return poly_ == o.poly_ && poles_ == o.poles_;
    }

    // Principal part at a point: the negative-exponent tail of the local
    // expansion in the local parameter (x - c, or 1/x at infinity). Exact.
    ResidueSeries principal_part(const P1Point& pt) const;

    // Truncated full local expansion: exponents < prec.
    ResidueSeries expand_at(const P1Point& pt, i64 prec) const;

    RationalFn derivative() const;

    // N/D with D = prod (x - c)^{max order}; both as plain polynomials.
    std::pair<Poly, Poly> to_fraction() const;

    std::string str(const std::string& var = "x") const;

  private:
    PrimeChar p_;
    Poly poly_;
    std::map<u32, std::map<i64, u32>> poles_; // center -> order -> coeff

    void trim();
};

// Conductor of a rank-p torsor datum at a point of P^1_k: the prime-to-p
// pole order of the local class. Etale kind works modulo b^p - b (moves
// p-divisible pole orders down), radicial kind modulo p-th powers (drops
// p-divisible orders). Returns 0 when no pole survives.
enum class TorsorKind { Etale, Radicial };
i64 conductor_at_point(const RationalFn& fbar, const P1Point& pt, TorsorKind kind);

// -------- the ring k[x][y]/(y^p - v(x)) --------

// y-polynomial with Poly coefficients, kept in unreduced form.
struct XYPoly {
    PrimeChar p;
    std::map<i64, Poly> comps; // y-degree -> coefficient

    explicit XYPoly(PrimeChar pr) : p(pr) {}
    static XYPoly from_base(PrimeChar pr, const Poly& q);
    static XYPoly y_power(PrimeChar pr, i64 d, i64 coeff = 1);
    XYPoly operator+(const XYPoly& o) const;
    XYPoly operator-() const;
    XYPoly operator-(const XYPoly& o) const { return *this + (-o); }
    XYPoly operator*(const XYPoly& o) const;
    bool is_zero() const;
    // reduce y-degrees below p using y^p = v
    XYPoly reduced_mod_relation(const Poly& v) const;
    std::string str() const;
};

// Membership of h in the additive subgroup A^p + A^p v + ... + A^p v^{p-1}
// of A = F_p[x]: an F_p-linear solve (Frobenius is F_p-linear). Returns the
// coefficient polynomials a_j on success.
std::optional<std::vector<Poly>> pth_span_solve_poly(const Poly& h, const Poly& v, PrimeChar p,
                                                     i64 degree_cap);

// Decides whether f - g is a p-th power in k[x][y]/(y^p - v): equivalent
// alpha_p torsors over the cover. v must not itself be a p-th power.
bool alpha_p_equivalent(const XYPoly& f, const XYPoly& g, const Poly& v);

// -------- residue-level span solving over k[[t]] / k((t)) --------

struct SpanSolve {
    enum class Status { InSpan, NotInSpan, Inconclusive } status;
    std::vector<ResidueSeries> coeffs; // a_j, j = 0..p-1, when InSpan
};

// Solve u = sum_j a_j^p v^j over the residue field. Boundary flavor uses the
// greedy valuation match when t-val(v) is prime to p; otherwise (and for the
// germ ring, where coefficients must stay in k[[t]]) an exact linear solve
// over a bounded window. NotInSpan is only reported with a finite
// certificate (an unsolvable truncated system).
SpanSolve residue_span_solve(const ResidueSeries& u, const ResidueSeries& v, bool germ);

} // namespace pcov

#endif
