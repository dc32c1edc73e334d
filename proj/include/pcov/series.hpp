#ifndef PCOV_SERIES_HPP
#define PCOV_SERIES_HPP

#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pcov/fp.hpp"

namespace pcov {

// Truncated Laurent series over F_p in one variable t: finitely many stored
// monomials, all with exponent < prec; exponents >= prec are unknown.
// prec == kExact marks an exact element (in particular the exact zero, which
// is distinguishable from "zero up to O(t^prec)").
class ResidueSeries {
  public:
    static constexpr i64 kExact = std::numeric_limits<i64>::max();
    static constexpr i64 kValInf = std::numeric_limits<i64>::max();

    explicit ResidueSeries(PrimeChar p, i64 prec = kExact) : p_(p), prec_(prec) {}

    static ResidueSeries monomial(PrimeChar p, i64 exp, i64 coeff, i64 prec = kExact);
    static ResidueSeries from_terms(PrimeChar p, const std::vector<std::pair<i64, i64>>& terms,
                                    i64 prec = kExact);

    PrimeChar prime() const { return p_; }
    i64 prec() const { return prec_; }
    bool exact() const { return prec_ == kExact; }
    const std::map<i64, u32>& coeffs() const { return coeffs_; }

    bool is_exact_zero() const { return coeffs_.empty() && exact(); }
    // True when nothing is stored; an exact zero or a "zero so far".
    bool window_empty() const { return coeffs_.empty(); }

    u32 coeff(i64 exp) const;

    // min stored exponent; kValInf for the exact zero; throws
    // precision_error when the window is empty at finite precision.
    i64 valuation() const;
    // Lower bound usable for precision propagation: valuation when a term is
    // stored, otherwise prec (kValInf for exact zero).
    i64 val_lower_bound() const;

    ResidueSeries operator-() const;
    ResidueSeries operator+(const ResidueSeries& o) const;
    ResidueSeries operator-(const ResidueSeries& o) const;
    ResidueSeries operator*(const ResidueSeries& o) const;
    ResidueSeries scaled(i64 c) const;
    ResidueSeries shifted(i64 dexp) const; // multiply by t^dexp
    ResidueSeries pow(std::uint64_t k) const;
    ResidueSeries truncated(i64 new_prec) const;

    bool operator==(const ResidueSeries& o) const {
        return p_ == o.p_ && prec_ == o.prec_ && coeffs_ == o.coeffs_;
    }

    // True iff every stored exponent is divisible by p (k = F_p is perfect,
    // so this decides p-th powerness of the stored window).
    bool is_pth_power() const;
    // exponent/p, coefficients fixed by Frobenius on F_p; prec = ceil(prec/p).
    ResidueSeries pth_root() const;
    ResidueSeries frobenius() const; // t^e -> t^{pe}, the p-th power map

    std::string str(const std::string& var = "t") const;

    void set_coeff(i64 exp, i64 c); // trims zero coefficients, checks prec

  private:
    PrimeChar p_;
    std::map<i64, u32> coeffs_;
    i64 prec_;

    void check_compatible(const ResidueSeries& o) const;
};

// Canonical representative mod p-th powers of k((t)): all monomials with
// p-divisible exponent removed. Records the removed part's p-th root, so the
// move lifts integrally.
struct PthPowerStrip {
    ResidueSeries stripped;
    ResidueSeries root; // h with h^p = removed part
};
PthPowerStrip strip_pth_power_monomials(const ResidueSeries& s);

// Canonical representative mod the Artin-Schreier subgroup {b^p - b}:
// repeatedly replaces a monomial c t^{pe} (e != 0 or germ-positive) by
// c t^e. Nonzero constants are not in the image of b -> b^p - b over F_p and
// stay. `germ` restricts the moves to exponents that remain >= 0.
struct ArtinSchreierStrip {
    ResidueSeries reduced;
    ResidueSeries witness; // b with reduced = input - (b^p - b)
};
ArtinSchreierStrip artin_schreier_reduce(const ResidueSeries& s, bool germ);

} // namespace pcov

#endif
