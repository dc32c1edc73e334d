#ifndef PCOV_BIELEM_HPP
#define PCOV_BIELEM_HPP

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcov/series.hpp"

namespace pcov {

// A finitely supported sum sum c_{ij} pi^i T^j with explicit knowledge
// windows in both directions:
//   - pi_prec: coefficients of pi^i for i >= pi_prec are unknown;
//   - t_prec:  coefficients of T^j for j >= t_prec are unknown (any pi level).
// t_window, when set, marks a germ context (T-power-series ring): every
// stored j must be >= t_window. Boundary elements leave it unset.
class BiElement {
  public:
    static constexpr i64 kExact = std::numeric_limits<i64>::max();
    using Key = std::pair<i64, i64>; // (pi exponent, T exponent)

    explicit BiElement(PrimeChar p, i64 pi_prec = kExact, std::optional<i64> t_window = std::nullopt,
                       i64 t_prec = kExact)
        : p_(p), pi_prec_(pi_prec), t_prec_(t_prec), t_window_(t_window) {}

    static BiElement monomial(PrimeChar p, i64 i, i64 j, i64 coeff, i64 pi_prec = kExact,
                              std::optional<i64> t_window = std::nullopt);
    static BiElement from_terms(PrimeChar p, const std::vector<std::pair<Key, i64>>& terms,
                                i64 pi_prec = kExact, std::optional<i64> t_window = std::nullopt);
    // Lift of a residue series, monomial-wise, at pi-level 0.
    static BiElement lift(const ResidueSeries& s, i64 pi_prec = kExact,
                          std::optional<i64> t_window = std::nullopt);

    PrimeChar prime() const { return p_; }
    i64 pi_prec() const { return pi_prec_; }
    i64 t_prec() const { return t_prec_; }
    bool exact() const { return pi_prec_ == kExact && t_prec_ == kExact; }
    std::optional<i64> t_window() const { return t_window_; }
    bool is_germ() const { return t_window_.has_value(); }
    const std::map<Key, u32>& terms() const { return terms_; }

    bool is_exact_zero() const { return terms_.empty() && pi_prec_ == kExact; }
    bool window_empty() const { return terms_.empty(); }

    u32 coeff(i64 i, i64 j) const;
    void set_coeff(i64 i, i64 j, i64 c);

    // pi-adic Gauss valuation (v(pi) = 1): min stored pi-exponent.
    // kValInf for the exact zero; precision_error when empty at finite prec.
    static constexpr i64 kValInf = std::numeric_limits<i64>::max();
    i64 gauss_valuation() const;
    i64 pi_lower_bound() const;
    i64 t_lower_bound() const;

    BiElement operator-() const;
    BiElement operator+(const BiElement& o) const;
    BiElement operator-(const BiElement& o) const;
    BiElement operator*(const BiElement& o) const;
    BiElement scaled(i64 c) const;
    BiElement pi_shifted(i64 d) const; // multiply by pi^d
    BiElement t_shifted(i64 d) const;  // multiply by T^d (drops germ window if d < 0 would break it)
    BiElement pow(std::uint64_t k) const;

    bool operator==(const BiElement& o) const {
        return p_ == o.p_ && pi_prec_ == o.pi_prec_ && t_prec_ == o.t_prec_ && terms_ == o.terms_;
    }

    // Drop the germ marker (A = R[[T]] embeds into the boundary ring).
    BiElement as_boundary() const;

    // The i = 0 slice as a series in t. Requires gauss_valuation >= 0.
    ResidueSeries reduce_mod_pi() const;

    std::string str(const std::string& pi = "pi", const std::string& T = "T") const;

  private:
    PrimeChar p_;
    std::map<Key, u32> terms_;
    i64 pi_prec_;
    i64 t_prec_;
    std::optional<i64> t_window_;

    void check_compatible(const BiElement& o) const;
    void add_term(i64 i, i64 j, u32 c);
};

} // namespace pcov

#endif
