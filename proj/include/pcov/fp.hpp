#ifndef PCOV_FP_HPP
#define PCOV_FP_HPP

#include <cstdint>
#include <vector>

#include "pcov/errors.hpp"

namespace pcov {

using u32 = std::uint32_t;
using i64 = std::int64_t;

// The session prime p. All residue arithmetic is mod this single prime.
class PrimeChar {
  public:
    explicit PrimeChar(u32 p);

    u32 value() const { return p_; }
    friend bool operator==(PrimeChar a, PrimeChar b) { return a.p_ == b.p_; }
    friend bool operator!=(PrimeChar a, PrimeChar b) { return a.p_ != b.p_; }

  private:
    u32 p_;
};

inline u32 fp_reduce(i64 c, PrimeChar p) {
    i64 m = c % static_cast<i64>(p.value());
    if (m < 0) m += p.value();
    return static_cast<u32>(m);
}

inline u32 fp_add(u32 a, u32 b, PrimeChar p) { return (a + b) % p.value(); }
inline u32 fp_neg(u32 a, PrimeChar p) { return a == 0 ? 0 : p.value() - a; }
inline u32 fp_sub(u32 a, u32 b, PrimeChar p) { return fp_add(a, fp_neg(b, p), p); }
inline u32 fp_mul(u32 a, u32 b, PrimeChar p) {
    return static_cast<u32>((static_cast<std::uint64_t>(a) * b) % p.value());
}

u32 fp_pow(u32 a, std::uint64_t e, PrimeChar p);

// Inverse via Fermat; throws on 0.
u32 fp_inv(u32 a, PrimeChar p);

// Exact floored division helpers for exponent bookkeeping.
inline i64 floor_div(i64 a, i64 b) {
    i64 q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
inline i64 ceil_div(i64 a, i64 b) { return -floor_div(-a, b); }
inline i64 mod_euclid(i64 a, i64 b) { return a - b * floor_div(a, b); }

// Carry coefficients of length-2 Witt addition: entry k-1 holds
// binom(p,k)/p reduced mod p, for k = 1..p-1. The binomials are computed in
// exact integers and divided by p before reduction.
const std::vector<u32>& witt_carry_coeffs(PrimeChar p);

} // namespace pcov

#endif
