#include "pcov/fp.hpp"

#include <map>
#include <mutex>

namespace pcov {

namespace {

bool is_prime(u32 n) {
    if (n < 2) return false;
    for (u32 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace

PrimeChar::PrimeChar(u32 p) : p_(p) {
    if (!is_prime(p)) throw schema_error("characteristic must be prime, got " + std::to_string(p));
    if (p >= 128) throw schema_error("characteristic too large for exact binomial tables (p < 128)");
}

u32 fp_pow(u32 a, std::uint64_t e, PrimeChar p) {
    u32 r = 1 % p.value();
    u32 b = a % p.value();
    while (e) {
        if (e & 1) r = fp_mul(r, b, p);
        b = fp_mul(b, b, p);
        e >>= 1;
    }
    return r;
}

u32 fp_inv(u32 a, PrimeChar p) {
    a %= p.value();
    if (a == 0) throw error("inverse of 0 mod " + std::to_string(p.value()));
    return fp_pow(a, p.value() - 2, p);
}

const std::vector<u32>& witt_carry_coeffs(PrimeChar p) {
    static std::mutex mu;
    static std::map<u32, std::vector<u32>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(p.value());
    if (it != cache.end()) return it->second;

    const u32 pv = p.value();
    std::vector<u32> out(pv >= 1 ? pv - 1 : 0);
    unsigned __int128 binom = 1; // binom(p, k), exact
    for (u32 k = 1; k < pv; ++k) {
        binom = binom * (pv - k + 1) / k;
        unsigned __int128 q = binom / pv; // p | binom(p,k) for 0 < k < p
        out[k - 1] = static_cast<u32>(q % pv);
    }
    return cache.emplace(pv, std::move(out)).first->second;
}

} // namespace pcov
