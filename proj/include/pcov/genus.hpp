#ifndef PCOV_GENUS_HPP
#define PCOV_GENUS_HPP

#include <string>
#include <vector>

#include "pcov/fp.hpp"

namespace pcov {

// One boundary of a formal germ in a rank-p cover.
struct PBoundary {
    enum class Kind { Type, Split } kind = Kind::Type;
    i64 n = 0, m = 0;
    static PBoundary type(i64 n, i64 m) { return {Kind::Type, n, m}; }
    static PBoundary split() { return {Kind::Split, 0, 0}; }
};

// One boundary in a rank-p^2 cover: an irreducible boundary carries the full
// pair; a boundary over which the special fibre has p components carries the
// residual rank-p type; a split boundary carries nothing.
struct P2Boundary {
    enum class Kind { Pair, PComponents, Split } kind = Kind::Pair;
    i64 n1 = 0, m1 = 0, n2 = 0, m2 = 0; // PComponents uses (n1, m1)
    static P2Boundary pair(i64 n1, i64 m1, i64 n2, i64 m2) {
        return {Kind::Pair, n1, m1, n2, m2};
    }
    static P2Boundary p_components(i64 n, i64 m) { return {Kind::PComponents, n, m, 0, 0}; }
    static P2Boundary split() { return {Kind::Split, 0, 0, 0, 0}; }
};

// 2 g_y - 2 = p (2 g_x - 2) + d_eta - d_s, with
// d_s = sum over etale (n=0, m!=0) and radicial (n!=0) boundaries of
// (-m_i - 1)(p - 1). Split boundaries contribute nothing.
i64 local_rh_p(PrimeChar p, i64 g_x, i64 d_eta, const std::vector<PBoundary>& profile);

// 2 g_y - 2 = p^2 (2 g_x - 2) + d_eta - d_s with d_s = p d_{s,1} + d_{s,2};
// irreducible boundaries feed (-m_{i,1}-1)(p-1) into d_{s,1} and
// (-m_{i,2}-1)(p-1) into d_{s,2}; p-component boundaries feed
// (-m_i-1)(p-1) into d_{s,2}.
i64 local_rh_p2(PrimeChar p, i64 g_x, i64 d_eta, const std::vector<P2Boundary>& profile);

struct GermGenusQuery {
    enum class Germ { Smooth, Double } germ = Germ::Smooth;
    enum class Rank { P, P2 } rank = Rank::P;
    i64 thickness = 0; // double germ only
    i64 branches = 1;
    i64 r = 0; // d_eta = r (p - 1)
    // boundary data; use what the branch count requires
    std::vector<PBoundary> types_p;    // rank p, or residual types in mixed cases
    std::vector<P2Boundary> types_p2;  // rank p^2
    bool strict_paper = false;
};

struct GermGenusResult {
    i64 g = 0;
    std::string rule;                 // which closed form fired
    bool is_smooth_point = false;     // smooth germ verdict
    bool is_double_point = false;     // double germ verdict
    std::vector<std::string> notes;   // flagged asymmetries / printed variants
};

GermGenusResult germ_genus(PrimeChar p, const GermGenusQuery& q);

// delta(t') = delta(0) + m (p-1) t' for t' in 0..t; validates the endpoint
// and monotonicity.
std::vector<i64> different_profile(PrimeChar p, i64 delta0, i64 delta_t, i64 m, i64 t);

} // namespace pcov

#endif
