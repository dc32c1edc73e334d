#ifndef PCOV_TORSOR_P2_HPP
#define PCOV_TORSOR_P2_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pcov/torsor_p.hpp"

namespace pcov {

// Degeneration type of a p^2-cyclic cover over a boundary:
// the pair {(n1, m1), (n2, m2)} plus a marker for degenerate splitting.
struct DegTypeP2 {
    DegTypeP first;  // (n1, m1)
    DegTypeP second; // (n2, m2)
    enum class SplitLevel { None, TopOnly, Full } split_level = SplitLevel::None;
    friend bool operator==(const DegTypeP2& a, const DegTypeP2& b) {
        return a.first == b.first && a.second == b.second && a.split_level == b.split_level;
    }
    std::string str() const {
        if (split_level == SplitLevel::Full) return "split";
        if (split_level == SplitLevel::TopOnly) return "{" + first.str() + ", split}";
        return "{" + first.str() + ", " + second.str() + "}";
    }
};

// Admissibility of a pair (the arithmetic constraints boundary types
// satisfy) and the smoothness-compatible refinement ("condition (*)").
struct PairCheck {
    bool ok = false;
    std::string branch;     // which disjunct fired
    i64 witness_m2 = 0;     // the auxiliary conductor m2, when one exists
};
PairCheck admissible_pair_check(PrimeChar p, const DegTypeP2& pair);
PairCheck condition_star_check(PrimeChar p, const DegTypeP2& pair);
inline bool is_admissible_pair(PrimeChar p, const DegTypeP2& pair) {
    return admissible_pair_check(p, pair).ok;
}
inline bool satisfies_condition_star(PrimeChar p, const DegTypeP2& pair) {
    return condition_star_check(p, pair).ok;
}

// y-polynomials over the base: elements of B = A[Y]/(Y^p - pi^{(p-1)n} Y - v)
// kept in unreduced form (degrees stay <= p(p-1)+1 in every computation).
using YPolyBi = std::map<i64, BiElement>;
using YPolyRes = std::map<i64, ResidueSeries>;

// The decomposition u = f(v) + pi u' with f(v) = a_0^p + a_1^p v + ... +
// a_{p-1}^p v^{p-1} (Lemma-level input to the second-coordinate rounds).
struct AvDecomposition {
    std::vector<ResidueSeries> coeffs; // abar_j
    std::vector<BiElement> lifts;      // monomial lifts a_j
    BiElement v;                       // the integral first-coordinate rhs
    BiElement f_of_v;                  // sum a_j^p v^j
    BiElement remainder;               // u' in u = f(v) + pi u'

    explicit AvDecomposition(PrimeChar p) : v(p), f_of_v(p), remainder(p) {}
};

// Decompose u against the p-basis {1, v, ..., v^{p-1}}; throws pcov::error
// with "not in span" when the residue class is certified outside, and
// precision_error when the bounded solve is inconclusive.
AvDecomposition decompose_Av(const BiElement& u, const BiElement& v);

// g = f(v) pi^{-pm} rewritten over the cover ring of T^p - pi^{(p-1)n} T = v
// and shifted by the coboundary of b = pi^{-m}(a_0 + a_1 T + ...):
// transformed = pi^{-m}(a_0+a_1T+...) - pi^{-(pm-n(p-1))} sum_j j a_j^p
// T^{p(j-1)+1} + pi^{-(pm-2n(p-1))} h(T) with h integral.
struct GTildeTransform {
    YPolyBi transformed;
    YPolyBi lead;
    YPolyBi middle;
    YPolyBi h_part;
    ResidueSeries middle_fibre; // reduction of the middle at its pi-level
    bool middle_nonzero = false;

    explicit GTildeTransform(PrimeChar p) : middle_fibre(p) {}
};
GTildeTransform transform_g_tilde(const AvDecomposition& d, i64 n, i64 m);

// Degeneration data extracted from a normalized p^2-cover (germ level).
struct DegenDataP {
    i64 n = 0; // 0 = etale
    ResidueSeries abar;
    explicit DegenDataP(PrimeChar p) : abar(p) {}
};

struct DegenDataP2 {
    enum class Kind { A, B, C } kind = Kind::A;
    i64 n1v = 0, n2v = 0;              // the two torsor levels (A: 0,0; B: 0,n)
    ResidueSeries a1bar, a2bar;        // A: etale Witt pair; B: (etale, radicial)
    ResidueSeries gbar;                // C
    std::vector<ResidueSeries> cbars;  // C: indices j = 1..p-1
    bool include_t1_term = false;      // C: equality-branch fibre marker

    explicit DegenDataP2(PrimeChar p) : a1bar(p), a2bar(p), gbar(p) {}
    std::string kind_str() const {
        return kind == Kind::A ? "A" : kind == Kind::B ? "B" : "C";
    }
};

// Full result of the germ-level case analysis.
struct NormalizedP2Cover {
    std::string case_tag; // "a", "b", "c-1" .. "c-5"
    std::string tie;      // tie pattern, empty when none
    NormalizedPCover first;
    i64 second_level = 0; // f2 is an M_{second_level}-torsor (0 = etale)
    GroupSchemeTag second_group;
    std::optional<GroupSchemeTag> total_group; // rank-p^2 torsor structure, when one exists
    i64 delta1 = 0, delta2 = 0;
    YPolyBi second_integral_rhs; // rhs of T2^p - pi^{n2(p-1)} T2 = ... over the cover ring
    YPolyRes second_fibre;       // its reduction: rhs of t2^p = ... (or the etale pair in case a)
    DegTypeP2::SplitLevel split_level = DegTypeP2::SplitLevel::None;
    std::vector<std::string> notes;

    NormalizedP2Cover(PrimeChar p) : first(p), second_group(GroupSchemeTag::EtaleZpZ()) {}
};

// Thm-2.4.3-style analysis of a Witt coordinate pair over a germ.
NormalizedP2Cover normalize_germ_p2(const WittBi& pair, const NormalizeOptions& opt = {});

// Boundary classification: degeneration type of the cover over
// R[[T]]{T^-1}[1/pi], by the closed conductor formulas.
struct BoundaryP2Classification {
    DegTypeP2 type;
    std::string case_tag; // "a", "b", "c-1", "c-2", "c-3"
    bool tie = false;     // the boundary tie case of c-3
    std::vector<std::string> notes;
    NormalizedPCover first;
    BoundaryP2Classification(PrimeChar p) : first(p) {}
};
BoundaryP2Classification classify_boundary_p2(const WittBi& pair,
                                              const NormalizeOptions& opt = {});

// Extraction of the degeneration data from a normalized cover; canonical
// representatives (gbar and a-payloads stripped of p-th-power monomials).
DegenDataP2 extract_degen_data(const NormalizedP2Cover& cover);

// Lifting: rank p and rank p^2 (kind C per the two displayed variants,
// selected by the branch p*n2v vs n1v(p(p-1)+1)).
BiElement lift_degen_data_p(const DegenDataP& data, std::optional<i64> t_window = 0);
WittBi lift_degen_data_p2(const DegenDataP2& data, std::optional<i64> t_window = 0);

// Predicted differents of the kind-C lift (first displayed variant).
struct LiftPrediction {
    i64 delta1 = 0, delta2 = 0;
};
LiftPrediction lift_prediction_p2(PrimeChar p, const DegenDataP2& data);

} // namespace pcov

#endif
