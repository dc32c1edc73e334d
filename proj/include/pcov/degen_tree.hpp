#ifndef PCOV_DEGEN_TREE_HPP
#define PCOV_DEGEN_TREE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pcov/residue_fn.hpp"
#include "pcov/torsor_p2.hpp"

namespace pcov {

// ---- rank p -------------------------------------------------------------

struct MarkedPointP {
    P1Point at;
    i64 m = -1; // local type parameter; the conductor is -m
};

struct TreeVertexP {
    int id = 0;
    i64 n = 0;            // M_n level of the vertex torsor (0 = etale)
    RationalFn payload;   // residue function defining the torsor over the open
    std::vector<MarkedPointP> marked;
    explicit TreeVertexP(PrimeChar p) : payload(p) {}
};

struct TreeEdgeP {
    int from = 0, to = 0;      // oriented: origin side -> terminal side
    P1Point pt_from, pt_to;    // the double point, in each chart
    i64 m_from = 0, m_to = 0;  // local types; they sum to zero (0,0 = split edge)
    i64 e = 0;                 // thickness, divisible by p
};

struct DegenTreeP {
    PrimeChar p;
    i64 r = 0;
    DegTypeP header;  // (n, m) of the germ boundary
    std::vector<TreeVertexP> vertices;
    std::vector<TreeEdgeP> edges;
    int root_vertex = 0;
    P1Point root_point;
    i64 root_e = 0;
    explicit DegenTreeP(PrimeChar pr) : p(pr) {}
};

// ---- rank p^2 -----------------------------------------------------------

struct MarkedPointP2 {
    P1Point at;
    i64 m1 = -1, m2 = -1;
};

struct VertexPayloadP2 {
    DegenDataP2::Kind kind = DegenDataP2::Kind::A;
    RationalFn u1, u2;             // A/B: the two coordinates; C: (a1, g)
    std::vector<RationalFn> cbars; // C: j = 1..p-1
    explicit VertexPayloadP2(PrimeChar p) : u1(p), u2(p) {}
};

struct TreeVertexP2 {
    int id = 0;
    i64 n1 = 0, n2 = 0;
    VertexPayloadP2 payload;
    std::vector<MarkedPointP2> marked;
    explicit TreeVertexP2(PrimeChar p) : payload(p) {}
};

struct TreeEdgeP2 {
    int from = 0, to = 0;
    P1Point pt_from, pt_to;
    i64 m1_from = 0, m2_from = 0, m1_to = 0, m2_to = 0;
    i64 e = 0; // divisible by p^2
};

struct DegenTreeP2 {
    PrimeChar p;
    i64 r = 0;
    DegTypeP2 header;
    std::vector<TreeVertexP2> vertices;
    std::vector<TreeEdgeP2> edges;
    int root_vertex = 0;
    P1Point root_point;
    i64 root_e = 0;
    bool fibres_irreducible = true; // asserted by the user, propagated only
    explicit DegenTreeP2(PrimeChar pr) : p(pr), header{} {}
};

// ---- validation ----------------------------------------------------------

struct CheckResult {
    std::string label; // "Deg.1" ... "Deg.8", "structure"
    bool ok = true;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool ok() const {
        for (auto& c : checks)
            if (!c.ok) return false;
        return true;
    }
    std::vector<std::string> failed_labels() const {
        std::vector<std::string> out;
        for (auto& c : checks)
            if (!c.ok) out.push_back(c.label);
        return out;
    }
};

ValidationReport validate_degen_p(const DegenTreeP& tree);
ValidationReport validate_degen_p2(const DegenTreeP2& tree);

// The genus of the degeneration data: the per-vertex sum over the etale part
// (recomputed, then asserted against the header value).
i64 tree_genus_p(const DegenTreeP& tree);
i64 tree_genus_p2(const DegenTreeP2& tree);

// Local type parameter of a torsor datum at a point of P^1 (0 = unramified):
// radicial kind: valuation of the stripped local expansion; etale kind:
// leading pole exponent of the class mod b^p - b.
i64 local_type_m(const RationalFn& fbar, const P1Point& pt, TorsorKind kind, i64 prec = 0);

// ---- realization ----------------------------------------------------------

struct LocalModel {
    std::string location; // "vertex 1", "marked 1@0", "edge 1-2", "root"
    std::string equation; // rendered integral equations
    std::vector<std::string> boundary_types; // per interface, rendered
};

struct RealizeReport {
    std::vector<LocalModel> models;
    std::vector<CheckResult> compatibility;
    i64 base_extension_exponent = 1; // formal pi-power bookkeeping for thicknesses
    std::vector<std::string> notes;
    bool ok() const {
        for (auto& c : compatibility)
            if (!c.ok) return false;
        return true;
    }
};

RealizeReport realize_degen_p(const DegenTreeP& tree);
RealizeReport realize_degen_p2(const DegenTreeP2& tree);

// DOT export of the decorated tree.
std::string tree_to_dot(const DegenTreeP& tree);
std::string tree_to_dot(const DegenTreeP2& tree);

} // namespace pcov

#endif
