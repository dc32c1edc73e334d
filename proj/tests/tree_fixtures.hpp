#ifndef PCOV_TREE_FIXTURES_HPP
#define PCOV_TREE_FIXTURES_HPP

// Shared degeneration-data fixtures for the unit and acceptance suites.

#include "pcov/degen_tree.hpp"

namespace pcov::fixtures {

// One vertex, one marked point of conductor 2, header (m+2, (0,-m)), genus
// (p-1)/2. Needs odd p and m, m+1 prime to p; payload x^{-2} + x^m with the
// root at infinity carrying the header pole.
inline DegenTreeP example_one_vertex(PrimeChar p, i64 m) {
    DegenTreeP tree(p);
    tree.r = m + 2;
    tree.header = {0, -m, false};
    TreeVertexP v(p);
    v.id = 1;
    v.n = 0;
    v.payload = RationalFn::pole_term(p, 0, 2, 1) + RationalFn::x_power(p, m, 1);
    v.marked = {{P1Point::finite(0), -2}};
    tree.vertices.push_back(v);
    tree.root_vertex = 1;
    tree.root_point = P1Point::infinity();
    tree.root_e = 0;
    return tree;
}

// Two etale vertices joined by a split edge; header (n, m) = (t, 1) * ... the
// radicial germ boundary (t m, m) with m = 1. The cover splits over the
// double point (p - 1 cycles upstairs).
inline DegenTreeP two_vertex_split_edge(PrimeChar p, i64 t) {
    const i64 pv = p.value();
    DegenTreeP tree(p);
    tree.header = {t, 1, false}; // n = t m with m = 1
    // X2 carries one marked pole of order kappa' with p not dividing kappa'
    i64 kappa = pv == 2 ? 3 : 4;
    tree.r = kappa - 1;
    TreeVertexP v1(p), v2(p);
    v1.id = 1;
    v1.n = 0;
    v1.payload = RationalFn::pole_term(p, 0, 1, 1); // pole 1 at the root point
    v2.id = 2;
    v2.n = 0;
    v2.payload = RationalFn::pole_term(p, 0, kappa, 1);
    v2.marked = {{P1Point::finite(0), -kappa}};
    tree.vertices = {v1, v2};
    TreeEdgeP e;
    e.from = 1;
    e.to = 2;
    e.pt_from = P1Point::finite(1);
    e.pt_to = P1Point::infinity();
    e.m_from = 0;
    e.m_to = 0;
    e.e = pv; // any positive multiple of p
    tree.edges = {e};
    tree.root_vertex = 1;
    tree.root_point = P1Point::finite(0);
    tree.root_e = pv * t;
    return tree;
}

// Radicial chain X1(n=2) -> X2(n=1) -> X3(n=0) over p = 3 with header
// (0, -2): levels decrease strictly toward the etale end. Payloads chosen so
// every derivative zero sits on a special point:
//   X1: x (x-2)^{-3} = (x-2)^{-2} + 2(x-2)^{-3}, derivative (x-2)^{-3};
//   X2: x, derivative 1;
//   X3 (etale): x^{-1} + (x-1)^{-2}.
inline DegenTreeP radicial_chain_p3() {
    PrimeChar p(3);
    DegenTreeP tree(p);
    tree.r = 6;
    tree.header = {0, -2, false};
    TreeVertexP v1(p), v2(p), v3(p);
    v1.id = 1;
    v1.n = 2;
    v1.payload = RationalFn::pole_term(p, 2, 2, 1) + RationalFn::pole_term(p, 2, 3, 2);
    v1.marked = {{P1Point::finite(2), -2}};
    v2.id = 2;
    v2.n = 1;
    v2.payload = RationalFn::x_power(p, 1, 1);
    v3.id = 3;
    v3.n = 0;
    v3.payload = RationalFn::pole_term(p, 0, 1, 1) + RationalFn::pole_term(p, 1, 2, 1);
    v3.marked = {{P1Point::finite(1), -2}};
    tree.vertices = {v1, v2, v3};
    TreeEdgeP e1, e2;
    e1.from = 1;
    e1.to = 2;
    e1.pt_from = P1Point::finite(0);
    e1.pt_to = P1Point::infinity();
    e1.m_from = 1;
    e1.m_to = -1;
    e1.e = 3;
    e2.from = 2;
    e2.to = 3;
    e2.pt_from = P1Point::finite(0);
    e2.pt_to = P1Point::finite(0);
    e2.m_from = 1;
    e2.m_to = -1;
    e2.e = 3;
    tree.edges = {e1, e2};
    tree.root_vertex = 1;
    tree.root_point = P1Point::infinity();
    tree.root_e = 3; // t0 = 1: header n - n_1 = 0 - 2 = (-2) * 1
    return tree;
}

// Rank p^2: one kind-C vertex over p = 3 with levels (3, 7); the header pair
// {(0,-1),(0,-7)} sits across a double point of thickness 9.
inline DegenTreeP2 c_vertex_tree_p3() {
    PrimeChar p(3);
    DegenTreeP2 tree(p);
    tree.r = 14;
    tree.header = {{0, -1, false}, {0, -7, false}, {}};
    TreeVertexP2 v(p);
    v.id = 1;
    v.n1 = 3;
    v.n2 = 7;
    v.payload.kind = DegenDataP2::Kind::C;
    v.payload.u1 = RationalFn::pole_term(p, 0, 1, 1); // x^{-1}
    v.payload.u2 = RationalFn::pole_term(p, 0, 3, 2); // 2 x^{-3}
    v.payload.cbars = {RationalFn(p), RationalFn(p)};
    v.marked = {{P1Point::finite(0), -1, -7}};
    tree.vertices = {v};
    tree.root_vertex = 1;
    tree.root_point = P1Point::infinity();
    tree.root_e = 9;
    return tree;
}

} // namespace pcov::fixtures

#endif
