#include "pcov/degen_tree.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace pcov {

namespace {

i64 big_k(i64 pv) { return pv * (pv - 1) + 1; }

// expansion window wide enough for every decision the validators make
i64 header_scale(const DegTypeP& h) { return std::max({h.n, h.m, -h.m}); }
i64 header_scale(const DegTypeP2& h) {
    return std::max({h.first.n, h.second.n, h.first.m, -h.first.m, h.second.m, -h.second.m});
}

template <class Tree>
i64 working_prec(const Tree& tree) {
    i64 m = 8;
    auto upd = [&](i64 x) { m = std::max(m, std::max(x, -x)); };
    for (auto& e : tree.edges) upd(e.e);
    upd(tree.root_e);
    upd(header_scale(tree.header) * static_cast<i64>(tree.p.value()));
    return 4 * m + 4 * static_cast<i64>(tree.p.value()) + 8;
}

struct Structure {
    bool ok = false;
    std::string detail;
    std::map<int, std::size_t> index;      // vertex id -> position
    std::map<int, std::vector<int>> kids;  // oriented adjacency
    std::vector<int> order;                // root-first traversal
};

template <class Tree>
Structure analyze_structure(const Tree& tree) {
    Structure s;
    for (std::size_t i = 0; i < tree.vertices.size(); ++i) {
        int id = tree.vertices[i].id;
        if (s.index.count(id)) {
            s.detail = "duplicate vertex id " + std::to_string(id);
            return s;
        }
        s.index[id] = i;
    }
    if (tree.vertices.empty()) {
        s.detail = "empty tree";
        return s;
    }
    if (!s.index.count(tree.root_vertex)) {
        s.detail = "origin vertex missing";
        return s;
    }
    for (auto& e : tree.edges) {
        if (!s.index.count(e.from) || !s.index.count(e.to)) {
            s.detail = "edge references a missing vertex";
            return s;
        }
        s.kids[e.from].push_back(e.to);
    }
    if (tree.edges.size() + 1 != tree.vertices.size()) {
        s.detail = "edge count does not match a tree";
        return s;
    }
    // orientation: reachability from the origin covers everything, once
    std::set<int> seen;
    std::vector<int> stack{tree.root_vertex};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (seen.count(v)) {
            s.detail = "orientation revisits vertex " + std::to_string(v);
            return s;
        }
        seen.insert(v);
        s.order.push_back(v);
        auto it = s.kids.find(v);
        if (it != s.kids.end())
            for (int w : it->second) stack.push_back(w);
    }
    if (seen.size() != tree.vertices.size()) {
        s.detail = "tree not connected from the origin along the orientation";
        return s;
    }
    s.ok = true;
    return s;
}

bool rational_is_pth_power(const RationalFn& f) {
    // char p: f lies in k(x)^p iff df/dx = 0 (the residue field is perfect)
    return f.derivative().is_zero();
}

// zeros of f' on the open complement of `special`: the cover y^p = f is
// smooth there iff none exist
bool radicial_payload_smooth(const RationalFn& f, const std::vector<P1Point>& special,
                             std::string& why) {
    PrimeChar p = f.prime();
    RationalFn df = f.derivative();
    if (df.is_zero()) {
        why = "payload is a p-th power";
        return false;
    }
    auto [num, den] = df.to_fraction();
    // strip factors (x - c) for special finite points c
    Poly cur = num;
    for (auto& pt : special) {
        if (pt.at_infinity) continue;
        Poly lin{{1, 1}, {0, fp_neg(pt.c, p)}};
        for (;;) {
            // divide cur by lin if possible
            if (poly_deg(cur) < 1) break;
            Poly q;
            Poly rem = cur;
            bool divisible = true;
            while (poly_deg(rem) >= 1) {
                i64 d = poly_deg(rem);
                u32 lead = rem.rbegin()->second;
                q[d - 1] = lead;
                rem = poly_add(rem, poly_neg(poly_mul(Poly{{d - 1, lead}}, lin, p), p), p);
            }
            if (!rem.empty()) divisible = false;
            if (!divisible) break;
            cur = q;
        }
    }
    if (poly_deg(cur) >= 1) {
        why = "derivative vanishes off the marked locus (finite zero)";
        return false;
    }
    // zero at infinity: ord_inf(df) = deg(den) - deg(num) > 0
    bool inf_special = false;
    for (auto& pt : special) inf_special = inf_special || pt.at_infinity;
    if (!inf_special && poly_deg(den) > poly_deg(num)) {
        why = "derivative vanishes at infinity, which is not marked";
        return false;
    }
    return true;
}

} // namespace

i64 local_type_m(const RationalFn& fbar, const P1Point& pt, TorsorKind kind, i64 prec) {
    if (prec <= 0) {
        prec = 2 * static_cast<i64>(fbar.prime().value()) + 4;
        for (auto& [c, tail] : fbar.pole_parts())
            for (auto& [e, v] : tail) prec = std::max(prec, 2 * e + 4);
        for (auto& [d, c] : fbar.poly_part()) prec = std::max(prec, 2 * d + 4);
    }
    ResidueSeries exp = fbar.expand_at(pt, prec);
    if (kind == TorsorKind::Radicial) {
        ResidueSeries stripped = strip_pth_power_monomials(exp).stripped;
        if (stripped.window_empty()) return 0;
        return stripped.valuation();
    }
    ResidueSeries red = artin_schreier_reduce(exp, false).reduced;
    for (auto& [e, c] : red.coeffs())
        if (e < 0) return e;
    return 0;
}

// ------------------------------------------------------------------ rank p

namespace {

struct VertexViewP {
    const TreeVertexP* v;
    std::vector<std::pair<P1Point, i64>> special; // all non-root special points with type m
    bool has_root = false;
    P1Point root_pt;
};

std::map<int, VertexViewP> collect_views(const DegenTreeP& tree) {
    std::map<int, VertexViewP> views;
    for (auto& v : tree.vertices) views[v.id].v = &v;
    for (auto& v : tree.vertices)
        for (auto& mp : v.marked) views[v.id].special.push_back({mp.at, mp.m});
    for (auto& e : tree.edges) {
        views[e.from].special.push_back({e.pt_from, e.m_from});
        views[e.to].special.push_back({e.pt_to, e.m_to});
    }
    views[tree.root_vertex].has_root = true;
    views[tree.root_vertex].root_pt = tree.root_point;
    return views;
}

} // namespace

ValidationReport validate_degen_p(const DegenTreeP& tree) {
    ValidationReport rep;
    PrimeChar p = tree.p;
    const i64 pv = p.value();
    const i64 prec = working_prec(tree);

    Structure st = analyze_structure(tree);
    rep.checks.push_back({"Deg.2", st.ok, st.detail});
    if (!st.ok) return rep;

    // Deg.1: header data
    {
        bool ok = tree.r >= 0 && tree.header.n >= 0 && mod_euclid(tree.header.m, pv) != 0 &&
                  tree.r + tree.header.m - 1 >= 0;
        rep.checks.push_back({"Deg.1", ok,
                              ok ? "" : "header (r, (n, m)) violates r >= 0, p∤m or r+m-1 >= 0"});
    }

    // Deg.3: special points pairwise distinct per vertex
    {
        bool ok = true;
        std::string why;
        auto views = collect_views(tree);
        for (auto& [id, view] : views) {
            std::set<P1Point> pts;
            for (auto& [pt, m] : view.special)
                if (!pts.insert(pt).second) {
                    ok = false;
                    why = "vertex " + std::to_string(id) + " reuses a special point";
                }
            if (view.has_root && !pts.insert(view.root_pt).second) {
                ok = false;
                why = "root point collides with another special point";
            }
        }
        rep.checks.push_back({"Deg.3", ok, why});
    }

    auto views = collect_views(tree);

    // Deg.4: per-vertex torsor data: level, non-p-power for radicial vertices,
    // smoothness of the cover over the open part, strict n-decrease toward
    // the etale locus
    {
        bool ok = true;
        std::string why;
        for (auto& v : tree.vertices) {
            if (v.n < 0) {
                ok = false;
                why = "negative level at vertex " + std::to_string(v.id);
                break;
            }
            if (v.n > 0) {
                if (rational_is_pth_power(v.payload)) {
                    ok = false;
                    why = "radicial payload at vertex " + std::to_string(v.id) + " is a p-th power";
                    break;
                }
                std::vector<P1Point> sp;
                for (auto& [pt, m] : views[v.id].special) sp.push_back(pt);
                if (views[v.id].has_root) sp.push_back(views[v.id].root_pt);
                std::string reason;
                if (!radicial_payload_smooth(v.payload, sp, reason)) {
                    ok = false;
                    why = "vertex " + std::to_string(v.id) + ": " + reason;
                    break;
                }
            }
        }
        if (ok) {
            // subtree-of-etale bookkeeping
            std::map<int, bool> has_etale;
            for (auto it = st.order.rbegin(); it != st.order.rend(); ++it) {
                int id = *it;
                bool e = tree.vertices[st.index[id]].n == 0;
                for (int k : st.kids[id]) e = e || has_etale[k];
                has_etale[id] = e;
            }
            for (auto& e : tree.edges) {
                i64 nf = tree.vertices[st.index[e.from]].n;
                i64 nt = tree.vertices[st.index[e.to]].n;
                if (nf > 0 && has_etale[e.to] && !(nf > nt)) {
                    ok = false;
                    why = "levels do not decrease strictly toward the etale locus across edge " +
                          std::to_string(e.from) + "-" + std::to_string(e.to);
                    break;
                }
            }
        }
        rep.checks.push_back({"Deg.4", ok, why});
    }

    // Deg.5: marked-point conductors, recomputed from the payloads
    {
        bool ok = true;
        std::string why;
        for (auto& v : tree.vertices) {
            TorsorKind kind = v.n == 0 ? TorsorKind::Etale : TorsorKind::Radicial;
            for (auto& mp : v.marked) {
                if (mp.m > -1 || mod_euclid(mp.m, pv) == 0) {
                    ok = false;
                    why = "marked point carries m = " + std::to_string(mp.m) +
                          " (wants m <= -1 prime to p)";
                    break;
                }
                i64 got = local_type_m(v.payload, mp.at, kind, prec);
                if (got != mp.m) {
                    ok = false;
                    why = "vertex " + std::to_string(v.id) + " marked " + mp.at.str() +
                          ": recomputed m = " + std::to_string(got) + " vs stored " +
                          std::to_string(mp.m);
                    break;
                }
            }
            if (!ok) break;
        }
        // root-point compatibility with the header
        if (ok) {
            auto& rv = tree.vertices[st.index[tree.root_vertex]];
            TorsorKind kind = rv.n == 0 ? TorsorKind::Etale : TorsorKind::Radicial;
            i64 got = local_type_m(rv.payload, tree.root_point, kind, prec);
            i64 want = tree.root_e == 0 ? tree.header.m : -tree.header.m;
            if (got != want) {
                ok = false;
                why = "root point: recomputed m = " + std::to_string(got) + " vs expected " +
                      std::to_string(want);
            }
        }
        rep.checks.push_back({"Deg.5", ok, why});
    }

    // Deg.6: double-point conductors: antisymmetry, prime to p (or split),
    // recomputation on both charts
    {
        bool ok = true;
        std::string why;
        for (auto& e : tree.edges) {
            if (e.m_from + e.m_to != 0) {
                ok = false;
                why = "edge " + std::to_string(e.from) + "-" + std::to_string(e.to) +
                      ": m + m' = " + std::to_string(e.m_from + e.m_to) + " != 0";
                break;
            }
            bool split = (e.m_from == 0);
            if (!split && mod_euclid(e.m_from, pv) == 0) {
                ok = false;
                why = "edge conductor divisible by p";
                break;
            }
            auto& vf = tree.vertices[st.index[e.from]];
            auto& vt = tree.vertices[st.index[e.to]];
            i64 gf = local_type_m(vf.payload, e.pt_from,
                                  vf.n == 0 ? TorsorKind::Etale : TorsorKind::Radicial, prec);
            i64 gt = local_type_m(vt.payload, e.pt_to,
                                  vt.n == 0 ? TorsorKind::Etale : TorsorKind::Radicial, prec);
            if (gf != e.m_from || gt != e.m_to) {
                ok = false;
                why = "edge " + std::to_string(e.from) + "-" + std::to_string(e.to) +
                      ": recomputed (" + std::to_string(gf) + ", " + std::to_string(gt) +
                      ") vs stored (" + std::to_string(e.m_from) + ", " +
                      std::to_string(e.m_to) + ")";
                break;
            }
        }
        rep.checks.push_back({"Deg.6", ok, why});
    }

    // Deg.7: thicknesses and level differences
    {
        bool ok = true;
        std::string why;
        for (auto& e : tree.edges) {
            if (e.e < 0 || mod_euclid(e.e, pv) != 0) {
                ok = false;
                why = "edge thickness " + std::to_string(e.e) + " not divisible by p";
                break;
            }
            i64 t = e.e / pv;
            i64 nf = tree.vertices[st.index[e.from]].n;
            i64 nt = tree.vertices[st.index[e.to]].n;
            if (nf - nt != e.m_from * t) {
                ok = false;
                why = "edge " + std::to_string(e.from) + "-" + std::to_string(e.to) +
                      ": n_i - n_i' = " + std::to_string(nf - nt) + " != m t = " +
                      std::to_string(e.m_from * t);
                break;
            }
        }
        if (ok) {
            if (tree.root_e < 0 || mod_euclid(tree.root_e, pv) != 0) {
                ok = false;
                why = "root thickness not divisible by p";
            } else {
                i64 t = tree.root_e / pv;
                i64 n0 = tree.vertices[st.index[tree.root_vertex]].n;
                if (tree.header.n - n0 != tree.header.m * t) {
                    ok = false;
                    why = "root relation n - n_i0 = m t fails: " +
                          std::to_string(tree.header.n - n0) + " vs " +
                          std::to_string(tree.header.m * t);
                }
            }
        }
        rep.checks.push_back({"Deg.7", ok, why});
    }

    // Deg.8: genus identity
    {
        bool ok = true;
        std::string why;
        i64 lhs = (tree.r + tree.header.m - 1);
        i64 rhs = 0;
        auto views2 = collect_views(tree);
        for (auto& v : tree.vertices) {
            if (v.n != 0) continue;
            i64 term = -2;
            for (auto& [pt, m] : views2[v.id].special) term += (-m + 1);
            rhs += term;
        }
        if (lhs != rhs) {
            ok = false;
            why = "genus identity: (r + m - 1) = " + std::to_string(lhs) +
                  " vs etale-part sum " + std::to_string(rhs);
        }
        if ((lhs * (pv - 1)) % 2 != 0) {
            ok = false;
            why = "genus (r+m-1)(p-1)/2 is not an integer";
        }
        rep.checks.push_back({"Deg.8", ok, why});
    }

    return rep;
}

i64 tree_genus_p(const DegenTreeP& tree) {
    PrimeChar p = tree.p;
    const i64 pv = p.value();
    Structure st = analyze_structure(tree);
    if (!st.ok) throw validation_error("tree structure: " + st.detail);
    auto views = collect_views(tree);
    i64 sum = 0;
    for (auto& v : tree.vertices) {
        if (v.n != 0) continue;
        i64 term = -2;
        for (auto& [pt, m] : views[v.id].special) term += (-m + 1);
        sum += term;
    }
    i64 num = sum * (pv - 1);
    if (num % 2 != 0) throw validation_error("tree genus is not an integer");
    i64 g = num / 2;
    i64 header_num = (tree.r + tree.header.m - 1) * (pv - 1);
    if (header_num % 2 != 0 || header_num / 2 != g)
        throw validation_error("tree genus " + std::to_string(g) +
                               " does not match the header genus");
    return g;
}

// ------------------------------------------------------------------ rank p^2

namespace {

struct VertexViewP2 {
    std::vector<std::pair<P1Point, std::pair<i64, i64>>> special;
    bool has_root = false;
    P1Point root_pt;
};

std::map<int, VertexViewP2> collect_views_p2(const DegenTreeP2& tree) {
    std::map<int, VertexViewP2> views;
    for (auto& v : tree.vertices) views[v.id];
    for (auto& v : tree.vertices)
        for (auto& mp : v.marked) views[v.id].special.push_back({mp.at, {mp.m1, mp.m2}});
    for (auto& e : tree.edges) {
        views[e.from].special.push_back({e.pt_from, {e.m1_from, e.m2_from}});
        views[e.to].special.push_back({e.pt_to, {e.m1_to, e.m2_to}});
    }
    views[tree.root_vertex].has_root = true;
    views[tree.root_vertex].root_pt = tree.root_point;
    return views;
}

// local Witt pair of the vertex cover at a point, built from the payload
// expansions and the vertex levels (the restriction of the vertex lifting)
WittBi vertex_local_pair(const TreeVertexP2& v, const P1Point& pt, i64 prec) {
    PrimeChar p = v.payload.u1.prime();
    const i64 pv = p.value();
    DegenDataP2 d(p);
    d.kind = v.payload.kind;
    d.n1v = v.n1;
    d.n2v = v.n2;
    switch (v.payload.kind) {
        case DegenDataP2::Kind::A:
        case DegenDataP2::Kind::B:
            d.a1bar = v.payload.u1.expand_at(pt, prec);
            d.a2bar = v.payload.u2.expand_at(pt, prec);
            break;
        case DegenDataP2::Kind::C: {
            d.a1bar = v.payload.u1.expand_at(pt, prec);
            d.gbar = v.payload.u2.expand_at(pt, prec);
            for (auto& c : v.payload.cbars) d.cbars.push_back(c.expand_at(pt, prec));
            while (d.cbars.size() + 1 < static_cast<std::size_t>(pv))
                d.cbars.push_back(ResidueSeries(p, prec));
            d.include_t1_term = (pv * v.n2 == v.n1 * big_k(pv));
            break;
        }
    }
    return lift_degen_data_p2(d, std::nullopt);
}

// transport across the double point S T = pi^e: T^j pi^i -> pi^{i + e j} S^{-j}
BiElement transport_double_point(const BiElement& x, i64 e) {
    PrimeChar p = x.prime();
    if (x.is_germ()) throw schema_error("transport expects a boundary element");
    if (x.pi_prec() != BiElement::kExact)
        throw precision_error("transport across a double point needs full pi-knowledge");
    i64 pi_prec = BiElement::kExact;
    if (x.t_prec() != BiElement::kExact) {
        i64 imin = 0;
        if (!x.terms().empty()) imin = std::min<i64>(0, x.gauss_valuation());
        pi_prec = imin + e * x.t_prec();
    }
    BiElement out(p, pi_prec);
    for (auto& [k, c] : x.terms()) out.set_coeff(k.first + e * k.second, -k.second, c);
    return out;
}

std::string pair_str(const DegTypeP2& t) { return t.str(); }

} // namespace

ValidationReport validate_degen_p2(const DegenTreeP2& tree) {
    ValidationReport rep;
    PrimeChar p = tree.p;
    const i64 pv = p.value();
    const i64 K = big_k(pv);
    const i64 prec = working_prec(tree);

    Structure st = analyze_structure(tree);
    rep.checks.push_back({"Deg.2", st.ok, st.detail});
    if (!st.ok) return rep;

    // Deg.1: header pair
    {
        bool ok = tree.r >= 0 && mod_euclid(tree.header.first.m, pv) != 0 &&
                  mod_euclid(tree.header.second.m, pv) != 0 &&
                  pv * tree.header.second.n >= tree.header.first.n * K &&
                  tree.r + pv * tree.header.first.m + tree.header.second.m - pv - 1 >= 0 &&
                  is_admissible_pair(p, tree.header);
        rep.checks.push_back(
            {"Deg.1", ok, ok ? "" : "header pair fails admissibility or the stated inequalities"});
    }

    // Deg.3: vertex levels and payload kinds
    {
        bool ok = true;
        std::string why;
        for (auto& v : tree.vertices) {
            bool good = true;
            switch (v.payload.kind) {
                case DegenDataP2::Kind::A: good = (v.n1 == 0 && v.n2 == 0); break;
                case DegenDataP2::Kind::B: good = (v.n1 == 0 && v.n2 > 0); break;
                case DegenDataP2::Kind::C: good = (v.n1 > 0 && v.n2 > 0); break;
            }
            if (!good) {
                ok = false;
                why = "vertex " + std::to_string(v.id) + ": levels incompatible with its kind";
                break;
            }
            if (pv * v.n2 < v.n1 * K) {
                ok = false;
                why = "vertex " + std::to_string(v.id) + ": n2 >= n1(p(p-1)+1)/p fails";
                break;
            }
        }
        rep.checks.push_back({"Deg.3", ok, why});
    }

    // Deg.3': the defining-equation payloads are honest
    {
        bool ok = true;
        std::string why;
        for (auto& v : tree.vertices) {
            if (v.payload.kind != DegenDataP2::Kind::A && rational_is_pth_power(v.payload.u1) &&
                v.n1 > 0) {
                ok = false;
                why = "vertex " + std::to_string(v.id) + ": radicial first coordinate is a p-th power";
                break;
            }
            if (v.payload.kind == DegenDataP2::Kind::B && rational_is_pth_power(v.payload.u2)) {
                ok = false;
                why = "vertex " + std::to_string(v.id) + ": radicial second coordinate is a p-th power";
                break;
            }
            if (v.payload.kind == DegenDataP2::Kind::C &&
                v.payload.cbars.size() > static_cast<std::size_t>(pv - 1)) {
                ok = false;
                why = "vertex " + std::to_string(v.id) + ": too many c-tuple entries";
                break;
            }
        }
        rep.checks.push_back({"Deg.3'", ok, why});
    }

    auto views = collect_views_p2(tree);

    // Deg.4: marked points: recomputed boundary pairs, condition (*)
    {
        bool ok = true;
        std::string why;
        for (auto& v : tree.vertices) {
            for (auto& mp : v.marked) {
                if (mod_euclid(mp.m1, pv) == 0 || mod_euclid(mp.m2, pv) == 0) {
                    ok = false;
                    why = "marked conductor divisible by p";
                    break;
                }
                DegTypeP2 stored{{v.n1, mp.m1, false}, {v.n2, mp.m2, false}, {}};
                if (!satisfies_condition_star(p, stored)) {
                    ok = false;
                    why = "vertex " + std::to_string(v.id) + " marked " + mp.at.str() +
                          ": pair fails condition (*)";
                    break;
                }
                try {
                    auto cls = classify_boundary_p2(vertex_local_pair(v, mp.at, prec));
                    if (!(cls.type == stored)) {
                        ok = false;
                        why = "vertex " + std::to_string(v.id) + " marked " + mp.at.str() +
                              ": recomputed " + pair_str(cls.type) + " vs stored " +
                              pair_str(stored);
                        break;
                    }
                } catch (const error& err) {
                    ok = false;
                    why = std::string("classification failed: ") + err.what();
                    break;
                }
            }
            if (!ok) break;
        }
        rep.checks.push_back({"Deg.4", ok, why});
    }

    // Deg.5: edges: admissible pairs, antisymmetric at both levels
    {
        bool ok = true;
        std::string why;
        for (auto& e : tree.edges) {
            if (e.m1_from + e.m1_to != 0 || e.m2_from + e.m2_to != 0) {
                ok = false;
                why = "edge " + std::to_string(e.from) + "-" + std::to_string(e.to) +
                      ": conductor pairs do not sum to zero";
                break;
            }
            auto& vf = tree.vertices[st.index[e.from]];
            auto& vt = tree.vertices[st.index[e.to]];
            DegTypeP2 pf{{vf.n1, e.m1_from, false}, {vf.n2, e.m2_from, false}, {}};
            DegTypeP2 pt2{{vt.n1, e.m1_to, false}, {vt.n2, e.m2_to, false}, {}};
            if (!is_admissible_pair(p, pf) || !is_admissible_pair(p, pt2)) {
                ok = false;
                why = "edge " + std::to_string(e.from) + "-" + std::to_string(e.to) +
                      ": side pair not admissible";
                break;
            }
        }
        rep.checks.push_back({"Deg.5", ok, why});
    }

    // Deg.6: thickness p^2 t and the two level relations
    {
        bool ok = true;
        std::string why;
        for (auto& e : tree.edges) {
            if (e.e < 0 || mod_euclid(e.e, pv * pv) != 0) {
                ok = false;
                why = "edge thickness " + std::to_string(e.e) + " not divisible by p^2";
                break;
            }
            i64 t = e.e / (pv * pv);
            auto& vf = tree.vertices[st.index[e.from]];
            auto& vt = tree.vertices[st.index[e.to]];
            if (vf.n1 - vt.n1 != pv * t * e.m1_from || vf.n2 - vt.n2 != t * e.m2_from) {
                ok = false;
                why = "edge " + std::to_string(e.from) + "-" + std::to_string(e.to) +
                      ": level relations n_i1 - n_i'1 = p t m1, n_i2 - n_i'2 = t m2 fail";
                break;
            }
        }
        if (ok) {
            if (tree.root_e < 0 || mod_euclid(tree.root_e, pv * pv) != 0) {
                ok = false;
                why = "root thickness not divisible by p^2";
            } else {
                i64 t = tree.root_e / (pv * pv);
                auto& rv = tree.vertices[st.index[tree.root_vertex]];
                if (tree.header.first.n - rv.n1 != pv * t * tree.header.first.m ||
                    tree.header.second.n - rv.n2 != t * tree.header.second.m) {
                    ok = false;
                    why = "root level relations fail";
                }
            }
        }
        rep.checks.push_back({"Deg.6", ok, why});
    }

    // Deg.7: genus identity with the cased d_{i,j}
    {
        bool ok = true;
        std::string why;
        i64 lhs = tree.r + pv * tree.header.first.m + tree.header.second.m - pv - 1;
        i64 rhs = 0;
        for (auto& v : tree.vertices) {
            if (v.payload.kind == DegenDataP2::Kind::C) continue;
            i64 term = -2;
            for (auto& [pt, ms] : views[v.id].special) {
                i64 k1 = -ms.first, k2 = -ms.second; // conductors
                i64 d;
                if (v.payload.kind == DegenDataP2::Kind::A)
                    d = (pv * k1 > k2) ? (k1 + 1) + pv * (pv * k1 + 1) : (k1 + 1) + pv * (k2 + 1);
                else
                    d = (k1 + 1);
                term += d;
            }
            rhs += term;
        }
        if (lhs != rhs) {
            ok = false;
            why = "genus identity: header side " + std::to_string(lhs) + " vs tree side " +
                  std::to_string(rhs);
        }
        if ((lhs * (pv - 1)) % 2 != 0) {
            ok = false;
            why = "genus (r+p m1+m2-p-1)(p-1)/2 is not an integer";
        }
        rep.checks.push_back({"Deg.7", ok, why});
    }

    // Deg.8: lifting compatibility across double points (and the root)
    {
        bool ok = true;
        std::string why;
        for (auto& e : tree.edges) {
            auto& vf = tree.vertices[st.index[e.from]];
            auto& vt = tree.vertices[st.index[e.to]];
            DegTypeP2 pf{{vf.n1, e.m1_from, false}, {vf.n2, e.m2_from, false}, {}};
            DegTypeP2 pt2{{vt.n1, e.m1_to, false}, {vt.n2, e.m2_to, false}, {}};
            try {
                auto cf = classify_boundary_p2(vertex_local_pair(vf, e.pt_from, prec));
                auto ct = classify_boundary_p2(vertex_local_pair(vt, e.pt_to, prec));
                if (!(cf.type == pf) || !(ct.type == pt2)) {
                    ok = false;
                    why = "edge " + std::to_string(e.from) + "-" + std::to_string(e.to) +
                          ": lifted boundary types " + pair_str(cf.type) + " / " +
                          pair_str(ct.type) + " vs stored " + pair_str(pf) + " / " +
                          pair_str(pt2);
                    break;
                }
            } catch (const error& err) {
                ok = false;
                why = std::string("lifting compatibility: ") + err.what();
                break;
            }
        }
        if (ok) {
            auto& rv = tree.vertices[st.index[tree.root_vertex]];
            DegTypeP2 expect = tree.header;
            if (tree.root_e > 0) {
                expect.first.m = -tree.header.first.m;
                expect.second.m = -tree.header.second.m;
                expect.first.n = rv.n1;
                expect.second.n = rv.n2;
            }
            try {
                auto cr = classify_boundary_p2(vertex_local_pair(rv, tree.root_point, prec));
                if (!(cr.type == expect)) {
                    ok = false;
                    why = "root: lifted boundary type " + pair_str(cr.type) + " vs expected " +
                          pair_str(expect);
                }
            } catch (const error& err) {
                ok = false;
                why = std::string("root lifting compatibility: ") + err.what();
            }
        }
        rep.checks.push_back({"Deg.8", ok, why});
    }

    if (!tree.fibres_irreducible)
        rep.checks.push_back({"Deg.2", true, "irreducibility assumption (**) flagged off by the user"});
    return rep;
}

i64 tree_genus_p2(const DegenTreeP2& tree) {
    PrimeChar p = tree.p;
    const i64 pv = p.value();
    Structure st = analyze_structure(tree);
    if (!st.ok) throw validation_error("tree structure: " + st.detail);
    auto views = collect_views_p2(tree);
    i64 sum = 0;
    for (auto& v : tree.vertices) {
        if (v.payload.kind == DegenDataP2::Kind::C) continue;
        i64 term = -2;
        for (auto& [pt, ms] : views[v.id].special) {
            i64 k1 = -ms.first, k2 = -ms.second;
            i64 d;
            if (v.payload.kind == DegenDataP2::Kind::A)
                d = (pv * k1 > k2) ? (k1 + 1) + pv * (pv * k1 + 1) : (k1 + 1) + pv * (k2 + 1);
            else
                d = (k1 + 1);
            term += d;
        }
        sum += term;
    }
    i64 num = sum * (pv - 1);
    if (num % 2 != 0) throw validation_error("tree genus is not an integer");
    i64 g = num / 2;
    i64 header_num =
        (tree.r + pv * tree.header.first.m + tree.header.second.m - pv - 1) * (pv - 1);
    if (header_num % 2 != 0 || header_num / 2 != g)
        throw validation_error("tree genus does not match the header genus");
    return g;
}

// ------------------------------------------------------------------ realize

RealizeReport realize_degen_p(const DegenTreeP& tree) {
    RealizeReport rep;
    PrimeChar p = tree.p;
    const i64 pv = p.value();
    const i64 prec = working_prec(tree);
    Structure st = analyze_structure(tree);
    if (!st.ok) throw validation_error("tree structure: " + st.detail);

    i64 lcm_thickness = 1;
    auto note_thickness = [&](i64 e) { lcm_thickness = std::max(lcm_thickness, e); };

    auto classify_vertex_side = [&](const TreeVertexP& v, const P1Point& pt) {
        ResidueSeries s = v.payload.expand_at(pt, prec);
        BiElement aK = BiElement::lift(s).pi_shifted(-pv * v.n);
        return normalize_boundary_p(aK);
    };

    // vertex models
    for (auto& v : tree.vertices) {
        LocalModel m;
        m.location = "vertex " + std::to_string(v.id);
        std::ostringstream eq;
        eq << "X^" << pv;
        if (v.n == 0)
            eq << " - X = ";
        else
            eq << " - pi^" << v.n * (pv - 1) << " X = ";
        eq << v.payload.str("x");
        m.equation = eq.str();
        rep.models.push_back(m);
    }

    auto views = collect_views(tree);

    // marked points: catalog equation T^m / pi^{p n}, checked against the
    // vertex side
    for (auto& v : tree.vertices) {
        for (auto& mp : v.marked) {
            LocalModel m;
            m.location = "marked " + std::to_string(v.id) + "@" + mp.at.str();
            std::ostringstream eq;
            eq << "Y^" << pv;
            if (v.n == 0)
                eq << " - Y = T^" << mp.m;
            else
                eq << " - pi^" << v.n * (pv - 1) << " Y = T^" << mp.m;
            m.equation = eq.str();
            BiElement aK = BiElement::monomial(p, -pv * v.n, mp.m, 1);
            auto cat = normalize_boundary_p(aK);
            auto vz = classify_vertex_side(v, mp.at);
            m.boundary_types = {cat.type.str(), vz.type.str()};
            rep.models.push_back(m);
            CheckResult c{"compat marked " + std::to_string(v.id) + "@" + mp.at.str(), true, ""};
            if (!(cat.type == DegTypeP{v.n, mp.m, false}) || !(vz.type == cat.type)) {
                c.ok = false;
                c.detail = "catalog " + cat.type.str() + ", vertex side " + vz.type.str() +
                           ", stored " + DegTypeP{v.n, mp.m, false}.str();
            }
            rep.compatibility.push_back(c);
        }
    }

    // edges: the double-point model T^{m}/pi^{p n_from} over S T = pi^e
    for (auto& e : tree.edges) {
        auto& vf = tree.vertices[st.index[e.from]];
        auto& vt = tree.vertices[st.index[e.to]];
        note_thickness(e.e);
        std::string loc = "edge " + std::to_string(e.from) + "-" + std::to_string(e.to);
        if (e.m_from == 0) {
            rep.notes.push_back(loc + ": split edge; the cover is trivial over the double point "
                                      "and the fibre contributes p - 1 cycles");
            CheckResult c{"compat " + loc, true, "split edge"};
            auto cf = classify_vertex_side(vf, e.pt_from);
            auto ct = classify_vertex_side(vt, e.pt_to);
            if (!cf.type.split || !ct.type.split) {
                c.ok = false;
                c.detail = "vertex sides not split: " + cf.type.str() + ", " + ct.type.str();
            }
            rep.compatibility.push_back(c);
            continue;
        }
        LocalModel m;
        m.location = loc;
        std::ostringstream eq;
        eq << "X^" << pv << " - X = T^" << e.m_from << " / pi^" << pv * vf.n << "  (S T = pi^"
           << e.e << ")";
        m.equation = eq.str();
        BiElement aT = BiElement::monomial(p, -pv * vf.n, e.m_from, 1);
        BiElement aS = transport_double_point(aT, e.e);
        auto cT = normalize_boundary_p(aT);
        auto cS = normalize_boundary_p(aS);
        auto vzF = classify_vertex_side(vf, e.pt_from);
        auto vzT = classify_vertex_side(vt, e.pt_to);
        m.boundary_types = {cT.type.str(), cS.type.str()};
        rep.models.push_back(m);
        CheckResult c{"compat " + loc, true, ""};
        if (!(cT.type == DegTypeP{vf.n, e.m_from, false}) ||
            !(cS.type == DegTypeP{vt.n, e.m_to, false}) || !(vzF.type == cT.type) ||
            !(vzT.type == cS.type)) {
            c.ok = false;
            c.detail = "model types " + cT.type.str() + "/" + cS.type.str() + " vs stored (" +
                       std::to_string(vf.n) + "," + std::to_string(e.m_from) + ")/(" +
                       std::to_string(vt.n) + "," + std::to_string(e.m_to) + "), vertex sides " +
                       vzF.type.str() + "/" + vzT.type.str();
        }
        rep.compatibility.push_back(c);
    }

    // root
    {
        auto& rv = tree.vertices[st.index[tree.root_vertex]];
        auto vz = classify_vertex_side(rv, tree.root_point);
        CheckResult c{"compat root", true, ""};
        if (tree.root_e == 0) {
            DegTypeP expect = tree.header;
            if (!(vz.type == expect)) {
                c.ok = false;
                c.detail = "vertex side " + vz.type.str() + " vs header " + expect.str();
            }
        } else {
            note_thickness(tree.root_e);
            LocalModel m;
            m.location = "root";
            std::ostringstream eq;
            eq << "X^" << pv << " - X = T^" << tree.header.m << " / pi^" << pv * tree.header.n
               << "  (S T = pi^" << tree.root_e << ")";
            m.equation = eq.str();
            BiElement aT = BiElement::monomial(p, -pv * tree.header.n, tree.header.m, 1);
            BiElement aS = transport_double_point(aT, tree.root_e);
            auto cT = normalize_boundary_p(aT);
            auto cS = normalize_boundary_p(aS);
            m.boundary_types = {cT.type.str(), cS.type.str()};
            rep.models.push_back(m);
            if (!(cT.type == tree.header) || !(cS.type == DegTypeP{rv.n, -tree.header.m, false}) ||
                !(vz.type == cS.type)) {
                c.ok = false;
                c.detail = "root model " + cT.type.str() + "/" + cS.type.str() +
                           " vs header/vertex " + tree.header.str() + "/" + vz.type.str();
            }
        }
        rep.compatibility.push_back(c);
    }

    rep.base_extension_exponent = lcm_thickness;
    (void)views;
    return rep;
}

RealizeReport realize_degen_p2(const DegenTreeP2& tree) {
    RealizeReport rep;
    PrimeChar p = tree.p;
    const i64 pv = p.value();
    const i64 prec = working_prec(tree);
    Structure st = analyze_structure(tree);
    if (!st.ok) throw validation_error("tree structure: " + st.detail);

    i64 lcm_thickness = 1;

    auto pair_of = [&](const TreeVertexP2& v, i64 m1, i64 m2) {
        return DegTypeP2{{v.n1, m1, false}, {v.n2, m2, false}, {}};
    };

    // vertex models: the lifted Witt pairs, rendered
    for (auto& v : tree.vertices) {
        LocalModel m;
        m.location = "vertex " + std::to_string(v.id);
        std::ostringstream eq;
        eq << "kind " << (v.payload.kind == DegenDataP2::Kind::A
                              ? "A"
                              : v.payload.kind == DegenDataP2::Kind::B ? "B" : "C")
           << ", levels (" << v.n1 << ", " << v.n2 << "), u1 = " << v.payload.u1.str("x")
           << ", u2 = " << v.payload.u2.str("x");
        m.equation = eq.str();
        rep.models.push_back(m);
    }

    // marked points
    for (auto& v : tree.vertices) {
        for (auto& mp : v.marked) {
            CheckResult c{"compat marked " + std::to_string(v.id) + "@" + mp.at.str(), true, ""};
            try {
                auto cls = classify_boundary_p2(vertex_local_pair(v, mp.at, prec));
                DegTypeP2 stored = pair_of(v, mp.m1, mp.m2);
                LocalModel m;
                m.location = "marked " + std::to_string(v.id) + "@" + mp.at.str();
                m.equation = "restriction of the vertex lifting at the marked point";
                m.boundary_types = {cls.type.str()};
                rep.models.push_back(m);
                if (!(cls.type == stored)) {
                    c.ok = false;
                    c.detail = "classified " + cls.type.str() + " vs stored " + stored.str();
                }
            } catch (const error& err) {
                c.ok = false;
                c.detail = err.what();
            }
            rep.compatibility.push_back(c);
        }
    }

    // edges: transport the origin-side local pair across S T = pi^e
    for (auto& e : tree.edges) {
        auto& vf = tree.vertices[st.index[e.from]];
        auto& vt = tree.vertices[st.index[e.to]];
        lcm_thickness = std::max(lcm_thickness, e.e);
        std::string loc = "edge " + std::to_string(e.from) + "-" + std::to_string(e.to);
        CheckResult c{"compat " + loc, true, ""};
        try {
            WittBi from_pair = vertex_local_pair(vf, e.pt_from, prec);
            auto cf = classify_boundary_p2(from_pair);
            WittBi moved{transport_double_point(from_pair.x1, e.e),
                         transport_double_point(from_pair.x2, e.e), Twist{0, 0}};
            auto cm = classify_boundary_p2(moved);
            auto ct = classify_boundary_p2(vertex_local_pair(vt, e.pt_to, prec));
            LocalModel m;
            m.location = loc;
            m.equation = "origin-side lifting transported across S T = pi^" + std::to_string(e.e);
            m.boundary_types = {cf.type.str(), cm.type.str(), ct.type.str()};
            rep.models.push_back(m);
            DegTypeP2 sf = pair_of(vf, e.m1_from, e.m2_from);
            DegTypeP2 stt = pair_of(vt, e.m1_to, e.m2_to);
            if (!(cf.type == sf) || !(ct.type == stt) || !(cm.type == ct.type)) {
                c.ok = false;
                c.detail = "origin " + cf.type.str() + " (stored " + sf.str() + "), transported " +
                           cm.type.str() + ", terminal " + ct.type.str() + " (stored " +
                           stt.str() + ")";
            }
        } catch (const error& err) {
            c.ok = false;
            c.detail = err.what();
        }
        rep.compatibility.push_back(c);
    }

    // root
    {
        auto& rv = tree.vertices[st.index[tree.root_vertex]];
        CheckResult c{"compat root", true, ""};
        try {
            WittBi vpair = vertex_local_pair(rv, tree.root_point, prec);
            auto cv = classify_boundary_p2(vpair);
            DegTypeP2 expect = tree.header;
            if (tree.root_e > 0) {
                lcm_thickness = std::max(lcm_thickness, tree.root_e);
                expect = DegTypeP2{{rv.n1, -tree.header.first.m, false},
                                   {rv.n2, -tree.header.second.m, false},
                                   {}};
                // transported back toward the germ the types must match the header
                WittBi moved{transport_double_point(vpair.x1, tree.root_e),
                             transport_double_point(vpair.x2, tree.root_e), Twist{0, 0}};
                auto cm = classify_boundary_p2(moved);
                if (!(cm.type == tree.header)) {
                    c.ok = false;
                    c.detail = "transported root type " + cm.type.str() + " vs header " +
                               tree.header.str();
                }
            }
            if (c.ok && !(cv.type == expect)) {
                c.ok = false;
                c.detail = "root vertex side " + cv.type.str() + " vs expected " + expect.str();
            }
        } catch (const error& err) {
            c.ok = false;
            c.detail = err.what();
        }
        rep.compatibility.push_back(c);
    }

    rep.base_extension_exponent = lcm_thickness;
    return rep;
}

// ------------------------------------------------------------------ DOT

namespace {

template <class Tree, class VertexLabel, class EdgeLabel>
std::string dot_impl(const Tree& tree, VertexLabel vlabel, EdgeLabel elabel) {
    std::ostringstream os;
    os << "digraph degeneration {\n  rankdir=TB;\n";
    os << "  germ [shape=point];\n";
    for (auto& v : tree.vertices)
        os << "  v" << v.id << " [shape=box,label=\"" << vlabel(v) << "\"];\n";
    os << "  germ -> v" << tree.root_vertex << " [label=\"e=" << tree.root_e << "\"];\n";
    for (auto& e : tree.edges) os << "  v" << e.from << " -> v" << e.to << " [label=\"" << elabel(e)
                                  << "\"];\n";
    os << "}\n";
    return os.str();
}

} // namespace

std::string tree_to_dot(const DegenTreeP& tree) {
    return dot_impl(
        tree,
        [](const TreeVertexP& v) {
            std::ostringstream os;
            os << "X" << v.id << " n=" << v.n;
            for (auto& m : v.marked) os << "\\nm(" << m.at.str() << ")=" << m.m;
            return os.str();
        },
        [](const TreeEdgeP& e) {
            std::ostringstream os;
            os << "e=" << e.e << " m=" << e.m_from;
            return os.str();
        });
}

std::string tree_to_dot(const DegenTreeP2& tree) {
    return dot_impl(
        tree,
        [](const TreeVertexP2& v) {
            std::ostringstream os;
            os << "X" << v.id << " (n1,n2)=(" << v.n1 << "," << v.n2 << ")";
            return os.str();
        },
        [](const TreeEdgeP2& e) {
            std::ostringstream os;
            os << "e=" << e.e << " m=(" << e.m1_from << "," << e.m2_from << ")";
            return os.str();
        });
}

} // namespace pcov
