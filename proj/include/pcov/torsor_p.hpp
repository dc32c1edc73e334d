#ifndef PCOV_TORSOR_P_HPP
#define PCOV_TORSOR_P_HPP

#include <optional>
#include <string>

#include "pcov/witt.hpp"

namespace pcov {

// Degeneration type (n, m): n is the group level (M_n; n = 0 etale), m the
// type parameter. The conductor is -m. split marks the trivial torsor.
struct DegTypeP {
    i64 n = 0;
    i64 m = 0;
    bool split = false;
    friend bool operator==(const DegTypeP& a, const DegTypeP& b) {
        return a.n == b.n && a.m == b.m && a.split == b.split;
    }
    std::string str() const {
        if (split) return "split";
        return "(" + std::to_string(n) + ", " + std::to_string(m) + ")";
    }
};

struct NormalizedPCover {
    DegTypeP type;
    GroupSchemeTag group;
    BiElement integral_rhs;         // the a in X^p - pi^{n(p-1)} X = a
    ResidueSeries special_fibre_rhs; // its reduction (alpha_p / Artin-Schreier datum)
    i64 different = 0;               // delta = n(p-1)
    // cumulative coboundary: input = final_generic_rhs + (W^p - W) with
    // final_generic_rhs = integral_rhs / pi^{np}
    BiElement coboundary_witness;
    std::optional<BiElement> split_witness; // b with b^p - b = input, on request
    std::string remark;

    NormalizedPCover(PrimeChar p)
        : integral_rhs(p), special_fibre_rhs(p), coboundary_witness(p) {}
};

struct NormalizeOptions {
    i64 iteration_budget = 0;        // 0: derive from the pi-window
    bool emit_split_witness = false;
    bool normalize_parameter = false; // attempt the T |-> T v^{1/m} cleanup
};

// Normalization over the boundary ring R[[T]]{T^-1}[1/pi].
NormalizedPCover normalize_boundary_p(const BiElement& a_K, const NormalizeOptions& opt = {});

// Normalization over a germ R[[T]][1/pi] (input must carry the germ window).
NormalizedPCover normalize_germ_p(const BiElement& a_K, const NormalizeOptions& opt = {});

// Report on extracting an m-th root of a unit coefficient in F_p: used by
// the optional parameter cleanup. When the root does not exist over F_p the
// minimal extension degree that provides it is reported.
struct MthRootReport {
    bool exists = false;
    u32 root = 0;
    u32 extension_degree = 1;
};
MthRootReport mth_root_in_fp(u32 c, i64 m, PrimeChar p);

} // namespace pcov

#endif
