#pragma once

#include <map>
#include <vector>

#include "hkg/exactmath.hpp"
#include "hkg/ramification.hpp"

namespace hkg {

/// Per-index data of the differential filtration: the digits of j, the
/// weight B(j), the divisor degree d_j and the simple-socle counts
/// n_{j,0..m-1}.
struct DifferentialRow {
    Int j = 0;
    std::vector<Int> digits;
    Int B = 0;
    Int d = 0;
    std::vector<Int> n;
};

struct DifferentialTable {
    Int q = 0;
    Int m = 0;
    std::vector<DifferentialRow> rows; // indexed by j = 0..q-1
    bool d_monotone = true;            // d_j non-increasing over the range
};

/// Divisor degree d_j, computed along two independent routes that must
/// agree:
///   d_j = floor( (1/p^h) sum_l p^{h-l} (p-1 + (p-1-a_l) b_{l-1}) )
///       = floor( (p^h - 1 + B(p^h-1) - B(j)) / p^h ).
Int divisor_degree(Int j, const std::vector<Int>& lower, Int p);

/// Socle counts of the d-dimensional layer: the zero vector when d <= 1,
/// otherwise n_l = floor((d-1)/m) plus one for the first (d-1) mod m
/// residues l-1.
std::vector<Int> simple_counts(Int d, Int m);

/// Full table for the cover with the given lower jumps and tame part m.
DifferentialTable build_table(const std::vector<Int>& lower, Int p, Int m);

enum class Notation { U, V };

/// (socle, dim) in U-notation, or (lambda, kappa) in V-notation.
struct ModuleKey {
    Int socle = 0;
    Int dim = 0;
    auto operator<=>(const ModuleKey&) const = default;
};

/// Multiset of indecomposable summands with multiplicities.
struct ModuleMultiset {
    Int m = 1;
    Int q = 1;
    Notation notation = Notation::U;
    std::map<ModuleKey, Int> mult;

    void add(Int socle, Int dim, Int count = 1);
    Int total_dimension() const;  // sum of dim * mult
    Int instance_count() const;   // sum of mult
};

/// Decomposition of the holomorphic differentials into indecomposables, in
/// U-notation: mult(a, b) = n_{b-1,a} - n_{b,a} for b < q, and n_{q-1,a}
/// for b = q.  Negative differences mean the inputs violate d-monotonicity
/// and raise InconsistencyError.
ModuleMultiset decompose(const GroupSpec& spec, const std::vector<Int>& lower);

/// Notation change V_alpha(lambda, kappa) = U_{(lambda + a0(kappa-1)) mod m, kappa}.
ModuleKey v_to_u(const ModuleKey& v, Int m, Int a0);
ModuleKey u_to_v(const ModuleKey& u, Int m, Int a0);

/// Whole-multiset conversion to the requested notation.
ModuleMultiset convert(const ModuleMultiset& ms, Notation target, Int a0);

/// True iff the weighted dimension of the multiset equals the genus.
bool dimension_check(const ModuleMultiset& ms, Int genus);

} // namespace hkg
