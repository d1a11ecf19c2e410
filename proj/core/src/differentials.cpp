#include "hkg/differentials.hpp"

#include <sstream>

namespace hkg {

namespace {

constexpr Int kMaxTableSize = Int(1) << 22;

} // namespace

Int divisor_degree(Int j, const std::vector<Int>& lower, Int p) {
    const JumpSequence js = jumps_from_lower(lower, p);
    const Int h = js.h;
    const Int q = checked_pow(p, h);
    if (j < 0 || j >= q)
        throw DomainError("index out of range [0, p^h)");

    const auto dig = padic_digits(j, p, h).digits;
    Int total = 0;
    Int phl = q; // p^{h-l}, starting at l = 1
    for (Int l = 1; l <= h; ++l) {
        phl /= p;
        const Int al = dig[static_cast<std::size_t>(l - 1)];
        const Int term = checked_add(
            p - 1, checked_mul(p - 1 - al, lower[static_cast<std::size_t>(l - 1)]));
        total = checked_add(total, checked_mul(phl, term));
    }
    const Int via_digits = floor_div(total, q);

    const Int via_B = floor_div(
        checked_add(q - 1, checked_sub(b_value(q - 1, lower, p),
                                       b_value(j, lower, p))),
        q);
    if (via_digits != via_B) {
        std::ostringstream os;
        os << "divisor degree mismatch at j = " << j << ": " << via_digits
           << " vs " << via_B;
        throw InconsistencyError(os.str());
    }
    return via_digits;
}

std::vector<Int> simple_counts(Int d, Int m) {
    if (d < 0)
        throw DomainError("divisor degree must be nonnegative");
    if (m < 1)
        throw DomainError("m must be positive");
    std::vector<Int> n(static_cast<std::size_t>(m), 0);
    if (d <= 1)
        return n;
    const Int base = (d - 1) / m;
    const Int rest = d - 2 - checked_mul(m, base); // in [-1, m-2]
    for (Int l = 0; l < m; ++l) {
        const Int cls = mod_floor(l - 1, m);
        n[static_cast<std::size_t>(l)] = base + (cls <= rest ? 1 : 0);
    }
    return n;
}

DifferentialTable build_table(const std::vector<Int>& lower, Int p, Int m) {
    const JumpSequence js = jumps_from_lower(lower, p);
    if (m < 1)
        throw DomainError("m must be positive");
    const Int q = checked_pow(p, js.h);
    if (q > kMaxTableSize)
        throw ResourceError("table of size p^h does not fit the table bound");
    DifferentialTable table;
    table.q = q;
    table.m = m;
    table.rows.reserve(static_cast<std::size_t>(q));
    Int prev_d = -1;
    for (Int j = 0; j < q; ++j) {
        DifferentialRow row;
        row.j = j;
        row.digits = padic_digits(j, p, js.h).digits;
        row.B = b_value(j, lower, p);
        row.d = divisor_degree(j, lower, p);
        row.n = simple_counts(row.d, m);
        if (j > 0 && row.d > prev_d)
            table.d_monotone = false;
        prev_d = row.d;
        table.rows.push_back(std::move(row));
    }
    if (table.rows.back().d != 0)
        throw InconsistencyError("d_{q-1} is nonzero");
    return table;
}

void ModuleMultiset::add(Int socle, Int dim, Int count) {
    if (count == 0)
        return;
    mult[ModuleKey{socle, dim}] += count;
}

Int ModuleMultiset::total_dimension() const {
    Int total = 0;
    for (const auto& [key, count] : mult)
        total = checked_add(total, checked_mul(key.dim, count));
    return total;
}

Int ModuleMultiset::instance_count() const {
    Int total = 0;
    for (const auto& [key, count] : mult)
        total = checked_add(total, count);
    return total;
}

ModuleMultiset decompose(const GroupSpec& spec, const std::vector<Int>& lower) {
    const DifferentialTable table = build_table(lower, spec.p, spec.m);
    ModuleMultiset ms;
    ms.m = spec.m;
    ms.q = table.q;
    ms.notation = Notation::U;
    for (Int b = 1; b < table.q; ++b) {
        const auto& lo = table.rows[static_cast<std::size_t>(b - 1)].n;
        const auto& hi = table.rows[static_cast<std::size_t>(b)].n;
        for (Int a = 0; a < spec.m; ++a) {
            const Int diff = lo[static_cast<std::size_t>(a)] -
                             hi[static_cast<std::size_t>(a)];
            if (diff < 0) {
                std::ostringstream os;
                os << "negative multiplicity at (a, b) = (" << a << ", " << b
                   << "): the degree sequence is not non-increasing";
                throw InconsistencyError(os.str());
            }
            ms.add(a, b, diff);
        }
    }
    // b = q term; vanishes whenever d_{q-1} = 0 but kept for the case split.
    const auto& last = table.rows[static_cast<std::size_t>(table.q - 1)].n;
    for (Int a = 0; a < spec.m; ++a)
        ms.add(a, table.q, last[static_cast<std::size_t>(a)]);
    return ms;
}

ModuleKey v_to_u(const ModuleKey& v, Int m, Int a0) {
    return ModuleKey{mod_floor(v.socle + checked_mul(a0, v.dim - 1), m), v.dim};
}

ModuleKey u_to_v(const ModuleKey& u, Int m, Int a0) {
    return ModuleKey{mod_floor(u.socle - checked_mul(a0, u.dim - 1), m), u.dim};
}

ModuleMultiset convert(const ModuleMultiset& ms, Notation target, Int a0) {
    if (ms.notation == target)
        return ms;
    ModuleMultiset out;
    out.m = ms.m;
    out.q = ms.q;
    out.notation = target;
    for (const auto& [key, count] : ms.mult) {
        const ModuleKey mapped = (target == Notation::U)
                                     ? v_to_u(key, ms.m, a0)
                                     : u_to_v(key, ms.m, a0);
        out.mult[mapped] += count;
    }
    return out;
}

bool dimension_check(const ModuleMultiset& ms, Int genus) {
    return ms.total_dimension() == genus;
}

} // namespace hkg
