#include "hkg/ramification.hpp"

#include <sstream>

namespace hkg {

namespace {

void require_prime_p(Int p) {
    if (p < 2 || !is_prime(p))
        throw DomainError("p must be prime");
}

// Table sizes are q entries; refuse sizes that cannot be useful.
constexpr Int kMaxTableSize = Int(1) << 22;

} // namespace

JumpSequence jumps_from_lower(const std::vector<Int>& lower, Int p) {
    require_prime_p(p);
    if (lower.empty())
        throw DomainError("lower jump sequence is empty");
    JumpSequence js;
    js.p = p;
    js.h = static_cast<Int>(lower.size());
    js.lower = lower;
    Int prev = 0;
    Int pk = 1;
    Int isum = 0;
    for (std::size_t k = 0; k < lower.size(); ++k) {
        const Int b = lower[k];
        if (b <= prev)
            throw DomainError("lower jumps must be strictly increasing and positive");
        const Int delta = (k == 0) ? b + 1 : b - lower[k - 1];
        if (delta % pk != 0)
            throw DomainError("lower jumps are not realizable: fractional orbit count");
        const Int ik = delta / pk;
        if (ik <= 0)
            throw DomainError("lower jumps are not realizable: non-positive orbit count");
        js.orbit_counts.push_back(ik);
        isum = checked_add(isum, ik);
        js.upper.push_back(isum - 1);
        prev = b;
        pk = checked_mul(pk, p);
    }
    return js;
}

JumpSequence jumps_from_upper(const std::vector<Int>& upper, Int p) {
    require_prime_p(p);
    if (upper.empty())
        throw DomainError("upper jump sequence is empty");
    JumpSequence js;
    js.p = p;
    js.h = static_cast<Int>(upper.size());
    js.upper = upper;
    Int pk = 1;
    Int b = -1;
    for (std::size_t k = 0; k < upper.size(); ++k) {
        const Int ik = (k == 0) ? upper[0] + 1 : upper[k] - upper[k - 1];
        if (ik <= 0)
            throw DomainError("upper jumps are not realizable: non-positive orbit count");
        js.orbit_counts.push_back(ik);
        b = checked_add(b, checked_mul(ik, pk));
        js.lower.push_back(b);
        pk = checked_mul(pk, p);
    }
    return js;
}

ObusPriesReport validate_obus_pries(const std::vector<Int>& upper, Int p,
                                    Int m, Int m_prime) {
    require_prime_p(p);
    if (m < 1)
        throw DomainError("m must be positive");
    ObusPriesReport rep;
    auto fail = [&rep](int clause, const std::string& detail) {
        rep.valid = false;
        rep.violated_clause = clause;
        rep.detail = detail;
        return rep;
    };
    if (upper.empty())
        return fail(1, "empty jump sequence");
    for (std::size_t i = 0; i < upper.size(); ++i) {
        if (upper[i] < 1) {
            std::ostringstream os;
            os << "w_" << (i + 1) << " = " << upper[i] << " is not a positive integer";
            return fail(1, os.str());
        }
    }
    // clause 3 on w_1 is tested before clause 2: "p divides w_1" is the
    // sharper diagnosis when both fail
    if (upper[0] % p == 0) {
        std::ostringstream os;
        os << "p divides w_1 = " << upper[0];
        return fail(3, os.str());
    }
    if (gcd(m, upper[0]) != m_prime) {
        std::ostringstream os;
        os << "gcd(m, w_1) = " << gcd(m, upper[0]) << " differs from m' = " << m_prime;
        return fail(2, os.str());
    }
    for (std::size_t i = 1; i < upper.size(); ++i) {
        const Int lo = checked_mul(p, upper[i - 1]);
        if (upper[i] == lo)
            continue;
        if (upper[i] > lo && upper[i] % p != 0)
            continue;
        std::ostringstream os;
        os << "w_" << (i + 1) << " = " << upper[i] << " is neither p*w_" << i
           << " = " << lo << " nor a larger jump prime to p";
        return fail(3, os.str());
    }
    for (std::size_t i = 1; i < upper.size(); ++i) {
        if (mod_floor(upper[i] - upper[0], m) != 0) {
            std::ostringstream os;
            os << "w_" << (i + 1) << " = " << upper[i]
               << " is not congruent to w_1 mod m";
            return fail(4, os.str());
        }
    }
    rep.valid = true;
    rep.violated_clause = 0;
    return rep;
}

KgbReport kgb_vanishes(const std::vector<Int>& lower, Int p, Int m) {
    if (m < 1)
        throw DomainError("m must be positive");
    const JumpSequence js = jumps_from_lower(lower, p);
    KgbReport rep;
    rep.vanishes = mod_floor(js.lower[0] + 1, m) == 0;
    rep.upper_all_minus_one = true;
    for (Int w : js.upper)
        if (mod_floor(w + 1, m) != 0)
            rep.upper_all_minus_one = false;
    rep.orbits_all_divisible = true;
    for (Int ik : js.orbit_counts)
        if (ik % m != 0)
            rep.orbits_all_divisible = false;
    std::ostringstream os;
    os << "b_0 = " << js.lower[0] << (rep.vanishes ? " = " : " != ")
       << "-1 mod " << m;
    rep.explanation = os.str();
    return rep;
}

Int genus_special(const std::vector<Int>& lower, Int p) {
    const JumpSequence js = jumps_from_lower(lower, p); // validates shape
    const Int h = js.h;
    const Int q = checked_pow(p, h);
    Int two_g_minus_2 = checked_mul(-2, q);
    two_g_minus_2 = checked_add(two_g_minus_2,
                                checked_mul(checked_add(lower[0], 1), q - 1));
    Int phk = q;
    for (Int k = 1; k < h; ++k) {
        phk /= p; // p^{h-k}
        const Int step = checked_mul(lower[static_cast<std::size_t>(k)] -
                                         lower[static_cast<std::size_t>(k - 1)],
                                     phk - 1);
        two_g_minus_2 = checked_add(two_g_minus_2, step);
    }
    if (two_g_minus_2 % 2 != 0)
        throw InconsistencyError("Riemann-Hurwitz count is odd");
    const Int g = (two_g_minus_2 + 2) / 2;
    if (g < 0)
        throw InconsistencyError("negative genus");
    return g;
}

Int genus_generic(const std::vector<Int>& orbit_counts, Int p) {
    require_prime_p(p);
    if (orbit_counts.empty())
        throw DomainError("orbit count sequence is empty");
    const Int h = static_cast<Int>(orbit_counts.size());
    const Int q = checked_pow(p, h);
    Int ram = 0;
    Int pk = 1;
    Int phk = q;
    for (Int k = 0; k < h; ++k) {
        const Int ik = orbit_counts[static_cast<std::size_t>(k)];
        if (ik <= 0)
            throw DomainError("orbit counts must be positive");
        phk /= p; // p^{h-k-1}... times p below keeps p^{h-k} - 1 exact
        ram = checked_add(ram, checked_mul(checked_mul(ik, pk),
                                           checked_mul(phk, p) - 1));
        pk = checked_mul(pk, p);
    }
    if (ram % 2 != 0)
        throw InconsistencyError("ramification sum is odd");
    const Int g = 1 - q + ram / 2;
    if (g < 0)
        throw InconsistencyError("negative genus");
    return g;
}

std::vector<Int> family_jumps(Int p, Int h, Int w0) {
    require_prime_p(p);
    if (h < 1)
        throw DomainError("h must be positive");
    if (w0 < 1 || gcd(w0, p) != 1)
        throw DomainError("w0 must be positive and prime to p");
    std::vector<Int> lower;
    Int podd = p; // p^(2l+1)
    for (Int l = 0; l < h; ++l) {
        // p+1 divides p^(2l+1)+1, so this is exact.
        lower.push_back(checked_mul(w0, (podd + 1) / (p + 1)));
        podd = checked_mul(podd, checked_mul(p, p));
    }
    return lower;
}

Int b_value(Int j, const std::vector<Int>& lower, Int p) {
    const Int h = static_cast<Int>(lower.size());
    const auto dig = padic_digits(j, p, h).digits;
    Int phl = checked_pow(p, h - 1); // p^{h-l}
    Int B = 0;
    for (Int l = 1; l <= h; ++l) {
        B = checked_add(B, checked_mul(checked_mul(dig[static_cast<std::size_t>(l - 1)],
                                                   lower[static_cast<std::size_t>(l - 1)]),
                                       phl));
        phl /= p;
    }
    return B;
}

BProfile pi_profile(const std::vector<Int>& lower, Int p) {
    const JumpSequence js = jumps_from_lower(lower, p);
    const Int q = checked_pow(p, js.h);
    if (q > kMaxTableSize)
        throw ResourceError("profile of size p^h does not fit the table bound");
    BProfile prof;
    prof.q = q;
    prof.B.reserve(static_cast<std::size_t>(q));
    prof.pi.reserve(static_cast<std::size_t>(q));
    for (Int j = 0; j < q; ++j) {
        const Int B = b_value(j, lower, p);
        prof.B.push_back(B);
        prof.pi.push_back(floor_div(B, q));
        if (j > 0 && prof.pi[static_cast<std::size_t>(j)] >
                         prof.pi[static_cast<std::size_t>(j - 1)])
            prof.jump_indices.push_back(j);
    }
    return prof;
}

} // namespace hkg
