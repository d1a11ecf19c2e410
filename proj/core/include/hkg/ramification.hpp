#pragma once

#include <string>
#include <vector>

#include "hkg/exactmath.hpp"

namespace hkg {

/// A realizable ramification jump sequence for the cyclic p-part, carrying
/// the lower jumps b_k, the orbit counts i_k and the upper jumps w_k.
/// The defining identities are
///   b_k + 1 = sum_{v=0..k} i_v p^v      and      w_k = sum_{v=0..k} i_v - 1.
struct JumpSequence {
    Int p = 0;
    Int h = 0;
    std::vector<Int> lower;
    std::vector<Int> orbit_counts;
    std::vector<Int> upper;
};

/// Derives orbit counts and upper jumps from strictly increasing lower
/// jumps.  Throws DomainError when some i_k would be non-positive or
/// fractional (the sequence is not realizable).
JumpSequence jumps_from_lower(const std::vector<Int>& lower, Int p);

/// Inverse direction: i_0 = w_0 + 1, i_k = w_k - w_{k-1}, b_k reassembled.
JumpSequence jumps_from_upper(const std::vector<Int>& upper, Int p);

/// Admissibility check for the upper jumps w_i of the C_q part inside
/// C_q x| C_m, with centralizer index m' (1 in the totally faithful case):
///   1. every w_i is a positive integer,
///   2. gcd(m, w_1) = m',
///   3. p does not divide w_1, and each later jump either equals p times the
///      previous one or exceeds it and is prime to p,
///   4. all w_i are congruent to w_1 mod m.
struct ObusPriesReport {
    bool valid = false;
    int violated_clause = 0; // 0 when valid, else 1..4
    std::string detail;
};

ObusPriesReport validate_obus_pries(const std::vector<Int>& upper, Int p,
                                    Int m, Int m_prime = 1);

/// The KGB obstruction vanishes iff b_0 = -1 mod m.  The equivalent
/// formulations (all upper jumps = -1 mod m; m divides every orbit count)
/// are computed independently and reported alongside.
struct KgbReport {
    bool vanishes = false;
    bool upper_all_minus_one = false;
    bool orbits_all_divisible = false;
    std::string explanation;
};

KgbReport kgb_vanishes(const std::vector<Int>& lower, Int p, Int m);

/// Genus via the Riemann-Hurwitz count over the wild fibre:
///   2g - 2 = -2 p^h + (b_0+1)(p^h - 1) + sum_k (b_k - b_{k-1})(p^{h-k} - 1).
Int genus_special(const std::vector<Int>& lower, Int p);

/// Genus via the orbit counts on the generic fibre:
///   g = 1 - p^h + (1/2) sum_k i_k p^k (p^{h-k} - 1).
Int genus_generic(const std::vector<Int>& orbit_counts, Int p);

/// Lower jumps b_l = w0 (p^{2l+1} + 1)/(p + 1) of the geometric family with
/// first jump w0 prime to p.  Always integral.
std::vector<Int> family_jumps(Int p, Int h, Int w0);

/// B(j) = sum_l a_l b_{l-1} p^{h-l} for the digits a_l of j.
Int b_value(Int j, const std::vector<Int>& lower, Int p);

/// Whole-range profile of B and pi_j = floor(B(j)/p^h), with the indices
/// where pi jumps.
struct BProfile {
    Int q = 0;
    std::vector<Int> B;
    std::vector<Int> pi;
    std::vector<Int> jump_indices; // j >= 1 with pi_j > pi_{j-1}
};

BProfile pi_profile(const std::vector<Int>& lower, Int p);

} // namespace hkg
