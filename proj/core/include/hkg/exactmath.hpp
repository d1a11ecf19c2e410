#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hkg/errors.hpp"

namespace hkg {

using Int = std::int64_t;

// Checked 64-bit arithmetic.  Every quantity in this library is exact; on
// wrap-around these throw OverflowError instead of returning garbage.
Int checked_add(Int a, Int b);
Int checked_sub(Int a, Int b);
Int checked_mul(Int a, Int b);
Int checked_pow(Int base, Int exp);

/// Floor division (rounds towards minus infinity, b > 0).
Int floor_div(Int a, Int b);
/// Representative of a mod b in [0, b).
Int mod_floor(Int a, Int b);

Int mod_mul(Int a, Int b, Int mod);
Int mod_pow(Int base, Int exp, Int mod);
Int gcd(Int a, Int b);

bool is_prime(Int n);

/// Multiplicative order of a modulo mod; requires gcd(a, mod) = 1.
Int multiplicative_order(Int a, Int mod);

/// Smallest primitive root modulo an odd prime p.
Int smallest_primitive_root(Int p);

/// Base-p expansion of fixed length: value = sum digits[l-1] * p^(l-1).
struct PadicDigits {
    std::vector<Int> digits; // least significant first, each in [0, p-1]
    Int p = 0;
    Int value = 0;
};

/// Digits of j in base p, zero-padded to length h.  Requires 0 <= j < p^h.
PadicDigits padic_digits(Int j, Int p, Int h);

/// Inverse of padic_digits: reassemble the integer from its digits.
Int padic_value(const std::vector<Int>& digits, Int p);

/// Smallest one-based index s whose digit is < p-1; all lower digits equal
/// p-1.  The index p^h - 1 has no such digit and is rejected.
Int type_of_index(Int j, Int p, Int h);

/// Exponents a0 in [0, m) consistent with alpha = zeta_m^a0 in the residue
/// field of p.  When m | p-1 the root zeta_m := g^((p-1)/m) for g the
/// smallest primitive root mod p pins a single candidate; otherwise every
/// exponent class compatible with the order of alpha mod p is returned and
/// the caller must choose.
std::vector<Int> resolve_a0(Int alpha, Int p, Int m);

/// Parameters of the metacyclic group C_q x| C_m with q = p^h and
/// conjugation exponent alpha (alpha^m = 1 mod q, alpha = zeta_m^a0).
struct GroupSpec {
    Int p = 0;
    Int h = 0;
    Int m = 0;
    Int q = 0;
    Int alpha = 0;
    Int a0 = 0;
};

/// Builds and validates a GroupSpec.  Omitted alpha defaults to q-1 when
/// m = 2 and to 1 when m = 1; omitted a0 is resolved from alpha and must be
/// unambiguous.  A user-supplied a0 is never remapped.
GroupSpec make_group_spec(Int p, Int h, Int m,
                          std::optional<Int> alpha = std::nullopt,
                          std::optional<Int> a0 = std::nullopt);

struct GroupDiagnostics {
    Int alpha_pow_m_mod_q = 0;      // must be 1
    Int alpha_order_mod_q = 0;
    bool conjugation_faithful = false; // order of alpha mod q equals m
    std::vector<Int> a0_candidates;
    bool a0_consistent = false;     // spec.a0 appears among the candidates
};

/// Reports the congruence alpha^m mod q, the order of alpha, faithfulness of
/// the conjugation action and consistency of a0.  Throws DomainError when
/// alpha^m is not 1 mod q (the presentation does not define a group).
GroupDiagnostics validate_group(const GroupSpec& spec);

} // namespace hkg
