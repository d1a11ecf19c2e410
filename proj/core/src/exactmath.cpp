#include "hkg/exactmath.hpp"

#include <algorithm>
#include <numeric>

namespace hkg {

Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r))
        throw OverflowError("integer overflow in addition");
    return r;
}

Int checked_sub(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r))
        throw OverflowError("integer overflow in subtraction");
    return r;
}

Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r))
        throw OverflowError("integer overflow in multiplication");
    return r;
}

Int checked_pow(Int base, Int exp) {
    if (exp < 0)
        throw DomainError("negative exponent");
    Int r = 1;
    for (Int i = 0; i < exp; ++i)
        r = checked_mul(r, base);
    return r;
}

Int floor_div(Int a, Int b) {
    if (b <= 0)
        throw DomainError("floor_div requires a positive divisor");
    Int q = a / b;
    if (a % b != 0 && a < 0)
        --q;
    return q;
}

Int mod_floor(Int a, Int b) {
    return a - checked_mul(floor_div(a, b), b);
}

Int mod_mul(Int a, Int b, Int mod) {
    if (mod <= 0)
        throw DomainError("modulus must be positive");
    unsigned __int128 r = static_cast<unsigned __int128>(mod_floor(a, mod)) *
                          static_cast<unsigned __int128>(mod_floor(b, mod));
    return static_cast<Int>(r % static_cast<unsigned __int128>(mod));
}

Int mod_pow(Int base, Int exp, Int mod) {
    if (exp < 0)
        throw DomainError("negative exponent");
    if (mod <= 0)
        throw DomainError("modulus must be positive");
    Int r = 1 % mod;
    Int b = mod_floor(base, mod);
    while (exp > 0) {
        if (exp & 1)
            r = mod_mul(r, b, mod);
        b = mod_mul(b, b, mod);
        exp >>= 1;
    }
    return r;
}

Int gcd(Int a, Int b) {
    return std::gcd(a, b);
}

bool is_prime(Int n) {
    if (n < 2)
        return false;
    if (n % 2 == 0)
        return n == 2;
    for (Int d = 3; d <= n / d; d += 2)
        if (n % d == 0)
            return false;
    return true;
}

Int multiplicative_order(Int a, Int mod) {
    if (mod <= 1)
        throw DomainError("multiplicative_order requires modulus > 1");
    Int r = mod_floor(a, mod);
    if (gcd(r, mod) != 1)
        throw DomainError("multiplicative_order requires gcd(a, mod) = 1");
    Int x = r;
    Int k = 1;
    while (x != 1) {
        x = mod_mul(x, r, mod);
        ++k;
        if (k > mod)
            throw InconsistencyError("order computation did not terminate");
    }
    return k;
}

Int smallest_primitive_root(Int p) {
    if (!is_prime(p))
        throw DomainError("primitive root requested for a non-prime");
    if (p == 2)
        return 1;
    // Collect the prime factors of p-1, then test candidates.
    std::vector<Int> factors;
    Int n = p - 1;
    for (Int d = 2; d <= n / d; ++d) {
        if (n % d == 0) {
            factors.push_back(d);
            while (n % d == 0)
                n /= d;
        }
    }
    if (n > 1)
        factors.push_back(n);
    for (Int g = 2; g < p; ++g) {
        bool primitive = true;
        for (Int f : factors) {
            if (mod_pow(g, (p - 1) / f, p) == 1) {
                primitive = false;
                break;
            }
        }
        if (primitive)
            return g;
    }
    throw InconsistencyError("no primitive root found");
}

PadicDigits padic_digits(Int j, Int p, Int h) {
    if (p < 2)
        throw DomainError("padic_digits requires p >= 2");
    if (h < 1)
        throw DomainError("padic_digits requires h >= 1");
    const Int q = checked_pow(p, h);
    if (j < 0 || j >= q)
        throw DomainError("index out of range [0, p^h)");
    PadicDigits out;
    out.p = p;
    out.value = j;
    out.digits.resize(static_cast<std::size_t>(h));
    Int rest = j;
    for (Int l = 0; l < h; ++l) {
        out.digits[static_cast<std::size_t>(l)] = rest % p;
        rest /= p;
    }
    return out;
}

Int padic_value(const std::vector<Int>& digits, Int p) {
    Int v = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        if (*it < 0 || *it >= p)
            throw DomainError("digit out of range [0, p)");
        v = checked_add(checked_mul(v, p), *it);
    }
    return v;
}

Int type_of_index(Int j, Int p, Int h) {
    const auto dig = padic_digits(j, p, h).digits;
    for (Int l = 0; l < h; ++l)
        if (dig[static_cast<std::size_t>(l)] < p - 1)
            return l + 1;
    throw DomainError("index p^h - 1 has no type: every digit equals p-1");
}

std::vector<Int> resolve_a0(Int alpha, Int p, Int m) {
    if (!is_prime(p))
        throw DomainError("p must be prime");
    if (m < 1)
        throw DomainError("m must be positive");
    const Int r = mod_floor(alpha, p);
    if (r == 0)
        throw DomainError("alpha is divisible by p");
    if ((p - 1) % m == 0) {
        const Int g = smallest_primitive_root(p);
        const Int zeta = mod_pow(g, (p - 1) / m, p);
        Int x = 1;
        for (Int a0 = 0; a0 < m; ++a0) {
            if (x == r)
                return {a0};
            x = mod_mul(x, zeta, p);
        }
        return {}; // alpha is not an m-th root of unity mod p
    }
    // zeta_m lives in an extension of F_p; only the order of alpha mod p
    // constrains a0.  zeta_m^a0 has order m / gcd(m, a0).
    const Int d = multiplicative_order(r, p);
    std::vector<Int> out;
    for (Int a0 = 0; a0 < m; ++a0)
        if (m / gcd(m, a0) == d) // gcd(m, 0) = m, so a0 = 0 has order 1
            out.push_back(a0);
    return out;
}

GroupSpec make_group_spec(Int p, Int h, Int m,
                          std::optional<Int> alpha, std::optional<Int> a0) {
    if (p < 3 || !is_prime(p))
        throw DomainError("p must be an odd prime");
    if (h < 1)
        throw DomainError("h must be positive");
    if (m < 1)
        throw DomainError("m must be positive");
    if (m % p == 0)
        throw DomainError("m must be prime to p");
    GroupSpec spec;
    spec.p = p;
    spec.h = h;
    spec.m = m;
    spec.q = checked_pow(p, h);

    Int a;
    if (alpha) {
        a = mod_floor(*alpha, spec.q);
    } else if (a0 && (p - 1) % m == 0) {
        // reconstruct alpha from a0: the unique element of order dividing m
        // mod q reducing to zeta_m^a0 mod p, i.e. the Teichmuller lift
        // r^(p^(h-1)) of r = zeta_m^a0
        if (*a0 < 0 || *a0 >= m)
            throw DomainError("a0 out of range [0, m)");
        const Int g = smallest_primitive_root(p);
        const Int zeta = mod_pow(g, (p - 1) / m, p);
        const Int r = mod_pow(zeta, *a0, p);
        a = mod_pow(r, checked_pow(p, h - 1), spec.q);
    } else if (m == 1) {
        a = 1;
    } else if (m == 2) {
        a = spec.q - 1; // dihedral preset
    } else {
        throw DomainError("alpha (or a0 when m divides p-1) is required for m > 2");
    }
    if (a == 0 || gcd(a, p) != 1)
        throw DomainError("alpha must be a unit mod q");
    if (mod_pow(a, m, spec.q) != 1)
        throw DomainError("alpha^m is not 1 mod q: not a valid presentation");
    spec.alpha = a;

    if (a0) {
        if (*a0 < 0 || *a0 >= m)
            throw DomainError("a0 out of range [0, m)");
        spec.a0 = *a0;
    } else {
        const auto cands = resolve_a0(a, p, m);
        if (cands.size() == 1)
            spec.a0 = cands.front();
        else if (cands.empty())
            throw InconsistencyError("no a0 matches alpha mod p");
        else
            throw DomainError("a0 is ambiguous for this (alpha, m); supply a0");
    }
    return spec;
}

GroupDiagnostics validate_group(const GroupSpec& spec) {
    if (spec.p < 3 || !is_prime(spec.p) || spec.h < 1 || spec.m < 1 ||
        spec.q != checked_pow(spec.p, spec.h))
        throw DomainError("malformed group parameters");
    GroupDiagnostics diag;
    diag.alpha_pow_m_mod_q = mod_pow(spec.alpha, spec.m, spec.q);
    if (diag.alpha_pow_m_mod_q != 1)
        throw DomainError("alpha^m is not 1 mod q: not a valid presentation");
    diag.alpha_order_mod_q = multiplicative_order(spec.alpha, spec.q);
    diag.conjugation_faithful = (diag.alpha_order_mod_q == spec.m);
    diag.a0_candidates = resolve_a0(spec.alpha, spec.p, spec.m);
    diag.a0_consistent =
        std::find(diag.a0_candidates.begin(), diag.a0_candidates.end(),
                  spec.a0) != diag.a0_candidates.end();
    return diag;
}

} // namespace hkg
