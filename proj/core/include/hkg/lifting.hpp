#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hkg/differentials.hpp"

namespace hkg {

/// One indecomposable summand V_alpha(lambda, kappa).
struct VModule {
    Int lambda = 0;
    Int kappa = 0;
    auto operator<=>(const VModule&) const = default;
};

/// The three numbers the lifting combinatorics depends on.
struct LiftParams {
    Int q = 0;
    Int m = 1;
    Int a0 = 0;
};

/// Conjugation exponent of the normalized generator choice.  Replacing the
/// tame generator by a power relabels socles by a unit and scales a0 by the
/// same unit, so the lifting question depends on a0 only through gcd(a0, m);
/// the socle labels of decompose() are the ones of the normalized generator.
Int normalized_a0(Int a0, Int m);

/// Parameters used by decide(): q, m, and the normalized twist exponent.
LiftParams lift_params(const GroupSpec& spec);

/// Node budget shared by bounded searches.
struct Budget {
    long long limit = 5'000'000;
    long long used = 0;
    void tick(long long n = 1) {
        used += n;
        if (used > limit)
            throw ResourceError("search budget exhausted; result indeterminate");
    }
};

/// A partition of the summand multiset into chain groups.  Each group lists
/// its members in chain order: consecutive members satisfy
/// lambda' = lambda + a0 * kappa (mod m), every group has kappa-sum <= q and
/// kappa-sum = a (mod m) for the one global a in {0, 1}.
struct PartitionCertificate {
    Int a = 0;
    std::vector<std::vector<VModule>> groups;
};

enum class LiftDecision { Liftable, NotLiftable };

struct LiftReport {
    LiftDecision decision = LiftDecision::NotLiftable;
    Int a_used = 0;
    std::optional<PartitionCertificate> certificate; // present iff liftable
    std::vector<VModule> witness;                    // nonempty iff not liftable
    Int summand_count = 0;
    std::optional<bool> kgb;  // filled by decide()
    std::optional<Int> genus; // filled by decide()
    std::string note;
};

struct SearchOptions {
    bool allow_trivial_eigenvalue = false; // also try a = 1
    bool cross_check = false;              // m = 2: run matcher and searcher
    long long budget = 5'000'000;
};

/// Checks a certificate against the multiset: exact exhaustion, per-group
/// kappa-sum at most q and congruent to a mod m, the chain condition between
/// consecutive members, and chain closure when a = 0.
bool verify_certificate(const PartitionCertificate& cert,
                        const ModuleMultiset& ms, const LiftParams& params);

/// Dihedral criterion (m = 2, a0 = 1): even-dimensional summands stand
/// alone; odd-dimensional ones need a partner of opposite socle with
/// dimension sum at most q.  Decided by the sorted positional pairing over
/// the threshold rule d + d' <= q.
LiftReport dihedral_decide(const ModuleMultiset& ms, Int q);

/// Partition search for arbitrary m.  Looks for a certificate with a = 0
/// (geometric mode); with allow_trivial_eigenvalue also a = 1.  Bounded by
/// options.budget; exhausting it raises ResourceError rather than guessing.
LiftReport general_decide(const ModuleMultiset& ms, const LiftParams& params,
                          const SearchOptions& options = {});

/// Exhaustive oracle over all set partitions, for at most 10 instances.
LiftReport brute_force_decide(const ModuleMultiset& ms,
                              const LiftParams& params, Int a);

/// The explicit pairing of the first-jump-one family: present dimensions are
/// p^h - k(p+1); dimensions j and p^h-1-j (h odd) or p^h-p-j (h even) pair
/// up with opposite socles.  Verified against the computed decomposition;
/// violations raise InconsistencyError.
struct W01Pair {
    Int dim_low = 0;
    Int socle_low = 0;
    Int dim_high = 0;
    Int socle_high = 0;
};

std::vector<W01Pair> explicit_w01_pairing(Int p, Int h);

/// Top-level decision: decompose, route m = 2 (faithful) to the dihedral
/// matcher and everything else to the general search, attach genus and KGB
/// diagnostics, and re-verify any certificate.
LiftReport decide(const GroupSpec& spec, const std::vector<Int>& lower,
                  const SearchOptions& options = {});

/// Splits every group of a valid m = 2 certificate into even singletons and
/// opposite-socle odd pairs.  Succeeds on every valid certificate.
PartitionCertificate normalize_dihedral_certificate(
    const PartitionCertificate& cert, const LiftParams& params);

} // namespace hkg
