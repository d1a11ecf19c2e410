#include "hkg/lifting.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_set>

namespace hkg {

namespace {

Int next_node(const VModule& v, const LiftParams& P) {
    return mod_floor(v.lambda + checked_mul(P.a0, v.kappa), P.m);
}

void check_params(const LiftParams& P) {
    if (P.q < 1 || P.m < 1 || P.a0 < 0 || P.a0 >= P.m)
        throw DomainError("malformed lift parameters");
}

/// Expanded, lex-sorted V-notation instance list of a multiset.
std::vector<VModule> instances_of(const ModuleMultiset& ms, const LiftParams& P) {
    if (ms.m != P.m)
        throw DomainError("multiset and lift parameters disagree on m");
    const ModuleMultiset v = convert(ms, Notation::V, P.a0);
    std::vector<VModule> out;
    for (const auto& [key, count] : v.mult) {
        if (count < 0)
            throw DomainError("negative multiplicity");
        for (Int c = 0; c < count; ++c)
            out.push_back(VModule{key.socle, key.dim});
    }
    return out;
}

void split_kinds(const std::vector<VModule>& instances,
                 std::vector<VModule>& kinds, std::vector<Int>& counts) {
    kinds.clear();
    counts.clear();
    for (const VModule& v : instances) {
        if (!kinds.empty() && kinds.back() == v)
            ++counts.back();
        else {
            kinds.push_back(v);
            counts.push_back(1);
        }
    }
}

/// Chain ordering of one group, i.e. an Eulerian trail through the
/// transition multigraph on Z/m where the member (lambda, kappa) is an edge
/// lambda -> lambda + a0*kappa.  Returns members in trail order, or nullopt
/// when no ordering satisfies the consecutive condition.
std::optional<std::vector<VModule>> chain_order(std::vector<VModule> block,
                                                const LiftParams& P) {
    if (block.empty())
        return std::nullopt;
    std::sort(block.begin(), block.end());
    const std::size_t m = static_cast<std::size_t>(P.m);
    std::vector<std::vector<std::size_t>> adj(m);
    std::vector<Int> out_deg(m, 0), in_deg(m, 0);
    for (std::size_t i = 0; i < block.size(); ++i) {
        const auto from = static_cast<std::size_t>(block[i].lambda);
        adj[from].push_back(i);
        ++out_deg[from];
        ++in_deg[static_cast<std::size_t>(next_node(block[i], P))];
    }
    Int start = -1, end = -1;
    for (std::size_t v = 0; v < m; ++v) {
        const Int d = out_deg[v] - in_deg[v];
        if (d == 0)
            continue;
        if (d == 1 && start < 0)
            start = static_cast<Int>(v);
        else if (d == -1 && end < 0)
            end = static_cast<Int>(v);
        else
            return std::nullopt;
    }
    if ((start < 0) != (end < 0))
        return std::nullopt;
    if (start < 0)
        start = block.front().lambda;

    // Hierholzer with an explicit stack.
    std::vector<std::size_t> cursor(m, 0);
    std::vector<bool> used(block.size(), false);
    std::vector<std::pair<Int, Int>> stack; // (node, edge index or -1)
    std::vector<std::size_t> trail;
    stack.emplace_back(start, -1);
    while (!stack.empty()) {
        const auto node = static_cast<std::size_t>(stack.back().first);
        std::size_t& k = cursor[node];
        while (k < adj[node].size() && used[adj[node][k]])
            ++k;
        if (k < adj[node].size()) {
            const std::size_t e = adj[node][k];
            used[e] = true;
            stack.emplace_back(next_node(block[e], P), static_cast<Int>(e));
        } else {
            if (stack.back().second >= 0)
                trail.push_back(static_cast<std::size_t>(stack.back().second));
            stack.pop_back();
        }
    }
    if (trail.size() != block.size())
        return std::nullopt; // transition graph is disconnected
    std::reverse(trail.begin(), trail.end());
    std::vector<VModule> ordered;
    ordered.reserve(block.size());
    for (std::size_t e : trail)
        ordered.push_back(block[e]);
    return ordered;
}

void sort_groups(std::vector<std::vector<VModule>>& groups) {
    std::sort(groups.begin(), groups.end());
}

/// Backtracking over chain groups.  Group starts are canonical: for a = 0 a
/// closed chain may be rotated, so every group starts at the lex-least
/// member still available; for a = 1 the heads of successive groups are
/// non-decreasing instead.
class ChainSearch {
public:
    ChainSearch(std::vector<VModule> kinds, std::vector<Int> counts,
                const LiftParams& params, Int a, Budget& budget)
        : kinds_(std::move(kinds)), avail_(std::move(counts)), P_(params),
          a_(a), budget_(budget) {
        by_node_.resize(static_cast<std::size_t>(P_.m));
        for (std::size_t k = 0; k < kinds_.size(); ++k) {
            remaining_ += avail_[k];
            by_node_[static_cast<std::size_t>(kinds_[k].lambda)].push_back(k);
        }
        // kinds_ are lex sorted, so each per-node list is kappa-ascending
    }

    std::optional<std::vector<std::vector<VModule>>> run() {
        const bool ok = (a_ == 0) ? solve0() : solve1(0);
        if (!ok)
            return std::nullopt;
        return groups_;
    }

private:
    bool solve0() {
        if (remaining_ == 0)
            return true;
        std::string key = state_key(0);
        if (failed_.count(key))
            return false;
        std::size_t s = 0;
        while (avail_[s] == 0)
            ++s;
        groups_.emplace_back();
        take(s);
        if (extend(next_node(kinds_[s], P_), kinds_[s].kappa, 0))
            return true;
        give(s);
        groups_.pop_back();
        failed_.insert(std::move(key));
        return false;
    }

    bool solve1(std::size_t min_head) {
        if (remaining_ == 0)
            return true;
        std::string key = state_key(min_head);
        if (failed_.count(key))
            return false;
        for (std::size_t s = min_head; s < kinds_.size(); ++s) {
            if (avail_[s] == 0 || kinds_[s].kappa > P_.q)
                continue;
            groups_.emplace_back();
            take(s);
            if (extend(next_node(kinds_[s], P_), kinds_[s].kappa, s))
                return true;
            give(s);
            groups_.pop_back();
        }
        failed_.insert(std::move(key));
        return false;
    }

    bool extend(Int node, Int sum, std::size_t head) {
        budget_.tick();
        if (mod_floor(sum, P_.m) == mod_floor(a_, P_.m)) {
            // closing here also closes the chain: for a = 0 the group sum is
            // divisible by m, so the walk returns to its start node.
            const bool deeper = (a_ == 0) ? solve0() : solve1(head);
            if (deeper)
                return true;
        }
        for (std::size_t k : by_node_[static_cast<std::size_t>(node)]) {
            if (avail_[k] == 0)
                continue;
            const Int ns = sum + kinds_[k].kappa;
            if (ns > P_.q)
                break; // kappa-ascending per node
            take(k);
            if (extend(next_node(kinds_[k], P_), ns, head))
                return true;
            give(k);
        }
        return false;
    }

    void take(std::size_t k) {
        --avail_[k];
        --remaining_;
        groups_.back().push_back(kinds_[k]);
    }

    void give(std::size_t k) {
        ++avail_[k];
        ++remaining_;
        groups_.back().pop_back();
    }

    std::string state_key(std::size_t min_head) const {
        std::string key;
        key.reserve(avail_.size() * 4 + 4);
        auto put = [&key](Int v) {
            for (int b = 0; b < 4; ++b)
                key.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
        };
        for (Int c : avail_)
            put(c);
        put(static_cast<Int>(min_head));
        return key;
    }

    std::vector<VModule> kinds_;
    std::vector<Int> avail_;
    std::vector<std::vector<std::size_t>> by_node_;
    LiftParams P_;
    Int a_ = 0;
    Budget& budget_;
    Int remaining_ = 0;
    std::vector<std::vector<VModule>> groups_;
    std::unordered_set<std::string> failed_;
};

/// Bounded existence check: is there any valid a = 0 group inside the pool
/// that contains kind v?  A closed chain may be rotated to start at v.
class CoverProbe {
public:
    CoverProbe(const std::vector<VModule>& kinds, std::vector<Int> counts,
               const LiftParams& params, Budget& budget)
        : kinds_(kinds), avail_(std::move(counts)), P_(params), budget_(budget) {
        by_node_.resize(static_cast<std::size_t>(P_.m));
        for (std::size_t k = 0; k < kinds_.size(); ++k)
            by_node_[static_cast<std::size_t>(kinds_[k].lambda)].push_back(k);
    }

    bool coverable(std::size_t v) {
        if (kinds_[v].kappa > P_.q)
            return false;
        --avail_[v];
        const bool ok = extend(next_node(kinds_[v], P_), kinds_[v].kappa);
        ++avail_[v];
        return ok;
    }

private:
    bool extend(Int node, Int sum) {
        budget_.tick();
        if (mod_floor(sum, P_.m) == 0)
            return true;
        for (std::size_t k : by_node_[static_cast<std::size_t>(node)]) {
            if (avail_[k] == 0)
                continue;
            const Int ns = sum + kinds_[k].kappa;
            if (ns > P_.q)
                break;
            --avail_[k];
            const bool ok = extend(next_node(kinds_[k], P_), ns);
            ++avail_[k];
            if (ok)
                return true;
        }
        return false;
    }

    const std::vector<VModule>& kinds_;
    std::vector<Int> avail_;
    std::vector<std::vector<std::size_t>> by_node_;
    LiftParams P_;
    Budget& budget_;
};

struct A0Outcome {
    bool liftable = false;
    std::vector<std::vector<VModule>> groups;
    std::vector<VModule> uncovered; // summands no admissible group contains
    std::string reason;
};

/// Complete a = 0 decision over a V-notation multiset.
A0Outcome decide_a0(const std::vector<VModule>& all_instances,
                    const LiftParams& P, Budget& budget) {
    A0Outcome out;

    // Members whose dimension is divisible by m close on their own; any
    // valid partition can be rewritten so they stand alone.
    std::vector<std::vector<VModule>> singles;
    std::vector<VModule> rest;
    for (const VModule& v : all_instances) {
        if (v.kappa > P.q) {
            out.liftable = false;
            out.uncovered = {v};
            out.reason = "a summand exceeds the dimension bound q on its own";
            return out;
        }
        if (mod_floor(v.kappa, P.m) == 0)
            singles.push_back({v});
        else
            rest.push_back(v);
    }
    if (rest.empty()) {
        out.liftable = true;
        out.groups = std::move(singles);
        sort_groups(out.groups);
        return out;
    }

    if (P.m == 2 && P.a0 == 1) {
        // Threshold bipartite matching: odd members of socle 0 against odd
        // members of socle 1, edge iff the dimensions sum to at most q.
        std::vector<Int> left, right; // kappa lists, lex (= ascending) order
        for (const VModule& v : rest)
            (v.lambda == 0 ? left : right).push_back(v.kappa);
        if (left.size() != right.size()) {
            out.liftable = false;
            const bool left_heavy = left.size() > right.size();
            out.uncovered = {VModule{left_heavy ? 0 : 1,
                                     left_heavy ? left.front() : right.front()}};
            out.reason = "odd-dimension socle classes have different sizes";
            return out;
        }
        std::vector<int> match_r(right.size(), -1);
        std::vector<int> match_l(left.size(), -1);
        std::function<bool(std::size_t, std::vector<bool>&)> augment =
            [&](std::size_t i, std::vector<bool>& seen) -> bool {
            for (std::size_t j = 0; j < right.size(); ++j) {
                if (seen[j] || left[i] + right[j] > P.q)
                    continue;
                seen[j] = true;
                budget.tick();
                if (match_r[j] < 0 ||
                    augment(static_cast<std::size_t>(match_r[j]), seen)) {
                    match_r[j] = static_cast<int>(i);
                    match_l[i] = static_cast<int>(j);
                    return true;
                }
            }
            return false;
        };
        for (std::size_t i = 0; i < left.size(); ++i) {
            std::vector<bool> seen(right.size(), false);
            if (!augment(i, seen)) {
                out.liftable = false;
                out.uncovered = {VModule{0, left[i]}};
                out.reason = "no partner of opposite socle fits under q";
                return out;
            }
        }
        out.liftable = true;
        out.groups = std::move(singles);
        for (std::size_t i = 0; i < left.size(); ++i)
            out.groups.push_back(
                {VModule{0, left[i]},
                 VModule{1, right[static_cast<std::size_t>(match_l[i])]}});
        sort_groups(out.groups);
        return out;
    }

    std::vector<VModule> kinds;
    std::vector<Int> counts;
    split_kinds(rest, kinds, counts);

    // Necessary condition: each group is a closed walk, so over the whole
    // multiset every node of the transition graph must be balanced.
    {
        std::vector<Int> in(static_cast<std::size_t>(P.m), 0);
        std::vector<Int> out_deg(static_cast<std::size_t>(P.m), 0);
        for (std::size_t k = 0; k < kinds.size(); ++k) {
            out_deg[static_cast<std::size_t>(kinds[k].lambda)] += counts[k];
            in[static_cast<std::size_t>(next_node(kinds[k], P))] += counts[k];
        }
        if (in != out_deg) {
            out.liftable = false;
            out.reason = "socle transitions cannot close up: unbalanced node";
            return out;
        }
    }

    // Per-kind coverability.  Every stuck kind is reported, so the witness
    // names all summands that cannot sit in any admissible group.
    // Inconclusive on budget exhaustion.
    try {
        Budget probe_budget{budget.limit / 4};
        CoverProbe probe(kinds, counts, P, probe_budget);
        for (std::size_t k = 0; k < kinds.size(); ++k)
            if (!probe.coverable(k))
                out.uncovered.push_back(kinds[k]);
        if (!out.uncovered.empty()) {
            out.liftable = false;
            out.reason = "no admissible group contains these summands";
            return out;
        }
    } catch (const ResourceError&) {
        out.uncovered.clear(); // fall through to the full search
    }

    ChainSearch search(kinds, counts, P, 0, budget);
    auto found = search.run();
    if (!found) {
        out.liftable = false;
        out.reason = "exhaustive chain search found no partition";
        return out;
    }
    out.liftable = true;
    out.groups = std::move(singles);
    for (auto& g : *found)
        out.groups.push_back(std::move(g));
    sort_groups(out.groups);
    return out;
}

bool liftable_a0_quiet(const std::vector<VModule>& instances,
                       const LiftParams& P, long long limit, bool& known) {
    known = true;
    try {
        Budget budget{limit};
        return decide_a0(instances, P, budget).liftable;
    } catch (const ResourceError&) {
        known = false;
        return true; // treated as "cannot rule out"
    }
}

/// Greedy 1-minimal core of a not-liftable instance list: repeatedly drop
/// members whose removal keeps the list not-liftable.
std::vector<VModule> shrink_witness(std::vector<VModule> instances,
                                    const LiftParams& P, long long limit) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < instances.size(); ++i) {
            std::vector<VModule> candidate = instances;
            candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(i));
            if (candidate.empty())
                continue;
            bool known = false;
            if (!liftable_a0_quiet(candidate, P, limit, known) && known) {
                instances = std::move(candidate);
                changed = true;
                --i;
            }
        }
    }
    return instances;
}

} // namespace

Int normalized_a0(Int a0, Int m) {
    if (m < 1)
        throw DomainError("m must be positive");
    return mod_floor(gcd(mod_floor(a0, m), m), m);
}

LiftParams lift_params(const GroupSpec& spec) {
    return LiftParams{spec.q, spec.m, normalized_a0(spec.a0, spec.m)};
}

bool verify_certificate(const PartitionCertificate& cert,
                        const ModuleMultiset& ms, const LiftParams& params) {
    check_params(params);
    if (ms.m != params.m)
        throw DomainError("multiset and lift parameters disagree on m");
    if (cert.a != 0 && cert.a != 1)
        return false;
    std::map<ModuleKey, Int> want = convert(ms, Notation::V, params.a0).mult;
    std::map<ModuleKey, Int> have;
    for (const auto& group : cert.groups) {
        if (group.empty())
            return false;
        Int sum = 0;
        for (std::size_t i = 0; i < group.size(); ++i) {
            const VModule& mem = group[i];
            if (mem.lambda < 0 || mem.lambda >= params.m || mem.kappa < 1 ||
                mem.kappa > params.q)
                return false;
            ++have[ModuleKey{mem.lambda, mem.kappa}];
            sum = checked_add(sum, mem.kappa);
            if (i > 0 && mem.lambda != next_node(group[i - 1], params))
                return false;
        }
        if (sum > params.q)
            return false;
        if (mod_floor(sum, params.m) != mod_floor(cert.a, params.m))
            return false;
        if (cert.a == 0 &&
            group.front().lambda != next_node(group.back(), params))
            return false;
    }
    for (auto it = have.begin(); it != have.end();) {
        if (it->second == 0)
            it = have.erase(it);
        else
            ++it;
    }
    for (auto it = want.begin(); it != want.end();) {
        if (it->second == 0)
            it = want.erase(it);
        else
            ++it;
    }
    return have == want;
}

LiftReport dihedral_decide(const ModuleMultiset& ms, Int q) {
    if (ms.m != 2)
        throw DomainError("dihedral criterion requires m = 2");
    const LiftParams P{q, 2, 1};
    check_params(P);
    const ModuleMultiset u = convert(ms, Notation::U, P.a0);

    LiftReport rep;
    rep.a_used = 0;
    rep.summand_count = u.instance_count();

    std::vector<std::vector<VModule>> groups;
    std::vector<Int> side0, side1; // odd dimensions; for odd dims the
                                   // U-socle and the V-socle coincide
    for (const auto& [key, count] : u.mult) {
        for (Int c = 0; c < count; ++c) {
            if (key.dim % 2 == 0)
                groups.push_back({VModule{mod_floor(key.socle + key.dim - 1, 2),
                                          key.dim}});
            else
                (key.socle == 0 ? side0 : side1).push_back(key.dim);
        }
    }

    if (side0.size() != side1.size()) {
        rep.decision = LiftDecision::NotLiftable;
        const bool zero_heavy = side0.size() > side1.size();
        const auto& heavy = zero_heavy ? side0 : side1;
        rep.witness = {VModule{zero_heavy ? 0 : 1,
                               *std::min_element(heavy.begin(), heavy.end())}};
        std::ostringstream os;
        os << "odd-dimension summand counts differ: " << side0.size()
           << " with socle 0 against " << side1.size() << " with socle 1";
        rep.note = os.str();
        return rep;
    }

    std::sort(side0.begin(), side0.end());
    std::sort(side1.begin(), side1.end(), std::greater<Int>());
    for (std::size_t i = 0; i < side0.size(); ++i) {
        if (side0[i] + side1[i] > q) {
            rep.decision = LiftDecision::NotLiftable;
            rep.witness = {VModule{0, side0[i]}, VModule{1, side1[i]}};
            std::ostringstream os;
            os << "no complementary partner: dimensions " << side0[i] << " and "
               << side1[i] << " already exceed q = " << q;
            rep.note = os.str();
            return rep;
        }
        groups.push_back({VModule{0, side0[i]}, VModule{1, side1[i]}});
    }

    sort_groups(groups);
    rep.decision = LiftDecision::Liftable;
    rep.certificate = PartitionCertificate{0, std::move(groups)};
    rep.note = "every odd-dimension summand has a complementary partner";
    return rep;
}

LiftReport general_decide(const ModuleMultiset& ms, const LiftParams& params,
                          const SearchOptions& options) {
    check_params(params);
    const std::vector<VModule> instances = instances_of(ms, params);

    LiftReport rep;
    rep.summand_count = static_cast<Int>(instances.size());
    if (instances.empty()) {
        rep.decision = LiftDecision::Liftable;
        rep.a_used = 0;
        rep.certificate = PartitionCertificate{0, {}};
        rep.note = "empty decomposition lifts trivially";
        return rep;
    }

    Budget budget{options.budget};
    A0Outcome a0 = decide_a0(instances, params, budget);
    if (a0.liftable) {
        rep.decision = LiftDecision::Liftable;
        rep.a_used = 0;
        rep.certificate = PartitionCertificate{0, std::move(a0.groups)};
        return rep;
    }

    if (options.allow_trivial_eigenvalue) {
        std::vector<VModule> kinds;
        std::vector<Int> counts;
        split_kinds(instances, kinds, counts);
        Budget budget1{options.budget};
        ChainSearch search(kinds, counts, params, 1, budget1);
        if (auto found = search.run()) {
            sort_groups(*found);
            rep.decision = LiftDecision::Liftable;
            rep.a_used = 1;
            rep.certificate = PartitionCertificate{1, std::move(*found)};
            rep.note = "lifts only with a trivial eigenvalue (a = 1)";
            return rep;
        }
    }

    rep.decision = LiftDecision::NotLiftable;
    rep.a_used = 0;
    rep.note = a0.reason;
    if (!a0.uncovered.empty()) {
        rep.witness = a0.uncovered;
    } else if (instances.size() <= 64) {
        rep.witness = shrink_witness(instances, params, options.budget);
    } else {
        rep.witness = instances;
    }
    return rep;
}

LiftReport brute_force_decide(const ModuleMultiset& ms,
                              const LiftParams& params, Int a) {
    check_params(params);
    if (a != 0 && a != 1)
        throw DomainError("a must be 0 or 1");
    const std::vector<VModule> instances = instances_of(ms, params);
    if (instances.size() > 10)
        throw DomainError("brute-force oracle refuses more than 10 instances");

    LiftReport rep;
    rep.a_used = a;
    rep.summand_count = static_cast<Int>(instances.size());
    if (instances.empty()) {
        rep.decision = LiftDecision::Liftable;
        rep.certificate = PartitionCertificate{a, {}};
        return rep;
    }

    std::vector<std::vector<VModule>> blocks;
    std::vector<Int> sums;
    std::optional<PartitionCertificate> found;

    std::function<bool(std::size_t)> place = [&](std::size_t i) -> bool {
        if (i == instances.size()) {
            PartitionCertificate cert;
            cert.a = a;
            for (const auto& blk : blocks) {
                Int sum = 0;
                for (const VModule& v : blk)
                    sum = checked_add(sum, v.kappa);
                if (mod_floor(sum, params.m) != mod_floor(a, params.m))
                    return false;
                auto ordered = chain_order(blk, params);
                if (!ordered)
                    return false;
                cert.groups.push_back(std::move(*ordered));
            }
            sort_groups(cert.groups);
            found = std::move(cert);
            return true;
        }
        const VModule& v = instances[i];
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (sums[b] + v.kappa > params.q)
                continue;
            blocks[b].push_back(v);
            sums[b] += v.kappa;
            if (place(i + 1))
                return true;
            blocks[b].pop_back();
            sums[b] -= v.kappa;
        }
        if (v.kappa <= params.q) {
            blocks.push_back({v});
            sums.push_back(v.kappa);
            if (place(i + 1))
                return true;
            blocks.pop_back();
            sums.pop_back();
        }
        return false;
    };

    if (place(0)) {
        rep.decision = LiftDecision::Liftable;
        rep.certificate = std::move(found);
    } else {
        rep.decision = LiftDecision::NotLiftable;
        rep.witness = instances;
        rep.note = "no set partition satisfies the chain conditions";
    }
    return rep;
}

std::vector<W01Pair> explicit_w01_pairing(Int p, Int h) {
    const GroupSpec spec = make_group_spec(p, h, 2);
    const std::vector<Int> lower = family_jumps(p, h, 1);
    const ModuleMultiset ms = decompose(spec, lower);
    const Int q = spec.q;

    std::map<Int, Int> socle_of;
    for (const auto& [key, count] : ms.mult) {
        if (count != 1)
            throw InconsistencyError("family summand with multiplicity != 1");
        if (!socle_of.emplace(key.dim, key.socle).second)
            throw InconsistencyError("family dimension carries two socles");
    }

    std::set<Int> predicted;
    for (Int k = 1; q - checked_mul(k, p + 1) >= 1; ++k)
        predicted.insert(q - k * (p + 1));
    std::set<Int> present;
    for (const auto& [dim, socle] : socle_of)
        present.insert(dim);
    if (present != predicted)
        throw InconsistencyError(
            "present dimensions differ from the p^h - k(p+1) pattern");

    const Int offset = (h % 2 == 1) ? q - 1 : q - p;
    std::vector<W01Pair> pairs;
    std::set<Int> used;
    for (const auto& [dim, socle] : socle_of) {
        if (used.count(dim))
            continue;
        const Int partner = offset - dim;
        auto it = socle_of.find(partner);
        if (it == socle_of.end() || partner == dim || used.count(partner))
            throw InconsistencyError("pairing rule points outside the family");
        if (dim % 2 == 0 || partner % 2 == 0)
            throw InconsistencyError("paired dimensions must both be odd");
        if (socle + it->second != 1)
            throw InconsistencyError("paired summands must have opposite socles");
        if (checked_add(dim, partner) > q)
            throw InconsistencyError("paired dimensions exceed q");
        used.insert(dim);
        used.insert(partner);
        pairs.push_back(W01Pair{dim, socle, partner, it->second});
    }
    return pairs;
}

LiftReport decide(const GroupSpec& spec, const std::vector<Int>& lower,
                  const SearchOptions& options) {
    const JumpSequence js = jumps_from_lower(lower, spec.p);
    const Int gs = genus_special(lower, spec.p);
    const Int gg = genus_generic(js.orbit_counts, spec.p);
    if (gs != gg)
        throw InconsistencyError("the two genus formulas disagree");
    const KgbReport kgb = kgb_vanishes(lower, spec.p, spec.m);
    const ModuleMultiset ms = decompose(spec, lower);
    if (!dimension_check(ms, gs))
        throw InconsistencyError("decomposition dimension differs from genus");

    const LiftParams P = lift_params(spec);
    LiftReport rep;
    if (spec.m == 2 && P.a0 == 1) {
        rep = dihedral_decide(ms, spec.q);
        if (options.cross_check) {
            const LiftReport other = general_decide(ms, P, options);
            if (other.decision != rep.decision)
                throw InconsistencyError("matcher and searcher disagree");
        }
    } else {
        rep = general_decide(ms, P, options);
    }
    rep.kgb = kgb.vanishes;
    rep.genus = gs;
    if (rep.certificate && !verify_certificate(*rep.certificate, ms, P))
        throw InconsistencyError("emitted certificate failed re-verification");
    return rep;
}

PartitionCertificate normalize_dihedral_certificate(
    const PartitionCertificate& cert, const LiftParams& params) {
    check_params(params);
    if (params.m != 2)
        throw DomainError("normalization applies to m = 2 only");
    PartitionCertificate out;
    out.a = cert.a;
    for (const auto& group : cert.groups) {
        std::vector<VModule> odds;
        for (const VModule& mem : group) {
            if (mem.kappa % 2 == 0)
                out.groups.push_back({mem});
            else
                odds.push_back(mem); // chain order preserved
        }
        if (odds.size() % 2 != 0)
            throw InconsistencyError("group with an odd number of odd members");
        for (std::size_t i = 0; i + 1 < odds.size(); i += 2) {
            if (odds[i].lambda == odds[i + 1].lambda)
                throw InconsistencyError("consecutive odd members share a socle");
            if (checked_add(odds[i].kappa, odds[i + 1].kappa) > params.q)
                throw InconsistencyError("odd pair exceeds q");
            out.groups.push_back({odds[i], odds[i + 1]});
        }
    }
    sort_groups(out.groups);
    return out;
}

} // namespace hkg
