#include <algorithm>
#include <future>
#include <sstream>

#include "liftcli/job.hpp"

namespace liftcli {

namespace {

using namespace hkg;

// ---------------------------------------------------------------- helpers

GroupSpec group_of(const JobSpec& job) {
    if (!job.p)
        throw InputError("p: required");
    if (!job.h)
        throw InputError("h: required");
    if (!job.m)
        throw InputError("m: required");
    return make_group_spec(*job.p, *job.h, *job.m, job.alpha, job.a0);
}

std::vector<Int> lower_of(const JobSpec& job, Int p) {
    const int sources = (job.lower ? 1 : 0) + (job.upper ? 1 : 0) +
                        (job.family_w0 ? 1 : 0);
    if (sources == 0)
        throw InputError(
            "lower_jumps: one of lower_jumps, upper_jumps, family_w0 required");
    if (sources > 1)
        throw InputError(
            "lower_jumps: give exactly one of lower_jumps, upper_jumps, family_w0");
    if (job.lower)
        return *job.lower;
    if (job.upper)
        return jumps_from_upper(*job.upper, p).lower;
    if (!job.h)
        throw InputError("h: required");
    return family_jumps(p, *job.h, *job.family_w0);
}

Json json_of(const std::vector<Int>& v) {
    return Json(v);
}

Json group_json(const GroupSpec& spec) {
    Json g;
    g["p"] = spec.p;
    g["h"] = spec.h;
    g["m"] = spec.m;
    g["q"] = spec.q;
    g["alpha"] = spec.alpha;
    g["a0"] = spec.a0;
    return g;
}

Json jumps_json(const JumpSequence& js) {
    Json j;
    j["lower"] = json_of(js.lower);
    j["upper"] = json_of(js.upper);
    j["orbit_counts"] = json_of(js.orbit_counts);
    return j;
}

/// Modules serialized sorted by (dim, socle) ascending.
Json modules_json(const ModuleMultiset& ms) {
    std::vector<std::pair<ModuleKey, Int>> entries(ms.mult.begin(),
                                                   ms.mult.end());
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) {
                  return std::pair{a.first.dim, a.first.socle} <
                         std::pair{b.first.dim, b.first.socle};
              });
    Json arr = Json::array();
    for (const auto& [key, count] : entries) {
        Json e;
        e["socle"] = key.socle;
        e["dim"] = key.dim;
        e["mult"] = count;
        arr.push_back(std::move(e));
    }
    return arr;
}

std::string module_text(const ModuleKey& key, Notation notation) {
    std::ostringstream os;
    if (notation == Notation::U)
        os << "U_{" << key.socle << "," << key.dim << "}";
    else
        os << "V(" << key.socle << "," << key.dim << ")";
    return os.str();
}

ModuleMultiset in_notation(const ModuleMultiset& ms, const JobSpec& job,
                           Int effective_a0) {
    const Notation target =
        job.notation == "v" ? Notation::V : Notation::U;
    return convert(ms, target, effective_a0);
}

std::vector<std::pair<Int, Int>> parse_rows(const std::string& spec, Int q) {
    std::vector<std::pair<Int, Int>> ranges;
    if (spec.empty()) {
        ranges.emplace_back(0, q - 1);
        return ranges;
    }
    std::istringstream in(spec);
    std::string part;
    while (std::getline(in, part, ',')) {
        if (part.empty())
            throw InputError("rows: empty range");
        const auto dash = part.find('-', 1); // allow no negatives anyway
        Int lo = 0, hi = 0;
        try {
            if (dash == std::string::npos) {
                lo = hi = std::stoll(part);
            } else {
                lo = std::stoll(part.substr(0, dash));
                hi = std::stoll(part.substr(dash + 1));
            }
        } catch (const std::exception&) {
            throw InputError("rows: expected like 0-6,120-124");
        }
        if (lo < 0 || hi < lo || hi >= q)
            throw InputError("rows: range out of [0, q-1]");
        ranges.emplace_back(lo, hi);
    }
    return ranges;
}

// ---------------------------------------------------------------- modes

RunResult run_validate(const JobSpec& job) {
    RunResult res;
    Json out;
    std::ostringstream text;
    bool valid = true;
    std::string reason;

    GroupSpec spec;
    try {
        spec = group_of(job);
        const GroupDiagnostics diag = validate_group(spec);
        out["valid"] = true; // patched below if jumps fail
        out["group"] = group_json(spec);
        out["alpha_pow_m_mod_q"] = diag.alpha_pow_m_mod_q;
        out["alpha_order_mod_q"] = diag.alpha_order_mod_q;
        out["conjugation_faithful"] = diag.conjugation_faithful;
        out["a0_candidates"] = json_of(diag.a0_candidates);
        out["a0_consistent"] = diag.a0_consistent;
        text << "group: valid, alpha^m = 1 mod q, order(alpha) = "
             << diag.alpha_order_mod_q
             << (diag.conjugation_faithful ? " (faithful conjugation)"
                                           : " (conjugation not faithful)")
             << "\n";
        if (!diag.a0_consistent)
            text << "note: a0 = " << spec.a0
                 << " is not the resolved exponent for alpha\n";
    } catch (const Error& e) {
        valid = false;
        reason = e.what();
        out["valid"] = false;
        out["error"] = reason;
        text << "group: invalid (" << reason << ")\n";
    }

    if (valid && (job.lower || job.upper || job.family_w0)) {
        try {
            const std::vector<Int> lower = lower_of(job, spec.p);
            const JumpSequence js = jumps_from_lower(lower, spec.p);
            const ObusPriesReport op =
                validate_obus_pries(js.upper, spec.p, spec.m, job.m_prime);
            const KgbReport kgb = kgb_vanishes(lower, spec.p, spec.m);
            out["jumps"] = jumps_json(js);
            Json opj;
            opj["valid"] = op.valid;
            opj["violated_clause"] = op.violated_clause;
            opj["detail"] = op.detail;
            out["obus_pries"] = opj;
            out["kgb_vanishes"] = kgb.vanishes;
            text << "jumps: lower";
            for (Int b : js.lower)
                text << " " << b;
            text << " | upper";
            for (Int w : js.upper)
                text << " " << w;
            text << "\n";
            if (op.valid)
                text << "admissibility: valid\n";
            else
                text << "admissibility: invalid, clause " << op.violated_clause
                     << " (" << op.detail << ")\n";
            text << "kgb obstruction: "
                 << (kgb.vanishes ? "vanishes" : "does not vanish") << "\n";
            if (!op.valid)
                valid = false;
        } catch (const Error& e) {
            valid = false;
            out["jumps_error"] = e.what();
            text << "jumps: invalid (" << e.what() << ")\n";
        }
    }
    out["valid"] = valid;
    text << (valid ? "valid" : "invalid") << "\n";
    res.exit_code = valid ? 0 : 1;
    res.text = text.str();
    res.machine = std::move(out);
    return res;
}

RunResult run_genus(const JobSpec& job) {
    if (!job.p)
        throw InputError("p: required");
    const std::vector<Int> lower = lower_of(job, *job.p);
    const JumpSequence js = jumps_from_lower(lower, *job.p);
    const Int gs = genus_special(lower, *job.p);
    const Int gg = genus_generic(js.orbit_counts, *job.p);
    if (gs != gg)
        throw InconsistencyError("the two genus formulas disagree");
    RunResult res;
    Json out;
    out["genus"] = gs;
    out["genus_special"] = gs;
    out["genus_generic"] = gg;
    out["jumps"] = jumps_json(js);
    std::ostringstream text;
    text << "genus: " << gs << "\n";
    res.machine = std::move(out);
    res.text = text.str();
    return res;
}

RunResult run_dtable(const JobSpec& job) {
    const GroupSpec spec = group_of(job);
    const std::vector<Int> lower = lower_of(job, spec.p);
    const DifferentialTable table = build_table(lower, spec.p, spec.m);
    const auto ranges = parse_rows(job.rows, table.q);

    RunResult res;
    Json out;
    out["q"] = table.q;
    out["m"] = table.m;
    out["d_monotone"] = table.d_monotone;
    Json rows = Json::array();
    std::ostringstream text;
    text << "j | digits | d_j";
    for (Int l = 0; l < table.m; ++l)
        text << " | n_" << l;
    text << " | diffs\n";
    for (const auto& [lo, hi] : ranges) {
        for (Int j = lo; j <= hi; ++j) {
            const auto& row = table.rows[static_cast<std::size_t>(j)];
            Json r;
            r["j"] = row.j;
            r["digits"] = json_of(row.digits);
            r["B"] = row.B;
            r["d"] = row.d;
            r["n"] = json_of(row.n);
            text << row.j << " | ";
            for (std::size_t i = 0; i < row.digits.size(); ++i)
                text << (i ? "," : "") << row.digits[i];
            text << " | " << row.d << " | ";
            for (std::size_t i = 0; i < row.n.size(); ++i)
                text << (i ? " " : "") << row.n[i];
            text << " | ";
            if (j == 0) {
                r["diff"] = nullptr;
                text << "-";
            } else {
                const auto& prev = table.rows[static_cast<std::size_t>(j - 1)];
                std::vector<Int> diff;
                for (std::size_t i = 0; i < row.n.size(); ++i)
                    diff.push_back(prev.n[i] - row.n[i]);
                r["diff"] = json_of(diff);
                for (std::size_t i = 0; i < diff.size(); ++i)
                    text << (i ? " " : "") << diff[i];
            }
            text << "\n";
            rows.push_back(std::move(r));
        }
    }
    out["rows"] = std::move(rows);
    res.machine = std::move(out);
    res.text = text.str();
    return res;
}

Json certificate_json(const PartitionCertificate& cert) {
    Json groups = Json::array();
    for (const auto& group : cert.groups) {
        Json g = Json::array();
        for (const auto& mem : group) {
            Json e;
            e["lambda"] = mem.lambda;
            e["kappa"] = mem.kappa;
            g.push_back(std::move(e));
        }
        groups.push_back(std::move(g));
    }
    return groups;
}

Json witness_json(const std::vector<VModule>& witness) {
    Json arr = Json::array();
    for (const auto& mem : witness) {
        Json e;
        e["lambda"] = mem.lambda;
        e["kappa"] = mem.kappa;
        arr.push_back(std::move(e));
    }
    return arr;
}

RunResult run_decompose(const JobSpec& job) {
    const GroupSpec spec = group_of(job);
    const std::vector<Int> lower = lower_of(job, spec.p);
    const JumpSequence js = jumps_from_lower(lower, spec.p);
    const ModuleMultiset ms = decompose(spec, lower);
    const Int genus = genus_special(lower, spec.p);
    if (!dimension_check(ms, genus))
        throw InconsistencyError("decomposition dimension differs from genus");
    const KgbReport kgb = kgb_vanishes(lower, spec.p, spec.m);
    const Int eff_a0 = normalized_a0(spec.a0, spec.m);
    const ModuleMultiset shown = in_notation(ms, job, eff_a0);

    RunResult res;
    Json out;
    out["genus"] = genus;
    out["kgb_vanishes"] = kgb.vanishes;
    out["modules"] = modules_json(shown);
    out["notation"] = job.notation;
    out["summands"] = ms.instance_count();
    out["group"] = group_json(spec);
    out["jumps"] = jumps_json(js);
    std::ostringstream text;
    text << "genus: " << genus << "\n";
    text << "kgb obstruction: " << (kgb.vanishes ? "vanishes" : "does not vanish")
         << "\n";
    text << "summands: " << ms.instance_count() << "\n";
    for (const auto& e : out["modules"])
        text << module_text(ModuleKey{e["socle"].get<Int>(), e["dim"].get<Int>()},
                            job.notation == "v" ? Notation::V : Notation::U)
             << " x" << e["mult"].get<Int>() << "\n";
    res.machine = std::move(out);
    res.text = text.str();
    return res;
}

RunResult run_decide(const JobSpec& job) {
    const GroupSpec spec = group_of(job);
    const std::vector<Int> lower = lower_of(job, spec.p);
    const JumpSequence js = jumps_from_lower(lower, spec.p);
    SearchOptions opts;
    opts.allow_trivial_eigenvalue = job.allow_trivial_eigenvalue;
    opts.cross_check = job.cross_check;
    opts.budget = job.budget;
    const LiftReport rep = decide(spec, lower, opts);
    const ModuleMultiset ms = decompose(spec, lower);
    const Int eff_a0 = normalized_a0(spec.a0, spec.m);

    RunResult res;
    Json out;
    const bool liftable = rep.decision == LiftDecision::Liftable;
    out["decision"] = liftable ? "liftable" : "not-liftable";
    out["genus"] = rep.genus ? Json(*rep.genus) : Json(nullptr);
    out["kgb_vanishes"] = rep.kgb ? Json(*rep.kgb) : Json(nullptr);
    out["modules"] = modules_json(in_notation(ms, job, eff_a0));
    out["certificate"] =
        rep.certificate ? certificate_json(*rep.certificate) : Json(nullptr);
    out["witness"] = rep.witness.empty() ? Json(nullptr)
                                         : witness_json(rep.witness);
    out["a"] = rep.a_used;
    out["summands"] = rep.summand_count;
    out["notation"] = job.notation;
    out["group"] = group_json(spec);
    out["jumps"] = jumps_json(js);
    out["note"] = rep.note;

    std::ostringstream text;
    text << "group: p=" << spec.p << " h=" << spec.h << " m=" << spec.m
         << " alpha=" << spec.alpha << " a0=" << spec.a0 << " (q=" << spec.q
         << ")\n";
    text << "jumps: lower";
    for (Int b : js.lower)
        text << " " << b;
    text << " | upper";
    for (Int w : js.upper)
        text << " " << w;
    text << "\n";
    text << "genus: " << (rep.genus ? *rep.genus : -1) << "\n";
    text << "kgb obstruction: "
         << (rep.kgb && *rep.kgb ? "vanishes" : "does not vanish") << "\n";
    text << "summands: " << rep.summand_count << "\n";
    text << "decision: " << (liftable ? "liftable" : "not liftable") << "\n";
    if (!rep.note.empty())
        text << "note: " << rep.note << "\n";
    const Notation target = job.notation == "v" ? Notation::V : Notation::U;
    text << "modules:";
    for (const auto& e : out["modules"]) {
        text << " " << module_text(ModuleKey{e["socle"].get<Int>(),
                                             e["dim"].get<Int>()},
                                   target);
        if (e["mult"].get<Int>() != 1)
            text << " x" << e["mult"].get<Int>();
    }
    text << "\n";
    if (rep.certificate) {
        text << "certificate groups: " << rep.certificate->groups.size()
             << " (a = " << rep.certificate->a << ")\n";
        for (const auto& group : rep.certificate->groups) {
            text << "  {";
            for (const auto& mem : group) {
                const ModuleKey key =
                    target == Notation::U
                        ? v_to_u(ModuleKey{mem.lambda, mem.kappa}, spec.m, eff_a0)
                        : ModuleKey{mem.lambda, mem.kappa};
                text << " " << module_text(key, target);
            }
            text << " }\n";
        }
    }
    if (!rep.witness.empty()) {
        text << "witness:";
        for (const auto& mem : rep.witness) {
            const ModuleKey key =
                target == Notation::U
                    ? v_to_u(ModuleKey{mem.lambda, mem.kappa}, spec.m, eff_a0)
                    : ModuleKey{mem.lambda, mem.kappa};
            text << " " << module_text(key, target);
        }
        text << "\n";
    }
    res.exit_code = liftable ? 0 : 1;
    res.machine = std::move(out);
    res.text = text.str();
    return res;
}

RunResult run_family(const JobSpec& job) {
    if (!job.p)
        throw InputError("p: required");
    if (!job.h)
        throw InputError("h: required");
    if (!job.family_w0)
        throw InputError("family_w0: required");
    const std::vector<Int> lower = family_jumps(*job.p, *job.h, *job.family_w0);
    const JumpSequence js = jumps_from_lower(lower, *job.p);
    const Int genus = genus_special(lower, *job.p);
    RunResult res;
    Json out;
    out["p"] = *job.p;
    out["h"] = *job.h;
    out["family_w0"] = *job.family_w0;
    out["jumps"] = jumps_json(js);
    out["genus"] = genus;
    std::ostringstream text;
    text << "lower jumps:";
    for (Int b : js.lower)
        text << " " << b;
    text << "\nupper jumps:";
    for (Int w : js.upper)
        text << " " << w;
    text << "\ngenus: " << genus << "\n";
    res.machine = std::move(out);
    res.text = text.str();
    return res;
}

struct ScanRecord {
    Json machine;
    std::string text;
};

ScanRecord scan_one(const JobSpec& job, const GroupSpec& spec,
                    const std::vector<Int>& upper, Int index) {
    const JumpSequence js = jumps_from_upper(upper, spec.p);
    ScanRecord rec;
    Json out;
    out["index"] = index;
    out["lower"] = json_of(js.lower);
    out["upper"] = json_of(js.upper);
    out["genus"] = genus_special(js.lower, spec.p);
    out["kgb_vanishes"] = kgb_vanishes(js.lower, spec.p, spec.m).vanishes;
    std::string decision;
    std::string note;
    try {
        SearchOptions opts;
        opts.allow_trivial_eigenvalue = job.allow_trivial_eigenvalue;
        opts.cross_check = job.cross_check;
        opts.budget = job.budget;
        const LiftReport rep = decide(spec, js.lower, opts);
        decision =
            rep.decision == LiftDecision::Liftable ? "liftable" : "not-liftable";
    } catch (const ResourceError& e) {
        decision = "indeterminate";
        note = e.what();
    }
    out["decision"] = decision;
    if (!note.empty())
        out["note"] = note;
    std::ostringstream text;
    text << "upper";
    for (Int w : js.upper)
        text << " " << w;
    text << " | lower";
    for (Int b : js.lower)
        text << " " << b;
    text << " | genus " << out["genus"].get<Int>() << " | "
         << decision << "\n";
    rec.machine = std::move(out);
    rec.text = text.str();
    return rec;
}

} // namespace

std::vector<std::vector<Int>> scan_enumerate(const JobSpec& job) {
    if (!job.p || !job.h || !job.m)
        throw InputError("p/h/m: required for scan");
    const Int p = *job.p;
    const Int h = *job.h;
    const Int m = *job.m;
    std::vector<std::vector<Int>> sequences;

    if (job.upper) {
        if (validate_obus_pries(*job.upper, p, m, job.m_prime).valid)
            sequences.push_back(*job.upper);
        return sequences;
    }
    if (job.family_filter || job.max_w0) {
        if (!job.max_w0)
            throw InputError("max_w0: required for a family scan");
        for (Int w0 = 1; w0 <= *job.max_w0; ++w0) {
            if (gcd(w0, p) != 1)
                continue;
            std::vector<Int> upper;
            Int w = w0;
            for (Int k = 0; k < h; ++k) {
                upper.push_back(w);
                w = checked_mul(w, p);
            }
            if (validate_obus_pries(upper, p, m, job.m_prime).valid)
                sequences.push_back(std::move(upper));
        }
        return sequences;
    }
    if (!job.max_w1)
        throw InputError("max_w1: required when no family bound is given");
    const Int cap = job.max_upper ? *job.max_upper
                                  : checked_mul(*job.max_w1, checked_mul(p, p));
    // lexicographic enumeration of admissible sequences
    std::vector<Int> stack;
    std::function<void()> grow = [&] {
        if (static_cast<Int>(stack.size()) == h) {
            if (validate_obus_pries(stack, p, m, job.m_prime).valid)
                sequences.push_back(stack);
            return;
        }
        const Int w1 = stack.front();
        const Int lo = checked_mul(p, stack.back());
        if (lo <= cap) {
            stack.push_back(lo);
            grow();
            stack.pop_back();
        }
        for (Int w = lo + 1; w <= cap; ++w) {
            if (w % p == 0 || (w - w1) % m != 0)
                continue;
            stack.push_back(w);
            grow();
            stack.pop_back();
        }
    };
    for (Int w1 = 1; w1 <= *job.max_w1; ++w1) {
        if (w1 % p == 0 || gcd(m, w1) != job.m_prime)
            continue;
        stack.assign(1, w1);
        if (h == 1) {
            if (validate_obus_pries(stack, p, m, job.m_prime).valid)
                sequences.push_back(stack);
        } else {
            grow();
        }
    }
    return sequences;
}

namespace {

RunResult run_scan(const JobSpec& job) {
    const GroupSpec spec = group_of(job);
    const auto sequences = scan_enumerate(job);

    std::vector<ScanRecord> records(sequences.size());
    const int workers = std::max(1, job.workers);
    if (workers == 1 || sequences.size() <= 1) {
        for (std::size_t i = 0; i < sequences.size(); ++i)
            records[i] = scan_one(job, spec, sequences[i], static_cast<Int>(i));
    } else {
        // evaluate concurrently, emit in enumeration order
        std::size_t next = 0;
        while (next < sequences.size()) {
            const std::size_t batch = std::min<std::size_t>(
                static_cast<std::size_t>(workers), sequences.size() - next);
            std::vector<std::future<ScanRecord>> futures;
            futures.reserve(batch);
            for (std::size_t i = 0; i < batch; ++i)
                futures.push_back(std::async(
                    std::launch::async, scan_one, std::cref(job),
                    std::cref(spec), std::cref(sequences[next + i]),
                    static_cast<Int>(next + i)));
            for (std::size_t i = 0; i < batch; ++i)
                records[next + i] = futures[i].get();
            next += batch;
        }
    }

    RunResult res;
    Json out;
    out["mode"] = "scan";
    out["count"] = records.size();
    Json arr = Json::array();
    std::ostringstream text;
    for (auto& rec : records) {
        arr.push_back(std::move(rec.machine));
        text << rec.text;
    }
    out["records"] = std::move(arr);
    res.machine = std::move(out);
    res.text = text.str();
    return res;
}

} // namespace

RunResult run(const JobSpec& job) {
    switch (job.mode) {
    case Mode::Validate:
        return run_validate(job);
    case Mode::Genus:
        return run_genus(job);
    case Mode::DTable:
        return run_dtable(job);
    case Mode::Decompose:
        return run_decompose(job);
    case Mode::Decide:
        return run_decide(job);
    case Mode::Family:
        return run_family(job);
    case Mode::Scan:
        return run_scan(job);
    }
    throw InputError("mode: unsupported");
}

} // namespace liftcli
