#include "liftcli/job.hpp"

namespace liftcli {

Mode mode_from_string(const std::string& s) {
    if (s == "validate")
        return Mode::Validate;
    if (s == "genus")
        return Mode::Genus;
    if (s == "dtable")
        return Mode::DTable;
    if (s == "decompose")
        return Mode::Decompose;
    if (s == "decide" || s == "lift")
        return Mode::Decide;
    if (s == "family")
        return Mode::Family;
    if (s == "scan")
        return Mode::Scan;
    throw InputError("mode: unknown value '" + s + "'");
}

std::string mode_to_string(Mode mode) {
    switch (mode) {
    case Mode::Validate:
        return "validate";
    case Mode::Genus:
        return "genus";
    case Mode::DTable:
        return "dtable";
    case Mode::Decompose:
        return "decompose";
    case Mode::Decide:
        return "decide";
    case Mode::Family:
        return "family";
    case Mode::Scan:
        return "scan";
    }
    return "?";
}

namespace {

Int as_int(const Json& v, const std::string& field) {
    if (!v.is_number_integer())
        throw InputError(field + ": expected an integer");
    return v.get<Int>();
}

std::vector<Int> as_int_list(const Json& v, const std::string& field) {
    if (!v.is_array())
        throw InputError(field + ": expected an array of integers");
    std::vector<Int> out;
    for (const auto& e : v)
        out.push_back(as_int(e, field));
    return out;
}

} // namespace

void apply_job_json(JobSpec& job, const Json& doc) {
    if (!doc.is_object())
        throw InputError("job: expected a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (key == "mode")
            job.mode = mode_from_string(value.get<std::string>());
        else if (key == "p")
            job.p = as_int(value, key);
        else if (key == "h")
            job.h = as_int(value, key);
        else if (key == "m")
            job.m = as_int(value, key);
        else if (key == "alpha")
            job.alpha = as_int(value, key);
        else if (key == "a0")
            job.a0 = as_int(value, key);
        else if (key == "lower_jumps")
            job.lower = as_int_list(value, key);
        else if (key == "upper_jumps")
            job.upper = as_int_list(value, key);
        else if (key == "family_w0")
            job.family_w0 = as_int(value, key);
        else if (key == "allow_trivial_eigenvalue")
            job.allow_trivial_eigenvalue = value.get<bool>();
        else if (key == "cross_check")
            job.cross_check = value.get<bool>();
        else if (key == "budget")
            job.budget = as_int(value, key);
        else if (key == "notation")
            job.notation = value.get<std::string>();
        else if (key == "rows")
            job.rows = value.get<std::string>();
        else if (key == "max_w0")
            job.max_w0 = as_int(value, key);
        else if (key == "max_w1")
            job.max_w1 = as_int(value, key);
        else if (key == "max_upper")
            job.max_upper = as_int(value, key);
        else if (key == "family")
            job.family_filter = value.get<bool>();
        else if (key == "m_prime")
            job.m_prime = as_int(value, key);
        else if (key == "workers")
            job.workers = static_cast<int>(as_int(value, key));
        else
            throw InputError(key + ": unknown job field");
    }
    if (job.notation != "u" && job.notation != "v")
        throw InputError("notation: expected 'u' or 'v'");
}

} // namespace liftcli
