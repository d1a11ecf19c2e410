#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hkg/lifting.hpp"

namespace liftcli {

using hkg::Int;
using Json = nlohmann::ordered_json;

/// Malformed input (shape, fields, flags).  Rendered with exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

enum class Mode { Validate, Genus, DTable, Decompose, Decide, Family, Scan };

Mode mode_from_string(const std::string& s);
std::string mode_to_string(Mode mode);

struct JobSpec {
    Mode mode = Mode::Decide;
    std::optional<Int> p, h, m;
    std::optional<Int> alpha, a0;
    std::optional<std::vector<Int>> lower, upper;
    std::optional<Int> family_w0;
    bool allow_trivial_eigenvalue = false;
    bool cross_check = false;
    long long budget = 5'000'000;
    std::string notation = "u"; // u | v
    std::string rows;           // dtable slice like "0-6,120-124"; empty = all

    // scan controls
    std::optional<Int> max_w0;  // family enumeration bound
    std::optional<Int> max_w1;  // general enumeration bound on w_1
    std::optional<Int> max_upper; // cap on every w_i in general enumeration
    bool family_filter = false;
    Int m_prime = 1;
    int workers = 1;
};

/// Overlays the JSON job document onto the job.  Unknown fields are errors.
void apply_job_json(JobSpec& job, const Json& doc);

struct RunResult {
    int exit_code = 0;  // 0 ok/liftable, 1 invalid/not-liftable, 3 indeterminate
    std::string text;
    Json machine;
};

/// Executes the job.  Throws InputError on malformed jobs; never exits.
RunResult run(const JobSpec& job);

/// Scan enumeration, exposed for tests.
std::vector<std::vector<Int>> scan_enumerate(const JobSpec& job);

} // namespace liftcli
