#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "liftcli/job.hpp"

namespace {

using liftcli::InputError;
using liftcli::JobSpec;
using liftcli::Mode;

std::vector<hkg::Int> parse_int_list(const std::string& s,
                                     const std::string& field) {
    std::vector<hkg::Int> out;
    std::istringstream in(s);
    std::string part;
    while (std::getline(in, part, ',')) {
        try {
            out.push_back(std::stoll(part));
        } catch (const std::exception&) {
            throw InputError(field + ": expected comma-separated integers");
        }
    }
    if (out.empty())
        throw InputError(field + ": empty list");
    return out;
}

struct CliOptions {
    std::string input_file;
    bool json_output = false;
    std::string notation;
    bool allow_trivial = false;
    bool cross_check = false;
    long long budget = -1;
    int workers = -1;
    std::string lower, upper;
    hkg::Int p = -1, h = -1, m = -1;
    hkg::Int alpha = std::numeric_limits<hkg::Int>::min();
    hkg::Int a0 = std::numeric_limits<hkg::Int>::min();
    hkg::Int family_w0 = -1;
    std::string rows;
    hkg::Int max_w0 = -1, max_w1 = -1, max_upper = -1, m_prime = -1;
    bool family_filter = false;
};

void add_common(CLI::App* cmd, CliOptions& o) {
    cmd->set_help_flag("--help", "print help");
    cmd->add_option("-p,--p", o.p, "characteristic (odd prime)");
    cmd->add_option("-h,--h", o.h, "exponent h of q = p^h");
    cmd->add_option("-m,--m", o.m, "order of the tame part");
    cmd->add_option("--alpha", o.alpha, "conjugation exponent");
    cmd->add_option("--a0", o.a0, "discrete log of alpha");
    cmd->add_option("--lower", o.lower, "lower jumps, comma separated");
    cmd->add_option("--upper", o.upper, "upper jumps, comma separated");
    cmd->add_option("--w0", o.family_w0, "first jump of the geometric family");
}

void merge(JobSpec& job, const CliOptions& o) {
    if (o.p >= 0)
        job.p = o.p;
    if (o.h >= 0)
        job.h = o.h;
    if (o.m >= 0)
        job.m = o.m;
    if (o.alpha != std::numeric_limits<hkg::Int>::min())
        job.alpha = o.alpha;
    if (o.a0 != std::numeric_limits<hkg::Int>::min())
        job.a0 = o.a0;
    if (!o.lower.empty())
        job.lower = parse_int_list(o.lower, "lower_jumps");
    if (!o.upper.empty())
        job.upper = parse_int_list(o.upper, "upper_jumps");
    if (o.family_w0 >= 0)
        job.family_w0 = o.family_w0;
    if (!o.notation.empty()) {
        if (o.notation != "u" && o.notation != "v")
            throw InputError("notation: expected 'u' or 'v'");
        job.notation = o.notation;
    }
    if (o.allow_trivial)
        job.allow_trivial_eigenvalue = true;
    if (o.cross_check)
        job.cross_check = true;
    if (o.budget >= 0)
        job.budget = o.budget;
    if (o.workers >= 0)
        job.workers = o.workers;
    if (!o.rows.empty())
        job.rows = o.rows;
    if (o.max_w0 >= 0)
        job.max_w0 = o.max_w0;
    if (o.max_w1 >= 0)
        job.max_w1 = o.max_w1;
    if (o.max_upper >= 0)
        job.max_upper = o.max_upper;
    if (o.m_prime >= 0)
        job.m_prime = o.m_prime;
    if (o.family_filter)
        job.family_filter = true;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"liftoracle: Galois module structure of differentials of "
                 "one-point covers and the lifting criterion"};
    app.set_help_flag("--help", "print help"); // frees -h for the exponent
    app.require_subcommand(0, 1);

    CliOptions opts;
    app.add_option("--input", opts.input_file, "JSON job file");
    app.add_flag("--json", opts.json_output, "machine-readable output");
    app.add_option("--notation", opts.notation, "module notation: u or v");
    app.add_flag("--allow-trivial-eigenvalue", opts.allow_trivial,
                 "also search lifts with a trivial eigenvalue (a = 1)");
    app.add_flag("--cross-check", opts.cross_check,
                 "run matcher and searcher and compare (m = 2)");
    app.add_option("--budget", opts.budget, "search node budget");
    app.add_option("--workers", opts.workers, "scan worker threads");

    CLI::App* validate = app.add_subcommand("validate", "validate group and jumps");
    CLI::App* genus = app.add_subcommand("genus", "genus of the cover");
    CLI::App* dtable = app.add_subcommand("dtable", "degree and socle-count table");
    CLI::App* decompose = app.add_subcommand("decompose",
                                             "indecomposable summands");
    CLI::App* lift = app.add_subcommand("lift", "decide liftability");
    CLI::App* family = app.add_subcommand("family", "geometric family jumps");
    CLI::App* scan = app.add_subcommand("scan", "sweep admissible jump sequences");
    for (CLI::App* cmd : {validate, genus, dtable, decompose, lift, family, scan}) {
        cmd->fallthrough(); // global flags may follow the subcommand
        add_common(cmd, opts);
    }
    dtable->add_option("--rows", opts.rows, "row slice, e.g. 0-6,120-124");
    validate->add_option("--mprime", opts.m_prime, "centralizer index m'");
    scan->add_option("--max-w0", opts.max_w0, "family scan bound on w0");
    scan->add_flag("--family", opts.family_filter,
                   "restrict to the geometric family (w_i = p w_{i-1})");
    scan->add_option("--max-w1", opts.max_w1, "general scan bound on w_1");
    scan->add_option("--max-upper", opts.max_upper,
                     "general scan cap on every upper jump");
    scan->add_option("--mprime", opts.m_prime, "centralizer index m'");

    CLI11_PARSE(app, argc, argv);

    try {
        JobSpec job;
        if (const char* env = std::getenv("LIFTORACLE_BUDGET")) {
            try {
                job.budget = std::stoll(env);
            } catch (const std::exception&) {
                throw InputError("LIFTORACLE_BUDGET: expected an integer");
            }
        }
        if (!opts.input_file.empty()) {
            std::ifstream in(opts.input_file);
            if (!in.good())
                throw InputError("input: cannot open '" + opts.input_file + "'");
            liftcli::Json doc;
            try {
                in >> doc;
            } catch (const std::exception& e) {
                throw InputError(std::string("input: invalid JSON: ") + e.what());
            }
            liftcli::apply_job_json(job, doc);
        }
        if (validate->parsed())
            job.mode = Mode::Validate;
        else if (genus->parsed())
            job.mode = Mode::Genus;
        else if (dtable->parsed())
            job.mode = Mode::DTable;
        else if (decompose->parsed())
            job.mode = Mode::Decompose;
        else if (lift->parsed())
            job.mode = Mode::Decide;
        else if (family->parsed())
            job.mode = Mode::Family;
        else if (scan->parsed())
            job.mode = Mode::Scan;
        else if (opts.input_file.empty())
            throw InputError("mode: give a subcommand or --input FILE");
        merge(job, opts);

        const liftcli::RunResult res = liftcli::run(job);
        if (opts.json_output)
            std::cout << res.machine.dump(1) << "\n";
        else
            std::cout << res.text;
        return res.exit_code;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const hkg::ResourceError& e) {
        std::cerr << "indeterminate: " << e.what() << "\n";
        return 3;
    } catch (const hkg::Error& e) {
        std::cerr << "invalid: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }
}
