#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

#include "liftcli/job.hpp"

using namespace liftcli;
using hkg::Int;

namespace {

Json fixture(const std::string& name) {
    std::ifstream in(std::string(FIXTURE_DIR) + "/" + name);
    REQUIRE(in.good());
    Json j;
    in >> j;
    return j;
}

JobSpec base_job(Mode mode) {
    JobSpec job;
    job.mode = mode;
    job.p = 5;
    job.h = 3;
    job.m = 2;
    return job;
}

struct Spawn {
    int exit_code = 0;
    std::string output;
};

Spawn spawn(const std::string& args) {
    const std::string cmd = std::string(LIFTORACLE_BIN) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    Spawn result;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        result.output.append(buf.data(), got);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

} // namespace

TEST_CASE("job JSON parsing") {
    JobSpec job;
    apply_job_json(job, Json::parse(R"({
        "mode": "decide", "p": 5, "h": 3, "m": 2, "family_w0": 9,
        "cross_check": true, "budget": 1000000
    })"));
    CHECK(job.mode == Mode::Decide);
    CHECK(job.family_w0 == 9);
    CHECK(job.cross_check);
    CHECK(job.budget == 1000000);

    JobSpec bad;
    CHECK_THROWS_AS(apply_job_json(bad, Json::parse(R"({"pp": 5})")),
                    InputError);
    CHECK_THROWS_AS(apply_job_json(bad, Json::parse(R"({"mode": "x"})")),
                    InputError);
    CHECK_THROWS_AS(apply_job_json(bad, Json::parse(R"({"p": "five"})")),
                    InputError);
}

TEST_CASE("exactly one jump source") {
    JobSpec job = base_job(Mode::Genus);
    CHECK_THROWS_AS(run(job), InputError); // none
    job.lower = std::vector<Int>{9, 189, 4689};
    job.upper = std::vector<Int>{9, 45, 225};
    CHECK_THROWS_AS(run(job), InputError); // two
}

TEST_CASE("run: genus") {
    JobSpec job = base_job(Mode::Genus);
    job.lower = std::vector<Int>{1, 21, 521};
    const auto res = run(job);
    CHECK(res.exit_code == 0);
    CHECK(res.machine["genus"] == 1240);
}

TEST_CASE("run: decide exit codes and report fields") {
    JobSpec bad = base_job(Mode::Decide);
    bad.family_w0 = 9;
    const auto res = run(bad);
    CHECK(res.exit_code == 1);
    CHECK(res.machine["decision"] == "not-liftable");
    CHECK(res.machine["genus"] == 11656);
    CHECK(res.machine["kgb_vanishes"] == true);
    CHECK(res.machine["certificate"].is_null());
    CHECK_FALSE(res.machine["witness"].is_null());

    JobSpec good = base_job(Mode::Decide);
    good.family_w0 = 1;
    const auto ok = run(good);
    CHECK(ok.exit_code == 0);
    CHECK(ok.machine["decision"] == "liftable");
    CHECK(ok.machine["certificate"].size() == 10);
    for (const auto& group : ok.machine["certificate"])
        CHECK(group.size() == 2);
}

TEST_CASE("run: decomposition fixtures through the job layer") {
    JobSpec job = base_job(Mode::Decompose);
    job.family_w0 = 9;
    const auto res = run(job);
    const auto want = fixture("d125_w9_modules.json");
    CHECK(res.machine["modules"] == want["modules"]);
    CHECK(res.machine["genus"] == 11656);

    JobSpec c4 = base_job(Mode::Decompose);
    c4.m = 4;
    c4.alpha = 57;
    c4.lower = std::vector<Int>{1, 21, 521};
    const auto res4 = run(c4);
    const auto want4 = fixture("c125xc4_w1_modules.json");
    CHECK(res4.machine["modules"] == want4["modules"]);
    CHECK(res4.machine["kgb_vanishes"] == false);
}

TEST_CASE("run: dtable fixture rows") {
    JobSpec job = base_job(Mode::DTable);
    job.family_w0 = 9;
    job.rows = "0-6,120-124";
    const auto res = run(job);
    const auto want = fixture("d125_w9_dtable.json");
    REQUIRE(res.machine["rows"].size() == want["rows"].size());
    for (std::size_t i = 0; i < want["rows"].size(); ++i) {
        const auto& w = want["rows"][i];
        const auto& g = res.machine["rows"][i];
        CHECK(g["j"] == w["j"]);
        CHECK(g["digits"] == w["digits"]);
        CHECK(g["d"] == w["d"]);
        CHECK(g["n"] == w["n"]);
        if (!w["diff"].is_null())
            CHECK(g["diff"] == w["diff"]);
    }
}

TEST_CASE("run: rows slice validation") {
    JobSpec job = base_job(Mode::DTable);
    job.family_w0 = 9;
    job.rows = "0-200";
    CHECK_THROWS_AS(run(job), InputError);
    job.rows = "5-1";
    CHECK_THROWS_AS(run(job), InputError);
    job.rows = "abc";
    CHECK_THROWS_AS(run(job), InputError);
}

TEST_CASE("run: family") {
    JobSpec job = base_job(Mode::Family);
    job.family_w0 = 9;
    const auto res = run(job);
    CHECK(res.machine["jumps"]["lower"] == Json::array({9, 189, 4689}));
    CHECK(res.machine["genus"] == 11656);
}

TEST_CASE("run: validate modes") {
    JobSpec job = base_job(Mode::Validate);
    job.m = 4;
    job.alpha = 57;
    const auto ok = run(job);
    CHECK(ok.exit_code == 0);
    CHECK(ok.machine["conjugation_faithful"] == true);

    JobSpec bad = base_job(Mode::Validate);
    bad.alpha = 2; // 2^2 != 1 mod 125
    const auto res = run(bad);
    CHECK(res.exit_code == 1);
    CHECK(res.machine["valid"] == false);

    JobSpec withjumps = base_job(Mode::Validate);
    withjumps.upper = std::vector<Int>{10};
    const auto r10 = run(withjumps);
    CHECK(r10.exit_code == 1);
    CHECK(r10.machine["obus_pries"]["violated_clause"] == 3);
}

TEST_CASE("scan enumeration and records") {
    JobSpec job = base_job(Mode::Scan);
    job.family_filter = true;
    job.max_w0 = 9;
    const auto seqs = scan_enumerate(job);
    // w0 = 1, 3, 7, 9: even w0 fail gcd(m, w0) = 1, w0 = 5 is divisible by p
    REQUIRE(seqs.size() == 4);
    CHECK(seqs.front() == std::vector<Int>{1, 5, 25});
    CHECK(seqs.back() == std::vector<Int>{9, 45, 225});

    const auto res = run(job);
    CHECK(res.exit_code == 0);
    REQUIRE(res.machine["records"].size() == 4);
    CHECK(res.machine["records"][0]["decision"] == "liftable");
    CHECK(res.machine["records"][3]["decision"] == "not-liftable");

    // empty range
    JobSpec empty = base_job(Mode::Scan);
    empty.family_filter = true;
    empty.max_w0 = 0;
    const auto none = run(empty);
    CHECK(none.exit_code == 0);
    CHECK(none.machine["records"].empty());

    // single explicit sequence, order-4 twist
    JobSpec one = base_job(Mode::Scan);
    one.m = 4;
    one.alpha = 57;
    one.upper = std::vector<Int>{1, 5, 25};
    const auto rec = run(one);
    REQUIRE(rec.machine["records"].size() == 1);
    CHECK(rec.machine["records"][0]["decision"] == "not-liftable");
}

TEST_CASE("scan: worker count does not change the output") {
    JobSpec job = base_job(Mode::Scan);
    job.family_filter = true;
    job.max_w0 = 12;
    job.workers = 1;
    const auto serial = run(job);
    job.workers = 4;
    const auto parallel = run(job);
    CHECK(serial.machine.dump() == parallel.machine.dump());
}

TEST_CASE("scan: general enumeration is lexicographic and admissible") {
    JobSpec job = base_job(Mode::Scan);
    job.h = 2;
    job.max_w1 = 5;
    job.max_upper = 30;
    const auto seqs = scan_enumerate(job);
    REQUIRE(!seqs.empty());
    for (std::size_t i = 1; i < seqs.size(); ++i)
        CHECK(seqs[i - 1] < seqs[i]);
    for (const auto& s : seqs)
        CHECK(hkg::validate_obus_pries(s, 5, 2).valid);
}

TEST_CASE("scan: exact-multiple steps are dropped when they break clause 4") {
    JobSpec job = base_job(Mode::Scan);
    job.p = 3;
    job.h = 2;
    job.m = 4;
    job.max_w1 = 5;
    job.max_upper = 30;
    const auto seqs = scan_enumerate(job);
    REQUIRE(!seqs.empty());
    for (const auto& s : seqs) {
        CHECK(hkg::validate_obus_pries(s, 3, 4).valid);
        // 3*w1 != w1 mod 4 for odd w1, so no sequence may use the multiple
        CHECK(s[1] != 3 * s[0]);
    }
}

TEST_CASE("machine output is canonical") {
    JobSpec job = base_job(Mode::Decide);
    job.family_w0 = 9;
    const auto a = run(job);
    const auto b = run(job);
    CHECK(a.machine.dump(1) == b.machine.dump(1));

    JobSpec c4 = base_job(Mode::Decompose);
    c4.m = 4;
    c4.alpha = 68;
    c4.lower = std::vector<Int>{1, 21, 521};
    CHECK(run(c4).machine.dump(1) == run(c4).machine.dump(1));
}

TEST_CASE("binary: exit codes and JSON determinism") {
    CHECK(spawn("lift -p 5 -h 3 -m 2 --w0 1").exit_code == 0);
    CHECK(spawn("lift -p 5 -h 3 -m 2 --w0 9").exit_code == 1);
    CHECK(spawn("lift -p 5 -h 3 -m 2").exit_code == 2);      // no jumps
    CHECK(spawn("lift -p 5 -h 3 -m 2 --w0 9 --lower 1").exit_code == 2);
    CHECK(spawn("genus -p 5 -h 3 --lower 1,2").exit_code == 1); // unrealizable
    CHECK(spawn("validate -p 5 -h 3 -m 2 --alpha 2").exit_code == 1);
    CHECK(spawn("").exit_code == 2);

    const auto once = spawn("lift -p 5 -h 3 -m 2 --w0 9 --json");
    const auto twice = spawn("lift -p 5 -h 3 -m 2 --w0 9 --json");
    CHECK(once.exit_code == 1);
    CHECK(once.output == twice.output);
}

TEST_CASE("binary: budget env var and flag") {
    const auto blocked =
        spawn("lift -p 5 -h 3 -m 4 --alpha 57 --lower 1,21,521 --budget 3");
    CHECK(blocked.exit_code == 3);

    // env var supplies the default budget
    const std::string cmd = std::string("LIFTORACLE_BUDGET=3 ") +
                            LIFTORACLE_BIN +
                            " lift -p 5 -h 3 -m 4 --alpha 57 --lower 1,21,521"
                            " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 512> buf{};
    while (fread(buf.data(), 1, buf.size(), pipe) > 0) {
    }
    const int status = pclose(pipe);
    CHECK(WEXITSTATUS(status) == 3);
}

TEST_CASE("binary: centralizer index flag") {
    // gcd(m, w_1) = 2 fails with the default m' = 1 and passes with m' = 2
    CHECK(spawn("validate -p 5 -h 3 -m 2 --upper 4,20,100").exit_code == 1);
    CHECK(spawn("validate -p 5 -h 3 -m 2 --upper 4,20,100 --mprime 2")
              .exit_code == 0);
}

TEST_CASE("binary: degenerate genus-zero cover") {
    const auto res = spawn("decompose -p 5 -h 1 -m 2 --lower 1 --json");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("\"genus\": 0") != std::string::npos);
    CHECK(res.output.find("\"modules\": []") != std::string::npos);
    CHECK(spawn("lift -p 5 -h 1 -m 2 --lower 1").exit_code == 0);
}

TEST_CASE("binary: V-notation rendering") {
    const auto res = spawn("lift -p 5 -h 3 -m 2 --w0 1 --notation v");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("V(0,5)") != std::string::npos);
    CHECK(res.output.find("U_{") == std::string::npos);
}

TEST_CASE("binary: job file input") {
    const std::string path = "/tmp/liftoracle_job_test.json";
    {
        std::ofstream out(path);
        out << R"({"mode":"decide","p":5,"h":3,"m":2,"family_w0":9})";
    }
    const auto res = spawn("--input " + path);
    CHECK(res.exit_code == 1);
    const auto res2 = spawn("--input " + path + " --json");
    CHECK(res2.output.find("\"decision\": \"not-liftable\"") != std::string::npos);
}
