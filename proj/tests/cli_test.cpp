// Golden-file style driver for the command-line tool: the fixed example
// invocations must agree with the library verdicts, and the exit-code
// contract (0 equivalent, 1 inequivalent/violation, 2 usage, 3 resource)
// must hold. Invoked with the binary path as argv[1].

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <json.hpp>

namespace {

int failures = 0;

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& cmd) {
    std::string full = cmd + " 2>/dev/null";
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) {
        std::cerr << "popen failed for: " << cmd << "\n";
        std::exit(70);
    }
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    int status = pclose(pipe);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, out};
}

void expect(bool ok, const std::string& what) {
    if (ok) {
        std::cout << "ok: " << what << "\n";
    } else {
        std::cout << "FAIL: " << what << "\n";
        ++failures;
    }
}

void expect_run(const std::string& cmd, int want_code, const std::string& want_substr = "") {
    RunResult r = run(cmd);
    bool ok = r.exit_code == want_code &&
              (want_substr.empty() || r.out.find(want_substr) != std::string::npos);
    if (!ok)
        std::cout << "  got exit=" << r.exit_code << " out=\"" << r.out.substr(0, 200) << "\"\n";
    expect(ok, cmd);
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: dpbb_cli_test <path-to-dpbb>\n";
        return 64;
    }
    std::string bin = argv[1];

    // Formatting and canonical printing.
    expect_run(bin + " fmt \"rec X. tau.X\"", 0, "rec X. tau.X\n");
    expect_run(bin + " fmt \"(a.0+0)+b.0\"", 0, "a.0 + 0 + b.0\n");
    expect_run(bin + " fmt \"rec FOO. a.FOO\"", 0, "rec X. a.X\n");

    // Fixed equivalence verdicts with the exit-code contract.
    expect_run(bin + " check --dpbb \"0\" \"tau.0\"", 0, "equivalent");
    expect_run(bin + " check --rooted \"0\" \"tau.0\"", 1, "inequivalent");
    expect_run(bin + " check --rooted \"0 + a.0\" \"tau.0 + a.0\"", 1);
    expect_run(bin + " check --dpbb \"0 + a.0\" \"tau.0 + a.0\"", 1);
    expect_run(bin + " check --rooted --open X \"X\" \"tau.X\"", 1);
    expect_run(bin + " check --dpbb --open X \"X\" \"tau.X\"", 0);
    expect_run(bin + " check --dpbb \"rec X.X\" \"rec X.tau.X\"", 1);
    expect_run(bin + " check --branching \"rec X.X\" \"rec X.tau.X\"", 0);
    expect_run(bin + " check --rooted \"a.0 + a.0\" \"a.0\"", 0);

    // JSON verdicts parse and carry the schema.
    {
        RunResult r = run(bin + " check --json --rooted \"0\" \"tau.0\"");
        bool ok = r.exit_code == 1;
        try {
            auto j = nlohmann::json::parse(r.out);
            ok = ok && j.at("result").get<bool>() == false && j.at("counterexample").is_object() &&
                 j.at("counterexample").at("pair").size() == 2;
        } catch (...) {
            ok = false;
        }
        expect(ok, "check --json schema");
    }
    {
        RunResult r = run(bin + " check --json --dpbb \"0\" \"tau.0\"");
        bool ok = r.exit_code == 0;
        try {
            auto j = nlohmann::json::parse(r.out);
            ok = ok && j.at("result").get<bool>() && j.at("witness_partition").at("blocks").size() == 1;
        } catch (...) {
            ok = false;
        }
        expect(ok, "check --json witness partition");
    }

    // LTS export.
    expect_run(bin + " lts \"rec X. tau.X\"", 0, "des (0, 1, 1)");
    expect_run(bin + " lts --extended \"X + a.0\"", 0, "\"var:X\"");
    {
        std::string f = "/tmp/dpbb_cli_test_out.aut";
        RunResult r = run(bin + " lts \"a.0 + tau.0\" --out " + f);
        std::ifstream in(f);
        std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        expect(r.exit_code == 0 && content.find("des (0, 2, 2)") == 0, "lts --out file");
    }

    // Minimization: tau.tau.a.0 collapses to two states.
    {
        std::string f = "/tmp/dpbb_cli_test_min.aut";
        RunResult r = run(bin + " minimize \"tau.tau.a.0\" --out " + f);
        std::ifstream in(f);
        std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        expect(r.exit_code == 0 && content.find("des (0, 1, 2)") == 0, "minimize tau.tau.a.0");
    }

    // Relation verification. The witness needs (0,0): matching tau.0's step
    // by the empty move leaves the targets (0, 0), which must be related.
    {
        std::string f = "/tmp/dpbb_cli_test_rel.json";
        std::ofstream out(f);
        out << R"({"pairs": [["0", "tau.0"], ["0", "0"]], "symmetric": true})";
        out.close();
        expect_run(bin + " verify --relation " + f + " --conditions T,Dsecond \"tau.0\"", 0, "verified");
        expect_run(bin + " verify --relation " + f + " --conditions R1R2 \"tau.0\"", 1, "violated");

        std::string g = "/tmp/dpbb_cli_test_rel_bare.json";
        std::ofstream out2(g);
        out2 << R"({"pairs": [["0", "tau.0"]], "symmetric": true})";
        out2.close();
        expect_run(bin + " verify --relation " + g + " --conditions T \"tau.0\"", 1, "violated");
    }

    // Up-to pipeline.
    expect_run(bin + " upto \"a.X\" \"a.X + a.X\"", 0);
    expect_run(bin + " upto \"tau.X\" \"X\"", 1);
    {
        RunResult r = run(bin + " upto --json \"tau.X + a.0\" \"tau.tau.X + a.0\"");
        bool ok = r.exit_code == 0;
        try {
            auto j = nlohmann::json::parse(r.out);
            ok = ok && j.at("agreed").get<bool>() && j.at("uef").at("pairs").size() >= 1;
        } catch (...) {
            ok = false;
        }
        expect(ok, "upto --json witness dump");
    }

    // Campaigns.
    expect_run(bin + " fuzz --congruence --cases 10 --seed 11", 0, "0 violations");
    expect_run(bin + " fuzz --coarsest --cases 10 --seed 11", 0, "0 violations");
    {
        RunResult a = run(bin + " fuzz --congruence --cases 5 --seed 3 --json");
        RunResult b = run(bin + " fuzz --congruence --cases 5 --seed 3 --json");
        bool ok = a.exit_code == 0 && b.exit_code == 0;
        try {
            auto ja = nlohmann::json::parse(a.out);
            auto jb = nlohmann::json::parse(b.out);
            ja.erase("wall_ms");
            jb.erase("wall_ms");
            ok = ok && ja == jb;
        } catch (...) {
            ok = false;
        }
        expect(ok, "fuzz --json determinism for a fixed seed");
    }

    // Expression files via @path.
    {
        std::string f = "/tmp/dpbb_cli_test_expr.txt";
        std::ofstream out(f);
        out << "rec X. tau.X\n";
        out.close();
        expect_run(bin + " fmt @" + f, 0, "rec X. tau.X\n");
    }

    // Error contract: usage errors exit 2, syntax errors exit 2 with a
    // position, resource caps exit 3. Help is not an error.
    expect_run(bin + " --help", 0, "Usage");
    expect_run(bin + " check \"0\" \"0\"", 2);                    // no mode flag
    expect_run(bin + " check --dpbb \"0\"", 2);                   // missing operand
    expect_run(bin + " fmt \"a..0\"", 2);
    expect_run(bin + " nonsense", 2);
    expect_run("DPBB_STATE_CAP=3 " + bin + " lts \"a.a.a.a.0\"", 3);
    expect_run(bin + " check --dpbb \"X\" \"0\"", 2);             // open input rejected

    if (failures == 0) {
        std::cout << "all cli checks passed\n";
        return 0;
    }
    std::cout << failures << " cli checks failed\n";
    return 1;
}
