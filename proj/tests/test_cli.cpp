#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <filesystem>
#include <string>

#ifndef DVM_CLI_PATH
#error "DVM_CLI_PATH must point at the built binary"
#endif

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string out;
};

CmdResult run_cli(const std::string& args) {
    std::string cmd = std::string(DVM_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CmdResult res;
    std::array<char, 512> buf;
    while (fgets(buf.data(), buf.size(), pipe)) res.out += buf.data();
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string tmp_file(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("certify subcommand verifies all six vertices", "[cli]") {
    CmdResult res = run_cli("certify --case all --R 2 --no-audit");
    CHECK(res.exit_code == 0);
    int ok_lines = 0;
    std::size_t pos = 0;
    while ((pos = res.out.find("optimum 0, dual OK", pos)) != std::string::npos) {
        ++ok_lines;
        ++pos;
    }
    CHECK(ok_lines == 6);

    CmdResult low = run_cli("certify --case 1 --R 19/10 --no-audit");
    CHECK(low.exit_code != 0);
    CHECK(low.out.find("unbounded") != std::string::npos);
}

TEST_CASE("missing instance file exits with code 2", "[cli]") {
    CmdResult res = run_cli("validate --instance /no/such/file.txt");
    CHECK(res.exit_code == 2);
}

TEST_CASE("out-of-domain parameters exit with code 3", "[cli]") {
    CmdResult res = run_cli("bounds --at 0.4,1");
    CHECK(res.exit_code == 3);
    CmdResult res2 = run_cli("bounds --at 2/5,1");
    CHECK(res2.exit_code == 3);
}

TEST_CASE("emitted example files reproduce their closed-form distortion", "[cli]") {
    for (const std::string name : {"collinear", "colocated", "triangle"}) {
        std::string path = tmp_file("dvm_cli_" + name + ".txt");
        CmdResult emit = run_cli("bounds --example " + name + " -o " + path);
        REQUIRE(emit.exit_code == 0);
        CmdResult check = run_cli("validate --instance " + path);
        CHECK(check.exit_code == 0);
        CmdResult run = run_cli("run --instance " + path);
        REQUIRE(run.exit_code == 0);
        INFO(name << ":\n" << run.out);
        CHECK(run.out.find("winner: A") != std::string::npos);
        CHECK(run.out.find("distortion: 3 (") != std::string::npos);
    }
}

TEST_CASE("round trip away from the optimum", "[cli]") {
    std::string path = tmp_file("dvm_cli_rational.txt");
    REQUIRE(run_cli("bounds --example collinear --lambda 3/5 --w 1 -o " + path).exit_code == 0);
    CmdResult run = run_cli("run --instance " + path + " --lambda 3/5 --w 1");
    REQUIRE(run.exit_code == 0);
    CHECK(run.out.find("distortion: 10/3 (") != std::string::npos);  // d1 at (3/5, 1)
}

TEST_CASE("explicit matchings drive the run subcommand", "[cli]") {
    std::string path = tmp_file("dvm_cli_explicit.txt");
    std::ofstream out(path);
    out << "candidates A B C\nmetric line\ncandidate A 0\ncandidate B 1\ncandidate C 2\n"
           "voter b1 1 at 1\nvoter b2 1 at 1\nvoter c1 1 at 2\n"
           "pref_tie b1 A C A\npref_tie b2 A C A\ndelib_tie B C C\n"
           "match A C b2 c1 1/3\nmatch B C b1 c1 1/3\n";
    out.close();
    CmdResult run = run_cli("run --instance " + path + " --lambda 1/2 --w 1 --policy explicit");
    REQUIRE(run.exit_code == 0);
    CHECK(run.out.find("distortion: 4 (") != std::string::npos);
}

TEST_CASE("run emits csv with the documented header", "[cli]") {
    std::string path = tmp_file("dvm_cli_csv.txt");
    REQUIRE(run_cli("bounds --example collinear -o " + path).exit_code == 0);
    CmdResult res = run_cli("run --instance " + path + " --format csv --select all");
    REQUIRE(res.exit_code == 0);
    CHECK(res.out.rfind("x,y,size,win_mass,score,f,score_float,f_float\n", 0) == 0);
    CHECK(res.out.find("# winner: A") != std::string::npos);
}

TEST_CASE("montecarlo is deterministic under seed and jobs", "[cli]") {
    std::string flags = "montecarlo --m 2 --samples 300 --seed 99 --lambda 1/2 --w 1 --line-only";
    CmdResult a = run_cli(flags);
    CmdResult b = run_cli(flags);
    CmdResult c = run_cli(flags + " --jobs 3");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
}

TEST_CASE("oracle subcommand reports the exact worst case", "[cli]") {
    std::string path = tmp_file("dvm_cli_oracle.txt");
    REQUIRE(run_cli("bounds --example colocated -o " + path).exit_code == 0);
    CmdResult res = run_cli("oracle --instance " + path + " --winner A --ref B");
    REQUIRE(res.exit_code == 0);
    CHECK(res.out.find("= 3 (") != std::string::npos);
}
