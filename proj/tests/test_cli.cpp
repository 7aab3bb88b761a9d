#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifndef PTOLEMY_CLI_PATH
#define PTOLEMY_CLI_PATH "ptolemy"
#endif
#ifndef PTOLEMY_FIXTURES
#define PTOLEMY_FIXTURES "fixtures"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(PTOLEMY_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf;
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
    int status = pclose(p);
    return {WEXITSTATUS(status), out};
}

std::string fx(const std::string& name) { return std::string(PTOLEMY_FIXTURES) + "/" + name; }

}  // namespace

TEST_CASE("surface subcommands") {
    auto info = run("surface info " + fx("surface_0_4.json"));
    CHECK(info.exit_code == 0);
    CHECK(info.out.find("\"arcs\": 6") != std::string::npos);

    auto eps = run("surface eps " + fx("surface_0_4.json") + " --format csv");
    CHECK(eps.exit_code == 0);
    CHECK(eps.out.find("0,-1,1,1,-1,0") == 0);

    auto flip = run("surface flip " + fx("surface_0_4.json") + " --arc 1");
    CHECK(flip.exit_code == 0);
    CHECK(flip.out.find("\"gluing\"") != std::string::npos);

    auto path = run("surface path --from " + fx("surface_0_4.json") + " --to " +
                    fx("surface_0_4.json") + " --max-depth 1");
    CHECK(path.exit_code == 0);
    CHECK(path.out.find("\"found\": true") != std::string::npos);
}

TEST_CASE("qd subcommands") {
    auto ev = run("qd eval --func phi --hbar 0.7 --z-re 1.0");
    CHECK(ev.exit_code == 0);
    CHECK(ev.out.find("\"abs\": 1.0") != std::string::npos);

    auto table = run("qd table --lambda 0 --x \" -3..3\" --y \" -3..3\" --steps 5 --format csv");
    CHECK(table.exit_code == 0);
    CHECK(table.out.find("x,y,re_F,im_F,abs_F") == 0);
    // |F| column is identically 1
    std::size_t lines = 0, pos = 0;
    while ((pos = table.out.find(",1\n", pos)) != std::string::npos) {
        ++lines;
        ++pos;
    }
    CHECK(lines == 25);
}

TEST_CASE("verification subcommands and exit codes") {
    auto heis = run("heis check " + fx("surface_1_2.json"));
    CHECK(heis.exit_code == 0);

    auto verify = run("mcg verify " + fx("loop_0_4.json"));
    CHECK(verify.exit_code == 0);

    auto rho = run("mcg rho " + fx("loop_0_4.json") + " --lambda -1 --hbar 0.7");
    CHECK(rho.exit_code == 0);
    CHECK(rho.out.find("\"phase\": \"undetermined\"") != std::string::npos);

    // corrupted input -> exit 2
    auto bad = run("surface eps /nonexistent-file.json");
    CHECK(bad.exit_code == 2);

    // usage error -> exit 2
    auto usage = run("qd eval --func bogus");
    CHECK(usage.exit_code == 2);

    // failed verification -> exit 1 (pentagon tolerance impossible to meet)
    auto fail = run("check phi-pentagon --hbar 0.7 --grid 128 --domain 12 --states 2 --tolerance 1e-12");
    CHECK(fail.exit_code == 1);
}

TEST_CASE("identical config and seed give byte-identical output") {
    std::string cmd = "check phi-pentagon --hbar 0.7 --grid 256 --domain 12 --states 3 --seed 99";
    auto a = run(cmd);
    auto b = run(cmd);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);

    auto t1 = run("qd table --lambda 1 --hbar 1.3 --x \" -2..2\" --y \" -2..2\" --steps 5");
    auto t2 = run("qd table --lambda 1 --hbar 1.3 --x \" -2..2\" --y \" -2..2\" --steps 5");
    CHECK(t1.out == t2.out);
}
