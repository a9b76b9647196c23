#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace dbz::cli;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "dbz");
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

// Runs the built executable through the shell so the real exit status is seen.
Result run_process(const std::string& args, const std::string& env = "") {
    std::string cmd = env + " " DBZ_CLI_PATH " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    std::string out;
    std::array<char, 512> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, {}};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("eval") {
    CHECK(run_cli({"eval", "tan(x)", "--var", "x", "--at", "pi/2"}).out == "0\n");
    CHECK(run_cli({"eval", "(z+1/z)^2", "--var", "z", "--at", "0"}).out == "2\n");
    CHECK(run_cli({"eval", "1/z", "--var", "z", "--at", "1"}).out == "1\n");
    CHECK(run_cli({"eval", "x^3/(2*a - x)", "--var", "x", "--at", "2*a", "--params", "a=1"}).out == "-12\n");
    CHECK(run_cli({"eval", "1/x", "--at", "1+i"}).out == "1/2-1/2i\n");
    CHECK(run_cli({"--output", "json", "eval", "a + b/cos(t)", "--var", "t", "--at", "pi/2", "--params", "a=3,b=5"}).out ==
          "{\"expr\":\"a + b/cos(t)\",\"var\":\"t\",\"at\":\"1/2*pi\",\"value\":\"3\"}\n");
    CHECK(run_cli({"eval", "exp(x)", "--at", "1", "--mode", "float", "--precision", "53"}).out == "2.718281828459045\n");
}

TEST_CASE("exit codes and error names") {
    Result syntax = run_cli({"eval", "1/(", "--var", "z"});
    CHECK(syntax.code == kExitUsage);
    CHECK(syntax.err.find("SyntaxError") != std::string::npos);
    CHECK(syntax.err.find("position 3") != std::string::npos);

    Result branch = run_cli({"eval", "log(x)", "--at", "0"});
    CHECK(branch.code == kExitEval);
    CHECK(branch.err.find("BranchPoint") != std::string::npos);

    Result essential = run_cli({"eval", "exp(1/x)", "--at", "0"});
    CHECK(essential.code == kExitEval);
    CHECK(essential.err.find("EssentialSingularity") != std::string::npos);

    Result not_exact = run_cli({"eval", "sin(x)", "--at", "1"});
    CHECK(not_exact.code == kExitEval);
    CHECK(not_exact.err.find("NotExact") != std::string::npos);

    CHECK(run_cli({"eval", "x", "--mode", "bogus"}).code == kExitUsage);
    CHECK(run_cli({"eval", "x", "--output", "xml"}).code == kExitUsage);
    CHECK(run_cli({"eval", "x", "--precision", "10", "--mode", "float"}).code == kExitUsage);
    CHECK(run_cli({"eval"}).code == kExitUsage);
    CHECK(run_cli({"frobnicate"}).code == kExitUsage);
    CHECK(run_cli({}).code == kExitUsage);
    CHECK(run_cli({"--help"}).code == kExitOk);
    CHECK(run_cli({"eval", "x", "--at", "1/("}).code == kExitUsage);
    CHECK(run_cli({"eval", "x*y", "--at", "0"}).code == kExitEval);
    CHECK(run_cli({"project", "--to-plane", "1,1,1"}).code == kExitEval);
    CHECK(run_cli({"project", "--to-plane", "1,1"}).code == kExitUsage);
    CHECK(run_cli({"invert", "1,1", "--radius", "0"}).code == kExitEval);
    CHECK(run_cli({"mapcenter", "z^2"}).code == kExitEval);
    CHECK(run_cli({"mapcenter", "--", "-z"}).err.find("NotPaperNormalized") != std::string::npos);
    CHECK(run_cli({"mapcenter"}).code == kExitUsage);
}

TEST_CASE("expand") {
    Result r = run_cli({"expand", "tan(theta)", "--var", "theta", "--at", "pi/2", "--order", "3"});
    CHECK(r.code == 0);
    CHECK(r.out ==
          "{\"anchor\":{\"rat\":\"0\",\"pi\":\"1/2\",\"imag\":\"0\"},\"lead\":-1,\"coeffs\":[\"-1\",\"0\",\"1/3\",\"0\","
          "\"1/45\"],\"trunc\":3,\"exact_tail\":false,\"mode\":\"exact\"}\n");
    CHECK(run_cli({"expand", "1/z", "--var", "z", "--order", "4"}).out ==
          "{\"anchor\":{\"rat\":\"0\",\"pi\":\"0\",\"imag\":\"0\"},\"lead\":-1,\"coeffs\":[\"1\"],\"trunc\":4,"
          "\"exact_tail\":true,\"mode\":\"exact\"}\n");
}

TEST_CASE("yamada, invert, project") {
    CHECK(run_cli({"yamada", "1/0"}).out == "0\n");
    CHECK(run_cli({"yamada", "0/0"}).out == "0\n");
    CHECK(run_cli({"yamada", "(3/0)*(5/7)"}).out == "0\n");
    CHECK(run_cli({"yamada", "a/b", "--params", "a=1,b=0"}).out == "0\n");
    CHECK(run_cli({"project", "--to-plane", "0,0,1"}).out == "0,0\n");
    CHECK(run_cli({"project", "--to-sphere", "1,0"}).out == "1,0,0\n");
    CHECK(run_cli({"project", "--to-sphere", "0,0"}).out == "0,0,-1\n");
    CHECK(run_cli({"--output", "json", "project", "--to-sphere", "0,1"}).out == "{\"sphere\":\"0,1,0\"}\n");
    CHECK(run_cli({"invert", "2,0"}).out == "1/2,0\n");
    CHECK(run_cli({"invert", "0,0"}).out == "0,0\n");
    CHECK(run_cli({"invert", "1,1", "--center", "1,1", "--radius", "2"}).out == "1,1\n");
}

TEST_CASE("mapcenter and estimate") {
    CHECK(run_cli({"mapcenter", "--builtin", "ellipse", "--params", "p=2,q=1"}).out == "radius 3/2\ncenter 0\n");
    CHECK(run_cli({"--output", "json", "mapcenter", "--builtin", "disk", "--params", "c=1+i,R=3"}).out ==
          "{\"radius\":\"3\",\"center\":\"-1/3-1/3i\"}\n");
    CHECK(run_cli({"mapcenter", "--builtin", "segment"}).out == "radius 1\ncenter 0\n");
    CHECK(run_cli({"mapcenter", "2*w + 3 + 1/w", "--var", "w"}).out == "radius 1/2\ncenter 3\n");

    Result est = run_cli({"--precision", "53", "estimate", "z + 1/z", "--rho", "1/2", "--samples", "16", "--n-lo",
                          "-1", "--n-hi", "1"});
    CHECK(est.code == 0);
    CHECK(est.out.find("C1 1") == 0);
    Result few = run_cli({"estimate", "z", "--samples", "4", "--n-lo", "-1", "--n-hi", "5"});
    CHECK(few.code == kExitEval);
    CHECK(few.err.find("InsufficientSamples") != std::string::npos);

    const std::string csv = "/tmp/dbz_cli_test_samples.csv";
    {
        std::ofstream f(csv);
        f << "theta,re,im\n";
        for (int k = 0; k < 8; ++k) f << (k * 0.7853981633974483) << ",5,0\n";
    }
    Result from_csv = run_cli({"--precision", "53", "estimate", "--csv", csv, "--n-lo", "0", "--n-hi", "0"});
    CHECK(from_csv.code == 0);
    CHECK(from_csv.out == "C0 5\n");
}

TEST_CASE("corpus") {
    Result text = run_cli({"corpus"});
    CHECK(text.code == kExitOk);
    CHECK(text.out.find("18/18 rows passed") != std::string::npos);
    Result json = run_cli({"corpus", "--output", "json"});
    CHECK(json.code == kExitOk);
    CHECK(json.out == read_file(DBZ_GOLDEN_DIR "/corpus_report.json"));

    const std::string bad = "/tmp/dbz_cli_test_corpus.json";
    {
        std::ofstream f(bad);
        f << R"({"version":1,"rows":[{"id":"w","expr":"1/z","var":"z","anchor":"0","bindings":{},"expected_C0":"5","paper_section":"t","sense":"good"}]})";
    }
    Result failing = run_cli({"corpus", "--file", bad});
    CHECK(failing.code == kExitCorpus);
    CHECK(failing.out.find("FAIL  w") != std::string::npos);
    CHECK(run_cli({"corpus", "--file", "/nonexistent.json"}).code == kExitUsage);
}

TEST_CASE("config file, DBZ_MODE and flag precedence") {
    CliConfig c = apply_config_text({}, "# comment\nmode = float\nprecision=64\norder = 8\noutput=\"json\"\nseed=3\n");
    CHECK(c.mode == dbz::Mode::Float);
    CHECK(c.precision == 64);
    CHECK(c.order == 8);
    CHECK(c.output == Output::Json);
    CHECK(c.seed == 3);
    CHECK_THROWS_AS(apply_config_text({}, "colour=blue\n"), dbz::Error);
    CHECK_THROWS_AS(apply_config_text({}, "precision=lots\n"), dbz::Error);

    const std::string cfg = "/tmp/dbz_cli_test.conf";
    {
        std::ofstream f(cfg);
        f << "mode=float\nprecision=53\n";
    }
    CHECK(run_cli({"--config", cfg, "eval", "1/x", "--at", "3"}).out == "0.3333333333333333\n");
    CHECK(run_cli({"--config", cfg, "--mode", "exact", "eval", "1/x", "--at", "3"}).out == "1/3\n");

    setenv("DBZ_MODE", "float", 1);
    CHECK(run_cli({"--precision", "53", "eval", "1/x", "--at", "3"}).out == "0.3333333333333333\n");
    CHECK(run_cli({"--mode", "exact", "eval", "1/x", "--at", "3"}).out == "1/3\n");
    setenv("DBZ_MODE", "nonsense", 1);
    CHECK(run_cli({"eval", "1/x", "--at", "3"}).code == kExitUsage);
    unsetenv("DBZ_MODE");
}

TEST_CASE("process exit codes") {
    CHECK(run_process("eval \"(z+1/z)^2\" --var z --at 0").out == "2\n");
    CHECK(run_process("eval \"(z+1/z)^2\" --var z --at 0").code == 0);
    CHECK(run_process("eval \"1/(\"").code == 1);
    CHECK(run_process("eval \"log(x)\" --at 0").code == 2);
    CHECK(run_process("corpus").code == 0);
    CHECK(run_process("corpus --file /tmp/dbz_cli_test_corpus.json").code == 3);
    CHECK(run_process("eval 1/x --at 3", "DBZ_MODE=float").out == "0.333333333333333333333333333333333333334\n");
}
