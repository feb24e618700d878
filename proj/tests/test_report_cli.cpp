#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <betamorph/cli.hpp>
#include <betamorph/field.hpp>
#include <betamorph/report.hpp>

using namespace betamorph;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"betamorph"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    std::streambuf* old_out = std::cout.rdbuf(out.rdbuf());
    std::streambuf* old_err = std::cerr.rdbuf(err.rdbuf());
    int code = run_cli(static_cast<int>(argv.size()), argv.data());
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

std::string temp_path(const std::string& name) {
    return std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/" + name;
}

}  // namespace

TEST_CASE("decimal rendering is exact and stable") {
    CHECK(rat_decimal_string(Rat(3, 2), 12) == "1.50000000000");
    CHECK(rat_decimal_string(Rat(0), 6) == "0");
    CHECK(rat_decimal_string(Rat(-1, 4), 6) == "-0.250000");
    CHECK(rat_decimal_string(Rat(2, 3), 3) == "0.667");
    CHECK(rat_decimal_string(Rat(9999, 10000), 3) == "1.00");
    CHECK(rat_decimal_string(Rat(120), 2) == "120");

    auto golden = parse_beta_spec("multinacci:2");
    CHECK(decimal_string(FieldElement::beta(golden), 12) == "1.61803398875");
    CHECK(decimal_string(FieldElement::beta(golden).inverse(), 12) == "0.618033988750");
}

TEST_CASE("certify headlines match the documented samples") {
    CliResult iso = run({"certify", "--beta", "multinacci:4"});
    CHECK(iso.code == 0);
    CHECK(lines_of(iso.out)[0] == "ISOMORPHIC (n=4): identical 4x4 Markov matrices");

    CliResult sub = run({"certify", "--beta", "rational:3/2"});
    CHECK(sub.code == 0);
    CHECK(lines_of(sub.out)[0] == "NOT ISOMORPHIC: n=3, witness k=2, lambda(I+)=1/4, lambda(I-)=0");

    CliResult gap = run({"certify", "--beta", "rational:17/10"});
    CHECK(gap.code == 0);
    CHECK(lines_of(gap.out)[0] ==
          "NOT ISOMORPHIC: n=3, witness k=6, lambda(I+)=133/1000, lambda(I-)=0");
}

TEST_CASE("certify JSON carries the verdict, certificate, and versions") {
    CliResult r = run({"certify", "--beta", "multinacci:3", "--format", "json"});
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["command"] == "certify");
    CHECK(j["beta"]["spec"] == "multinacci:3");
    CHECK(j["beta"]["minpoly"] == "x^3 - x^2 - x - 1");
    CHECK(j["regime"] == "Exact(3)");
    CHECK(j["verdict"] == "isomorphic_multinacci");
    CHECK(j["witnesses"].empty());

    const Json& mc = j["matrix_certificate"];
    CHECK(mc["matrix"] == Json::parse("[[1,1,1],[1,0,0],[0,1,0]]"));
    CHECK(mc["cuts_positive"] == Json::parse(R"(["0","beta^2 - beta - 1","beta - 1","1"])"));
    CHECK(mc["labeling_negative"] == Json::parse("[1,2,0]"));
    CHECK(mc["r1"]["all_ok"] == true);
    CHECK(mc["entropy"]["contains_log_beta"] == true);
    for (const auto& [key, value] : j["versions"].items()) CHECK(value == "1.0.0");

    CliResult n = run({"certify", "--beta", "rational:17/10", "--format", "json"});
    Json jn = Json::parse(n.out);
    CHECK(jn["verdict"] == "not_isomorphic");
    CHECK(jn["case"] == "C1s");
    CHECK(jn["predicted_witnesses"] == Json::parse("[6]"));
    CHECK(jn["witnesses"].size() == 4);
    CHECK(jn["witnesses"][3]["k"] == 6);
    CHECK(jn["witnesses"][3]["lambda_plus"] == "133/1000");
    CHECK(jn["witnesses"][3]["lambda_minus"] == "0");
    CHECK(jn["matrix_certificate"].is_null());  // no certificate off the multinacci set
}

TEST_CASE("reports are byte-identical across runs") {
    for (std::vector<std::string> args :
         {std::vector<std::string>{"certify", "--beta", "multinacci:3", "--format", "json"},
          std::vector<std::string>{"markov", "--beta", "multinacci:2", "--map", "S",
                                   "--format", "json"},
          std::vector<std::string>{"verify", "--beta", "rational:17/10"}}) {
        CliResult a = run(args);
        CliResult b = run(args);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("spectrum CSV at 3/2 is the frozen table") {
    CliResult r = run({"spectrum", "--beta", "rational:3/2", "--n", "3", "--map", "T",
                       "--format", "csv"});
    REQUIRE(r.code == 0);
    std::vector<std::string> expect{
        "beta_spec,map,level,cell,lo,hi,count", "rational:3/2,T,3,0,0,1/8,5",
        "rational:3/2,T,3,1,1/8,1/2,4",         "rational:3/2,T,3,2,1/2,3/4,3",
        "rational:3/2,T,3,3,3/4,1,2",
    };
    CHECK(lines_of(r.out) == expect);
}

TEST_CASE("spectrum text with both maps lists the witnesses") {
    CliResult r = run({"spectrum", "--beta", "rational:3/2", "--n", "3"});
    REQUIRE(r.code == 0);
    auto ls = lines_of(r.out);
    CHECK(ls[0] == "SPECTRUM level 3 at rational:3/2 (SubGolden)");
    CHECK(r.out.find("witnesses:") != std::string::npos);
    CHECK(r.out.find("k=2  lambda(I+)=1/4  lambda(I-)=0") != std::string::npos);

    CliResult single = run({"spectrum", "--beta", "rational:3/2", "--n", "3", "--map", "S"});
    CHECK(single.out.find("witnesses:") == std::string::npos);
}

TEST_CASE("verify bundle passes and reports each check") {
    CliResult r = run({"verify", "--beta", "multinacci:2"});
    CHECK(r.code == 0);
    auto ls = lines_of(r.out);
    CHECK(ls[0] == "VERIFY multinacci:2 (Exact(2)): PASS");
    int oks = 0;
    for (const std::string& l : ls)
        if (l.rfind("  ok", 0) == 0) ++oks;
    CHECK(oks == 15);
    CHECK(r.out.find("FAIL") == std::string::npos);

    CliResult gap = run({"verify", "--beta", "rational:19/10"});
    CHECK(gap.code == 0);
    CHECK(lines_of(gap.out)[0] == "VERIFY rational:19/10 (Gap(4)): PASS");
}

TEST_CASE("markov without a partition reports the absence, exit 0") {
    CliResult r = run({"markov", "--beta", "rational:3/2", "--map", "T", "--depth", "50"});
    CHECK(r.code == 0);
    std::vector<std::string> expect{
        "MARKOV map T at rational:3/2 (SubGolden)",
        "  no Markov partition found within depth 50",
    };
    CHECK(lines_of(r.out) == expect);

    CliResult j = run({"markov", "--beta", "rational:3/2", "--map", "T", "--depth", "50",
                       "--format", "json"});
    Json parsed = Json::parse(j.out);
    CHECK(parsed["found"] == false);
}

TEST_CASE("markov on the golden field reports cuts, matrix and entropy") {
    CliResult r = run({"markov", "--beta", "multinacci:2", "--map", "S"});
    REQUIRE(r.code == 0);
    auto ls = lines_of(r.out);
    CHECK(ls[0] == "MARKOV map S at multinacci:2 (Exact(2))");
    CHECK(ls[1] == "  partition: 2 pieces");
    CHECK(ls[2] == "  cuts: 0 0.381966011250 1.00000000000");
    CHECK(r.out.find("chain labeling (piece order): 1 0  -> companion form") != std::string::npos);
    CHECK(r.out.find("r1: pass") != std::string::npos);
    CHECK(r.out.find("entropy ~ 0.481211825060  (contains log beta)") != std::string::npos);
    CHECK(r.out.find("coding depth 3: consistent") != std::string::npos);
}

TEST_CASE("orbit reports the exact cycle when one exists") {
    CliResult r = run({"orbit", "--beta", "multinacci:2", "--map", "T", "--depth", "6",
                       "--format", "json"});
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["points"][1]["exact"] == "beta - 1");
    CHECK(j["points"][2]["exact"] == "0");
    CHECK(j["cycle"]["enters_at"] == 2);
    CHECK(j["cycle"]["period"] == 1);

    CliResult open_orbit = run({"orbit", "--beta", "rational:17/10", "--map", "S", "--depth", "4",
                                "--format", "json"});
    CHECK(Json::parse(open_orbit.out)["cycle"].is_null());
}

TEST_CASE("batch certify merges in input order and flags bad entries") {
    std::string list = temp_path("betamorph_test_list.txt");
    {
        std::ofstream f(list);
        f << "# comment\nmultinacci:2\nbogus:zzz\nrational:17/10\n";
    }
    CliResult r = run({"certify", "--beta-list", list, "--jobs", "3", "--format", "json"});
    CHECK(r.code == 2);  // one entry failed to parse
    Json j = Json::parse(r.out);
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 3);
    CHECK(j[0]["beta"]["spec"] == "multinacci:2");
    CHECK(j[0]["verdict"] == "isomorphic_multinacci");
    CHECK(j[1]["beta"]["spec"] == "bogus:zzz");
    CHECK(j[1].contains("error"));
    CHECK(j[2]["verdict"] == "not_isomorphic");

    CliResult t = run({"certify", "--beta-list", list});
    CHECK(t.out.find("ERROR bogus:zzz") != std::string::npos);
    std::remove(list.c_str());
}

TEST_CASE("the out flag writes the same bytes to a file") {
    std::string path = temp_path("betamorph_test_out.json");
    CliResult direct = run({"certify", "--beta", "multinacci:2", "--format", "json"});
    CliResult redirected =
        run({"certify", "--beta", "multinacci:2", "--format", "json", "--out", path});
    CHECK(redirected.code == 0);
    CHECK(redirected.out.empty());
    std::ifstream in(path);
    std::stringstream content;
    content << in.rdbuf();
    CHECK(content.str() == direct.out);
    std::remove(path.c_str());
}

TEST_CASE("exit codes for bad usage") {
    CHECK(run({"certify"}).code == 2);                                   // --beta required
    CHECK(run({"certify", "--beta", "nonsense"}).code == 2);             // bad spec
    CHECK(run({"certify", "--beta", "rational:5/2"}).code == 2);         // outside (1,2)
    CHECK(run({"nonsense"}).code == 2);                                  // unknown command
    CHECK(run({"spectrum", "--beta", "multinacci:2", "--n", "19"}).code == 2);
    CHECK(run({"certify", "--beta", "multinacci:2", "--beta-list", "/nonexistent"}).code == 2);
    CHECK(run({"--help"}).code == 0);
    CliResult v = run({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out == "betamorph 1.0.0\n");
}

TEST_CASE("CSV certify emits one row per witness") {
    CliResult r = run({"certify", "--beta", "rational:3/2", "--format", "csv"});
    auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 5);
    CHECK(ls[0] ==
          "beta_spec,regime,n,iterate,verdict,case,boundary_markov,witness_k,lambda_plus,"
          "lambda_minus,note");
    CHECK(ls[1] == "rational:3/2,SubGolden,2,3,not_isomorphic,,false,1,0,1/4,");
    CHECK(ls[4] == "rational:3/2,SubGolden,2,3,not_isomorphic,,false,5,1/8,3/8,");
}
