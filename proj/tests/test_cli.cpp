// End-to-end checks of the f2lab binary: JSON shapes, exit codes, file
// formats, config handling, and byte-identical reruns.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

using json = nlohmann::json;

namespace {

struct RunOutcome {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string& work_dir() {
    static std::string dir = [] {
        char tmpl[] = "/tmp/f2lab-cli-XXXXXX";
        char* d = mkdtemp(tmpl);
        REQUIRE(d != nullptr);
        return std::string(d);
    }();
    return dir;
}

RunOutcome run(const std::string& args, const std::string& env = "") {
    const std::string out = work_dir() + "/stdout", err = work_dir() + "/stderr";
    std::string cmd = env + " " + std::string(F2LAB_BIN) + " " + args + " >" + out +
                      " 2>" + err;
    int rc = std::system(cmd.c_str());
    RunOutcome r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string write_file(const std::string& name, const std::string& content) {
    std::string path = work_dir() + "/" + name;
    std::ofstream f(path);
    f << content;
    return path;
}

}  // namespace

TEST_CASE("bias: golden values and byte-identical reruns") {
    RunOutcome r = run("bias --poly \"x1*x2+x3*x4*x5\"");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["schema"] == "f2lab/1");
    CHECK(j["pr_one"] == "5/16");
    CHECK(j["signed_bias"] == "3/8");
    CHECK(j["pr_one_dec"] == "0.312500000000");
    CHECK(j["one_third_gap"] == "1/48");
    CHECK(j["m"] == 5);

    RunOutcome again = run("bias --poly \"x1*x2+x3*x4*x5\"");
    CHECK(again.out == r.out);
}

TEST_CASE("eval and spectrum") {
    RunOutcome e1 = run("eval --poly \"x1*x2\" --point 11");
    REQUIRE(e1.exit_code == 0);
    CHECK(json::parse(e1.out)["value"] == 1);
    RunOutcome e0 = run("eval --poly \"x1*x2\" --point 10");
    CHECK(json::parse(e0.out)["value"] == 0);

    RunOutcome s = run("spectrum --poly x1");
    REQUIRE(s.exit_code == 0);
    json js = json::parse(s.out);
    REQUIRE(js["entries"].size() == 1);
    CHECK(js["entries"][0]["mask"] == "1");
    CHECK(js["entries"][0]["value"] == "1");
}

TEST_CASE("dickson report") {
    RunOutcome r = run("dickson --poly \"x1*x2+x3\"");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["r"] == 1);
    CHECK(j["pairs"][0][0] == "x1");
    CHECK(j["pairs"][0][1] == "x2");
    CHECK(j["tail"] == "x3");
    CHECK(j["c"] == 0);
    CHECK(j["rank1"] == 3);
    CHECK(j["bias"] == "0");
}

TEST_CASE("psi values") {
    RunOutcome r = run("psi --d 2 --f \"mul:2\" --vec 0,2");
    REQUIRE(r.exit_code == 0);
    CHECK(json::parse(r.out)["psi"] == 14);

    RunOutcome st = run("psi --d 2 --f id --star 2");
    CHECK(json::parse(st.out)["psi_star"] == 5);
}

TEST_CASE("error and usage exit codes") {
    RunOutcome parse_err = run("bias --poly x0");
    CHECK(parse_err.exit_code == 1);
    json err = json::parse(parse_err.err);
    CHECK(err["schema"] == "f2lab/1");
    CHECK(err["error"]["type"] == "parse");

    RunOutcome cap = run("bias --poly x1 --enum-cap 0");
    CHECK(cap.exit_code == 1);
    CHECK(json::parse(cap.err)["error"]["type"] == "domain");

    RunOutcome usage = run("frobnicate");
    CHECK(usage.exit_code == 2);
    RunOutcome missing = run("rank");
    CHECK(missing.exit_code == 2);

    RunOutcome help = run("--help");
    CHECK(help.exit_code == 0);
}

TEST_CASE("scan and tv") {
    RunOutcome r = run("scan -d 2 -m 2");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["min_gap"] == "1/12");
    CHECK(j["searched"] == 16);

    std::string polys = write_file("pair.txt", "x1*x2\nx3*x4  # disjoint\n");
    RunOutcome tv = run("tv --polys " + polys);
    REQUIRE(tv.exit_code == 0);
    json jt = json::parse(tv.out);
    CHECK(jt["n"] == 2);
    CHECK(jt["m"] == 4);
    CHECK(jt["tv"] == "17/144");
    CHECK(jt["decimal"] == "0.118055555556");

    RunOutcome tu = run("tv --uniform --polys " + polys);
    CHECK(json::parse(tu.out)["tv"] == "5/16");
}

TEST_CASE("joint distribution dump and support selection") {
    std::string polys = write_file("pair2.txt", "x1*x2\nx3*x4\n");
    RunOutcome csv = run("--format csv joint --polys " + polys);
    REQUIRE(csv.exit_code == 0);
    CHECK(csv.out == "00,9\n10,3\n01,3\n11,1\n");

    RunOutcome js = run("joint --polys " + polys);
    json j = json::parse(js.out);
    CHECK(j["denom"] == 16);
    CHECK(j["entries"][0]["outcome"] == "00");
    CHECK(j["entries"][0]["count"] == 9);

    std::string over = write_file("overlap.txt", "x1*x2\nx1*x3\nx4*x5\n");
    RunOutcome sup = run("joint --support --polys " + over);
    json jsup = json::parse(sup.out);
    CHECK(jsup["kept"] == json::array({1, 3}));
}

TEST_CASE("sunflower search over a subspace file") {
    std::string spaces = write_file("spaces.json", R"([
      {"m": 4, "basis": ["1000"]},
      {"m": 4, "basis": ["0100"]},
      {"m": 4, "basis": ["0010"]},
      {"m": 4, "basis": ["0001"]}
    ])");
    RunOutcome r = run("sunflower --in " + spaces + " --size 3");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["found"] == true);
    CHECK(j["members"].size() == 3);
    CHECK(j["core"]["basis"].empty());
}

TEST_CASE("rank and regularize transcripts") {
    std::string fac = write_file("fac.txt", "x1*x2\nx3*x4\n");
    RunOutcome rk = run("rank --factor " + fac + " --r 3");
    REQUIRE(rk.exit_code == 0);
    json jr = json::parse(rk.out);
    CHECK(jr["regular"] == false);
    CHECK(jr["violation"]["lambda"] == 1);
    CHECK(jr["violation"]["rank"] == 2);

    std::string one = write_file("one.txt", "x1*x2 + x3*x4\n");
    RunOutcome rg = run("regularize --factor " + one + " --f add:3");
    REQUIRE(rg.exit_code == 0);
    json jg = json::parse(rg.out);
    REQUIRE(jg["rounds"].size() == 1);
    CHECK(jg["rounds"][0]["pair_count"] == 2);
    CHECK(jg["final"]["members"].size() == 4);
    CHECK(jg["replay_ok"] == true);
    CHECK(jg["psi_bound"] == 4);
    CHECK(jg["psi_ok"] == true);
}

TEST_CASE("rank21 reduction") {
    std::string qs = write_file("qs.txt", "x1*x2\n");
    RunOutcome r = run("rank21 --gamma 01 --qs " + qs);
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["k"] == 1);
    CHECK(j["q_empty"] == true);
    CHECK(j["lp"] == json::array({"x1", "x2"}));
    CHECK(j["gamma_out"] == "0001");
    CHECK(j["functional_ok"] == true);
}

TEST_CASE("audit subcommands") {
    std::string same = write_file("same.txt", "x1\nx1\n");
    RunOutcome vz = run("audit vazirani --polys " + same);
    REQUIRE(vz.exit_code == 0);
    json jv = json::parse(vz.out);
    CHECK(jv["tv"] == "1/2");
    CHECK(jv["eps"] == "1");
    CHECK(jv["holds"] == true);

    std::string tup = write_file("tuple.txt", "x1*x2 + x3*x4\nx5*x6 + x7*x8\n");
    RunOutcome va = run("audit variety --polys " + tup);
    json ja = json::parse(va.out);
    CHECK(ja["density"] == "25/64");
    CHECK(ja["identity_ok"] == true);
    CHECK(ja["within_budget"] == true);

    std::string t = write_file("cheb-t.txt", "x1*x2\nx3*x4\n");
    std::string petals = write_file("cheb-p.txt", "x1\nx2\n--\nx3\nx4\n");
    RunOutcome ch = run("audit chebyshev --polys " + t + " --petals " + petals +
                        " --r 1 --m 4");
    REQUIRE(ch.exit_code == 0);
    json jc = json::parse(ch.out);
    CHECK(jc["all_regular"] == true);
    CHECK(jc["all_cov_ok"] == true);
    CHECK(jc["pairs"][0]["cov"] == "0");
}

TEST_CASE("certify certificate document") {
    RunOutcome r = run("certify --poly \"x1*x2\" --t 2");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["a"] == 1);
    CHECK(j["s"] == 1);
    CHECK(j["path"] == "interval");
    CHECK(j["signed_bias"] == "1/2");
    CHECK(j["delta_2r"] == "1/1536");
    CHECK(j["honest_floor"] == "1/12");
}

TEST_CASE("search is reproducible end to end") {
    RunOutcome a = run("search -d 2 -m 4 --steps 60 --seed 7");
    RunOutcome b = run("search -d 2 -m 4 --steps 60 --seed 7");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    json j = json::parse(a.out);
    CHECK(j["seed"] == 7);
    CHECK(j["trace"].size() == 60);

    RunOutcome quiet = run("search -d 2 -m 4 --steps 60 --seed 7 --no-trace");
    CHECK(json::parse(quiet.out).count("trace") == 0);
}

TEST_CASE("config file and environment defaults") {
    std::string cfg = write_file("run.cfg", "output_format=text\nworker_count=2\n");
    RunOutcome r = run("--config " + cfg + " bias --poly x1*x2");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out == "pr_one 1/4\nsigned_bias 1/2\n");

    RunOutcome env = run("bias --poly x1*x2", "F2LAB_CONFIG=" + cfg);
    CHECK(env.out == r.out);

    // explicit flags win over the config file
    RunOutcome flag = run("--config " + cfg + " --format json bias --poly x1*x2");
    CHECK(json::parse(flag.out)["pr_one"] == "1/4");
}
