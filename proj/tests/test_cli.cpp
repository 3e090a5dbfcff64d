#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qclock/cli.hpp"

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = qclock::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
    const std::string path = "qclock_cli_test_" + name;
    std::ofstream(path) << content;
    return path;
}

}  // namespace

TEST_CASE("precision prints R = 4 for the d = 2 optimum") {
    const Run r = run({"precision", "--d", "2", "--V", "0.7071067811865476,0", "--psi", "t1", "--no-header"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["R"].get<double>() == doctest::Approx(4.0).epsilon(1e-9));
    CHECK_FALSE(j.contains("generated"));
    const Run h = run({"precision", "--d", "2", "--V", "0.7071,0", "--psi", "t1"});
    CHECK(nlohmann::json::parse(h.out).contains("generated"));
}

TEST_CASE("amplitude lists and energy states are accepted") {
    const Run a = run({"precision", "--d", "2", "--V", "0.5,0.5", "--psi", "1,0+1i", "--no-header"});
    CHECK(a.code == 0);
    const Run b = run({"precision", "--d", "3", "--V", "1,0,0", "--psi", "E1", "--no-header"});
    CHECK(b.code == 0);
}

TEST_CASE("usage errors exit with 1") {
    CHECK(run({}).code == 1);
    CHECK(run({"bogus"}).code == 1);
    CHECK(run({"precision", "--d", "2", "--V", "x,0"}).code == 1);
    CHECK(run({"precision", "--d", "2", "--V", "1"}).code == 1);
    CHECK(run({"precision", "--d", "2", "--V", "1,0", "--frobnicate"}).code == 1);
    const Run r = run({"precision", "--d", "2", "--V", "1,0", "--psi", "t7"});
    CHECK(r.code == 1);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("numerical failures exit with 2") {
    const Run r = run({"precision", "--d", "2", "--V", "0,0", "--psi", "t0"});
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("CSV output has the documented header and is reproducible") {
    const std::vector<std::string> args{"optimize", "--d", "2-3", "--restarts", "3", "--seed", "5", "--no-header"};
    const Run a = run(args);
    const Run b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("d,R\n2,", 0) == 0);
    const Run stamped = run({"optimize", "--d", "2", "--restarts", "2"});
    CHECK(stamped.out.rfind("# qclock optimize", 0) == 0);
}

TEST_CASE("JSON config supplies values that flags override") {
    const std::string path = temp_file("cfg.json", R"({"command": "precision", "d": 2, "V": [0.7071067811865476, 0],
                                                     "psi": "t0", "no-header": true})");
    const Run cfg = run({"--config", path, "--psi", "t1"});
    REQUIRE(cfg.code == 0);
    CHECK(nlohmann::json::parse(cfg.out)["R"].get<double>() == doctest::Approx(4.0));
    const Run sub = run({"precision", "--config", path});
    CHECK(sub.code == 0);

    const std::string bad = temp_file("bad.json", R"({"command": "precision", "d": 2, "colour": "red"})");
    CHECK(run({"--config", bad}).code == 1);
    const std::string broken = temp_file("broken.json", "{not json");
    CHECK(run({"--config", broken}).code == 1);
    CHECK(run({"optimize", "--config", path}).code == 1);
    std::remove(path.c_str());
    std::remove(bad.c_str());
    std::remove(broken.c_str());
}

TEST_CASE("output file option writes the table") {
    const std::string path = "qclock_cli_test_delay.csv";
    const Run r = run({"delay", "--d", "2", "--V", "0,1", "--psi", "t0", "--steps", "4", "--out", path, "--no-header"});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    CHECK(first == "t,P");
    std::remove(path.c_str());
}

TEST_CASE("ladder comparison and temperature sweep tables") {
    const Run l = run({"ladder-compare", "--d", "3", "--beta-c", "0.4,0.6", "--no-header"});
    REQUIRE(l.code == 0);
    CHECK(l.out.rfind("heat,deltaS_ours\n", 0) == 0);
    const Run t = run({"sweep-temp", "--d", "2", "--restarts", "2", "--N", "0,1e-3", "--convention", "both",
                       "--no-header"});
    REQUIRE(t.code == 0);
    CHECK(t.out.rfind("N,R_emission,R_absorption\n", 0) == 0);
    CHECK(run({"sweep-temp", "--d", "2", "--convention", "sideways"}).code == 1);
}
