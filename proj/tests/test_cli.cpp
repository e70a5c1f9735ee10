#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rosterflow/cli.hpp"

using namespace rosterflow;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "rosterflow");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path workdir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "rosterflow_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

fs::path synth_dir() {
    static const fs::path dir = [] {
        auto d = workdir() / "league";
        auto r = invoke({"synth", "--out", d.string(), "--seed", "5", "--roster-size", "10", "--seasons", "4",
                         "--beta", "2"});
        REQUIRE(r.code == 0);
        return d;
    }();
    return dir;
}

} // namespace

TEST_CASE("synth writes a loadable league", "[cli]") {
    auto dir = synth_dir();
    for (const char* f : {"players.csv", "follows.csv", "fitness.csv", "colleges.csv", "league.toml",
                          "groundtruth.json"}) {
        CHECK(fs::exists(dir / f));
    }
    auto r = invoke({"ingest", "--data-dir", dir.string()});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("issues") == 0);
    CHECK(j.at("transitions").size() == 4);
    CHECK(j.at("transitions")[0].at("players") == 300);
    for (const auto& s : j.at("transitions")) {
        CHECK(s.at("players") >= 300);
        CHECK(s.at("leaving").get<int>() == s.at("retiring").get<int>() + s.at("switched").get<int>());
    }
}

TEST_CASE("evaluate to JSON then render with report", "[cli]") {
    auto dir = synth_dir();
    auto json_path = workdir() / "eval.json";
    auto r = invoke({"evaluate", "--data-dir", dir.string(), "--features", "twitter;team", "--algos", "tree,knn",
                     "--reps", "2", "--seed", "3", "--out", json_path.string()});
    REQUIRE(r.code == 0);
    auto first = slurp(json_path);
    r = invoke({"evaluate", "--data-dir", dir.string(), "--features", "twitter;team", "--algos", "tree,knn",
                "--reps", "2", "--seed", "3", "--out", json_path.string()});
    REQUIRE(r.code == 0);
    CHECK(slurp(json_path) == first);

    auto rendered = invoke({"report", "--in", json_path.string()});
    REQUIRE(rendered.code == 0);
    std::istringstream lines(rendered.out);
    std::vector<std::string> body;
    for (std::string line; std::getline(lines, line);) {
        if (!line.starts_with("#")) {
            body.push_back(line);
        }
    }
    REQUIRE(body.size() == 4);
    CHECK(body[0] == "features\tsocial\tDecisionTree\tKNN\tTopMLA\taccuracy");
    CHECK(body[3].starts_with("baseline\tno\t3.448\t3.448\t-\t3.448"));
}

TEST_CASE("netstats on a two-cycle", "[cli]") {
    auto path = workdir() / "pair.csv";
    {
        std::ofstream f(path);
        f << "follower,followee\na,b\nb,a\n";
    }
    auto r = invoke({"netstats", "--edges", path.string()});
    REQUIRE(r.code == 0);
    auto st = nlohmann::json::parse(r.out).at("stats");
    CHECK(st.at("n") == 2);
    CHECK(st.at("m") == 2);
    CHECK(st.at("c") == 1.0);
    CHECK(st.at("S") == 1.0);
    CHECK(st.at("ell") == 1.0);
    CHECK(st.at("r") == 1.0);

    auto c = invoke({"centrality", "--edges", path.string(), "--kind", "in-degree"});
    REQUIRE(c.code == 0);
    CHECK(c.out.find("a\t1") != std::string::npos);
}

TEST_CASE("exit codes", "[cli]") {
    CHECK(invoke({"netstats"}).code == 2);
    CHECK(invoke({"frobnicate"}).code == 2);
    CHECK(invoke({"synth"}).code == 2);
    CHECK(invoke({"netstats", "--edges", (workdir() / "missing.csv").string()}).code == 4);

    auto dir = synth_dir();
    auto r = invoke({"temporal", "--data-dir", dir.string(), "--boundary", "2005", "--reps", "1"});
    CHECK(r.code == 3);
    auto err = nlohmann::json::parse(r.err);
    CHECK(err.at("error") == "EmptyPeriod");

    auto bad = invoke({"evaluate", "--data-dir", dir.string(), "--features", "twitter", "--algos", "nope"});
    CHECK(bad.code == 2);
}
