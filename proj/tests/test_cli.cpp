#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "oracles.hpp"
#include "swarm_lssvm/cli.hpp"

using namespace swarm_lssvm;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

struct Workspace {
    fs::path dir = fs::temp_directory_path() / "swarm_lssvm_cli_test";
    fs::path bars = dir / "WALK.csv";

    Workspace() {
        fs::create_directories(dir);
        spit(bars, render_ohlcv_csv(oracle::random_walk(140, 21)));
    }
    ~Workspace() { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

} // namespace

TEST_CASE("usage errors exit 1, help exits 0") {
    CHECK(cli({}).code == kExitInputError);
    CHECK(cli({"bogus"}).code == kExitInputError);
    CHECK(cli({"--help"}).code == kExitOk);
    CHECK(cli({"train", "--input", "/nonexistent/file.csv"}).code == kExitInputError);
    const auto r = cli({"tune", "--input", "/nonexistent/file.csv"});
    CHECK(r.code == kExitInputError);
    CHECK(r.err.find("not found") != std::string::npos);
}

TEST_CASE("malformed input exits 1") {
    Workspace ws;
    spit(ws.path("bad.csv"), "Date,Open,High,Low,Close\n2010-01-04,1,2,0.5,1.5\n");
    const auto r = cli({"dataset", "--input", ws.path("bad.csv")});
    CHECK(r.code == kExitInputError);
    CHECK(r.err.find("Volume") != std::string::npos);
}

TEST_CASE("indicators and dataset subcommands") {
    Workspace ws;
    const auto ind = cli({"indicators", "--input", ws.bars.string()});
    REQUIRE(ind.code == kExitOk);
    CHECK(ind.out.rfind("date,close,rsi,mfi,ema,stoch_k,macd,macd_signal\n", 0) == 0);
    CHECK(std::count(ind.out.begin(), ind.out.end(), '\n') == 141);

    const auto ds = cli({"dataset", "--input", ws.bars.string()});
    REQUIRE(ds.code == kExitOk);
    CHECK(std::count(ds.out.begin(), ds.out.end(), '\n') == 1 + 125);
}

TEST_CASE("train then predict") {
    Workspace ws;
    const auto model = ws.path("model.json");
    const auto t = cli({"train", "--input", ws.bars.string(), "--c", "10", "--sigma2", "2", "--out", model, "--json"});
    REQUIRE(t.code == kExitOk);
    const auto j = nlohmann::json::parse(t.out);
    CHECK(j.at("reg_c") == 10.0);
    CHECK(j.at("n_train").get<int>() + j.at("n_test").get<int>() == 125);

    const auto p = cli({"predict", "--model", model, "--input", ws.bars.string()});
    REQUIRE(p.code == kExitOk);
    CHECK(p.out.rfind("date,prediction,target\n", 0) == 0);
    CHECK(std::count(p.out.begin(), p.out.end(), '\n') == 1 + 125 + 1);
    CHECK(p.out.substr(p.out.size() - 2) == ",\n");

    auto doc = nlohmann::json::parse(slurp(model));
    doc["train_inputs"] = nlohmann::json::array({{1.0, 2.0}});
    doc["alphas"] = nlohmann::json::array({0.0});
    doc["feature_names"] = nlohmann::json::array({"a", "b"});
    doc["scaler"] = nullptr;
    spit(ws.path("narrow.json"), doc.dump());
    const auto bad = cli({"predict", "--model", ws.path("narrow.json"), "--input", ws.bars.string()});
    CHECK(bad.code == kExitInputError);
    CHECK(bad.err.find("features") != std::string::npos);
}

TEST_CASE("tune and compare are deterministic") {
    Workspace ws;
    for (const std::string opt : {"abc", "pso"}) {
        const std::vector<std::string> args{"tune", "--input", ws.bars.string(), "--optimizer", opt, "--cycles", "10",
                                            "--seed", "7", "--json", "--history", ws.path("h_" + opt + ".csv")};
        const auto a = cli(args);
        const auto b = cli(args);
        REQUIRE(a.code == kExitOk);
        CHECK(a.out == b.out);
        CHECK(nlohmann::json::parse(a.out).at("history").size() == 10);
        CHECK(std::count_if(std::istreambuf_iterator<char>(std::ifstream(ws.path("h_" + opt + ".csv")).rdbuf()),
                            std::istreambuf_iterator<char>(), [](char c) { return c == '\n'; }) == 11);
    }
    const std::vector<std::string> args{"compare", "--input", ws.bars.string(), "--cycles", "6", "--json"};
    const auto a = cli(args);
    const auto b = cli(args);
    REQUIRE(a.code == kExitOk);
    CHECK(a.out == b.out);
    CHECK(nlohmann::json::parse(a.out).at("rows").size() == 3);
    CHECK(cli({"compare", "--input", ws.bars.string(), "--cycles", "4"}).out.find("LSSVM-ABC") != std::string::npos);
    CHECK(cli({"tune", "--input", ws.bars.string(), "--optimizer", "ga"}).code == kExitInputError);
}

TEST_CASE("data directory lookup") {
    Workspace ws;
    ::setenv("SWARM_LSSVM_DATA_DIR", ws.dir.c_str(), 1);
    CHECK(cli({"dataset", "--input", "WALK.csv"}).code == kExitOk);
    ::unsetenv("SWARM_LSSVM_DATA_DIR");
    CHECK(cli({"dataset", "--input", "WALK.csv"}).code == kExitInputError);
}

TEST_CASE("benchmark subcommand") {
    const auto r = cli({"benchmark", "--runs", "2", "--cycles", "20", "--json"});
    REQUIRE(r.code == kExitOk);
    CHECK(nlohmann::json::parse(r.out).size() == 6);
    CHECK(cli({"benchmark", "--runs", "0"}).code == kExitInputError);
}

TEST_CASE("binary exit statuses") {
    const char* bin = std::getenv("SWARM_LSSVM_BIN");
    if (bin == nullptr) {
        MESSAGE("SWARM_LSSVM_BIN not set");
        return;
    }
    Workspace ws;
    const auto status = [&](const std::string& rest) {
        const int raw = std::system(('"' + std::string(bin) + "\" " + rest + " >/dev/null 2>&1").c_str());
        return WEXITSTATUS(raw);
    };
    CHECK(status("--help") == 0);
    CHECK(status("nope") == 1);
    CHECK(status("dataset --input \"" + ws.bars.string() + "\"") == 0);
    CHECK(status("train --input \"" + ws.bars.string() + "\" --c 1e300 --kernel linear --no-scale") == 2);
}
