#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <unistd.h>

#include "cli.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
    int exit;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "cmlsat");
    std::ostringstream out, err;
    int code = cmlsat::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("cmlsat-cli-" + std::to_string(::getpid())))
    {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const std::string& p, const std::string& text) { std::ofstream(p) << text; }

} // namespace

TEST_CASE("solve exit codes")
{
    CHECK(invoke({"solve", "--logic", "K", "[](p -> q) & []p & ~[]q"}).exit == 1);
    CHECK(invoke({"solve", "--logic", "PML", "L{3/5} p & L{3/5} ~p"}).exit == 1);
    Result sat = invoke({"solve", "--logic", "K", "[](p|q) & ~([]p | []q)"});
    CHECK(sat.exit == 0);
    CHECK(sat.out.rfind("SAT", 0) == 0);
    CHECK(invoke({"solve", "--logic", "K", "[] ("}).exit == 2);
    CHECK(invoke({"solve", "--logic", "K", "<1> p"}).exit == 2);
    CHECK(invoke({"solve", "--logic", "NOPE", "p"}).exit == 2);
    CHECK(invoke({"solve", "--logic", "K"}).exit == 2);
}

TEST_CASE("prove exit codes")
{
    CHECK(invoke({"prove", "--logic", "GML", "~<0>(a & b) -> (((<0>a & ~<1>a) & ~<0>b) -> (<0>(a | b) & ~<1>(a | b)))"}).exit == 0);
    CHECK(invoke({"prove", "--logic", "MAJ", "M a & M b -> <0>(a & b)"}).exit == 0);
    Result p = invoke({"prove", "--logic", "K", "p"});
    CHECK(p.exit == 1);
    CHECK(p.out.rfind("NOT VALID", 0) == 0);
}

TEST_CASE("coefficient bound caveat")
{
    Result c = invoke({"solve", "--logic", "PML", "--coeff-bound", "1", "--format", "json", "~L{1/3} true"});
    CHECK(c.exit == 3);
    json j = json::parse(c.out);
    CHECK(j["verdict"] == "unsat");
    CHECK(j["caveat"].is_string());
    CHECK(invoke({"solve", "--logic", "PML", "~L{1/3} true"}).exit == 1);
}

TEST_CASE("json report schema")
{
    Result r = invoke({"solve", "--logic", "GML", "--format", "json", "--oracle-check", "<1>p & ~<2>p"});
    REQUIRE(r.exit == 0);
    json j = json::parse(r.out);
    CHECK(j["command"] == "solve");
    CHECK(j["logic"] == "GML");
    CHECK(j["verdict"] == "sat");
    CHECK(j["caveat"].is_null());
    for (const char* key : {"modalDepth", "recursionDepth", "maxLevel", "nodes", "memoHits", "matchingsExplored", "lpCalls"})
        CHECK(j["stats"].contains(key));
    CHECK(j["oracle"]["modelFound"] == true);
    CHECK(j["oracle"]["contradiction"] == false);
}

TEST_CASE("certificates round trip through check-cert")
{
    TempDir dir;
    std::string proof = dir.file("proof.json");
    REQUIRE(invoke({"prove", "--logic", "K", "--cert", proof, "[](a -> b) -> ([]a -> []b)"}).exit == 0);
    CHECK(invoke({"check-cert", "--cert", proof}).exit == 0);
    CHECK(invoke({"check-cert", "--cert", proof, "[](a -> b) -> ([]a -> []b)"}).exit == 0);
    CHECK(invoke({"check-cert", "--cert", proof, "[]a -> []b"}).exit != 0);

    // flip the sign of one literal
    json j = json::parse(slurp(proof));
    std::string text = j.dump();
    auto at = text.find("\"~[] a\"");
    REQUIRE(at != std::string::npos);
    text.replace(at, 7, "\"[] a\"");
    std::string flipped = dir.file("flipped.json");
    write(flipped, text);
    CHECK(invoke({"check-cert", "--cert", flipped}).exit != 0);

    std::string model = dir.file("model.json");
    REQUIRE(invoke({"model", "--logic", "K", "--cert", model, "[]false"}).exit == 0);
    CHECK(invoke({"check-cert", "--cert", model}).exit == 0);
    json m = json::parse(slurp(model));
    m["payload"]["states"].push_back(m["payload"]["states"][0]);
    m["payload"]["states"][0]["successors"] = json::array({1});
    std::string bad = dir.file("bad-model.json");
    write(bad, m.dump());
    CHECK(invoke({"check-cert", "--cert", bad}).exit != 0);

    std::string tableau = dir.file("tableau.json");
    REQUIRE(invoke({"solve", "--logic", "COAL:2", "--cert", tableau, "[C 1]p & ~[C 2]p"}).exit == 0);
    CHECK(invoke({"check-cert", "--cert", tableau}).exit == 0);

    write(dir.file("garbage.json"), "{");
    CHECK(invoke({"check-cert", "--cert", dir.file("garbage.json")}).exit == 2);
}

TEST_CASE("batch mode emits one json line per formula")
{
    TempDir dir;
    write(dir.file("batch.txt"), "# comment\n[]p & ~[]p\n\n[]p\n<1> p\n");
    Result r = invoke({"solve", "--logic", "K", "--format", "json", "--batch", dir.file("batch.txt")});
    std::istringstream lines(r.out);
    std::vector<json> rows;
    for (std::string line; std::getline(lines, line);)
        rows.push_back(json::parse(line));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0]["verdict"] == "unsat");
    CHECK(rows[1]["verdict"] == "sat");
    CHECK(rows[2].contains("error"));
    CHECK(rows[2]["index"] == 2);
    CHECK(r.exit == 2);
}

TEST_CASE("config file and environment")
{
    TempDir dir;
    write(dir.file("cfg.json"), R"({"logic": "PML", "coeffBound": 1})");
    CHECK(invoke({"solve", "--config", dir.file("cfg.json"), "~L{1/3} true"}).exit == 3);
    // flags override the file
    CHECK(invoke({"solve", "--config", dir.file("cfg.json"), "--coeff-bound", "8", "~L{1/3} true"}).exit == 1);
    ::setenv("CMLSAT_CONFIG", dir.file("cfg.json").c_str(), 1);
    CHECK(invoke({"solve", "L{3/5} p & L{3/5} ~p"}).exit == 1);
    ::unsetenv("CMLSAT_CONFIG");
    write(dir.file("broken.json"), "{\"logic\": 3}");
    CHECK(invoke({"solve", "--config", dir.file("broken.json"), "p"}).exit == 2);
}

TEST_CASE("selftest-rules")
{
    Result r = invoke({"selftest-rules", "--logic", "GML", "--format", "json", "--samples", "30", "--pairs", "10"});
    CHECK(r.exit == 0);
    json j = json::parse(r.out);
    CHECK(j.dump().find("\"ok\":true") != std::string::npos);
}
