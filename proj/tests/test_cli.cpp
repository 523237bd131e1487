#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rsv/cli.hpp"

using namespace rsv;
using nlohmann::json;

namespace {

struct CliRun {
    int code;
    std::string out, err;
    json doc() const { return json::parse(out); }
};

CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), "rsv");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(RSV_DATA_DIR) + "/metrics/" + name; }

std::vector<double> cluster_sigmas(const json& d) {
    std::vector<double> s;
    for (const auto& sol : d["solutions"]) s.push_back(sol["sigma"].get<double>());
    return s;
}

const json& check(const json& d, const std::string& name) {
    for (const auto& c : d["checks"])
        if (c["name"] == name) return c;
    throw std::runtime_error("missing check " + name);
}

}  // namespace

TEST(CliInvariants, SchwarzschildKretschmann) {
    const CliRun r = run({"invariants", "--metric", "schwarzschild", "--params", "M=1", "--point", "0,3,0.7854,0"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NEAR(r.doc()["invariants"]["kretschmann"].get<double>(), 48.0 / 729.0, 1e-12);
}

TEST(CliInvariants, EuclideanZeros) {
    const CliRun r = run({"invariants", "--metric", "euclidean", "--params", "n=4", "--point", "0,0,0,0"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const json inv = r.doc()["invariants"];
    EXPECT_EQ(inv["ricci_scalar"].get<double>(), 0.0);
    EXPECT_EQ(inv["kretschmann"].get<double>(), 0.0);
}

TEST(CliInvariants, KerrEquatorPsi2) {
    const CliRun r = run({"invariants", "--metric", "kerr", "--params", "M=1,a=0.5", "--point", "0,3,pi/2,0"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const json psi2 = r.doc()["invariants"]["np_scalars"][2];
    EXPECT_NEAR(psi2["re"].get<double>(), 1.0 / 27.0, 1e-8);
    EXPECT_NEAR(psi2["im"].get<double>(), 0.0, 1e-8);
}

TEST(CliSvp, SphereClusters) {
    const CliRun r = run({"svp", "--metric", "sphere2", "--point", "1.0472,0", "--deterministic"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto s = cluster_sigmas(r.doc());
    ASSERT_EQ(s.size(), 2u);
    EXPECT_LT(std::abs(s[0]), 1e-8);
    EXPECT_NEAR(s[1], 1.0, 1e-8);
    EXPECT_EQ(r.doc()["search"]["method"], "multistart");
    EXPECT_FALSE(r.doc()["search"]["exhaustive"].get<bool>());
}

TEST(CliSvp, SpaceFormDefaultPoint) {
    const CliRun r = run({"svp", "--metric", "space-form", "--params", "kappa=2,n=3", "--deterministic"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto s = cluster_sigmas(r.doc());
    ASSERT_EQ(s.size(), 2u);
    EXPECT_NEAR(s[1], 2.0, 1e-8);
}

TEST(CliSvp, SchwarzschildReduced) {
    const CliRun r = run({"svp", "--metric", "schwarzschild", "--params", "M=1", "--point", "0,3,0.7854,0", "--method",
                       "reduced", "--deterministic"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const json d = r.doc();
    const auto s = cluster_sigmas(d);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0], 0.0);
    EXPECT_NEAR(s[1], 1.0 / 27.0, 1e-12);
    EXPECT_EQ(d["expected"]["found"], json::array({true, true}));
}

TEST(CliSvp, DeterministicOutputIsByteIdentical) {
    const std::vector<std::string> args{"svp", "--metric", "sphere2", "--seed", "7", "--deterministic", "--output", "json"};
    const CliRun a = run(args), b = run(args);
    ASSERT_EQ(a.code, kExitOk);
    EXPECT_EQ(a.out, b.out);
    EXPECT_FALSE(a.doc().contains("timestamp"));
    const CliRun c = run({"svp", "--metric", "sphere2", "--seed", "7", "--output", "json"});
    EXPECT_TRUE(c.doc().contains("timestamp"));
}

TEST(CliSvp, ThreadCountDoesNotChangeOutput) {
    const CliRun a = run({"svp", "--metric", "sphere2", "--seed", "3", "--threads", "1", "--deterministic"});
    const CliRun b = run({"svp", "--metric", "sphere2", "--seed", "3", "--threads", "4", "--deterministic"});
    const json da = a.doc(), db = b.doc();
    EXPECT_EQ(da["solutions"], db["solutions"]);
}

TEST(CliSvp, CsvHasOneRowPerCluster) {
    const CliRun r = run({"svp", "--metric", "sphere2", "--point", "1.0472,0", "--output", "csv"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[0].rfind("sigma,residual,origin", 0), 0u);
    EXPECT_EQ(lines[2].rfind("1,", 0), 0u);
}

TEST(CliSvp, TextOutput) {
    const CliRun r = run({"svp", "--metric", "sphere2", "--output", "text", "--deterministic"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("sigma"), std::string::npos);
}

TEST(CliSvp, OutFileAndRoundTrip) {
    const auto path = std::filesystem::temp_directory_path() / "rsv_cli_test.json";
    const CliRun r = run({"svp", "--metric", "sphere2", "--deterministic", "--out", path.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    const json d = json::parse(ss.str());
    EXPECT_EQ(d["schema_version"], 1);
    // Doubles survive a parse/dump cycle unchanged.
    EXPECT_EQ(json::parse(d.dump()), d);
    std::filesystem::remove(path);
}

TEST(CliOrbit, SphereOrbit) {
    const CliRun r = run({"orbit", "--metric", "sphere2", "--point", "1.0472,0", "--deterministic"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("rotate("), std::string::npos);
}

TEST(CliVerify, SchwarzschildAllPass) {
    const CliRun r = run({"verify", "--metric", "schwarzschild", "--params", "M=1", "--point", "0,3,0.7854,0",
                       "--starts", "60", "--deterministic"});
    ASSERT_EQ(r.code, kExitOk) << r.out;
    const json d = r.doc();
    EXPECT_TRUE(d["all_pass"].get<bool>());
    for (const std::string name : {"symmetries", "bianchi", "prop1", "orbit-closure", "remark2-lorentz", "det-S",
                                   "sigma-equals-R"})
        EXPECT_EQ(check(d, name)["status"], "pass") << name;
}

TEST(CliVerify, SphereSkipsLorentz) {
    const CliRun r = run({"verify", "--metric", "sphere2", "--point", "1.0472,0", "--deterministic"});
    ASSERT_EQ(r.code, kExitOk) << r.out;
    EXPECT_EQ(check(r.doc(), "remark2-lorentz")["status"], "skipped");
    ASSERT_EQ(r.doc()["checks"].size(), 9u);
}

TEST(CliVerify, SpaceFormIdentities) {
    const CliRun r = run({"verify", "--metric", "space-form", "--params", "kappa=-0.5,n=4", "--deterministic"});
    ASSERT_EQ(r.code, kExitOk) << r.out;
    EXPECT_EQ(check(r.doc(), "example2-identities")["status"], "pass");
    EXPECT_EQ(check(r.doc(), "example3-byproduct")["status"], "pass");
}

TEST(CliVerify, CorruptedMetricExitsFive) {
    const CliRun r = run({"verify", "--metric", data("corrupted.metric"), "--deterministic"});
    EXPECT_EQ(r.code, kExitVerification);
    EXPECT_EQ(check(r.doc(), "symmetries")["status"], "fail");
    EXPECT_FALSE(r.doc()["all_pass"].get<bool>());
}

TEST(CliMetricFile, UserSphere) {
    const CliRun r = run({"svp", "--metric", data("sphere.metric"), "--params", "R=2", "--deterministic"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto s = cluster_sigmas(r.doc());
    ASSERT_EQ(s.size(), 2u);
    EXPECT_NEAR(s[1], 0.25, 1e-6);
}

TEST(CliCatalog, ListsAllIds) {
    const CliRun r = run({"catalog", "list"});
    ASSERT_EQ(r.code, kExitOk);
    for (const char* id : {"sphere2", "space-form", "euclidean", "minkowski", "schwarzschild", "kerr"})
        EXPECT_NE(r.out.find(id), std::string::npos) << id;
}

TEST(CliErrors, ExitCodes) {
    EXPECT_EQ(run({"svp", "--metric", "nope"}).code, kExitConfig);
    EXPECT_EQ(run({"svp", "--metric", "sphere2", "--point", "1,2,3"}).code, kExitConfig);
    EXPECT_EQ(run({"svp", "--metric", "sphere2", "--signs", "++x+"}).code, kExitConfig);
    EXPECT_EQ(run({"svp", "--metric", "sphere2", "--output", "xml"}).code, kExitConfig);
    EXPECT_EQ(run({"frobnicate"}).code, kExitConfig);
    EXPECT_EQ(run({"svp", "--metric", "schwarzschild", "--point", "0,1.5,1,0", "--method", "reduced"}).code,
              kExitDomain);
    EXPECT_EQ(run({"invariants", "--metric", "sphere2", "--point", "0,0"}).code, kExitDomain);
    // Mixed signs on a Riemannian metric leave every start infeasible.
    EXPECT_EQ(run({"svp", "--metric", "sphere2", "--signs", "+++-", "--starts", "5"}).code, kExitNoConvergence);
    const CliRun bad = run({"svp", "--metric", "nope"});
    EXPECT_FALSE(bad.err.empty());
}
