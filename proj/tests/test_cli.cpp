#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "coarray/cli.hpp"

using namespace coarray;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "coarray-lab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("geometry inspect") {
    const auto r = run({"geometry", "inspect", "--array", "nested:2,2"});
    REQUIRE(r.code == kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["positions"] == std::vector<int>{1, 2, 3, 6});
    CHECK(j["m_ca"] == 5);
    CHECK(j["hole_free"] == true);
    CHECK(j["redundancy"].get<double>() == doctest::Approx(4.75));
    CHECK(j["weights"]["0"] == 4);

    const auto holey = nlohmann::json::parse(run({"geometry", "inspect", "--array", "custom:[0,2]"}).out);
    CHECK(holey["hole_free"] == false);
    CHECK(holey["redundancy"].is_null());
}

TEST_CASE("estimate on exact covariance") {
    const auto r = run({"estimate", "--array", "nested:3,3", "--omegas", "0.1,0.3", "--noise", "0.1"});
    REQUIRE(r.code == kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["omegas_hat"][0].get<double>() == doctest::Approx(0.1).epsilon(1e-8));
    CHECK(j["omegas_hat"][1].get<double>() == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(j["psi_eigenvalues"].size() == 2);
    CHECK(j["matching_distance"].get<double>() < 1e-8);

    const auto s1 = run({"estimate", "--array", "ula:10", "--omegas", "0.1,0.4", "--snr-db", "10", "-L", "300", "--seed", "4", "--method", "direct"});
    const auto s2 = run({"estimate", "--array", "ula:10", "--omegas", "0.1,0.4", "--snr-db", "10", "-L", "300", "--seed", "4", "--method", "direct"});
    CHECK(s1.code == kExitOk);
    CHECK(s1.out == s2.out);
    const auto j1 = nlohmann::json::parse(s1.out);
    CHECK(j1["coarray_error"].get<double>() <= j1["grid_sup_bound"].get<double>());

    const auto fine = nlohmann::json::parse(run({"estimate", "--array", "ula:10", "--omegas", "0.1,0.4", "--snr-db", "10", "-L", "300", "--seed", "4", "--grid-mult", "8"}).out);
    CHECK(fine["grid_mult"] == 8);
    CHECK(run({"estimate", "--array", "ula:4", "--omegas", "0.1", "--grid-mult", "0"}).code == kExitUsage);
}

TEST_CASE("bounds output") {
    const auto r = run({"bounds", "--array", "ula:12", "--omegas", "0.1,0.5", "--noise", "0.1", "--epsilon", "0.01", "-L", "1000"});
    REQUIRE(r.code == kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["eigen_gap_ok"] == true);
    CHECK(j["snapshot_requirement"]["small_eps_regime"] == true);
    CHECK(j["specialized"]["regime"] == "ula");
    CHECK(j.contains("tail_bound"));

    const auto gapless = nlohmann::json::parse(run({"bounds", "--array", "ula:4", "--omegas", "0.1,0.12", "--noise", "100"}).out);
    CHECK(gapless["eigen_gap_ok"] == false);
    CHECK_FALSE(gapless.contains("snapshot_requirement"));

    CHECK(run({"bounds", "--array", "ula:4", "--omegas", "0.1", "--constants", "zeta=2"}).code == kExitRuntime);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"estimate"}).code == kExitUsage);
    CHECK(run({"estimate", "--array", "ula:4", "--omegas", "0.1", "--bogus"}).code == kExitUsage);
    CHECK(run({"estimate", "--array", "ula:4", "--omegas", "0.1", "--noise", "1", "--snr-db", "3"}).code == kExitUsage);
    CHECK(run({"estimate", "--array", "ula:4", "--omegas", "0.1,0.2", "--powers", "1"}).code == kExitUsage);
    CHECK(run({"experiment"}).code == kExitUsage);
    CHECK(run({"experiment", "run"}).code == kExitUsage);
    CHECK(run({"geometry", "inspect"}).code == kExitUsage);
}

TEST_CASE("runtime errors") {
    const auto r = run({"experiment", "run", "missing.toml"});
    CHECK(r.code == kExitRuntime);
    CHECK(r.err.find("not found") != std::string::npos);
    CHECK(run({"geometry", "inspect", "--array", "nested:1,3"}).code == kExitRuntime);
    CHECK(run({"estimate", "--array", "custom:[0,3,4]", "--omegas", "0.1"}).code == kExitRuntime);
}

TEST_CASE("help on every subcommand") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"--help"},
             {"estimate", "--help"},
             {"bounds", "--help"},
             {"experiment", "--help"},
             {"experiment", "run", "--help"},
             {"experiment", "list-presets", "--help"},
             {"geometry", "--help"},
             {"geometry", "inspect", "--help"}}) {
        const auto r = run(args);
        CHECK(r.code == kExitOk);
        CHECK(r.out.find("Usage") != std::string::npos);
    }
}

TEST_CASE("experiment list and run") {
    const auto l = run({"experiment", "list-presets"});
    CHECK(l.code == kExitOk);
    for (const char* name : {"fig1", "fig2", "fig3", "fig4", "fig5"}) CHECK(l.out.find(name) != std::string::npos);

    const auto dir = std::filesystem::temp_directory_path();
    const auto cfg = (dir / "coarray_cli_test.toml").string();
    const auto csv = (dir / "coarray_cli_test.csv").string();
    {
        std::ofstream f(cfg);
        f << "arms = [\"ula:coarray\"]\nP = 6\nL = 30\nsnr_db = 0\ndelta = \"2/P\"\ntrials = 3\n";
    }
    const auto r = run({"experiment", "run", cfg, "--output", csv});
    CHECK(r.code == kExitOk);
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "arm,P,L,snr_db,delta,dynamic_range,trials,mean_md,median_md,prob_resolved,mean_cov_error,failures");
    const auto stdout_run = run({"experiment", "run", cfg, "-o", "-"});
    CHECK(stdout_run.out.rfind(header, 0) == 0);
    std::filesystem::remove(cfg);
    std::filesystem::remove(csv);

    CHECK(run({"experiment", "show-preset", "fig5"}).out.find("p_min = 0.2") != std::string::npos);
}
