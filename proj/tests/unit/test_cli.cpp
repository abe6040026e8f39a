#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fieldcomm/cli.hpp"
#include "fieldcomm/errors.hpp"

using namespace fieldcomm;
using namespace fieldcomm::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("fieldcomm_test_" + std::to_string(std::rand()) + "_" +
                                            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

fs::path write_config(const fs::path& dir, const std::string& name, const json& config) {
    const auto p = dir / name;
    std::ofstream(p) << config.dump();
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

int run_quiet(const RunOptions& o) {
    std::ostringstream log;
    return run(o, log);
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("float formatting") {
        CHECK(format_double(0.0) == "0.00000000000e+00");
        CHECK(format_double(-0.0) == "0.00000000000e+00");
        CHECK(format_double(-1.0) == "-1.00000000000e+00");
        CHECK(format_double(1.0 / 3.0) == "3.33333333333e-01");
        CHECK(format_double(6.02214076e23) == "6.02214076000e+23");
    }

    TEST_CASE("grid specifications") {
        const json grids = {{"a", {{"start", 0.0}, {"stop", 3.0}, {"step", 0.5}}},
                           {"b", {1.0, 2.0}},
                           {"c", 4.0},
                           {"d", {{"start", 0.0}, {"stop", 3.0}, {"step", 0.1}}},
                           {"bad", {{"start", 0.0}, {"stop", 1.0}, {"step", 0.0}}},
                           {"extra", {{"start", 0.0}, {"stop", 1.0}, {"step", 0.5}, {"stride", 1}}},
                           {"empty", json::array()},
                           {"text", "x"}};
        CHECK(parse_grid(grids, "a").size() == 7);
        CHECK(parse_grid(grids, "a").back() == 3.0);
        CHECK(parse_grid(grids, "d").size() == 31);
        CHECK(parse_grid(grids, "b") == std::vector<double>{1.0, 2.0});
        CHECK(parse_grid(grids, "c") == std::vector<double>{4.0});
        CHECK_THROWS_AS((void)parse_grid(grids, "bad"), ValidationError);
        CHECK_THROWS_AS((void)parse_grid(grids, "extra"), ValidationError);
        CHECK_THROWS_AS((void)parse_grid(grids, "empty"), ValidationError);
        CHECK_THROWS_AS((void)parse_grid(grids, "text"), ValidationError);
    }

    TEST_CASE("job count resolution") {
        CHECK(resolve_jobs(3, "8") == 3);
        CHECK(resolve_jobs(std::nullopt, "5") == 5);
        CHECK(resolve_jobs(std::nullopt, nullptr) >= 1);
        CHECK_THROWS_AS((void)resolve_jobs(0, nullptr), ValidationError);
        CHECK_THROWS_AS((void)resolve_jobs(std::nullopt, "four"), ValidationError);
        CHECK_THROWS_AS((void)resolve_jobs(std::nullopt, "2x"), ValidationError);
    }

    TEST_CASE("erasure rows") {
        const auto r = run_experiment("erasure", {{"N", {1, 2, 3}}}, 1, 2);
        CHECK(r.table.header == std::vector<std::string>{"N", "coherent_info_bits"});
        CHECK(render_csv(r.table) ==
              "N,coherent_info_bits\n1,1.00000000000e+00\n2,0.00000000000e+00\n3,-3.33333333333e-01\n");
    }

    TEST_CASE("coherent information sweep rows") {
        const json config = {{"mu_over_ell", {{"start", 0.0}, {"stop", 3.0}, {"step", 0.5}}}};
        const auto r = run_experiment("coherent-info-sweep", config, 1, 4);
        REQUIRE(r.table.rows.size() == 7);
        CHECK(std::get<double>(r.table.rows[0][2]) == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(std::get<double>(r.table.rows[6][0]) == 3.0);
        CHECK(std::get<double>(r.table.rows[6][1]) == 1.5);
    }

    TEST_CASE("state-transfer rows sit above the bound") {
        const json config = {{"gamma1_norm_sq", {0.02, 0.1}}, {"haar_samples", 10}};
        const auto r = run_experiment("state-transfer", config, 5, 2);
        CHECK(r.table.header ==
              std::vector<std::string>{"mu_A", "gamma1_norm_sq", "input_label", "fidelity", "bound"});
        CHECK(r.table.rows.size() == 32);
        for (const auto& row : r.table.rows) {
            CHECK(std::get<double>(row[3]) >= std::get<double>(row[4]));
        }
    }

    TEST_CASE("headers of the remaining experiments") {
        const auto cav = run_experiment("cavity", {{"lambda1", 5}, {"haar_samples", 2}}, 1, 1);
        CHECK(cav.table.header == std::vector<std::string>{"lambda1", "gamma_norm_sq", "fidelity", "bound"});
        CHECK(cav.table.rows.size() == 1);
        const auto del = run_experiment("delocalize", {{"gamma2_norm_sq", 0.01}, {"haar_samples", 0}}, 1, 1);
        CHECK(del.table.header.front() == "sender_coupling");
        CHECK(del.table.rows.size() == 6);
        const auto aud = run_experiment("audit", json::object(), 1, 1);
        CHECK(aud.table.header == std::vector<std::string>{"check", "pass", "margin"});
        CHECK(aud.table.rows.size() == 4);
    }

    TEST_CASE("configuration errors are validation errors") {
        CHECK_THROWS_AS((void)run_experiment("erasure", {{"n", 3}}, 1, 1), ValidationError);
        CHECK_THROWS_AS((void)run_experiment("erasure", {{"N", 2.5}}, 1, 1), ValidationError);
        CHECK_THROWS_AS((void)run_experiment("erasure", {{"experiment", "cavity"}}, 1, 1), ValidationError);
        CHECK_THROWS_AS((void)run_experiment("coherent-info-sweep", {{"delay_over_ell", 1.0}}, 1, 1), GeometryError);
        CHECK_THROWS_AS((void)run_experiment("state-transfer", {{"distance", 1.0}}, 1, 1), GeometryError);
        CHECK_THROWS_AS((void)run_experiment("cavity", {{"bob_focal_time", 3.0}}, 1, 1), GeometryError);
        CHECK_THROWS_AS(
            (void)run_experiment("state-transfer", {{"mu_A", 10}, {"gamma1_norm_sq", 0.02}}, 1, 1),
            ValidationError);
        CHECK_THROWS_AS((void)run_experiment("state-transfer", {{"alice_profile", {{"type", "circle"}}}}, 1, 1),
                        ValidationError);
        CHECK_THROWS_AS((void)run_experiment("nope", json::object(), 1, 1), ValidationError);
    }

    TEST_CASE("forged audit is a numerical failure") {
        const json forged = {{"forged", {{"alpha1_norm_sq", 0.5}, {"gamma1_norm_sq", 3.2416}, {"phi", 1.5708}}}};
        CHECK_THROWS_AS((void)run_experiment("audit", forged, 1, 1), AuditError);
    }

    TEST_CASE("run writes CSV and manifest deterministically") {
        TempDir dir;
        const json config = {{"experiment", "state-transfer"},
                             {"gamma1_norm_sq", {0.005, 0.02, 0.05}},
                             {"haar_samples", 5},
                             {"alice_profile", {{"type", "skew_triangle"}, {"width", 1.0}}},
                             {"bob_profile", "mirror"}};
        const auto cfg = write_config(dir.path, "st.json", config);
        RunOptions o{"state-transfer", cfg, dir.path / "one.csv", 99, 1};
        REQUIRE(run_quiet(o) == kExitOk);
        const std::string first = slurp(dir.path / "one.csv");
        CHECK(first_line(first) == "mu_A,gamma1_norm_sq,input_label,fidelity,bound");
        CHECK(first.find('\r') == std::string::npos);

        o.out = dir.path / "two.csv";
        o.jobs = 4;
        REQUIRE(run_quiet(o) == kExitOk);
        CHECK(slurp(dir.path / "two.csv") == first);

        // Rerunning replaces rather than appends.
        REQUIRE(run_quiet(o) == kExitOk);
        CHECK(slurp(dir.path / "two.csv") == first);

        o.seed = 100;
        REQUIRE(run_quiet(o) == kExitOk);
        CHECK(slurp(dir.path / "two.csv") != first);

        const json manifest = json::parse(slurp(dir.path / "two.manifest.json"));
        CHECK(manifest["experiment"] == "state-transfer");
        CHECK(manifest["seed"] == 100);
        CHECK(manifest["jobs"] == 4);
        CHECK(manifest["config"] == config);
        CHECK(manifest["rows"] == 3 * 11);
        CHECK(manifest["versions"].contains("eigen"));
        CHECK(manifest["wall_time_seconds"].get<double>() >= 0.0);
    }

    TEST_CASE("failures leave previous outputs untouched and no temporaries") {
        TempDir dir;
        const auto out = dir.path / "audit.csv";
        std::ofstream(out) << "previous\n";
        const auto forged = write_config(
            dir.path, "forged.json",
            {{"forged", {{"alpha1_norm_sq", 0.5}, {"gamma1_norm_sq", 3.2416}, {"phi", 1.5708}}}});
        CHECK(run_quiet({"audit", forged, out, std::nullopt, 1}) == kExitNumerical);
        CHECK(slurp(out) == "previous\n");
        const auto bad = write_config(dir.path, "bad.json", {{"N", 0}});
        CHECK(run_quiet({"erasure", bad, dir.path / "e.csv", std::nullopt, 1}) == kExitValidation);
        std::ofstream(dir.path / "broken.json") << "{ not json";
        CHECK(run_quiet({"erasure", dir.path / "broken.json", dir.path / "e.csv", std::nullopt, 1}) ==
              kExitValidation);
        CHECK(run_quiet({"erasure", dir.path / "missing.json", dir.path / "e.csv", std::nullopt, 1}) ==
              kExitValidation);
        std::size_t files = 0;
        for (const auto& entry : fs::directory_iterator(dir.path)) {
            CHECK(entry.path().extension() != ".tmp");
            ++files;
        }
        CHECK(files == 4);
        CHECK_FALSE(fs::exists(dir.path / "e.csv"));
    }

    TEST_CASE("manifest path") {
        CHECK(manifest_path("out/results.csv") == fs::path("out/results.manifest.json"));
        CHECK(manifest_path("results") == fs::path("results.manifest.json"));
    }

    TEST_CASE("command-line tool exit codes") {
        TempDir dir;
        const std::string bin = FIELDCOMM_BINARY;
        const std::string cfg = std::string(FIELDCOMM_SOURCE_DIR) + "/configs/erasure.json";
        const std::string out = (dir.path / "erasure.csv").string();
        auto status = [](const std::string& cmd) {
            const int s = std::system((cmd + " >/dev/null 2>&1").c_str());
            return WEXITSTATUS(s);
        };
        CHECK(status(bin + " erasure --config " + cfg + " --out " + out) == 0);
        CHECK(first_line(slurp(out)) == "N,coherent_info_bits");
        CHECK(status(bin + " teleport --config " + cfg) == 2);
        CHECK(status(bin + " erasure") == 2);
        CHECK(status(bin + " erasure --config " + cfg + " --jobs 0") == 2);
        CHECK(status(bin + " cavity --config " + cfg + " --out " + out) == 2);
        CHECK(status("FIELDCOMM_JOBS=abc " + bin + " erasure --config " + cfg + " --out " + out) == 2);
        const std::string forged = std::string(FIELDCOMM_SOURCE_DIR) + "/configs/audit_forged.json";
        CHECK(status(bin + " audit --config " + forged + " --out " + (dir.path / "a.csv").string()) == 3);
        CHECK_FALSE(fs::exists(dir.path / "a.csv"));
    }
}
