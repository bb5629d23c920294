#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nonlocal/presets.hpp"

using namespace nonlocal;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("nonlocal_presets_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string note(const PresetOutcome& o, const std::string& key) {
    for (const auto& [k, v] : o.notes)
        if (k == key) return v;
    FAIL("missing note: " + key);
    return {};
}

}  // namespace

TEST_CASE("the catalog names resolve", "[presets]") {
    CHECK(preset_catalog().size() == 30);
    CHECK_THROWS_AS(run_preset("no-such-preset", PresetScale::Desk), std::invalid_argument);
}

TEST_CASE("linear presets converge onto the dominant eigenfield", "[presets]") {
    PresetOptions opts;
    opts.out_dir = fresh_dir("linear");
    PresetOutcome o = run_preset("linear-1d-K3", PresetScale::Desk, opts);
    CHECK(std::stod(note(o, "dominant_mode_ratio")) >= 0.999);
    CHECK(note(o, "stable") == "true");
    for (const char* name : {"eigenvalues.csv", "final.csv", "final.pgm", "report.txt"})
        CHECK(fs::exists(opts.out_dir / "linear-1d-K3" / "desk" / name));
}

TEST_CASE("saturated presets land in the odd monotone family", "[presets]") {
    PresetOptions opts;
    opts.out_dir = fresh_dir("schauder");
    PresetOutcome o = run_preset("schauder-1d-K1", PresetScale::Desk, opts);
    CHECK(note(o, "narrow_gap_member") == "true");
    CHECK(std::stod(note(o, "stationary_residual")) <= 1e-6);
    CHECK(note(o, "applicable_conditions").find("SmallInhibition") != std::string::npos);

    PresetOutcome pos = run_preset("schauder-1d-positive", PresetScale::Desk, opts);
    CHECK(note(pos, "narrow_gap_member") == "true");
    CHECK(note(pos, "applicable_conditions").find("Positive2") != std::string::npos);
}

TEST_CASE("the periodic preset keeps the construction period", "[presets]") {
    PresetOptions opts;
    opts.out_dir = fresh_dir("periodic");
    PresetOutcome o = run_preset("negative-1d-K4-periodic", PresetScale::Desk, opts);
    CHECK(note(o, "periodic_member") == "true");
    const double wl = std::stod(note(o, "wavelength"));
    CHECK(wl == Approx(6.0).margin(0.5));
    CHECK(std::stod(note(o, "stationary_residual")) <= 1e-6);
}

TEST_CASE("preset artifacts are byte-identical across repeats", "[presets]") {
    PresetOptions a, b;
    a.out_dir = fresh_dir("det_a");
    b.out_dir = fresh_dir("det_b");
    a.seed = 11;
    b.seed = 11;
    run_preset("linear-1d-K1", PresetScale::Desk, a);
    run_preset("linear-1d-K1", PresetScale::Desk, b);
    for (const char* name : {"eigenvalues.csv", "final.csv", "report.txt"}) {
        const std::string fa = slurp(a.out_dir / "linear-1d-K1" / "desk" / name);
        const std::string fb = slurp(b.out_dir / "linear-1d-K1" / "desk" / name);
        CHECK(fa == fb);
        CHECK(!fa.empty());
    }
}
