#include <catch2/catch_amalgamated.hpp>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "nonlocal/configfile.hpp"
#include "nonlocal/io.hpp"

using namespace nonlocal;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "nonlocal_io_tests";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

fs::path write_text(const std::string& name, const std::string& text) {
    const fs::path p = temp_dir() / name;
    std::ofstream out(p);
    out << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string minimal_config = R"(# minimal 1D setup
dimension = 1
extent = 25.0
points = 200
kernel.family = K1
a = 1.0
response = saturation
b = 1.0
)";

}  // namespace

TEST_CASE("field files round-trip bitwise", "[io]") {
    CounterRng rng{77};
    for (int dim : {1, 2}) {
        Grid g = dim == 1 ? make_grid(1, 12.5, 97) : make_grid(2, 3.0, 17);
        Field f(g);
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = rng.symmetric(i, 2.0);
        const fs::path p = temp_dir() / ("roundtrip" + std::to_string(dim) + ".csv");
        write_field_csv(f, p);
        Field back = read_field_csv(p);
        REQUIRE(back.grid == g);
        CHECK(std::memcmp(back.values.data(), f.values.data(), f.size() * sizeof(double)) == 0);
    }
}

TEST_CASE("a written field feeds back in as an initial condition", "[io]") {
    Grid g = make_grid(1, 8.0, 64);
    Kernel k = sample_kernel(KernelFamily::K1, default_kernel_params(KernelFamily::K1, 1),
                             g.spacing());
    CounterRng rng{88};
    Field f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = rng.symmetric(i, 1.0);
    const fs::path p = temp_dir() / "seed.csv";
    write_field_csv(f, p);

    SimConfig cfg(g, k);
    cfg.initial.kind = InitialKind::FromFile;
    cfg.initial.path = p.string();
    Field file = read_field_csv(cfg.initial.path);
    Field u0 = make_initial_field(cfg, nullptr, &file);
    CHECK(std::memcmp(u0.values.data(), f.values.data(), f.size() * sizeof(double)) == 0);

    // Unloaded file or mismatched grid is rejected.
    CHECK_THROWS_AS(make_initial_field(cfg), std::invalid_argument);
    Field wrong(make_grid(1, 8.0, 65));
    CHECK_THROWS_AS(make_initial_field(cfg, nullptr, &wrong), std::invalid_argument);
}

TEST_CASE("tiny fields write one row per point", "[io]") {
    Grid g = make_grid(1, 1.0, 3);
    Field f(g);
    f[0] = -1.0;
    f[1] = 0.0;
    f[2] = 1.0;
    const fs::path p = temp_dir() / "three.csv";
    write_field_csv(f, p);
    const std::string text = slurp(p);
    CHECK(text.find("x,u\n") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);  // grid line + header + 3 rows
}

TEST_CASE("images map [-1,1] onto bytes with floor rounding", "[io]") {
    Grid g = make_grid(1, 1.0, 5);
    Field f(g);

    for (auto& v : f.values) v = -1.0;
    const fs::path black = temp_dir() / "black.pgm";
    write_image(f, black);
    std::string data = slurp(black);
    REQUIRE(data.rfind("P5\n5 1\n255\n", 0) == 0);
    for (std::size_t i = data.size() - 5; i < data.size(); ++i)
        CHECK(static_cast<unsigned char>(data[i]) == 0);

    for (auto& v : f.values) v = 0.0;
    const fs::path gray = temp_dir() / "gray.pgm";
    write_image(f, gray);
    data = slurp(gray);
    for (std::size_t i = data.size() - 5; i < data.size(); ++i)
        CHECK(static_cast<unsigned char>(data[i]) == 127);

    for (auto& v : f.values) v = 7.0;  // clamped
    const fs::path white = temp_dir() / "white.pgm";
    write_image(f, white);
    data = slurp(white);
    for (std::size_t i = data.size() - 5; i < data.size(); ++i)
        CHECK(static_cast<unsigned char>(data[i]) == 255);
}

TEST_CASE("minimal configuration parses with defaults", "[io]") {
    const fs::path p = write_text("minimal.cfg", minimal_config);
    SimConfig cfg = parse_config(p);
    CHECK(cfg.grid.points_per_axis() == 200);
    CHECK(cfg.kernel.family() == KernelFamily::K1);
    CHECK(cfg.response.kind == ResponseKind::Saturation);
    CHECK(cfg.dt == 0.1);
    CHECK(cfg.max_steps == 100000);
    CHECK(cfg.initial.kind == InitialKind::Zero);
    CHECK(cfg.boundary == BoundaryMode::ZeroExtension);
}

TEST_CASE("bad configurations are rejected with line numbers", "[io]") {
    const fs::path neg_dt = write_text("neg_dt.cfg", minimal_config + "dt = -0.5\n");
    CHECK_THROWS_AS(parse_config(neg_dt), config_error);

    const fs::path unknown = write_text("unknown.cfg", minimal_config + "frobnicate = 3\n");
    try {
        parse_config(unknown);
        FAIL("expected rejection");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("frobnicate") != std::string::npos);
        CHECK(std::string(e.what()).find("line") != std::string::npos);
    }

    const fs::path dup = write_text("dup.cfg", minimal_config + "a = 2.0\n");
    CHECK_THROWS_AS(parse_config(dup), config_error);

    const fs::path nokey = write_text("nokey.cfg", "dimension = 1\n");
    CHECK_THROWS_AS(parse_config(nokey), config_error);

    const fs::path badresp = write_text("badresp.cfg", [] {
        std::string s = minimal_config;
        const auto pos = s.find("response = saturation");
        s.replace(pos, std::strlen("response = saturation"), "response = banana???\n#");
        return s;
    }());
    CHECK_THROWS_AS(parse_config(badresp), config_error);
}

TEST_CASE("the reference-scale configuration is aligned", "[io]") {
    const fs::path p = write_text("paperscale.cfg", R"(
dimension = 1
extent = 50.0
points = 600
kernel.family = K1
kernel.A = 1.0
kernel.B = 0.25
kernel.p = 1.0
kernel.q = 4.0
a = 1.0
response = linear
b = 0.05
dt = 0.1
init = random
init.seed = 7
)");
    SimConfig cfg = parse_config(p);
    CHECK(cfg.grid.spacing() == Approx(100.0 / 599.0));
    CHECK(cfg.kernel.spacing() == cfg.grid.spacing());
    CHECK(cfg.kernel.support_half_width() == Approx(4.0));
    // Taps cover the kernel support at the lattice spacing.
    CHECK(cfg.kernel.half_taps() == static_cast<int>(std::floor(4.0 / cfg.grid.spacing() + 1e-9)));
}

TEST_CASE("custom band kernels parse", "[io]") {
    const fs::path p = write_text("custom.cfg", R"(
dimension = 1
extent = 10.0
points = 101
kernel.family = custom
kernel.bands = 0:1:1.0;1:2:-0.5
a = 1.0
response = linear
b = 0.2
)");
    SimConfig cfg = parse_config(p);
    CHECK(cfg.kernel.family() == KernelFamily::Custom);
    CHECK(kernel_integral(cfg.kernel) == Approx(2.0 * (1.0 - 0.5)).margin(1e-12));

    const fs::path bad = write_text("custom_bad.cfg", R"(
dimension = 1
extent = 10.0
points = 100
kernel.family = custom
kernel.bands = 0:1
a = 1.0
response = linear
b = 0.2
)");
    CHECK_THROWS_AS(parse_config(bad), config_error);
}

TEST_CASE("spectrum, branch, and lemma tables are well-formed", "[io]") {
    Grid g = make_grid(1, 10.0, 80);
    Kernel k = sample_kernel(KernelFamily::K1, {1.0, 0.3, 2.0, 3.0, 0.0}, g.spacing());
    Spectrum spec = eigendecompose(build_operator_matrix(k, g), 8);
    const fs::path sp = temp_dir() / "eigenvalues.csv";
    write_spectrum_csv(spec, sp);
    std::string text = slurp(sp);
    CHECK(text.rfind("index,eigenvalue\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 9);

    const fs::path bp = temp_dir() / "branch.csv";
    write_branch_csv({{0.5, 1.25, 1e-12, true}, {0.6, 0.0, 1e-10, false}}, bp);
    text = slurp(bp);
    CHECK(text.find("b,amplitude,residual,accepted") != std::string::npos);
    CHECK(text.find(",1\n") != std::string::npos);
    CHECK(text.find(",0\n") != std::string::npos);

    const fs::path lp = temp_dir() / "lemma.csv";
    write_lemma_csv({check_lemma_hypotheses(k, LemmaTag::SmallInhibition1)}, lp);
    text = slurp(lp);
    CHECK(text.rfind("lemma,hypothesis,value,threshold,satisfied,applicable\n", 0) == 0);
    // Every row has exactly five commas.
    std::stringstream ss(text);
    std::string line;
    std::getline(ss, line);
    while (std::getline(ss, line))
        CHECK(std::count(line.begin(), line.end(), ',') == 5);
}

TEST_CASE("run reports carry all trajectory fields", "[io]") {
    Grid g = make_grid(1, 5.0, 50);
    RunReport r{Field(g)};
    r.steps_taken = 17;
    r.stationary = true;
    r.residual_inf = 1.5e-9;
    r.update_norm = 1.5e-9;
    const fs::path p = temp_dir() / "report.txt";
    write_report(r, p, {{"note", "value"}});
    const std::string text = slurp(p);
    for (const char* key : {"steps_taken: 17", "stationary: true", "residual_inf:",
                            "update_norm:", "final_max_abs:", "mode_history_samples: 0",
                            "note: value"})
        CHECK(text.find(key) != std::string::npos);
}
