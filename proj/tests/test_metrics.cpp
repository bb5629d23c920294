#include <catch2/catch_amalgamated.hpp>

#include "nonlocal/invariant_sets.hpp"
#include "nonlocal/metrics.hpp"

using namespace nonlocal;
using Catch::Approx;

TEST_CASE("a pure tone reports its period", "[metrics]") {
    Grid g = make_grid(1, 50.0, 1001);
    Field u(g);
    const double L = 10.0;
    for (int i = 0; i < 1001; ++i) u[i] = std::sin(2.0 * M_PI * g.coordinate(i) / L);
    WavelengthResult r = stripe_wavelength(u);
    REQUIRE(r.found);
    CHECK(r.wavelength == Approx(L).margin(g.spacing()));
}

TEST_CASE("constant fields have no peak", "[metrics]") {
    Grid g = make_grid(1, 10.0, 200);
    Field u(g);
    for (auto& v : u.values) v = 0.73;
    CHECK_FALSE(stripe_wavelength(u).found);
}

TEST_CASE("periodic profiles report the construction period", "[metrics]") {
    Grid g = make_grid(1, 23.94, 400);  // torus 48, period 6
    Field u = random_set_member(g, InvariantSetSpec::periodic(1.0), 3, 0);
    WavelengthResult r = stripe_wavelength(u);
    REQUIRE(r.found);
    CHECK(r.wavelength == Approx(6.0).margin(2.0 * g.spacing()));
}

TEST_CASE("2D stripes and rings report their spacing", "[metrics]") {
    Grid g = make_grid(2, 24.0, 96);
    const double L = 8.0;
    Field stripes(g);
    for (int iy = 0; iy < 96; ++iy)
        for (int ix = 0; ix < 96; ++ix)
            stripes[g.flat_index(ix, iy)] = std::sin(2.0 * M_PI * g.coordinate(ix) / L);
    WavelengthResult rs = stripe_wavelength(stripes);
    REQUIRE(rs.found);
    CHECK(rs.wavelength == Approx(L).margin(1.0));

    Field rings(g);
    for (int iy = 0; iy < 96; ++iy)
        for (int ix = 0; ix < 96; ++ix) {
            const double r = std::hypot(g.coordinate(ix), g.coordinate(iy));
            rings[g.flat_index(ix, iy)] = std::cos(2.0 * M_PI * r / L);
        }
    WavelengthResult rr = stripe_wavelength(rings);
    REQUIRE(rr.found);
    CHECK(rr.wavelength == Approx(L).margin(1.0));
}
