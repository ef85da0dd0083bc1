#include <doctest.h>

#include <set>

#include <fcch/lattice.hpp>

using namespace fcch;

TEST_CASE("site counts match the face-family formulas") {
    SUBCASE("unit cube") {
        Dims d(1, 1, 1);
        CHECK(black_count(d) == 8);
        CHECK(red_x_count(d) + red_z_count(d) + green_count(d) == 6);
    }
    SUBCASE("2x2x2") {
        Dims d(2, 2, 2);
        CHECK(black_count(d) == 27);
        CHECK(red_x_count(d) + red_z_count(d) + green_count(d) == 36);
    }
    SUBCASE("asymmetric") {
        Dims d(3, 4, 5);
        CHECK(red_x_count(d) == (3 + 1) * 4 * 5);
        CHECK(green_count(d) == 3 * (4 + 1) * 5);
        CHECK(red_z_count(d) == 3 * 4 * (5 + 1));
    }
}

TEST_CASE("enumeration is a bijection with stable order") {
    Dims d(2, 3, 2);
    SiteTable t(d);
    CHECK(long(t.size()) == site_count(d));
    std::set<std::array<int, 5>> seen;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const Site& s = t.site(i);
        CHECK(contains(d, s));
        CHECK(t.index(s) == i);
        seen.insert({int(s.sub), int(s.axis), s.x, s.y, s.z});
    }
    CHECK(seen.size() == t.size());

    // Partition: black + red + green counts sum to the total.
    long blacks = 0, reds = 0, greens = 0;
    for (const auto& s : t.sites()) {
        if (s.sub == Sublattice::BlackVertex) ++blacks;
        if (s.sub == Sublattice::RedFace) ++reds;
        if (s.sub == Sublattice::GreenFace) ++greens;
    }
    CHECK(blacks == black_count(d));
    CHECK(reds == red_x_count(d) + red_z_count(d));
    CHECK(greens == green_count(d));
}

TEST_CASE("dims validation") {
    CHECK_THROWS_AS(Dims(0, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(Dims(1, -2, 1), std::invalid_argument);
}

TEST_CASE("stencil resolution") {
    Dims d(4, 4, 4);

    SUBCASE("plaquette at an interior plane hits four red faces") {
        auto sites = neighbors(Site::redX(2, 2, 2), d, "B-layer plaquette");
        REQUIRE(sites.has_value());
        CHECK(sites->size() == 4);
        for (const auto& s : *sites) {
            CHECK(s.sub == Sublattice::RedFace);
            CHECK(contains(d, s));
        }
        // pairwise distinct
        for (std::size_t i = 0; i < sites->size(); ++i)
            for (std::size_t j = i + 1; j < sites->size(); ++j) CHECK(!((*sites)[i] == (*sites)[j]));
    }

    SUBCASE("anchored outside the lattice is absent") {
        CHECK(!neighbors(Site::redX(0, 0, 0), d, "top-right-edge probe").has_value());
        CHECK(!resolve_stencil(find_stencil("B-layer plaquette"), d, 4, 0, 0).has_value());
    }

    SUBCASE("corner winding at an interior cell: four reds on two vertical face families") {
        auto sites = neighbors(Site::redZ(1, 1, 1), d, "corner winding");
        REQUIRE(sites.has_value());
        CHECK(sites->size() == 4);
        int xn = 0, zn = 0;
        for (const auto& s : *sites) {
            CHECK(s.sub == Sublattice::RedFace);
            if (s.axis == Axis::X) ++xn;
            if (s.axis == Axis::Z) ++zn;
        }
        CHECK(xn == 2);
        CHECK(zn == 2);
    }

    SUBCASE("unknown stencil name") {
        CHECK_THROWS_AS(neighbors(Site::black(0, 0, 0), d, "nonsense"), std::invalid_argument);
    }
}

TEST_CASE("region classification") {
    Dims d(3, 4, 3);
    CHECK(classify_region(Site::redX(1, d.H - 1, 1), d) == Region::TopBLayer);
    CHECK(classify_region(Site::redX(1, 1, 1), d) == Region::Bulk);
    CHECK(classify_region(Site::redX(0, 1, 1), d) == Region::SideFace);
    // The computation edge: sites in the x=0, z=0 corner cell column.
    CHECK(classify_region(Site::black(0, 2, 0), d) == Region::ComputationEdge);
    CHECK(classify_region(Site::redZ(0, 2, 0), d) == Region::ComputationEdge);
    CHECK(classify_region(Site::green(0, 2, 0), d) == Region::ComputationEdge);
    CHECK(classify_region(Site::redX(1, 0, 1), d) == Region::BottomLayer);
}

TEST_CASE("json round trips") {
    Dims d(2, 5, 7);
    CHECK(dims_from_json(dims_to_json(d)) == d);
    for (Site s : {Site::black(1, 2, 3), Site::redX(0, 1, 2), Site::redZ(1, 0, 7), Site::green(0, 5, 1)}) {
        CHECK(site_from_json(site_to_json(s)) == s);
    }
    CHECK(site_to_json(Site::black(0, 0, 0))["axis"].is_null());
    CHECK(site_to_json(Site::redZ(1, 0, 0))["axis"] == "z");
}

#include <fcch/io.hpp>
#include <fcch/statics.hpp>

TEST_CASE("configuration json round trip") {
    using namespace fcch;
    const Dims d(2, 3, 2);
    const Configuration cfg = solve_static_ground(d);
    const auto j = config_to_json(cfg);
    const Configuration back = config_from_json(j);
    CHECK(back.dims() == d);
    for (const auto& s : cfg.sites().sites()) CHECK(back.raw(s) == cfg.raw(s));
    // black placeholders survive as nulls
    CHECK(j.at("spins").at(site_key(Site::black(0, 0, 0))).is_null());
}
