#include <doctest.h>

#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fcch/statics.hpp>

#include "oracles.hpp"

using namespace fcch;

namespace {

Configuration ground(const Dims& d) { return solve_static_ground(d); }

}  // namespace

TEST_CASE("tile semantics: sum and carry, the four-tile set") {
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            int hits = 0;
            for (const WangTile& t : tile_set())
                if (t.a == bool(a) && t.b == bool(b)) {
                    ++hits;
                    CHECK(t.s == bool(a ^ b));
                    CHECK(t.c == bool(a && b));
                }
            CHECK(hits == 1);  // exactly one tile per (a,b) input pair
        }
    // spec cases
    CHECK(WangTile{1, 1, 0, 1}.valid());
    CHECK(WangTile{0, 0, 0, 0}.valid());
    CHECK(!WangTile{1, 1, 1, 1}.valid());
}

TEST_CASE("green constraint cases") {
    CHECK(green_constraint(1, 1) == Green::A);
    CHECK(green_constraint(0, 1) == Green::C);
    CHECK(green_constraint(1, 0) == Green::B);
    CHECK(green_constraint(0, 0) == Green::B);
}

TEST_CASE("catalog shape") {
    const TermCatalog cat = build_static_catalog();
    CHECK(cat.terms.size() == 31);  // regression: frozen after first build
    for (const auto& t : cat.terms) CHECK(t.stencil.size() <= 4);

    // 1-local Rx term of magnitude 3 (penalty orientation after normalization)
    bool found_penalty = false, found_up_bonus = false;
    for (const auto& t : cat.terms) {
        if (t.name == "rx-penalty-x") {
            CHECK(t.stencil.size() == 1);
            CHECK(t.weight(LocalTerm::key({std::uint8_t(Red::Rx)})) == Rational(3));
            found_penalty = true;
        }
        if (t.name == "rx-up-bonus-x") {
            CHECK(t.stencil.size() == 2);
            CHECK(t.weight(LocalTerm::key({std::uint8_t(Red::Rx), std::uint8_t(Red::Rx)})) ==
                  Rational(-1));
            found_up_bonus = true;
        }
    }
    CHECK(found_penalty);
    CHECK(found_up_bonus);
}

TEST_CASE("counter front string equals the arithmetic oracle") {
    // plain binary values
    CHECK(counter_oracle_string(3, 5) == "101");
    CHECK(counter_oracle_string(4, 5) == "0101");
    for (int D = 2; D <= 16; ++D) {
        int W = 2;
        while ((1 << W) <= D) ++W;
        Dims d(W, 2, D);
        CHECK(counter_front_string(d) == counter_oracle_string(W, D));
    }
}

TEST_CASE("exhaustive tiling enumeration confirms uniqueness") {
    for (auto [W, D] : std::vector<std::pair<int, int>>{{2, 2}, {3, 5}, {3, 4}, {4, 6}}) {
        fcch::testing::TilingEnumerator en(W, D);
        en.run();
        REQUIRE(en.solutions.size() == 1);
        CHECK(en.solutions[0] == counter_oracle_string(W, D));
        CHECK(en.solutions[0] == counter_front_string(Dims(W, 2, D)));
    }
}

TEST_CASE("solved ground has energy exactly zero") {
    const TermCatalog cat = build_static_catalog();
    for (Dims d : {Dims(2, 2, 2), Dims(3, 3, 2), Dims(2, 4, 3), Dims(4, 3, 5), Dims(3, 5, 3)}) {
        CAPTURE(d.W);
        CAPTURE(d.H);
        CAPTURE(d.D);
        const Configuration cfg = ground(d);
        CHECK(static_energy(cfg, cat) == Rational(0));
        // bulk reds are Rx; off-column greens are Zero
        for (const auto& s : cfg.sites().sites()) {
            if (s.sub == Sublattice::RedFace && classify_region(s, d) == Region::Bulk)
                CHECK(cfg.red(s) == Red::Rx);
            if (s.sub == Sublattice::GreenFace && !(s.x == 0 && s.z == 0))
                CHECK(cfg.green(s) == Green::Zero);
        }
    }
}

TEST_CASE("degenerate dims rejected") {
    CHECK_THROWS_AS(solve_static_ground(Dims(1, 1, 1)), DegenerateInstance);
    CHECK_THROWS_AS(solve_static_ground(Dims(1, 3, 3)), DegenerateInstance);
    CHECK_THROWS_AS(solve_static_ground(Dims(3, 3, 1)), DegenerateInstance);
}

TEST_CASE("all-Rx configuration energy matches the per-site ledger") {
    const Dims d(2, 2, 2);
    const TermCatalog cat = build_static_catalog();
    Configuration cfg(d);
    for (const auto& s : cfg.sites().sites()) {
        if (s.sub == Sublattice::BlackVertex)
            cfg.set_raw(s, kUnsetBlack);
        else if (s.sub == Sublattice::RedFace)
            cfg.set(s, Red::Rx);
        else
            cfg.set(s, Green::Zero);
    }
    // Independent ledger: per red spin, 3 minus the available bonuses; greens
    // all collect the Zero bonus. Scaled by 2, plus the shift.
    Rational raw(0);
    for (const auto& s : cfg.sites().sites()) {
        if (s.sub == Sublattice::GreenFace) raw += Rational(-1, 2);
        if (s.sub != Sublattice::RedFace) continue;
        const bool up = s.y + 1 <= d.H - 1;
        bool dp, dm;
        if (s.axis == Axis::X) {
            dp = s.x <= d.W - 1;
            dm = s.x >= 1;
        } else {
            dp = s.z <= d.D - 1;
            dm = s.z >= 1;
        }
        raw += Rational(3);
        if (up) raw -= Rational(1);
        if (up && dp) raw -= Rational(1);
        if (up && dm) raw -= Rational(1);
        if (dp && dm) raw -= Rational(2);
    }
    CHECK(static_energy(cfg, cat) == Rational(2) * raw + cat.energy_shift(d));
}

TEST_CASE("single-site corruptions raise the energy to at least 1") {
    const TermCatalog cat = build_static_catalog();
    const Dims d(3, 3, 3);
    const Configuration cfg = ground(d);
    std::mt19937 rng(12345);
    const auto& sites = cfg.sites().sites();
    int checked = 0;
    while (checked < 400) {
        const Site& s = sites[rng() % sites.size()];
        if (s.sub == Sublattice::BlackVertex) continue;
        const std::uint8_t old = cfg.raw(s);
        std::uint8_t nv = rng() % 4;
        if (nv == old) continue;
        Configuration c2 = cfg;
        c2.set_raw(s, nv);
        const Rational e = static_energy(c2, cat);
        // Placing the gate marker on a corner slot whose context legitimises
        // it reproduces a history-state intermediate: part of the degenerate
        // zero space by construction. Everything else must cost >= 1.
        const bool corner_slot = s.sub == Sublattice::RedFace && s.x == 0 && s.z == 0;
        if (corner_slot && Red(nv) == Red::Bang && Red(old) == Red::Bit1) {
            CHECK(e >= Rational(0));
        } else {
            CAPTURE(int(s.sub));
            CAPTURE(s.x);
            CAPTURE(s.y);
            CAPTURE(s.z);
            CAPTURE(int(nv));
            CHECK(e >= Rational(1));
        }
        ++checked;
    }

    // spec example: one bulk red flipped Rx -> Bit0
    Configuration c2 = cfg;
    c2.set(Site::redX(1, 1, 1), Red::Bit0);
    CHECK(static_energy(c2, cat) >= Rational(1));
}

TEST_CASE("exhaustive ground search finds exactly the solved configuration") {
    const Dims d(2, 2, 2);
    fcch::testing::GroundSearch gs(d, /*allow_bang=*/true);
    gs.run();
    REQUIRE(gs.zero_count == 1);
    const Configuration cfg = ground(d);
    for (std::size_t i = 0; i < cfg.sites().size(); ++i) {
        const Site& s = cfg.sites().site(i);
        if (s.sub == Sublattice::BlackVertex) continue;
        CHECK(gs.zeros[0][i] == cfg.raw(s));
    }
}

TEST_CASE("wound program: levels shift by one winding step") {
    const TermCatalog cat = build_static_catalog();
    const Dims d(3, 4, 3);
    const Configuration cfg = ground(d);
    const auto rows = wound_program_at_edge(cfg, cat);
    REQUIRE(int(rows.size()) == d.H);
    const int P = perimeter_len(d);
    // Below the top, each row is the previous one advanced one slot.
    for (std::size_t r = 1; r + 1 < rows.size(); ++r) {
        for (int j = 0; j < P; ++j) CHECK(rows[r + 1][j] == rows[r][(j + 1) % P]);
    }
    // Top row relates to the next with the right-face flip on the source.
    for (int j = 0; j < P; ++j) {
        char expect = rows[0][(j + 1) % P];
        if (slot_on_right_face(d, (j + 1) % P)) expect = expect == '1' ? '0' : '1';
        CHECK(rows[1][j] == expect);
    }
    // Top front segment = counter string.
    CHECK(rows[0].substr(0, d.W) == counter_front_string(d));

    // effective program: counter value then zero padding
    const std::string prog = effective_program(cfg);
    CHECK(prog.substr(0, d.W) == counter_front_string(d));
    for (int j = d.W; j < P; ++j) CHECK(prog[j] == '0');

    // corrupted side bit -> violation naming a term
    Configuration bad = cfg;
    const Site slot = side_slot(d, 1, 1);
    bad.set(slot, bad.red(slot) == Red::Bit1 ? Red::Bit0 : Red::Bit1);
    CHECK_THROWS_AS(wound_program_at_edge(bad, cat), StaticViolation);
}

TEST_CASE("output penalty pair nets to the bottom corner only") {
    const Dims d(3, 4, 3);
    Configuration cfg = ground(d);
    const auto terms = output_penalty_terms();
    const auto insts = instantiate_terms(terms, cfg.sites());
    auto total = [&](Black fill) {
        for (const auto& s : cfg.sites().sites())
            if (s.sub == Sublattice::BlackVertex) cfg.set(s, fill);
        Rational e(0);
        for (const auto& ti : insts) e += ti.term->coefficient * instance_energy(ti, cfg.values());
        return e;
    };
    // rejecting output: exactly the one surviving projector fires
    CHECK(total(Black::Q0) == Rational(1));
    // accepting output: nothing fires
    CHECK(total(Black::Q1) == Rational(0));
}

TEST_CASE("adjacent head symbols are penalized") {
    const Dims d(3, 3, 3);
    Configuration cfg = ground(d);
    for (const auto& s : cfg.sites().sites())
        if (s.sub == Sublattice::BlackVertex) cfg.set(s, Black::Q0);
    const auto terms = heads_penalty_terms();
    const auto insts = instantiate_terms(terms, cfg.sites());
    auto total = [&]() {
        Rational e(0);
        for (const auto& ti : insts) e += ti.term->coefficient * instance_energy(ti, cfg.values());
        return e;
    };
    CHECK(total() == Rational(0));
    cfg.set(Site::black(1, 2, 0), Black::ArrowR);
    CHECK(total() == Rational(0));  // a single head costs nothing
    cfg.set(Site::black(2, 2, 0), Black::ArrowL);
    CHECK(total() >= Rational(1));  // two heads side by side
    cfg.set(Site::black(2, 2, 0), Black::Q0);
    cfg.set(side_slot(d, 0, 1), Red::Bang);
    CHECK(total() >= Rational(1));  // arrow next to a gate marker
}
