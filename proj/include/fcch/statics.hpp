#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <fcch/lattice.hpp>
#include <fcch/rational.hpp>

namespace fcch {

// ---------------------------------------------------------------------------
// Spin symbols (local dimension 4 on every sublattice)

enum class Red : std::uint8_t { Rx = 0, Bit0 = 1, Bit1 = 2, Bang = 3 };
enum class Green : std::uint8_t { Zero = 0, A = 1, B = 2, C = 3 };
enum class Black : std::uint8_t { Q0 = 0, Q1 = 1, ArrowR = 2, ArrowL = 3 };

inline constexpr std::uint8_t kUnsetBlack = 0xFF;  // solver placeholder

inline const char* red_name(Red r) {
    switch (r) {
        case Red::Rx: return "Rx";
        case Red::Bit0: return "0";
        case Red::Bit1: return "1";
        case Red::Bang: return "!";
    }
    return "?";
}
inline const char* green_name(Green g) {
    switch (g) {
        case Green::Zero: return "Zero";
        case Green::A: return "A";
        case Green::B: return "B";
        case Green::C: return "C";
    }
    return "?";
}

/// Program-pair decoding for the computation edge: what the green spin next to
/// bits (p_i, p_next) must hold. B turns the head around, C keeps direction,
/// A performs a gate.
inline Green green_constraint(bool p_i, bool p_next) {
    if (!p_next) return Green::B;
    if (!p_i) return Green::C;
    return Green::A;
}

// ---------------------------------------------------------------------------
// Wang tiles of the binary counter

/// Edge bits of one counter tile: a = left, b = top, s = right, c = bottom
/// (sum and carry of a+b).
struct WangTile {
    bool a, b, s, c;
    bool valid() const { return s == (a ^ b) && c == (a && b); }
};

/// The four tiles {0000, 1101, 1010, 0110}.
inline std::array<WangTile, 4> tile_set() {
    return {WangTile{0, 0, 0, 0}, WangTile{1, 1, 0, 1}, WangTile{1, 0, 1, 0},
            WangTile{0, 1, 1, 0}};
}

// ---------------------------------------------------------------------------
// Configuration: total symbol assignment

class Configuration {
public:
    explicit Configuration(const Dims& d) : table_(d), vals_(table_.size(), 0) {}

    const Dims& dims() const { return table_.dims(); }
    const SiteTable& sites() const { return table_; }

    std::uint8_t raw(const Site& s) const { return vals_[table_.index(s)]; }
    void set_raw(const Site& s, std::uint8_t v) { vals_[table_.index(s)] = v; }

    Red red(const Site& s) const { return Red(raw(s)); }
    Green green(const Site& s) const { return Green(raw(s)); }
    void set(const Site& s, Red r) { set_raw(s, std::uint8_t(r)); }
    void set(const Site& s, Green g) { set_raw(s, std::uint8_t(g)); }
    void set(const Site& s, Black b) { set_raw(s, std::uint8_t(b)); }

    const std::vector<std::uint8_t>& values() const { return vals_; }
    std::vector<std::uint8_t>& values() { return vals_; }

private:
    SiteTable table_;
    std::vector<std::uint8_t> vals_;
};

// ---------------------------------------------------------------------------
// Diagonal local terms

/// One translation-invariant diagonal term: a named stencil of at most four
/// site offsets and a pure basis-state weight table. Joint symbols are keyed
/// two bits per site in stencil order.
struct LocalTerm {
    std::string name;
    std::vector<SiteRef> stencil;
    std::vector<std::pair<std::uint16_t, Rational>> table;  // sorted by key
    Rational coefficient = 1;

    static std::uint16_t key(const std::vector<std::uint8_t>& syms) {
        std::uint16_t k = 0;
        for (std::size_t i = 0; i < syms.size(); ++i) k |= std::uint16_t(syms[i] & 3) << (2 * i);
        return k;
    }
    Rational weight(std::uint16_t k) const {
        auto it = std::lower_bound(table.begin(), table.end(), k,
                                   [](const auto& e, std::uint16_t v) { return e.first < v; });
        if (it != table.end() && it->first == k) return it->second;
        return Rational(0);
    }
};

/// The finite catalog. Terms are independent of the lattice size; only the
/// normalization shift depends on it.
struct TermCatalog {
    std::vector<LocalTerm> terms;

    /// Shift making the intended ground configuration score exactly zero.
    Rational energy_shift(const Dims& d) const {
        const long interior = long(d.W - 1) * (d.H - 1) * d.D + long(d.W) * (d.H - 1) * (d.D - 1);
        const long zeros = green_count(d) - (d.H - 1);
        return Rational(4 * interior) + Rational(zeros);
    }
};

namespace detail {

/// Symbol-class helper for building weight tables with wildcards.
struct SymSet {
    std::vector<std::uint8_t> opts;
    static SymSet of(Red r) { return {{std::uint8_t(r)}}; }
    static SymSet of(Green g) { return {{std::uint8_t(g)}}; }
    static SymSet bits() { return {{std::uint8_t(Red::Bit0), std::uint8_t(Red::Bit1)}}; }
    static SymSet any() { return {{0, 1, 2, 3}}; }
};

inline void add_entries(LocalTerm& t, const std::vector<SymSet>& classes, Rational w) {
    std::vector<std::uint8_t> pick(classes.size(), 0);
    std::vector<std::size_t> idx(classes.size(), 0);
    while (true) {
        for (std::size_t i = 0; i < classes.size(); ++i) pick[i] = classes[i].opts[idx[i]];
        const std::uint16_t k = LocalTerm::key(pick);
        bool found = false;
        for (auto& e : t.table)
            if (e.first == k) {
                e.second += w;
                found = true;
                break;
            }
        if (!found) t.table.push_back({k, w});
        std::size_t i = 0;
        for (; i < classes.size(); ++i) {
            if (++idx[i] < classes[i].opts.size()) break;
            idx[i] = 0;
        }
        if (i == classes.size()) break;
    }
}

inline void finish(LocalTerm& t) {
    std::sort(t.table.begin(), t.table.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
}

}  // namespace detail

// ---------------------------------------------------------------------------
// The static catalog (appendix constraint families)

/// Builds the full diagonal catalog. Tables carry the raw interaction
/// strengths (the -3 penalty, the unit bonuses, the 1/2 Zero bonus); every
/// coefficient is 2, the global rescale that makes the intended ground score
/// zero after the shift and every defect cost at least 1.
inline TermCatalog build_static_catalog() {
    using S = Sublattice;
    using A = Axis;
    using detail::SymSet;
    using detail::add_entries;
    TermCatalog cat;

    auto term = [&cat](std::string name, std::vector<SiteRef> stencil) -> LocalTerm& {
        cat.terms.push_back(LocalTerm{std::move(name), std::move(stencil), {}, Rational(2)});
        return cat.terms.back();
    };

    const SymSet rx = SymSet::of(Red::Rx);
    const SymSet bit0 = SymSet::of(Red::Bit0);
    const SymSet bit1 = SymSet::of(Red::Bit1);
    const SymSet bang = SymSet::of(Red::Bang);
    const SymSet bits = SymSet::bits();
    const SymSet any = SymSet::any();

    // -- bulk series, one family per red orientation ------------------------
    // Penalty 3 on Rx everywhere; bonuses conditioned on neighbor existence
    // recover -2 in the bulk and leave the top layer and side faces in the
    // bit subspace.
    struct Orient {
        const char* tag;
        Axis self;
        SiteRef up, diag_p, diag_m;
    };
    const Orient orients[2] = {
        {"x", A::X, {S::RedFace, A::X, 0, 1, 0}, {S::RedFace, A::Z, 0, 0, 0},
         {S::RedFace, A::Z, -1, 0, 0}},
        {"z", A::Z, {S::RedFace, A::Z, 0, 1, 0}, {S::RedFace, A::X, 0, 0, 0},
         {S::RedFace, A::X, 0, 0, -1}},
    };
    for (const auto& o : orients) {
        const SiteRef self{S::RedFace, o.self, 0, 0, 0};
        {
            auto& t = term(std::string("rx-penalty-") + o.tag, {self});
            add_entries(t, {rx}, Rational(3));
            detail::finish(t);
        }
        {
            auto& t = term(std::string("rx-up-bonus-") + o.tag, {self, o.up});
            add_entries(t, {rx, any}, Rational(-1));
            detail::finish(t);
        }
        {
            auto& t = term(std::string("rx-updiag-bonus-") + o.tag + "-p", {self, o.up, o.diag_p});
            add_entries(t, {rx, any, any}, Rational(-1));
            detail::finish(t);
        }
        {
            auto& t = term(std::string("rx-updiag-bonus-") + o.tag + "-m", {self, o.up, o.diag_m});
            add_entries(t, {rx, any, any}, Rational(-1));
            detail::finish(t);
        }
        {
            auto& t = term(std::string("rx-side-bonus-") + o.tag, {self, o.diag_p, o.diag_m});
            add_entries(t, {rx, any, any}, Rational(-2));
            detail::finish(t);
        }
    }

    // -- green Zero bonus ----------------------------------------------------
    {
        auto& t = term("green-zero-bonus", {{S::GreenFace, A::Y, 0, 0, 0}});
        add_entries(t, {SymSet::of(Green::Zero)}, Rational(-1, 2));
        detail::finish(t);
    }

    // -- counter tiles -------------------------------------------------------
    // Penalize every all-bit plaquette that is not one of the four tiles.
    {
        auto& t = term("tile", find_stencil("B-layer plaquette").refs);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int s = 0; s < 2; ++s)
                    for (int c = 0; c < 2; ++c) {
                        if (WangTile{bool(a), bool(b), bool(s), bool(c)}.valid()) continue;
                        auto bs = [](int v) { return SymSet::of(v ? Red::Bit1 : Red::Bit0); };
                        add_entries(t, {bs(a), bs(b), bs(s), bs(c)}, Rational(1));
                    }
        detail::finish(t);
    }

    // -- counter seeds -------------------------------------------------------
    // Top right edge all 1, top back edge all 0. The probe reaches one level
    // down on the same plane (pins the side) and one cell in (pins the top).
    {
        auto& t = term("seed-right-a", find_stencil("top-right-edge probe").refs);
        add_entries(t, {bit0, bits, bits, rx}, Rational(1));
        detail::finish(t);
    }
    {
        auto& t = term("seed-right-b", {{S::RedFace, A::X, 0, 0, 0},
                                        {S::RedFace, A::X, 0, -1, 0},
                                        {S::RedFace, A::Z, -1, 0, 1},
                                        {S::RedFace, A::Z, -1, -1, 1}});
        add_entries(t, {bit0, bits, bits, rx}, Rational(1));
        detail::finish(t);
    }
    {
        auto& t = term("seed-back-a", {{S::RedFace, A::Z, 0, 0, 0},
                                       {S::RedFace, A::Z, 0, -1, 0},
                                       {S::RedFace, A::X, 0, 0, -1},
                                       {S::RedFace, A::X, 0, -1, -1}});
        add_entries(t, {bit1, bits, bits, rx}, Rational(1));
        detail::finish(t);
    }
    {
        auto& t = term("seed-back-b", {{S::RedFace, A::Z, 0, 0, 0},
                                       {S::RedFace, A::Z, 0, -1, 0},
                                       {S::RedFace, A::X, 1, 0, -1},
                                       {S::RedFace, A::X, 1, -1, -1}});
        add_entries(t, {bit1, bits, bits, rx}, Rational(1));
        detail::finish(t);
    }

    // -- diagonal winding ----------------------------------------------------
    // bit(slot j, row y) = bit(slot j+1, row y+1) around the four side faces.
    // Each stencil carries an inner spin whose protrusion kills the mirrored
    // reading on the opposite face; on the right face the inner spin's state
    // selects the flipped copy out of the top row.
    auto plain_pair = [&](LocalTerm& t, const SymSet& inner) {
        add_entries(t, {bit0, bit1, inner}, Rational(1));
        add_entries(t, {bit1, bit0, inner}, Rational(1));
    };
    {
        auto& t = term("wind-front", {{S::RedFace, A::Z, 0, 0, 0},
                                      {S::RedFace, A::Z, 1, 1, 0},
                                      {S::RedFace, A::X, 1, 1, 0}});
        plain_pair(t, any);
        detail::finish(t);
    }
    {
        auto& t = term("wind-back", {{S::RedFace, A::Z, 1, 0, 0},
                                     {S::RedFace, A::Z, 0, 1, 0},
                                     {S::RedFace, A::X, 1, 1, -1}});
        plain_pair(t, any);
        detail::finish(t);
    }
    {
        auto& t = term("wind-left", {{S::RedFace, A::X, 0, 0, 0},
                                     {S::RedFace, A::X, 0, 1, -1},
                                     {S::RedFace, A::Z, 0, 1, -1}});
        plain_pair(t, any);
        detail::finish(t);
    }
    {
        // Right face: inner spin Rx -> copy; inner spin a bit (top row) -> flip.
        auto& t = term("wind-right", {{S::RedFace, A::X, 0, 0, 0},
                                      {S::RedFace, A::X, 0, 1, 1},
                                      {S::RedFace, A::Z, -1, 1, 1}});
        plain_pair(t, rx);
        add_entries(t, {bit0, bit0, bits}, Rational(1));
        add_entries(t, {bit1, bit1, bits}, Rational(1));
        detail::finish(t);
    }

    // Corner crossings. Site order: L (lower row), U (upper row, next slot),
    // then the context spins pinning the cube edge.
    {
        // front-right: flips when the source row is the top layer.
        auto& t = term("wind-cross-fr", find_stencil("corner winding").refs);
        add_entries(t, {bit0, bit1, bits, rx}, Rational(1));
        add_entries(t, {bit1, bit0, bits, rx}, Rational(1));
        add_entries(t, {bit0, bit0, bits, bits}, Rational(1));
        add_entries(t, {bit1, bit1, bits, bits}, Rational(1));
        detail::finish(t);
    }
    {
        auto& t = term("wind-cross-rb", {{S::RedFace, A::X, 0, 0, 0},
                                         {S::RedFace, A::Z, -1, 1, 1},
                                         {S::RedFace, A::Z, -1, 0, 1}});
        plain_pair(t, bits);
        detail::finish(t);
    }
    {
        auto& t = term("wind-cross-bl", {{S::RedFace, A::Z, 0, 0, 0},
                                         {S::RedFace, A::X, 0, 1, -1},
                                         {S::RedFace, A::X, 0, 0, -1}});
        plain_pair(t, bits);
        detail::finish(t);
    }
    {
        auto& t = term("wind-cross-fl", {{S::RedFace, A::X, 0, 0, 0},
                                         {S::RedFace, A::Z, 0, 1, 0},
                                         {S::RedFace, A::Z, 0, 0, 0}});
        plain_pair(t, bits);
        detail::finish(t);
    }

    // -- green program pairs --------------------------------------------------
    // Front column: green(y) = f(p_i, p_i+1) read from the red row below it.
    // Bang tuples pin the green to A (the erased bit is always a 1).
    {
        auto& t = term("green-f", {{S::GreenFace, A::Y, 0, 0, 0},
                                   {S::RedFace, A::X, 0, -1, 0},
                                   {S::RedFace, A::Z, 0, -1, 0},
                                   {S::RedFace, A::X, 1, -1, 0}});
        for (int pi = 0; pi < 2; ++pi)
            for (int pn = 0; pn < 2; ++pn) {
                const Green want = green_constraint(pi, pn);
                auto bs = [](int v) { return SymSet::of(v ? Red::Bit1 : Red::Bit0); };
                for (std::uint8_t g = 0; g < 4; ++g) {
                    if (g == std::uint8_t(want)) continue;
                    add_entries(t, {SymSet{{g}}, bs(pi), bs(pn), rx}, Rational(1));
                }
            }
        for (std::uint8_t g = 0; g < 4; ++g) {
            if (g == std::uint8_t(Green::A)) continue;
            add_entries(t, {SymSet{{g}}, bang, bit1, rx}, Rational(1));
            add_entries(t, {SymSet{{g}}, bit1, bang, rx}, Rational(1));
        }
        detail::finish(t);
    }

    // -- gate marker ----------------------------------------------------------
    // A Bang costs 1 unless it sits at a computation-corner slot whose partner
    // and upstream witness are 1; the guard re-pins the value the wind chain
    // loses through the erased bit.
    for (const auto& o : orients) {
        auto& t = term(std::string("bang-penalty-") + o.tag, {{S::RedFace, o.self, 0, 0, 0}});
        add_entries(t, {bang}, Rational(1));
        detail::finish(t);
    }
    {
        auto& t = term("bang-bonus-left", {{S::RedFace, A::X, 0, 0, 0},
                                           {S::RedFace, A::Z, 0, 0, 0},
                                           {S::RedFace, A::Z, 0, 1, 0}});
        add_entries(t, {bang, bit1, bit1}, Rational(-1));
        detail::finish(t);
    }
    {
        auto& t = term("bang-bonus-front", {{S::RedFace, A::Z, 0, 0, 0},
                                            {S::RedFace, A::X, 0, 0, 0},
                                            {S::RedFace, A::Z, 1, 1, 0}});
        add_entries(t, {bang, bit1, bit1}, Rational(-1));
        detail::finish(t);
    }
    {
        auto& t = term("bang-below-guard-left", {{S::RedFace, A::X, 0, 0, 0},
                                                 {S::RedFace, A::X, 0, -1, 1}});
        add_entries(t, {bang, bit0}, Rational(1));
        detail::finish(t);
    }
    {
        auto& t = term("bang-below-guard-front", {{S::RedFace, A::Z, 0, 0, 0},
                                                  {S::RedFace, A::X, 0, -1, 0}});
        add_entries(t, {bang, bit0}, Rational(1));
        detail::finish(t);
    }

    return cat;
}

/// The cancelling output bonus/penalty pair of the input/output section.
/// Not part of the ground-energy normalization: the net effect is a |0><0|
/// penalty on the corner-column black of the bottom layer.
inline std::vector<LocalTerm> output_penalty_terms() {
    using S = Sublattice;
    using A = Axis;
    using detail::SymSet;
    std::vector<LocalTerm> out;
    {
        LocalTerm t{"out-penalty",
                    {{S::BlackVertex, A::Y, 0, 0, 0},
                     {S::RedFace, A::X, 0, 0, 0},
                     {S::RedFace, A::Z, 0, 0, 0},
                     {S::RedFace, A::Z, 0, 0, 1}},
                    {},
                    Rational(1)};
        detail::add_entries(t, {SymSet{{std::uint8_t(Black::Q0)}}, SymSet::bits(), SymSet::bits(),
                                SymSet::of(Red::Rx)},
                            Rational(1));
        detail::finish(t);
        out.push_back(t);
    }
    {
        LocalTerm t{"out-bonus",
                    {{S::BlackVertex, A::Y, 0, 0, 0},
                     {S::RedFace, A::X, 0, -1, 0},
                     {S::RedFace, A::Z, 0, -1, 0},
                     {S::RedFace, A::Z, 0, 0, 1}},
                    {},
                    Rational(1)};
        detail::add_entries(t, {SymSet{{std::uint8_t(Black::Q0)}}, SymSet::bits(), SymSet::bits(),
                                SymSet::of(Red::Rx)},
                            Rational(-1));
        detail::finish(t);
        out.push_back(t);
    }
    return out;
}

/// Penalties on adjacent head symbols (two arrows on neighbouring black
/// vertices, or an arrow next to a gate marker).
inline std::vector<LocalTerm> heads_penalty_terms() {
    using S = Sublattice;
    using A = Axis;
    using detail::SymSet;
    std::vector<LocalTerm> out;
    const SymSet arrow{{std::uint8_t(Black::ArrowR), std::uint8_t(Black::ArrowL)}};
    const SymSet bang = SymSet::of(Red::Bang);
    const SiteRef blk{S::BlackVertex, A::Y, 0, 0, 0};
    int n = 0;
    for (const SiteRef other : {SiteRef{S::BlackVertex, A::Y, 1, 0, 0},
                                SiteRef{S::BlackVertex, A::Y, 0, 1, 0},
                                SiteRef{S::BlackVertex, A::Y, 0, 0, 1}}) {
        LocalTerm t{"heads-bb-" + std::to_string(n++), {blk, other}, {}, Rational(1)};
        detail::add_entries(t, {arrow, arrow}, Rational(1));
        detail::finish(t);
        out.push_back(t);
    }
    n = 0;
    for (const SiteRef red : {SiteRef{S::RedFace, A::X, 0, 0, 0}, SiteRef{S::RedFace, A::X, 0, -1, 0},
                              SiteRef{S::RedFace, A::X, 0, 0, -1}, SiteRef{S::RedFace, A::X, 0, -1, -1},
                              SiteRef{S::RedFace, A::Z, 0, 0, 0}, SiteRef{S::RedFace, A::Z, -1, 0, 0},
                              SiteRef{S::RedFace, A::Z, 0, -1, 0}, SiteRef{S::RedFace, A::Z, -1, -1, 0}}) {
        LocalTerm t{"heads-br-" + std::to_string(n++), {blk, red}, {}, Rational(1)};
        detail::add_entries(t, {arrow, bang}, Rational(1));
        detail::finish(t);
        out.push_back(t);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Term instantiation and energy evaluation

struct TermInstance {
    const LocalTerm* term;
    std::array<std::uint32_t, 4> sites;  // site-table indices
    std::uint8_t arity;
};

/// Anchor every term at every lattice offset where its whole stencil fits.
inline std::vector<TermInstance> instantiate_terms(const std::vector<LocalTerm>& terms,
                                                   const SiteTable& table) {
    const Dims& d = table.dims();
    std::vector<TermInstance> out;
    for (const auto& t : terms) {
        int xlo = 0, xhi = d.W, ylo = 0, yhi = d.H, zlo = 0, zhi = d.D;
        for (const auto& r : t.stencil) {
            int mx = d.W, my = d.H, mz = d.D;  // max cell per sublattice/axis
            if (r.sub == Sublattice::BlackVertex) {
            } else if (r.sub == Sublattice::RedFace && r.axis == Axis::X) {
                my = d.H - 1;
                mz = d.D - 1;
            } else if (r.sub == Sublattice::RedFace && r.axis == Axis::Z) {
                mx = d.W - 1;
                my = d.H - 1;
            } else {
                mx = d.W - 1;
                mz = d.D - 1;
            }
            xlo = std::max(xlo, -r.dx);
            xhi = std::min(xhi, mx - r.dx);
            ylo = std::max(ylo, -r.dy);
            yhi = std::min(yhi, my - r.dy);
            zlo = std::max(zlo, -r.dz);
            zhi = std::min(zhi, mz - r.dz);
        }
        for (int y = ylo; y <= yhi; ++y)
            for (int z = zlo; z <= zhi; ++z)
                for (int x = xlo; x <= xhi; ++x) {
                    TermInstance ti{&t, {}, std::uint8_t(t.stencil.size())};
                    for (std::size_t i = 0; i < t.stencil.size(); ++i)
                        ti.sites[i] = std::uint32_t(table.index(t.stencil[i].at(x, y, z)));
                    out.push_back(ti);
                }
    }
    return out;
}

inline Rational instance_energy(const TermInstance& ti, const std::vector<std::uint8_t>& vals) {
    std::uint16_t k = 0;
    for (std::uint8_t i = 0; i < ti.arity; ++i) k |= std::uint16_t(vals[ti.sites[i]] & 3) << (2 * i);
    return ti.term->weight(k);
}

/// Exact energy: sum over all translates of all catalog terms plus the shift.
/// Black placeholders never contribute (no catalog term touches blacks).
inline Rational static_energy(const Configuration& cfg, const TermCatalog& cat) {
    const auto insts = instantiate_terms(cat.terms, cfg.sites());
    Rational e(0);
    for (const auto& ti : insts) e += ti.term->coefficient * instance_energy(ti, cfg.values());
    return e + cat.energy_shift(cfg.dims());
}

// ---------------------------------------------------------------------------
// Perimeter coordinates shared by the winding and the dynamics

/// Black boundary columns of one level, walked in program order: corner
/// (0,0), front face x+, right face z+, back face x-, left face z-.
inline int perimeter_len(const Dims& d) { return 2 * (d.W + d.D); }

inline Site black_column(const Dims& d, int k, int y) {
    const int P = perimeter_len(d);
    k = ((k % P) + P) % P;
    if (k <= d.W) return Site::black(k, y, 0);
    if (k <= d.W + d.D) return Site::black(d.W, y, k - d.W);
    if (k <= 2 * d.W + d.D) return Site::black(2 * d.W + d.D - k, y, d.D);
    return Site::black(0, y, 2 * (d.W + d.D) - k);
}

/// Red side spin between black columns k and k+1, at red row y (height y+.5).
inline Site side_slot(const Dims& d, int j, int y) {
    const int P = perimeter_len(d);
    j = ((j % P) + P) % P;
    if (j < d.W) return Site::redZ(j, y, 0);
    if (j < d.W + d.D) return Site::redX(d.W, y, j - d.W);
    if (j < 2 * d.W + d.D) return Site::redZ(2 * d.W + d.D - 1 - j, y, d.D);
    return Site::redX(0, y, P - 1 - j);
}

inline bool slot_on_right_face(const Dims& d, int j) {
    const int P = perimeter_len(d);
    j = ((j % P) + P) % P;
    return j >= d.W && j < d.W + d.D;
}

// ---------------------------------------------------------------------------
// Ground-state solver

struct DegenerateInstance : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Arithmetic counter oracle: the W-bit value the top-face tiling exposes at
/// the front edge, counted row by row from the all-zero back edge.
inline std::string counter_oracle_string(int W, int D) {
    std::vector<bool> n(W, false);
    for (int step = 0; step < D; ++step) {
        bool carry = true;  // injected at the right edge each row
        for (int x = W - 1; x >= 0 && carry; --x) {
            bool s = n[x] ^ carry;
            carry = n[x] && carry;
            n[x] = s;
        }
    }
    std::string out(W, '0');
    for (int x = 0; x < W; ++x) out[x] = n[x] ? '1' : '0';
    return out;
}

/// Feed-forward evaluation of the top-face tiling: bit edges on the z-plane
/// boundaries, carry edges on the x-plane boundaries; back edge 0, right
/// edge 1.
struct CounterGrid {
    std::vector<std::vector<bool>> bits;     // [x][k], k = 0..D
    std::vector<std::vector<bool>> carries;  // [x][z], x = 0..W
};

inline CounterGrid counter_grid(int W, int D) {
    CounterGrid g;
    g.bits.assign(W, std::vector<bool>(D + 1, false));
    g.carries.assign(W + 1, std::vector<bool>(D, false));
    for (int z = 0; z < D; ++z) g.carries[W][z] = true;
    for (int z = D - 1; z >= 0; --z)
        for (int x = W - 1; x >= 0; --x) {
            const bool a = g.bits[x][z + 1];
            const bool b = g.carries[x + 1][z];
            g.bits[x][z] = a ^ b;
            g.carries[x][z] = a && b;
        }
    return g;
}

/// Deterministic fill of the classical ground configuration. Black spins are
/// left in the unset placeholder.
inline Configuration solve_static_ground(const Dims& d) {
    if (d.W < 2 || d.H < 2 || d.D < 2)
        throw DegenerateInstance("dims too small to host the seed patterns (need W,H,D >= 2)");

    Configuration cfg(d);
    // Everything red starts as Rx, greens as Zero, blacks unset.
    for (const auto& s : cfg.sites().sites()) {
        if (s.sub == Sublattice::BlackVertex)
            cfg.set_raw(s, kUnsetBlack);
        else if (s.sub == Sublattice::RedFace)
            cfg.set(s, Red::Rx);
        else
            cfg.set(s, Green::Zero);
    }

    const CounterGrid grid = counter_grid(d.W, d.D);
    const int top = d.H - 1;
    for (int x = 0; x < d.W; ++x)
        for (int z = 0; z <= d.D; ++z)
            cfg.set(Site::redZ(x, top, z), grid.bits[x][z] ? Red::Bit1 : Red::Bit0);
    for (int x = 0; x <= d.W; ++x)
        for (int z = 0; z < d.D; ++z)
            cfg.set(Site::redX(x, top, z), grid.carries[x][z] ? Red::Bit1 : Red::Bit0);

    // Wind the side bits down: bit(j, y) = bit(j+1, y+1), flipped where the
    // source is the top row of the right face.
    const int P = perimeter_len(d);
    for (int y = top - 1; y >= 0; --y)
        for (int j = 0; j < P; ++j) {
            const Site src = side_slot(d, j + 1, y + 1);
            bool v = cfg.red(src) == Red::Bit1;
            if (y + 1 == top && slot_on_right_face(d, (j + 1) % P)) v = !v;
            cfg.set(side_slot(d, j, y), v ? Red::Bit1 : Red::Bit0);
        }

    // Front-column greens: f of the program pair on the red row below.
    for (int y = 1; y <= d.H - 1; ++y) {
        const bool pi = cfg.red(side_slot(d, P - 1, y - 1)) == Red::Bit1;
        const bool pn = cfg.red(side_slot(d, 0, y - 1)) == Red::Bit1;
        cfg.set(Site::green(0, y, 0), green_constraint(pi, pn));
    }
    return cfg;
}

/// The W-bit string read along the top front edge (MSB at x = 0). Computed
/// from the tiling directly so degenerate heights and depths still count;
/// equal to the edge of solve_static_ground's output whenever that exists.
inline std::string counter_front_string(const Dims& d) {
    const CounterGrid grid = counter_grid(d.W, d.D);
    std::string out(d.W, '0');
    for (int x = 0; x < d.W; ++x) out[x] = grid.bits[x][0] ? '1' : '0';
    return out;
}

// ---------------------------------------------------------------------------
// Wound-program extraction

struct StaticViolation : std::runtime_error {
    std::string term_name;
    StaticViolation(std::string term, const std::string& what)
        : std::runtime_error(what), term_name(std::move(term)) {}
};

/// Locates a static violation: a red or green site whose symbol is locally
/// suboptimal (rewriting it alone would lower the energy), or any nonzero
/// total. Returns the name of a term that witnesses the defect.
inline std::optional<std::string> find_violated_term(const Configuration& cfg,
                                                     const TermCatalog& cat) {
    const auto insts = instantiate_terms(cat.terms, cfg.sites());
    std::vector<std::vector<std::size_t>> touching(cfg.sites().size());
    for (std::size_t i = 0; i < insts.size(); ++i)
        for (std::uint8_t k = 0; k < insts[i].arity; ++k) touching[insts[i].sites[k]].push_back(i);

    std::vector<std::uint8_t> vals = cfg.values();
    for (std::size_t s = 0; s < cfg.sites().size(); ++s) {
        if (cfg.sites().site(s).sub == Sublattice::BlackVertex) continue;
        const std::uint8_t actual = vals[s];
        auto local = [&](std::uint8_t v) {
            vals[s] = v;
            Rational e(0);
            for (std::size_t i : touching[s])
                e += insts[i].term->coefficient * instance_energy(insts[i], vals);
            return e;
        };
        const Rational have = local(actual);
        for (std::uint8_t v = 0; v < 4; ++v) {
            if (v == actual) continue;
            if (local(v) < have) {
                // name a touching term whose energy strictly drops
                for (std::size_t i : touching[s]) {
                    vals[s] = actual;
                    const Rational before = instance_energy(insts[i], vals);
                    vals[s] = v;
                    const Rational after = instance_energy(insts[i], vals);
                    if (after < before) {
                        vals[s] = actual;
                        return insts[i].term->name;
                    }
                }
            }
        }
        vals[s] = actual;
    }
    Rational total(0);
    for (const auto& ti : insts) total += ti.term->coefficient * instance_energy(ti, vals);
    total += cat.energy_shift(cfg.dims());
    if (total != Rational(0)) return std::string("nonzero-static-energy");
    return std::nullopt;
}

/// Per-row side-loop strings, top red row first. Errors if the configuration
/// violates a static constraint.
inline std::vector<std::string> wound_program_at_edge(const Configuration& cfg,
                                                      const TermCatalog& cat) {
    if (auto bad = find_violated_term(cfg, cat))
        throw StaticViolation(*bad, "configuration violates static term '" + *bad + "'");
    const Dims& d = cfg.dims();
    const int P = perimeter_len(d);
    std::vector<std::string> rows;
    for (int y = d.H - 1; y >= 0; --y) {
        std::string s(P, '0');
        for (int j = 0; j < P; ++j) s[j] = cfg.red(side_slot(d, j, y)) == Red::Bit1 ? '1' : '0';
        rows.push_back(std::move(s));
    }
    return rows;
}

/// The effective cyclic program the computation edge reads: the side loop one
/// row below the top, rotated back one winding step.
inline std::string effective_program(const Configuration& cfg) {
    const Dims& d = cfg.dims();
    const int P = perimeter_len(d);
    std::string s(P, '0');
    for (int j = 0; j < P; ++j)
        s[j] = cfg.red(side_slot(d, (j - 1 + P) % P, d.H - 2)) == Red::Bit1 ? '1' : '0';
    return s;
}

}  // namespace fcch
