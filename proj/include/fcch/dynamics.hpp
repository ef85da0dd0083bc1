#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <fcch/program.hpp>
#include <fcch/statics.hpp>

namespace fcch {

// ---------------------------------------------------------------------------
// Static background of a run

/// The classical scaffold the heads move through: dims plus the effective
/// cyclic side program. The winding places program[(j + (H-1-y)) % P] at side
/// slot j of red row y (rows below the top). Greens on the front column
/// follow the pair on the row below them.
struct StaticBackground {
    Dims dims;
    std::string program;  // length P = 2(W+D)

    StaticBackground(const Dims& d, std::string prog) : dims(d), program(std::move(prog)) {
        if (d.W < 2 || d.H < 2 || d.D < 2)
            throw DegenerateInstance("background needs W,H,D >= 2");
        if (int(program.size()) != perimeter_len(d))
            throw std::invalid_argument("program length must equal the side perimeter 2(W+D)");
        for (char c : program)
            if (c != '0' && c != '1') throw std::invalid_argument("program must be binary");
    }

    int P() const { return perimeter_len(dims); }

    bool bit(int j, int row) const {  // red row index, row <= H-2
        const int p = P();
        const int idx = (((j + (dims.H - 1 - row)) % p) + p) % p;
        return program[idx] == '1';
    }

    /// Pair consumed by the descent from level y (reads red row y-1).
    std::pair<bool, bool> pair_at_descent(int y) const {
        return {bit(P() - 1, y - 1), bit(0, y - 1)};
    }

    Green green_at(int y) const {  // front-column green at height y, 1..H-1
        const auto [pi, pn] = pair_at_descent(y);
        return green_constraint(pi, pn);
    }
};

/// Background carrying the true counter-produced ground of these dims.
inline StaticBackground background_from_ground(const Dims& d) {
    return StaticBackground(d, effective_program(solve_static_ground(d)));
}

// ---------------------------------------------------------------------------
// Clock configurations

struct ArrowState {
    int k = 0;  // perimeter column (last face column for interior heads)
    int y = 0;
    Dir dir = Dir::L;
    bool interior = false;  // parked in the bulk by the dead-end branch
    Site site;
    bool operator==(const ArrowState&) const = default;
};

struct BangState {
    int y = 0;          // descent level of the pending gate
    Dir dir = Dir::L;   // incoming direction (G for L arrivals, Gdag for R)
    bool operator==(const BangState&) const = default;
};

/// Clock part of a basis state: the static background identity, every head
/// symbol, the parked markers of gate intermediates, and the map from logical
/// qubit slots to black sites.
struct ClockConfig {
    const StaticBackground* bg = nullptr;
    std::vector<ArrowState> arrows;  // kept sorted by site
    std::vector<BangState> bangs;    // kept sorted by (y, dir)
    std::vector<Site> parked;        // kept sorted; classical |1> placeholders
    std::vector<Site> slots;         // logical qubit slot -> current site

    bool operator==(const ClockConfig& o) const {
        return bg == o.bg && arrows == o.arrows && bangs == o.bangs && parked == o.parked &&
               slots == o.slots;
    }

    std::size_t hash() const {
        std::size_t h = std::hash<const void*>()(bg);
        auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
        auto mixsite = [&](const Site& s) {
            mix(std::size_t(s.x * 73856093) ^ std::size_t(s.y * 19349663) ^
                std::size_t(s.z * 83492791));
        };
        for (const auto& a : arrows) {
            mixsite(a.site);
            mix(std::size_t(a.dir) + 2 * std::size_t(a.interior));
        }
        for (const auto& b : bangs) mix(std::size_t(b.y * 7 + int(b.dir)));
        for (const auto& s : parked) mixsite(s);
        for (const auto& s : slots) mixsite(s);
        return h;
    }

    void canonicalize() {
        auto site_lt = [](const Site& a, const Site& b) {
            return std::tie(a.x, a.y, a.z, a.sub, a.axis) < std::tie(b.x, b.y, b.z, b.sub, b.axis);
        };
        std::sort(arrows.begin(), arrows.end(),
                  [&](const ArrowState& a, const ArrowState& b) { return site_lt(a.site, b.site); });
        std::sort(bangs.begin(), bangs.end(), [](const BangState& a, const BangState& b) {
            return std::tie(a.y, a.dir) < std::tie(b.y, b.dir);
        });
        std::sort(parked.begin(), parked.end(), site_lt);
    }

    std::optional<int> slot_at(const Site& s) const {
        for (std::size_t i = 0; i < slots.size(); ++i)
            if (slots[i] == s) return int(i);
        return std::nullopt;
    }
    bool parked_at(const Site& s) const {
        return std::find(parked.begin(), parked.end(), s) != parked.end();
    }
    std::optional<std::size_t> arrow_at(const Site& s) const {
        for (std::size_t i = 0; i < arrows.size(); ++i)
            if (arrows[i].site == s) return i;
        return std::nullopt;
    }
    bool head_free(const Site& s) const { return !arrow_at(s).has_value() && !parked_at(s); }

    /// Canonical start: one left-moving head at the corner column of the top
    /// working row, tracked qubits on the rest of that row.
    static ClockConfig canonical_start(const StaticBackground& bg) {
        ClockConfig c;
        c.bg = &bg;
        const int y0 = bg.dims.H - 1;
        c.arrows.push_back({0, y0, Dir::L, false, black_column(bg.dims, 0, y0)});
        for (int j = 1; j < bg.P(); ++j) c.slots.push_back(black_column(bg.dims, j, y0));
        c.canonicalize();
        return c;
    }

    /// Seed with several arrows on the top working row (multi-head sectors).
    static ClockConfig multi_head_start(const StaticBackground& bg,
                                        const std::vector<std::pair<int, Dir>>& heads) {
        ClockConfig c;
        c.bg = &bg;
        const int y0 = bg.dims.H - 1;
        std::vector<bool> used(bg.P(), false);
        for (auto [k, d] : heads) {
            if (k < 0 || k >= bg.P() || used[k]) throw std::invalid_argument("bad head seed");
            used[k] = true;
            c.arrows.push_back({k, y0, d, false, black_column(bg.dims, k, y0)});
        }
        for (int j = 0; j < bg.P(); ++j)
            if (!used[j]) c.slots.push_back(black_column(bg.dims, j, y0));
        c.canonicalize();
        return c;
    }
};

inline int head_count(const ClockConfig& c) { return int(c.arrows.size() + c.bangs.size()); }

// ---------------------------------------------------------------------------
// Transition rule surface

enum class RuleKind : std::uint8_t { Move, CompTurn, CompKeep, CompGate1, CompGate2, BulkBranch };

inline const char* rule_name(RuleKind k) {
    switch (k) {
        case RuleKind::Move: return "move";
        case RuleKind::CompTurn: return "comp-turn";
        case RuleKind::CompKeep: return "comp-keep";
        case RuleKind::CompGate1: return "comp-gate-mark";
        case RuleKind::CompGate2: return "comp-gate-apply";
        case RuleKind::BulkBranch: return "bulk-branch";
    }
    return "?";
}

namespace dyndetail {

inline int walk_step(Dir d) { return d == Dir::L ? 1 : -1; }

inline int wrap(int k, int P) { return ((k % P) + P) % P; }

inline bool is_edge_column(const Dims& d, int k) {
    k = wrap(k, perimeter_len(d));
    return k == 0 || k == d.W || k == d.W + d.D || k == 2 * d.W + d.D;
}

enum class Face : std::uint8_t { Front, Right, Back, Left };

inline Face face_of_column(const Dims& d, int k) {
    k = wrap(k, perimeter_len(d));
    if (k <= d.W) return Face::Front;
    if (k <= d.W + d.D) return Face::Right;
    if (k <= 2 * d.W + d.D) return Face::Back;
    return Face::Left;
}

/// Interior black one unit inward from a non-edge perimeter column.
inline Site inward_black(const Dims& d, int k, int y) {
    const Site c = black_column(d, k, y);
    switch (face_of_column(d, k)) {
        case Face::Front: return Site::black(c.x, y, 1);
        case Face::Right: return Site::black(d.W - 1, y, c.z);
        case Face::Back: return Site::black(c.x, y, d.D - 1);
        case Face::Left: return Site::black(1, y, c.z);
    }
    return c;
}

/// Stored arrow type of a logical direction on a given face: the symbol flips
/// on the right and back faces so qubits keep cycling one way around the ring.
inline Black display_symbol(Dir logical, Face f) {
    const bool flip_face = f == Face::Right || f == Face::Back;
    const bool right_moving = (logical == Dir::R) != flip_face;
    return right_moving ? Black::ArrowR : Black::ArrowL;
}

}  // namespace dyndetail

/// One translation-invariant rule family: name, direction, unitary tag, and
/// the sites an anchored instance touches (for the locality audit).
struct TransitionRule {
    RuleKind kind;
    Dir dir;
    std::string name;
    EdgeGate tag = EdgeGate::None;
    std::function<std::vector<Site>(const StaticBackground&, int k, int y)> footprint;
};

/// The finite dynamic rule set: moves (faces and plain cube edges), the three
/// computation-edge actions with the two-step gate protocol, and the dead-end
/// bulk branch, each for both travel directions.
inline std::vector<TransitionRule> build_transition_rules() {
    using namespace dyndetail;
    std::vector<TransitionRule> out;
    for (Dir d : {Dir::L, Dir::R}) {
        const int w = walk_step(d);
        const std::string ds = d == Dir::L ? "-l" : "-r";
        out.push_back(
            {RuleKind::Move, d, "move" + ds, EdgeGate::None,
             [w](const StaticBackground& bg, int k, int y) -> std::vector<Site> {
                 const int P = bg.P();
                 if (y < 1 || wrap(k + w, P) == 0) return {};
                 const Dims& dm = bg.dims;
                 const bool corner = is_edge_column(dm, wrap(k + w, P));
                 const int jctx = corner ? wrap(std::min(k + w, k + 2 * w), P)
                                         : wrap(std::min(k, k + w), P);
                 return {black_column(dm, k, y), black_column(dm, k + w, y),
                         black_column(dm, k + 2 * w, y - 1), side_slot(dm, jctx, y - 1)};
             }});
        out.push_back({RuleKind::CompTurn, d, "comp-turn" + ds, EdgeGate::None,
                       [w](const StaticBackground& bg, int k, int y) -> std::vector<Site> {
                           const int P = bg.P();
                           if (y < 1 || wrap(k + w, P) != 0) return {};
                           const Dims& dm = bg.dims;
                           return {black_column(dm, k, y), black_column(dm, 0, y - 1),
                                   black_column(dm, w, y - 1), Site::green(0, y, 0)};
                       }});
        out.push_back({RuleKind::CompKeep, d, "comp-keep" + ds, EdgeGate::None,
                       out.back().footprint});
        out.push_back({RuleKind::CompGate1, d, "comp-gate-mark" + ds, EdgeGate::None,
                       [w, d](const StaticBackground& bg, int k, int y) -> std::vector<Site> {
                           const int P = bg.P();
                           if (y < 1 || wrap(k + w, P) != 0) return {};
                           const Dims& dm = bg.dims;
                           const int bang_slot = d == Dir::L ? 0 : P - 1;
                           return {black_column(dm, k, y), black_column(dm, w, y - 1),
                                   side_slot(dm, bang_slot, y - 1), Site::green(0, y, 0)};
                       }});
        out.push_back({RuleKind::CompGate2, d, "comp-gate-apply" + ds,
                       d == Dir::L ? EdgeGate::G : EdgeGate::Gdag,
                       [w, d](const StaticBackground& bg, int k, int y) -> std::vector<Site> {
                           (void)k;
                           const int P = bg.P();
                           if (y < 1) return {};
                           const Dims& dm = bg.dims;
                           const int bang_slot = d == Dir::L ? 0 : P - 1;
                           return {black_column(dm, -w, y - 1), black_column(dm, 0, y - 1),
                                   black_column(dm, w, y - 1), side_slot(dm, bang_slot, y - 1)};
                       }});
        out.push_back({RuleKind::BulkBranch, d, "bulk-branch" + ds, EdgeGate::None,
                       [w](const StaticBackground& bg, int k, int y) -> std::vector<Site> {
                           const int P = bg.P();
                           const int nxt = wrap(k + w, P);
                           if (y < 1 || is_edge_column(bg.dims, nxt)) return {};
                           const Dims& dm = bg.dims;
                           const int jctx = wrap(std::min(k, k + w), P);
                           return {black_column(dm, k, y), inward_black(dm, nxt, y - 1),
                                   side_slot(dm, jctx, y - 1)};
                       }});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rule application

struct Successor {
    ClockConfig config;
    RuleKind rule = RuleKind::Move;
    Dir rule_dir = Dir::L;
    EdgeGate gate = EdgeGate::None;  // forward-sense gate of the transition
    int gate_slot_a = -1;            // first tensor factor
    int gate_slot_b = -1;
};

namespace dyndetail {

inline void move_content(ClockConfig& c, const Site& from, const Site& to) {
    if (auto q = c.slot_at(from)) {
        c.slots[*q] = to;
        return;
    }
    for (auto& p : c.parked)
        if (p == from) {
            p = to;
            return;
        }
    // junk carriers relocate silently
}

/// Forward successors contributed by one arrow.
inline void arrow_forward(const ClockConfig& c, std::size_t ai, std::vector<Successor>& out) {
    const ArrowState a = c.arrows[ai];
    const StaticBackground& bg = *c.bg;
    const Dims& dm = bg.dims;
    const int P = bg.P();
    if (a.interior) return;  // dead end: only the reverse transition applies
    if (a.y < 1) return;     // bottom layer: the program terminates
    const int w = walk_step(a.dir);
    const int nxt = wrap(a.k + w, P);

    if (nxt != 0) {
        const Site sB = black_column(dm, nxt, a.y);
        const Site sC = black_column(dm, a.k + 2 * w, a.y - 1);
        if (c.head_free(sB) && c.head_free(sC)) {
            Successor s{c, RuleKind::Move, a.dir};
            move_content(s.config, sC, a.site);  // pulled up behind the head
            move_content(s.config, sB, sC);      // pushed down the diagonal
            s.config.arrows[ai].k = nxt;
            s.config.arrows[ai].site = sB;
            s.config.canonicalize();
            out.push_back(std::move(s));
        }
        if (!is_edge_column(dm, nxt)) {
            const Site sI = inward_black(dm, nxt, a.y - 1);
            if (c.head_free(sI)) {
                Successor s{c, RuleKind::BulkBranch, a.dir};
                move_content(s.config, sI, a.site);
                s.config.arrows[ai].k = nxt;
                s.config.arrows[ai].y = a.y - 1;
                s.config.arrows[ai].interior = true;
                s.config.arrows[ai].site = sI;
                s.config.canonicalize();
                out.push_back(std::move(s));
            }
        }
        return;
    }

    // the computation corner
    const Green g = bg.green_at(a.y);
    const Site sB = black_column(dm, 0, a.y - 1);
    const Site sU = black_column(dm, w, a.y - 1);
    if (!c.head_free(sB) || !c.head_free(sU)) return;
    if (g == Green::B || g == Green::C) {
        Successor s{c, g == Green::B ? RuleKind::CompTurn : RuleKind::CompKeep, a.dir};
        move_content(s.config, sU, a.site);  // pulled up behind the head
        move_content(s.config, sB, sU);      // corner qubit moves on
        s.config.arrows[ai] = {0, a.y - 1, g == Green::B ? flip(a.dir) : a.dir, false, sB};
        s.config.canonicalize();
        out.push_back(std::move(s));
    } else if (g == Green::A) {
        // step 1: pull the far qubit up, park a classical 1, raise the marker
        Successor s{c, RuleKind::CompGate1, a.dir};
        move_content(s.config, sU, a.site);
        s.config.arrows.erase(s.config.arrows.begin() + ai);
        s.config.bangs.push_back({a.y, a.dir});
        s.config.parked.push_back(sU);
        s.config.canonicalize();
        out.push_back(std::move(s));
    }
}

/// Forward successor completing a pending gate.
inline void bang_forward(const ClockConfig& c, std::size_t bi, std::vector<Successor>& out) {
    const BangState b = c.bangs[bi];
    const StaticBackground& bg = *c.bg;
    const Dims& dm = bg.dims;
    const int w = walk_step(b.dir);
    const Site sA = black_column(dm, -w, b.y - 1);  // gated side qubit, stays put
    const Site sB = black_column(dm, 0, b.y - 1);   // gated corner qubit, moves on
    const Site sP = black_column(dm, w, b.y - 1);   // parked site it moves to
    if (!c.parked_at(sP) || !c.head_free(sA) || !c.head_free(sB)) return;

    Successor s{c, RuleKind::CompGate2, b.dir};
    s.gate = b.dir == Dir::L ? EdgeGate::G : EdgeGate::Gdag;
    s.config.parked.erase(
        std::find(s.config.parked.begin(), s.config.parked.end(), sP));
    move_content(s.config, sB, sP);
    s.config.bangs.erase(s.config.bangs.begin() + bi);
    s.config.arrows.push_back({0, b.y - 1, b.dir, false, sB});
    s.config.canonicalize();
    // tensor order: first factor at perimeter slot 1, second at slot P-1,
    // independent of the arrival direction
    s.gate_slot_a = s.config.slot_at(black_column(dm, 1, b.y - 1)).value_or(-1);
    s.gate_slot_b = s.config.slot_at(black_column(dm, -1, b.y - 1)).value_or(-1);
    out.push_back(std::move(s));
}

}  // namespace dyndetail

/// All forward transitions of a configuration.
inline std::vector<Successor> apply_rules(const ClockConfig& c) {
    if (!c.bg) throw std::invalid_argument("apply_rules: configuration without background");
    std::vector<Successor> out;
    for (std::size_t i = 0; i < c.arrows.size(); ++i) dyndetail::arrow_forward(c, i, out);
    for (std::size_t i = 0; i < c.bangs.size(); ++i) dyndetail::bang_forward(c, i, out);
    return out;
}

/// All predecessors. The reported rule metadata is in the forward sense
/// (predecessor -> c), so gates are tagged as the forward rule applies them.
inline std::vector<Successor> apply_rules_backward(const ClockConfig& c) {
    using namespace dyndetail;
    const StaticBackground& bg = *c.bg;
    const Dims& dm = bg.dims;
    const int P = bg.P();
    std::vector<Successor> out;

    for (std::size_t ai = 0; ai < c.arrows.size(); ++ai) {
        const ArrowState a = c.arrows[ai];
        if (a.interior) {
            // reverse of the bulk branch
            const int w = walk_step(a.dir);
            const int k = wrap(a.k - w, P);
            if (!is_edge_column(dm, a.k) && inward_black(dm, a.k, a.y) == a.site) {
                const Site from = black_column(dm, k, a.y + 1);
                if (a.y + 1 <= dm.H - 1 && c.head_free(from)) {
                    Successor s{c, RuleKind::BulkBranch, a.dir};
                    move_content(s.config, from, a.site);
                    s.config.arrows[ai] = {k, a.y + 1, a.dir, false, from};
                    s.config.canonicalize();
                    out.push_back(std::move(s));
                }
            }
            continue;
        }
        if (a.k == 0 && a.y + 1 <= dm.H - 1) {
            // arrived through a computation action from level y+1
            const Green g = bg.green_at(a.y + 1);
            if (g == Green::B || g == Green::C) {
                const Dir din = g == Green::B ? flip(a.dir) : a.dir;
                const int w = walk_step(din);
                const Site sFrom = black_column(dm, -w, a.y + 1);
                const Site sU = black_column(dm, w, a.y);
                if (c.head_free(sFrom) && c.head_free(sU)) {
                    Successor s{c, g == Green::B ? RuleKind::CompTurn : RuleKind::CompKeep, din};
                    move_content(s.config, sU, a.site);   // corner qubit back to the corner
                    move_content(s.config, sFrom, sU);    // pulled-up qubit back down
                    s.config.arrows[ai] = {wrap(-w, P), a.y + 1, din, false, sFrom};
                    s.config.canonicalize();
                    out.push_back(std::move(s));
                }
            } else if (g == Green::A) {
                // reverse of the gate completion; c is the post-gate state
                const Dir din = a.dir;
                const int w = walk_step(din);
                const Site sA = black_column(dm, -w, a.y);
                const Site sP = black_column(dm, w, a.y);
                if (c.head_free(sA) && c.head_free(sP)) {
                    Successor s{c, RuleKind::CompGate2, din};
                    s.gate = din == Dir::L ? EdgeGate::G : EdgeGate::Gdag;
                    s.gate_slot_a = c.slot_at(black_column(dm, 1, a.y)).value_or(-1);
                    s.gate_slot_b = c.slot_at(black_column(dm, -1, a.y)).value_or(-1);
                    move_content(s.config, sP, a.site);
                    s.config.parked.push_back(sP);
                    s.config.arrows.erase(s.config.arrows.begin() + ai);
                    s.config.bangs.push_back({a.y + 1, din});
                    s.config.canonicalize();
                    out.push_back(std::move(s));
                }
            }
        }
        if (a.k != 0 && a.y >= 1) {
            // reverse of a plain move
            const int w = walk_step(a.dir);
            const int prev = wrap(a.k - w, P);
            const Site sPrev = black_column(dm, prev, a.y);
            const Site sC = black_column(dm, a.k + w, a.y - 1);
            if (c.head_free(sPrev) && c.head_free(sC)) {
                Successor s{c, RuleKind::Move, a.dir};
                move_content(s.config, sC, a.site);   // pushed qubit back up
                move_content(s.config, sPrev, sC);    // pulled qubit back down
                s.config.arrows[ai] = {prev, a.y, a.dir, false, sPrev};
                s.config.canonicalize();
                out.push_back(std::move(s));
            }
        }
    }
    for (std::size_t bi = 0; bi < c.bangs.size(); ++bi) {
        // reverse of the gate marking
        const BangState b = c.bangs[bi];
        const int w = walk_step(b.dir);
        const Site sP = black_column(dm, w, b.y - 1);
        const Site sApproach = black_column(dm, -w, b.y);
        if (!c.parked_at(sP) || !c.head_free(sApproach)) continue;
        Successor s{c, RuleKind::CompGate1, b.dir};
        s.config.parked.erase(std::find(s.config.parked.begin(), s.config.parked.end(), sP));
        move_content(s.config, sApproach, sP);
        s.config.bangs.erase(s.config.bangs.begin() + bi);
        s.config.arrows.push_back({wrap(-w, P), b.y, b.dir, false, sApproach});
        s.config.canonicalize();
        out.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Unitary labeled graph

struct UlgEdge {
    int u = 0, v = 0;  // forward orientation: psi_v = U psi_u
    EdgeGate gate = EdgeGate::None;
    int slot_a = -1, slot_b = -1;
    RuleKind rule = RuleKind::Move;
};

struct Ulg {
    std::vector<ClockConfig> vertices;
    std::vector<UlgEdge> edges;
    std::vector<std::vector<int>> adj;  // vertex -> incident edge ids
    int initial = 0;
    int q = 0;                      // register qubits carried by the assembly
    std::vector<int> register_map;  // tracked slot -> register qubit, -1 dropped

    /// The end of the computation: no forward transition and no head parked
    /// in the bulk (dead-end leaves do not count).
    int terminal() const {
        for (std::size_t v = 0; v < vertices.size(); ++v) {
            bool has_fwd = false;
            for (int e : adj[v])
                if (edges[e].u == int(v)) has_fwd = true;
            if (has_fwd) continue;
            bool interior = false;
            for (const auto& a : vertices[v].arrows) interior |= a.interior;
            if (!interior) return int(v);
        }
        return -1;
    }

    int forward_degree(int v) const {
        int n = 0;
        for (int e : adj[v])
            if (edges[e].u == v) ++n;
        return n;
    }
};

struct UlgBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Breadth-first closure under forward and backward rules. Deterministic:
/// vertex ids follow the canonical discovery order.
inline Ulg explore_ulg(const ClockConfig& initial, long budget = 0) {
    const StaticBackground& bg = *initial.bg;
    if (budget <= 0) budget = 8L * bg.dims.H * (bg.dims.W + bg.dims.D) + 64;
    Ulg g;
    g.q = int(initial.slots.size());
    std::unordered_map<std::size_t, std::vector<int>> index;
    auto find_or_add = [&](const ClockConfig& c) -> std::pair<int, bool> {
        auto& bucket = index[c.hash()];
        for (int id : bucket)
            if (g.vertices[id] == c) return {id, false};
        if (long(g.vertices.size()) >= budget)
            throw UlgBudgetExceeded("ULG vertex budget exceeded; suspicious rule set");
        const int id = int(g.vertices.size());
        g.vertices.push_back(c);
        bucket.push_back(id);
        return {id, true};
    };

    find_or_add(initial);
    std::deque<int> queue{0};
    std::set<std::tuple<int, int, int, int, int, int>> seen;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        const ClockConfig cu = g.vertices[u];  // copy: the vector may grow
        auto record = [&](const UlgEdge& e) {
            const auto key = std::make_tuple(std::min(e.u, e.v), std::max(e.u, e.v), int(e.rule),
                                             int(e.gate), e.slot_a, e.slot_b);
            if (seen.insert(key).second) g.edges.push_back(e);
        };
        for (const auto& s : apply_rules(cu)) {
            auto [v, fresh] = find_or_add(s.config);
            record({u, v, s.gate, s.gate_slot_a, s.gate_slot_b, s.rule});
            if (fresh) queue.push_back(v);
        }
        for (const auto& s : apply_rules_backward(cu)) {
            auto [v, fresh] = find_or_add(s.config);
            record({v, u, s.gate, s.gate_slot_a, s.gate_slot_b, s.rule});
            if (fresh) queue.push_back(v);
        }
    }
    g.adj.assign(g.vertices.size(), {});
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        g.adj[g.edges[i].u].push_back(int(i));
        if (g.edges[i].v != g.edges[i].u) g.adj[g.edges[i].v].push_back(int(i));
    }
    g.register_map.resize(g.q);
    for (int i = 0; i < g.q; ++i) g.register_map[i] = i;
    return g;
}

/// Drops register qubits that no gate or penalty touches: identity tensor
/// factors of the restricted Hamiltonian. `keep` lists tracked slot ids; any
/// slot a gate edge acts on is kept regardless. Only valid on a freshly
/// explored graph (identity register map).
inline Ulg reduce_register(Ulg g, std::vector<int> keep) {
    for (std::size_t s = 0; s < g.register_map.size(); ++s)
        if (g.register_map[s] != int(s))
            throw std::invalid_argument("reduce_register: already reduced");
    for (const auto& e : g.edges) {
        if (e.gate == EdgeGate::None) continue;
        keep.push_back(e.slot_a);
        keep.push_back(e.slot_b);
    }
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    std::vector<int> map(g.register_map.size(), -1);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] < 0 || keep[i] >= int(g.register_map.size()))
            throw std::invalid_argument("reduce_register: slot out of range");
        map[keep[i]] = int(i);
    }
    for (auto& e : g.edges) {
        if (e.gate == EdgeGate::None) continue;
        e.slot_a = map[e.slot_a];
        e.slot_b = map[e.slot_b];
    }
    g.register_map = map;
    g.q = int(keep.size());
    return g;
}

// ---------------------------------------------------------------------------
// Register action of edges, frames, simplicity, history states

/// Applies an edge's unitary in the forward direction to a register vector.
inline Vec edge_apply(const UlgEdge& e, int q, const Vec& v, bool inverse = false) {
    if (e.gate == EdgeGate::None) return v;
    if (e.slot_a < 0 || e.slot_b < 0)
        throw std::runtime_error("gate edge acting on untracked qubits");
    Mat g = gate_G();
    if ((e.gate == EdgeGate::Gdag) != inverse) g = g.adjoint().eval();
    return detail::apply_two_qubit(v, q, g, e.slot_a, e.slot_b);
}

struct SimplicityReport {
    bool simple = true;
    double worst_residual = 0.0;
    std::vector<int> witness_loop;  // edge ids of a violating cycle, if any
};

namespace dyndetail {

/// BFS spanning tree rooted at the initial vertex; throws if not connected.
inline std::vector<int> spanning_tree(const Ulg& g) {
    std::vector<int> parent_edge(g.vertices.size(), -1);
    std::vector<char> visited(g.vertices.size(), 0);
    std::deque<int> queue{g.initial};
    visited[g.initial] = 1;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int ei : g.adj[u]) {
            const auto& e = g.edges[ei];
            const int v = e.u == u ? e.v : e.u;
            if (visited[v]) continue;
            visited[v] = 1;
            parent_edge[v] = ei;
            queue.push_back(v);
        }
    }
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        if (!visited[v]) throw std::invalid_argument("ULG not connected");
    return parent_edge;
}

/// Applies the spanning-tree frame of v (root -> v unitary product).
/// Identity edges are skipped; only gate edges touch the vector.
inline Vec apply_frame(const Ulg& g, const std::vector<int>& parent_edge, int v, Vec x) {
    std::vector<std::pair<int, bool>> gates;  // (edge, inverse?) bottom-up
    int cur = v;
    while (parent_edge[cur] >= 0) {
        const int ei = parent_edge[cur];
        const auto& e = g.edges[ei];
        if (e.gate != EdgeGate::None) gates.push_back({ei, e.v != cur});
        cur = e.u == cur ? e.v : e.u;
    }
    for (auto it = gates.rbegin(); it != gates.rend(); ++it)
        x = edge_apply(g.edges[it->first], g.q, x, it->second);
    return x;
}

}  // namespace dyndetail

/// Spanning-tree frame check: simple iff every non-tree edge's label equals
/// the frame transport within operator norm 1e-10.
inline SimplicityReport check_simplicity(const Ulg& g) {
    SimplicityReport rep;
    if (g.vertices.empty()) return rep;
    const auto parent_edge = dyndetail::spanning_tree(g);
    const long dim = 1L << g.q;
    for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
        const auto& e = g.edges[ei];
        if (parent_edge[e.v] == int(ei) || parent_edge[e.u] == int(ei)) continue;
        double worst = 0.0;
        for (long b = 0; b < dim; ++b) {
            Vec x = Vec::Zero(dim);
            x[b] = 1;
            const Vec lhs = edge_apply(e, g.q, dyndetail::apply_frame(g, parent_edge, e.u, x));
            const Vec rhs = dyndetail::apply_frame(g, parent_edge, e.v, x);
            worst = std::max(worst, (lhs - rhs).norm());
        }
        rep.worst_residual = std::max(rep.worst_residual, worst);
        if (worst > 1e-10 && rep.simple) {
            rep.simple = false;
            rep.witness_loop.push_back(int(ei));
            for (int v : {e.u, e.v}) {
                int cur = v;
                while (parent_edge[cur] >= 0) {
                    rep.witness_loop.push_back(parent_edge[cur]);
                    const auto& pe = g.edges[parent_edge[cur]];
                    cur = pe.u == cur ? pe.v : pe.u;
                }
            }
        }
    }
    return rep;
}

struct HistoryState {
    const Ulg* ulg = nullptr;
    std::vector<Vec> per_vertex;  // register component at each vertex

    Vec flat() const {
        const long dim = per_vertex.empty() ? 0 : per_vertex[0].size();
        Vec out(long(per_vertex.size()) * dim);
        for (std::size_t v = 0; v < per_vertex.size(); ++v)
            out.segment(long(v) * dim, dim) = per_vertex[v];
        return out;
    }
    double norm() const { return flat().norm(); }
};

/// Uniform superposition over vertices with the register evolved along the
/// spanning-tree frames. Requires a simple ULG and a normalized register.
inline HistoryState history_state(const Ulg& g, const Vec& input_register) {
    const long dim = 1L << g.q;
    if (input_register.size() != dim)
        throw std::invalid_argument("history_state: register dimension mismatch");
    if (std::abs(input_register.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("history_state: input register not normalized");
    const auto rep = check_simplicity(g);
    if (!rep.simple) throw std::runtime_error("history_state: ULG is not simple");

    HistoryState h;
    h.ulg = &g;
    h.per_vertex.assign(g.vertices.size(), Vec());
    std::vector<char> done(g.vertices.size(), 0);
    h.per_vertex[g.initial] = input_register;
    done[g.initial] = 1;
    std::deque<int> queue{g.initial};
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int ei : g.adj[u]) {
            const auto& e = g.edges[ei];
            const int v = e.u == u ? e.v : e.u;
            if (done[v]) continue;
            h.per_vertex[v] = edge_apply(e, g.q, h.per_vertex[u], /*inverse=*/e.v == u);
            done[v] = 1;
            queue.push_back(v);
        }
    }
    const double amp = 1.0 / std::sqrt(double(g.vertices.size()));
    for (auto& v : h.per_vertex) v *= amp;
    return h;
}

}  // namespace fcch
