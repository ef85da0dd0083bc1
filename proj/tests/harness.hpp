#pragma once

// Shared test drivers: main-path walking, lattice-vs-ring equivalence, and
// random valid-configuration generation.

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <fcch/dynamics.hpp>
#include <fcch/program.hpp>

namespace fcch::testing {

struct MainPathResult {
    std::vector<int> vertices;  // initial .. terminal along forward non-branch edges
    Vec register_state;         // slot-indexed register after all gates
    int gates = 0;
};

/// Follows the unique non-dead-end forward path from the initial vertex,
/// applying gate edges to a register vector.
inline MainPathResult walk_main_path(const Ulg& g, Vec reg) {
    MainPathResult r;
    r.register_state = std::move(reg);
    int cur = g.initial;
    r.vertices.push_back(cur);
    while (true) {
        int next = -1;
        const UlgEdge* used = nullptr;
        for (int ei : g.adj[cur]) {
            const auto& e = g.edges[ei];
            if (e.u != cur) continue;
            if (e.rule == RuleKind::BulkBranch) continue;
            if (next >= 0) throw std::runtime_error("main path is not unique");
            next = e.v;
            used = &e;
        }
        if (next < 0) break;
        if (used->gate != EdgeGate::None) {
            r.register_state = edge_apply(*used, g.q, r.register_state);
            ++r.gates;
        }
        cur = next;
        r.vertices.push_back(cur);
    }
    return r;
}

/// Register state re-expressed on physical ring positions (position r is the
/// perimeter column r+1 of the bottom level at the terminal configuration).
inline Vec terminal_position_state(const Ulg& g, const MainPathResult& path) {
    const ClockConfig& term = g.vertices[path.vertices.back()];
    const Dims& dm = term.bg->dims;
    std::vector<int> to(g.q, -1);  // slot bit -> position bit
    for (int r = 0; r < g.q; ++r) {
        const auto slot = term.slot_at(black_column(dm, r + 1, 0));
        if (!slot) throw std::runtime_error("terminal ring position holds no tracked qubit");
        to[*slot] = r;
    }
    return detail::permute_qubits(path.register_state, g.q, to);
}

struct EquivalenceResult {
    double fidelity = 0.0;
    int gates = 0;
    long vertices = 0;
};

/// End-to-end check: run the walk on a manually wound program and compare the
/// terminal register against the reference ring simulator.
inline EquivalenceResult check_equivalence(const StaticBackground& bg, const Vec& input) {
    const int Q = bg.P() - 1;
    const ClockConfig start = ClockConfig::canonical_start(bg);
    const Ulg g = explore_ulg(start);
    const auto path = walk_main_path(g, input);
    const Vec lattice = terminal_position_state(g, path);

    RingState in;
    in.n = Q;
    in.state = input;
    const RingState ring = simulate_ring(bg.program, Q, in, bg.dims.H - 1, Dir::L);

    EquivalenceResult res;
    res.fidelity = std::abs(ring.state.dot(lattice));
    res.gates = path.gates;
    res.vertices = long(g.vertices.size());
    return res;
}

inline Vec basis_vec(int q, std::uint64_t basis) {
    Vec v = Vec::Zero(1L << q);
    v[basis] = 1.0;
    return v;
}

/// Random program of the side-loop length with a bounded number of gate
/// opportunities (adjacent 11 pairs, cyclically).
inline std::string random_program(std::mt19937& rng, int P, int max_gates) {
    while (true) {
        std::string p(P, '0');
        for (auto& ch : p) ch = rng() % 2 ? '1' : '0';
        int gates = 0;
        for (int j = 0; j < P; ++j)
            if (p[j] == '1' && p[(j + 1) % P] == '1') ++gates;
        if (gates <= max_gates) return p;
    }
}

}  // namespace fcch::testing
