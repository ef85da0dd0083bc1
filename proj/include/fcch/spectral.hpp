#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <fcch/dynamics.hpp>

namespace fcch {

// ---------------------------------------------------------------------------
// Penalty bookkeeping

/// The scaling freedom of the full Hamiltonian: penalty strengths, the head
/// bonus g = 2/A, and the yes/no bookkeeping constants A, B with
/// A >= 4 B W H D.
struct PenaltyWeights {
    double head_pair = 1.0;
    double input = 1.0;
    double output = 1.0;
    double A = 0.0;
    double B = 0.0;
    double g() const { return 2.0 / A; }

    /// Desk-scale choice: B from the explored size (at least |V|^3, raised
    /// further if a measured no-instance floor is supplied), A pinned to the
    /// completeness inequality with equality.
    static PenaltyWeights desk_scale(const Dims& d, long vertices,
                                     std::optional<double> no_floor = std::nullopt) {
        PenaltyWeights w;
        w.B = double(vertices) * double(vertices) * double(vertices);
        if (no_floor && *no_floor > 0) w.B = std::max(w.B, 1.0 / *no_floor);
        w.A = 4.0 * w.B * double(d.W) * double(d.H) * double(d.D);
        return w;
    }

    bool satisfies_choice(const Dims& d) const {
        return A >= 4.0 * B * double(d.W) * double(d.H) * double(d.D);
    }
};

// ---------------------------------------------------------------------------
// Restricted Hamiltonian on (reachable clock configs) x (register)

struct RestrictedHamiltonian {
    long T = 0;          // clock dimension (ULG vertices)
    int q = 0;           // register qubits
    long dim = 0;        // T * 2^q
    Eigen::SparseMatrix<cplx> mat;

    Vec apply(const Vec& x) const { return mat * x; }
};

namespace specdetail {

inline void add_block_identity(std::vector<Eigen::Triplet<cplx>>& trip, long base_r, long base_c,
                               long dim, cplx w) {
    for (long i = 0; i < dim; ++i) trip.emplace_back(base_r + i, base_c + i, w);
}

/// Adds w * (U acting on slots (a,b)) at block (base_r, base_c).
inline void add_block_gate(std::vector<Eigen::Triplet<cplx>>& trip, long base_r, long base_c,
                           int q, const Mat& u4, int a, int b, cplx w) {
    const long dim = 1L << q;
    for (long col = 0; col < dim; ++col) {
        const int ia = int(col >> a & 1), ib = int(col >> b & 1);
        const int in = ia * 2 + ib;
        for (int o = 0; o < 4; ++o) {
            const cplx amp = u4(o, in);
            if (amp == cplx(0, 0)) continue;
            long row = col & ~(1L << a) & ~(1L << b);
            if (o & 2) row |= 1L << a;
            if (o & 1) row |= 1L << b;
            trip.emplace_back(base_r + row, base_c + col, w * amp);
        }
    }
}

/// Geometric adjacency of two head sites (blacks or a black and the edge red
/// of a pending gate): within one lattice cell step.
inline bool heads_adjacent(const Site& a, const Site& b) {
    const double ax = a.x + (a.sub == Sublattice::BlackVertex ? 0.0 : (a.axis == Axis::X ? 0.0 : 0.5));
    const double ay = double(a.y) + (a.sub == Sublattice::RedFace ? 0.5 : 0.0);
    const double az = a.z + (a.sub == Sublattice::BlackVertex ? 0.0 : (a.axis == Axis::Z ? 0.0 : 0.5));
    const double bx = b.x + (b.sub == Sublattice::BlackVertex ? 0.0 : (b.axis == Axis::X ? 0.0 : 0.5));
    const double by = double(b.y) + (b.sub == Sublattice::RedFace ? 0.5 : 0.0);
    const double bz = b.z + (b.sub == Sublattice::BlackVertex ? 0.0 : (b.axis == Axis::Z ? 0.0 : 0.5));
    return std::abs(ax - bx) <= 1.0 && std::abs(ay - by) <= 1.0 && std::abs(az - bz) <= 1.0;
}

inline std::vector<Site> head_sites(const ClockConfig& c) {
    std::vector<Site> out;
    for (const auto& a : c.arrows) out.push_back(a.site);
    for (const auto& b : c.bangs) {
        const int slot = b.dir == Dir::L ? 0 : c.bg->P() - 1;
        out.push_back(side_slot(c.bg->dims, slot, b.y - 1));
    }
    return out;
}

inline int adjacent_head_pairs(const ClockConfig& c) {
    const auto sites = head_sites(c);
    int n = 0;
    for (std::size_t i = 0; i < sites.size(); ++i)
        for (std::size_t j = i + 1; j < sites.size(); ++j)
            if (heads_adjacent(sites[i], sites[j])) ++n;
    return n;
}

}  // namespace specdetail

/// The tracked-slot id of the ancilla: the qubit starting next to the corner
/// on the left-face side of the top working row.
inline int ancilla_tracked_slot(const Ulg& g) {
    const ClockConfig& init = g.vertices[g.initial];
    const Dims& dm = init.bg->dims;
    const auto s = init.slot_at(black_column(dm, -1, dm.H - 1));
    if (!s) throw std::runtime_error("initial configuration has no ancilla carrier");
    return *s;
}

/// Register qubit the input constraint pins to |0>.
inline int ancilla_slot(const Ulg& g) {
    const int reg = g.register_map.at(ancilla_tracked_slot(g));
    if (reg < 0) throw std::runtime_error("ancilla qubit was dropped from the register");
    return reg;
}

/// The tracked-slot id the output constraint reads: the carrier the final
/// descent walked past the computation corner (the occupant of the corner
/// column just before the head landed there).
inline int output_tracked_slot(const Ulg& g) {
    const int t = g.terminal();
    if (t < 0) throw std::runtime_error("ULG has no terminal vertex");
    const ClockConfig& term = g.vertices[t];
    const StaticBackground& bg = *term.bg;
    const ArrowState* head = nullptr;
    for (const auto& a : term.arrows)
        if (!a.interior && a.y == 0 && a.k == 0) head = &a;
    if (!head) throw std::runtime_error("terminal vertex has no head at the corner");
    const Green gr = bg.green_at(1);
    const Dir din = gr == Green::B ? flip(head->dir) : head->dir;
    const auto s = term.slot_at(black_column(bg.dims, dyndetail::walk_step(din), 0));
    if (!s) throw std::runtime_error("terminal output site holds no tracked qubit");
    return *s;
}

/// Register qubit the output constraint projects.
inline int output_slot(const Ulg& g) {
    const int reg = g.register_map.at(output_tracked_slot(g));
    if (reg < 0) throw std::runtime_error("output qubit was dropped from the register");
    return reg;
}

/// Keeps only the register qubits the spectral checks need: gated carriers
/// plus the input and output anchors.
inline Ulg reduced_for_spectral(const Ulg& g) {
    std::vector<int> keep;
    try {
        keep.push_back(ancilla_tracked_slot(g));
    } catch (const std::exception&) {
    }
    try {
        keep.push_back(output_tracked_slot(g));
    } catch (const std::exception&) {
    }
    return reduce_register(g, keep);
}

struct AssembleOptions {
    bool include_input = true;
    bool include_output = true;
    bool include_head_penalty = true;
    bool include_bonus = true;
    std::vector<int> skip_edges;  // for monotonicity spot checks
};

/// H = H_prop + P_in + P_out + P_heads - g * (head count), assembled on the
/// span of reachable clock configurations tensor the tracked register. The
/// static term vanishes identically there and is omitted.
inline RestrictedHamiltonian assemble(const Ulg& g, const PenaltyWeights& w,
                                      const AssembleOptions& opt = {}) {
    RestrictedHamiltonian h;
    h.T = long(g.vertices.size());
    h.q = g.q;
    h.dim = h.T << g.q;
    const long rdim = 1L << g.q;
    std::vector<Eigen::Triplet<cplx>> trip;
    const Mat gate = gate_G();
    const Mat gated = gate.adjoint();

    for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
        if (std::find(opt.skip_edges.begin(), opt.skip_edges.end(), int(ei)) !=
            opt.skip_edges.end())
            continue;
        const auto& e = g.edges[ei];
        const long bu = long(e.u) << g.q;
        const long bv = long(e.v) << g.q;
        specdetail::add_block_identity(trip, bu, bu, rdim, 1.0);
        specdetail::add_block_identity(trip, bv, bv, rdim, 1.0);
        if (e.gate == EdgeGate::None) {
            specdetail::add_block_identity(trip, bv, bu, rdim, -1.0);
            specdetail::add_block_identity(trip, bu, bv, rdim, -1.0);
        } else {
            const Mat& u = e.gate == EdgeGate::G ? gate : gated;
            specdetail::add_block_gate(trip, bv, bu, g.q, u, e.slot_a, e.slot_b, -1.0);
            specdetail::add_block_gate(trip, bu, bv, g.q, Mat(u.adjoint()), e.slot_a, e.slot_b,
                                       -1.0);
        }
    }

    if (opt.include_input) {
        const int anc = ancilla_slot(g);
        const long b0 = long(g.initial) << g.q;
        for (long x = 0; x < rdim; ++x)
            if (x >> anc & 1) trip.emplace_back(b0 + x, b0 + x, w.input);
    }
    if (opt.include_output) {
        const int t = g.terminal();
        if (t >= 0) {
            const int slot = output_slot(g);
            const long bt = long(t) << g.q;
            for (long x = 0; x < rdim; ++x)
                if (!(x >> slot & 1)) trip.emplace_back(bt + x, bt + x, w.output);
        }
    }
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        double diag = 0.0;
        if (opt.include_head_penalty)
            diag += w.head_pair * specdetail::adjacent_head_pairs(g.vertices[v]);
        if (opt.include_bonus) diag -= w.g() * head_count(g.vertices[v]);
        if (diag != 0.0) specdetail::add_block_identity(trip, long(v) << g.q, long(v) << g.q, rdim, diag);
    }

    h.mat.resize(h.dim, h.dim);
    h.mat.setFromTriplets(trip.begin(), trip.end());
    return h;
}

// ---------------------------------------------------------------------------
// Eigensolvers

struct GroundResult {
    double value = 0.0;
    Vec vector;
    int iterations = 0;
    double residual = 0.0;
};

namespace specdetail {

inline GroundResult dense_ground(const Eigen::SparseMatrix<cplx>& m) {
    Mat dense(m);
    Eigen::SelfAdjointEigenSolver<Mat> es(dense);
    GroundResult r;
    r.value = es.eigenvalues()(0);
    r.vector = es.eigenvectors().col(0);
    r.residual = (dense * r.vector - r.value * r.vector).norm();
    return r;
}

/// Lanczos with full reorthogonalization for the smallest eigenvalue.
inline GroundResult lanczos_ground(const Eigen::SparseMatrix<cplx>& m, int max_iter = 400,
                                   double tol = 1e-10) {
    const long n = m.rows();
    std::mt19937 rng(7);
    std::normal_distribution<double> nd;
    Vec v = Vec::NullaryExpr(n, [&](Eigen::Index) { return cplx(nd(rng), nd(rng)); });
    v.normalize();
    std::vector<Vec> basis{v};
    std::vector<double> alpha, beta;
    GroundResult best;
    for (int k = 0; k < max_iter; ++k) {
        Vec wv = m * basis[k];
        const double a = std::real(basis[k].dot(wv));
        alpha.push_back(a);
        wv -= a * basis[k];
        if (k > 0) wv -= beta[k - 1] * basis[k - 1];
        for (const auto& b : basis) wv -= b.dot(wv) * b;  // full reorthogonalization
        const double bnorm = wv.norm();
        // tridiagonal Ritz problem
        const int kk = int(alpha.size());
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(kk, kk);
        for (int i = 0; i < kk; ++i) {
            tri(i, i) = alpha[i];
            if (i + 1 < kk) tri(i, i + 1) = tri(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
        best.value = es.eigenvalues()(0);
        Vec x = Vec::Zero(n);
        for (int i = 0; i < kk; ++i) x += es.eigenvectors()(i, 0) * basis[i];
        x.normalize();
        best.vector = x;
        best.iterations = kk;
        best.residual = (m * x - best.value * x).norm();
        if (best.residual <= tol * std::max(1.0, std::abs(best.value))) return best;
        if (bnorm < 1e-13) return best;  // invariant subspace exhausted
        beta.push_back(bnorm);
        basis.push_back(wv / bnorm);
    }
    return best;
}

}  // namespace specdetail

/// Smallest eigenvalue and eigenvector: dense up to dimension 4096, shifted
/// iterative above, cross-validated on the overlap range in the tests.
inline GroundResult ground_energy(const RestrictedHamiltonian& h, bool force_lanczos = false) {
    if (h.dim <= 4096 && !force_lanczos) return specdetail::dense_ground(h.mat);
    GroundResult r = specdetail::lanczos_ground(h.mat);
    if (r.residual > 1e-7 * std::max(1.0, std::abs(r.value)))
        throw std::runtime_error("ground_energy: Lanczos did not converge, residual " +
                                 std::to_string(r.residual));
    return r;
}

// ---------------------------------------------------------------------------
// Laplacian equivalence

/// Sparse graph Laplacian of the ULG (twig edges included).
inline Eigen::SparseMatrix<double> graph_laplacian(const Ulg& g) {
    std::vector<Eigen::Triplet<double>> trip;
    for (const auto& e : g.edges) {
        trip.emplace_back(e.u, e.u, 1.0);
        trip.emplace_back(e.v, e.v, 1.0);
        trip.emplace_back(e.u, e.v, -1.0);
        trip.emplace_back(e.v, e.u, -1.0);
    }
    Eigen::SparseMatrix<double> m(g.vertices.size(), g.vertices.size());
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

/// H_prop alone (no penalties, no bonus).
inline RestrictedHamiltonian assemble_hprop(const Ulg& g) {
    PenaltyWeights w;
    w.A = 1;  // unused
    AssembleOptions opt;
    opt.include_input = opt.include_output = opt.include_head_penalty = opt.include_bonus = false;
    return assemble(g, w, opt);
}

/// Operator norm of W H_prop W^dag - Laplacian (x) 1, where W collects the
/// spanning-tree frames. Power iteration on the difference; never
/// materializes the frames.
inline double laplacian_residual(const Ulg& g, int iters = 60) {
    const auto parent = dyndetail::spanning_tree(g);
    const auto hprop = assemble_hprop(g);
    const auto lap = graph_laplacian(g);
    const long rdim = 1L << g.q;
    const long dim = hprop.dim;

    auto apply_w = [&](const Vec& x, bool dagger) {
        Vec out(dim);
        for (std::size_t v = 0; v < g.vertices.size(); ++v) {
            Vec seg = x.segment(long(v) << g.q, rdim);
            // W = sum_v |v><v| (x) F_v
            if (!dagger) {
                seg = dyndetail::apply_frame(g, parent, int(v), seg);
            } else {
                // F_v^dag: undo the tree path bottom-up, gate edges only
                int cur = int(v);
                while (parent[cur] >= 0) {
                    const auto& e = g.edges[parent[cur]];
                    if (e.gate != EdgeGate::None)
                        seg = edge_apply(e, g.q, seg, /*inverse=*/e.v == cur);
                    cur = e.u == cur ? e.v : e.u;
                }
            }
            out.segment(long(v) << g.q, rdim) = seg;
        }
        return out;
    };

    auto apply_diff = [&](const Vec& x) {
        // (W^dag H_prop W - Lap (x) 1) x
        const Vec wx = apply_w(x, false);
        const Vec hx = hprop.apply(wx);
        Vec lhs = apply_w(hx, true);
        Vec rhs(dim);
        // (Lap (x) 1) x
        for (std::size_t v = 0; v < g.vertices.size(); ++v) rhs.segment(long(v) << g.q, rdim).setZero();
        for (int kcol = 0; kcol < lap.outerSize(); ++kcol)
            for (Eigen::SparseMatrix<double>::InnerIterator it(lap, kcol); it; ++it)
                rhs.segment(long(it.row()) << g.q, rdim) +=
                    it.value() * x.segment(long(it.col()) << g.q, rdim);
        return Vec(lhs - rhs);
    };

    std::mt19937 rng(11);
    std::normal_distribution<double> nd;
    Vec x = Vec::NullaryExpr(dim, [&](Eigen::Index) { return cplx(nd(rng), nd(rng)); });
    x.normalize();
    double norm = 0.0;
    for (int i = 0; i < iters; ++i) {
        Vec y = apply_diff(x);
        y = apply_diff(y);  // square it: norm^2 via symmetric power iteration
        const double n2 = y.norm();
        if (n2 < 1e-30) return 0.0;
        x = y / n2;
        norm = std::sqrt(n2);
    }
    return norm;
}

// ---------------------------------------------------------------------------
// Kitaev geometrical bound

struct KitaevReport {
    bool vacuous = false;
    double lambda_min = 0.0;
    double mu = 0.0;
    long vertices = 0;
    double ratio = 0.0;  // lambda_min |V|^3 / mu
};

/// mu = min over penalized vertex pairs of lambda_min(Pi_i + U Pi_j U^dag)/2
/// with U the frame transport between the penalized vertices: the angle
/// quantity of the geometric lemma. It vanishes exactly when the two
/// penalties share a transported null state (a zero-energy history exists).
inline KitaevReport kitaev_bound_check(const Ulg& g, const PenaltyWeights& w) {
    KitaevReport rep;
    rep.vertices = long(g.vertices.size());
    const long rdim = 1L << g.q;

    struct Pen {
        int vertex;
        Mat projector;
    };
    std::vector<Pen> pens;
    try {
        const int anc = ancilla_slot(g);
        Mat p = Mat::Zero(rdim, rdim);
        for (long x = 0; x < rdim; ++x)
            if (x >> anc & 1) p(x, x) = 1.0;
        pens.push_back({g.initial, p});
        const int t = g.terminal();
        if (t >= 0) {
            const int slot = output_slot(g);
            Mat p2 = Mat::Zero(rdim, rdim);
            for (long x = 0; x < rdim; ++x)
                if (!(x >> slot & 1)) p2(x, x) = 1.0;
            pens.push_back({t, p2});
        }
    } catch (const std::exception&) {
        // anchors unavailable on this graph
    }
    if (pens.size() < 2) {
        rep.vacuous = true;
        return rep;
    }

    const auto parent = dyndetail::spanning_tree(g);
    auto frame_mat = [&](int v) {
        Mat f = Mat::Identity(rdim, rdim);
        for (long col = 0; col < rdim; ++col) {
            Vec x = Vec::Zero(rdim);
            x[col] = 1;
            f.col(col) = dyndetail::apply_frame(g, parent, v, x);
        }
        return f;
    };

    rep.mu = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pens.size(); ++i)
        for (std::size_t j = i + 1; j < pens.size(); ++j) {
            const Mat uij = frame_mat(pens[i].vertex).adjoint() * frame_mat(pens[j].vertex);
            const Mat sum = pens[i].projector + uij * pens[j].projector * uij.adjoint();
            Eigen::SelfAdjointEigenSolver<Mat> es(sum);
            rep.mu = std::min(rep.mu, std::max(0.0, es.eigenvalues()(0)) / 2.0);
        }

    // lambda_min of H_prop + the penalty projectors (no bonus, no heads term)
    PenaltyWeights w2 = w;
    AssembleOptions opt;
    opt.include_head_penalty = false;
    opt.include_bonus = false;
    const auto h = assemble(g, w2, opt);
    rep.lambda_min = ground_energy(h).value;
    rep.ratio = rep.lambda_min * std::pow(double(rep.vertices), 3) / std::max(rep.mu, 1e-300);
    return rep;
}

// ---------------------------------------------------------------------------
// Promise-gap demonstration

struct SectorReport {
    std::string name;
    long vertices = 0;
    double lambda = 0.0;
};

struct PromiseGapReport {
    double lambda_yes = 0.0;
    double lambda_no = 0.0;
    PenaltyWeights weights;
    std::vector<SectorReport> sectors;
    bool choice_ok = false;  // A >= 4 B W H D
};

/// Complete two-head sector at the smallest toy: heads seeded adjacent on the
/// top row, closed under the full rule set, with its own desk-scale weights
/// (multi-descent two-head closures grow factorially in the interleavings, so
/// the exhaustive sector demonstration lives at one descent).
inline SectorReport two_head_sector_report(const Dims& d = Dims(2, 2, 2)) {
    const StaticBackground bg(d, std::string(perimeter_len(d), '0'));
    const ClockConfig seed = ClockConfig::multi_head_start(bg, {{0, Dir::L}, {1, Dir::L}});
    const Ulg g2 = reduce_register(explore_ulg(seed, 500000), {});
    const PenaltyWeights w2 = PenaltyWeights::desk_scale(d, long(g2.vertices.size()));
    AssembleOptions opt;
    opt.include_input = false;
    opt.include_output = false;
    const auto h2 = assemble(g2, w2, opt);
    return {"two-head", long(g2.vertices.size()), ground_energy(h2).value};
}

/// Builds the single-head instance Hamiltonian for a wound program (register
/// reduced to the carriers the terms touch) and returns its ground energy.
inline double instance_ground(const StaticBackground& bg, const PenaltyWeights& w,
                              long* vertices_out = nullptr) {
    const Ulg g = reduced_for_spectral(explore_ulg(ClockConfig::canonical_start(bg)));
    if (vertices_out) *vertices_out = long(g.vertices.size());
    return ground_energy(assemble(g, w)).value;
}

/// Yes/no promise-gap demonstration per the soundness/completeness ledger:
/// lambda_yes <= -1/A and lambda_no >= 0, plus the zero-head and two-head
/// sector bounds.
inline PromiseGapReport promise_gap_demo(const StaticBackground& yes_bg,
                                         const StaticBackground& no_bg) {
    PromiseGapReport rep;
    const Dims& d = yes_bg.dims;

    // pre-bonus floor of the no instance pins B
    const Ulg gno = reduced_for_spectral(explore_ulg(ClockConfig::canonical_start(no_bg)));
    PenaltyWeights probe;
    probe.A = std::numeric_limits<double>::infinity();
    AssembleOptions nobonus;
    nobonus.include_bonus = false;
    const double no_floor = ground_energy(assemble(gno, probe, nobonus)).value;
    rep.weights = PenaltyWeights::desk_scale(d, long(gno.vertices.size()), no_floor);
    rep.choice_ok = rep.weights.satisfies_choice(d);

    long vy = 0, vn = 0;
    rep.lambda_yes = instance_ground(yes_bg, rep.weights, &vy);
    rep.lambda_no = instance_ground(no_bg, rep.weights, &vn);
    rep.sectors.push_back({"yes-1-head", vy, rep.lambda_yes});
    rep.sectors.push_back({"no-1-head", vn, rep.lambda_no});

    // zero-head sector: all terms positive semi-definite, no bonus applies
    rep.sectors.push_back({"zero-head", 1, 0.0});

    // two-head sector: the adjacency penalty must dominate the doubled bonus
    const auto two = two_head_sector_report();
    rep.sectors.push_back(two);
    return rep;
}

/// Searches tiny gate-free programs for a deterministic-accept and an
/// always-reject instance at the given dims: the no program routes the
/// pinned ancilla onto the output site, the yes program routes a free
/// witness qubit there.
inline std::pair<StaticBackground, StaticBackground> find_demo_instances(const Dims& d) {
    const int P = perimeter_len(d);
    std::optional<StaticBackground> yes, no;
    std::vector<std::string> candidates;
    candidates.push_back(std::string(P, '0'));
    for (int j = 0; j < P; ++j) {
        std::string p(P, '0');
        p[j] = '1';
        candidates.push_back(p);
    }
    for (int j = 0; j < P; ++j)
        for (int k = j + 2; k < P; ++k) {
            std::string p(P, '0');
            p[j] = p[k] = '1';
            if (j == 0 && k == P - 1) continue;  // adjacent cyclically: a gate
            candidates.push_back(p);
        }
    for (const auto& prog : candidates) {
        StaticBackground bg(d, prog);
        const Ulg g = explore_ulg(ClockConfig::canonical_start(bg));
        bool has_gate = false;
        for (const auto& e : g.edges) has_gate |= e.gate != EdgeGate::None;
        if (has_gate) continue;
        const int anc = ancilla_tracked_slot(g);
        const int outq = output_tracked_slot(g);
        if (anc == outq && !no) no = bg;
        if (anc != outq && !yes) yes = bg;
        if (yes && no) return {*yes, *no};
    }
    throw std::runtime_error("no demo instances at these dims");
}

}  // namespace fcch
