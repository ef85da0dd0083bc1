#pragma once

#include <cmath>
#include <complex>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#ifndef FCCH_DATA_DIR
#define FCCH_DATA_DIR "data"
#endif

namespace fcch {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// ---------------------------------------------------------------------------
// The universal gate

/// The printed Hermitian generator of the single universal gate.
inline Mat gate_hamiltonian() {
    Mat h(4, 4);
    h << 2, 0, 1, 1,
         0, -1, 1, 1,
         1, 1, 0, 0,
         1, 1, 0, 0;
    return h;
}

/// G = exp(i H), computed through the eigendecomposition of H.
inline Mat gate_G() {
    const Mat h = gate_hamiltonian();
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    Mat g = Mat::Zero(4, 4);
    for (int k = 0; k < 4; ++k) {
        const cplx phase = std::exp(cplx(0, es.eigenvalues()[k]));
        g += phase * es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
    }
    return g;
}

/// Operator-norm distance between unitaries with the global phase removed by
/// trace alignment.
inline double phase_distance(const Mat& u, const Mat& v) {
    const cplx tr = (v.adjoint() * u).trace();
    const cplx phase = std::abs(tr) < 1e-300 ? cplx(1, 0) : tr / std::abs(tr);
    const Mat diff = u - phase * v;
    Eigen::JacobiSVD<Mat> svd(diff);
    return svd.singularValues()(0);
}

inline double operator_norm(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

// ---------------------------------------------------------------------------
// Single-gate universality

struct CommutatorEntry {
    int j, r, c;
};

/// Loads the nested-commutator index table shipped with the repository.
inline std::vector<CommutatorEntry> load_lie_entries(
    const std::string& path = std::string(FCCH_DATA_DIR) + "/lie_entries.csv") {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open commutator table: " + path);
    std::vector<CommutatorEntry> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        CommutatorEntry e{};
        char comma;
        if (!(ss >> e.j >> comma >> e.r >> comma >> e.c)) continue;
        if (e.j < 3 || e.j > 63 || e.r >= e.j || e.c >= e.j || e.r < 1 || e.c < 1)
            throw std::runtime_error("malformed commutator entry for j=" + std::to_string(e.j));
        out.push_back(e);
    }
    if (out.size() != 61) throw std::runtime_error("commutator table must have 61 entries");
    return out;
}

struct UniversalityReport {
    int independent_count = 0;
    bool pass = false;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    double max_hermiticity_defect = 0.0;
    double max_commutator_trace = 0.0;
};

/// Generates H_1 = H (x) 1, H_2 = 1 (x) H and the 61 nested commutators of the
/// table, then rank-checks their traceless parts against dim su(8) = 63.
inline UniversalityReport check_universality(
    const std::vector<CommutatorEntry>& entries = load_lie_entries()) {
    const Mat h = gate_hamiltonian();
    const Mat id2 = Mat::Identity(2, 2);
    std::vector<Mat> gens(64);
    gens[1] = Eigen::kroneckerProduct(h, id2).eval();
    gens[2] = Eigen::kroneckerProduct(id2, h).eval();
    for (const auto& e : entries) {
        const Mat& a = gens.at(e.r);
        const Mat& b = gens.at(e.c);
        if (a.size() == 0 || b.size() == 0)
            throw std::runtime_error("commutator entry uses undefined generator");
        gens[e.j] = cplx(0, 1) * (a * b - b * a);
    }

    UniversalityReport rep;
    Eigen::MatrixXd coords(63, 2 * 64);
    for (int j = 1; j <= 63; ++j) {
        const Mat& g = gens[j];
        rep.max_hermiticity_defect =
            std::max(rep.max_hermiticity_defect, operator_norm(g - Mat(g.adjoint())));
        if (j >= 3)
            rep.max_commutator_trace = std::max(rep.max_commutator_trace, std::abs(g.trace()));
        // project out the trace and flatten into real coordinates
        const Mat t = g - (g.trace() / 8.0) * Mat::Identity(8, 8);
        for (int r = 0; r < 8; ++r)
            for (int c = 0; c < 8; ++c) {
                coords(j - 1, 2 * (8 * r + c)) = t(r, c).real();
                coords(j - 1, 2 * (8 * r + c) + 1) = t(r, c).imag();
            }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(coords);
    const auto& sv = svd.singularValues();
    rep.sigma_max = sv(0);
    rep.sigma_min = sv(sv.size() - 1);
    const double thresh = 1e-8 * rep.sigma_max;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++rank;
    rep.independent_count = rank;
    rep.pass = rank == 63 && rep.max_hermiticity_defect <= 1e-12;
    return rep;
}

// ---------------------------------------------------------------------------
// Ring operations and the program codec

enum class RingOp : std::uint8_t { ApplyG, ApplyGdag, CycleCW, CycleCCW };
using GateWord = std::vector<RingOp>;

inline std::string gate_word_str(const GateWord& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ",";
        switch (w[i]) {
            case RingOp::ApplyG: out += "G"; break;
            case RingOp::ApplyGdag: out += "Gd"; break;
            case RingOp::CycleCW: out += "CW"; break;
            case RingOp::CycleCCW: out += "CCW"; break;
        }
    }
    return out;
}

inline GateWord gate_word_parse(const std::string& s) {
    GateWord w;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "G")
            w.push_back(RingOp::ApplyG);
        else if (tok == "Gd")
            w.push_back(RingOp::ApplyGdag);
        else if (tok == "CW")
            w.push_back(RingOp::CycleCW);
        else if (tok == "CCW")
            w.push_back(RingOp::CycleCCW);
        else
            throw std::invalid_argument("bad gate word token: " + tok);
    }
    return w;
}

enum class Dir : std::uint8_t { R = 0, L = 1 };
inline Dir flip(Dir d) { return d == Dir::R ? Dir::L : Dir::R; }

enum class EdgeGate : std::uint8_t { None = 0, G = 1, Gdag = 2 };

struct EdgeAction {
    EdgeGate gate = EdgeGate::None;
    Dir exit = Dir::R;
};

/// One row of the program encoding table: incoming tape direction plus the
/// bit pair at the computation edge.
inline EdgeAction decode_step(Dir incoming, bool b_prev, bool b_cur) {
    EdgeAction a;
    if (!b_cur) {  // turn
        a.exit = flip(incoming);
    } else if (!b_prev) {  // continue
        a.exit = incoming;
    } else {  // gate, keep direction
        a.gate = incoming == Dir::R ? EdgeGate::Gdag : EdgeGate::G;
        a.exit = incoming;
    }
    return a;
}

/// Linear read of a program string: the action at step i consumes the pair
/// (p[i-1], p[i]).
inline std::vector<EdgeAction> decode_program(const std::string& p, Dir incoming) {
    std::vector<EdgeAction> out;
    Dir d = incoming;
    for (std::size_t i = 1; i < p.size(); ++i) {
        const EdgeAction a = decode_step(d, p[i - 1] == '1', p[i] == '1');
        out.push_back(a);
        d = a.exit;
    }
    return out;
}

struct CircuitOp {
    EdgeGate gate;
    int line;
    bool operator==(const CircuitOp&) const = default;
};

/// Encodes a circuit as the block grammar: D/U moves to reach the target
/// line, then DGD (gate) or UIU (inverse). Blocks overlap by one bit; every
/// block starts and ends in the right-moving configuration on a 0 bit.
inline std::string encode_circuit(const std::vector<CircuitOp>& ops) {
    if (ops.empty()) return "000";  // a single stay block
    std::string p = "0";
    int c = 0;
    auto emit = [&p](const char* block) { p += block + 1; };  // drop the shared first bit
    for (const auto& op : ops) {
        if (op.gate == EdgeGate::None) throw std::invalid_argument("op without a gate");
        while (c > op.line) {
            emit("0100");  // D
            --c;
        }
        while (c < op.line) {
            emit("0010");  // U
            ++c;
        }
        if (op.gate == EdgeGate::G) {
            emit("0100");            // D
            emit("00110");           // G
            emit("0100");            // D
        } else {
            emit("0010");            // U
            emit("01100");           // I
            emit("0010");            // U
        }
    }
    return p;
}

/// Replays a program string from the canonical block entry (right moving,
/// line 0) and reads off the gates it applies.
inline std::vector<CircuitOp> decode_circuit(const std::string& p) {
    std::vector<CircuitOp> ops;
    Dir d = Dir::R;
    int y = 0;
    for (std::size_t i = 1; i < p.size(); ++i) {
        y += d == Dir::R ? -1 : 1;  // tape slides one step, then the edge acts
        const EdgeAction a = decode_step(d, p[i - 1] == '1', p[i] == '1');
        if (a.gate == EdgeGate::G) ops.push_back({EdgeGate::G, y});
        if (a.gate == EdgeGate::Gdag) ops.push_back({EdgeGate::Gdag, y + 1});
        d = a.exit;
    }
    return ops;
}

// ---------------------------------------------------------------------------
// Reference ring simulator

struct RingState {
    int n = 0;
    Vec state;

    static RingState computational(int n, std::uint64_t basis = 0) {
        if (n < 1 || n > 24) throw std::invalid_argument("ring size out of range");
        RingState r;
        r.n = n;
        r.state = Vec::Zero(1L << n);
        r.state[basis] = 1.0;
        return r;
    }
    double norm() const { return state.norm(); }
};

namespace detail {

/// Permutes ring positions: qubit at position i moves to position perm(i).
inline Vec permute_qubits(const Vec& v, int n, const std::vector<int>& to) {
    Vec out = Vec::Zero(v.size());
    for (long x = 0; x < v.size(); ++x) {
        long y = 0;
        for (int i = 0; i < n; ++i)
            if (x >> i & 1) y |= 1L << to[i];
        out[y] = v[x];
    }
    return out;
}

inline Vec cycle_state(const Vec& v, int n, int shift) {
    std::vector<int> to(n);
    for (int i = 0; i < n; ++i) to[i] = ((i + shift) % n + n) % n;
    return permute_qubits(v, n, to);
}

/// Applies a 4x4 unitary to qubit positions (a, b); a is the first factor.
inline Vec apply_two_qubit(const Vec& v, int n, const Mat& u, int a, int b) {
    Vec out = Vec::Zero(v.size());
    for (long x = 0; x < v.size(); ++x) {
        const int ia = x >> a & 1, ib = x >> b & 1;
        const int in = ia * 2 + ib;
        for (int outbits = 0; outbits < 4; ++outbits) {
            const cplx amp = u(outbits, in);
            if (amp == cplx(0, 0)) continue;
            long y = x & ~(1L << a) & ~(1L << b);
            if (outbits & 2) y |= 1L << a;
            if (outbits & 1) y |= 1L << b;
            out[y] += amp * v[x];
        }
    }
    return out;
}

}  // namespace detail

/// Reference semantics of the computation edge, matching the lattice rules:
/// per level the ring slides one position in the current direction (left
/// sweeps shift +1, right sweeps -1), then the edge acts on the bit pair
/// (p[l-1], p[l]) (cyclic). Gates of both arrival directions hit the same
/// ordered physical pair (0, n-1): the two qubits flanking the corner after
/// the descent completes.
inline RingState simulate_ring(const std::string& p, int n, RingState input, int levels,
                               Dir d0 = Dir::L) {
    if (n < 3) throw std::invalid_argument("simulate_ring: need ring size >= 3");
    if (p.empty()) throw std::invalid_argument("simulate_ring: empty program");
    if (std::abs(input.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("simulate_ring: input not normalized");
    const Mat g = gate_G();
    const Mat gd = g.adjoint();
    const long T = long(p.size());
    Dir d = d0;
    Vec v = input.state;
    for (int l = 1; l <= levels; ++l) {
        v = detail::cycle_state(v, n, d == Dir::L ? 1 : -1);
        const bool bp = p[((l - 1) % T + T) % T] == '1';
        const bool bc = p[(l % T + T) % T] == '1';
        const EdgeAction a = decode_step(d, bp, bc);
        if (a.gate == EdgeGate::G) v = detail::apply_two_qubit(v, n, g, 0, n - 1);
        if (a.gate == EdgeGate::Gdag) v = detail::apply_two_qubit(v, n, gd, 0, n - 1);
        d = a.exit;
    }
    RingState out;
    out.n = n;
    out.state = v;
    return out;
}

/// The exactly inverting op sequence: gates reversed and conjugated, lines
/// offset by one because the two arrival directions' gate windows interleave.
inline std::vector<CircuitOp> mirror_inverse(const std::vector<CircuitOp>& ops) {
    std::vector<CircuitOp> out;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        if (it->gate == EdgeGate::G)
            out.push_back({EdgeGate::Gdag, it->line + 1});
        else
            out.push_back({EdgeGate::G, it->line - 1});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Quantum ring machine reference

/// Applies the two-qudit head R to adjacent ring pairs (0,1), (1,2), ...
/// cyclically for `steps` applications.
inline Vec simulate_qrm(const Mat& R, int d, int n, int steps, Vec input) {
    if (d < 2 || n < 2) throw std::invalid_argument("simulate_qrm: bad ring shape");
    double dim = std::pow(double(d), n);
    if (dim > double(1L << 20)) throw std::runtime_error("simulate_qrm: dimension overflow");
    const long N = std::lround(dim);
    if (input.size() != N) throw std::invalid_argument("simulate_qrm: input dimension mismatch");
    if (R.rows() != d * d || R.cols() != d * d)
        throw std::invalid_argument("simulate_qrm: head must act on two qudits");

    std::vector<long> stride(n, 1);
    for (int i = 1; i < n; ++i) stride[i] = stride[i - 1] * d;
    Vec v = std::move(input);
    for (int s = 0; s < steps; ++s) {
        const int a = s % n, b = (s + 1) % n;
        Vec out = Vec::Zero(N);
        for (long x = 0; x < N; ++x) {
            const int xa = int(x / stride[a]) % d;
            const int xb = int(x / stride[b]) % d;
            const long base = x - xa * stride[a] - xb * stride[b];
            const int in = xa * d + xb;
            for (int o = 0; o < d * d; ++o) {
                const cplx amp = R(o, in);
                if (amp == cplx(0, 0)) continue;
                out[base + (o / d) * stride[a] + (o % d) * stride[b]] += amp * v[x];
            }
        }
        v = std::move(out);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Brute-force gate synthesis (desk-scale Solovay-Kitaev stand-in)

struct SynthesisResult {
    bool found = false;
    GateWord word;
    double distance = 0.0;
};

/// Realizes a ring word on three qubits: G acts on positions (0, 1), cycles
/// permute all three.
inline Mat realize_word_3q(const GateWord& w) {
    const Mat g3 = Eigen::kroneckerProduct(gate_G(), Mat::Identity(2, 2)).eval();
    const Mat gd3 = g3.adjoint();
    auto perm = [](int shift) {
        Mat m = Mat::Zero(8, 8);
        for (int x = 0; x < 8; ++x) {
            int bits[3] = {x >> 2 & 1, x >> 1 & 1, x & 1};
            int nb[3];
            for (int i = 0; i < 3; ++i) nb[((i + shift) % 3 + 3) % 3] = bits[i];
            m(nb[0] * 4 + nb[1] * 2 + nb[2], x) = 1.0;
        }
        return m;
    };
    const Mat cw = perm(1), ccw = perm(-1);
    Mat u = Mat::Identity(8, 8);
    for (RingOp op : w) {
        switch (op) {
            case RingOp::ApplyG: u = g3 * u; break;
            case RingOp::ApplyGdag: u = gd3 * u; break;
            case RingOp::CycleCW: u = cw * u; break;
            case RingOp::CycleCCW: u = ccw * u; break;
        }
    }
    return u;
}

inline Mat embed2on3(const Mat& u4) {
    return Eigen::kroneckerProduct(u4, Mat::Identity(2, 2)).eval();
}

/// Breadth-first search over ring words, shortest first with lexicographic
/// tie-break, minimizing the phase-aligned operator-norm distance.
inline SynthesisResult synthesize(const Mat& target8, double epsilon, int max_len) {
    if (epsilon <= 0) throw std::invalid_argument("synthesize: epsilon must be positive");
    SynthesisResult best;
    best.distance = phase_distance(Mat::Identity(8, 8), target8);
    if (best.distance <= epsilon) {
        best.found = true;
        return best;
    }
    struct Node {
        GateWord word;
        Mat u;
    };
    std::vector<Node> frontier{{GateWord{}, Mat::Identity(8, 8)}};
    const Mat g3 = Eigen::kroneckerProduct(gate_G(), Mat::Identity(2, 2)).eval();
    const std::array<RingOp, 4> ops{RingOp::ApplyG, RingOp::ApplyGdag, RingOp::CycleCW,
                                    RingOp::CycleCCW};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<Node> next;
        next.reserve(frontier.size() * 4);
        for (const auto& node : frontier)
            for (RingOp op : ops) {
                Node n2;
                n2.word = node.word;
                n2.word.push_back(op);
                Mat step;
                switch (op) {
                    case RingOp::ApplyG: step = g3; break;
                    case RingOp::ApplyGdag: step = g3.adjoint(); break;
                    case RingOp::CycleCW: step = realize_word_3q({RingOp::CycleCW}); break;
                    case RingOp::CycleCCW: step = realize_word_3q({RingOp::CycleCCW}); break;
                }
                n2.u = step * node.u;
                const double dist = phase_distance(n2.u, target8);
                if (dist < best.distance - 1e-15) {
                    best.distance = dist;
                    best.word = n2.word;
                }
                if (dist <= epsilon) {
                    best.found = true;
                    best.word = n2.word;
                    best.distance = dist;
                    return best;
                }
                next.push_back(std::move(n2));
            }
        frontier = std::move(next);
    }
    return best;
}

// ---------------------------------------------------------------------------
// Cube parameter arithmetic

struct CubeParams {
    int W = 0, H = 0, D = 0;
    int ring = 0;   // r = W + D
    int m = 0;      // qubit block per qudit
    long steps = 0; // QRM head applications
};

/// Picks cuboid sides realizing the program string p as the counter output,
/// with the ring padded to a multiple of m = ceil(log2 d) and H = 2t(W+D).
inline CubeParams cube_parameters(const std::string& p, int d, long t) {
    if (p.empty()) throw std::invalid_argument("cube_parameters: empty program");
    for (char c : p)
        if (c != '0' && c != '1') throw std::invalid_argument("cube_parameters: non-binary program");
    long value = 0;
    for (char c : p) {
        value = value * 2 + (c == '1');
        if (value > (1L << 40)) throw std::runtime_error("cube_parameters: program value too large");
    }
    if (value == 0)
        throw std::invalid_argument(
            "cube_parameters: program is not a realizable counter output (the front edge reads the "
            "binary value of D, which must be at least 1)");
    if (d < 2) throw std::invalid_argument("cube_parameters: qudit dimension must be >= 2");
    if (t < 1) throw std::invalid_argument("cube_parameters: need at least one head application");

    CubeParams cp;
    cp.D = int(value);
    cp.m = 1;
    while ((1 << cp.m) < d) ++cp.m;
    cp.steps = t;
    int W = int(p.size());
    while ((W + cp.D) % cp.m != 0 || W + cp.D < 2 * cp.m || W < 2) ++W;
    cp.W = W;
    cp.ring = cp.W + cp.D;
    const long H = 2 * t * (cp.W + cp.D);
    if (H > 1'000'000) throw std::runtime_error("cube_parameters: height out of desk range");
    cp.H = int(H);
    return cp;
}

}  // namespace fcch
