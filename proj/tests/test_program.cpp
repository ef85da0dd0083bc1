#include <doctest.h>

#include <fstream>
#include <random>

#include <fcch/program.hpp>
#include <fcch/statics.hpp>

using namespace fcch;

TEST_CASE("gate hamiltonian is the printed matrix") {
    const Mat h = gate_hamiltonian();
    CHECK(h(0, 0) == cplx(2, 0));
    CHECK(h(1, 1) == cplx(-1, 0));
    CHECK(h(2, 3) == cplx(0, 0));
    CHECK(operator_norm(h - Mat(h.adjoint())) == 0.0);
    // the printed diagonal sums to 1: H is not traceless
    CHECK(h.trace() == cplx(1, 0));
}

TEST_CASE("G is unitary") {
    const Mat g = gate_G();
    CHECK(operator_norm(g * g.adjoint() - Mat::Identity(4, 4)) <= 1e-12);
    CHECK(operator_norm(g.adjoint() * g - Mat::Identity(4, 4)) <= 1e-12);
}

TEST_CASE("universality: 63 independent generators") {
    const auto entries = load_lie_entries();
    REQUIRE(entries.size() == 61);
    // printed spot check: H_42 = i[H_11, H_5]
    bool hit = false;
    for (const auto& e : entries)
        if (e.j == 42) {
            CHECK(e.r == 11);
            CHECK(e.c == 5);
            hit = true;
        }
    CHECK(hit);

    const auto rep = check_universality(entries);
    CHECK(rep.independent_count == 63);
    CHECK(rep.pass);
    CHECK(rep.max_hermiticity_defect <= 1e-12);
    CHECK(rep.max_commutator_trace <= 1e-9);
}

TEST_CASE("malformed commutator table rejected") {
    const std::string path = "bad_lie_entries.csv";
    {
        std::ofstream out(path);
        out << "3,2,1\n4,5,1\n";  // r >= j
    }
    CHECK_THROWS_AS(load_lie_entries(path), std::runtime_error);
}

TEST_CASE("program encoding table") {
    // right-moving rows
    CHECK(decode_step(Dir::R, 0, 0).exit == Dir::L);
    CHECK(decode_step(Dir::R, 0, 0).gate == EdgeGate::None);
    CHECK(decode_step(Dir::R, 0, 1).exit == Dir::R);
    CHECK(decode_step(Dir::R, 1, 0).exit == Dir::L);
    CHECK(decode_step(Dir::R, 1, 1).gate == EdgeGate::Gdag);
    CHECK(decode_step(Dir::R, 1, 1).exit == Dir::R);
    // left-moving rows mirror with G
    CHECK(decode_step(Dir::L, 0, 0).exit == Dir::R);
    CHECK(decode_step(Dir::L, 0, 1).exit == Dir::L);
    CHECK(decode_step(Dir::L, 1, 0).exit == Dir::R);
    CHECK(decode_step(Dir::L, 1, 1).gate == EdgeGate::G);
    CHECK(decode_step(Dir::L, 1, 1).exit == Dir::L);
}

TEST_CASE("circuit codec") {
    SUBCASE("elementary blocks") {
        CHECK(encode_circuit({}) == "000");
        CHECK(encode_circuit({{EdgeGate::G, 0}}) == "01000110100");     // D G D
        CHECK(encode_circuit({{EdgeGate::Gdag, 0}}) == "00101100010");  // U I U
    }
    SUBCASE("single ops decode back") {
        const auto a = decode_circuit(encode_circuit({{EdgeGate::G, 0}}));
        REQUIRE(a.size() == 1);
        CHECK(a[0] == CircuitOp{EdgeGate::G, 0});
        const auto b = decode_circuit(encode_circuit({{EdgeGate::Gdag, 0}}));
        REQUIRE(b.size() == 1);
        CHECK(b[0] == CircuitOp{EdgeGate::Gdag, 0});
    }
    SUBCASE("round trip over random op sequences") {
        std::mt19937 rng(7);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<CircuitOp> ops;
            const int len = 1 + int(rng() % 6);
            int line = 0;
            for (int i = 0; i < len; ++i) {
                line += int(rng() % 5) - 2;
                ops.push_back({rng() % 2 ? EdgeGate::G : EdgeGate::Gdag, line});
            }
            const std::string p = encode_circuit(ops);
            CHECK(decode_circuit(p) == ops);
            CHECK(p.front() == '0');
            CHECK(p.back() == '0');
        }
    }
}

TEST_CASE("gate word serialization") {
    const GateWord w{RingOp::ApplyG, RingOp::CycleCW, RingOp::ApplyGdag, RingOp::CycleCCW};
    CHECK(gate_word_str(w) == "G,CW,Gd,CCW");
    CHECK(gate_word_parse("G,CW,Gd,CCW") == w);
    CHECK_THROWS_AS(gate_word_parse("G,XX"), std::invalid_argument);
}

TEST_CASE("ring simulator") {
    std::mt19937 rng(99);

    SUBCASE("all-zero program leaves the state cycled only") {
        const int n = 5;
        Vec in = Vec::Random(1 << n);
        in.normalize();
        RingState r;
        r.n = n;
        r.state = in;
        const RingState even = simulate_ring(std::string(8, '0'), n, r, 6);
        CHECK((even.state - in).norm() <= 1e-12);  // L,R alternation cancels
        const RingState odd = simulate_ring(std::string(8, '0'), n, r, 7);
        CHECK((odd.state - detail::cycle_state(in, n, 1)).norm() <= 1e-12);
    }

    SUBCASE("norm preserved") {
        for (int trial = 0; trial < 20; ++trial) {
            const int n = 4;
            std::string p(10, '0');
            for (auto& c : p) c = rng() % 2 ? '1' : '0';
            Vec in = Vec::Random(1 << n);
            in.normalize();
            RingState r;
            r.n = n;
            r.state = in;
            const RingState out = simulate_ring(p, n, r, 17);
            CHECK(std::abs(out.norm() - 1.0) <= 1e-12);
        }
    }

    SUBCASE("gate then its mirror inverse leaves a pure permutation") {
        const int n = 4;
        const std::vector<CircuitOp> ops{{EdgeGate::G, 0}};
        std::vector<CircuitOp> both_ops = ops;
        for (const auto& op : mirror_inverse(ops)) both_ops.push_back(op);
        const std::string both = encode_circuit(both_ops);
        Vec in = Vec::Random(1 << n);
        in.normalize();
        RingState r;
        r.n = n;
        r.state = in;
        const int levels = int(both.size()) - 1;
        const RingState out = simulate_ring(both, n, r, levels, Dir::R);
        // recompute the net cyclic shift from the direction trace
        int shift = 0;
        Dir d = Dir::R;
        for (int l = 1; l <= levels; ++l) {
            shift += d == Dir::L ? 1 : -1;
            d = decode_step(d, both[l - 1] == '1', both[l] == '1').exit;
        }
        CHECK((out.state - detail::cycle_state(in, n, shift)).norm() <= 1e-10);
    }

    SUBCASE("DGD alone equals cycles with one gate insertion") {
        const int n = 4;
        const std::string p = encode_circuit({{EdgeGate::G, 0}});
        const int levels = int(p.size()) - 1;
        Vec in = Vec::Random(1 << n);
        in.normalize();
        Vec v = in;
        Dir d = Dir::R;
        int gates = 0;
        for (int l = 1; l <= levels; ++l) {
            v = detail::cycle_state(v, n, d == Dir::L ? 1 : -1);
            const EdgeAction a = decode_step(d, p[l - 1] == '1', p[l] == '1');
            if (a.gate == EdgeGate::G) {
                v = detail::apply_two_qubit(v, n, gate_G(), 0, n - 1);
                ++gates;
            }
            REQUIRE(a.gate != EdgeGate::Gdag);
            d = a.exit;
        }
        CHECK(gates == 1);
        RingState r;
        r.n = n;
        r.state = in;
        const RingState out = simulate_ring(p, n, r, levels, Dir::R);
        CHECK((out.state - v).norm() <= 1e-12);
    }
}

namespace {
Mat embed_pair(const Mat& r, int d, int n, int a, int b) {
    const long N = std::lround(std::pow(double(d), n));
    std::vector<long> stride(n, 1);
    for (int i = 1; i < n; ++i) stride[i] = stride[i - 1] * d;
    Mat m = Mat::Zero(N, N);
    for (long x = 0; x < N; ++x) {
        const int xa = int(x / stride[a]) % d, xb = int(x / stride[b]) % d;
        const long base = x - xa * stride[a] - xb * stride[b];
        for (int o = 0; o < d * d; ++o)
            m(base + (o / d) * stride[a] + (o % d) * stride[b], x) += r(o, xa * d + xb);
    }
    return m;
}
}  // namespace

TEST_CASE("quantum ring machine reference") {
    SUBCASE("identity head") {
        Vec in = Vec::Random(8);
        in.normalize();
        const Vec out = simulate_qrm(Mat::Identity(4, 4), 2, 3, 5, in);
        CHECK((out - in).norm() <= 1e-14);
    }
    SUBCASE("three swaps cycle three qubits") {
        Mat swap = Mat::Zero(4, 4);
        swap(0, 0) = swap(3, 3) = 1;
        swap(1, 2) = swap(2, 1) = 1;
        for (long basis = 0; basis < 8; ++basis) {
            Vec in = Vec::Zero(8);
            in[basis] = 1;
            const Vec out = simulate_qrm(swap, 2, 3, 3, in);
            const Mat m = embed_pair(swap, 2, 3, 2, 0) * embed_pair(swap, 2, 3, 1, 2) *
                          embed_pair(swap, 2, 3, 0, 1);
            CHECK((out - m * in).norm() <= 1e-14);
        }
    }
    SUBCASE("one full round equals the circuit-diagram product") {
        Mat a = Mat::Random(4, 4);
        Eigen::HouseholderQR<Mat> qr(a);
        const Mat r = qr.householderQ();
        Vec in = Vec::Random(8);
        in.normalize();
        const Mat round =
            embed_pair(r, 2, 3, 2, 0) * embed_pair(r, 2, 3, 1, 2) * embed_pair(r, 2, 3, 0, 1);
        CHECK((simulate_qrm(r, 2, 3, 3, in) - round * in).norm() <= 1e-12);
    }
    SUBCASE("dimension overflow") {
        CHECK_THROWS_AS(simulate_qrm(Mat::Identity(4, 4), 2, 40, 1, Vec::Zero(8)), std::exception);
    }
}

TEST_CASE("brute-force synthesis") {
    const Mat g8 = embed2on3(gate_G());
    SUBCASE("target G") {
        const auto res = synthesize(g8, 1e-10, 3);
        REQUIRE(res.found);
        CHECK(res.word == GateWord{RingOp::ApplyG});
        CHECK(res.distance <= 1e-10);
    }
    SUBCASE("target G dagger") {
        const auto res = synthesize(g8.adjoint(), 1e-10, 3);
        REQUIRE(res.found);
        CHECK(res.word == GateWord{RingOp::ApplyGdag});
    }
    SUBCASE("target G squared needs the two-letter word") {
        const auto res = synthesize(g8 * g8, 1e-9, 4);
        REQUIRE(res.found);
        CHECK(res.word == GateWord{RingOp::ApplyG, RingOp::ApplyG});
        CHECK(res.distance <= 1e-9);
    }
    SUBCASE("budget exhaustion reports the best distance") {
        Mat a = Mat::Random(8, 8);
        Eigen::HouseholderQR<Mat> qr(a);
        const Mat target = qr.householderQ();
        const auto res = synthesize(target, 1e-12, 2);
        CHECK(!res.found);
        CHECK(res.distance > 0);
        if (!res.word.empty())
            CHECK(std::abs(phase_distance(realize_word_3q(res.word), target) - res.distance) <=
                  1e-12);
    }
}

TEST_CASE("cube parameters") {
    const auto cp = cube_parameters("0101", 4, 3);
    CHECK(cp.D == 5);
    CHECK(cp.m == 2);
    CHECK(cp.H == 2 * 3 * (cp.W + cp.D));
    CHECK((cp.W + cp.D) % cp.m == 0);
    CHECK(cp.ring == cp.W + cp.D);
    CHECK(cp.W >= 4);

    // round trip through the counter (modulo the zero padding of the front edge)
    const std::string front = counter_front_string(Dims(cp.W, 2, cp.D));
    CHECK(front.size() == std::size_t(cp.W));
    const auto strip = [](const std::string& s) {
        const auto pos = s.find('1');
        return pos == std::string::npos ? std::string() : s.substr(pos);
    };
    CHECK(strip(front) == strip("0101"));

    CHECK_THROWS_AS(cube_parameters("0000", 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(cube_parameters("", 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(cube_parameters("01a1", 4, 1), std::invalid_argument);
}
