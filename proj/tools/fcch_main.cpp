// Command-line workbench: build the classical ground tiling, walk the
// history-state dynamics, diagonalize restricted sectors, and verify the
// construction's claims on desk-scale instances.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include <fcch/dynamics.hpp>
#include <fcch/io.hpp>
#include <fcch/program.hpp>
#include <fcch/spectral.hpp>
#include <fcch/statics.hpp>

using namespace fcch;
using nlohmann::json;

namespace {

struct DimsOpt {
    int W = 0, H = 0, D = 0;
    Dims get() const { return Dims(W, H, D); }
};

void add_dims(CLI::App* cmd, DimsOpt& d, bool required = true) {
    auto* opt = cmd->add_option_function<std::string>(
        "--dims",
        [&d](const std::string& s) {
            if (std::sscanf(s.c_str(), "%d,%d,%d", &d.W, &d.H, &d.D) != 3)
                throw CLI::ValidationError("--dims expects W,H,D");
        },
        "lattice sides W,H,D");
    if (required) opt->required();
}

std::string random_side_program(std::mt19937& rng, int P, int max_gates) {
    while (true) {
        std::string p(P, '0');
        for (auto& ch : p) ch = rng() % 2 ? '1' : '0';
        int gates = 0;
        for (int j = 0; j < P; ++j)
            if (p[j] == '1' && p[(j + 1) % P] == '1') ++gates;
        if (gates <= max_gates) return p;
    }
}

StaticBackground make_background(const Dims& dims, const std::string& program) {
    if (program.empty()) return background_from_ground(dims);
    return StaticBackground(dims, program);
}

int cmd_tiles(const DimsOpt& dims, const std::string& json_path, const std::string& render,
              const std::string& svg_path) {
    const Configuration cfg = solve_static_ground(dims.get());
    const TermCatalog cat = build_static_catalog();
    const Rational e = static_energy(cfg, cat);
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        out << config_to_json(cfg).dump(1) << "\n";
    }
    if (!render.empty()) {
        if (render == "top")
            std::cout << render_top_ascii(cfg);
        else
            std::cout << render_side_ascii(cfg, render);
    }
    if (!svg_path.empty()) {
        std::ofstream out(svg_path);
        out << render_top_svg(cfg);
    }
    json rep = {{"dims", dims_to_json(dims.get())},
                {"front", counter_front_string(dims.get())},
                {"static_energy", e.str()}};
    std::cout << rep.dump() << "\n";
    return e == Rational(0) ? 0 : 1;
}

int cmd_universality() {
    const auto rep = check_universality();
    json out = {{"rank", rep.independent_count},
                {"pass", rep.pass},
                {"sigma_min", rep.sigma_min},
                {"sigma_max", rep.sigma_max},
                {"hermiticity_defect", rep.max_hermiticity_defect}};
    std::cout << out.dump() << "\n";
    return rep.pass ? 0 : 1;
}

int verify_tiles(json& rep) {
    bool pass = true;
    for (int D = 2; D <= 64; ++D) {
        int W = 2;
        while ((1 << W) <= D) ++W;
        pass &= counter_front_string(Dims(W, 2, D)) == counter_oracle_string(W, D);
    }
    const TermCatalog cat = build_static_catalog();
    for (Dims d : {Dims(2, 2, 2), Dims(3, 3, 4)})
        pass &= static_energy(solve_static_ground(d), cat) == Rational(0);
    rep["tiles"] = {{"counter_oracle_match", pass}};
    return pass ? 0 : 1;
}

int verify_dynamics(json& rep, double tol) {
    std::mt19937 rng(11);
    bool pass = true;
    long checked = 0;
    const StaticBackground bg(Dims(2, 4, 2), random_side_program(rng, 8, 3));
    for (int trial = 0; trial < 300; ++trial) {
        ClockConfig c = ClockConfig::multi_head_start(
            bg, {{int(rng() % bg.P()), rng() % 2 ? Dir::L : Dir::R}});
        for (int s = 0; s < int(rng() % 8); ++s) {
            auto succ = apply_rules(c);
            std::vector<Successor> live;
            for (auto& x : succ)
                if (x.rule != RuleKind::BulkBranch) live.push_back(x);
            if (live.empty()) break;
            c = live[rng() % live.size()].config;
        }
        const int heads = head_count(c);
        for (const auto& s : apply_rules(c)) {
            ++checked;
            pass &= head_count(s.config) == heads;
            bool reversed = false;
            for (const auto& b : apply_rules_backward(s.config)) reversed |= b.config == c;
            pass &= reversed;
        }
    }
    const Ulg g = explore_ulg(ClockConfig::canonical_start(bg));
    const auto simp = check_simplicity(g);
    pass &= simp.simple && simp.worst_residual <= tol;
    rep["dynamics"] = {{"transitions_checked", checked},
                       {"simple", simp.simple},
                       {"loop_residual", simp.worst_residual}};
    return pass ? 0 : 1;
}

int verify_spectral(json& rep, double tol) {
    bool pass = true;
    const StaticBackground bg(Dims(2, 2, 2), "11000000");
    const Ulg g = explore_ulg(ClockConfig::canonical_start(bg));
    const double res = laplacian_residual(g);
    pass &= res <= tol;
    const auto h = assemble_hprop(g);
    Vec in = Vec::Zero(1 << g.q);
    in[0] = 1;
    const auto hist = history_state(g, in);
    const double kres = (h.mat * hist.flat()).norm();
    pass &= kres <= 1e-12;
    rep["spectral"] = {{"laplacian_residual", res}, {"kernel_residual", kres}};
    return pass ? 0 : 1;
}

int cmd_verify(const std::string& suite, double tol) {
    json rep;
    int rc = 0;
    if (suite == "universality" || suite == "all") {
        const auto u = check_universality();
        rep["universality"] = {{"rank", u.independent_count}, {"pass", u.pass}};
        rc |= u.pass ? 0 : 1;
    }
    if (suite == "tiles" || suite == "all") rc |= verify_tiles(rep);
    if (suite == "dynamics" || suite == "all") rc |= verify_dynamics(rep, tol);
    if (suite == "spectral" || suite == "all") rc |= verify_spectral(rep, tol);
    rep["pass"] = rc == 0;
    std::cout << rep.dump() << "\n";
    return rc;
}

int cmd_demo(const DimsOpt& dims) {
    const Dims d = dims.get();
    const auto [yes_bg, no_bg] = find_demo_instances(d);
    const auto rep = promise_gap_demo(yes_bg, no_bg);
    json sectors = json::array();
    for (const auto& s : rep.sectors)
        sectors.push_back({{"name", s.name}, {"vertices", s.vertices}, {"lambda", s.lambda}});
    json out = {{"dims", dims_to_json(d)},
                {"yes_program", yes_bg.program},
                {"no_program", no_bg.program},
                {"lambda_yes", rep.lambda_yes},
                {"lambda_no", rep.lambda_no},
                {"A", rep.weights.A},
                {"B", rep.weights.B},
                {"g", rep.weights.g()},
                {"choice_ok", rep.choice_ok},
                {"sectors", sectors},
                {"pass", rep.lambda_yes <= -1.0 / rep.weights.A && rep.lambda_no >= -1e-10}};
    std::cout << out.dump() << "\n";
    return out["pass"].get<bool>() ? 0 : 1;
}

int cmd_evolve(const DimsOpt& dims, const std::string& program) {
    const StaticBackground bg = make_background(dims.get(), program);
    const Ulg g = explore_ulg(ClockConfig::canonical_start(bg));
    int cur = g.initial;
    int step = 0;
    while (true) {
        const auto& v = g.vertices[cur];
        json line = {{"step", step}, {"heads", json::array()}};
        for (const auto& a : v.arrows)
            line["heads"].push_back({{"k", a.k},
                                     {"level", a.y},
                                     {"dir", a.dir == Dir::L ? "L" : "R"},
                                     {"interior", a.interior}});
        for (const auto& b : v.bangs)
            line["heads"].push_back({{"gate_pending", true}, {"level", b.y}});
        int next = -1;
        const UlgEdge* used = nullptr;
        for (int ei : g.adj[cur]) {
            const auto& e = g.edges[ei];
            if (e.u != cur || e.rule == RuleKind::BulkBranch) continue;
            next = e.v;
            used = &e;
        }
        line["action"] = next >= 0 ? rule_name(used->rule) : "terminal";
        std::cout << line.dump() << "\n";
        if (next < 0) break;
        cur = next;
        ++step;
    }
    return 0;
}

int cmd_ulg_export(const DimsOpt& dims, const std::string& program, const std::string& path) {
    const StaticBackground bg = make_background(dims.get(), program);
    const Ulg g = explore_ulg(ClockConfig::canonical_start(bg));
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!path.empty()) {
        file.open(path);
        os = &file;
    }
    *os << "graph ulg {\n";
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        const auto& c = g.vertices[v];
        std::string label = "idle";
        if (!c.arrows.empty())
            label = "k" + std::to_string(c.arrows[0].k) + ",y" + std::to_string(c.arrows[0].y) +
                    (c.arrows[0].interior ? ",bulk" : "");
        if (!c.bangs.empty()) label = "gate-pending,y" + std::to_string(c.bangs[0].y);
        *os << "  v" << v << " [label=\"" << label << "\"];\n";
    }
    for (const auto& e : g.edges) {
        *os << "  v" << e.u << " -- v" << e.v << " [rule=\"" << rule_name(e.rule) << "\"";
        if (e.gate != EdgeGate::None)
            *os << " unitary=\"" << (e.gate == EdgeGate::G ? "G" : "Gdag") << "\" slots=\""
                << e.slot_a << "," << e.slot_b << "\"";
        else
            *os << " unitary=\"I\"";
        *os << "];\n";
    }
    *os << "}\n";
    return 0;
}

int cmd_spectrum(const DimsOpt& dims, const std::string& program, int klow) {
    const StaticBackground bg = make_background(dims.get(), program);
    const Ulg gfull = explore_ulg(ClockConfig::canonical_start(bg));
    const Ulg g = reduced_for_spectral(gfull);
    const auto w = PenaltyWeights::desk_scale(bg.dims, long(g.vertices.size()));
    const auto h = assemble(g, w);
    const auto ground = ground_energy(h);
    json out = {{"dims", dims_to_json(dims.get())},
                {"V", long(g.vertices.size())},
                {"q", g.q},
                {"dim", h.dim},
                {"lambda_min", ground.value},
                {"sector", "one-head"},
                {"A", w.A},
                {"B", w.B}};
    if (klow > 0 && h.dim <= 4096) {
        Mat dense(h.mat);
        Eigen::SelfAdjointEigenSolver<Mat> es(dense);
        json lows = json::array();
        for (long i = 0; i < std::min<long>(klow, h.dim); ++i) lows.push_back(es.eigenvalues()(i));
        out["low_spectrum"] = lows;
        if (h.dim > 1) out["gap"] = es.eigenvalues()(1) - es.eigenvalues()(0);
    }
    std::cout << out.dump() << "\n";
    return 0;
}

int cmd_render(const DimsOpt& dims, const std::string& layer, const std::string& svg_path) {
    const Configuration cfg = solve_static_ground(dims.get());
    if (layer == "top")
        std::cout << render_top_ascii(cfg);
    else
        std::cout << render_side_ascii(cfg, layer);
    if (!svg_path.empty()) {
        std::ofstream out(svg_path);
        out << render_top_svg(cfg);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("FCCH_THREADS")) Eigen::setNbThreads(std::atoi(threads));

    CLI::App app{"face-centered-cubic tiling + history-state workbench"};
    app.require_subcommand(1);

    DimsOpt dims;
    std::string program, json_path, render, svg_path, suite = "all", layer = "top", out_path;
    double tol = 1e-10;
    int klow = 0;

    auto* tiles = app.add_subcommand("tiles", "solve the classical ground configuration");
    add_dims(tiles, dims);
    tiles->add_option("--json", json_path, "write the configuration as JSON");
    tiles->add_option("--render", render, "ASCII render of a layer (top|front|right|back|left)");
    tiles->add_option("--svg", svg_path, "write an SVG of the top layer");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite, "universality|tiles|dynamics|spectral|all")
        ->check(CLI::IsMember({"universality", "tiles", "dynamics", "spectral", "all"}));
    verify->add_option("--tol", tol, "residual tolerance override");

    auto* uni = app.add_subcommand("universality", "gate-set rank report");

    auto* demo = app.add_subcommand("demo", "yes/no promise-gap demonstration");
    add_dims(demo, dims, false);

    auto* evolve = app.add_subcommand("evolve", "stream the history walk as JSON lines");
    add_dims(evolve, dims);
    evolve->add_option("--program", program, "cyclic side program (defaults to the counter's)");

    auto* ulg = app.add_subcommand("ulg", "unitary labeled graph tools");
    ulg->require_subcommand(1);
    auto* ulg_export = ulg->add_subcommand("export", "emit the graph in DOT format");
    add_dims(ulg_export, dims);
    ulg_export->add_option("--program", program, "cyclic side program");
    ulg_export->add_option("--out", out_path, "output path (stdout otherwise)");

    auto* spectrum = app.add_subcommand("spectrum", "restricted-sector ground energy");
    add_dims(spectrum, dims);
    spectrum->add_option("--program", program, "cyclic side program");
    spectrum->add_option("--k", klow, "also report the k lowest eigenvalues (dense sizes only)");

    auto* render_face = app.add_subcommand("render-face", "ASCII/SVG dump of a lattice layer");
    add_dims(render_face, dims);
    render_face->add_option("--layer", layer, "top|front|right|back|left");
    render_face->add_option("--svg", svg_path, "also write the top-layer SVG");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }

    try {
        if (tiles->parsed()) return cmd_tiles(dims, json_path, render, svg_path);
        if (verify->parsed()) return cmd_verify(suite, tol);
        if (uni->parsed()) return cmd_universality();
        if (demo->parsed()) {
            if (dims.W == 0) {
                dims.W = 2;
                dims.H = 3;
                dims.D = 2;
            }
            return cmd_demo(dims);
        }
        if (evolve->parsed()) return cmd_evolve(dims, program);
        if (ulg_export->parsed()) return cmd_ulg_export(dims, program, out_path);
        if (spectrum->parsed()) return cmd_spectrum(dims, program, klow);
        if (render_face->parsed()) return cmd_render(dims, layer, svg_path);
    } catch (const DegenerateInstance& e) {
        std::cerr << "degenerate instance: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 64;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 64;
}
