#pragma once

#include <sstream>
#include <string>

#include <json.hpp>

#include <fcch/statics.hpp>

namespace fcch {

inline std::string site_key(const Site& s) {
    std::ostringstream os;
    switch (s.sub) {
        case Sublattice::BlackVertex: os << "black"; break;
        case Sublattice::RedFace: os << (s.axis == Axis::X ? "red:x" : "red:z"); break;
        case Sublattice::GreenFace: os << "green"; break;
    }
    os << ":" << s.x << ":" << s.y << ":" << s.z;
    return os.str();
}

inline Site site_from_key(const std::string& key) {
    std::vector<std::string> parts;
    std::stringstream ss(key);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    auto coords = [&](std::size_t off) {
        return std::array<int, 3>{std::stoi(parts.at(off)), std::stoi(parts.at(off + 1)),
                                  std::stoi(parts.at(off + 2))};
    };
    if (parts.at(0) == "black") {
        auto [x, y, z] = coords(1);
        return Site::black(x, y, z);
    }
    if (parts.at(0) == "green") {
        auto [x, y, z] = coords(1);
        return Site::green(x, y, z);
    }
    if (parts.at(0) == "red" && parts.size() >= 5) {
        auto [x, y, z] = coords(2);
        return parts.at(1) == "x" ? Site::redX(x, y, z) : Site::redZ(x, y, z);
    }
    throw std::invalid_argument("bad site key: " + key);
}

inline std::string symbol_name(const Site& s, std::uint8_t raw) {
    if (s.sub == Sublattice::RedFace) return red_name(Red(raw));
    if (s.sub == Sublattice::GreenFace) return green_name(Green(raw));
    switch (Black(raw)) {
        case Black::Q0: return "Q0";
        case Black::Q1: return "Q1";
        case Black::ArrowR: return "R";
        case Black::ArrowL: return "L";
    }
    return "?";
}

inline std::uint8_t symbol_from_name(const Site& s, const std::string& n) {
    if (s.sub == Sublattice::RedFace) {
        if (n == "Rx") return std::uint8_t(Red::Rx);
        if (n == "0") return std::uint8_t(Red::Bit0);
        if (n == "1") return std::uint8_t(Red::Bit1);
        if (n == "!") return std::uint8_t(Red::Bang);
    } else if (s.sub == Sublattice::GreenFace) {
        if (n == "Zero") return std::uint8_t(Green::Zero);
        if (n == "A") return std::uint8_t(Green::A);
        if (n == "B") return std::uint8_t(Green::B);
        if (n == "C") return std::uint8_t(Green::C);
    } else {
        if (n == "Q0") return std::uint8_t(Black::Q0);
        if (n == "Q1") return std::uint8_t(Black::Q1);
        if (n == "R") return std::uint8_t(Black::ArrowR);
        if (n == "L") return std::uint8_t(Black::ArrowL);
    }
    throw std::invalid_argument("bad symbol '" + n + "' for site " + site_key(s));
}

/// Configuration as a JSON map keyed by serialized sites. Unset black
/// placeholders serialize as null.
inline nlohmann::json config_to_json(const Configuration& cfg) {
    nlohmann::json spins = nlohmann::json::object();
    for (const auto& s : cfg.sites().sites()) {
        const std::uint8_t raw = cfg.raw(s);
        if (s.sub == Sublattice::BlackVertex && raw == kUnsetBlack)
            spins[site_key(s)] = nullptr;
        else
            spins[site_key(s)] = symbol_name(s, raw);
    }
    return {{"dims", dims_to_json(cfg.dims())}, {"spins", spins}};
}

inline Configuration config_from_json(const nlohmann::json& j) {
    Configuration cfg(dims_from_json(j.at("dims")));
    for (const auto& s : cfg.sites().sites())
        if (s.sub == Sublattice::BlackVertex) cfg.set_raw(s, kUnsetBlack);
    for (const auto& [key, val] : j.at("spins").items()) {
        const Site s = site_from_key(key);
        if (val.is_null())
            cfg.set_raw(s, kUnsetBlack);
        else
            cfg.set_raw(s, symbol_from_name(s, val.get<std::string>()));
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// Renders

inline char red_glyph(Red r) {
    switch (r) {
        case Red::Rx: return '.';
        case Red::Bit0: return 'o';
        case Red::Bit1: return '#';
        case Red::Bang: return '!';
    }
    return '?';
}

/// Top B layer in top view: rows run back (z = D) to front (z = 0), tile
/// edges drawn between cell corners.
inline std::string render_top_ascii(const Configuration& cfg) {
    const Dims& d = cfg.dims();
    const int top = d.H - 1;
    std::ostringstream os;
    for (int z = d.D; z >= 0; --z) {
        os << "+";
        for (int x = 0; x < d.W; ++x)
            os << " " << red_glyph(cfg.red(Site::redZ(x, top, z))) << " +";
        os << "\n";
        if (z == 0) break;
        for (int x = 0; x <= d.W; ++x) {
            os << red_glyph(cfg.red(Site::redX(x, top, z - 1)));
            if (x < d.W) os << "   ";
        }
        os << "\n";
    }
    return os.str();
}

/// One side face unrolled: rows top to bottom, columns in program-slot order.
inline std::string render_side_ascii(const Configuration& cfg, const std::string& face) {
    const Dims& d = cfg.dims();
    int j0 = 0, len = 0;
    if (face == "front") {
        j0 = 0;
        len = d.W;
    } else if (face == "right") {
        j0 = d.W;
        len = d.D;
    } else if (face == "back") {
        j0 = d.W + d.D;
        len = d.W;
    } else if (face == "left") {
        j0 = 2 * d.W + d.D;
        len = d.D;
    } else {
        throw std::invalid_argument("unknown face: " + face);
    }
    std::ostringstream os;
    for (int y = d.H - 1; y >= 0; --y) {
        for (int j = 0; j < len; ++j) os << red_glyph(cfg.red(side_slot(d, j0 + j, y)));
        os << "\n";
    }
    return os.str();
}

/// SVG of the top B layer: red triangles mark tile edges carrying a 1, white
/// ones a 0; bulk Rx edges are drawn as grey dots.
inline std::string render_top_svg(const Configuration& cfg) {
    const Dims& d = cfg.dims();
    const int top = d.H - 1;
    const int cell = 40;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << d.W * cell + 20
       << "\" height=\"" << d.D * cell + 20 << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"#fffef8\"/>\n";
    auto tri = [&](double cx, double cy, char ori, Red r) {
        if (r == Red::Rx) {
            os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"2\" fill=\"#bbb\"/>\n";
            return;
        }
        const char* fill = r == Red::Bit1 ? "#c22" : (r == Red::Bang ? "#f90" : "#fff");
        const double h = cell * 0.28;
        double x1, y1, x2, y2, x3, y3;
        if (ori == 'v') {  // x-normal edge: triangle points right
            x1 = cx;
            y1 = cy - h;
            x2 = cx;
            y2 = cy + h;
            x3 = cx + h;
            y3 = cy;
        } else {  // z-normal edge: triangle points down (toward the front)
            x1 = cx - h;
            y1 = cy;
            x2 = cx + h;
            y2 = cy;
            x3 = cx;
            y3 = cy + h;
        }
        os << "<polygon points=\"" << x1 << "," << y1 << " " << x2 << "," << y2 << " " << x3 << ","
           << y3 << "\" fill=\"" << fill << "\" stroke=\"#333\" stroke-width=\"0.8\"/>\n";
    };
    auto px = [&](double x) { return 10 + x * cell; };
    auto pz = [&](double z) { return 10 + (d.D - z) * cell; };  // front at the bottom
    for (int x = 0; x <= d.W; ++x)
        for (int z = 0; z < d.D; ++z)
            tri(px(x), pz(z + 0.5), 'v', cfg.red(Site::redX(x, top, z)));
    for (int x = 0; x < d.W; ++x)
        for (int z = 0; z <= d.D; ++z)
            tri(px(x + 0.5), pz(z), 'h', cfg.red(Site::redZ(x, top, z)));
    os << "</svg>\n";
    return os.str();
}

}  // namespace fcch
