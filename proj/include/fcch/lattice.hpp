#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace fcch {

/// Cuboid side lengths in unit cells. x runs along W, y along H (the stacking
/// axis for the A/B layer alternation), z along D. The computation edge is the
/// vertical lattice edge at x = 0, z = 0.
struct Dims {
    int W = 1;
    int H = 1;
    int D = 1;

    Dims() = default;
    Dims(int w, int h, int d) : W(w), H(h), D(d) {
        if (w < 1 || h < 1 || d < 1) throw std::invalid_argument("Dims: sides must be >= 1");
    }
    bool operator==(const Dims&) const = default;

    long cells() const { return long(W) * H * D; }
};

enum class Sublattice : std::uint8_t { BlackVertex = 0, RedFace = 1, GreenFace = 2 };
enum class Axis : std::uint8_t { X = 0, Y = 1, Z = 2 };  // face normal

/// One lattice site. Vertices live at integer coordinates (their `cell` is the
/// coordinate triple). A face site is keyed by the cell corner it is attached
/// to plus its normal axis:
///   RedFace/X   -> position (x,   y+.5, z+.5)   (on plane x, layer B)
///   RedFace/Z   -> position (x+.5, y+.5, z)     (on plane z, layer B)
///   GreenFace/Y -> position (x+.5, y,   z+.5)   (on plane y, layer A)
struct Site {
    Sublattice sub = Sublattice::BlackVertex;
    Axis axis = Axis::Y;  // meaningful for faces only
    int x = 0, y = 0, z = 0;

    bool operator==(const Site&) const = default;

    static Site black(int x, int y, int z) { return {Sublattice::BlackVertex, Axis::Y, x, y, z}; }
    static Site redX(int x, int y, int z) { return {Sublattice::RedFace, Axis::X, x, y, z}; }
    static Site redZ(int x, int y, int z) { return {Sublattice::RedFace, Axis::Z, x, y, z}; }
    static Site green(int x, int y, int z) { return {Sublattice::GreenFace, Axis::Y, x, y, z}; }
};

inline bool contains(const Dims& d, const Site& s) {
    switch (s.sub) {
        case Sublattice::BlackVertex:
            return s.x >= 0 && s.x <= d.W && s.y >= 0 && s.y <= d.H && s.z >= 0 && s.z <= d.D;
        case Sublattice::RedFace:
            if (s.axis == Axis::X)
                return s.x >= 0 && s.x <= d.W && s.y >= 0 && s.y < d.H && s.z >= 0 && s.z < d.D;
            if (s.axis == Axis::Z)
                return s.x >= 0 && s.x < d.W && s.y >= 0 && s.y < d.H && s.z >= 0 && s.z <= d.D;
            return false;
        case Sublattice::GreenFace:
            return s.axis == Axis::Y && s.x >= 0 && s.x < d.W && s.y >= 0 && s.y <= d.H &&
                   s.z >= 0 && s.z < d.D;
    }
    return false;
}

inline long black_count(const Dims& d) { return long(d.W + 1) * (d.H + 1) * (d.D + 1); }
inline long red_x_count(const Dims& d) { return long(d.W + 1) * d.H * d.D; }
inline long red_z_count(const Dims& d) { return long(d.W) * d.H * (d.D + 1); }
inline long green_count(const Dims& d) { return long(d.W) * (d.H + 1) * d.D; }
inline long site_count(const Dims& d) {
    return black_count(d) + red_x_count(d) + red_z_count(d) + green_count(d);
}

/// Deterministic site enumeration: layers bottom-up (layer 2y holds black
/// vertices then green faces, layer 2y+1 the red faces, X normals before Z),
/// in-plane order lexicographic in (z, x). Stable across runs.
class SiteTable {
public:
    explicit SiteTable(const Dims& d) : dims_(d) {
        sites_.reserve(site_count(d));
        for (int y = 0; y <= d.H; ++y) {
            for (int z = 0; z <= d.D; ++z)
                for (int x = 0; x <= d.W; ++x) sites_.push_back(Site::black(x, y, z));
            for (int z = 0; z < d.D; ++z)
                for (int x = 0; x < d.W; ++x) sites_.push_back(Site::green(x, y, z));
            if (y == d.H) break;
            for (int z = 0; z < d.D; ++z)
                for (int x = 0; x <= d.W; ++x) sites_.push_back(Site::redX(x, y, z));
            for (int z = 0; z <= d.D; ++z)
                for (int x = 0; x < d.W; ++x) sites_.push_back(Site::redZ(x, y, z));
        }
        index_.reserve(sites_.size() * 2);
        for (std::size_t i = 0; i < sites_.size(); ++i) index_[key(sites_[i])] = i;
    }

    const Dims& dims() const { return dims_; }
    const std::vector<Site>& sites() const { return sites_; }
    std::size_t size() const { return sites_.size(); }

    std::size_t index(const Site& s) const {
        auto it = index_.find(key(s));
        if (it == index_.end()) throw std::out_of_range("SiteTable::index: site not in lattice");
        return it->second;
    }
    const Site& site(std::size_t i) const { return sites_.at(i); }

private:
    static std::uint64_t key(const Site& s) {
        return (std::uint64_t(s.sub) << 60) | (std::uint64_t(s.axis) << 57) |
               (std::uint64_t(std::uint16_t(s.x)) << 38) |
               (std::uint64_t(std::uint16_t(s.y)) << 19) | std::uint64_t(std::uint16_t(s.z));
    }

    Dims dims_;
    std::vector<Site> sites_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Named stencils

/// A site offset relative to an anchor cell.
struct SiteRef {
    Sublattice sub;
    Axis axis;
    int dx, dy, dz;

    Site at(int x, int y, int z) const { return {sub, axis, x + dx, y + dy, z + dz}; }
};

struct Stencil {
    std::string name;
    std::vector<SiteRef> refs;
};

/// The geometric patterns referenced by the term catalogs and the tests.
inline const std::vector<Stencil>& stencil_catalog() {
    using S = Sublattice;
    using A = Axis;
    static const std::vector<Stencil> cat = {
        // The four red edges of one top-view square (tile) of a B layer.
        {"B-layer plaquette",
         {{S::RedFace, A::Z, 0, 0, 1},    // a: back edge
          {S::RedFace, A::X, 1, 0, 0},    // b: right edge
          {S::RedFace, A::Z, 0, 0, 0},    // s: front edge
          {S::RedFace, A::X, 0, 0, 0}}},  // c: left edge
        // Seed probe for the top-right edge: edge spin, the spin one level
        // below it on the same plane, and the inner pair flagging the top row.
        {"top-right-edge probe",
         {{S::RedFace, A::X, 0, 0, 0},
          {S::RedFace, A::X, 0, -1, 0},
          {S::RedFace, A::Z, -1, 0, 0},
          {S::RedFace, A::Z, -1, -1, 0}}},
        // Diagonal program copy across the front-right cube edge.
        {"corner winding",
         {{S::RedFace, A::Z, 0, 0, 0},
          {S::RedFace, A::X, 1, 1, 0},
          {S::RedFace, A::X, 1, 0, 0},
          {S::RedFace, A::Z, 0, 1, 1}}},
    };
    return cat;
}

inline const Stencil& find_stencil(const std::string& name) {
    for (const auto& s : stencil_catalog())
        if (s.name == name) return s;
    throw std::invalid_argument("unknown stencil: " + name);
}

/// Resolve a stencil against an anchor cell; absent if any site protrudes.
inline std::optional<std::vector<Site>> resolve_stencil(const Stencil& st, const Dims& d, int x,
                                                        int y, int z) {
    std::vector<Site> out;
    out.reserve(st.refs.size());
    for (const auto& r : st.refs) {
        Site s = r.at(x, y, z);
        if (!contains(d, s)) return std::nullopt;
        out.push_back(s);
    }
    return out;
}

/// Sites hit by the named pattern anchored at `site`'s cell, or absent if the
/// pattern protrudes out of the lattice.
inline std::optional<std::vector<Site>> neighbors(const Site& site, const Dims& d,
                                                  const std::string& stencil_name) {
    return resolve_stencil(find_stencil(stencil_name), d, site.x, site.y, site.z);
}

// ---------------------------------------------------------------------------
// Region classification (tests and renderers only; never consulted by terms)

enum class Region { ComputationEdge, TopBLayer, BottomLayer, SideFace, Bulk };

inline const char* region_name(Region r) {
    switch (r) {
        case Region::ComputationEdge: return "ComputationEdge";
        case Region::TopBLayer: return "TopBLayer";
        case Region::BottomLayer: return "BottomLayer";
        case Region::SideFace: return "SideFace";
        case Region::Bulk: return "Bulk";
    }
    return "?";
}

inline Region classify_region(const Site& s, const Dims& d) {
    const bool corner_cell = (s.x == 0 && s.z == 0);
    switch (s.sub) {
        case Sublattice::BlackVertex:
            if (corner_cell) return Region::ComputationEdge;
            if (s.x == 0 || s.x == d.W || s.z == 0 || s.z == d.D) return Region::SideFace;
            if (s.y == 0) return Region::BottomLayer;
            return Region::Bulk;
        case Sublattice::RedFace: {
            if (corner_cell) return Region::ComputationEdge;
            if (s.y == d.H - 1) return Region::TopBLayer;
            const bool side = (s.axis == Axis::X) ? (s.x == 0 || s.x == d.W)
                                                  : (s.z == 0 || s.z == d.D);
            if (side) return Region::SideFace;
            if (s.y == 0) return Region::BottomLayer;
            return Region::Bulk;
        }
        case Sublattice::GreenFace:
            if (corner_cell) return Region::ComputationEdge;
            if (s.y == 0) return Region::BottomLayer;
            return Region::Bulk;
    }
    return Region::Bulk;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json dims_to_json(const Dims& d) {
    return {{"W", d.W}, {"H", d.H}, {"D", d.D}};
}

inline Dims dims_from_json(const nlohmann::json& j) {
    return Dims(j.at("W").get<int>(), j.at("H").get<int>(), j.at("D").get<int>());
}

inline nlohmann::json site_to_json(const Site& s) {
    const char* sub = s.sub == Sublattice::BlackVertex ? "black"
                      : s.sub == Sublattice::RedFace   ? "red"
                                                       : "green";
    nlohmann::json j = {{"sub", sub}, {"cell", {s.x, s.y, s.z}}};
    if (s.sub == Sublattice::BlackVertex)
        j["axis"] = nullptr;
    else
        j["axis"] = s.axis == Axis::X ? "x" : (s.axis == Axis::Y ? "y" : "z");
    return j;
}

inline Site site_from_json(const nlohmann::json& j) {
    Site s;
    const std::string sub = j.at("sub").get<std::string>();
    s.sub = sub == "black" ? Sublattice::BlackVertex
            : sub == "red" ? Sublattice::RedFace
                           : Sublattice::GreenFace;
    const auto& c = j.at("cell");
    s.x = c.at(0).get<int>();
    s.y = c.at(1).get<int>();
    s.z = c.at(2).get<int>();
    if (j.contains("axis") && !j.at("axis").is_null()) {
        const std::string a = j.at("axis").get<std::string>();
        s.axis = a == "x" ? Axis::X : (a == "y" ? Axis::Y : Axis::Z);
    } else {
        s.axis = Axis::Y;
    }
    return s;
}

}  // namespace fcch
