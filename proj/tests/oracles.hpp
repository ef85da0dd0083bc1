#pragma once

// Independent test oracles: exhaustive tiling enumeration by backtracking and
// the exact zero-energy configuration search. Both stay clear of the solver
// code paths they check.

#include <algorithm>
#include <string>
#include <vector>

#include <fcch/statics.hpp>

namespace fcch::testing {

/// Independent row-by-row tiling oracle: enumerates every 0/1 assignment of
/// the top-face edge spins by backtracking over the plaquette and seed
/// constraints, returning all complete solutions as front-edge strings.
struct TilingEnumerator {
    int W, D;
    std::vector<std::vector<int>> Zb;  // -1 unknown, else 0/1; Zb[x][k], k=0..D
    std::vector<std::vector<int>> Xc;  // Xc[x][z], x=0..W
    std::vector<std::string> solutions;

    TilingEnumerator(int w, int d)
        : W(w), D(d), Zb(w, std::vector<int>(d + 1, -1)), Xc(w + 1, std::vector<int>(d, -1)) {}

    bool tile_ok(int x, int z) const {
        if (x < 0 || x >= W || z < 0 || z >= D) return true;
        const int a = Zb[x][z + 1], b = Xc[x + 1][z], s = Zb[x][z], c = Xc[x][z];
        if (a < 0 || b < 0 || s < 0 || c < 0) return true;  // incomplete: undecided
        return WangTile{bool(a), bool(b), bool(s), bool(c)}.valid();
    }

    void run() {
        for (int x = 0; x < W; ++x) Zb[x][D] = 0;  // seeds
        for (int z = 0; z < D; ++z) Xc[W][z] = 1;
        // Assign tile outputs in feed-forward order so every tile's constraint
        // is checked as soon as its four edges are decided.
        std::vector<std::pair<bool, std::pair<int, int>>> order;
        for (int z = D - 1; z >= 0; --z)
            for (int x = W - 1; x >= 0; --x) {
                order.push_back({true, {x, z}});   // Zb[x][z]
                order.push_back({false, {x, z}});  // Xc[x][z]
            }
        dfs(order, 0);
    }

    void dfs(const std::vector<std::pair<bool, std::pair<int, int>>>& order, std::size_t i) {
        if (i == order.size()) {
            std::string front(W, '0');
            for (int x = 0; x < W; ++x) front[x] = Zb[x][0] ? '1' : '0';
            solutions.push_back(front);
            return;
        }
        auto [isZ, xc] = order[i];
        auto [x, c] = xc;
        for (int v = 0; v < 2; ++v) {
            if (isZ)
                Zb[x][c] = v;
            else
                Xc[x][c] = v;
            // check the tiles touching the just-assigned edge
            bool good = tile_ok(x, c) && tile_ok(x - 1, c) && tile_ok(x, c - 1);
            if (good) dfs(order, i + 1);
        }
        if (isZ)
            Zb[x][c] = -1;
        else
            Xc[x][c] = -1;
    }
};

/// Exact exhaustive zero-energy search over red+green assignments. The lower
/// bound groups every site's self-anchored terms (its penalty plus the bonuses
/// it can collect) and minimizes jointly over the site's symbol, so locally
/// suboptimal assignments prune immediately.
struct GroundSearch {
    const Dims dims;
    const TermCatalog cat;
    SiteTable table;
    std::vector<TermInstance> insts;
    std::vector<int> owner;                          // instance -> group site or -1 (loose)
    std::vector<std::vector<std::size_t>> grouped;   // site -> owned instance ids
    std::vector<std::vector<std::size_t>> affected;  // site -> loose ids touching it
    std::vector<std::vector<std::size_t>> gtouch;    // site -> group-owner sites touched
    std::vector<std::uint8_t> vals;                  // 0xFE = unassigned
    std::vector<std::size_t> order;
    std::vector<Rational> loose_min, group_min;
    Rational bound;
    bool allow_bang;
    long zero_count = 0;
    std::vector<std::vector<std::uint8_t>> zeros;

    GroundSearch(const Dims& d, bool bang)
        : dims(d), cat(build_static_catalog()), table(d), vals(table.size(), 0xFE),
          bound(0), allow_bang(bang) {
        insts = instantiate_terms(cat.terms, table);
        owner.assign(insts.size(), -1);
        grouped.resize(table.size());
        affected.resize(table.size());
        gtouch.resize(table.size());
        loose_min.assign(insts.size(), Rational(0));
        group_min.assign(table.size(), Rational(0));
        for (std::size_t s = 0; s < table.size(); ++s)
            if (table.site(s).sub == Sublattice::BlackVertex) vals[s] = std::uint8_t(Black::Q0);

        auto self_anchored = [](const std::string& n) {
            return n.rfind("rx-", 0) == 0 || n == "green-zero-bonus" ||
                   n.rfind("bang-penalty", 0) == 0 || n.rfind("bang-bonus", 0) == 0;
        };
        for (std::size_t i = 0; i < insts.size(); ++i) {
            if (self_anchored(insts[i].term->name)) {
                owner[i] = int(insts[i].sites[0]);
                grouped[owner[i]].push_back(i);
            }
        }
        for (std::size_t i = 0; i < insts.size(); ++i) {
            for (std::uint8_t k = 0; k < insts[i].arity; ++k) {
                const std::size_t s = insts[i].sites[k];
                if (owner[i] < 0)
                    affected[s].push_back(i);
                else if (std::find(gtouch[s].begin(), gtouch[s].end(), std::size_t(owner[i])) ==
                         gtouch[s].end())
                    gtouch[s].push_back(std::size_t(owner[i]));
            }
        }
        for (std::size_t i = 0; i < insts.size(); ++i)
            if (owner[i] < 0) {
                loose_min[i] = min_completion(i, 0xFE, 0);
                bound += loose_min[i];
            }
        for (std::size_t s = 0; s < table.size(); ++s) {
            group_min[s] = eval_group(s);
            bound += group_min[s];
        }
        bound += cat.energy_shift(d);

        for (int y = d.H - 1; y >= 0; --y) {
            for (std::size_t s = 0; s < table.size(); ++s) {
                const Site& st = table.site(s);
                if (st.sub == Sublattice::BlackVertex) continue;
                if ((st.sub == Sublattice::RedFace && st.y == y) ||
                    (st.sub == Sublattice::GreenFace && st.y == y + 1))
                    order.push_back(s);
            }
        }
        for (std::size_t s = 0; s < table.size(); ++s) {
            const Site& st = table.site(s);
            if (st.sub == Sublattice::GreenFace && st.y == 0) order.push_back(s);
        }
    }

    int nsyms(std::size_t s) const {
        const Site& st = table.site(s);
        if (st.sub == Sublattice::RedFace) return allow_bang ? 4 : 3;
        return 4;
    }

    /// Min of one instance over completions, optionally forcing site to v.
    Rational min_completion(std::size_t i, std::size_t force_site, std::uint8_t v) const {
        const TermInstance& ti = insts[i];
        std::vector<int> free_pos;
        std::uint16_t base = 0;
        for (std::uint8_t k = 0; k < ti.arity; ++k) {
            std::uint8_t sv = vals[ti.sites[k]];
            if (ti.sites[k] == force_site) sv = v;
            if (sv == 0xFE)
                free_pos.push_back(k);
            else
                base |= std::uint16_t(sv & 3) << (2 * k);
        }
        Rational best;
        bool first = true;
        const long combos = 1L << (2 * free_pos.size());
        for (long m = 0; m < combos; ++m) {
            std::uint16_t k = base;
            long mm = m;
            for (std::size_t f = 0; f < free_pos.size(); ++f, mm >>= 2)
                k |= std::uint16_t(mm & 3) << (2 * free_pos[f]);
            const Rational w = ti.term->coefficient * ti.term->weight(k);
            if (first || w < best) {
                best = w;
                first = false;
            }
        }
        return best;
    }

    /// Joint lower bound over the site's symbol for all its owned instances.
    Rational eval_group(std::size_t s) {
        if (grouped[s].empty()) return Rational(0);
        if (vals[s] != 0xFE) {
            Rational e(0);
            for (std::size_t i : grouped[s]) e += min_completion(i, table.size(), 0);
            return e;
        }
        Rational best;
        bool first = true;
        for (int v = 0; v < nsyms(s); ++v) {
            Rational e(0);
            for (std::size_t i : grouped[s]) e += min_completion(i, s, std::uint8_t(v));
            if (first || e < best) {
                best = e;
                first = false;
            }
        }
        return best;
    }

    struct Undo {
        std::vector<std::pair<std::size_t, Rational>> loose, groups;
    };

    void assign(std::size_t site, std::uint8_t v, Undo& u) {
        vals[site] = v;
        for (std::size_t i : affected[site]) {
            const Rational m = min_completion(i, table.size(), 0);
            if (m != loose_min[i]) {
                u.loose.push_back({i, loose_min[i]});
                bound += m - loose_min[i];
                loose_min[i] = m;
            }
        }
        auto touch_group = [&](std::size_t g) {
            const Rational m = eval_group(g);
            if (m != group_min[g]) {
                u.groups.push_back({g, group_min[g]});
                bound += m - group_min[g];
                group_min[g] = m;
            }
        };
        touch_group(site);
        for (std::size_t g : gtouch[site]) touch_group(g);
    }

    void dfs(std::size_t pos) {
        if (bound > Rational(0)) return;
        if (pos == order.size()) {
            if (bound == Rational(0)) {
                ++zero_count;
                zeros.push_back(vals);
            }
            return;
        }
        const std::size_t site = order[pos];
        for (int v = 0; v < nsyms(site); ++v) {
            Undo u;
            const Rational saved = bound;
            assign(site, std::uint8_t(v), u);
            dfs(pos + 1);
            for (auto& [i, m] : u.loose) loose_min[i] = m;
            for (auto& [g, m] : u.groups) group_min[g] = m;
            bound = saved;
            vals[site] = 0xFE;
        }
    }

    void run() { dfs(0); }
};


}  // namespace fcch::testing
