#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <string>
#include <vector>

#include "mahlerlab/convex_body.hpp"
#include "mahlerlab/error.hpp"
#include "mahlerlab/vec.hpp"

namespace mahler {

inline constexpr double k_group_dedup_eps = 1e-9;   // element identification tolerance
inline constexpr int k_group_cap = 10000;           // closure size cap

/* Finite subgroup of O(3): generators plus the full closure. */
struct PointGroup {
    std::string name;             // canonical Schoenflies label, e.g. "D_4h"
    int order_param = 0;          // subscript l (0 for the seven finite groups)
    std::vector<Mat3> generators;
    std::vector<Mat3> elements;   // closure, identity first
};

/* Breadth-first closure of a finite matrix group.  Throws NotOrthogonal on a
   bad generator and GroupTooLarge past the element cap. */
inline std::vector<Mat3> generate_group(const std::vector<Mat3>& generators) {
    for (const Mat3& g : generators)
        if (!is_orthogonal(g, k_group_dedup_eps))
            throw NotOrthogonal("group generator is not orthogonal");

    std::vector<Mat3> elems{identity3()};
    auto known = [&](const Mat3& m) {
        for (const Mat3& e : elems)
            if (max_abs_diff(e, m) <= k_group_dedup_eps) return true;
        return false;
    };
    size_t head = 0;
    while (head < elems.size()) {
        Mat3 cur = elems[head++];
        for (const Mat3& g : generators) {
            Mat3 produced = g * cur;
            if (!known(produced)) {
                if (static_cast<int>(elems.size()) >= k_group_cap)
                    throw GroupTooLarge("group closure exceeded the element cap");
                elems.push_back(produced);
            }
        }
    }
    return elems;
}

namespace detail {

inline Mat3 perm_matrix(int a, int b, int c, int sa, int sb, int sc) {
    /* Row i has entry s at column p_i: maps e_{p_i} to s * e_i. */
    Mat3 m;
    m.m = {0, 0, 0, 0, 0, 0, 0, 0, 0};
    m(0, a) = sa;
    m(1, b) = sb;
    m(2, c) = sc;
    return m;
}

struct GroupKey {
    char family;     // 'C', 'S', 'D', 'T', 'O', 'I'
    char variant;    // ' ', 'h', 'v', 'd'
    int l;           // subscript; 0 for T/O/I families where variant carries it
};

inline GroupKey parse_group_name(const std::string& raw, int l_arg) {
    std::string s;
    for (char ch : raw)
        if (ch != '_' && !std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw UnknownName("empty group name");

    char fam = s[0];
    if (fam == 'T' || fam == 'O' || fam == 'I') {
        char var = ' ';
        if (s.size() == 2 && (s[1] == 'h' || (s[1] == 'd' && fam == 'T'))) var = s[1];
        else if (s.size() != 1) throw UnknownName("unknown group name: " + raw);
        if (l_arg > 0) throw BadOrder("group " + raw + " takes no order parameter");
        return {fam, var, 0};
    }
    if (fam != 'C' && fam != 'S' && fam != 'D') throw UnknownName("unknown group name: " + raw);

    size_t i = 1;
    int embedded = 0;
    bool has_digits = false;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        embedded = embedded * 10 + (s[i] - '0');
        has_digits = true;
        ++i;
    }
    char var = ' ';
    if (i < s.size()) {
        var = s[i];
        if ((var != 'h' && var != 'v' && var != 'd') || i + 1 != s.size())
            throw UnknownName("unknown group name: " + raw);
    }
    if (fam == 'S' && var != ' ') throw UnknownName("unknown group name: " + raw);
    if (fam == 'C' && var == 'd') throw UnknownName("unknown group name: " + raw);
    if (fam == 'D' && var == 'v') throw UnknownName("unknown group name: " + raw);

    int l = has_digits ? embedded : l_arg;
    if (has_digits && l_arg > 0 && embedded != l_arg)
        throw BadOrder("conflicting order parameters for group " + raw);
    if (l < 1) throw BadOrder("group " + raw + " needs an order parameter l >= 1");
    return {fam, var, l};
}

} // namespace detail

/* Group catalog in the coordinates used throughout: the l-fold axis is z,
   V is the reflection across the zx-plane, H across the xy-plane; the
   tetrahedral family fixes the simplex with vertices (+-1,+-1,+-1)/sqrt(3)
   (even sign changes), and the icosahedral family fixes the icosahedron with
   vertices (0,+-1,+-phi) and cyclic shifts. */
inline PointGroup schoenflies(const std::string& name, int l = 0) {
    using detail::perm_matrix;
    detail::GroupKey key = detail::parse_group_name(name, l);

    const Mat3 V = diag3(1, -1, 1);
    const Mat3 H = diag3(1, 1, -1);
    PointGroup g;
    g.order_param = key.l;

    auto canon = [&](const std::string& fam, const std::string& var) {
        if (key.l > 0) return fam + "_" + std::to_string(key.l) + var;
        return var.empty() ? fam : fam + "_" + var;
    };

    switch (key.family) {
        case 'C': {
            Mat3 R = rotation_z(2.0 * M_PI / key.l);
            if (key.variant == ' ') { g.name = canon("C", ""); g.generators = {R}; }
            else if (key.variant == 'h') { g.name = canon("C", "h"); g.generators = {R, H}; }
            else { g.name = canon("C", "v"); g.generators = {R, V}; }
            break;
        }
        case 'S': {
            /* S_n is generated by the rotary reflection R_n H; the subscript
               is the full order for even n. */
            Mat3 RH = rotation_z(2.0 * M_PI / key.l) * H;
            g.name = canon("S", "");
            g.generators = {RH};
            break;
        }
        case 'D': {
            if (key.variant == ' ') {
                g.name = canon("D", "");
                g.generators = {rotation_z(2.0 * M_PI / key.l), V * H};
            } else if (key.variant == 'h') {
                g.name = canon("D", "h");
                g.generators = {rotation_z(2.0 * M_PI / key.l), V, H};
            } else {
                g.name = canon("D", "d");
                g.generators = {rotation_z(M_PI / key.l) * H, V};
            }
            break;
        }
        case 'T': {
            const Mat3 RA = perm_matrix(2, 0, 1, +1, +1, +1);   // x->y->z->x
            const Mat3 RB = perm_matrix(2, 0, 1, -1, -1, +1);
            const Mat3 RC = perm_matrix(2, 0, 1, +1, -1, -1);
            const Mat3 RD = perm_matrix(2, 0, 1, -1, +1, -1);
            if (key.variant == ' ') { g.name = "T"; g.generators = {RA, RB, RC, RD}; }
            else if (key.variant == 'd') {
                g.name = "T_d";
                g.generators = {RA, RB, perm_matrix(1, 0, 2, +1, +1, +1)};  // swap x, y
            } else {
                g.name = "T_h";
                g.generators = {RA, RB, diag3(-1, -1, -1)};
            }
            break;
        }
        case 'O': {
            const Mat3 cyc = perm_matrix(2, 0, 1, +1, +1, +1);
            const Mat3 rz = perm_matrix(1, 0, 2, -1, +1, +1);   // quarter turn about z
            if (key.variant == ' ') { g.name = "O"; g.generators = {cyc, rz}; }
            else { g.name = "O_h"; g.generators = {cyc, rz, diag3(-1, -1, -1)}; }
            break;
        }
        case 'I': {
            const double phi = 0.5 * (1.0 + std::sqrt(5.0));
            const Mat3 cyc = perm_matrix(2, 0, 1, +1, +1, +1);
            const Mat3 r5 = rotation_axis({0, 1, phi}, 2.0 * M_PI / 5.0);
            if (key.variant == ' ') { g.name = "I"; g.generators = {cyc, r5}; }
            else { g.name = "I_h"; g.generators = {cyc, r5, diag3(-1, -1, -1)}; }
            break;
        }
        default:
            throw UnknownName("unknown group name: " + name);
    }

    g.elements = generate_group(g.generators);
    return g;
}

/* Orbit of a point under the group, deduplicated, in closure order. */
inline std::vector<Vec3> orbit(const PointGroup& G, const Vec3& p) {
    std::vector<Vec3> pts;
    pts.reserve(G.elements.size());
    for (const Mat3& g : G.elements) {
        Vec3 q = g * p;
        bool dup = false;
        for (const Vec3& r : pts)
            if (dist(q, r) <= k_group_dedup_eps) { dup = true; break; }
        if (!dup) pts.push_back(q);
    }
    return pts;
}

/* Whether every generator maps the vertex set onto itself within tol.
   Generator invariance implies invariance under the whole group. */
inline bool is_invariant(const PointGroup& G, const ConvexBody3& K, double tol = 1e-9) {
    for (const Mat3& g : G.generators) {
        for (const Vec3& v : K.vertices) {
            Vec3 w = g * v;
            double nearest = std::numeric_limits<double>::infinity();
            for (const Vec3& u : K.vertices) nearest = std::min(nearest, dist(w, u));
            if (nearest > tol) return false;
        }
    }
    return true;
}

/* Dimension of the subspace fixed by every element of G: 3 minus the rank
   of the stacked (g - E) blocks, by Gaussian elimination.  The Santalo point
   of a G-invariant body lies in this subspace, so dimension 0 pins it at o. */
inline int fixed_space_dimension(const PointGroup& G) {
    std::vector<std::array<double, 3>> rows;
    rows.reserve(3 * G.generators.size());
    for (const Mat3& g : G.generators)
        for (int r = 0; r < 3; ++r) {
            std::array<double, 3> row{g(r, 0), g(r, 1), g(r, 2)};
            row[r] -= 1.0;
            rows.push_back(row);
        }
    int rank = 0;
    for (int col = 0; col < 3 && rank < static_cast<int>(rows.size()); ++col) {
        int pivot = -1;
        double best = 1e-9;
        for (int i = rank; i < static_cast<int>(rows.size()); ++i)
            if (std::abs(rows[i][col]) > best) { best = std::abs(rows[i][col]); pivot = i; }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (int i = rank + 1; i < static_cast<int>(rows.size()); ++i) {
            double f = rows[i][col] / rows[rank][col];
            for (int c = col; c < 3; ++c) rows[i][c] -= f * rows[rank][c];
        }
        ++rank;
    }
    return 3 - rank;
}

/* Hull of the union of orbits of the seed points: the smallest G-invariant
   convex body containing them. */
inline ConvexBody3 symmetrize(const PointGroup& G, const std::vector<Vec3>& seeds) {
    if (seeds.empty()) throw DegenerateInput("symmetrize needs at least one seed point");
    std::vector<Vec3> pts;
    pts.reserve(seeds.size() * G.elements.size());
    for (const Vec3& s : seeds)
        for (const Mat3& g : G.elements) pts.push_back(g * s);
    return convex_hull_3d(pts);
}

/* Greedy decomposition of the vertex set into orbit representatives. */
inline std::vector<Vec3> orbit_seeds(const PointGroup& G, const ConvexBody3& K, double tol = 1e-6) {
    std::vector<char> covered(K.vertices.size(), 0);
    std::vector<Vec3> seeds;
    for (size_t i = 0; i < K.vertices.size(); ++i) {
        if (covered[i]) continue;
        seeds.push_back(K.vertices[i]);
        for (const Mat3& g : G.elements) {
            Vec3 w = g * K.vertices[i];
            for (size_t j = 0; j < K.vertices.size(); ++j)
                if (!covered[j] && dist(w, K.vertices[j]) <= tol) covered[j] = 1;
        }
    }
    return seeds;
}

} // namespace mahler
