#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "mahlerlab/bodies.hpp"
#include "mahlerlab/optim.hpp"
#include "mahlerlab/polarity.hpp"
#include "mahlerlab/symmetry.hpp"

namespace mahler {

inline constexpr int k_max_family_seeds = 12;

/* Family of G-invariant bodies: hulls of the G-orbits of k seed points.
   Parameters are three per seed, log radius plus two tangent offsets against
   the fixed reference direction, so radii stay positive for free and the
   parameter-to-body map is deterministic. */
struct InvariantFamily {
    PointGroup group;
    std::vector<Vec3> seed_directions;  // unit reference directions
    std::vector<double> radii;          // positive start radii, one per direction
};

struct SearchConfig {
    int max_evals = 2000;        // evaluation budget per start
    int restarts = 8;            // multistarts, the first from the unperturbed family
    double perturbation = 0.25;  // coordinate jitter applied to restart points
    std::uint64_t seed = 0;
    std::function<void(long, double)> on_evaluation;  // optional (index, product) trace
};

struct SearchResult {
    std::vector<double> best_params;
    double best_product = std::numeric_limits<double>::infinity();
    ConvexBody3 best_body;
    long evaluations = 0;
    int restarts = 0;
    EqualityClass classified = EqualityClass::unknown;
};

namespace detail {

/* Uniforms drawn from the raw engine, so fixed seeds reproduce bit-identical
   runs regardless of the standard library's distribution internals. */
inline double unit_uniform(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline Vec3 ball_point(std::mt19937_64& g) {
    for (;;) {
        Vec3 p{2 * unit_uniform(g) - 1, 2 * unit_uniform(g) - 1, 2 * unit_uniform(g) - 1};
        if (dot(p, p) <= 1.0) return p;
    }
}

inline void tangent_basis(const Vec3& d, Vec3& u, Vec3& v) {
    Vec3 ref = std::abs(d.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    u = normalize(cross(d, ref));
    v = cross(normalize(d), u);
}

/* P(K) for a G-invariant K.  A trivial fixed space pins the Santalo point at
   o, so the inner minimization collapses to one polar volume. */
inline double invariant_product(const PointGroup& G, const ConvexBody3& K) {
    if (fixed_space_dimension(G) == 0) return volume(K) * volume(polar(K));
    return volume_product(K).product;
}

} // namespace detail

/* Body at a parameter vector: seed i sits at radius exp(p[3i]) along its
   reference direction tilted by p[3i+1], p[3i+2] in the tangent basis. */
inline ConvexBody3 family_body(const InvariantFamily& F, const std::vector<double>& p) {
    const size_t k = F.seed_directions.size();
    if (k == 0 || k > static_cast<size_t>(k_max_family_seeds))
        throw DegenerateInput("family needs between 1 and 12 seed directions");
    if (F.radii.size() != k) throw DegenerateInput("family radii do not match its directions");
    if (p.size() != 3 * k) throw DegenerateInput("family parameter vector has the wrong length");

    std::vector<Vec3> seeds;
    seeds.reserve(k);
    for (size_t i = 0; i < k; ++i) {
        if (std::abs(p[3 * i]) > 300) throw DegenerateInput("family radius parameter out of range");
        Vec3 u, v;
        detail::tangent_basis(F.seed_directions[i], u, v);
        Vec3 d = normalize(normalize(F.seed_directions[i]) + p[3 * i + 1] * u + p[3 * i + 2] * v);
        seeds.push_back(d * std::exp(p[3 * i]));
    }
    return symmetrize(F.group, seeds);
}

inline std::vector<double> family_start(const InvariantFamily& F) {
    std::vector<double> p(3 * F.radii.size(), 0.0);
    for (size_t i = 0; i < F.radii.size(); ++i) {
        if (!(F.radii[i] > 0)) throw DegenerateInput("family radii must be positive");
        p[3 * i] = std::log(F.radii[i]);
    }
    return p;
}

/* Downhill simplex multistart over the family parameters.  Degenerate hulls
   score infinity and act as barriers; every evaluation is reported to the
   trace hook, and identical seeds reproduce identical results. */
inline SearchResult minimize_product(const InvariantFamily& F, const SearchConfig& cfg = {}) {
    SearchResult out;
    std::mt19937_64 g(cfg.seed);

    auto objective = [&](const std::vector<double>& p) {
        double value = std::numeric_limits<double>::infinity();
        try {
            value = detail::invariant_product(F.group, family_body(F, p));
        } catch (const Error&) {
        }
        ++out.evaluations;
        if (cfg.on_evaluation) cfg.on_evaluation(out.evaluations, value);
        return value;
    };

    const std::vector<double> start = family_start(F);
    NelderMeadOptions opt;
    opt.max_evals = cfg.max_evals;
    opt.max_restarts = 0;
    opt.throw_on_failure = false;

    for (int r = 0; r < std::max(1, cfg.restarts); ++r) {
        std::vector<double> x0 = start;
        if (r > 0)
            for (double& x : x0) x += cfg.perturbation * (2 * detail::unit_uniform(g) - 1);
        NelderMeadResult nm = nelder_mead(objective, x0, 0.15, opt);
        ++out.restarts;
        if (nm.value < out.best_product) {
            out.best_product = nm.value;
            out.best_params = nm.x;
        }
    }

    if (!std::isfinite(out.best_product))
        throw DegenerateInput("every search start evaluated to a degenerate body");
    out.best_body = family_body(F, out.best_params);
    out.classified =
        classify_equality_class(out.best_body, F.group.name, F.group.order_param, out.best_product);
    return out;
}

/* Minimum over random invariant perturbations of P(perturbed) - P(body).
   Seeds of the body's vertex orbits are displaced inside the eps ball and
   re-symmetrized, so every trial stays in the G-invariant class.  A result
   at or above zero (within tolerance) certifies local minimality at trial
   scale; the zero perturbation reproduces the body and margin 0 exactly. */
inline double certify_local_min(const ConvexBody3& body, const PointGroup& G, double eps,
                                int trials, std::uint64_t seed) {
    if (trials < 1) throw DegenerateInput("certify_local_min needs at least one trial");
    if (!is_invariant(G, body, 1e-6 * body.scale))
        throw NotInvariant("certify_local_min needs a body invariant under " + G.name);

    const double base = detail::invariant_product(G, body);
    const std::vector<Vec3> seeds0 = orbit_seeds(G, body);
    std::mt19937_64 g(seed);

    double min_margin = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
        std::vector<Vec3> seeds = seeds0;
        for (Vec3& s : seeds) s += detail::ball_point(g) * eps;
        try {
            min_margin = std::min(
                min_margin, detail::invariant_product(G, symmetrize(G, seeds)) - base);
        } catch (const Error&) {
            // a perturbation that collapses the hull leaves no product to compare
        }
    }
    return min_margin;
}

} // namespace mahler
