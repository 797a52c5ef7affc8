#include "origami/integrable.hpp"

#include <algorithm>
#include <cmath>

namespace origami {

std::optional<double> try_xi_f(double action, const FoldParams& p) {
    const auto ab = try_alpha_beta(action, p.l_L, p.l_R);
    if (!ab || action <= 0.0) return std::nullopt;
    const auto isect = try_sphere_intersection({0.0, action}, p);
    if (!isect) return std::nullopt;
    const auto [alpha, beta] = *ab;
    const double a = -isect->e1 * beta + isect->e2 * alpha;
    const double b = isect->e3;  // sigma * sqrt(gamma)
    return std::atan2(b, a);
}

double xi_f(double action, const FoldParams& p) {
    const auto v = try_xi_f(action, p);
    if (!v)
        throw FiniteSolutionError("fold frequency undefined at this action");
    return *v;
}

std::optional<TotalXi> try_total_xi(double action, const ModuleSpec& spec) {
    double sum = 0.0;
    for (int i = 0; i < spec.step_count(); ++i) {
        const auto v = try_xi_f(action, spec.fold_params(i));
        if (!v) return std::nullopt;
        sum += *v;
        if (spec.steps[i].k == 1) {
            const auto [r3, r1] = spec.g_params(i);
            const double disc = 16.0 * action * action * r3 * r3 -
                                std::pow(4.0 * action * action + r3 * r3 - r1 * r1, 2);
            if (disc < 0.0) return std::nullopt;
            sum += M_PI;
        }
    }
    return TotalXi{sum, wrap_angle(sum)};
}

TotalXi total_xi(double action, const ModuleSpec& spec) {
    const auto v = try_total_xi(action, spec);
    if (!v)
        throw FiniteSolutionError("module frequency undefined at this action");
    return *v;
}

FrequencyProfile sample_frequency_profile(const ModuleSpec& spec, Interval range,
                                          int n_samples) {
    FrequencyProfile profile;
    if (n_samples < 2) throw DomainError("need at least two samples");
    for (int i = 0; i < n_samples; ++i) {
        const double I =
            range.lo + (range.hi - range.lo) * i / double(n_samples - 1);
        if (const auto xi = try_total_xi(I, spec))
            profile.samples.push_back({I, xi->unwrapped, xi->wrapped});
    }
    return profile;
}

std::optional<ZigzagState> integrable_map(const ZigzagState& state,
                                          const ModuleSpec& spec) {
    const double I_next = state.action / spec.s + spec.mu;
    if (I_next <= spec.singular_threshold) return std::nullopt;
    const auto xi = try_total_xi(I_next, spec);
    if (!xi) return std::nullopt;
    return ZigzagState{wrap_angle(state.theta + xi->unwrapped), I_next};
}

std::pair<double, double> genfun_constants(double l, double r1, double r2) {
    const double k1 = -std::pow(l, 4) + 2.0 * l * l * (r1 * r1 + r2 * r2) -
                      std::pow(r1 * r1 - r2 * r2, 2);
    const double k2 = 4.0 * r2 * r2;
    return {k1, k2};
}

namespace {

FoldParams symmetric_params(double l, double r1, double r2, int sigma) {
    return FoldParams(l, l, ModuleCount::infinite(), r1, r2, r1, sigma);
}

// I * xi_f + sigma * (l Theta_l + r1 Theta_r1 - r2 rho), without the gauge.
double genfun_symmetric_raw(double action, double l, double r1, double r2,
                            int sigma, GenFunTerms* terms) {
    const auto [k1, k2] = genfun_constants(l, r1, r2);
    if (k1 <= 0.0) throw DomainError("K1 <= 0: symmetric fold inadmissible");
    const double big_k = std::sqrt(k1 / k2);
    if (std::abs(action / big_k) >= 1.0)
        throw DomainError("|I / K| >= 1: outside the closed form's domain");

    const double rho = std::asin(action / big_k);
    const double t = std::tan(0.5 * rho);
    const auto theta_edge = [&](double edge) {
        const double root = std::sqrt(edge * edge - big_k * big_k);
        return std::atan((edge * t + big_k) / root) +
               std::atan((edge * t - big_k) / root);
    };
    const double theta_l = theta_edge(l);
    const double theta_r1 = theta_edge(r1);
    const double xi = xi_f(action, symmetric_params(l, r1, r2, sigma));

    // Partial-fraction coefficients of the frequency-derivative integral.
    // In the acute regime these reduce to -r2 and -r1 r2 / l, turning the
    // edge terms into sigma * (l Theta_l + r1 Theta_r1 - r2 rho); keeping
    // the general form covers obtuse triangles (l^2 < r1^2 - r2^2) too.
    const double c_l =
        (-l * l + r1 * r1 - r2 * r2) / (2.0 * std::sqrt(l * l - big_k * big_k));
    const double c_r1 = -(r1 / l) * (-l * l + r1 * r1 + r2 * r2) /
                        (2.0 * std::sqrt(r1 * r1 - big_k * big_k));
    const double pref = sigma * l / r2;
    const double term_l = -pref * c_l * theta_l;
    const double term_r1 = -pref * c_r1 * theta_r1;
    const double term_r2 = -sigma * r2 * rho;  // -pref * (2 r2^2 / l) * rho / 2

    if (terms) {
        terms->action_frequency_term = action * xi;
        terms->edge_terms = {{{l, term_l / l},
                              {r1, term_r1 / r1},
                              {r2, term_r2 / r2}}};
    }
    return action * xi + term_l + term_r1 + term_r2;
}

// Largest sub-interval of (0, min(l, K)) on which the closed form and the
// fold frequency are both defined; found by scan plus bisection.
Interval symmetric_domain(double l, double r1, double r2, int sigma) {
    const auto [k1, k2] = genfun_constants(l, r1, r2);
    if (k1 <= 0.0) throw DomainError("K1 <= 0: symmetric fold inadmissible");
    const double big_k = std::sqrt(k1 / k2);
    const double hi0 = std::min(l, big_k);
    const FoldParams p = symmetric_params(l, r1, r2, sigma);
    const auto valid = [&](double I) {
        return I > 0.0 && I < big_k * (1.0 - 1e-12) && try_xi_f(I, p).has_value();
    };

    const int n = 256;
    int first = -1, last = -1;
    for (int i = 1; i < n; ++i) {
        const double I = hi0 * i / double(n);
        if (valid(I)) {
            if (first < 0) first = i;
            last = i;
        } else if (first >= 0) {
            break;  // keep the first contiguous valid block
        }
    }
    if (first < 0) throw DomainError("no admissible action for symmetric fold");

    double lo_out = 0.0, lo_in = hi0 * first / double(n);
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo_out + lo_in);
        (valid(mid) ? lo_in : lo_out) = mid;
    }
    double hi_in = hi0 * last / double(n), hi_out = hi0 * (last + 1) / double(n);
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (hi_in + hi_out);
        (valid(mid) ? hi_in : hi_out) = mid;
    }
    return {lo_in, hi_in};
}

}  // namespace

GenFunTerms genfun_symmetric(double action, double l, double r1, double r2,
                             int sigma) {
    if (l <= 0 || r1 <= 0 || r2 <= 0)
        throw DomainError("lengths must be positive");
    GenFunTerms terms{};
    const double raw = genfun_symmetric_raw(action, l, r1, r2, sigma, &terms);

    // Anchor the additive constant to the mean curvature at the domain
    // midpoint, so the curvature identity holds with equality.
    const Interval dom = symmetric_domain(l, r1, r2, sigma);
    const double I_ref = dom.mid();
    double gauge = 0.0;
    try {
        const double h_ref =
            mean_curvature_tetrahedron(I_ref, symmetric_params(l, r1, r2, sigma));
        gauge = h_ref - genfun_symmetric_raw(I_ref, l, r1, r2, sigma, nullptr);
    } catch (const DomainError&) {
        // tetrahedron not embeddable at the midpoint; leave the gauge at zero
    }
    terms.constant_gauge = gauge;
    (void)raw;
    return terms;
}

GenFunTerms genfun_symmetric(double action, const FoldParams& p) {
    if (std::abs(p.l_L - p.l_R) > 1e-12 || std::abs(p.r1 - p.r3) > 1e-12)
        throw NotSymmetric("symmetric closed form requires l_L = l_R and r1 = r3");
    return genfun_symmetric(action, p.l_L, p.r1, p.r2, p.sigma);
}

namespace {

struct Tetrahedron {
    Vec3 u1, u2, u3, v;
};

Tetrahedron embed_tetrahedron(double action, const FoldParams& p) {
    const double I = action;
    if (I <= 0.0) throw DomainError("action must be positive");
    const Vec3 u1 = Vec3::Zero();
    const Vec3 u3(2.0 * I, 0.0, 0.0);

    const double x2 = (p.l_L * p.l_L + 4.0 * I * I - p.l_R * p.l_R) / (4.0 * I);
    const double y2_sq = p.l_L * p.l_L - x2 * x2;
    if (y2_sq <= 0.0)
        throw DomainError("zigzag triangle not embeddable from its lengths");
    const Vec3 u2(x2, std::sqrt(y2_sq), 0.0);

    const double vx = (p.r1 * p.r1 + 4.0 * I * I - p.r3 * p.r3) / (4.0 * I);
    const double vy = (p.r1 * p.r1 - p.r2 * p.r2 + u2.squaredNorm() -
                       2.0 * vx * u2.x()) /
                      (2.0 * u2.y());
    const double vz_sq = p.r1 * p.r1 - vx * vx - vy * vy;
    if (vz_sq < 0.0)
        throw DomainError("tetrahedron not embeddable from its edge lengths");
    return {u1, u2, u3, Vec3(vx, vy, std::sqrt(vz_sq))};
}

// Exterior dihedral angle pi - interior at the edge (a, b) shared by the
// faces opposite vertices c and d.
double exterior_dihedral(const Vec3& a, const Vec3& b, const Vec3& c,
                         const Vec3& d) {
    const Vec3 e = (b - a).normalized();
    Vec3 vc = c - a, vd = d - a;
    vc -= vc.dot(e) * e;
    vd -= vd.dot(e) * e;
    const double cosang =
        std::clamp(vc.dot(vd) / (vc.norm() * vd.norm()), -1.0, 1.0);
    return M_PI - std::acos(cosang);
}

}  // namespace

double mean_curvature_tetrahedron(double action, const FoldParams& p) {
    const Tetrahedron t = embed_tetrahedron(action, p);
    double sum = 0.0;
    sum += 2.0 * action * exterior_dihedral(t.u1, t.u3, t.u2, t.v);
    sum += p.l_L * exterior_dihedral(t.u1, t.u2, t.u3, t.v);
    sum += p.l_R * exterior_dihedral(t.u2, t.u3, t.u1, t.v);
    sum += p.r1 * exterior_dihedral(t.u1, t.v, t.u2, t.u3);
    sum += p.r2 * exterior_dihedral(t.u2, t.v, t.u1, t.u3);
    sum += p.r3 * exterior_dihedral(t.u3, t.v, t.u1, t.u2);
    return 0.5 * sum;
}

namespace {

double adaptive_simpson(const FoldParams& p, double a, double m, double b,
                        double fa, double fm, double fb, double whole,
                        double tol, int depth) {
    if (depth > 48)
        throw ToleranceNotMet("adaptive quadrature refinement stalled");
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = xi_f(lm, p), frm = xi_f(rm, p);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(p, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           adaptive_simpson(p, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double genfun_quadrature(double I0, double I1, const FoldParams& p, double tol) {
    if (tol <= 0.0) throw DomainError("tolerance must be positive");
    if (I0 == I1) return 0.0;
    const double sign = I1 > I0 ? 1.0 : -1.0;
    const double a = std::min(I0, I1), b = std::max(I0, I1);
    const double m = 0.5 * (a + b);
    const double fa = xi_f(a, p), fm = xi_f(m, p), fb = xi_f(b, p);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return sign * adaptive_simpson(p, a, m, b, fa, fm, fb, whole, tol, 0);
}

IntegrabilityClass classify_integrability(const FoldParams& p) {
    // Radicand P expanded in powers of a = 4 I^2: P = C2 a^2 + C1 a + C0.
    const double u = p.l_L * p.l_L;
    const double c = p.l_L * p.l_L - p.l_R * p.l_R;
    const double v = p.r1 * p.r1;
    const double w = p.r2 * p.r2;
    const double z = p.r1 * p.r1 - p.r3 * p.r3;

    const double q1 = (u + v - w) * (u + v - w);
    const double g1 = u - v + w;
    const double g0 = 2.0 * u * z - c * (u + v - w);

    const double c2 = -4.0 * u * v + q1 - g1 * g1;
    const double c1 = 4.0 * u * v * (4.0 * u - 2.0 * c) + (2.0 * c - 4.0 * u) * q1 -
                      2.0 * g1 * g0;
    const double c0 = (-4.0 * u * v + q1) * c * c - g0 * g0;

    const double scale = std::max({std::abs(c2), std::abs(c1), std::abs(c0)});
    const double tol = 1e-10 * scale;
    const bool has2 = std::abs(c2) > tol;
    const bool has1 = std::abs(c1) > tol;
    const bool has0 = std::abs(c0) > tol;

    // A vanishing constant term means P has the factor a = 4 I^2, whose root
    // cancels against the 1/I normalization of the radicand.
    int deg_a;
    if (!has0)
        deg_a = has2 ? 1 : (has1 ? 0 : 0);
    else
        deg_a = has2 ? 2 : (has1 ? 1 : 0);
    const int degree = 2 * deg_a;

    IntegrabilityClass::Kind kind;
    if (degree <= 2)
        kind = IntegrabilityClass::Kind::Elementary;
    else if (degree <= 4)
        kind = IntegrabilityClass::Kind::Elliptic;
    else
        kind = IntegrabilityClass::Kind::Hyperelliptic;
    return {degree, kind};
}

}  // namespace origami
