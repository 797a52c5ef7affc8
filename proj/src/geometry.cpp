#include "origami/geometry.hpp"

namespace origami {

namespace {
constexpr double kEndpointMargin = 1e-12;
constexpr double kGammaClamp = 1e-12;
constexpr double kFrameDenomTol = 1e-10;
}  // namespace

std::optional<std::pair<double, double>> try_alpha_beta(double action, double l_L,
                                                        double l_R) {
    const Interval iv = admissible_interval(l_L, l_R);
    if (!(action > iv.lo + kEndpointMargin && action < iv.hi - kEndpointMargin))
        return std::nullopt;
    const double alpha = (l_L * l_L + 4.0 * action * action - l_R * l_R) /
                         (4.0 * action * l_L);
    const double b2 = 1.0 - alpha * alpha;
    if (b2 <= 0.0) return std::nullopt;
    return std::make_pair(alpha, std::sqrt(b2));
}

std::pair<double, double> alpha_beta(double action, double l_L, double l_R) {
    if (l_L <= 0 || l_R <= 0) throw DomainError("crease lengths must be positive");
    auto ab = try_alpha_beta(action, l_L, l_R);
    if (!ab)
        throw DomainError("action outside the open admissible interval (|l_L-l_R|/2, (l_L+l_R)/2)");
    return *ab;
}

Mat3 rotation_x(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    Mat3 r;
    r << 1, 0, 0,
         0, c, -s,
         0, s, c;
    return r;
}

Mat3 rotation_x_generator() {
    Mat3 j;
    j << 0, 0, 0,
         0, 0, -1,
         0, 1, 0;
    return j;
}

ZigzagVertices zigzag_vertices(const ZigzagState& state, const FoldParams& p) {
    if (p.N.is_infinite())
        throw DomainError("zigzag vertices require finite N");
    const auto [alpha, beta] = alpha_beta(state.action, p.l_L, p.l_R);
    const double I = state.action;
    const double z = I * p.cot_pi_n;

    ZigzagVertices v;
    v.u1 = Vec3(0.0, I, z);
    v.u3 = Vec3(0.0, -I, z);
    v.u2 = Vec3(0.0, I - p.l_L * alpha, z) +
           p.l_L * beta * Vec3(std::cos(state.theta), 0.0, std::sin(state.theta));
    v.um = v.u1 + p.l_L * alpha * (v.u3 - v.u1) / (2.0 * I);
    return v;
}

LocalFrame local_frame(const ZigzagState& state, const FoldParams& p) {
    const auto [alpha, beta] = alpha_beta(state.action, p.l_L, p.l_R);
    const double c = std::cos(state.theta), s = std::sin(state.theta);
    LocalFrame f;
    f.origin = Vec3(0.0, state.action,
                    p.N.is_infinite() ? 0.0 : state.action * p.cot_pi_n);
    f.e1 = Vec3(beta * c, -alpha, beta * s);
    f.e2 = -Vec3(alpha * c, beta, alpha * s);
    f.e3 = Vec3(s, 0.0, -c);
    return f;
}

std::optional<IntersectionResult> try_sphere_intersection(const ZigzagState& state,
                                                          const FoldParams& p) {
    const auto ab = try_alpha_beta(state.action, p.l_L, p.l_R);
    if (!ab || state.action <= 0.0) return std::nullopt;
    const auto [alpha, beta] = *ab;
    const double I = state.action;

    if (4.0 * I * beta < kFrameDenomTol) return std::nullopt;  // degenerate frame

    IntersectionResult r;
    r.e1 = (p.r1 * p.r1 + p.l_L * p.l_L - p.r2 * p.r2) / (2.0 * p.l_L);
    r.e2 = (p.r1 * p.r1 - p.r3 * p.r3 + 4.0 * I * I - 4.0 * I * r.e1 * alpha) /
           (4.0 * I * beta);
    r.gamma = p.r1 * p.r1 - r.e1 * r.e1 - r.e2 * r.e2;
    if (r.gamma < 0.0) {
        if (r.gamma >= -kGammaClamp)
            r.gamma = 0.0;  // tangent spheres
        else
            return std::nullopt;
    }
    r.e3 = static_cast<double>(p.sigma) * std::sqrt(r.gamma);
    return r;
}

IntersectionResult sphere_intersection(const ZigzagState& state, const FoldParams& p) {
    // Distinguish caller errors from the finite-solution terminal event.
    alpha_beta(state.action, p.l_L, p.l_R);
    auto r = try_sphere_intersection(state, p);
    if (!r)
        throw FiniteSolutionError("three spheres do not intersect (gamma < 0)");
    return *r;
}

}  // namespace origami
