#include "origami/folding.hpp"

#include "origami/integrable.hpp"

namespace origami {

void ModuleSpec::validate() const {
    if (steps.empty()) throw DomainError("module needs at least one step");
    if (s <= 0.0) throw DomainError("scaling factor s must be positive");
    if (singular_threshold <= 0.0)
        throw DomainError("singular threshold must be positive");
    for (const auto& st : steps) {
        if (st.l_L <= 0 || st.l_M <= 0 || st.l_R <= 0)
            throw DomainError("crease lengths must be positive");
        if (st.sigma != 1 && st.sigma != -1)
            throw DomainError("sigma must be +1 or -1");
        if (st.k != 0 && st.k != 1) throw DomainError("k must be 0 or 1");
    }
}

FoldParams ModuleSpec::fold_params(int i) const {
    const int m = step_count();
    const StepSpec& cur = steps[i];
    const StepSpec& next = steps[(i + 1) % m];
    double l_L = cur.l_L, l_R = cur.l_R;
    if (cur.swap_lr) std::swap(l_L, l_R);
    double r1 = next.l_R, r2 = next.l_M, r3 = next.l_L;
    if (i == m - 1) {
        r1 *= s;
        r3 *= s;
    }
    return FoldParams(l_L, l_R, N, r1, r2, r3, cur.sigma);
}

std::pair<double, double> ModuleSpec::g_params(int i) const {
    const int m = step_count();
    const StepSpec& next = steps[(i + 1) % m];
    double r3 = next.l_L, r1 = next.l_R;
    if (i == m - 1) {
        r3 *= s;
        r1 *= s;
    }
    return {r3, r1};
}

Interval ModuleSpec::admissible() const {
    Interval iv{0.0, std::numeric_limits<double>::infinity()};
    for (int i = 0; i < step_count(); ++i) {
        double l_L = steps[i].l_L, l_R = steps[i].l_R;
        const Interval s_iv = admissible_interval(l_L, l_R);
        iv.lo = std::max(iv.lo, s_iv.lo);
        iv.hi = std::min(iv.hi, s_iv.hi);
    }
    return iv;
}

ModuleSpec ModuleSpec::case_a(ModuleCount n,
                              const std::vector<std::array<double, 3>>& lengths,
                              const std::vector<int>& sigma, double s, double mu) {
    if (lengths.size() != sigma.size())
        throw DomainError("lengths and sigma must have equal size");
    ModuleSpec spec;
    spec.N = n;
    spec.s = s;
    spec.mu = mu;
    for (size_t i = 0; i < lengths.size(); ++i)
        spec.steps.push_back({lengths[i][0], lengths[i][1], lengths[i][2],
                              sigma[i], 0, false});
    spec.validate();
    return spec;
}

ModuleSpec ModuleSpec::case_b(ModuleCount n,
                              const std::vector<std::array<double, 3>>& lengths,
                              const std::vector<int>& sigma, double s, double mu) {
    if (lengths.size() % 2 != 0)
        throw DomainError("type-B wiring needs an even step count");
    ModuleSpec spec = case_a(n, lengths, sigma, s, mu);
    for (size_t i = 0; i < spec.steps.size(); ++i) {
        spec.steps[i].k = (i % 2 == 0) ? 1 : 0;
        spec.steps[i].swap_lr = (i % 2 == 1);
    }
    return spec;
}

std::optional<ZigzagState> map_f(const ZigzagState& state, const FoldParams& p) {
    if (p.N.is_infinite()) throw DomainError("map f requires finite N");

    const auto isect = try_sphere_intersection(state, p);
    if (!isect) return std::nullopt;

    const LocalFrame frame = local_frame(state, p);
    const double I = state.action;
    const Vec3 v_local = frame.basis() * Vec3(isect->e1, isect->e2, isect->e3);

    const Mat3 rot = rotation_x(2.0 * M_PI / static_cast<double>(p.N.value()));
    const Vec3 u = Vec3(0.0, -2.0 * I, 0.0) + (rot - Mat3::Identity()) * v_local;

    const double I_next = 0.5 * u.norm();
    if (I_next <= 1e-12) return std::nullopt;  // singular point, U1/U3 interchange
    // the next zigzag has crease lengths (r3, r1); its action must be admissible
    if (!admissible_interval(p.r3, p.r1).contains(I_next)) return std::nullopt;

    const Vec3 r_u3(0.0, -I, I * p.cot_pi_n);
    const Vec3 r_v = frame.origin + v_local;
    const double alpha_next =
        (p.r3 * p.r3 + 4.0 * I_next * I_next - p.r1 * p.r1) /
        (2.0 * p.r3 * 2.0 * I_next);
    const Vec3 v = r_u3 - (r_v + p.r3 * alpha_next * u / (2.0 * I_next));

    const Vec3 e_x = Vec3::UnitX();
    const Vec3 v_hat = v.normalized();
    const double theta_next =
        std::atan2(e_x.cross(v_hat).dot(u.normalized()), e_x.dot(v_hat));
    return ZigzagState{wrap_angle(theta_next), I_next};
}

std::optional<ZigzagState> map_g(const ZigzagState& state, double r3, double r1,
                                 ModuleCount N) {
    const double I = state.action;
    if (I <= 0.0) return std::nullopt;

    if (N.is_infinite())  // pure phase shift of pi, action conserved
        return ZigzagState{wrap_angle(state.theta + M_PI), I};

    const double t1_sq = 16.0 * I * I * r3 * r3 -
                         (4.0 * I * I + r3 * r3 - r1 * r1) *
                             (4.0 * I * I + r3 * r3 - r1 * r1);
    if (t1_sq < 0.0) return std::nullopt;
    const double t1 = std::sqrt(t1_sq);

    const double pin = M_PI / static_cast<double>(N.value());
    const double cot = std::cos(pin) / std::sin(pin);
    const double sn = std::sin(pin);
    const double st = std::sin(state.theta), ct = std::cos(state.theta);

    const double dr2 = r3 * r3 - r1 * r1;
    const double t2 = 4.0 * I * I * cot + t1 * st;
    const double mag = std::sqrt(dr2 * dr2 + t2 * t2);

    const double y_g = -sn * (t2 * (t1 * cot * st - 4.0 * I * I) + dr2 * dr2 * cot);
    const double x_g = -t1 * ct * mag;

    const double I_next = sn / (4.0 * I) * mag;
    if (I_next <= 1e-12) return std::nullopt;
    return ZigzagState{wrap_angle(std::atan2(y_g, x_g)), I_next};
}

StepOutcome step_map(const ZigzagState& state, const ModuleSpec& spec, int i) {
    std::optional<ZigzagState> x = map_f(state, spec.fold_params(i));
    if (x && spec.steps[i].k == 1) {
        const auto [r3, r1] = spec.g_params(i);
        x = map_g(*x, r3, r1, spec.N);
    }
    if (!x || x->action <= spec.singular_threshold)
        return {state, true, i};
    return {*x, false, -1};
}

StepOutcome module_map(const ZigzagState& state, const ModuleSpec& spec) {
    const int m = spec.step_count();

    if (spec.N.is_infinite()) {
        // integrable limit: action update first, then the total frequency
        const double I_next = state.action / spec.s + spec.mu;
        if (I_next <= spec.singular_threshold) return {state, true, m - 1};
        const auto xi = try_total_xi(I_next, spec);
        if (!xi) return {state, true, m - 1};
        return {ZigzagState{wrap_angle(state.theta + xi->unwrapped), I_next},
                false, -1};
    }

    ZigzagState x = state;
    for (int i = 0; i < m; ++i) {
        const StepOutcome out = step_map(x, spec, i);
        if (out.finite) return {x, true, i};
        x = out.state;
    }
    if (!spec.conservative()) {
        x.action = x.action / spec.s + spec.mu;
        if (x.action <= spec.singular_threshold) return {x, true, m - 1};
    }
    return {x, false, -1};
}

double jacobian_det(const ModuleSpec& spec, const ZigzagState& state, double h) {
    const auto eval = [&](double dth, double dI) {
        const StepOutcome out =
            module_map({state.theta + dth, state.action + dI}, spec);
        if (out.finite)
            throw FiniteSolutionError("jacobian stencil point terminated");
        return out.state;
    };
    const ZigzagState tp = eval(h, 0), tm = eval(-h, 0);
    const ZigzagState ip = eval(0, h), im = eval(0, -h);
    const double a = wrap_angle(tp.theta - tm.theta) / (2.0 * h);
    const double b = wrap_angle(ip.theta - im.theta) / (2.0 * h);
    const double c = (tp.action - tm.action) / (2.0 * h);
    const double d = (ip.action - im.action) / (2.0 * h);
    return a * d - b * c;
}

}  // namespace origami
