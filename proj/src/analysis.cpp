#include "origami/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace origami {

void parallel_for(int n, int n_threads, const std::function<void(int)>& fn) {
    n_threads = std::max(1, std::min(n_threads, n));
    if (n_threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t)
        workers.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& w : workers) w.join();
}

Orbit iterate(const ModuleSpec& spec, const ZigzagState& x0, int max_steps) {
    if (max_steps < 1) throw DomainError("max_steps must be at least 1");
    Orbit orbit;
    orbit.initial = x0;
    orbit.points.reserve(max_steps + 1);
    orbit.points.push_back(x0);
    ZigzagState x = x0;
    for (int n = 0; n < max_steps; ++n) {
        const StepOutcome out = module_map(x, spec);
        if (out.finite) {
            orbit.termination = Orbit::Termination::FiniteSolution;
            orbit.finite_step = out.step;
            return orbit;
        }
        x = out.state;
        orbit.points.push_back(x);
    }
    orbit.termination = Orbit::Termination::MaxSteps;
    return orbit;
}

ZigzagState GridSpec::point(int idx) const {
    const int it = idx / n_I, ii = idx % n_I;
    const double th =
        n_theta == 1 ? theta_lo
                     : theta_lo + (theta_hi - theta_lo) * it / double(n_theta - 1);
    const double I =
        n_I == 1 ? I_lo : I_lo + (I_hi - I_lo) * ii / double(n_I - 1);
    return {wrap_angle(th), I};
}

PortraitDataset phase_portrait(const ModuleSpec& spec, const GridSpec& grid,
                               int steps_per_orbit, int n_threads) {
    if (grid.size() < 1) throw DomainError("grid must be nonempty");
    PortraitDataset ds;
    ds.orbits.resize(grid.size());
    parallel_for(grid.size(), n_threads, [&](int i) {
        ds.orbits[i] = iterate(spec, grid.point(i), steps_per_orbit);
    });
    return ds;
}

RotationNumber rotation_number(const Orbit& orbit) {
    const int n = static_cast<int>(orbit.points.size());
    if (n < 100 || orbit.termination != Orbit::Termination::MaxSteps)
        throw TooShort("rotation number needs >= 100 points and MaxSteps end");

    std::vector<double> incr(n - 1);
    for (int i = 0; i + 1 < n; ++i)
        incr[i] = wrap_angle(orbit.points[i + 1].theta - orbit.points[i].theta);

    double sum = 0.0;
    std::vector<double> running(incr.size());
    for (size_t i = 0; i < incr.size(); ++i) {
        sum += incr[i];
        running[i] = sum / double(i + 1);
    }
    const double mean = running.back();
    double fluct = 0.0;
    for (size_t i = incr.size() / 2; i < incr.size(); ++i)
        fluct = std::max(fluct, std::abs(running[i] - mean));
    return {fluct <= 1e-3, mean};
}

namespace {

// sin(xi/2) vanishes exactly where the wrapped frequency does, and is
// continuous across the +-pi branch cut of the wrapped value.
std::optional<double> root_indicator(const ModuleSpec& spec, double I) {
    const auto xi = try_total_xi(I, spec);
    if (!xi) return std::nullopt;
    return std::sin(0.5 * xi->unwrapped);
}

}  // namespace

XiZeros find_xi_zeros(const ModuleSpec& spec, Interval I_range, int n_seed) {
    if (n_seed < 2) throw DomainError("need at least two seed intervals");
    XiZeros out;
    std::vector<double> grid(n_seed + 1);
    std::vector<std::optional<double>> val(n_seed + 1);
    for (int i = 0; i <= n_seed; ++i) {
        grid[i] = I_range.lo + (I_range.hi - I_range.lo) * i / double(n_seed);
        val[i] = root_indicator(spec, grid[i]);
    }

    for (int i = 0; i <= n_seed; ++i) {
        if (val[i]) continue;
        int j = i;
        while (j < n_seed && !val[j + 1]) ++j;
        out.gaps.push_back({grid[i], grid[j]});
        i = j;
    }

    for (int i = 0; i < n_seed; ++i) {
        if (!val[i] || !val[i + 1]) continue;
        if (*val[i] == 0.0) {
            out.roots.push_back(grid[i]);
            continue;
        }
        if (*val[i] * *val[i + 1] >= 0.0) continue;
        double a = grid[i], b = grid[i + 1], fa = *val[i];
        bool ok = true;
        while (b - a > 1e-10) {
            const double m = 0.5 * (a + b);
            const auto fm = root_indicator(spec, m);
            if (!fm) {  // gap opened inside the bracket; drop it
                ok = false;
                break;
            }
            if (*fm == 0.0) {
                a = b = m;
                break;
            }
            if (fa * *fm < 0.0) {
                b = m;
            } else {
                a = m;
                fa = *fm;
            }
        }
        if (!ok) continue;
        const double root = 0.5 * (a + b);
        if (const auto xi = try_total_xi(root, spec);
            xi && std::abs(xi->wrapped) < 1e-8)
            out.roots.push_back(root);
    }
    return out;
}

namespace {

std::optional<double> xi_derivative(const ModuleSpec& spec, double I) {
    const double h = std::sqrt(std::numeric_limits<double>::epsilon()) *
                     std::max(1.0, std::abs(I));
    const auto hi = try_total_xi(I + h, spec);
    const auto lo = try_total_xi(I - h, spec);
    if (!hi || !lo) return std::nullopt;
    return (hi->unwrapped - lo->unwrapped) / (2.0 * h);
}

}  // namespace

XiExtrema find_xi_extrema(const ModuleSpec& spec, Interval I_range, int n_seed) {
    if (n_seed < 2) throw DomainError("need at least two seed intervals");
    XiExtrema out;
    std::vector<double> grid(n_seed + 1);
    std::vector<std::optional<double>> der(n_seed + 1);
    for (int i = 0; i <= n_seed; ++i) {
        grid[i] = I_range.lo + (I_range.hi - I_range.lo) * i / double(n_seed);
        der[i] = xi_derivative(spec, grid[i]);
    }

    for (int i = 0; i < n_seed; ++i) {
        if (!der[i] || !der[i + 1]) continue;
        if (*der[i] * *der[i + 1] >= 0.0) continue;
        double a = grid[i], b = grid[i + 1], fa = *der[i];
        bool ok = true;
        while (b - a > 1e-10) {
            const double m = 0.5 * (a + b);
            const auto fm = xi_derivative(spec, m);
            if (!fm) {
                ok = false;
                break;
            }
            if (*fm == 0.0) {
                a = b = m;
                break;
            }
            if (fa * *fm < 0.0) {
                b = m;
            } else {
                a = m;
                fa = *fm;
            }
        }
        if (!ok) continue;
        const double I_star = 0.5 * (a + b);
        if (const auto xi = try_total_xi(I_star, spec))
            out.extrema.emplace_back(I_star, xi->wrapped);
    }

    // Upper evaluability limit, if the profile dies inside the range.
    int last_valid = -1;
    for (int i = n_seed; i >= 0; --i)
        if (try_total_xi(grid[i], spec)) {
            last_valid = i;
            break;
        }
    if (last_valid >= 0 && last_valid < n_seed) {
        double a = grid[last_valid], b = grid[last_valid + 1];
        for (int it = 0; it < 60 && b - a > 1e-12; ++it) {
            const double m = 0.5 * (a + b);
            (try_total_xi(m, spec) ? a : b) = m;
        }
        out.domain_limit = 0.5 * (a + b);
    }
    return out;
}

TwistClassification classify_twist(const ModuleSpec& spec, Interval I_range,
                                   int n_seed) {
    TwistClassification tc;
    tc.detail = find_xi_extrema(spec, I_range, n_seed);
    tc.twist = tc.detail.extrema.empty();
    return tc;
}

std::optional<ZigzagState> refine_fixed_point(const ModuleSpec& spec,
                                              const ZigzagState& guess,
                                              int max_iter, double tol) {
    const auto residual =
        [&](const ZigzagState& x) -> std::optional<Eigen::Vector2d> {
        const StepOutcome out = module_map(x, spec);
        if (out.finite) return std::nullopt;
        return Eigen::Vector2d(wrap_angle(out.state.theta - x.theta),
                               out.state.action - x.action);
    };

    ZigzagState x = guess;
    for (int it = 0; it < max_iter; ++it) {
        const auto f0 = residual(x);
        if (!f0) return std::nullopt;
        if (f0->norm() < tol) return x;

        const double h = 1e-7;
        Eigen::Matrix2d jac;
        const auto ft = residual({x.theta + h, x.action});
        const auto fi = residual({x.theta, x.action + h});
        if (!ft || !fi) return std::nullopt;
        jac.col(0) = (*ft - *f0) / h;
        jac.col(1) = (*fi - *f0) / h;
        if (std::abs(jac.determinant()) < 1e-14) return std::nullopt;

        const Eigen::Vector2d full = jac.partialPivLu().solve(*f0);
        double damp = 1.0;
        bool advanced = false;
        for (int half = 0; half < 8; ++half, damp *= 0.5) {
            const ZigzagState trial{wrap_angle(x.theta - damp * full(0)),
                                    x.action - damp * full(1)};
            const auto ftr = residual(trial);
            if (ftr && ftr->norm() < f0->norm()) {
                x = trial;
                advanced = true;
                break;
            }
        }
        if (!advanced) return std::nullopt;
    }
    const auto f_end = residual(x);
    if (f_end && f_end->norm() < 1e-8) return x;  // accept near-converged
    return std::nullopt;
}

namespace {

double orbit_diameter(const Orbit& o) {
    double th_lo = o.points[0].theta, th_hi = th_lo;
    double i_lo = o.points[0].action, i_hi = i_lo;
    for (const auto& p : o.points) {
        th_lo = std::min(th_lo, p.theta);
        th_hi = std::max(th_hi, p.theta);
        i_lo = std::min(i_lo, p.action);
        i_hi = std::max(i_hi, p.action);
    }
    return std::hypot(th_hi - th_lo, i_hi - i_lo);
}

}  // namespace

std::optional<ZigzagState> find_island_center(const ModuleSpec& spec,
                                              const GridSpec& grid,
                                              int steps_per_orbit,
                                              int n_threads) {
    const PortraitDataset ds =
        phase_portrait(spec, grid, steps_per_orbit, n_threads);
    int best = -1;
    double best_diam = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(ds.orbits.size()); ++i) {
        const Orbit& o = ds.orbits[i];
        if (o.termination != Orbit::Termination::MaxSteps) continue;
        const double d = orbit_diameter(o);
        if (d < best_diam) {
            best_diam = d;
            best = i;
        }
    }
    if (best < 0) return std::nullopt;

    // Seed the refiner at the orbit's centroid (better than the initial
    // point, which sits on the edge of the island's rotation).
    double th = 0.0, ac = 0.0;
    for (const auto& p : ds.orbits[best].points) {
        th += p.theta;
        ac += p.action;
    }
    const double n = double(ds.orbits[best].points.size());
    return refine_fixed_point(spec, {wrap_angle(th / n), ac / n});
}

AttractorScanResult attractor_scan(const ModuleSpec& spec, const GridSpec& grid,
                                   int max_steps, int burn_in,
                                   double singular_floor, int n_threads) {
    if (spec.s == 1.0)
        throw DomainError("attractor scan requires a dissipative module (s != 1)");
    if (grid.size() < 1) throw DomainError("grid must be nonempty");

    AttractorScanResult result;
    result.cells.resize(grid.size());

    parallel_for(grid.size(), n_threads, [&](int idx) {
        const ZigzagState x0 = grid.point(idx);
        AttractorLabel label;

        ZigzagState x = x0;
        bool finite = false;
        for (int n = 0; n < burn_in && !finite; ++n) {
            const StepOutcome out = module_map(x, spec);
            finite = out.finite || out.state.action < singular_floor;
            if (!finite) x = out.state;
        }

        Orbit tail;
        if (!finite) {
            tail.initial = x;
            tail.points.push_back(x);
            for (int n = 0; n < max_steps; ++n) {
                const StepOutcome out = module_map(x, spec);
                if (out.finite || out.state.action < singular_floor) {
                    finite = true;
                    break;
                }
                x = out.state;
                tail.points.push_back(x);
            }
        }

        if (finite) {
            label.kind = AttractorLabel::Kind::Finite;
        } else {
            const int n = static_cast<int>(tail.points.size());
            const int window = std::max(2, std::min(n, 1000));
            Orbit trail;
            trail.points.assign(tail.points.end() - window, tail.points.end());
            trail.initial = trail.points.front();

            double i_lo = trail.points[0].action, i_hi = i_lo;
            double diam = 0.0;
            const ZigzagState& ref = trail.points.back();
            for (const auto& p : trail.points) {
                i_lo = std::min(i_lo, p.action);
                i_hi = std::max(i_hi, p.action);
                diam = std::max(diam, std::hypot(wrap_angle(p.theta - ref.theta),
                                                 p.action - ref.action));
            }
            label.band_width = i_hi - i_lo;

            if (diam < 1e-8) {
                label.kind = AttractorLabel::Kind::PointAttractor;
                label.fixed_point = ref;
            } else if (label.band_width < 1e-4) {
                try {
                    const RotationNumber rn = rotation_number(tail);
                    if (rn.decided) {
                        label.kind = AttractorLabel::Kind::QuasiPeriodicAttractor;
                        label.rotation = rn.value;
                    }
                } catch (const TooShort&) {
                }
            }
        }
        result.cells[idx] = {x0, label};
    });
    return result;
}

}  // namespace origami
