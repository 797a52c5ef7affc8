// Acceptance harness: one pass/fail line per criterion, exit code = number
// of failures. Takes the directory holding the experiment configs as argv[1].
#include "origami/config.hpp"
#include "origami/reconstruction.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>

using namespace origami;

namespace {

int g_failures = 0;

void criterion(const std::string& name, const std::function<bool()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string note;
    try {
        ok = body();
    } catch (const std::exception& e) {
        note = std::string(" [") + e.what() + "]";
    }
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("%s  %-58s (%6.2f s)%s\n", ok ? "PASS" : "FAIL", name.c_str(),
                dt, note.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

ModuleSpec infinite_variant(ModuleSpec spec) {
    spec.N = ModuleCount::infinite();
    return spec;
}

int worker_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min(8u, std::max(1u, hw)));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <config-dir>\n");
        return 1;
    }
    const std::string dir = argv[1];
    const ExperimentConfig exp1 = load_config(dir + "/experiment1.json");
    const ExperimentConfig exp2 = load_config(dir + "/experiment2.json");
    const ExperimentConfig exp3 = load_config(dir + "/experiment3.json");

    const ModuleSpec lim1 = infinite_variant(exp1.module);
    const ModuleSpec lim2 = infinite_variant(exp2.module);

    criterion("twist module: unique resonance on a monotone profile", [&] {
        const XiZeros zeros = find_xi_zeros(lim1, {0.02, 0.745}, 2000);
        if (zeros.roots.size() != 1) return false;
        if (std::abs(zeros.roots[0] - 0.2572) > 1e-3) return false;
        const FrequencyProfile prof =
            sample_frequency_profile(lim1, {0.02, 0.745}, 500);
        for (size_t i = 1; i < prof.samples.size(); ++i)
            if (prof.samples[i].xi_unwrapped >=
                prof.samples[i - 1].xi_unwrapped)
                return false;
        return true;
    });

    criterion("nontwist module: two resonances, two extrema, profile edge", [&] {
        const XiZeros zeros = find_xi_zeros(lim2, {0.18, 0.90}, 4000);
        if (zeros.roots.size() != 2) return false;
        if (std::abs(zeros.roots[0] - 0.29579) > 2e-3) return false;
        if (std::abs(zeros.roots[1] - 0.74304) > 2e-3) return false;
        const XiExtrema ex = find_xi_extrema(lim2, {0.18, 0.90}, 4000);
        if (ex.extrema.size() != 2) return false;
        if (std::abs(ex.extrema[0].first - 0.5257) > 2e-3) return false;
        if (std::abs(ex.extrema[1].first - 0.8087) > 2e-3) return false;
        if (!ex.domain_limit) return false;
        return std::abs(*ex.domain_limit - 0.8091) < 2e-3;
    });

    criterion("transfer maps: unit Jacobian, 1/s under the scaled wiring", [&] {
        std::mt19937_64 rng(42);
        for (const ExperimentConfig* exp : {&exp1, &exp2, &exp3}) {
            const ModuleSpec& spec = exp->module;
            const Interval iv = spec.admissible();
            std::uniform_real_distribution<double> th(-M_PI, M_PI);
            std::uniform_real_distribution<double> act(iv.lo + 0.1 * iv.width(),
                                                       iv.hi - 0.1 * iv.width());
            const double expect = 1.0 / spec.s;
            int checked = 0;
            for (int n = 0; n < 1000; ++n) {
                try {
                    // h = 1e-5: at N = 1e6 the large-N cancellations make
                    // narrower stencils roundoff-dominated
                    const double det =
                        jacobian_det(spec, {th(rng), act(rng)}, 1e-5);
                    if (std::abs(det - expect) > 1e-5) return false;
                    ++checked;
                } catch (const FiniteSolutionError&) {
                }
            }
            if (checked < 300) return false;
        }
        return true;
    });

    criterion("finite-size action defect halves with each N doubling", [&] {
        const ZigzagState x{0.3, 0.35};
        double prev = -1.0;
        for (long N = 1000; N <= 1024000; N *= 2) {
            ModuleSpec spec = exp1.module;
            spec.N = ModuleCount::finite(N);
            const StepOutcome out = module_map(x, spec);
            if (!out.ok()) return false;
            const double defect = std::abs(out.state.action - x.action);
            if (prev > 0.0) {
                const double ratio = prev / defect;
                if (ratio < 1.4 || ratio > 2.6) return false;
            }
            prev = defect;
        }
        return true;
    });

    criterion("generating function: derivative, curvature, closed surface", [&] {
        const GenFunCheckConfig& gc = *exp1.genfun_check;
        const FoldParams p = lim1.fold_params(gc.step);
        const double h = 1e-6;
        double base_diff = 0.0;
        for (int i = 0; i < gc.n_samples; ++i) {
            const double I = gc.I_lo + (gc.I_hi - gc.I_lo) * i /
                                           double(gc.n_samples - 1);
            const double sp = genfun_symmetric(I + h, p).value();
            const double sm = genfun_symmetric(I - h, p).value();
            const double xi = xi_f(I, p);
            if (std::abs((sp - sm) / (2.0 * h) - xi) > 1e-6) return false;
            const double diff =
                mean_curvature_tetrahedron(I, p) - genfun_symmetric(I, p).value();
            if (i == 0)
                base_diff = diff;
            else if (std::abs(diff - base_diff) > 1e-6)
                return false;
            // length-weighted angle increments of a closed flexing surface
            const double dI = 1e-5;
            const double schlafli =
                2.0 * (mean_curvature_tetrahedron(I + dI, p) -
                       mean_curvature_tetrahedron(I, p)) -
                2.0 * dI * xi_f(I + 0.5 * dI, p);
            if (std::abs(schlafli) > 1e-5) return false;
        }
        return true;
    });

    criterion("reparametrization map tends to the half turn", [&] {
        const ZigzagState x{0.2, 0.4};
        const auto out = map_g(x, 0.9, 1.1, ModuleCount::finite(1000000));
        if (!out) return false;
        if (std::abs(out->action - x.action) > 1e-4) return false;
        return std::abs(wrap_angle(out->theta - x.theta - M_PI)) < 1e-4;
    });

    criterion("island center recovered from the phase portrait", [&] {
        const PortraitConfig& pc = *exp1.portrait;
        const auto center = find_island_center(
            exp1.module, pc.grid, pc.steps_per_orbit, worker_count());
        if (!center) return false;
        return std::abs(center->action - 0.2572) < 5e-3;
    });

    criterion("drift selects the attractor; without it orbits collapse", [&] {
        const AttractorConfig& ac = *exp3.attractor;
        const AttractorScanResult driven =
            attractor_scan(exp3.module, ac.grid, 10000, ac.burn_in,
                           ac.singular_floor, worker_count());
        int quasi = 0, finite_driven = 0;
        for (const auto& [x0, label] : driven.cells) {
            if (label.kind == AttractorLabel::Kind::QuasiPeriodicAttractor) {
                ++quasi;
                if (label.band_width >= 1e-4) return false;
            }
            if (label.kind == AttractorLabel::Kind::Finite) ++finite_driven;
        }
        if (quasi < 1) return false;

        ModuleSpec undriven = exp3.module;
        undriven.mu = 0.0;
        const AttractorScanResult bare =
            attractor_scan(undriven, ac.grid, 10000, ac.burn_in,
                           ac.singular_floor, worker_count());
        int finite_bare = 0;
        for (const auto& [x0, label] : bare.cells) {
            if (label.kind == AttractorLabel::Kind::QuasiPeriodicAttractor)
                return false;
            if (label.kind == AttractorLabel::Kind::Finite) ++finite_bare;
        }
        return finite_bare > finite_driven;
    });

    criterion("radical degree separates the two fold families", [&] {
        const IntegrabilityClass sym = classify_integrability(lim1.fold_params(0));
        if (sym.degree != 2) return false;
        if (sym.kind != IntegrabilityClass::Kind::Elementary) return false;
        const IntegrabilityClass gen = classify_integrability(lim2.fold_params(0));
        if (gen.degree != 4) return false;
        return gen.kind == IntegrabilityClass::Kind::Elliptic;
    });

    criterion("crease vertex honors its radii for random folds", [&] {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> len(0.5, 1.5), th(-M_PI, M_PI);
        std::uniform_int_distribution<long> mod(3, 5000);
        int checked = 0;
        for (int n = 0; n < 10000; ++n) {
            const double l_L = len(rng), l_R = len(rng);
            const double r1 = len(rng), r2 = len(rng), r3 = len(rng);
            const Interval iv = admissible_interval(l_L, l_R);
            std::uniform_real_distribution<double> act(
                iv.lo + 0.05 * iv.width(), iv.hi - 0.05 * iv.width());
            const double I = act(rng);
            const double theta1 = th(rng), theta2 = th(rng);
            const long N1 = mod(rng), N2 = mod(rng);
            const FoldParams p1(l_L, l_R, ModuleCount::finite(N1), r1, r2, r3,
                                n % 2 ? 1 : -1);
            const auto isect = try_sphere_intersection({theta1, I}, p1);
            if (!isect) continue;
            ++checked;
            const auto residuals = [&](const FoldParams& p, double theta) {
                const ZigzagState x{theta, I};
                const IntersectionResult r = sphere_intersection(x, p);
                const ZigzagVertices zv = zigzag_vertices(x, p);
                const Vec3 v = zv.u1 + local_frame(x, p).basis() *
                                           Vec3(r.e1, r.e2, r.e3);
                return Vec3((v - zv.u1).norm() - p.r1,
                            (v - zv.u2).norm() - p.r2,
                            (v - zv.u3).norm() - p.r3);
            };
            if (residuals(p1, theta1).cwiseAbs().maxCoeff() > 1e-10)
                return false;
            // the fold tetrahedron's edge lengths do not depend on theta or N
            const FoldParams p2(l_L, l_R, ModuleCount::finite(N2), r1, r2, r3,
                                p1.sigma);
            if (residuals(p2, theta2).cwiseAbs().maxCoeff() > 1e-10)
                return false;
        }
        return checked > 2000;
    });

    std::printf("%d of 10 criteria passed\n", 10 - g_failures);
    return g_failures;
}
