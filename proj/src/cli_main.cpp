#include "origami/config.hpp"
#include "origami/integrable.hpp"
#include "origami/reconstruction.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

namespace {

using namespace origami;

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = ".";
    int threads = 1;
    std::uint64_t seed = 0;
};

std::ofstream open_csv(const GlobalOpts& g, const ExperimentConfig& cfg,
                       const std::string& name, const std::string& header) {
    std::filesystem::create_directories(g.out_dir);
    const auto path = std::filesystem::path(g.out_dir) / name;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    os << "# config " << cfg.hash << "\n" << header << "\n";
    os.precision(15);
    return os;
}

const ExperimentConfig& need_block(const ExperimentConfig& cfg, bool present,
                                   const std::string& name) {
    if (!present)
        throw ConfigError("config has no '" + name + "' block for this command");
    return cfg;
}

int run_freq_profile(const GlobalOpts& g, const ExperimentConfig& cfg) {
    need_block(cfg, cfg.freq_profile.has_value(), "freq_profile");
    const auto& c = *cfg.freq_profile;
    const Interval range{c.I_lo, c.I_hi};

    const FrequencyProfile prof =
        sample_frequency_profile(cfg.module, range, c.n_samples);
    auto csv = open_csv(g, cfg, "freq_profile.csv", "I,xi_unwrapped,xi_wrapped");
    for (const auto& s : prof.samples)
        csv << s.action << ',' << s.xi_unwrapped << ',' << s.xi_wrapped << '\n';

    const XiZeros zeros = find_xi_zeros(cfg.module, range, c.n_seed);
    const XiExtrema ext = find_xi_extrema(cfg.module, range, c.n_seed);

    std::ostringstream report;
    report.precision(10);
    report << "samples: " << prof.samples.size() << "\nroots:";
    for (double r : zeros.roots) report << ' ' << r;
    report << "\nextrema:";
    for (const auto& [I, xi] : ext.extrema) report << " (" << I << ", " << xi << ")";
    report << "\ndomain_limit: ";
    if (ext.domain_limit)
        report << *ext.domain_limit;
    else
        report << "none";
    report << "\ngaps:";
    for (const auto& iv : zeros.gaps) report << " [" << iv.lo << ", " << iv.hi << "]";
    report << "\nclassification: "
           << (ext.extrema.empty() ? "twist" : "nontwist") << "\n";

    std::cout << report.str();
    std::ofstream rep(std::filesystem::path(g.out_dir) / "freq_report.txt");
    rep << "# config " << cfg.hash << "\n" << report.str();
    return 0;
}

void write_orbit_rows(std::ofstream& csv, int orbit_id, const Orbit& o) {
    const bool finite = o.termination == Orbit::Termination::FiniteSolution;
    for (size_t n = 0; n < o.points.size(); ++n) {
        const bool last = n + 1 == o.points.size();
        csv << orbit_id << ',' << n << ',' << o.points[n].theta << ','
            << o.points[n].action << ',' << (finite && last ? 1 : 0) << '\n';
    }
}

int run_portrait(const GlobalOpts& g, const ExperimentConfig& cfg) {
    need_block(cfg, cfg.portrait.has_value(), "portrait");
    const auto& c = *cfg.portrait;

    const PortraitDataset ds =
        phase_portrait(cfg.module, c.grid, c.steps_per_orbit, g.threads);
    auto csv = open_csv(g, cfg, "portrait.csv", "orbit_id,step,theta,I,finite");
    for (size_t i = 0; i < ds.orbits.size(); ++i)
        write_orbit_rows(csv, static_cast<int>(i), ds.orbits[i]);

    std::ostringstream report;
    report.precision(10);
    int survived = 0;
    for (const auto& o : ds.orbits)
        survived += o.termination == Orbit::Termination::MaxSteps;
    report << "orbits: " << ds.orbits.size() << "\nsurvived: " << survived << "\n";
    if (const auto center =
            find_island_center(cfg.module, c.grid, c.steps_per_orbit, g.threads))
        report << "island_center: theta=" << center->theta
               << " I=" << center->action << "\n";
    else
        report << "island_center: not found\n";

    std::cout << report.str();
    std::ofstream rep(std::filesystem::path(g.out_dir) / "portrait_report.txt");
    rep << "# config " << cfg.hash << "\n" << report.str();
    return 0;
}

int run_orbit(const GlobalOpts& g, const ExperimentConfig& cfg) {
    need_block(cfg, cfg.orbit.has_value(), "orbit");
    const auto& c = *cfg.orbit;

    const Orbit o = iterate(cfg.module, {wrap_angle(c.theta0), c.I0}, c.max_steps);
    auto csv = open_csv(g, cfg, "orbit.csv", "orbit_id,step,theta,I,finite");
    write_orbit_rows(csv, 0, o);

    std::ostringstream report;
    report.precision(10);
    report << "points: " << o.points.size() << "\ntermination: "
           << (o.termination == Orbit::Termination::MaxSteps ? "max_steps"
                                                             : "finite")
           << "\n";
    try {
        const RotationNumber rn = rotation_number(o);
        if (rn.decided)
            report << "rotation_number: " << rn.value << "\n";
        else
            report << "rotation_number: undecided\n";
    } catch (const TooShort&) {
        report << "rotation_number: too short\n";
    }
    std::cout << report.str();
    std::ofstream rep(std::filesystem::path(g.out_dir) / "orbit_report.txt");
    rep << "# config " << cfg.hash << "\n" << report.str();
    return 0;
}

int run_genfun_check(const GlobalOpts& g, const ExperimentConfig& cfg) {
    need_block(cfg, cfg.genfun_check.has_value(), "genfun_check");
    const auto& c = *cfg.genfun_check;
    const FoldParams p = cfg.module.fold_params(c.step);
    const bool symmetric =
        std::abs(p.l_L - p.l_R) < 1e-12 && std::abs(p.r1 - p.r3) < 1e-12;

    auto csv = open_csv(g, cfg, "genfun_check.csv",
                        "I,xi_f,dS_dI,H,resid_dS,H_minus_S");
    const double h = 1e-6;
    for (int i = 0; i < c.n_samples; ++i) {
        const double I = c.I_lo + (c.I_hi - c.I_lo) *
                                      (c.n_samples == 1
                                           ? 0.5
                                           : i / double(c.n_samples - 1));
        try {
            const double xi = xi_f(I, p);
            double s_val, ds;
            if (symmetric) {
                const auto at = [&](double x) {
                    return genfun_symmetric(x, p.l_L, p.r1, p.r2, p.sigma).value();
                };
                s_val = at(I);
                ds = (at(I + h) - at(I - h)) / (2.0 * h);
            } else {
                s_val = genfun_quadrature(c.I_lo, I, p, 1e-10);
                ds = (genfun_quadrature(I - h, I + h, p, 1e-12)) / (2.0 * h);
            }
            const double H = mean_curvature_tetrahedron(I, p);
            csv << I << ',' << xi << ',' << ds << ',' << H << ',' << ds - xi
                << ',' << H - s_val << '\n';
        } catch (const std::runtime_error&) {
            // sample outside the evaluable set: skip the row
        }
    }
    return 0;
}

int run_attractor(const GlobalOpts& g, const ExperimentConfig& cfg) {
    need_block(cfg, cfg.attractor.has_value(), "attractor");
    const auto& c = *cfg.attractor;

    const AttractorScanResult scan =
        attractor_scan(cfg.module, c.grid, c.max_steps, c.burn_in,
                       c.singular_floor, g.threads);
    auto csv = open_csv(g, cfg, "attractor.csv",
                        "theta0,I0,label,rotation,band_width,fix_theta,fix_I");
    int counts[4] = {0, 0, 0, 0};
    for (const auto& [x0, label] : scan.cells) {
        const char* name = "undecided";
        switch (label.kind) {
            case AttractorLabel::Kind::PointAttractor: name = "point"; break;
            case AttractorLabel::Kind::QuasiPeriodicAttractor:
                name = "quasiperiodic";
                break;
            case AttractorLabel::Kind::Finite: name = "finite"; break;
            case AttractorLabel::Kind::Undecided: name = "undecided"; break;
        }
        counts[static_cast<int>(label.kind)]++;
        csv << x0.theta << ',' << x0.action << ',' << name << ','
            << label.rotation << ',' << label.band_width << ','
            << label.fixed_point.theta << ',' << label.fixed_point.action
            << '\n';
    }
    std::cout << "point: " << counts[0] << "\nquasiperiodic: " << counts[1]
              << "\nfinite: " << counts[2] << "\nundecided: " << counts[3]
              << "\n";
    return 0;
}

int run_reconstruct(const GlobalOpts& g, const ExperimentConfig& cfg) {
    need_block(cfg, cfg.reconstruct.has_value(), "reconstruct");
    const auto& c = *cfg.reconstruct;

    const TubeMesh mesh =
        build_tube(cfg.module, {wrap_angle(c.theta0), c.I0}, c.n_rings);
    std::filesystem::create_directories(g.out_dir);
    export_obj(mesh, (std::filesystem::path(g.out_dir) / "tube.obj").string());

    std::ostringstream report;
    report << "vertices: " << mesh.vertices.size()
           << "\nfacets: " << mesh.facets.size()
           << "\nsteps_built: " << mesh.steps_built
           << "\ntruncated: " << (mesh.truncated ? "yes" : "no") << "\n";
    if (!mesh.facets.empty()) {
        if (const auto pair = self_intersects(mesh))
            report << "self_intersection: facets " << pair->first << " and "
                   << pair->second << "\n";
        else
            report << "self_intersection: none\n";
    }
    std::cout << report.str();
    std::ofstream rep(std::filesystem::path(g.out_dir) /
                      "reconstruct_report.txt");
    rep << "# config " << cfg.hash << "\n" << report.str();
    return 0;
}

int run_validate(const GlobalOpts& g, const ExperimentConfig& cfg) {
    need_block(cfg, cfg.validate.has_value(), "validate");
    const auto& c = *cfg.validate;
    const ModuleSpec& spec = cfg.module;

    std::mt19937_64 rng(g.seed);
    const Interval adm = spec.admissible();
    std::uniform_real_distribution<double> u_theta(-M_PI, M_PI);
    std::uniform_real_distribution<double> u_act(
        adm.lo + 0.1 * adm.width(), adm.hi - 0.1 * adm.width());

    bool ok = true;
    std::ostringstream report;
    report.precision(6);

    // Jacobian determinant against 1/s at random admissible points.
    if (!spec.N.is_infinite()) {
        const double target = 1.0 / spec.s;
        int checked = 0, skipped = 0;
        double worst = 0.0;
        for (int n = 0; n < c.n_points; ++n) {
            const ZigzagState x{u_theta(rng), u_act(rng)};
            try {
                worst = std::max(worst, std::abs(jacobian_det(spec, x) - target));
                ++checked;
            } catch (const FiniteSolutionError&) {
                ++skipped;
            }
        }
        const bool pass = checked > 0 && worst < 1e-5;
        ok = ok && pass;
        report << "jacobian: checked=" << checked << " skipped=" << skipped
               << " worst=|det-1/s|=" << worst << (pass ? " PASS" : " FAIL")
               << "\n";

        // Sphere residuals of the step-0 intersection.
        const FoldParams p = spec.fold_params(0);
        double worst_res = 0.0;
        int res_checked = 0;
        for (int n = 0; n < c.n_points; ++n) {
            const ZigzagState x{u_theta(rng), u_act(rng)};
            const auto isect = try_sphere_intersection(x, p);
            if (!isect) continue;
            const ZigzagVertices zv = zigzag_vertices(x, p);
            const Vec3 v = zv.u1 + local_frame(x, p).basis() *
                                       Vec3(isect->e1, isect->e2, isect->e3);
            worst_res = std::max(
                worst_res,
                std::max({std::abs((v - zv.u1).norm() - p.r1),
                          std::abs((v - zv.u2).norm() - p.r2),
                          std::abs((v - zv.u3).norm() - p.r3)}));
            ++res_checked;
        }
        const bool res_pass = res_checked > 0 && worst_res < 1e-10;
        ok = ok && res_pass;
        report << "sphere_residuals: checked=" << res_checked
               << " worst=" << worst_res << (res_pass ? " PASS" : " FAIL")
               << "\n";

        // First-order convergence to the integrable limit.
        const ZigzagState probe{0.3, adm.mid()};
        const auto limit = module_map(probe, [&] {
            ModuleSpec inf = spec;
            inf.N = ModuleCount::infinite();
            return inf;
        }());
        if (limit.ok()) {
            std::vector<double> errs;
            for (long N = 1000; N <= 1024000; N *= 2) {
                ModuleSpec fin = spec;
                fin.N = ModuleCount::finite(N);
                const auto out = module_map(probe, fin);
                if (!out.ok()) break;
                errs.push_back(
                    std::hypot(wrap_angle(out.state.theta - limit.state.theta),
                               out.state.action - limit.state.action));
            }
            bool conv = errs.size() >= 4;
            for (size_t i = 0; i + 1 < errs.size() && conv; ++i) {
                const double ratio = errs[i] / errs[i + 1];
                conv = ratio > 2.0 * 0.7 && ratio < 2.0 * 1.3;
            }
            ok = ok && conv;
            report << "convergence: levels=" << errs.size()
                   << (conv ? " PASS" : " FAIL") << "\n";
        } else {
            report << "convergence: probe terminated, skipped\n";
        }
    } else {
        report << "jacobian: skipped (infinite N)\n";
    }

    std::cout << report.str();
    std::filesystem::create_directories(g.out_dir);
    std::ofstream rep(std::filesystem::path(g.out_dir) / "validate_report.txt");
    rep << "# config " << cfg.hash << "\n" << report.str();
    return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tubular origami tessellation dynamics"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "experiment config file")
        ->required();
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--threads", g.threads, "worker threads");
    app.add_option("--seed", g.seed, "RNG seed for validation draws");

    auto* freq = app.add_subcommand("freq-profile", "frequency profile xi(I)");
    auto* portrait = app.add_subcommand("portrait", "phase portrait dataset");
    auto* orbit = app.add_subcommand("orbit", "single orbit with rotation number");
    auto* genfun = app.add_subcommand("genfun-check",
                                      "generating-function identity table");
    auto* attractor = app.add_subcommand("attractor", "attractor grid scan");
    auto* reconstruct = app.add_subcommand("reconstruct", "3D tube mesh export");
    auto* validate = app.add_subcommand("validate", "invariant suite");
    for (auto* sub : {freq, portrait, orbit, genfun, attractor, reconstruct,
                      validate})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        const ExperimentConfig cfg = origami::load_config(g.config_path);
        if (freq->parsed()) return run_freq_profile(g, cfg);
        if (portrait->parsed()) return run_portrait(g, cfg);
        if (orbit->parsed()) return run_orbit(g, cfg);
        if (genfun->parsed()) return run_genfun_check(g, cfg);
        if (attractor->parsed()) return run_attractor(g, cfg);
        if (reconstruct->parsed()) return run_reconstruct(g, cfg);
        if (validate->parsed()) return run_validate(g, cfg);
        return 1;
    } catch (const origami::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
