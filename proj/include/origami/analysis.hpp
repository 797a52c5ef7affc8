#pragma once

#include "origami/integrable.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace origami {

/// rotation_number called on an orbit with too few points.
class TooShort : public std::runtime_error {
public:
    explicit TooShort(const std::string& what) : std::runtime_error(what) {}
};

/// Iterated trajectory of the module map, ending at the first terminal event.
struct Orbit {
    enum class Termination { MaxSteps, FiniteSolution };

    ZigzagState initial;
    std::vector<ZigzagState> points;  // points[0] == initial
    Termination termination = Termination::MaxSteps;
    int finite_step = -1;  // failing step index inside the module, if finite
};

Orbit iterate(const ModuleSpec& spec, const ZigzagState& x0, int max_steps);

/// Rectangular grid of initial conditions, row-major over (theta, I).
struct GridSpec {
    double theta_lo = -M_PI, theta_hi = M_PI;
    int n_theta = 1;
    double I_lo = 0.0, I_hi = 0.0;
    int n_I = 1;

    int size() const { return n_theta * n_I; }
    ZigzagState point(int idx) const;
};

struct PortraitDataset {
    std::vector<Orbit> orbits;  // grid order
};

/// One orbit per grid point; finite-terminated orbits are retained with
/// their labels. Deterministic regardless of thread count.
PortraitDataset phase_portrait(const ModuleSpec& spec, const GridSpec& grid,
                               int steps_per_orbit, int n_threads = 1);

/// Birkhoff average of the wrapped angle increments. Undecided when the
/// running average over the last half of the orbit fluctuates by more
/// than 1e-3. Throws TooShort below 100 points or on finite termination.
struct RotationNumber {
    bool decided = false;
    double value = 0.0;
};
RotationNumber rotation_number(const Orbit& orbit);

/// Roots of the wrapped module frequency on the range, from sign-change
/// seeding plus bisection to |dI| < 1e-10. Sub-intervals where the frequency
/// is undefined are reported as gaps, never interpolated across.
struct XiZeros {
    std::vector<double> roots;
    std::vector<Interval> gaps;
};
XiZeros find_xi_zeros(const ModuleSpec& spec, Interval I_range, int n_seed);

/// Interior extrema of xi(I) (sign changes of the finite-difference
/// derivative, refined by bisection), plus the upper evaluability limit of
/// the profile when it lies inside the range.
struct XiExtrema {
    std::vector<std::pair<double, double>> extrema;  // (I*, wrapped xi(I*))
    std::optional<double> domain_limit;
};
XiExtrema find_xi_extrema(const ModuleSpec& spec, Interval I_range, int n_seed);

/// Twist iff the profile has no interior extremum on the range.
struct TwistClassification {
    bool twist = true;
    XiExtrema detail;
};
TwistClassification classify_twist(const ModuleSpec& spec, Interval I_range,
                                   int n_seed = 512);

/// Damped Newton refinement of a fixed point of the module map, seeded at
/// `guess`; finite-difference Jacobian on M(x) - x. Empty when the iteration
/// leaves the domain or fails to converge.
std::optional<ZigzagState> refine_fixed_point(const ModuleSpec& spec,
                                              const ZigzagState& guess,
                                              int max_iter = 50,
                                              double tol = 1e-12);

/// Island-center estimate: the grid orbit with minimal bounding-box
/// diameter, refined by the local fixed-point search.
std::optional<ZigzagState> find_island_center(const ModuleSpec& spec,
                                              const GridSpec& grid,
                                              int steps_per_orbit,
                                              int n_threads = 1);

/// Per-cell attractor label of a dissipative (s != 1) module.
struct AttractorLabel {
    enum class Kind { PointAttractor, QuasiPeriodicAttractor, Finite, Undecided };
    Kind kind = Kind::Undecided;
    ZigzagState fixed_point{};     // PointAttractor witness
    double rotation = 0.0;         // QuasiPeriodicAttractor witness
    double band_width = 0.0;       // I-band of the trailing states
};

struct AttractorScanResult {
    std::vector<std::pair<ZigzagState, AttractorLabel>> cells;  // grid order
};

/// Scans the grid: burn_in iterations discarded, then max_steps recorded.
/// Trailing-state diameter < 1e-8 labels a point attractor; an I-band
/// narrower than 1e-4 with a decided rotation number labels a quasi-periodic
/// one. Orbits that terminate or fall below singular_floor are Finite: at
/// finite N an orbit driven into I ~ 0 keeps exchanging the zigzag endpoints
/// instead of landing exactly on the singular point, so the floor detects
/// the collapse the way the exact threshold cannot.
AttractorScanResult attractor_scan(const ModuleSpec& spec, const GridSpec& grid,
                                   int max_steps, int burn_in = 1000,
                                   double singular_floor = 1e-4,
                                   int n_threads = 1);

/// Runs fn(i) for i in [0, n) on up to n_threads workers. Results must be
/// written to index-addressed storage by the callee; chunking is static so
/// the work distribution is deterministic.
void parallel_for(int n, int n_threads, const std::function<void(int)>& fn);

}  // namespace origami
