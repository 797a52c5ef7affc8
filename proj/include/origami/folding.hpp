#pragma once

#include "origami/geometry.hpp"

#include <optional>
#include <vector>

namespace origami {

/// One zigzag step of a module: its crease lengths, mountain/valley sign,
/// whether the reparametrization map g follows f here (k), and whether this
/// step's f takes (l_R, l_L) in swapped order (type-B wiring after a g).
struct StepSpec {
    double l_L, l_M, l_R;
    int sigma;      // +1 mountain, -1 valley
    int k = 0;      // 1: apply g after f
    bool swap_lr = false;
};

/// A full module: N, the ordered steps, the similarity scaling s applied at
/// the final step, the drift mu, and the action floor below which an orbit
/// is treated as having crossed the singular point I = 0.
struct ModuleSpec {
    ModuleCount N = ModuleCount::infinite();
    std::vector<StepSpec> steps;
    double s = 1.0;
    double mu = 0.0;
    double singular_threshold = 1e-12;

    int step_count() const { return static_cast<int>(steps.size()); }
    bool conservative() const { return s == 1.0 && mu == 0.0; }

    void validate() const;

    /// Effective f-parameters of step i (swap and final-step scaling applied;
    /// radii come from step i+1 with periodic wraparound). Requires finite N.
    FoldParams fold_params(int i) const;

    /// Effective g-parameters (r3, r1) of step i, scaled at the final step.
    std::pair<double, double> g_params(int i) const;

    /// Intersection of all steps' admissible action intervals.
    Interval admissible() const;

    /// Canned constructor, waterbomb-style wiring: all k = 0, no swaps.
    static ModuleSpec case_a(ModuleCount n,
                             const std::vector<std::array<double, 3>>& lengths,
                             const std::vector<int>& sigma, double s = 1.0,
                             double mu = 0.0);

    /// Canned constructor, alternating type-B wiring: k = 1 on even steps,
    /// and each step following a g takes its lengths in swapped order.
    /// Requires an even step count.
    static ModuleSpec case_b(ModuleCount n,
                             const std::vector<std::array<double, 3>>& lengths,
                             const std::vector<int>& sigma, double s = 1.0,
                             double mu = 0.0);
};

/// Result of applying one or more steps: either the next state, or the
/// finite-solution terminal event with the index of the failing step and the
/// last valid state.
struct StepOutcome {
    ZigzagState state;       // next state, or last valid state when finite
    bool finite = false;
    int step = -1;           // failing step index when finite

    bool ok() const { return !finite; }
};

/// Folding map f: advances the zigzag through the three-sphere intersection.
/// Returns nullopt on finite-solution events (no intersection, next action
/// inadmissible for the new zigzag, or action at the singular floor).
std::optional<ZigzagState> map_f(const ZigzagState& state, const FoldParams& p);

/// Reparametrization map g for type-B connectivity, parameters (r3, r1).
std::optional<ZigzagState> map_g(const ZigzagState& state, double r3, double r1,
                                 ModuleCount N);

/// One step of the module: f with the step's effective parameters, then g
/// when k = 1.
StepOutcome step_map(const ZigzagState& state, const ModuleSpec& spec, int i);

/// The full module transfer map: all steps composed, followed by the
/// normalization (theta, I) -> (theta, I/s + mu) when the module is
/// conformally symplectic.
StepOutcome module_map(const ZigzagState& state, const ModuleSpec& spec);

/// Central-difference Jacobian determinant of the module map. Equals 1 for a
/// conservative module and 1/s for the scaled one. Throws
/// FiniteSolutionError if a stencil point terminates.
double jacobian_det(const ModuleSpec& spec, const ZigzagState& state,
                    double h = 1e-6);

}  // namespace origami
