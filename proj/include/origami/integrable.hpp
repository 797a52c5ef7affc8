#pragma once

#include "origami/folding.hpp"

#include <array>
#include <optional>
#include <vector>

namespace origami {

/// Per-module angular advance in the infinite-N limit, reported both
/// unwrapped (plain sum over steps) and wrapped to (-pi, pi].
struct TotalXi {
    double unwrapped;
    double wrapped;
};

/// Frequency of a single fold in the infinite-N limit:
/// xi_f = arctan2(sigma * sqrt(gamma), -e1 * beta + e2 * alpha).
double xi_f(double action, const FoldParams& p);
std::optional<double> try_xi_f(double action, const FoldParams& p);

/// Sum of per-step fold frequencies plus pi for every step with k = 1.
TotalXi total_xi(double action, const ModuleSpec& spec);
std::optional<TotalXi> try_total_xi(double action, const ModuleSpec& spec);

/// Sampled frequency profile xi(I) of a module.
struct FrequencySample {
    double action;
    double xi_unwrapped;
    double xi_wrapped;
};
struct FrequencyProfile {
    std::vector<FrequencySample> samples;
};

/// Samples xi(I) on a uniform grid over `range`; actions where the geometry
/// admits no real fold are skipped.
FrequencyProfile sample_frequency_profile(const ModuleSpec& spec, Interval range,
                                          int n_samples);

/// Exact infinite-N update: I' = I/s + mu, theta' = theta + xi(I').
std::optional<ZigzagState> integrable_map(const ZigzagState& state,
                                          const ModuleSpec& spec);

/// Closed-form generating function of a symmetric fold (l_L = l_R = l,
/// r1 = r3), assembled from the action-frequency term and the edge terms.
struct GenFunTerms {
    double action_frequency_term;  // I * xi_f
    struct EdgeTerm {
        double length;
        double exterior_angle;
    };
    std::array<EdgeTerm, 3> edge_terms;  // edges l, r1, r2
    double constant_gauge;

    double value() const {
        double s = action_frequency_term + constant_gauge;
        for (const auto& e : edge_terms) s += e.length * e.exterior_angle;
        return s;
    }
};

/// Evaluates the symmetric closed form. The additive constant is fixed so
/// that the value agrees with the total mean curvature of the fold
/// tetrahedron at the midpoint of the admissible interval.
GenFunTerms genfun_symmetric(double action, double l, double r1, double r2,
                             int sigma);
/// Overload checking the symmetry preconditions of a FoldParams.
GenFunTerms genfun_symmetric(double action, const FoldParams& p);

/// Altitude K = sqrt(K1 / K2) of the triangle with sides (l, r1, r2) onto
/// the base r2, used by the symmetric closed form.
std::pair<double, double> genfun_constants(double l, double r1, double r2);

/// Total discrete mean curvature of the fold tetrahedron: half the sum over
/// all six edges of length times exterior dihedral angle. The tetrahedron is
/// embedded from its edge lengths (2I, l_L, l_R, r1, r2, r3) alone, with the
/// apex on the positive branch. Throws DomainError when the lengths are not
/// embeddable.
double mean_curvature_tetrahedron(double action, const FoldParams& p);

/// Definite integral of xi_f over [I0, I1] by adaptive quadrature; covers
/// the asymmetric case that has no elementary closed form.
double genfun_quadrature(double I0, double I1, const FoldParams& p, double tol);

/// Degree of the polynomial under the square root of the fold's frequency
/// integrand, after cancelling a common factor and discarding coefficients
/// below 1e-10 relative magnitude. Decides whether the generating function
/// is elementary, elliptic, or hyperelliptic.
struct IntegrabilityClass {
    enum class Kind { Elementary, Elliptic, Hyperelliptic };
    int degree;
    Kind kind;
};
IntegrabilityClass classify_integrability(const FoldParams& p);

}  // namespace origami
