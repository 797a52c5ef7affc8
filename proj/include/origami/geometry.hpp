#pragma once

#include "origami/types.hpp"

#include <optional>

namespace origami {

/// Local orthonormal frame attached to the zigzag vertex U1.
struct LocalFrame {
    Vec3 origin;  // r_U1
    Vec3 e1, e2, e3;

    Mat3 basis() const {
        Mat3 b;
        b.col(0) = e1;
        b.col(1) = e2;
        b.col(2) = e3;
        return b;
    }
};

/// Components of the crease vertex V in the local frame, with the
/// discriminant gamma = r1^2 - e1^2 - e2^2 of the three-sphere system.
struct IntersectionResult {
    double e1, e2, e3;
    double gamma;
};

/// Zigzag vertex positions in the module's canonical frame.
struct ZigzagVertices {
    Vec3 u1, u2, u3, um;
};

/// cos/sin of the zigzag opening angle at U1: alpha = (l_L^2 + 4I^2 - l_R^2)
/// / (4 I l_L), beta = sqrt(1 - alpha^2). Throws DomainError when the action
/// lies outside the open admissible interval (within 1e-12 of an endpoint the
/// triangle degenerates and beta -> 0).
std::pair<double, double> alpha_beta(double action, double l_L, double l_R);

/// Non-throwing variant used inside map iteration, where an inadmissible
/// action is a finite-solution event rather than a caller error.
std::optional<std::pair<double, double>> try_alpha_beta(double action, double l_L,
                                                        double l_R);

/// Rotation about the X axis.
Mat3 rotation_x(double angle);

/// Generator of infinitesimal rotations about the X axis.
Mat3 rotation_x_generator();

/// Vertex positions U1, U2, U3 and the foot-of-perpendicular U_M of the
/// zigzag determined by (theta, I). Requires finite N.
ZigzagVertices zigzag_vertices(const ZigzagState& state, const FoldParams& p);

/// Orthonormal frame {e1, e2, e3} at U1; e3 = e1 x e2.
LocalFrame local_frame(const ZigzagState& state, const FoldParams& p);

/// Solves the three-sphere system for the crease vertex V. The sign of the
/// out-of-plane component follows sigma. gamma in [-1e-12, 0) is clamped to
/// zero (tangent spheres); gamma < -1e-12 raises FiniteSolutionError.
IntersectionResult sphere_intersection(const ZigzagState& state, const FoldParams& p);

/// Variant returning nullopt on finite-solution events (no real intersection
/// or degenerate frame), for use inside map iteration.
std::optional<IntersectionResult> try_sphere_intersection(const ZigzagState& state,
                                                          const FoldParams& p);

}  // namespace origami
