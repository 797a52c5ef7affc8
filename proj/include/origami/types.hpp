#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace origami {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Preconditions on geometric inputs were violated (inadmissible action,
/// non-embeddable edge lengths, bad parameters).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Symmetric-case routine called with an asymmetric module.
class NotSymmetric : public std::runtime_error {
public:
    explicit NotSymmetric(const std::string& what) : std::runtime_error(what) {}
};

/// Adaptive quadrature could not reach the requested tolerance.
class ToleranceNotMet : public std::runtime_error {
public:
    explicit ToleranceNotMet(const std::string& what) : std::runtime_error(what) {}
};

/// The folding geometry admits no real continuation (spheres fail to meet,
/// action leaves the admissible interval, or the zigzag degenerates).
/// Raised only from on-demand evaluations; orbit iteration reports the same
/// event as data, not as an exception.
class FiniteSolutionError : public std::runtime_error {
public:
    explicit FiniteSolutionError(const std::string& what) : std::runtime_error(what) {}
};

/// Wrap an angle to (-pi, pi]. Applied exactly once per map output so that
/// arctan2 branch comparisons are consistent everywhere.
inline double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * M_PI);
    if (a <= -M_PI) a = M_PI;
    return a;
}

/// Phase-space point of the zigzag dynamics: angle theta in (-pi, pi] and
/// action I = half the distance between the zigzag endpoints.
struct ZigzagState {
    double theta = 0.0;
    double action = 0.0;
};

/// Module count N: an integer > 2, or the symbolic infinite limit.
class ModuleCount {
public:
    static ModuleCount finite(long n) {
        if (n <= 2) throw DomainError("module count must exceed 2");
        return ModuleCount(n);
    }
    static ModuleCount infinite() { return ModuleCount(0); }

    bool is_infinite() const { return n_ == 0; }
    long value() const {
        if (is_infinite()) throw DomainError("module count is infinite");
        return n_;
    }

    bool operator==(const ModuleCount&) const = default;

private:
    explicit ModuleCount(long n) : n_(n) {}
    long n_;
};

/// Open interval (lo, hi).
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x, double margin = 1e-12) const {
        return x > lo + margin && x < hi - margin;
    }
    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
};

/// Admissible action interval of a zigzag with crease lengths l_L, l_R:
/// the open interval (|l_L - l_R| / 2, (l_L + l_R) / 2).
inline Interval admissible_interval(double l_L, double l_R) {
    return {0.5 * std::abs(l_L - l_R), 0.5 * (l_L + l_R)};
}

/// Parameters of one application of the folding map f: the current zigzag's
/// crease lengths, the three sphere radii locating the next crease vertex,
/// the mountain/valley branch, and the module count. Trigonometry of pi/N is
/// evaluated once at construction.
struct FoldParams {
    double l_L, l_R;
    ModuleCount N;
    double r1, r2, r3;
    int sigma;  // +1 mountain, -1 valley

    // cached per-construction trig of pi/N (finite N only; zero otherwise)
    double cot_pi_n = 0.0;
    double sin_pi_n = 0.0;
    double cos_2pi_n = 1.0;
    double sin_2pi_n = 0.0;

    FoldParams(double l_L_, double l_R_, ModuleCount N_, double r1_, double r2_,
               double r3_, int sigma_)
        : l_L(l_L_), l_R(l_R_), N(N_), r1(r1_), r2(r2_), r3(r3_), sigma(sigma_) {
        if (l_L <= 0 || l_R <= 0 || r1 <= 0 || r2 <= 0 || r3 <= 0)
            throw DomainError("crease lengths and radii must be positive");
        if (sigma != 1 && sigma != -1)
            throw DomainError("sigma must be +1 or -1");
        if (!N.is_infinite()) {
            const double pin = M_PI / static_cast<double>(N.value());
            cot_pi_n = std::cos(pin) / std::sin(pin);
            sin_pi_n = std::sin(pin);
            cos_2pi_n = std::cos(2.0 * pin);
            sin_2pi_n = std::sin(2.0 * pin);
        }
    }

    Interval admissible() const { return admissible_interval(l_L, l_R); }
};

}  // namespace origami
