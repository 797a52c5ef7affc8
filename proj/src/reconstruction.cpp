#include "origami/reconstruction.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace origami {

namespace {

// Screw motion about the X axis: x -> R_X(phi) x + (dx, 0, 0). Screws about
// a common axis compose by adding both parameters.
struct Screw {
    double phi = 0.0;
    double dx = 0.0;

    Vec3 apply(const Vec3& p) const {
        Vec3 q = rotation_x(phi) * p;
        q.x() += dx;
        return q;
    }
    void compose(double dphi, double ddx) {
        phi += dphi;
        dx += ddx;
    }
};

// Angular position of the canonical zigzag start vertex (0, I, I cot(pi/N))
// in the YZ plane.
double canonical_angle(double action, double cot_pi_n) {
    return std::atan2(action * cot_pi_n, action);
}

}  // namespace

TubeMesh build_tube(const ModuleSpec& spec, const ZigzagState& x0, int n_rings) {
    if (spec.N.is_infinite())
        throw DomainError("tube reconstruction requires finite N");
    if (!spec.conservative())
        throw DomainError("tube reconstruction requires s = 1, mu = 0");
    if (n_rings < 0) throw DomainError("n_rings must be nonnegative");
    spec.validate();

    const long N = spec.N.value();
    const int m = spec.step_count();
    TubeMesh mesh;

    auto emit_replicas = [&](const Vec3& p, const Screw& frame, int ring) {
        for (long t = 0; t < N; ++t) {
            mesh.vertices.push_back(
                frame.apply(rotation_x(2.0 * M_PI * t / double(N)) * p));
            mesh.ring_index.push_back(ring);
        }
    };

    ZigzagState x = x0;
    Screw frame;

    if (n_rings == 0) {
        const ZigzagVertices zv = zigzag_vertices(x, spec.fold_params(0));
        emit_replicas(zv.u1, frame, 0);
        emit_replicas(zv.u2, frame, 0);
        return mesh;
    }

    const int total_steps = n_rings * m;
    for (int step = 0; step < total_steps; ++step) {
        const int i = step % m;
        const FoldParams p = spec.fold_params(i);
        const double I = x.action;

        const auto isect = try_sphere_intersection(x, p);
        if (!isect) {
            mesh.truncated = true;
            break;
        }
        const ZigzagVertices zv = zigzag_vertices(x, p);
        const Vec3 v_can =
            local_frame(x, p).basis() * Vec3(isect->e1, isect->e2, isect->e3) +
            zv.u1;

        const int base = static_cast<int>(mesh.vertices.size());
        emit_replicas(zv.u1, frame, step);  // base + t
        emit_replicas(zv.u2, frame, step);  // base + N + t
        emit_replicas(v_can, frame, step);  // base + 2N + t
        for (long t = 0; t < N; ++t) {
            const int u1 = base + int(t);
            const int u2 = base + int(N + t);
            const int v = base + int(2 * N + t);
            const int u3 = base + int((t + 1) % N);  // U3 = R_X U1 replica
            mesh.facets.push_back({u1, u2, v});
            mesh.facets.push_back({u2, u3, v});
        }
        mesh.steps_built = step + 1;

        const auto fx = map_f(x, p);
        if (!fx) {
            mesh.truncated = true;
            break;
        }
        if (spec.steps[i].k == 0) {
            // next zigzag (V, U3, R_X V): its start vertex sits at V
            frame.compose(std::atan2(v_can.z(), v_can.y()) -
                              canonical_angle(fx->action, p.cot_pi_n),
                          v_can.x());
            x = *fx;
        } else {
            // after g the zigzag is relabeled to (U3, R_X V, R_X U3): its
            // start vertex is the current U3, which lies on the X = 0 plane
            const auto [r3, r1] = spec.g_params(i);
            const auto gx = map_g(*fx, r3, r1, spec.N);
            if (!gx) {
                mesh.truncated = true;
                break;
            }
            frame.compose(std::atan2(zv.u3.z(), zv.u3.y()) -
                              canonical_angle(gx->action, p.cot_pi_n),
                          zv.u3.x());
            x = *gx;
        }
    }
    return mesh;
}

void export_obj(const TubeMesh& mesh, std::ostream& os) {
    os << "# tube mesh: " << mesh.vertices.size() << " vertices, "
       << mesh.facets.size() << " facets\n";
    char buf[128];
    for (const auto& v : mesh.vertices) {
        std::snprintf(buf, sizeof(buf), "v %.12f %.12f %.12f\n", v.x(), v.y(),
                      v.z());
        os << buf;
    }
    for (const auto& f : mesh.facets)
        os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

void export_obj(const TubeMesh& mesh, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    export_obj(mesh, os);
    if (!os) throw std::runtime_error("write to " + path + " failed");
}

bool segment_crosses_triangle(const Vec3& p, const Vec3& q, const Vec3& a,
                              const Vec3& b, const Vec3& c, double tol) {
    const Vec3 n = (b - a).cross(c - a);
    const double nn = n.norm();
    if (nn < tol) return false;  // degenerate triangle
    const double dp = (p - a).dot(n) / nn;
    const double dq = (q - a).dot(n) / nn;
    if (dp > -tol && dq > -tol) return false;
    if (dp < tol && dq < tol) return false;

    const double t = dp / (dp - dq);
    const Vec3 x = p + t * (q - p);

    // barycentric inside test with an absolute margin of tol
    const Vec3 v0 = b - a, v1 = c - a, v2 = x - a;
    const double d00 = v0.dot(v0), d01 = v0.dot(v1), d11 = v1.dot(v1);
    const double d20 = v2.dot(v0), d21 = v2.dot(v1);
    const double den = d00 * d11 - d01 * d01;
    if (std::abs(den) < tol * tol) return false;
    const double u = (d11 * d20 - d01 * d21) / den;
    const double w = (d00 * d21 - d01 * d20) / den;
    const double margin = tol / std::sqrt(den);
    return u > margin && w > margin && (1.0 - u - w) > margin;
}

namespace {

bool triangles_cross(const Vec3* t1, const Vec3* t2, double tol) {
    for (int e = 0; e < 3; ++e) {
        if (segment_crosses_triangle(t1[e], t1[(e + 1) % 3], t2[0], t2[1],
                                     t2[2], tol))
            return true;
        if (segment_crosses_triangle(t2[e], t2[(e + 1) % 3], t1[0], t1[1],
                                     t1[2], tol))
            return true;
    }
    return false;
}

bool share_vertex(const Vec3* t1, const Vec3* t2, double tol) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if ((t1[i] - t2[j]).norm() < tol) return true;
    return false;
}

}  // namespace

std::optional<std::pair<int, int>> self_intersects(const TubeMesh& mesh) {
    if (mesh.facets.empty()) throw DomainError("mesh has no facets");
    const double tol = 1e-9;
    const int nf = static_cast<int>(mesh.facets.size());
    std::vector<std::array<Vec3, 3>> tris(nf);
    std::vector<Eigen::AlignedBox3d> boxes(nf);
    for (int i = 0; i < nf; ++i) {
        for (int k = 0; k < 3; ++k) tris[i][k] = mesh.vertices[mesh.facets[i][k]];
        for (int k = 0; k < 3; ++k) boxes[i].extend(tris[i][k]);
        boxes[i].min().array() -= tol;
        boxes[i].max().array() += tol;
    }

    for (int i = 0; i < nf; ++i)
        for (int j = i + 1; j < nf; ++j) {
            if (!boxes[i].intersects(boxes[j])) continue;
            if (share_vertex(tris[i].data(), tris[j].data(), tol)) continue;
            if (triangles_cross(tris[i].data(), tris[j].data(), tol))
                return std::make_pair(i, j);
        }
    return std::nullopt;
}

}  // namespace origami
