#pragma once

#include "origami/folding.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

namespace origami {

/// Reconstructed 3D tube: vertex positions, triangular facets, and the step
/// ("ring") each vertex belongs to. Every ring holds N rotational copies of
/// its module vertices related by R_X(2 pi / N).
struct TubeMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> facets;  // 0-based vertex indices
    std::vector<int> ring_index;             // per-vertex step tag

    /// True when the orbit hit a finite-solution event before n_rings rings;
    /// the mesh then stops at the last valid step.
    bool truncated = false;
    int steps_built = 0;
};

/// Builds the folded tube from an orbit of n_rings module applications.
/// Each step emits the N replicas of its zigzag vertices U1, U2 and the
/// crease vertex V; the band between consecutive zigzags is tiled by the
/// crease triangles (U1, U2, V) and (U2, U3, V). Successive canonical
/// frames are chained by the screw motion about the X axis that carries the
/// next zigzag's start vertex onto its physical position. n_rings = 0 emits
/// the bare 2N-vertex starting polygon with no facets. Requires finite N and
/// a conservative module (s = 1, mu = 0).
TubeMesh build_tube(const ModuleSpec& spec, const ZigzagState& x0, int n_rings);

/// Writes Wavefront-style text (v/f records, 1-based indices) with
/// deterministic ordering and formatting.
void export_obj(const TubeMesh& mesh, std::ostream& os);
void export_obj(const TubeMesh& mesh, const std::string& path);

/// Brute-force triangle-triangle intersection scan over facet pairs sharing
/// no vertex (coordinate-wise, 1e-9 contact tolerance). Returns the first
/// offending pair, or nullopt when the mesh is embedded.
std::optional<std::pair<int, int>> self_intersects(const TubeMesh& mesh);

/// Edge-segment / triangle crossing test used by the scan; exposed for
/// testing. Contact within `tol` does not count as a crossing.
bool segment_crosses_triangle(const Vec3& p, const Vec3& q, const Vec3& a,
                              const Vec3& b, const Vec3& c, double tol = 1e-9);

}  // namespace origami
