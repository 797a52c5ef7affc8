#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "origami/reconstruction.hpp"

#include <sstream>

using namespace origami;

namespace {

const std::vector<std::array<double, 3>> kTwistLengths = {
    {0.75, 0.69, 0.75}, {1.11, 0.58, 1.11}, {0.90, 1.49, 0.90}};
const std::vector<int> kTwistSigma = {1, 1, 1};

const std::vector<std::array<double, 3>> kNontwistLengths = {
    {0.8552, 0.9913, 0.9748},
    {1.1342, 1.1798, 1.0774},
    {1.1932, 0.9922, 0.8522},
    {0.9105, 0.9236, 1.0664}};
const std::vector<int> kNontwistSigma = {-1, -1, 1, 1};

ModuleSpec twist_tube(long N) {
    return ModuleSpec::case_a(ModuleCount::finite(N), kTwistLengths,
                              kTwistSigma);
}

ModuleSpec nontwist_tube(long N) {
    return ModuleSpec::case_b(ModuleCount::finite(N), kNontwistLengths,
                              kNontwistSigma);
}

// every facet edge must reproduce a crease length of its step
void audit_edge_lengths(const TubeMesh& mesh, const ModuleSpec& spec) {
    const long N = spec.N.value();
    REQUIRE(mesh.steps_built > 0);
    REQUIRE(int(mesh.facets.size()) == 2 * N * mesh.steps_built);
    for (int step = 0; step < mesh.steps_built; ++step) {
        const FoldParams p = spec.fold_params(step % spec.step_count());
        for (long t = 0; t < N; ++t) {
            const auto at = [&](int idx) { return mesh.vertices[idx]; };
            const auto& lower = mesh.facets[2 * N * step + 2 * t];
            const auto& upper = mesh.facets[2 * N * step + 2 * t + 1];
            // lower facet (U1, U2, V), upper facet (U2, U3, V)
            CHECK(std::abs((at(lower[0]) - at(lower[1])).norm() - p.l_L) <
                  1e-9);
            CHECK(std::abs((at(lower[1]) - at(lower[2])).norm() - p.r2) < 1e-9);
            CHECK(std::abs((at(lower[0]) - at(lower[2])).norm() - p.r1) < 1e-9);
            CHECK(std::abs((at(upper[0]) - at(upper[1])).norm() - p.l_R) <
                  1e-9);
            CHECK(std::abs((at(upper[1]) - at(upper[2])).norm() - p.r3) < 1e-9);
        }
    }
}

}  // namespace

TEST_CASE("zero rings produce the bare zigzag ring pair") {
    const long N = 12;
    const TubeMesh mesh = build_tube(twist_tube(N), {0.0, 0.26}, 0);
    CHECK(mesh.vertices.size() == size_t(2 * N));
    CHECK(mesh.facets.empty());
    CHECK_FALSE(mesh.truncated);
    CHECK(mesh.steps_built == 0);
}

TEST_CASE("build_tube validates its inputs") {
    const ModuleSpec inf = ModuleSpec::case_a(ModuleCount::infinite(),
                                              kTwistLengths, kTwistSigma);
    CHECK_THROWS_AS(build_tube(inf, {0.0, 0.26}, 1), DomainError);
    const ModuleSpec scaled = ModuleSpec::case_a(
        ModuleCount::finite(100), kTwistLengths, kTwistSigma, 1.1, 0.05);
    CHECK_THROWS_AS(build_tube(scaled, {0.0, 0.26}, 1), DomainError);
    CHECK_THROWS_AS(build_tube(twist_tube(100), {0.0, 0.26}, -1), DomainError);
}

TEST_CASE("the tube carries the N-fold rotational symmetry") {
    const long N = 16;
    const TubeMesh mesh = build_tube(twist_tube(N), {0.0, 0.2572}, 1);
    REQUIRE(mesh.steps_built == 3);
    const Mat3 rot = rotation_x(2.0 * M_PI / double(N));
    // the rotation advances each replica index by one within its block
    for (size_t base = 0; base < mesh.vertices.size(); base += N)
        for (long t = 0; t < N; ++t)
            CHECK((rot * mesh.vertices[base + t] -
                   mesh.vertices[base + (t + 1) % N])
                      .norm() < 1e-9);
}

TEST_CASE("facet edges reproduce the crease lengths, plain wiring") {
    const ModuleSpec spec = twist_tube(200);
    const TubeMesh mesh = build_tube(spec, {0.0, 0.2572}, 2);
    REQUIRE(mesh.steps_built == 6);
    CHECK_FALSE(mesh.truncated);
    audit_edge_lengths(mesh, spec);
}

TEST_CASE("facet edges reproduce the crease lengths, alternating wiring") {
    const ModuleSpec spec = nontwist_tube(1000);
    const TubeMesh mesh = build_tube(spec, {0.0, 0.2958}, 2);
    REQUIRE(mesh.steps_built == 8);
    CHECK_FALSE(mesh.truncated);
    audit_edge_lengths(mesh, spec);
}

TEST_CASE("ring chains stay connected across steps") {
    const long N = 64;
    const ModuleSpec spec = twist_tube(N);
    const TubeMesh mesh = build_tube(spec, {0.1, 0.2572}, 2);
    REQUIRE(mesh.steps_built == 6);
    // the crease vertex ring of step i coincides with the start ring of
    // step i + 1 as a set (plain wiring: next zigzag starts at V)
    for (int step = 0; step + 1 < mesh.steps_built; ++step) {
        const size_t v_base = size_t(3 * N) * step + 2 * N;
        const size_t next_base = size_t(3 * N) * (step + 1);
        for (long t = 0; t < N; ++t) {
            double best = 1e9;
            for (long u = 0; u < N; ++u)
                best = std::min(best, (mesh.vertices[v_base + t] -
                                       mesh.vertices[next_base + u])
                                          .norm());
            CHECK(best < 1e-9);
        }
    }
}

TEST_CASE("an inadmissible start truncates the build") {
    const ModuleSpec spec = twist_tube(10);
    const TubeMesh mesh = build_tube(spec, {0.0, 0.70}, 4);
    CHECK(mesh.truncated);
    CHECK(mesh.steps_built < 12);
}

TEST_CASE("obj export writes a parsable mesh") {
    const TubeMesh mesh = build_tube(twist_tube(8), {0.0, 0.26}, 1);
    std::ostringstream os;
    export_obj(mesh, os);
    std::istringstream is(os.str());
    std::string line;
    size_t n_v = 0, n_f = 0;
    while (std::getline(is, line)) {
        if (line.rfind("v ", 0) == 0) ++n_v;
        if (line.rfind("f ", 0) == 0) {
            ++n_f;
            int a, b, c;
            REQUIRE(std::sscanf(line.c_str(), "f %d %d %d", &a, &b, &c) == 3);
            for (int idx : {a, b, c}) {
                CHECK(idx >= 1);
                CHECK(idx <= int(mesh.vertices.size()));
            }
        }
    }
    CHECK(n_v == mesh.vertices.size());
    CHECK(n_f == mesh.facets.size());
}

TEST_CASE("obj export of an empty mesh is header-only") {
    std::ostringstream os;
    export_obj(TubeMesh{}, os);
    CHECK(os.str() == "# tube mesh: 0 vertices, 0 facets\n");
}

TEST_CASE("segment-triangle crossing predicate") {
    const Vec3 a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
    // piercing through the interior
    CHECK(segment_crosses_triangle({0.2, 0.2, -1}, {0.2, 0.2, 1}, a, b, c));
    // stopping short of the plane
    CHECK_FALSE(
        segment_crosses_triangle({0.2, 0.2, -1}, {0.2, 0.2, -0.1}, a, b, c));
    // passing outside the triangle
    CHECK_FALSE(
        segment_crosses_triangle({2.0, 2.0, -1}, {2.0, 2.0, 1}, a, b, c));
    // passing through a vertex does not count as a crossing
    CHECK_FALSE(segment_crosses_triangle({0, 0, -1}, {0, 0, 1}, a, b, c));
    // lying inside the plane does not count either
    CHECK_FALSE(
        segment_crosses_triangle({-1, 0.2, 0}, {1, 0.2, 0}, a, b, c));
}

TEST_CASE("self-intersection on handcrafted meshes") {
    TubeMesh none;
    CHECK_THROWS_AS(self_intersects(none), DomainError);

    TubeMesh disjoint;
    disjoint.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0},
                         {5, 0, 0}, {6, 0, 0}, {5, 1, 0}};
    disjoint.facets = {{0, 1, 2}, {3, 4, 5}};
    CHECK_FALSE(self_intersects(disjoint).has_value());

    TubeMesh crossing;
    crossing.vertices = {{0, 0, 0},      {1, 0, 0},     {0, 1, 0},
                         {0.2, 0.2, -1}, {0.3, 0.2, 1}, {0.2, 0.3, 1}};
    crossing.facets = {{0, 1, 2}, {3, 4, 5}};
    const auto hit = self_intersects(crossing);
    REQUIRE(hit.has_value());
    CHECK(hit->first == 0);
    CHECK(hit->second == 1);

    // facets that only share a vertex are neighbors, not intersections
    TubeMesh fan;
    fan.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}};
    fan.facets = {{0, 1, 2}, {0, 3, 4}};
    CHECK_FALSE(self_intersects(fan).has_value());
}

TEST_CASE("built tubes near the resonant action are embedded") {
    const TubeMesh mesh = build_tube(twist_tube(60), {0.0, 0.2572}, 2);
    REQUIRE(mesh.steps_built == 6);
    CHECK_FALSE(self_intersects(mesh).has_value());
}
