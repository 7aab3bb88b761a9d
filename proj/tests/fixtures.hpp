#pragma once

#include "ptolemy/triangulation.hpp"

namespace ptolemy::tests {

// Sphere with three punctures: two triangles glued along all three arcs.
inline tri::LabeledTriangulation sphere3() {
    return tri::LabeledTriangulation::from_triples({0, 3}, {{0, 1, 2}, {0, 2, 1}});
}

// Sphere with four punctures: the boundary of a tetrahedron. Edges
// AB=0, AC=1, AD=2, BC=3, BD=4, CD=5, faces oriented outward.
inline tri::LabeledTriangulation sphere4() {
    return tri::LabeledTriangulation::from_triples(
        {0, 4}, {{0, 3, 1}, {1, 5, 2}, {2, 4, 0}, {4, 5, 3}});
}

// Torus with two punctures: the one-triangle-pair torus with one triangle
// stellar-subdivided at a new puncture.
inline tri::LabeledTriangulation torus2() {
    return tri::LabeledTriangulation::from_triples(
        {1, 2}, {{0, 1, 2}, {0, 4, 3}, {1, 5, 4}, {2, 3, 5}});
}

// Once-punctured torus (accepted by the combinatorics, n = 1).
inline tri::LabeledTriangulation torus1() {
    return tri::LabeledTriangulation::from_triples({1, 1}, {{0, 1, 2}, {0, 1, 2}});
}

}  // namespace ptolemy::tests
