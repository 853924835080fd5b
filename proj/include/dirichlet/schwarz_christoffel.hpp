#pragma once

#include <complex>
#include <vector>

#include "dirichlet/conformal.hpp"

namespace dirichlet {

struct Polygon {
  std::vector<std::complex<double>> vertices;  // counterclockwise
  std::vector<double> interior_angles;         // units of pi, each in (0, 2), none equal to 1
  /// Interior point sent to the disk center: the area centroid when it lies
  /// inside, otherwise the grid point farthest from the boundary.
  std::complex<double> center;

  /// Validates (3..12 distinct vertices, no straight or degenerate angles,
  /// simple boundary) and orients counterclockwise, keeping the first vertex
  /// first. Throws InvalidPolygon.
  static Polygon from_vertices(std::vector<std::complex<double>> vertices);
};

/// gamma(z) = A + C int_0^z prod_k (1 - t/p_k)^{alpha_k - 1} dt with p_1 = 1.
/// The remaining prevertices solve N - 3 side-length ratio equations plus
/// gamma(0) = polygon.center (Levenberg-Marquardt); ParameterSolveFailure
/// if the worst relative side-ratio error exceeds tol. Every vertex is a
/// corner, so corner_prevertices() lists the prevertex angles in vertex order.
ConformalMap schwarz_christoffel(const Polygon& polygon, double tol = 1e-10);

}  // namespace dirichlet
