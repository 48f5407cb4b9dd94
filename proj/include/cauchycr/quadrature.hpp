#ifndef CAUCHYCR_QUADRATURE_HPP
#define CAUCHYCR_QUADRATURE_HPP

#include <array>
#include <vector>

namespace cauchycr {

struct QuadPoint {
  double x;
  double y;
  double w;
};

/// Gauss-Legendre nodes/weights on [0,1], exact for polynomials of degree
/// 2*npts - 1. Nodes are computed by Newton iteration on the Legendre
/// recurrence and cached per point count.
const std::vector<std::array<double, 2>>& gauss_legendre_unit(int npts);

/// Number of Gauss points needed for the requested polynomial degree.
inline int gauss_point_count(int degree) { return (degree + 2) / 2; }

/// Quadrature on the segment a-b, exact for polynomials (along the segment)
/// up to `degree` in [1,10]. Weights sum to the segment length.
std::vector<QuadPoint> face_quadrature(const std::array<double, 2>& a,
                                       const std::array<double, 2>& b, int degree);

/// Quadrature on the triangle (p0,p1,p2), exact for bivariate polynomials of
/// total degree up to `degree` in [1,10]. Weights sum to the triangle area.
/// Degrees 1 and 2 use the classical symmetric rules; higher degrees use a
/// conical-product rule built from Gauss-Legendre points.
std::vector<QuadPoint> triangle_quadrature(const std::array<double, 2>& p0,
                                           const std::array<double, 2>& p1,
                                           const std::array<double, 2>& p2, int degree);

} // namespace cauchycr

#endif
