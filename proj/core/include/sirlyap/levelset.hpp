#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sirlyap/lyap_df.hpp"
#include "sirlyap/verify.hpp"

namespace sirlyap {

/// A coordinate plane of deviation space. With fixed = X3 the free
/// coordinates are (x̃₁, x̃₂); with fixed = X2 they are (x̃₁, x̃₃).
struct Plane {
  enum class Fixed { X3, X2 };
  Fixed fixed{Fixed::X3};
  double value{};
};

struct Window {
  double u_min{};
  double u_max{};
  double v_min{};
  double v_max{};
};

struct Resolution {
  std::size_t nu{800};
  std::size_t nv{800};
};

struct Point2 {
  double u{};
  double v{};
};

using Polyline = std::vector<Point2>;

struct Contour {
  double level{};
  Plane plane{};
  std::vector<Polyline> polylines;
  /// Set for level 0, where the set degenerates to the equilibrium.
  std::optional<Point2> point_marker;
};

/// Scalar field on the plane; +∞ marks points outside the function's domain.
using PlaneField = std::function<double(double u, double v)>;

/// Marching squares over a uniform grid. Edge crossings start from linear
/// interpolation and are refined on the true field; saddles are resolved by
/// the cell-centre average.
std::vector<Contour> extract_contours(const PlaneField& field,
                                      const std::vector<double>& levels,
                                      const Plane& plane, const Window& window,
                                      const Resolution& res);

/// Contours of a Lyapunov function. Throws DomainError if the window leaves
/// the physical domain (or, for the endemic function, crosses x̃₂ ≤ −x̂₂).
std::vector<Contour> extract_contours(const LyapunovFunction& lyap,
                                      const std::vector<double>& levels,
                                      const Plane& plane, const Window& window,
                                      const Resolution& res = {});

/// Exact piecewise-linear level set of the disease-free function on x̃₃ = c,
/// clipped to x̃₁ ≥ −x̂₁.
Contour analytic_contour_df(const DiseaseFreeLyapunov& lyap, double level,
                            double x3 = 0.0);

/// Distance from a point to the nearest segment of any polyline.
double distance_to_contour(const Contour& contour, const Point2& q);

bool is_closed(const Polyline& line, double tol);

/// Brute-force proper-intersection test between the segments of two contours.
bool contours_cross(const Contour& a, const Contour& b);

/// CSV `level,polyline_id,x1,x2` (or `level,polyline_id,S,I` when absolute).
void write_contours_csv(std::ostream& os, const std::vector<Contour>& contours,
                        const Equilibrium* absolute = nullptr);

}  // namespace sirlyap
