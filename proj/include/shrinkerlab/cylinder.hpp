#pragma once

#include <vector>

#include "shrinkerlab/linalg.hpp"

namespace shrinkerlab {

/// A rotated round cylinder S^k_{sqrt(2k)} x R^{n-k} in R^{n+1}.  The radius
/// is always sqrt(2k) and is never stored.  The frame is an orthonormal
/// (n+1)x(n+1) rotation whose first k+1 columns span the sphere plane and
/// whose last n-k columns span the axis.
struct CylinderSpec {
  int k = 1;
  int n = 2;
  std::vector<double> frame;  // row-major (n+1)x(n+1), columns are basis vectors

  double radius() const;
  int dim_ambient() const { return n + 1; }

  /// Column c of the frame as an ambient vector.
  std::vector<double> frame_column(int c) const;

  /// Component of p in the sphere plane / along axis column i.
  std::vector<double> sphere_component(const std::vector<double>& p) const;
  double axis_coordinate(const std::vector<double>& p, int i) const;

  /// Outward unit normal at a point of the cylinder.
  std::vector<double> normal_at(const std::vector<double>& p) const;

  /// Orthonormal tangent frame at p: first k vectors tangent to the sphere
  /// factor, last n-k along the axis.
  std::vector<std::vector<double>> tangent_frame(const std::vector<double>& p) const;

  /// Distance from p to the cylinder's axis subspace.
  double distance_to_axis(const std::vector<double>& p) const;

  /// Checks frame orthonormality (1e-12) and shape; throws on failure.
  void validate() const;
};

/// Axis-aligned cylinder: sphere plane = first k+1 coordinates.
CylinderSpec standard_cylinder(int k, int n);

/// Cylinder in R^3 (k=1, n=2) whose axis points along the given direction.
CylinderSpec cylinder_with_axis(const Vec3& axis);

/// Shape operator (in the tangent frame of CylinderSpec::tangent_frame) and
/// mean curvature H = -tr A at a point of the cylinder.  A has eigenvalue
/// -1/sqrt(2k) on the k sphere directions and 0 on the axis directions;
/// H = sqrt(k/2).  Throws std::domain_error if p is off the cylinder by more
/// than 1e-10.
struct ShapeOperator {
  int n = 0;
  std::vector<double> a;  // row-major n x n, diagonal here
  double H = 0.0;
  double A_norm2 = 0.0;   // |A|^2 = 1/2 on every round cylinder
};
ShapeOperator cylinder_shape_operator(const CylinderSpec& cyl, const std::vector<double>& p);

/// phi = <p, n>/2 - H; identically zero on the cylinder (shrinker identity).
double cylinder_phi(const CylinderSpec& cyl, const std::vector<double>& p);

/// Offset-map data at (p, s, y): B = Id - s A(p) on the tangent space,
/// w = sqrt(1 + |B^{-1} y|^2), nu = w det B, eta = support function of the
/// offset graph point.  y is given in the tangent frame.
struct OffsetJet {
  std::vector<double> b_diag;  // n entries: 1 + s/sqrt(2k) (sphere), 1 (axis)
  double w = 0.0;
  double nu = 0.0;
  double eta = 0.0;
};
OffsetJet eval_offset_jet(const CylinderSpec& cyl, const std::vector<double>& p,
                          double s, const std::vector<double>& y);

/// First/second partials of w, nu, eta at (p, 0, 0), in closed form.  Each
/// entry matches a central finite difference of eval_offset_jet to O(h^2).
struct OffsetTaylor {
  double w0 = 1.0;                  // w(p,s,0) for every s
  double dw_ds = 0.0;               // at (p,s,0) for every s
  std::vector<double> dw_dy;        // zero vector
  std::vector<double> d2w_dydy;     // identity (row-major n x n)
  double nu0 = 1.0;
  double dnu_ds = 0.0;              // H(p)
  double d2nu_ds2 = 0.0;            // H^2 - |A|^2
  std::vector<double> dnu_dp_ds;    // gradient of H along the cylinder: zero
  std::vector<double> d2nu_dydy;    // identity
  double eta0 = 0.0;                // <p, n>
  double deta_ds = 1.0;
  std::vector<double> deta_dy;      // -<p, e_alpha>
};
OffsetTaylor taylor_coefficients(const CylinderSpec& cyl, const std::vector<double>& p);

/// Closed-form radial family: cylinder of radius sqrt(2k)+s.
double radial_mean_curvature(int k, double s);       // k/(sqrt(2k)+s)
double radial_area_ratio(int k, double s);           // (1+s/sqrt(2k))^k
double radial_support(int k, double s);              // sqrt(2k)+s
double radial_gradient_M(int k, double s);           // M(u == s), closed form

/// Gaussian area of the radial family S^k_r x R^{n-k} (the F functional on
/// round cylinders of radius r); maximized at r = sqrt(2k).
double radial_gaussian_area(int k, int n, double r);

}  // namespace shrinkerlab
