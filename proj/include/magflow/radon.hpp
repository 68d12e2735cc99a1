#pragma once

// Radon transform over geodesic disks.
//
// The spherical average of an eigenfunction of the hyperbolic Laplacian
// depends on the eigenvalue only, so averaging over a disk of radius r
// multiplies the eigenfunction by a universal kernel value
//
//   q_r(s) = 4 sqrt(2) * integral_0^r cos(s u) sqrt(cosh r - cosh u) du,
//
// where the eigenvalue is 1/4 + s^2.  Real s is the tempered range; the
// complementary range is parametrized by s = i*alpha with 0 <= alpha <= 1/2,
// which replaces cos(s u) by cosh(alpha u).  At alpha = 1/2 the eigenfunction
// is constant and the kernel value is the disk area, 2 pi (cosh r - 1).
//
// disk_radon averages a zero-mean invariant scalar over disks on the surface.
// Lifting the disk to the half-plane and summing bump translates gives an
// equivalent per-site formulation used as a cross-check and for large radii.

#include <cstddef>
#include <vector>

#include "magflow/halfplane.hpp"
#include "magflow/surface.hpp"

namespace magflow {

struct KernelSample {
  double r = 0.0;
  double s = 0.0;  // spectral parameter; alpha when imaginary is set
  bool imaginary = false;
  double value = 0.0;
};

// q_r(s) for real spectral parameter s.  r must be nonnegative; r = 0 gives 0.
// The integrand vanishes like a square root at u = r, so the implementation
// substitutes u = r - w^2 and applies Gauss-Legendre in w, which restores
// spectral convergence.  Node count grows with the phase s*r.
double q_kernel_real(double r, double s);

// q_r(i*alpha) for the complementary range 0 <= alpha <= 1/2.  alpha outside
// that interval is rejected.  q_kernel_imag(r, 0) equals q_kernel_real(r, 0)
// exactly (same code path), and alpha = 1/2 has the closed form
// 2 pi (cosh r - 1).
double q_kernel_imag(double r, double alpha);

// Kernel table for export: one row per (r, s) and (r, alpha) combination.
std::vector<KernelSample> kernel_table(const std::vector<double>& r_grid,
                                       const std::vector<double>& s_values,
                                       const std::vector<double>& alpha_values);

// Mean value identity test for the explicit eigenfunctions y^(1/2 + i s) on
// the half-plane.  Both the real and imaginary parts are averaged over the
// disk of radius r about `center` and compared with q_r(s) times the value at
// the center.  `residual` is the worse of the two normalized defects
// |lhs - rhs| / (|rhs| + 1).
struct MeanValueCheck {
  double lhs_re = 0.0;
  double rhs_re = 0.0;
  double lhs_im = 0.0;
  double rhs_im = 0.0;
  double residual = 0.0;
};
MeanValueCheck eigenfunction_mean_value_check(double s, const Point& center, double r);

// Disk Radon transform of a zero-mean invariant scalar: the integral of h
// over the geodesic disk of radius r about x, computed in the half-plane
// with the canonical lift of x.  h must have |integral over the surface|
// below 1e-8, otherwise the transform would grow like the disk area and the
// call is rejected.  The result does not depend on the lift of x chosen by
// the caller.  `order` controls the disk quadrature.
double disk_radon(const InvariantScalar& h, const Point& x, double r, int order = 64);

// Same transform evaluated as a sum over bump translates: the constant part
// contributes its value times the disk area, and each translate of each bump
// contributes a rotationally symmetric profile integrated against the angular
// overlap with the disk.  Exact up to 1D quadrature on smooth panels, and
// cheap for radii past the domain diameter where the direct quadrature
// becomes expensive.
double disk_radon_sites(const InvariantScalar& h, const Point& x, double r);

// Kernel growth along the peak radii r_n = pi (2n + 1/2) / s, where cos(s r)
// is at a crest.  Checks the lower bound
//   q_{r_n}(s) >= 4 sqrt(2) sqrt(cosh r_n) / (s (1 + s^2))
// and strict growth in n; a violation throws.  Requires s > 0.
struct GrowthRow {
  int n = 0;
  double r = 0.0;
  double value = 0.0;
  double bound = 0.0;
};
std::vector<GrowthRow> growth_check(double s, int n_max);

// Boundedness probe: evaluates the transform on a grid of centers and radii
// and reports the running maximum of |value| as the radius grows.  Purely
// observational; the values stay bounded for zero-mean h while the kernel
// grows, which is the cancellation the transform is built to exhibit.
struct RadonProbeReport {
  std::vector<Point> center;
  std::vector<double> radius;              // ascending
  std::vector<std::vector<double>> value;  // value[i][j]: center i, radius j
  std::vector<double> running_max;         // over all centers, radii up to radius[j]
  double max_abs = 0.0;
};
RadonProbeReport boundedness_probe(const InvariantScalar& h, const std::vector<double>& r_grid,
                                   const std::vector<Point>& x_grid);

}  // namespace magflow
