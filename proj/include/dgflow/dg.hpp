#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "dgflow/diagram.hpp"
#include "dgflow/types.hpp"

namespace dgflow {

/// Uniform 1D mesh of a road interval [a, b].
struct Mesh {
  double a = 0.0, b = 1.0;
  Index n = 1;
  double h() const { return (b - a) / static_cast<double>(n); }
  double element_left(Index k) const { return a + static_cast<double>(k) * h(); }
  double element_center(Index k) const { return element_left(k) + 0.5 * h(); }
  /// Map reference coordinate xi in [-1,1] of element k to the road coordinate.
  double x_of(Index k, double xi) const { return element_center(k) + 0.5 * h() * xi; }
};

/// Modal coefficients w.r.t. the (unnormalized) Legendre basis on [-1,1],
/// one row per element.  Coefficient 0 is the element mean.
struct DGField {
  Index degree = 1;
  Matrix coeffs;  // n x (degree+1)
  Index n_elements() const { return coeffs.rows(); }
  static DGField zeros(Index n, Index degree) {
    return {degree, Matrix::Zero(n, degree + 1)};
  }
};

/// Gauss-Legendre nodes and weights on [-1,1].
std::pair<Vector, Vector> gauss_legendre(Index n);

double legendre_value(Index k, double xi);
Vector legendre_values(Index degree, double xi);       // P_0..P_degree at xi
Vector legendre_derivatives(Index degree, double xi);  // P_0'..P_degree' at xi

/// Quadrature- and basis-tables shared by all elements of one road.
struct BasisTables {
  Index degree = 1;
  Vector nodes, weights;     // degree+1 Gauss points
  Matrix values;             // Q x (p+1), P_j(xi_q)
  Matrix dvalues_weighted;   // Q x (p+1), w_q P_j'(xi_q)
  Vector left_end;           // P_j(-1) = (-1)^j
  Vector right_end;          // P_j(+1) = 1
  Vector mass_scale;         // 2j+1  (inverse mass matrix is (2j+1)/h)
  Matrix controls;           // point-evaluation rows at -1, nodes..., +1
  static BasisTables make(Index degree);
};

/// Per-road discretization context: mesh, per-element diagrams, basis tables.
struct RoadDiscretization {
  Mesh mesh;
  std::vector<FundamentalDiagram> diagrams;  // one per element
  BasisTables basis;
};

RoadDiscretization make_discretization(const Mesh& mesh, Index degree,
                                       std::vector<FundamentalDiagram> diagrams);

/// L2 projection of a density profile, quadrature-approximated per element.
DGField project_initial(const Mesh& mesh, Index degree,
                        const std::function<double(double)>& rho0);

double evaluate(const DGField& field, Index element, double xi);
/// Solution value at the road's left end (x = a+) and right end (x = b-).
double left_end_value(const DGField& field);
double right_end_value(const DGField& field);

/// Local Lax-Friedrichs flux between a left and a right state whose elements
/// may carry different diagrams.  The dissipation speed is the largest
/// |flow_derivative| of either diagram sampled at uL, uR and their midpoint
/// (samples are clamped into each diagram's admissible density range).
double lax_friedrichs_flux(const FundamentalDiagram& left, const FundamentalDiagram& right,
                           double uL, double uR);

struct RoadWorkspace {
  Matrix point_vals;   // n x Q
  Matrix point_flux;   // n x Q
  Matrix volume;       // n x (p+1)
  Vector left_vals;    // per-element value at xi = -1
  Vector right_vals;   // per-element value at xi = +1
  Vector iface_flux;   // n-1 interior interface fluxes
};

/// Semi-discrete right-hand side d/dt(coeffs) for one road, given the fluxes
/// through its two ends.
void road_rhs(const RoadDiscretization& rd, const DGField& field, double left_flux,
              double right_flux, Matrix& out, RoadWorkspace& ws);
Matrix road_rhs(const RoadDiscretization& rd, const DGField& field, double left_flux,
                double right_flux);

/// Mean values just outside the road, used for one-sided limiting at the
/// ends.  An absent value means the end difference is taken as zero
/// (junction / outflow ends); inflow ends pass the boundary datum.
struct GhostMeans {
  std::optional<double> left;
  std::optional<double> right;
};

/// TVB minmod slope limiter.  Element means are never changed; deviations
/// within tvb_m * h^2 leave the element untouched.
void minmod_limit(const RoadDiscretization& rd, DGField& field, const GhostMeans& ghosts,
                  double tvb_m);

struct ClampEvent {
  Index element = 0;
  double mean = 0.0;
  double lo = 0.0, hi = 0.0;
};

/// Enforce pointwise admissibility 0 <= u <= rho_max(element) at the element
/// endpoints and quadrature nodes by shrinking the non-constant part around
/// the mean (the element integral is preserved exactly).  An element whose
/// *mean* is out of bounds is flattened to the violated bound and reported.
std::vector<ClampEvent> clamp_admissible(const RoadDiscretization& rd, DGField& field);

}  // namespace dgflow
