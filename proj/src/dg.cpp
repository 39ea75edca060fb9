#include "dgflow/dg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace dgflow {

namespace {

// Lowest density at which the Greenberg wave speed is sampled when forming
// the Lax-Friedrichs dissipation coefficient (the true supremum is infinite).
constexpr double kGreenbergAlphaFloor = 1e-9;

double abs_wave_speed_at(const FundamentalDiagram& d, double u) {
  double lo = 0.0;
  if (d.kind == DiagramKind::Greenberg) lo = kGreenbergAlphaFloor * d.params.rho_max;
  u = std::clamp(u, lo, d.params.rho_max);
  return std::abs(flow_derivative(d, u));
}

}  // namespace

std::pair<Vector, Vector> gauss_legendre(Index n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  Vector x(n), w(n);
  for (Index i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev estimate.
    double xi = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                         (static_cast<double>(n) + 0.5));
    double p_n = 0.0, dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = xi;
      for (Index k = 1; k < n; ++k) {
        const double pk = ((2.0 * static_cast<double>(k) + 1.0) * xi * p1 -
                           static_cast<double>(k) * p0) /
                          (static_cast<double>(k) + 1.0);
        p0 = p1;
        p1 = pk;
      }
      p_n = (n == 1) ? xi : p1;
      dp = static_cast<double>(n) * (xi * p_n - p0) / (xi * xi - 1.0);
      if (n == 1) {  // P_1 = xi, P_1' = 1
        p_n = xi;
        dp = 1.0;
      }
      const double dx = p_n / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    x[i] = xi;
    w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
  // Ascending nodes are nicer to read in tables.
  std::vector<Index> order(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return x[a] < x[b]; });
  Vector xs(n), ws(n);
  for (Index i = 0; i < n; ++i) {
    xs[i] = x[order[static_cast<size_t>(i)]];
    ws[i] = w[order[static_cast<size_t>(i)]];
  }
  return {xs, ws};
}

Vector legendre_values(Index degree, double xi) {
  Vector p(degree + 1);
  p[0] = 1.0;
  if (degree >= 1) p[1] = xi;
  for (Index k = 1; k < degree; ++k)
    p[k + 1] = ((2.0 * static_cast<double>(k) + 1.0) * xi * p[k] -
                static_cast<double>(k) * p[k - 1]) /
               (static_cast<double>(k) + 1.0);
  return p;
}

double legendre_value(Index k, double xi) { return legendre_values(k, xi)[k]; }

Vector legendre_derivatives(Index degree, double xi) {
  const Vector p = legendre_values(degree, xi);
  Vector dp(degree + 1);
  dp[0] = 0.0;
  if (degree >= 1) dp[1] = 1.0;
  for (Index k = 1; k < degree; ++k)
    dp[k + 1] = (2.0 * static_cast<double>(k) + 1.0) * p[k] + dp[k - 1];
  return dp;
}

BasisTables BasisTables::make(Index degree) {
  BasisTables t;
  t.degree = degree;
  const Index q = degree + 1;
  std::tie(t.nodes, t.weights) = gauss_legendre(q);
  t.values.resize(q, degree + 1);
  t.dvalues_weighted.resize(q, degree + 1);
  for (Index i = 0; i < q; ++i) {
    t.values.row(i) = legendre_values(degree, t.nodes[i]).transpose();
    t.dvalues_weighted.row(i) =
        (t.weights[i] * legendre_derivatives(degree, t.nodes[i])).transpose();
  }
  t.left_end.resize(degree + 1);
  t.right_end.resize(degree + 1);
  t.mass_scale.resize(degree + 1);
  for (Index j = 0; j <= degree; ++j) {
    t.left_end[j] = (j % 2 == 0) ? 1.0 : -1.0;
    t.right_end[j] = 1.0;
    t.mass_scale[j] = 2.0 * static_cast<double>(j) + 1.0;
  }
  t.controls.resize(q + 2, degree + 1);
  t.controls.row(0) = t.left_end.transpose();
  t.controls.middleRows(1, q) = t.values;
  t.controls.row(q + 1) = t.right_end.transpose();
  return t;
}

RoadDiscretization make_discretization(const Mesh& mesh, Index degree,
                                       std::vector<FundamentalDiagram> diagrams) {
  if (static_cast<Index>(diagrams.size()) != mesh.n)
    throw std::invalid_argument("make_discretization: one diagram per element required");
  return {mesh, std::move(diagrams), BasisTables::make(degree)};
}

DGField project_initial(const Mesh& mesh, Index degree,
                        const std::function<double(double)>& rho0) {
  const BasisTables basis = BasisTables::make(degree);
  DGField field = DGField::zeros(mesh.n, degree);
  const Index q = basis.nodes.size();
  // Normalizing the mean by the computed weight sum (instead of its exact
  // value 2) makes constant profiles project to themselves bitwise, so a
  // plateau sitting exactly at rho_max stays admissible.
  const double weight_sum = basis.weights.sum();
  for (Index k = 0; k < mesh.n; ++k) {
    for (Index j = 0; j <= degree; ++j) {
      double acc = 0.0;
      for (Index i = 0; i < q; ++i)
        acc += basis.weights[i] * rho0(mesh.x_of(k, basis.nodes[i])) * basis.values(i, j);
      field.coeffs(k, j) =
          j == 0 ? acc / weight_sum : 0.5 * basis.mass_scale[j] * acc;
    }
  }
  return field;
}

double evaluate(const DGField& field, Index element, double xi) {
  return field.coeffs.row(element).dot(legendre_values(field.degree, xi));
}

double left_end_value(const DGField& field) {
  double v = 0.0;
  for (Index j = 0; j <= field.degree; ++j)
    v += (j % 2 == 0 ? 1.0 : -1.0) * field.coeffs(0, j);
  return v;
}

double right_end_value(const DGField& field) {
  return field.coeffs.row(field.n_elements() - 1).sum();
}

double lax_friedrichs_flux(const FundamentalDiagram& left, const FundamentalDiagram& right,
                           double uL, double uR) {
  const double fl = equilibrium_flow(left, uL);
  const double fr = equilibrium_flow(right, uR);
  const double mid = 0.5 * (uL + uR);
  double alpha = 0.0;
  for (double u : {uL, uR, mid}) {
    alpha = std::max(alpha, abs_wave_speed_at(left, u));
    alpha = std::max(alpha, abs_wave_speed_at(right, u));
  }
  return 0.5 * (fl + fr - alpha * (uR - uL));
}

void road_rhs(const RoadDiscretization& rd, const DGField& field, double left_flux,
              double right_flux, Matrix& out, RoadWorkspace& ws) {
  const Index n = field.n_elements();
  const Index p1 = field.degree + 1;
  const Index q = rd.basis.nodes.size();
  const double h = rd.mesh.h();
  const Matrix& c = field.coeffs;

  out.resize(n, p1);
  ws.point_vals.resize(n, q);
  ws.point_flux.resize(n, q);
  ws.volume.resize(n, p1);
  ws.left_vals.resize(n);
  ws.right_vals.resize(n);
  ws.iface_flux.resize(std::max<Index>(n - 1, 0));

  ws.point_vals.noalias() = c * rd.basis.values.transpose();
  for (Index k = 0; k < n; ++k) {
    const FundamentalDiagram& d = rd.diagrams[static_cast<size_t>(k)];
    for (Index i = 0; i < q; ++i)
      ws.point_flux(k, i) = equilibrium_flow(d, ws.point_vals(k, i));
  }
  ws.volume.noalias() = ws.point_flux * rd.basis.dvalues_weighted;

  ws.right_vals = c.rowwise().sum();
  ws.left_vals.noalias() = c * rd.basis.left_end;

  for (Index k = 0; k + 1 < n; ++k)
    ws.iface_flux[k] =
        lax_friedrichs_flux(rd.diagrams[static_cast<size_t>(k)],
                            rd.diagrams[static_cast<size_t>(k + 1)], ws.right_vals[k],
                            ws.left_vals[k + 1]);

  for (Index k = 0; k < n; ++k) {
    const double hl = (k == 0) ? left_flux : ws.iface_flux[k - 1];
    const double hr = (k == n - 1) ? right_flux : ws.iface_flux[k];
    out.row(k) = ((ws.volume.row(k).transpose() - hr * rd.basis.right_end +
                   hl * rd.basis.left_end)
                      .cwiseProduct(rd.basis.mass_scale) /
                  h)
                     .transpose();
  }
}

Matrix road_rhs(const RoadDiscretization& rd, const DGField& field, double left_flux,
                double right_flux) {
  Matrix out;
  RoadWorkspace ws;
  road_rhs(rd, field, left_flux, right_flux, out, ws);
  return out;
}

namespace {

double minmod3(double a, double b, double c) {
  if (a > 0.0 && b > 0.0 && c > 0.0) return std::min({a, b, c});
  if (a < 0.0 && b < 0.0 && c < 0.0) return std::max({a, b, c});
  return 0.0;
}

}  // namespace

void minmod_limit(const RoadDiscretization& rd, DGField& field, const GhostMeans& ghosts,
                  double tvb_m) {
  if (field.degree < 1) return;
  const Index n = field.n_elements();
  const Index p = field.degree;
  Matrix& c = field.coeffs;
  const double threshold = tvb_m * rd.mesh.h() * rd.mesh.h();

  for (Index k = 0; k < n; ++k) {
    // Deviations of the end values from the mean.
    double dev_r = 0.0, dev_l = 0.0;
    for (Index j = 1; j <= p; ++j) {
      dev_r += c(k, j);
      dev_l -= (j % 2 == 0 ? 1.0 : -1.0) * c(k, j);
    }
    if (std::abs(dev_r) <= threshold && std::abs(dev_l) <= threshold) continue;

    const double mean = c(k, 0);
    const double fwd =
        (k + 1 < n) ? c(k + 1, 0) - mean
                    : (ghosts.right ? *ghosts.right - mean : 0.0);
    const double bwd =
        (k > 0) ? mean - c(k - 1, 0) : (ghosts.left ? mean - *ghosts.left : 0.0);

    const double lim_r = minmod3(dev_r, fwd, bwd);
    const double lim_l = minmod3(dev_l, fwd, bwd);
    if (lim_r == dev_r && lim_l == dev_l) continue;

    c(k, 1) = minmod3(c(k, 1), fwd, bwd);
    for (Index j = 2; j <= p; ++j) c(k, j) = 0.0;
  }
}

std::vector<ClampEvent> clamp_admissible(const RoadDiscretization& rd, DGField& field) {
  std::vector<ClampEvent> events;
  const Index n = field.n_elements();
  const Index p = field.degree;
  Matrix& c = field.coeffs;
  const Index ncp = rd.basis.controls.rows();

  for (Index k = 0; k < n; ++k) {
    const double hi = rd.diagrams[static_cast<size_t>(k)].params.rho_max;
    const double lo = 0.0;
    double mean = c(k, 0);
    // A mean past a bound by a few ulps is a rounding artifact, not a loss of
    // admissibility; snap it onto the bound without reporting a violation.
    const double tol = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi);
    if ((mean < lo && mean >= lo - tol) || (mean > hi && mean <= hi + tol)) {
      mean = (mean < lo) ? lo : hi;
      c(k, 0) = mean;
    }
    if (mean < lo || mean > hi) {
      events.push_back({k, mean, lo, hi});
      c.row(k).setZero();
      c(k, 0) = (mean < lo) ? lo : hi;
      continue;
    }
    if (p < 1) continue;

    // Largest factor s in [0,1] keeping mean + s*(u - mean) inside [lo, hi]
    // at every control point.
    double s = 1.0;
    for (Index i = 0; i < ncp; ++i) {
      const double val = rd.basis.controls.row(i).dot(c.row(k));
      const double d = val - mean;
      if (val > hi && d > 0.0) s = std::min(s, (hi - mean) / d);
      if (val < lo && d < 0.0) s = std::min(s, (lo - mean) / d);
    }
    if (s < 1.0) {
      c.row(k).tail(p) *= std::max(s, 0.0);
      // Guard against the scaled values still poking out by a rounding error.
      for (int pass = 0; pass < 4; ++pass) {
        bool clean = true;
        for (Index i = 0; i < ncp; ++i) {
          const double val = rd.basis.controls.row(i).dot(c.row(k));
          if (val > hi || val < lo) {
            clean = false;
            break;
          }
        }
        if (clean) break;
        if (pass == 3)
          c.row(k).tail(p).setZero();
        else
          c.row(k).tail(p) *= 1.0 - 8.0 * std::numeric_limits<double>::epsilon();
      }
    }
  }
  return events;
}

}  // namespace dgflow
