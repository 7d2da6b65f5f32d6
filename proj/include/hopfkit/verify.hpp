#pragma once

#include <string>
#include <vector>

#include "hopfkit/field.hpp"
#include "hopfkit/integrator.hpp"
#include "hopfkit/regression.hpp"

namespace hopfkit {

enum class Stability { Stable, Unstable, Semistable };
std::string to_string(Stability s);

struct VerifyOptions {
  double tol = 1e-10;              // integrator tolerance, [1e-12, 1e-6]
  double disk_radius = 10.0;       // Escape beyond this distance from the origin
  double max_time = 200.0 * 3.14159265358979323846;
  int probes_per_decade = 16;      // find_cycles scan density
  double tol_rd = 1e-3;            // semistable: |return derivative - 1| bound
  double semistable_offset = 0.05; // displacement probes at rho (1 +- offset)
  bool reverse_time = false;       // integrate backwards (stability flips)
};

/// Dense trajectory of an integration.
struct Trajectory {
  std::vector<DormandPrince<2>::Step> steps;

  double t_end() const { return steps.empty() ? 0.0 : steps.back().t0 + steps.back().h; }
  Vec2 at(double t) const;
};

Trajectory integrate(const ParamField& vf, double a, Vec2 x0, double t_end, double tol,
                     double disk_radius = 10.0);
Trajectory integrate(const PlanarPolynomial& field, Vec2 x0, double t_end, double tol,
                     double disk_radius = 10.0);

struct ReturnResult {
  double r_return = 0.0;
  double t_return = 0.0;
};

/// First return to the positive x-axis of canonical coordinates, starting
/// from (r, 0) and crossing counter-clockwise.
ReturnResult poincare_map(const ParamField& vf, double a, double r,
                          const VerifyOptions& opt = {});
ReturnResult poincare_map(const PlanarPolynomial& canonical_field, double r,
                          const VerifyOptions& opt = {});

struct CycleRecord {
  double radius = 0.0;        // mean distance to the origin over one period
  double section_radius = 0.0;  // crossing point on the section
  double period = 0.0;
  double frequency = 0.0;
  Stability stability = Stability::Stable;
  double return_derivative = 1.0;
  double a = 0.0;
  double tau = 0.0;
  // Displacement r_return - r at rho (1 - offset) and rho (1 + offset).
  double displacement_inside = 0.0;
  double displacement_outside = 0.0;
};

/// Limit cycles crossing the section within [r_min, r_max].
std::vector<CycleRecord> find_cycles(const ParamField& vf, double a, double r_min, double r_max,
                                     const VerifyOptions& opt = {});

struct SweepReport {
  std::vector<double> tau_values;
  std::vector<double> a_values;
  std::vector<std::vector<CycleRecord>> cycles;  // per tau, sorted by radius
  std::vector<double> smallest_cycle_radii;      // emerging family; NaN when absent
  double fitted_radius_exponent = 0.0;
  double fitted_radius_constant = 0.0;
  double radius_fit_r_squared = 0.0;
  int emerging_branch_count = 0;
  // Smallest kappa with |freq - 1| <= |tau|^kappa over every detected cycle.
  double fitted_frequency_exponent_bound = 0.0;
  double max_frequency_deviation = 0.0;
  std::vector<CycleRecord> persistent_cycles;
  bool inconclusive = false;
  std::string note;
};

struct SweepOptions {
  double r_min = 1e-4;
  double r_max = 1.5;
  VerifyOptions verify;
};

SweepReport scaling_sweep(const ParamField& vf, const std::vector<double>& tau_values,
                          const SweepOptions& opt = {});

/// Rows: tau, radius, period, stability, return_derivative.
std::string sweep_csv(const SweepReport& report);

}  // namespace hopfkit
