#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hopfkit/averaging.hpp"
#include "hopfkit/field.hpp"
#include "hopfkit/verify.hpp"

namespace hopfkit {

struct DiscriminantSample {
  double r = 0.0;  // RMS radius over the revolution
  double p = 0.0;
};

/// Discriminant estimated from one angular revolution of the canonical
/// field started at each (r, 0):  p = tau - 2 ln(r_return / r) / T.
/// Throws RevolutionFailure if an orbit stops turning or leaves the disk.
std::vector<DiscriminantSample> empirical_discriminant(const ParamField& vf, double a,
                                                       const std::vector<double>& r_grid,
                                                       double disk_radius = 10.0);

/// Least squares p ~ c3 r^2 + c5 r^4.
struct HopfFit {
  double c3 = 0.0;
  double c5 = 0.0;
  double residual = 0.0;  // root-mean-square
  double se3 = 0.0;       // standard errors
  double se5 = 0.0;
  double condition = 1.0; // of the column-equilibrated design matrix
  int count = 0;
};

/// Needs at least 4 samples spanning a factor 2 in r; IllConditioned otherwise
/// or when the design condition number exceeds 1e12.
HopfFit fit_hopf_coefficients(const std::vector<DiscriminantSample>& samples);

enum class Kind { NonDegenerate, DegenerateFirstKind, DegenerateSecondKind };
enum class Criticality { Supercritical, Subcritical };
std::string to_string(Kind k);
std::string to_string(Criticality c);

/// |p_{2s+1}(tau)| ~ amplitude_constant |tau|^exponent.
struct CoefficientScaling {
  int index = 1;  // s
  double amplitude_constant = 0.0;
  double exponent = 0.0;
  double fit_quality = 0.0;  // R^2 with a log-variance floor, see PowerLawFit
  bool negligible = false;
  int significant_count = 0;  // tau values where the coefficient was resolved
  std::string note;
};

struct SufficientCondition {
  enum class Verdict { TwoCycles, OneSemistable, None };
  double delta = 0.0;
  Verdict verdict = Verdict::None;
  std::vector<double> u_roots;
  std::vector<double> predicted_radii;  // at the supplied tau
};
std::string to_string(SufficientCondition::Verdict v);

/// p3 = Q3 |tau|^gamma, p5 = -Q5 |tau|^(2 gamma - 1): sign of Q3^2 - 4 Q5
/// decides, radii from Q5 u^2 - Q3 u + 1 = 0 and r = |tau|^((1-gamma)/2) sqrt(u).
SufficientCondition sufficient_condition(double Q3, double Q5, double gamma, double tau,
                                         double tol = 1e-9);

/// Per-tau data behind a classification.
struct TauEvidence {
  double tau = 0.0;
  double a = 0.0;
  std::vector<DiscriminantSample> samples;  // fitted window only
  HopfFit fit;
  bool c3_significant = false;
  bool c5_significant = false;
  std::vector<double> roots;  // positive roots sqrt(u) of c3 u + c5 u^2 = tau
  bool double_root = false;
};

struct ClassifyOptions {
  double tol_eta = 0.1;
  double coefficient_floor = 1e-12;
  double tol_gamma = 0.05;
  double tol_double = 0.02;
  double min_fit_quality = 0.95;
  double r_min = 1e-4;
  double r_max = 1.0;
  int points_per_decade = 8;
  double window_factor = 4.0;  // fit up to the first r with |p| > factor |tau|
  double disk_radius = 10.0;
};

struct Classification {
  Kind kind = Kind::NonDegenerate;
  std::optional<Criticality> criticality;
  int omega_sign = 1;
  int leading_index = 0;     // N; 0 for the first kind
  double gamma = 0.0;
  double radius_constant = 0.0;
  double radius_exponent = 0.0;  // (1 - gamma) / (2 N); 0 for the first kind
  double fitted_root_exponent = 0.0;
  double root_fit_quality = 0.0;
  int emerging_root_count = 0;  // with multiplicity
  double smallest_root = 0.0;  // over every tau; NaN if none
  std::vector<CoefficientScaling> evidence;
  std::vector<TauEvidence> per_tau;  // sorted by tau
  std::optional<SufficientCondition> sufficient;
  double sufficient_q3 = 0.0;
  double sufficient_q5 = 0.0;
};

/// Discriminant samples on a geometric r grid, cut where |p| first exceeds
/// window_factor |tau|, fitted and solved for cycle radii at parameter a.
TauEvidence discriminant_evidence(const ParamField& vf, double a, const ClassifyOptions& opt = {});

/// Geometric tau window: `count` points on [lo, hi] for each requested sign.
std::vector<double> tau_window(double lo = 1e-6, double hi = 1e-3, int count = 8,
                               bool positive = true, bool negative = true);

Classification classify(const ParamField& vf, const std::vector<double>& taus,
                        const ClassifyOptions& opt = {});

struct CyclePrediction {
  enum class Source { Series, Empirical };
  double radius = 0.0;
  Stability stability = Stability::Stable;
  double frequency = 1.0;
  Source source = Source::Empirical;
};
std::string to_string(CyclePrediction::Source s);

struct PredictOptions {
  double tol_double = 0.02;
  CyclePrediction::Source source = CyclePrediction::Source::Empirical;
  double q2 = 0.0;  // frequency correction 1 + q2 A^2 + q4 A^4
  double q4 = 0.0;
};

/// Positive roots u of c5 u^2 + c3 u = tau as radii sqrt(u); Stable where
/// dp/dA > 0.
std::vector<CyclePrediction> predict_cycles(double c3, double c5, double tau,
                                            const PredictOptions& opt = {});

struct AsymptoticCycle {
  double amplitude = 0.0;
  double frequency = 1.0;
  Mat2 mu = Mat2::identity();

  /// amplitude * mu * (cos wt, -sin wt)
  Vec2 profile(double t) const;
  double period() const;
};

AsymptoticCycle asymptotic_cycle(const CyclePrediction& pred, const OscillatorForm& form,
                                 const DiscriminantSeries& ds);

}  // namespace hopfkit
