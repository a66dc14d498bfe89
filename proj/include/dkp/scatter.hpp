#pragma once
#include <optional>
#include <string>
#include <vector>

#include "dkp/currents.hpp"
#include "dkp/planewave.hpp"

namespace dkp {

enum class Particle { Spin0Massive, Spin1Massive, Photon, DiracContrast, KGContrast };
enum class Regime { Transmitting, Evanescent, KleinZone };

//! Step barrier, in exactly one parameterization.
struct Barrier {
  enum class Kind { Potential, Epsilon, Ratio };
  Kind kind = Kind::Potential;
  cd value{0.0, 0.0};

  static Barrier potential(double V) { return {Kind::Potential, cd(V, 0.0)}; }
  static Barrier epsilon(double eps) { return {Kind::Epsilon, cd(eps, 0.0)}; }
  static Barrier ratio(cd r) { return {Kind::Ratio, r}; }
};

struct StepProblem {
  Particle particle = Particle::Spin0Massive;
  double k0 = 1.0;    // conserved frequency
  double mass = 0.0;
  Barrier barrier;
  Branch branch = Branch::Positive;  // sign of the region-2 wavenumber
};

struct ScatterSolution {
  cd b_over_a{0.0, 0.0};
  cd c_over_a{0.0, 0.0};
  double R = 0.0;  // reflected flux / incident flux
  double T = 0.0;  // transmitted flux / incident flux (signed)
  Regime regime = Regime::Transmitting;
  CurrentKind current_used = CurrentKind::SCurrent;
  // KG contrast reports both ratios
  std::optional<double> R_j;
  std::optional<double> R_S;
};

Regime classify_regime(const StepProblem& p);

//! Vector boson step: matching the field-slot carriers gives
//! A+B = C, A-B = sqrt(eps) C, hence R = ((1-sqrt(eps))/(1+sqrt(eps)))^2.
//! R is verified against the S-current flux ratio of the built spinors.
ScatterSolution solve_spin1_massive(const StepProblem& p);

//! Scalar boson step via the 5-component matching system; with r = k'/k,
//! B/A = (1-r)/(1+r).  Purely imaginary k' gives |B/A| = 1 and R = 1 exactly.
ScatterSolution solve_spin0(const StepProblem& p);

//! Photon step with index ratio n = k'/k: R = ((n-1)/(n+1))^2, identical to
//! the Fresnel normal-incidence coefficient; Poynting flux ratio agrees.
ScatterSolution solve_photon(const StepProblem& p);

//! Fresnel normal-incidence reflectance, kept as an independent oracle.
double fresnel_normal_incidence(double n);

//! 1D Dirac step (contrast case).  In the Klein zone V > k0 + m the positive
//! wavenumber branch yields R > 1 with T < 0 and R + T = 1.
ScatterSolution solve_dirac_contrast(const StepProblem& p);

//! Klein-Gordon step under the charge current (contrast case).  Reports R_j
//! and the S-current ratio R_S of the equivalent 5-component states.  In the
//! Klein zone the negative-wavenumber branch (positive group velocity) gives
//! R_j > 1 while the density S0 stays non-negative everywhere.
ScatterSolution solve_kg_contrast(const StepProblem& p);

ScatterSolution solve(const StepProblem& p);

struct SweepRow {
  double value = 0.0;
  std::optional<ScatterSolution> sol;
  std::string error;  // empty when sol holds
};

//! Evaluate `p` with `param` (one of V, eps, ratio, k0, mass) swept over a
//! uniform grid; failures are recorded per row and the sweep continues.
std::vector<SweepRow> sweep(const StepProblem& p, const std::string& param,
                            double from, double to, int steps);

}  // namespace dkp
