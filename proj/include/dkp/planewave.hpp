#pragma once
#include <complex>

#include "dkp/algebra.hpp"

namespace dkp {

enum class Branch { Positive, Negative };
enum class Direction { PlusX, MinusX };
enum class WaveKind { Incident, Reflected, Transmitted };

//! Region kinematics in natural units (hbar = c = 1).
//! Invariant: (k0 - V)^2 = k^2 + mass^2 (complex k allowed; the imaginary
//! part encodes evanescence).
struct Kinematics {
  double mass = 0.0;   // rest mass, >= 0
  double k0 = 0.0;     // conserved frequency
  cd k{0.0, 0.0};      // spatial wavenumber along x
  double V = 0.0;      // scalar step height in this region

  double dispersion_residual() const;
  void validate() const;  // throws DispersionViolation
};

//! Region-2 wavenumber from minimal coupling k0 -> k0 - V.  The real branch
//! carries the requested sign; below the gap the result is +i*sqrt(m^2-(k0-V)^2)
//! so that the transmitted wave decays into the barrier.
cd dispersion(double mass, double k0, double V, Branch branch = Branch::Positive);

//! An exact plane-wave solution.  Conventions:
//!   psi(x,t) = amplitude * exp(i*(kt*t + kx*x))
//! with kt the conserved phase frequency and kx the (complex) phase
//! wavenumber; a +x mover built from the scalar exp(i*(k0*t - k*x)) has
//! kx = -k.  The first-order equation holds with the kinetic frequency
//! kt_kin = k0 - V and the effective shell mass m_eff.
struct PlaneWave {
  Rep rep = Rep::Spin0;
  Vec amplitude;        // equation-exact spinor (or field-slot carrier)
  Kinematics kin;
  cd scalar_amplitude{1.0, 0.0};
  Direction direction = Direction::PlusX;
  WaveKind kind = WaveKind::Incident;
  double phase = 0.0;   // photon phase offset, stored only

  cd kt{0.0, 0.0};      // phase covector, time part
  cd kx{0.0, 0.0};      // phase covector, space part
  cd kt_kin{0.0, 0.0};  // kinetic frequency entering the wave equation
  cd m_eff{0.0, 0.0};   // shell mass: kt_kin^2 - kx^2 = m_eff^2
  bool massless = false;
};

//! Massive scalar plane wave.  Amplitude a*(-kx, 0, 0, -i*(k0-V), m); at unit
//! mass this is the familiar (k, 0, 0, -i*k0, 1) triplet of step scattering.
PlaneWave spin0_planewave(cd a, const Kinematics& kin, Direction dir);

//! The derivative-vector form (slot5 normalized to the scalar) used for
//! component-wise matching at a step: a*(-kx, 0, 0, -i*k0, 1).
Vec spin0_matching_vector(const PlaneWave& w);

//! Massive vector boson plane wave, z-polarized, exact on the mass shell.
//! Carries nonzero potential slots; the field-slot ratio is H/E = -kx/kt.
PlaneWave spin1_massive_planewave(cd a, const Kinematics& kin, Direction dir);

//! The three field-slot carrier states of vector-boson step scattering:
//! incident (0,0,E0,0,-E0,0,...), reflected (0,0,E0,0,+E0,0,...),
//! transmitted (0,0,E0,0,-sqrt(eps)*E0,0,...).  These are massless-normalized
//! (exact solutions of the projected massless equation in the free region);
//! sqrt(eps) plays the role of the wavenumber ratio k'/k.  The 1/sqrt(m)
//! normalization of the massive theory is carried symbolically in
//! scalar_amplitude and cancels in every ratio.
PlaneWave spin1_planewave(double e0, double omega, double eps, Direction dir,
                          WaveKind kind, cd scalar_amplitude = cd(1.0, 0.0));

//! Photon (E_z, H_y) pair embedded in the 10-component projected layout,
//! with H_y = -(k/omega) E_z for a +x mover (so the incident Poynting flux
//! is positive).  Pass the region's own k; transmitted waves use k'.
PlaneWave photon_planewave(double e0, double omega, double k, double phase,
                           WaveKind kind, double amplitude_factor = 1.0);

//! |(beta^mu k_mu - m) amplitude| / |amplitude| for massive waves;
//! |(beta^mu k_mu)(gamma psi)| / |psi| for massless carriers.
double residual_first_order(const PlaneWave& p);

//! Residuals of the identities every solution inherits from the first-order
//! equation: the gradient identity d_nu psi = d^rho b_rho b_nu psi, the
//! constraint on the non-dynamical components, and the second-order mass
//! shell |k.k - m^2|.
struct SecondaryResiduals {
  double gradient_identity = 0.0;
  double constraint = 0.0;
  double mass_shell = 0.0;
};
SecondaryResiduals residual_secondary(const PlaneWave& p);

}  // namespace dkp
