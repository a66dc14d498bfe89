#pragma once
#include <utility>
#include <vector>

#include "dkp/algebra.hpp"
#include "dkp/planewave.hpp"

namespace dkp {

struct Grid1D {
  double x_min = 0.0;
  double dx = 1.0;
  int n = 16;
  double dt = 0.1;

  double x(int j) const { return x_min + j * dx; }
  double x_max() const { return x_min + (n - 1) * dx; }
  void validate() const;
};

//! Smooth step V(x) = V0/2 (1 + tanh((x - x_step)/width)); width 0 is sharp.
struct PotentialProfile {
  double V0 = 0.0;
  double x_step = 0.0;
  double width = 0.0;

  double operator()(double x) const;
  bool trivial() const { return V0 == 0.0; }
};

//! Refractive index ramp from 1 to n2 with the same shape.
struct IndexProfile {
  double n2 = 1.0;
  double x_step = 0.0;
  double width = 0.0;

  double operator()(double x) const;
  bool trivial() const { return n2 == 1.0; }
};

struct PacketSpec {
  double x_center = 0.0;
  double sigma = 1.0;      // spatial width
  double k_center = 1.0;   // carrier wavenumber (sign = direction)
  double norm = 1.0;       // target value of the initial S0 integral
};

enum class FieldKind { Spin0KG, PhotonFDTD, DKPFree };

struct FieldState {
  FieldKind kind = FieldKind::Spin0KG;
  Rep rep = Rep::Spin0;  // DKPFree spinor representation
  double mass = 0.0;
  PacketSpec packet;
  std::vector<Vec> comp;  // per-component samples, each of length grid.n
  double t = 0.0;
};

struct Snapshot {
  double t = 0.0;
  std::vector<Vec> comp;
};

struct Trajectory {
  FieldKind kind = FieldKind::Spin0KG;
  Rep rep = Rep::Spin0;
  double mass = 0.0;
  Grid1D grid;
  PotentialProfile potential;
  IndexProfile index;
  PacketSpec packet;
  std::vector<Snapshot> snaps;

  double reference_norm = 0.0;  // conserved-weight integral at t = 0
  double reference_s0 = 0.0;    // S0 integral at t = 0
  double final_norm = 0.0;
  double final_s0 = 0.0;
  double separation_threshold = 5e-3;
  double max_eq1_residual = 0.0;        // scheme-consistent first-order residual
  double max_constraint_residual = 0.0; // non-dynamical component constraint
};

struct EvolveOptions {
  int snap_every = 0;        // 0: ~16 snapshots over the run
  double sponge_width = 0.0; // absorbing layer width at both ends, 0 = off
  double separation_threshold = 5e-3;
};

//! Gaussian-modulated carrier moving along sign(k_center), initialized on the
//! exact dispersion branch of the evolved system.
FieldState init_packet(const Grid1D& grid, const PacketSpec& spec, FieldKind kind,
                       double mass, Rep rep = Rep::Spin0);

//! Assemble the 5-component spinor samples from a scalar field and its time
//! derivative: (i dphi/dx, 0, 0, -(v - i V phi), m phi).
std::vector<Vec> dkp_from_scalar(const Grid1D& grid, const Vec& phi, const Vec& v,
                                 double mass, const PotentialProfile& pot);

//! Second-order leapfrog for the minimally coupled scalar pair.
Trajectory evolve_spin0(const FieldState& state, const Grid1D& grid,
                        const PotentialProfile& pot, double mass, double t_final,
                        const EvolveOptions& opts = {});

//! Staggered-grid leapfrog for (E_z, H_y) with permittivity n(x)^2.
Trajectory evolve_photon(const FieldState& state, const Grid1D& grid,
                         const IndexProfile& index, double t_final,
                         const EvolveOptions& opts = {});

//! Norm-conserving implicit-midpoint (Cayley) stepping of the free
//! Schroedinger-form spinor equation on a periodic grid.
Trajectory evolve_dkp_free(const FieldState& state, const Grid1D& grid,
                           double mass, double t_final,
                           const EvolveOptions& opts = {});

//! Per-point conserved-weight density (charge for potential runs, energy for
//! photons, S0 otherwise) and x-flux for one snapshot.
std::vector<double> measure_density(const Trajectory& traj, const Snapshot& snap);
std::vector<double> measure_flux(const Trajectory& traj, const Snapshot& snap);
std::vector<double> density_S0(const Trajectory& traj, const Snapshot& snap);

//! Reflected/transmitted fractions of the final snapshot, split at x_split.
std::pair<double, double> measure_RT(const Trajectory& traj, double x_split);

//! Max over interior points and snapshot triples of the discrete continuity
//! residual |D_t(psi^dag psi) + D_x(psi^dag beta_tilde_1 psi)|; second-order
//! small for smooth data.
double continuity_residual(const Trajectory& traj);

}  // namespace dkp
