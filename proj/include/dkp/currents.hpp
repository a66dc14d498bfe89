#pragma once
#include <array>

#include "dkp/algebra.hpp"
#include "dkp/planewave.hpp"

namespace dkp {

enum class CurrentKind { SCurrent, JCurrent, Poynting };

//! Both conserved currents evaluated on one spinor.
//!   j^mu = psi^dag eta0 beta^mu psi   (charge type; j0 has no fixed sign)
//!   S0   = psi^dag psi >= 0,  S_i = psi^dag beta_tilde_i psi  (energy flow)
struct CurrentSample {
  std::array<double, 4> j{};
  double S0 = 0.0;
  std::array<double, 3> S{};
};

std::array<double, 4> current_j(const Vec& psi, const BetaSet& b);
std::pair<double, std::array<double, 3>> current_S(const Vec& psi, const BetaSet& b);
CurrentSample currents(const Vec& psi, const BetaSet& b);

//! E x H for E = (0,0,Ez), H = (0,Hy,0); the x component is -Ez*Hy.
std::array<double, 3> poynting(double Ez, double Hy);

//! x-directed flux of one plane wave under the chosen current.
double flux_x(const PlaneWave& w, CurrentKind which);

//! |flux_x(reflected)| / |flux_x(incident)|.
double flux_ratio(const PlaneWave& reflected, const PlaneWave& incident,
                  CurrentKind which);

}  // namespace dkp
