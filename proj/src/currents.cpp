#include "dkp/currents.hpp"

#include <cmath>

namespace dkp {

namespace {

double real_checked(cd z, double scale) {
  // these bilinears are real for Hermitian kernels; anything bigger than
  // rounding noise indicates a corrupted representation
  if (std::abs(z.imag()) > 1e-9 * std::max(1.0, scale))
    throw AlgebraViolation("current component has a non-real value");
  return z.real();
}

}  // namespace

std::array<double, 4> current_j(const Vec& psi, const BetaSet& b) {
  if (psi.size() != b.dim())
    throw DimensionMismatch("spinor dimension does not match representation");
  const DerivedMatrices& d = derived(b.rep);
  const double scale = psi.squaredNorm();
  std::array<double, 4> j{};
  for (int mu = 0; mu < 4; ++mu) {
    const cd val = psi.dot(d.eta0 * (b[mu] * psi));  // psi^dag eta0 b^mu psi
    j[mu] = real_checked(val, scale);
  }
  return j;
}

std::pair<double, std::array<double, 3>> current_S(const Vec& psi, const BetaSet& b) {
  if (psi.size() != b.dim())
    throw DimensionMismatch("spinor dimension does not match representation");
  const DerivedMatrices& d = derived(b.rep);
  const double scale = psi.squaredNorm();
  std::array<double, 3> S{};
  for (int i = 0; i < 3; ++i)
    S[i] = real_checked(psi.dot(d.beta_tilde[i] * psi), scale);
  return {psi.squaredNorm(), S};
}

CurrentSample currents(const Vec& psi, const BetaSet& b) {
  CurrentSample out;
  out.j = current_j(psi, b);
  auto [s0, s] = current_S(psi, b);
  out.S0 = s0;
  out.S = s;
  return out;
}

std::array<double, 3> poynting(double Ez, double Hy) {
  // E = (0,0,Ez), H = (0,Hy,0)
  return {-Ez * Hy, 0.0, 0.0};
}

double flux_x(const PlaneWave& w, CurrentKind which) {
  const BetaSet& b = representation(w.rep);
  switch (which) {
    case CurrentKind::SCurrent:
      return current_S(w.amplitude, b).second[0];
    case CurrentKind::JCurrent:
      return current_j(w.amplitude, b)[1];
    case CurrentKind::Poynting: {
      if (w.rep != Rep::Spin1)
        throw DimensionMismatch("Poynting flux needs the 10-component layout");
      const cd Ez = w.amplitude(2);
      const cd Hy = w.amplitude(4);
      return -(Ez * std::conj(Hy)).real();
    }
  }
  return 0.0;
}

double flux_ratio(const PlaneWave& reflected, const PlaneWave& incident,
                  CurrentKind which) {
  if (reflected.rep != incident.rep)
    throw DimensionMismatch("flux ratio needs waves of one representation");
  const double fi = flux_x(incident, which);
  if (std::abs(fi) < 1e-300) throw ZeroIncidentFlux("incident flux vanishes");
  return std::abs(flux_x(reflected, which)) / std::abs(fi);
}

}  // namespace dkp
