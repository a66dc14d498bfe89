#include "dkp/planewave.hpp"

#include <cmath>
#include <sstream>

namespace dkp {

namespace {

const cd kI(0.0, 1.0);

double sgn(Branch b) { return b == Branch::Positive ? 1.0 : -1.0; }
double sgn(Direction d) { return d == Direction::PlusX ? 1.0 : -1.0; }

// Phase wavenumber for a wave moving along `dir`. Real k maps to -dir*k;
// an evanescent k = i*kappa maps so the wave decays along its direction.
cd phase_kx(Direction dir, cd k) { return -sgn(dir) * std::conj(k); }

}  // namespace

double Kinematics::dispersion_residual() const {
  const cd lhs = cd(k0 - V, 0.0) * cd(k0 - V, 0.0);
  const cd rhs = k * k + cd(mass * mass, 0.0);
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return std::abs(lhs - rhs) / scale;
}

void Kinematics::validate() const {
  if (dispersion_residual() > 1e-12) {
    std::ostringstream os;
    os << "kinematics off shell: (k0-V)^2 != k^2 + m^2 (residual "
       << dispersion_residual() << ")";
    throw DispersionViolation(os.str());
  }
}

cd dispersion(double mass, double k0, double V, Branch branch) {
  const double w = k0 - V;
  const double disc = w * w - mass * mass;
  if (disc >= 0.0) return cd(sgn(branch) * std::sqrt(disc), 0.0);
  return cd(0.0, std::sqrt(-disc));
}

PlaneWave spin0_planewave(cd a, const Kinematics& kin, Direction dir) {
  kin.validate();
  PlaneWave w;
  w.rep = Rep::Spin0;
  w.kin = kin;
  w.scalar_amplitude = a;
  w.direction = dir;
  w.kt = cd(kin.k0, 0.0);
  w.kx = phase_kx(dir, kin.k);
  w.kt_kin = cd(kin.k0 - kin.V, 0.0);
  w.m_eff = cd(kin.mass, 0.0);
  w.amplitude = Vec::Zero(5);
  w.amplitude(0) = a * (-w.kx);
  w.amplitude(3) = a * (-kI * w.kt_kin);
  w.amplitude(4) = a * kin.mass;
  return w;
}

Vec spin0_matching_vector(const PlaneWave& w) {
  Vec v = Vec::Zero(5);
  v(0) = w.scalar_amplitude * (-w.kx);
  v(3) = w.scalar_amplitude * (-kI * w.kt);
  v(4) = w.scalar_amplitude;
  return v;
}

PlaneWave spin1_massive_planewave(cd a, const Kinematics& kin, Direction dir) {
  if (kin.mass <= 0.0)
    throw DispersionViolation("massive vector wave needs mass > 0");
  kin.validate();
  const double rm = std::sqrt(kin.mass);
  PlaneWave w;
  w.rep = Rep::Spin1;
  w.kin = kin;
  w.scalar_amplitude = a;
  w.direction = dir;
  w.kt = cd(kin.k0, 0.0);
  w.kx = phase_kx(dir, kin.k);
  w.kt_kin = cd(kin.k0 - kin.V, 0.0);
  w.m_eff = cd(kin.mass, 0.0);
  w.amplitude = Vec::Zero(10);
  w.amplitude(2) = a * (-kI * w.kt_kin / rm);  // E3
  w.amplitude(4) = a * (-kI * w.kx / rm);      // H2
  w.amplitude(8) = a * rm;                     // p3 (transverse potential)
  return w;
}

PlaneWave spin1_planewave(double e0, double omega, double eps, Direction dir,
                          WaveKind kind, cd scalar_amplitude) {
  if (eps < 0.0) throw DegenerateBarrier("eps must be >= 0");
  if (omega <= 0.0) throw DispersionViolation("omega must be > 0");
  const double root_eps = std::sqrt(eps);
  const double k_region = (kind == WaveKind::Transmitted) ? root_eps * omega : omega;
  PlaneWave w;
  w.rep = Rep::Spin1;
  w.kind = kind;
  w.direction = (kind == WaveKind::Reflected)
                    ? (dir == Direction::PlusX ? Direction::MinusX : Direction::PlusX)
                    : dir;
  w.scalar_amplitude = scalar_amplitude;
  w.massless = true;
  w.kin = Kinematics{0.0, omega, cd(k_region, 0.0), 0.0};
  w.kt = cd(omega, 0.0);
  w.kx = phase_kx(w.direction, cd(k_region, 0.0));
  w.kt_kin = w.kt;
  w.m_eff = cd(0.0, 0.0);
  w.amplitude = Vec::Zero(10);
  w.amplitude(2) = scalar_amplitude * e0;  // E3
  const double hsign = (kind == WaveKind::Reflected) ? +1.0 : -1.0;
  const double hmag = (kind == WaveKind::Transmitted) ? root_eps : 1.0;
  w.amplitude(4) = scalar_amplitude * hsign * hmag * e0 * sgn(dir);  // H2
  return w;
}

PlaneWave photon_planewave(double e0, double omega, double k, double phase,
                           WaveKind kind, double amplitude_factor) {
  if (omega <= 0.0) throw DispersionViolation("omega must be > 0");
  PlaneWave w;
  w.rep = Rep::Spin1;
  w.kind = kind;
  w.direction = (kind == WaveKind::Reflected) ? Direction::MinusX : Direction::PlusX;
  w.phase = phase;
  w.massless = true;
  w.kin = Kinematics{0.0, omega, cd(k, 0.0), 0.0};
  w.kt = cd(omega, 0.0);
  w.kx = phase_kx(w.direction, cd(k, 0.0));
  w.kt_kin = w.kt;
  w.m_eff = cd(0.0, 0.0);
  const double phase_sign = (kind == WaveKind::Incident) ? -1.0 : 1.0;
  const cd ez = e0 * amplitude_factor * std::exp(kI * (phase_sign * phase));
  const double hsign = (kind == WaveKind::Reflected) ? +1.0 : -1.0;
  w.scalar_amplitude = ez;
  w.amplitude = Vec::Zero(10);
  w.amplitude(2) = ez;                          // E_z
  w.amplitude(4) = hsign * (k / omega) * ez;    // H_y
  return w;
}

double residual_first_order(const PlaneWave& p) {
  const BetaSet& b = representation(p.rep);
  if (p.amplitude.size() != b.dim())
    throw DimensionMismatch("amplitude dimension does not match representation");
  const double norm = p.amplitude.norm();
  if (norm == 0.0) return 0.0;
  const Mat K = p.kt_kin * b[0] + p.kx * b[1];
  if (p.massless) {
    const Mat& g = *derived(Rep::Spin1).gamma;
    return (K * (g * p.amplitude)).norm() / norm;
  }
  const Vec r = K * p.amplitude - p.m_eff * p.amplitude;
  return r.norm() / norm;
}

SecondaryResiduals residual_secondary(const PlaneWave& p) {
  const BetaSet& b = representation(p.rep);
  const double norm = p.amplitude.norm();
  SecondaryResiduals out;
  if (norm == 0.0) return out;

  const Mat K = p.kt_kin * b[0] + p.kx * b[1];
  const double kscale = std::max({1.0, std::abs(p.kt_kin), std::abs(p.kx)});

  Vec psi = p.amplitude;
  if (p.massless) psi = (*derived(Rep::Spin1).gamma) * psi;

  // covariant phase components k_nu; beta_nu = g_nu_nu * beta^nu
  const cd knu[4] = {p.kt_kin, p.kx, cd(0, 0), cd(0, 0)};
  for (int nu = 0; nu < 4; ++nu) {
    const Mat beta_lower = BetaSet::metric[nu] * b[nu];
    const Vec r = knu[nu] * psi - K * (beta_lower * psi);
    out.gradient_identity =
        std::max(out.gradient_identity, r.norm() / (norm * kscale));
  }

  const cd shell = p.kt_kin * p.kt_kin - p.kx * p.kx - p.m_eff * p.m_eff;
  out.mass_shell = std::abs(shell);

  if (p.massless) {
    // the carrier lives entirely in the projected subspace
    const Mat& g = *derived(Rep::Spin1).gamma;
    out.constraint = ((Mat::Identity(b.dim(), b.dim()) - g) * p.amplitude).norm() / norm;
  } else {
    const Mat b0sq = b[0] * b[0];
    const Mat proj = Mat::Identity(b.dim(), b.dim()) - b0sq;
    const Vec r = -p.kx * (b[1] * (b0sq * psi)) + p.m_eff * (proj * psi);
    out.constraint = r.norm() / (norm * kscale);
  }
  return out;
}

}  // namespace dkp
