#include "dkp/scatter.hpp"

#include <cmath>
#include <sstream>

namespace dkp {

namespace {

const cd kI(0.0, 1.0);

double incident_wavenumber(const StepProblem& p) {
  if (p.k0 <= p.mass)
    throw OffShell("k0 must exceed the mass for a propagating incident wave");
  return std::sqrt(p.k0 * p.k0 - p.mass * p.mass);
}

// Wavenumber ratio k'/k for the scalar case, honoring the barrier kind.
// Boson solvers always take the positive region-2 branch; the sign choice
// only enters the contrast solvers.
cd spin0_ratio(const StepProblem& p, double k) {
  switch (p.barrier.kind) {
    case Barrier::Kind::Ratio:
      return p.barrier.value;
    case Barrier::Kind::Potential:
      return dispersion(p.mass, p.k0, p.barrier.value.real(), Branch::Positive) / k;
    case Barrier::Kind::Epsilon:
      throw DegenerateBarrier("eps parameterizes the vector boson step");
  }
  return cd(1.0, 0.0);
}

void check(bool ok, const char* what) {
  if (!ok) {
    std::ostringstream os;
    os << "internal consistency check failed: " << what;
    throw AlgebraViolation(os.str());
  }
}

bool purely_imaginary(cd z) {
  return std::abs(z.real()) <= 1e-14 * std::max(1.0, std::abs(z.imag())) &&
         z.imag() != 0.0;
}

}  // namespace

Regime classify_regime(const StepProblem& p) {
  double V = 0.0;
  if (p.barrier.kind == Barrier::Kind::Potential) {
    V = p.barrier.value.real();
  } else {
    // ratio-style barriers: evanescent iff the region-2 wavenumber is imaginary
    const cd r = p.barrier.value;
    if (p.barrier.kind == Barrier::Kind::Ratio && purely_imaginary(r))
      return Regime::Evanescent;
    return Regime::Transmitting;
  }
  const double w = p.k0 - V;
  if (w * w < p.mass * p.mass) return Regime::Evanescent;
  if (V > p.k0 + p.mass) return Regime::KleinZone;
  return Regime::Transmitting;
}

//==============================================================================
ScatterSolution solve_spin1_massive(const StepProblem& p) {
  double root_eps = 0.0;
  switch (p.barrier.kind) {
    case Barrier::Kind::Epsilon: {
      const double eps = p.barrier.value.real();
      if (eps < 0.0) throw DegenerateBarrier("eps must be >= 0");
      root_eps = std::sqrt(eps);
      break;
    }
    case Barrier::Kind::Ratio: {
      const cd r = p.barrier.value;
      if (std::abs(r.imag()) > 0.0 || r.real() < 0.0)
        throw DegenerateBarrier("vector boson step needs a real ratio >= 0");
      root_eps = r.real();
      break;
    }
    case Barrier::Kind::Potential: {
      const double k = incident_wavenumber(p);
      const cd kp = dispersion(p.mass, p.k0, p.barrier.value.real(), Branch::Positive);
      if (std::abs(kp.imag()) > 0.0)
        throw DegenerateBarrier("vector boson step is parameterized by a real ratio");
      root_eps = kp.real() / k;
      break;
    }
  }
  if (std::abs(1.0 + root_eps) < 1e-14)
    throw DegenerateBarrier("matching system degenerate: 1 + sqrt(eps) = 0");

  // matching rows of the carrier states: E: A + B = C, H: A - B = sqrt(eps) C
  Eigen::Matrix2cd M;
  Eigen::Vector2cd rhs;
  M << 1.0, -1.0, -1.0, -root_eps;
  rhs << -1.0, -1.0;
  const Eigen::Vector2cd bc = M.fullPivLu().solve(rhs);

  ScatterSolution s;
  s.b_over_a = bc(0);
  s.c_over_a = bc(1);
  s.current_used = CurrentKind::SCurrent;
  s.regime = (root_eps > 0.0) ? Regime::Transmitting : Regime::Evanescent;

  const cd closed = (1.0 - root_eps) / (1.0 + root_eps);
  check(std::abs(s.b_over_a - closed) <= 1e-12, "vector matching vs closed form");

  s.R = std::norm(s.b_over_a);
  s.T = 1.0 - s.R;

  // independent route: S-current fluxes of the built states
  const double omega = (p.k0 > 0.0) ? p.k0 : 1.0;
  const PlaneWave inc = spin1_planewave(1.0, omega, 1.0, Direction::PlusX,
                                        WaveKind::Incident);
  const PlaneWave ref = spin1_planewave(1.0, omega, 1.0, Direction::PlusX,
                                        WaveKind::Reflected, s.b_over_a);
  const PlaneWave tra = spin1_planewave(1.0, omega, root_eps * root_eps,
                                        Direction::PlusX, WaveKind::Transmitted,
                                        s.c_over_a);
  check(std::abs(flux_ratio(ref, inc, CurrentKind::SCurrent) - s.R) <= 1e-12,
        "reflected S-current flux ratio");
  const double t_flux =
      flux_x(tra, CurrentKind::SCurrent) / flux_x(inc, CurrentKind::SCurrent);
  check(std::abs(s.R + t_flux - 1.0) <= 1e-12, "flux conservation R + T = 1");
  return s;
}

//==============================================================================
ScatterSolution solve_spin0(const StepProblem& p) {
  const double k = incident_wavenumber(p);
  const cd r = spin0_ratio(p, k);
  if (std::abs(1.0 + r) < 1e-14)
    throw DegenerateBarrier("matching system degenerate: 1 + k'/k = 0");

  ScatterSolution s;
  s.current_used = CurrentKind::SCurrent;
  s.regime = classify_regime(p);
  s.b_over_a = (1.0 - r) / (1.0 + r);
  s.c_over_a = 2.0 / (1.0 + r);

  if (purely_imaginary(r)) {
    s.regime = Regime::Evanescent;
    s.R = 1.0;  // |(1 - i x)/(1 + i x)| = 1
    s.T = 0.0;
  } else {
    s.R = std::norm(s.b_over_a);
    s.T = 1.0 - s.R;
  }

  // frequency is conserved, so the time-derivative matching row repeats the
  // scalar row; assert that consistency explicitly
  const cd row_scalar = 1.0 + s.b_over_a - s.c_over_a;
  const cd row_time = -kI * p.k0 * (1.0 + s.b_over_a - s.c_over_a);
  const cd row_deriv = k * (1.0 - s.b_over_a) - r * k * s.c_over_a;
  check(std::abs(row_scalar) <= 1e-12, "scalar matching row");
  check(std::abs(row_time) <= 1e-12 * std::max(1.0, p.k0), "time matching row");
  check(std::abs(row_deriv) <= 1e-12 * std::max(1.0, k), "derivative matching row");

  // reflected/incident flux ratio from the built spinors
  const Kinematics kin1{p.mass, p.k0, cd(k, 0.0), 0.0};
  const PlaneWave inc = spin0_planewave(1.0, kin1, Direction::PlusX);
  const PlaneWave ref = spin0_planewave(s.b_over_a, kin1, Direction::MinusX);
  check(std::abs(flux_ratio(ref, inc, CurrentKind::SCurrent) -
                 std::norm(s.b_over_a)) <= 1e-12,
        "reflected S-current flux ratio");
  return s;
}

//==============================================================================
double fresnel_normal_incidence(double n) {
  return (n - 1.0) * (n - 1.0) / ((n + 1.0) * (n + 1.0));
}

ScatterSolution solve_photon(const StepProblem& p) {
  double n = 0.0;
  switch (p.barrier.kind) {
    case Barrier::Kind::Ratio:
      if (std::abs(p.barrier.value.imag()) > 0.0)
        throw InvalidIndex("index ratio must be real");
      n = p.barrier.value.real();
      break;
    case Barrier::Kind::Potential:
      // massless minimal coupling: k' = k0 - V
      n = (p.k0 - p.barrier.value.real()) / p.k0;
      break;
    case Barrier::Kind::Epsilon:
      n = std::sqrt(p.barrier.value.real());
      break;
  }
  if (!(n > 0.0)) throw InvalidIndex("index ratio must be > 0");

  ScatterSolution s;
  s.current_used = CurrentKind::Poynting;
  s.regime = Regime::Transmitting;
  s.b_over_a = (1.0 - n) / (1.0 + n);
  s.c_over_a = 2.0 / (1.0 + n);
  s.R = std::norm(s.b_over_a);
  s.T = 1.0 - s.R;

  check(std::abs(s.R - fresnel_normal_incidence(n)) <= 1e-12,
        "matching vs Fresnel reflectance");

  const double omega = (p.k0 > 0.0) ? p.k0 : 1.0;
  const PlaneWave inc = photon_planewave(1.0, omega, omega, 0.0, WaveKind::Incident);
  const PlaneWave ref = photon_planewave(1.0, omega, omega, 0.0, WaveKind::Reflected,
                                         s.b_over_a.real());
  const PlaneWave tra = photon_planewave(1.0, omega, n * omega, 0.0,
                                         WaveKind::Transmitted, s.c_over_a.real());
  check(std::abs(flux_ratio(ref, inc, CurrentKind::Poynting) - s.R) <= 1e-12,
        "reflected Poynting flux ratio");
  const double t_flux =
      flux_x(tra, CurrentKind::Poynting) / flux_x(inc, CurrentKind::Poynting);
  check(std::abs(s.R + t_flux - 1.0) <= 1e-12, "Poynting flux conservation");
  return s;
}

//==============================================================================
ScatterSolution solve_dirac_contrast(const StepProblem& p) {
  if (p.particle != Particle::DiracContrast)
    throw OffShell("solver expects the Dirac contrast case");
  if (p.mass <= 0.0) throw OffShell("Dirac contrast needs mass > 0");
  if (p.barrier.kind != Barrier::Kind::Potential)
    throw DegenerateBarrier("Dirac contrast is parameterized by a potential");
  const double V = p.barrier.value.real();
  const double k = incident_wavenumber(p);
  const double w = p.k0 - V;
  const double disc = w * w - p.mass * p.mass;
  const cd kp = (disc >= 0.0)
                    ? cd((p.branch == Branch::Positive ? 1.0 : -1.0) * std::sqrt(disc), 0.0)
                    : cd(0.0, std::sqrt(-disc));
  const double denom = p.k0 - V + p.mass;
  if (std::abs(denom) < 1e-14)
    throw DegenerateBarrier("spinor matching degenerate at V = k0 + m");

  const cd kappa = kp * (p.k0 + p.mass) / (k * denom);
  if (std::abs(1.0 + kappa) < 1e-14)
    throw DegenerateBarrier("matching system degenerate: 1 + kappa = 0");

  ScatterSolution s;
  s.current_used = CurrentKind::JCurrent;
  s.regime = classify_regime(p);
  s.b_over_a = (1.0 - kappa) / (1.0 + kappa);
  s.c_over_a = 2.0 / (1.0 + kappa);
  s.R = std::norm(s.b_over_a);
  s.T = kappa.real() * std::norm(s.c_over_a);  // signed transmitted flux
  check(std::abs(s.R + s.T - 1.0) <= 1e-12, "Dirac flux conservation");
  return s;
}

//==============================================================================
ScatterSolution solve_kg_contrast(const StepProblem& p) {
  if (p.mass <= 0.0) throw OffShell("KG contrast needs mass > 0");
  if (p.barrier.kind != Barrier::Kind::Potential)
    throw DegenerateBarrier("KG contrast is parameterized by a potential");
  const double V = p.barrier.value.real();
  const double k = incident_wavenumber(p);
  const cd kp = dispersion(p.mass, p.k0, V, p.branch);
  if (std::abs(k + kp) < 1e-14)
    throw DegenerateBarrier("matching system degenerate: k + k' = 0");

  ScatterSolution s;
  s.current_used = CurrentKind::JCurrent;
  s.regime = classify_regime(p);
  s.b_over_a = (k - kp) / (k + kp);
  s.c_over_a = 2.0 * k / (k + kp);

  if (purely_imaginary(kp)) {
    s.R = 1.0;
    s.T = 0.0;
  } else {
    s.R = std::norm(s.b_over_a);
    s.T = (kp.real() / k) * std::norm(s.c_over_a);
  }
  check(std::abs(s.R + s.T - 1.0) <= 1e-12, "KG charge flux conservation");
  s.R_j = s.R;

  // S-current ratio of the equivalent 5-component states (both in region 1)
  const Kinematics kin1{p.mass, p.k0, cd(k, 0.0), 0.0};
  const PlaneWave inc = spin0_planewave(1.0, kin1, Direction::PlusX);
  const PlaneWave ref = spin0_planewave(s.b_over_a, kin1, Direction::MinusX);
  s.R_S = flux_ratio(ref, inc, CurrentKind::SCurrent);
  return s;
}

ScatterSolution solve(const StepProblem& p) {
  switch (p.particle) {
    case Particle::Spin0Massive:
      return solve_spin0(p);
    case Particle::Spin1Massive:
      return solve_spin1_massive(p);
    case Particle::Photon:
      return solve_photon(p);
    case Particle::DiracContrast:
      return solve_dirac_contrast(p);
    case Particle::KGContrast:
      return solve_kg_contrast(p);
  }
  throw UsageError("unknown particle");
}

std::vector<SweepRow> sweep(const StepProblem& tmpl, const std::string& param,
                            double from, double to, int steps) {
  if (steps < 2) throw UsageError("sweep needs steps >= 2");
  std::vector<SweepRow> rows;
  rows.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    const double v = from + (to - from) * static_cast<double>(i) /
                                static_cast<double>(steps - 1);
    StepProblem p = tmpl;
    if (param == "V")
      p.barrier = Barrier::potential(v);
    else if (param == "eps")
      p.barrier = Barrier::epsilon(v);
    else if (param == "ratio")
      p.barrier = Barrier::ratio(cd(v, 0.0));
    else if (param == "k0")
      p.k0 = v;
    else if (param == "mass")
      p.mass = v;
    else
      throw UsageError("unknown sweep parameter: " + param);

    SweepRow row;
    row.value = v;
    try {
      row.sol = solve(p);
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace dkp
