#include "dkp/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dkp/fft.hpp"

namespace dkp {

namespace {

const cd kI(0.0, 1.0);
constexpr double kPi = std::numbers::pi;

double ramp01(double x, double x_step, double width) {
  if (width <= 0.0) return x >= x_step ? 1.0 : 0.0;
  return 0.5 * (1.0 + std::tanh((x - x_step) / width));
}

int auto_cadence(int steps, int snap_every) {
  if (snap_every > 0) return snap_every;
  return std::max(1, steps / 16);
}

struct SpongeMask {
  std::vector<double> damp;  // per-step multiplicative factor, 1 outside
  bool active = false;
};

SpongeMask make_sponge(const Grid1D& g, double width) {
  SpongeMask m;
  if (width <= 0.0) return m;
  m.active = true;
  m.damp.assign(g.n, 1.0);
  const double gamma0 = 4.0 / width;
  for (int j = 0; j < g.n; ++j) {
    const double dl = (g.x(j) - g.x_min) / width;
    const double dr = (g.x_max() - g.x(j)) / width;
    double q = 0.0;
    if (dl < 1.0) q = (1.0 - dl) * (1.0 - dl);
    if (dr < 1.0) q = std::max(q, (1.0 - dr) * (1.0 - dr));
    m.damp[j] = std::exp(-g.dt * gamma0 * q);
  }
  return m;
}

Vec centered_dx(const Vec& f, double dx) {
  const int n = static_cast<int>(f.size());
  Vec d = Vec::Zero(n);
  for (int j = 1; j + 1 < n; ++j) d(j) = (f(j + 1) - f(j - 1)) / (2.0 * dx);
  return d;
}

// trapezoid weights over a symmetric k-window; the Gaussian spectrum decays
// to ~1e-8 at the window edge
struct KQuad {
  std::vector<double> k, w;
};

KQuad k_quadrature(double kc, double sigma, int m = 257) {
  KQuad q;
  const double half = 6.0 / sigma;
  const double dk = 2.0 * half / (m - 1);
  q.k.resize(m);
  q.w.resize(m);
  for (int i = 0; i < m; ++i) {
    q.k[i] = kc - half + i * dk;
    q.w[i] = (i == 0 || i == m - 1) ? 0.5 * dk : dk;
  }
  return q;
}

void packet_guards(const Grid1D& g, const PacketSpec& s) {
  if (s.sigma <= 0.0) throw PacketOutOfBounds("packet sigma must be > 0");
  if (s.k_center == 0.0) throw UnderResolved("packet needs a nonzero carrier");
  const double lambda = 2.0 * kPi / std::abs(s.k_center);
  if (g.dx > lambda / 16.0)
    throw UnderResolved("fewer than 16 points per carrier wavelength");
  if (s.sigma * std::abs(s.k_center) < 10.0)
    throw PacketOutOfBounds("packet is not quasi-monochromatic (sigma*|k| < 10)");
  const double margin = 2.0 * g.dx;
  if (s.x_center - 5.0 * s.sigma < g.x_min + margin ||
      s.x_center + 5.0 * s.sigma > g.x_max() - margin)
    throw PacketOutOfBounds("packet support leaves the grid");
}

double sum_times_dx(const std::vector<double>& v, double dx) {
  double s = 0.0;
  for (double x : v) s += x;
  return s * dx;
}

}  // namespace

// fraction of the conserved weight still inside a window around the step
static double step_window_fraction(const Trajectory& traj, const Snapshot& snap,
                                   double x_split) {
  const Grid1D& g = traj.grid;
  const std::vector<double> w = measure_density(traj, snap);
  const double kc = std::abs(traj.packet.k_center);
  const double pw = std::max(traj.potential.width, traj.index.width);
  const double delta =
      std::max({5.0 * pw, kc > 0.0 ? 4.0 * kPi / kc : 0.0, 10.0 * g.dx});
  double window = 0.0, total = 0.0;
  for (int j = 0; j < g.n; ++j) {
    total += std::abs(w[j]);
    if (std::abs(g.x(j) - x_split) <= delta) window += std::abs(w[j]);
  }
  return total > 0.0 ? window / total : 0.0;
}

static void require_separated(const Trajectory& traj, double x_split) {
  if (step_window_fraction(traj, traj.snaps.back(), x_split) >
      traj.separation_threshold)
    throw NotSeparated("packet still overlaps the step region");
}

void Grid1D::validate() const {
  if (n < 16) throw UsageError("grid needs at least 16 points");
  if (dx <= 0.0 || dt <= 0.0) throw UsageError("grid spacing and step must be > 0");
  if (dt > dx * (1.0 + 1e-12))
    throw CourantViolation("time step exceeds dx (cfl must be <= 1)");
}

double PotentialProfile::operator()(double x) const {
  return V0 * ramp01(x, x_step, width);
}

double IndexProfile::operator()(double x) const {
  return 1.0 + (n2 - 1.0) * ramp01(x, x_step, width);
}

//==============================================================================
// packet initialization
//==============================================================================

static FieldState init_spin0_packet(const Grid1D& g, const PacketSpec& s, double mass) {
  FieldState st;
  st.kind = FieldKind::Spin0KG;
  st.mass = mass;
  st.packet = s;
  st.comp.assign(2, Vec::Zero(g.n));

  const KQuad q = k_quadrature(s.k_center, s.sigma);
  const int m = static_cast<int>(q.k.size());
  std::vector<cd> phase(m), step(m), amp(m);
  for (int i = 0; i < m; ++i) {
    const double dk = q.k[i] - s.k_center;
    amp[i] = q.w[i] * std::exp(-0.5 * s.sigma * s.sigma * dk * dk);
    phase[i] = std::exp(-kI * q.k[i] * (g.x_min - s.x_center));
    step[i] = std::exp(-kI * q.k[i] * g.dx);
  }
  for (int j = 0; j < g.n; ++j) {
    cd phi(0, 0), v(0, 0);
    for (int i = 0; i < m; ++i) {
      const cd c = amp[i] * phase[i];
      phi += c;
      v += kI * std::sqrt(q.k[i] * q.k[i] + mass * mass) * c;
      phase[i] *= step[i];
    }
    st.comp[0](j) = phi;
    st.comp[1](j) = v;
  }

  // normalize the S0 integral to the requested value
  const Vec dphi = centered_dx(st.comp[0], g.dx);
  double s0 = 0.0;
  for (int j = 0; j < g.n; ++j)
    s0 += std::norm(dphi(j)) + std::norm(st.comp[1](j)) +
          mass * mass * std::norm(st.comp[0](j));
  s0 *= g.dx;
  const double scale = std::sqrt(s.norm / s0);
  st.comp[0] *= scale;
  st.comp[1] *= scale;
  return st;
}

static FieldState init_photon_packet(const Grid1D& g, const PacketSpec& s) {
  FieldState st;
  st.kind = FieldKind::PhotonFDTD;
  st.mass = 0.0;
  st.packet = s;
  st.comp.assign(2, Vec::Zero(g.n));
  const double dir = (s.k_center >= 0.0) ? 1.0 : -1.0;
  auto f = [&](double u) {
    return std::exp(-u * u / (2.0 * s.sigma * s.sigma)) * std::cos(s.k_center * u);
  };
  for (int j = 0; j < g.n; ++j) {
    st.comp[0](j) = f(g.x(j) - s.x_center);
    const double xh = g.x(j) + 0.5 * g.dx;  // staggered H node
    st.comp[1](j) = -dir * f(xh + dir * 0.5 * g.dt - s.x_center);
  }
  double u = 0.0;
  for (int j = 0; j < g.n; ++j)
    u += 0.5 * (std::norm(st.comp[0](j)) + std::norm(st.comp[1](j)));
  u *= g.dx;
  const double scale = std::sqrt(s.norm / u);
  st.comp[0] *= scale;
  st.comp[1] *= scale;
  return st;
}

static FieldState init_dkp_packet(const Grid1D& g, const PacketSpec& s, double mass,
                                  Rep rep) {
  if (!is_pow2(static_cast<std::size_t>(g.n)))
    throw UsageError("spinor evolution needs a power-of-two grid");
  if (rep == Rep::Spin1 && mass <= 0.0)
    throw OffShell("the 10-component free evolution needs mass > 0");

  FieldState st;
  st.kind = FieldKind::DKPFree;
  st.rep = rep;
  st.mass = mass;
  st.packet = s;
  const int dim = rep_dim(rep);
  st.comp.assign(dim, Vec::Zero(g.n));

  std::vector<cd> gbuf(g.n);
  for (int j = 0; j < g.n; ++j) {
    const double u = g.x(j) - s.x_center;
    gbuf[j] = std::exp(-u * u / (2.0 * s.sigma * s.sigma)) *
              std::exp(-kI * s.k_center * u);
  }
  fft(gbuf, false);
  const std::vector<double> kappa = fft_wavenumbers(g.n, g.dx);

  std::vector<std::vector<cd>> spec(dim, std::vector<cd>(g.n, cd(0, 0)));
  const double rm = (rep == Rep::Spin1) ? std::sqrt(mass) : 0.0;
  for (int mno = 0; mno < g.n; ++mno) {
    const double kt = std::sin(kappa[mno] * g.dx) / g.dx;  // discrete symbol
    const double w = std::sqrt(kt * kt + mass * mass);
    const cd gm = gbuf[mno];
    if (rep == Rep::Spin0) {
      spec[0][mno] = -kt * gm;
      spec[3][mno] = -kI * w * gm;
      spec[4][mno] = mass * gm;
    } else {
      spec[2][mno] = -kI * w / rm * gm;
      spec[4][mno] = -kI * kt / rm * gm;
      spec[8][mno] = rm * gm;
    }
  }
  for (int c = 0; c < dim; ++c) {
    fft(spec[c], true);
    for (int j = 0; j < g.n; ++j) st.comp[c](j) = spec[c][j];
  }

  double s0 = 0.0;
  for (int c = 0; c < dim; ++c) s0 += st.comp[c].squaredNorm();
  s0 *= g.dx;
  const double scale = std::sqrt(s.norm / s0);
  for (int c = 0; c < dim; ++c) st.comp[c] *= scale;
  return st;
}

FieldState init_packet(const Grid1D& grid, const PacketSpec& spec, FieldKind kind,
                       double mass, Rep rep) {
  grid.validate();
  packet_guards(grid, spec);
  switch (kind) {
    case FieldKind::Spin0KG:
      return init_spin0_packet(grid, spec, mass);
    case FieldKind::PhotonFDTD:
      return init_photon_packet(grid, spec);
    case FieldKind::DKPFree:
      return init_dkp_packet(grid, spec, mass, rep);
  }
  throw UsageError("unknown field kind");
}

std::vector<Vec> dkp_from_scalar(const Grid1D& grid, const Vec& phi, const Vec& v,
                                 double mass, const PotentialProfile& pot) {
  std::vector<Vec> psi(5, Vec::Zero(grid.n));
  for (int j = 0; j < grid.n; ++j) {
    // periodic centered difference, matching the spinor evolver's stencil
    const int jp = (j + 1) % grid.n, jm = (j + grid.n - 1) % grid.n;
    const cd dphi = (phi(jp) - phi(jm)) / (2.0 * grid.dx);
    const double V = pot(grid.x(j));
    psi[0](j) = kI * dphi;
    psi[3](j) = -(v(j) - kI * V * phi(j));
    psi[4](j) = mass * phi(j);
  }
  return psi;
}

//==============================================================================
// scalar pair, leapfrog
//==============================================================================

Trajectory evolve_spin0(const FieldState& state, const Grid1D& grid,
                        const PotentialProfile& pot, double mass, double t_final,
                        const EvolveOptions& opts) {
  grid.validate();
  if (state.kind != FieldKind::Spin0KG || state.comp.size() != 2)
    throw DimensionMismatch("state is not a scalar pair");
  if (state.comp[0].size() != grid.n)
    throw DimensionMismatch("state length does not match the grid");

  double vmax = 0.0;
  for (int j = 0; j < grid.n; ++j) vmax = std::max(vmax, std::abs(pot(grid.x(j))));
  const double wmax = vmax + std::sqrt(4.0 / (grid.dx * grid.dx) + mass * mass);
  if (grid.dt * wmax > 1.9)
    throw CourantViolation("leapfrog unstable: dt * omega_max > 1.9");

  if (!pot.trivial()) {
    // the packet must start on the incident side of the step
    const double guard = pot.x_step - 3.0 * std::max(pot.width, grid.dx);
    double inside = 0.0, total = 0.0;
    for (int j = 0; j < grid.n; ++j) {
      const double w = std::norm(state.comp[0](j));
      total += w;
      if (grid.x(j) > guard) inside += w;
    }
    if (inside > 1e-8 * total)
      throw PacketOutOfBounds("packet overlaps the step at t = 0");
  }

  const int steps = std::max(1, static_cast<int>(std::llround(t_final / grid.dt)));
  const int cadence = auto_cadence(steps, opts.snap_every);
  const SpongeMask sponge = make_sponge(grid, opts.sponge_width);

  std::vector<double> V(grid.n), Vsq_m(grid.n);
  for (int j = 0; j < grid.n; ++j) {
    V[j] = pot(grid.x(j));
    Vsq_m[j] = V[j] * V[j] - mass * mass;
  }

  Vec cur = state.comp[0];
  Vec vel = state.comp[1];
  const double inv_dx2 = 1.0 / (grid.dx * grid.dx);
  auto lap = [&](const Vec& f, int j) {
    if (j == 0 || j == grid.n - 1) return cd(0.0, 0.0);
    return (f(j + 1) - 2.0 * f(j) + f(j - 1)) * inv_dx2;
  };

  // second-order start: phi^{-1} = phi - dt v + dt^2/2 (L phi + (V^2-m^2) phi + 2iV v)
  Vec prev = Vec::Zero(grid.n);
  for (int j = 0; j < grid.n; ++j) {
    const cd acc = lap(cur, j) + Vsq_m[j] * cur(j) + 2.0 * kI * V[j] * vel(j);
    prev(j) = cur(j) - grid.dt * vel(j) + 0.5 * grid.dt * grid.dt * acc;
  }

  Trajectory traj;
  traj.kind = FieldKind::Spin0KG;
  traj.mass = mass;
  traj.grid = grid;
  traj.potential = pot;
  traj.packet = state.packet;
  traj.separation_threshold = opts.separation_threshold;

  Vec next = Vec::Zero(grid.n);
  const double dt = grid.dt;
  double t = state.t;

  auto record = [&](double tn, const Vec& phi_n, const Vec& v_n) {
    traj.snaps.push_back(Snapshot{tn, {phi_n, v_n}});
  };

  // residual of the first-order system rebuilt from the scalar, evaluated with
  // the scheme's own difference operators on potential-free interior points
  auto eq1_residual = [&](const Vec& pm, const Vec& p0, const Vec& pp) {
    double worst = 0.0, scale = 1e-300;
    for (int j = 1; j + 1 < grid.n; ++j) {
      scale = std::max(scale, std::abs(p0(j)));
      if (V[j] != 0.0) continue;
      const cd r = (pp(j) - 2.0 * p0(j) + pm(j)) / (dt * dt) - lap(p0, j) -
                   Vsq_m[j] * p0(j);
      worst = std::max(worst, std::abs(r));
    }
    return worst / (scale * (4.0 * inv_dx2 + mass * mass));
  };

  for (int nstep = 0; nstep <= steps; ++nstep) {
    for (int j = 0; j < grid.n; ++j) {
      const cd rhs = 2.0 * cur(j) - (1.0 + kI * V[j] * dt) * prev(j) +
                     dt * dt * (lap(cur, j) + Vsq_m[j] * cur(j));
      next(j) = rhs / (1.0 - kI * V[j] * dt);
    }

    if (nstep % cadence == 0 || nstep == steps) {
      Vec v_c = (next - prev) / (2.0 * dt);
      traj.max_eq1_residual =
          std::max(traj.max_eq1_residual, eq1_residual(prev, cur, next));
      record(t, cur, v_c);
      if (nstep == steps) break;
    }

    if (sponge.active)
      for (int j = 0; j < grid.n; ++j) {
        next(j) *= sponge.damp[j];
        cur(j) *= sponge.damp[j];
      }
    prev.swap(cur);
    cur.swap(next);
    t += dt;
  }

  // reference and final norms from snapshots, so both ends of the run are
  // measured with the same centered time-derivative estimator
  traj.reference_norm = sum_times_dx(measure_density(traj, traj.snaps.front()), grid.dx);
  traj.reference_s0 = sum_times_dx(density_S0(traj, traj.snaps.front()), grid.dx);
  traj.final_norm = sum_times_dx(measure_density(traj, traj.snaps.back()), grid.dx);
  traj.final_s0 = sum_times_dx(density_S0(traj, traj.snaps.back()), grid.dx);
  if (!pot.trivial()) require_separated(traj, pot.x_step);
  return traj;
}

//==============================================================================
// photon pair, staggered leapfrog
//==============================================================================

Trajectory evolve_photon(const FieldState& state, const Grid1D& grid,
                         const IndexProfile& index, double t_final,
                         const EvolveOptions& opts) {
  grid.validate();
  if (state.kind != FieldKind::PhotonFDTD || state.comp.size() != 2)
    throw DimensionMismatch("state is not an (E_z, H_y) pair");
  double nmax = 1.0;
  for (int j = 0; j < grid.n; ++j) nmax = std::max(nmax, index(grid.x(j)));
  if (grid.dt > grid.dx / nmax * (1.0 + 1e-12))
    throw CourantViolation("photon stepping needs cfl <= 1/max(n)");

  if (!index.trivial()) {
    const double guard = index.x_step - 3.0 * std::max(index.width, grid.dx);
    double inside = 0.0, total = 0.0;
    for (int j = 0; j < grid.n; ++j) {
      const double w = std::norm(state.comp[0](j));
      total += w;
      if (grid.x(j) > guard) inside += w;
    }
    if (inside > 1e-8 * total)
      throw PacketOutOfBounds("packet overlaps the interface at t = 0");
  }

  std::vector<double> inv_eps(grid.n);
  for (int j = 0; j < grid.n; ++j) {
    // half-cell average of the permittivity keeps a sharp interface second order
    const double nl = index(grid.x(j) - 0.25 * grid.dx);
    const double nr = index(grid.x(j) + 0.25 * grid.dx);
    inv_eps[j] = 2.0 / (nl * nl + nr * nr);
  }

  const int steps = std::max(1, static_cast<int>(std::llround(t_final / grid.dt)));
  const int cadence = auto_cadence(steps, opts.snap_every);
  const SpongeMask sponge = make_sponge(grid, opts.sponge_width);

  Vec E = state.comp[0];
  Vec H = state.comp[1];  // H(j) lives at x_{j+1/2}, time t - dt/2
  const double cfl = grid.dt / grid.dx;

  Trajectory traj;
  traj.kind = FieldKind::PhotonFDTD;
  traj.grid = grid;
  traj.index = index;
  traj.packet = state.packet;
  traj.separation_threshold = opts.separation_threshold;
  traj.snaps.push_back(Snapshot{state.t, {E, H}});

  double t = state.t;
  for (int nstep = 0; nstep < steps; ++nstep) {
    for (int j = 0; j + 1 < grid.n; ++j) H(j) += cfl * (E(j + 1) - E(j));
    for (int j = 1; j < grid.n; ++j) E(j) += cfl * inv_eps[j] * (H(j) - H(j - 1));
    E(0) = 0.0;
    if (sponge.active)
      for (int j = 0; j < grid.n; ++j) {
        E(j) *= sponge.damp[j];
        H(j) *= sponge.damp[j];
      }
    t += grid.dt;
    if ((nstep + 1) % cadence == 0 || nstep == steps - 1)
      traj.snaps.push_back(Snapshot{t, {E, H}});
  }

  traj.reference_norm = sum_times_dx(measure_density(traj, traj.snaps.front()), grid.dx);
  traj.reference_s0 = traj.reference_norm;
  traj.final_norm = sum_times_dx(measure_density(traj, traj.snaps.back()), grid.dx);
  traj.final_s0 = traj.final_norm;
  if (!index.trivial()) require_separated(traj, index.x_step);
  return traj;
}

//==============================================================================
// free spinor evolution, Cayley implicit midpoint on a periodic grid
//==============================================================================

namespace {

double constraint_residual_x(const Grid1D& g, const std::vector<Vec>& comp,
                             double mass, Rep rep) {
  const BetaSet& b = representation(rep);
  const int dim = rep_dim(rep);
  const Mat b0sq = b[0] * b[0];
  const Mat proj = Mat::Identity(dim, dim) - b0sq;
  const Mat b1p = b[1] * b0sq;
  double worst = 0.0, scale = 1e-300;
  Vec psi(dim), dpsi(dim);
  for (int j = 0; j < g.n; ++j) {
    const int jp = (j + 1) % g.n, jm = (j + g.n - 1) % g.n;
    for (int c = 0; c < dim; ++c) {
      psi(c) = comp[c](j);
      dpsi(c) = (comp[c](jp) - comp[c](jm)) / (2.0 * g.dx);
    }
    scale = std::max(scale, psi.norm());
    const Vec r = kI * (b1p * dpsi) + mass * (proj * psi);
    worst = std::max(worst, r.norm());
  }
  return worst / (scale * std::max(1.0, mass));
}

}  // namespace

Trajectory evolve_dkp_free(const FieldState& state, const Grid1D& grid,
                           double mass, double t_final, const EvolveOptions& opts) {
  grid.validate();
  if (state.kind != FieldKind::DKPFree)
    throw DimensionMismatch("state is not a free spinor field");
  const Rep rep = state.rep;
  const int dim = rep_dim(rep);
  if (static_cast<int>(state.comp.size()) != dim)
    throw DimensionMismatch("component count does not match the representation");
  if (!is_pow2(static_cast<std::size_t>(grid.n)))
    throw UsageError("spinor evolution needs a power-of-two grid");

  const double init_constraint = constraint_residual_x(grid, state.comp, mass, rep);
  if (init_constraint > 1e-10)
    throw ConstraintViolated("initial state violates the component constraint");

  const BetaSet& b = representation(rep);
  const Mat tilde1 = derived(rep).beta_tilde[0];

  // per-mode Cayley propagator of H(k) = k_sym * beta_tilde_1 - m * beta0
  const std::vector<double> kappa = fft_wavenumbers(grid.n, grid.dx);
  std::vector<Mat> cayley(grid.n);
  const Mat id = Mat::Identity(dim, dim);
  for (int m = 0; m < grid.n; ++m) {
    const double ksym = std::sin(kappa[m] * grid.dx) / grid.dx;
    const Mat H = ksym * tilde1 - mass * b[0];
    cayley[m] = (id + kI * (grid.dt / 2.0) * H)
                    .fullPivLu()
                    .solve(id - kI * (grid.dt / 2.0) * H);
  }

  // keep the state spectral; return to x-space only at snapshot times
  std::vector<std::vector<cd>> spec(dim, std::vector<cd>(grid.n));
  for (int c = 0; c < dim; ++c) {
    for (int j = 0; j < grid.n; ++j) spec[c][j] = state.comp[c](j);
    fft(spec[c], false);
  }

  const int steps = std::max(1, static_cast<int>(std::llround(t_final / grid.dt)));
  const int cadence = auto_cadence(steps, opts.snap_every);

  Trajectory traj;
  traj.kind = FieldKind::DKPFree;
  traj.rep = rep;
  traj.mass = mass;
  traj.grid = grid;
  traj.packet = state.packet;
  traj.max_constraint_residual = init_constraint;

  auto snapshot = [&](double tn) {
    Snapshot s;
    s.t = tn;
    s.comp.assign(dim, Vec::Zero(grid.n));
    std::vector<cd> buf(grid.n);
    for (int c = 0; c < dim; ++c) {
      buf = spec[c];
      fft(buf, true);
      for (int j = 0; j < grid.n; ++j) s.comp[c](j) = buf[j];
    }
    traj.max_constraint_residual = std::max(
        traj.max_constraint_residual, constraint_residual_x(grid, s.comp, mass, rep));
    traj.snaps.push_back(std::move(s));
  };

  Snapshot init{state.t, state.comp};
  traj.reference_norm = sum_times_dx(density_S0(traj, init), grid.dx);
  traj.reference_s0 = traj.reference_norm;

  Eigen::VectorXcd mode(dim), out(dim);
  double t = state.t;
  snapshot(t);
  for (int nstep = 0; nstep < steps; ++nstep) {
    for (int m = 0; m < grid.n; ++m) {
      for (int c = 0; c < dim; ++c) mode(c) = spec[c][m];
      out.noalias() = cayley[m] * mode;
      for (int c = 0; c < dim; ++c) spec[c][m] = out(c);
    }
    t += grid.dt;
    if ((nstep + 1) % cadence == 0 || nstep == steps - 1) snapshot(t);
  }

  traj.final_norm = sum_times_dx(density_S0(traj, traj.snaps.back()), grid.dx);
  traj.final_s0 = traj.final_norm;
  return traj;
}

//==============================================================================
// densities, fluxes, measurements
//==============================================================================

std::vector<double> density_S0(const Trajectory& traj, const Snapshot& snap) {
  const Grid1D& g = traj.grid;
  std::vector<double> out(g.n, 0.0);
  switch (traj.kind) {
    case FieldKind::Spin0KG: {
      const Vec& phi = snap.comp[0];
      const Vec& v = snap.comp[1];
      const Vec dphi = centered_dx(phi, g.dx);
      for (int j = 0; j < g.n; ++j) {
        const double V = traj.potential(g.x(j));
        const cd d0 = v(j) - kI * V * phi(j);
        out[j] = std::norm(dphi(j)) + std::norm(d0) +
                 traj.mass * traj.mass * std::norm(phi(j));
      }
      break;
    }
    case FieldKind::PhotonFDTD: {
      const Vec& E = snap.comp[0];
      const Vec& H = snap.comp[1];
      for (int j = 0; j < g.n; ++j) {
        const double n = traj.index(g.x(j));
        const cd hbar = (j > 0) ? 0.5 * (H(j) + H(j - 1)) : H(j);
        out[j] = 0.5 * (n * n * std::norm(E(j)) + std::norm(hbar));
      }
      break;
    }
    case FieldKind::DKPFree: {
      for (const Vec& c : snap.comp)
        for (int j = 0; j < g.n; ++j) out[j] += std::norm(c(j));
      break;
    }
  }
  return out;
}

std::vector<double> measure_density(const Trajectory& traj, const Snapshot& snap) {
  const Grid1D& g = traj.grid;
  if (traj.kind == FieldKind::Spin0KG && !traj.potential.trivial()) {
    // charge density, the weight conserved across a potential step
    std::vector<double> out(g.n, 0.0);
    const Vec& phi = snap.comp[0];
    const Vec& v = snap.comp[1];
    for (int j = 0; j < g.n; ++j) {
      const double V = traj.potential(g.x(j));
      out[j] = (std::conj(phi(j)) * (v(j) - kI * V * phi(j))).imag();
    }
    return out;
  }
  return density_S0(traj, snap);
}

std::vector<double> measure_flux(const Trajectory& traj, const Snapshot& snap) {
  const Grid1D& g = traj.grid;
  std::vector<double> out(g.n, 0.0);
  switch (traj.kind) {
    case FieldKind::Spin0KG: {
      const Vec& phi = snap.comp[0];
      const Vec& v = snap.comp[1];
      const Vec dphi = centered_dx(phi, g.dx);
      if (!traj.potential.trivial()) {
        for (int j = 0; j < g.n; ++j)
          out[j] = -(std::conj(phi(j)) * dphi(j)).imag();  // charge flux
      } else {
        for (int j = 0; j < g.n; ++j)
          out[j] = -2.0 * (std::conj(dphi(j)) * v(j)).real();  // S-current flux
      }
      break;
    }
    case FieldKind::PhotonFDTD: {
      const Vec& E = snap.comp[0];
      const Vec& H = snap.comp[1];
      for (int j = 1; j < g.n; ++j) {
        const cd hbar = 0.5 * (H(j) + H(j - 1));
        out[j] = -(E(j) * std::conj(hbar)).real();
      }
      break;
    }
    case FieldKind::DKPFree: {
      const Mat& tilde1 = derived(traj.rep).beta_tilde[0];
      const int dim = rep_dim(traj.rep);
      Vec psi(dim);
      for (int j = 0; j < g.n; ++j) {
        for (int c = 0; c < dim; ++c) psi(c) = snap.comp[c](j);
        out[j] = psi.dot(tilde1 * psi).real();
      }
      break;
    }
  }
  return out;
}

std::pair<double, double> measure_RT(const Trajectory& traj, double x_split) {
  if (traj.snaps.empty()) throw NotSeparated("trajectory has no snapshots");
  const Grid1D& g = traj.grid;
  const Snapshot& fin = traj.snaps.back();

  const bool scattering = !traj.potential.trivial() || !traj.index.trivial();
  if (scattering) require_separated(traj, x_split);

  const std::vector<double> w = measure_density(traj, fin);
  double left = 0.0, right = 0.0;
  for (int j = 0; j < g.n; ++j) {
    if (g.x(j) < x_split)
      left += w[j];
    else
      right += w[j];
  }
  const double ref = traj.reference_norm / g.dx;  // sums, not integrals
  return {left / ref, right / ref};
}

double continuity_residual(const Trajectory& traj) {
  const Grid1D& g = traj.grid;
  if (traj.snaps.size() < 3) throw UsageError("need at least three snapshots");

  // spinor samples per snapshot
  std::vector<std::vector<Vec>> psi;
  psi.reserve(traj.snaps.size());
  if (traj.kind == FieldKind::DKPFree) {
    for (const auto& s : traj.snaps) psi.push_back(s.comp);
  } else if (traj.kind == FieldKind::Spin0KG && traj.potential.trivial()) {
    for (const auto& s : traj.snaps)
      psi.push_back(dkp_from_scalar(g, s.comp[0], s.comp[1], traj.mass, traj.potential));
  } else {
    throw UsageError("continuity residual needs free spinor data");
  }

  const Rep rep = (traj.kind == FieldKind::DKPFree) ? traj.rep : Rep::Spin0;
  const Mat& tilde1 = derived(rep).beta_tilde[0];
  const int dim = rep_dim(rep);

  auto s0_of = [&](const std::vector<Vec>& c, int j) {
    double s = 0.0;
    for (int cc = 0; cc < dim; ++cc) s += std::norm(c[cc](j));
    return s;
  };
  auto s1_of = [&](const std::vector<Vec>& c, int j) {
    Vec p(dim);
    for (int cc = 0; cc < dim; ++cc) p(cc) = c[cc](j);
    return p.dot(tilde1 * p).real();
  };

  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < psi.size(); ++i) {
    const double dt2 = traj.snaps[i + 1].t - traj.snaps[i - 1].t;
    if (dt2 <= 0.0) continue;
    for (int j = 2; j + 2 < g.n; ++j) {
      const double ddt = (s0_of(psi[i + 1], j) - s0_of(psi[i - 1], j)) / dt2;
      const double ddx =
          (s1_of(psi[i], j + 1) - s1_of(psi[i], j - 1)) / (2.0 * g.dx);
      worst = std::max(worst, std::abs(ddt + ddx));
    }
  }
  return worst;
}

}  // namespace dkp
