// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Each criterion pins its tolerance in code.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dkp/currents.hpp"
#include "dkp/evolve.hpp"
#include "dkp/runio.hpp"
#include "dkp/scatter.hpp"

using namespace dkp;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void report(int number, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %2d: %s  (%s)\n", pass ? "PASS" : "FAIL", number,
              name.c_str(), detail.c_str());
  if (!pass) ++g_failures;
}

// --------------------------------------------------------------------------
void criterion_1_algebra() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  bool pass = true;
  for (Rep rep : {Rep::Spin0, Rep::Spin1}) {
    const BetaSet& b = representation(rep);
    worst = std::max(worst, trilinear_residual(b));
    const auto herm = check_hermiticity(b);
    for (double r : herm.residual) worst = std::max(worst, r);
    try {
      const DerivedMatrices d = build_derived(b, 1e-13);
      const Mat id = Mat::Identity(b.dim(), b.dim());
      worst = std::max(worst, max_abs(d.eta0 * d.eta0 - id));
      worst = std::max(worst, max_abs(d.eta0 * b[0] - b[0]));
      for (int i = 1; i < 4; ++i)
        worst = std::max(worst, max_abs(d.eta0 * b[i] + b[i] * d.eta0));
      for (int i = 0; i < 3; ++i)
        worst =
            std::max(worst, max_abs(d.beta_tilde[i] - d.beta_tilde[i].adjoint()));
      if (rep == Rep::Spin1) {
        const Mat& g = *d.gamma;
        worst = std::max(worst, max_abs(g * g - g));
        for (int mu = 0; mu < 4; ++mu)
          worst = std::max(worst, max_abs(g * b[mu] + b[mu] * g - b[mu]));
      }
    } catch (const Error&) {
      pass = false;
    }
  }
  const double dt = seconds_since(t0);
  pass = pass && worst <= 1e-13 && dt < 1.0;
  std::ostringstream os;
  os << "worst residual " << worst << ", " << dt << " s";
  report(1, "algebra identities for both representations", pass, os.str());
}

// --------------------------------------------------------------------------
void criterion_2_planewaves() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> mdist(0.1, 5.0);
  std::uniform_real_distribution<double> kdist(0.05, 8.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double m = mdist(rng);
    const double k = kdist(rng);
    const double k0 = std::sqrt(k * k + m * m);
    const Kinematics kin{m, k0, cd(k, 0.0), 0.0};
    const Direction dir = (i % 2) ? Direction::MinusX : Direction::PlusX;
    for (const PlaneWave& w :
         {spin0_planewave(cd(0.4, 0.9), kin, dir),
          spin1_massive_planewave(cd(1.0, -0.3), kin, dir)}) {
      worst = std::max(worst, residual_first_order(w));
      const auto sec = residual_secondary(w);
      worst = std::max({worst, sec.gradient_identity, sec.constraint,
                        sec.mass_shell});
    }
    const PlaneWave ph = photon_planewave(1.0, k, k, 0.0, WaveKind::Incident);
    worst = std::max(worst, residual_first_order(ph));
    const auto sec = residual_secondary(ph);
    worst = std::max(
        {worst, sec.gradient_identity, sec.constraint, sec.mass_shell});
  }
  const double dt = seconds_since(t0);
  const bool pass = worst <= 1e-12 && dt < 1.0;
  std::ostringstream os;
  os << "worst residual " << worst << " over 100 random (m, k0), " << dt << " s";
  report(2, "plane waves satisfy the first-order system and its identities",
         pass, os.str());
}

// --------------------------------------------------------------------------
void criterion_3_spin1() {
  bool pass = true;
  std::ostringstream os;
  const double targets[3][2] = {{1.0, 0.0}, {4.0, 1.0 / 9.0}, {100.0, 81.0 / 121.0}};
  for (const auto& [eps, want] : targets) {
    StepProblem p;
    p.particle = Particle::Spin1Massive;
    p.k0 = 1.0;
    p.mass = 1.0;
    p.barrier = Barrier::epsilon(eps);
    const ScatterSolution s = solve_spin1_massive(p);  // matching + flux checked
    const PlaneWave inc =
        spin1_planewave(1.0, 1.0, 1.0, Direction::PlusX, WaveKind::Incident);
    const PlaneWave ref = spin1_planewave(1.0, 1.0, 1.0, Direction::PlusX,
                                          WaveKind::Reflected, s.b_over_a);
    const double r_flux = (eps == 0.0 && s.R == 0.0)
                              ? 0.0
                              : flux_ratio(ref, inc, CurrentKind::SCurrent);
    if (std::abs(s.R - want) > 1e-12 || std::abs(r_flux - want) > 1e-12)
      pass = false;
  }
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double eps = std::pow(10.0, -6.0 + 12.0 * u(rng));  // (0, 1e6]
    StepProblem p;
    p.particle = Particle::Spin1Massive;
    p.k0 = 1.0;
    p.mass = 1.0;
    p.barrier = Barrier::epsilon(std::min(eps, 1e6));
    const ScatterSolution s = solve_spin1_massive(p);
    if (!(s.R < 1.0)) {
      pass = false;
      break;
    }
  }
  os << "R(eps = 1, 4, 100) = 0, 1/9, (9/11)^2 at 1e-12; R < 1 on 1e4 draws";
  report(3, "vector boson step from matching plus S-current flux", pass, os.str());
}

// --------------------------------------------------------------------------
void criterion_4_spin0() {
  bool pass = true;
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double r = std::pow(10.0, -3.0 + 6.0 * u(rng));
    StepProblem p;
    p.particle = Particle::Spin0Massive;
    p.k0 = std::sqrt(2.0);
    p.mass = 1.0;
    p.barrier = Barrier::ratio(cd(r, 0.0));
    const ScatterSolution s = solve_spin0(p);
    const cd want = (1.0 - r) / (1.0 + r);
    if (std::abs(s.b_over_a - want) > 1e-12) pass = false;
    if (std::abs(r - 1.0) > 1e-12 && !(s.R < 1.0)) pass = false;
    if (std::abs(s.R + s.T - 1.0) > 1e-12) pass = false;
  }
  for (int i = 0; i < 200; ++i) {
    const double x = std::pow(10.0, -2.0 + 4.0 * u(rng));
    StepProblem p;
    p.particle = Particle::Spin0Massive;
    p.k0 = std::sqrt(2.0);
    p.mass = 1.0;
    p.barrier = Barrier::ratio(cd(0.0, x));
    const ScatterSolution s = solve_spin0(p);
    if (s.R != 1.0) pass = false;
    if (std::abs(std::abs(s.b_over_a) - 1.0) > 1e-13) pass = false;
  }
  report(4, "scalar step: B/A = (1-r)/(1+r), R < 1, |B/A| = 1 when evanescent",
         pass, "1e4 random ratios plus 200 imaginary ones");
}

// --------------------------------------------------------------------------
void criterion_5_photon() {
  bool pass = true;
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double n = 1e-3 + (100.0 - 1e-3) * u(rng);
    StepProblem p;
    p.particle = Particle::Photon;
    p.k0 = 1.0;
    p.barrier = Barrier::ratio(cd(n, 0.0));
    const ScatterSolution s = solve_photon(p);
    worst = std::max(worst, std::abs(s.R - fresnel_normal_incidence(n)));
    const PlaneWave inc = photon_planewave(1.0, 1.0, 1.0, 0.0, WaveKind::Incident);
    const PlaneWave ref =
        photon_planewave(1.0, 1.0, 1.0, 0.0, WaveKind::Reflected, s.b_over_a.real());
    worst = std::max(worst,
                     std::abs(flux_ratio(ref, inc, CurrentKind::Poynting) - s.R));
  }
  pass = worst <= 1e-12;
  std::ostringstream os;
  os << "max deviation " << worst << " over 1e3 indices";
  report(5, "photon step equals Fresnel; Poynting ratio agrees", pass, os.str());
}

// --------------------------------------------------------------------------
void criterion_6_contrast() {
  bool pass = true;
  std::ostringstream os;

  StepProblem dirac;
  dirac.particle = Particle::DiracContrast;
  dirac.k0 = 2.5;
  dirac.mass = 1.0;
  dirac.barrier = Barrier::potential(10.0);
  dirac.branch = Branch::Positive;
  const ScatterSolution sd = solve_dirac_contrast(dirac);
  if (!(sd.R > 1.0)) pass = false;
  if (std::abs(sd.R + sd.T - 1.0) > 1e-12) pass = false;

  StepProblem kg;
  kg.particle = Particle::KGContrast;
  kg.k0 = 1.5;
  kg.mass = 1.0;
  kg.barrier = Barrier::potential(3.5);
  kg.branch = Branch::Negative;  // positive group velocity in the Klein zone
  const ScatterSolution sk = solve_kg_contrast(kg);
  if (!(sk.R_j && *sk.R_j > 1.0)) pass = false;

  // density samples of the full Klein-zone solution stay non-negative
  const double k = std::sqrt(kg.k0 * kg.k0 - 1.0);
  const cd kp = dispersion(1.0, kg.k0, 3.5, Branch::Negative);
  const Kinematics kin1{1.0, kg.k0, cd(k, 0.0), 0.0};
  const Kinematics kin2{1.0, kg.k0, -kp, 3.5};  // builder handles the sign
  const PlaneWave inc = spin0_planewave(1.0, kin1, Direction::PlusX);
  const PlaneWave ref = spin0_planewave(sk.b_over_a, kin1, Direction::MinusX);
  const PlaneWave tra = spin0_planewave(sk.c_over_a, kin2, Direction::MinusX);
  const BetaSet& b5 = representation(Rep::Spin0);
  double min_s0 = 1e300;
  for (int i = 0; i <= 2000; ++i) {
    const double x = -20.0 + 40.0 * i / 2000.0;
    Vec psi(5);
    if (x < 0.0) {
      psi = inc.amplitude * std::exp(cd(0.0, inc.kx.real() * x)) +
            ref.amplitude * std::exp(cd(0.0, ref.kx.real() * x));
    } else {
      psi = tra.amplitude * std::exp(cd(0.0, tra.kx.real() * x));
    }
    min_s0 = std::min(min_s0, current_S(psi, b5).first);
  }
  if (min_s0 < 0.0) pass = false;

  os << "Dirac R = " << sd.R << " with R+T-1 = " << sd.R + sd.T - 1.0
     << "; KG R_j = " << *sk.R_j << ", min sampled S0 = " << min_s0;
  report(6, "Klein paradox appears for Dirac and the KG charge current", pass,
         os.str());
}

// --------------------------------------------------------------------------
void criterion_7_numerical_oracle() {
  bool pass = true;
  std::ostringstream os;
  const auto t0 = std::chrono::steady_clock::now();

  Grid1D g;
  g.n = 8192;
  g.dx = 600.0 / 8192.0;
  g.x_min = -350.0;
  g.dt = 0.9 * g.dx;
  PacketSpec p;
  p.x_center = -80.0;
  p.sigma = 12.5;  // sigma * k = 15
  p.k_center = 1.2;

  const FieldState st = init_packet(g, p, FieldKind::Spin0KG, 1.0);

  StepProblem sp;
  sp.particle = Particle::Spin0Massive;
  sp.mass = 1.0;
  sp.k0 = std::sqrt(1.2 * 1.2 + 1.0);

  {
    const PotentialProfile pot{0.3, 0.0, 0.0};
    const Trajectory traj = evolve_spin0(st, g, pot, 1.0, 330.0);
    const auto [R, T] = measure_RT(traj, 0.0);
    sp.barrier = Barrier::potential(0.3);
    const double R_exact = solve_spin0(sp).R;
    if (std::abs(R - R_exact) > 0.01) pass = false;
    os << "transmitting |R_num - R| = " << std::abs(R - R_exact);
  }
  {
    const PotentialProfile pot{1.0, 0.0, 0.0};
    const Trajectory traj = evolve_spin0(st, g, pot, 1.0, 300.0);
    const auto [R, T] = measure_RT(traj, 0.0);
    if (std::abs(R - 1.0) > 0.01) pass = false;
    os << "; evanescent |R_num - 1| = " << std::abs(R - 1.0);
  }
  const double t_spin0 = seconds_since(t0);
  if (t_spin0 > 120.0) pass = false;  // two runs, < 60 s each

  const auto t1 = std::chrono::steady_clock::now();
  {
    Grid1D gp;
    gp.n = 8192;
    gp.dx = 700.0 / 8192.0;
    gp.x_min = -400.0;
    gp.dt = gp.dx / 1.5;
    PacketSpec pp;
    pp.x_center = -100.0;
    pp.sigma = 15.0;
    pp.k_center = 1.0;
    const FieldState stp = init_packet(gp, pp, FieldKind::PhotonFDTD, 0.0);
    const IndexProfile glass{1.5, 0.0, 0.0};
    const Trajectory traj = evolve_photon(stp, gp, glass, 330.0);
    const auto [R, T] = measure_RT(traj, 0.0);
    if (std::abs(R - 0.04) > 0.005) pass = false;
    os << "; photon |R_num - 0.04| = " << std::abs(R - 0.04);
  }
  const double t_photon = seconds_since(t1);
  if (t_photon > 60.0) pass = false;
  os << "; runtimes " << t_spin0 << " s + " << t_photon << " s";
  report(7, "wave packets reproduce the closed-form reflection", pass, os.str());
}

// --------------------------------------------------------------------------
void criterion_8_conservation() {
  bool pass = true;
  std::ostringstream os;
  {
    Grid1D g;
    g.n = 512;
    g.dx = 0.35;
    g.x_min = -89.6;
    g.dt = 0.3;
    PacketSpec p;
    p.x_center = 0.0;
    p.sigma = 10.0;
    p.k_center = 1.0;
    const FieldState st = init_packet(g, p, FieldKind::DKPFree, 1.0);
    EvolveOptions opts;
    opts.snap_every = 2000;
    const Trajectory traj = evolve_dkp_free(st, g, 1.0, 3000.0, opts);  // 1e4 steps
    const double drift = std::abs(traj.final_s0 / traj.reference_s0 - 1.0);
    if (drift > 1e-8) pass = false;
    os << "S0 drift over 1e4 steps = " << drift;
  }
  {
    auto run = [](int n, double dx, double dt, int cadence) {
      Grid1D g;
      g.n = n;
      g.dx = dx;
      g.x_min = -0.5 * n * dx;
      g.dt = dt;
      PacketSpec p;
      p.x_center = 0.0;
      p.sigma = 10.0;
      p.k_center = 1.0;
      const FieldState st = init_packet(g, p, FieldKind::DKPFree, 1.0);
      EvolveOptions opts;
      opts.snap_every = cadence;
      return continuity_residual(evolve_dkp_free(st, g, 1.0, 12.0, opts));
    };
    const double coarse = run(1024, 0.25, 0.2, 5);
    const double fine = run(2048, 0.125, 0.1, 5);
    const double ratio = coarse / fine;
    if (!(ratio >= 3.5 && ratio <= 4.5)) pass = false;
    os << "; continuity refinement ratio = " << ratio;
  }
  report(8, "free spinor evolution conserves S0; continuity is second order",
         pass, os.str());
}

// --------------------------------------------------------------------------
void criterion_9_densities() {
  bool pass = true;
  const BetaSet& b = representation(Rep::Spin0);
  // frozen witness with negative charge density
  Vec witness = Vec::Zero(5);
  witness(3) = cd(0.0, 1.0);
  witness(4) = cd(1.0, 0.0);
  const double j0 = current_j(witness, b)[0];
  if (!(j0 < 0.0)) pass = false;

  std::mt19937 rng(41);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double min_s0 = 1e300;
  for (int i = 0; i < 1000000; ++i) {
    const Rep rep = (i % 2) ? Rep::Spin1 : Rep::Spin0;
    const int dim = rep_dim(rep);
    Vec psi(dim);
    for (int c = 0; c < dim; ++c) psi(c) = cd(gauss(rng), gauss(rng));
    const double s0 = psi.squaredNorm();  // S0 = psi^dag psi by definition
    min_s0 = std::min(min_s0, s0);
    if (s0 < 0.0) pass = false;
  }
  std::ostringstream os;
  os << "witness j0 = " << j0 << "; min S0 over 1e6 spinors = " << min_s0;
  report(9, "j0 can be negative while S0 never is", pass, os.str());
}

// --------------------------------------------------------------------------
void criterion_10_determinism() {
  bool pass = true;
  const fs::path root =
      fs::temp_directory_path() / "dkpscat-acceptance-determinism";
  fs::remove_all(root);
  fs::create_directories(root);

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };

  ParamMap scatter_map{{"particle", "spin1"}, {"eps", "4"}, {"k0", "1"},
                       {"mass", "1"}};
  const RunResult a = run_and_persist("scatter", scatter_map, root);
  const RunResult b = run_and_persist("scatter", scatter_map, root);
  if (slurp(a.dir / "summary.json") != slurp(b.dir / "summary.json")) pass = false;

  ParamMap sweep_map{{"particle", "photon"}, {"k0", "1"},   {"param", "ratio"},
                     {"from", "0.5"},        {"to", "4"},   {"steps", "64"}};
  const RunResult c = run_and_persist("sweep", sweep_map, root);
  const RunResult d = run_and_persist("sweep", sweep_map, root);
  if (slurp(c.dir / "sweep.csv") != slurp(d.dir / "sweep.csv")) pass = false;

  ParamMap evolve_map{{"particle", "spin0"},   {"grid.xmin", "-160"},
                      {"grid.dx", "0.125"},    {"grid.n", "2048"},
                      {"grid.dt", "0.1"},      {"packet.x0", "-55"},
                      {"packet.sigma", "10"},  {"packet.k", "1.2"},
                      {"potential.V0", "0.3"}, {"potential.x_step", "0"},
                      {"potential.width", "0"}, {"run.t_final", "140"},
                      {"run.snap_every", "400"}};
  const RunResult e = run_and_persist("evolve", evolve_map, root);
  const RunResult f = run_and_persist("evolve", evolve_map, root);
  if (e.manifest.status_code != 0 || f.manifest.status_code != 0) pass = false;
  if (slurp(e.dir / "snapshots.csv") != slurp(f.dir / "snapshots.csv")) pass = false;
  if (slurp(e.dir / "summary.json") != slurp(f.dir / "summary.json")) pass = false;

  report(10, "identical runs produce byte-identical CSV/JSON", pass,
         "scatter, sweep and evolve replayed");
}

}  // namespace

int main() {
  criterion_1_algebra();
  criterion_2_planewaves();
  criterion_3_spin1();
  criterion_4_spin0();
  criterion_5_photon();
  criterion_6_contrast();
  criterion_7_numerical_oracle();
  criterion_8_conservation();
  criterion_9_densities();
  criterion_10_determinism();
  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
