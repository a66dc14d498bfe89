#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dkp/currents.hpp"
#include "dkp/evolve.hpp"
#include "dkp/runio.hpp"
#include "dkp/scatter.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace dkp;

namespace {

Rep parse_rep(const std::string& s) {
  if (s == "spin0") return Rep::Spin0;
  if (s == "spin1") return Rep::Spin1;
  throw UsageError("rep must be spin0 or spin1");
}

StepProblem make_problem(const std::string& particle, double k0, double mass,
                         py::object V, py::object eps, py::object ratio,
                         const std::string& branch) {
  ParamMap map;
  map["particle"] = particle;
  map["k0"] = format_double(k0);
  map["mass"] = format_double(mass);
  if (!V.is_none()) map["V"] = format_double(V.cast<double>());
  if (!eps.is_none()) map["eps"] = format_double(eps.cast<double>());
  if (!ratio.is_none()) map["ratio"] = format_double(ratio.cast<double>());
  map["branch"] = branch;
  return step_problem_from(map);
}

py::dict solution_dict(const ScatterSolution& s) {
  py::dict d;
  d["BoverA"] = s.b_over_a;
  d["CoverA"] = s.c_over_a;
  d["R"] = s.R;
  d["T"] = s.T;
  d["regime"] = s.regime == Regime::Transmitting
                    ? "transmitting"
                    : (s.regime == Regime::Evanescent ? "evanescent" : "klein_zone");
  if (s.R_j) d["R_j"] = *s.R_j;
  if (s.R_S) d["R_S"] = *s.R_S;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Duffin-Kemmer-Petiau step scattering toolkit";

  py::register_exception<UsageError>(m, "UsageError");
  py::register_exception<Error>(m, "DkpError");

  m.def(
      "beta_matrices",
      [](const std::string& rep) {
        const BetaSet& b = representation(parse_rep(rep));
        return std::vector<Mat>{b[0], b[1], b[2], b[3]};
      },
      "rep"_a, "The four matrices of the chosen representation");
  m.def(
      "derived_matrices",
      [](const std::string& rep) {
        const DerivedMatrices& d = derived(parse_rep(rep));
        py::dict out;
        out["eta0"] = d.eta0;
        out["beta_tilde"] =
            std::vector<Mat>{d.beta_tilde[0], d.beta_tilde[1], d.beta_tilde[2]};
        if (d.gamma) out["gamma"] = *d.gamma;
        return out;
      },
      "rep"_a);
  m.def(
      "trilinear_residual",
      [](const std::string& rep) {
        return trilinear_residual(representation(parse_rep(rep)));
      },
      "rep"_a, "Worst violation of the trilinear relation over all 64 triples");

  py::enum_<Branch>(m, "Branch")
      .value("positive", Branch::Positive)
      .value("negative", Branch::Negative);
  py::enum_<Direction>(m, "Direction")
      .value("plus_x", Direction::PlusX)
      .value("minus_x", Direction::MinusX);

  m.def("dispersion", &dispersion, "mass"_a, "k0"_a, "V"_a = 0.0,
        "branch"_a = Branch::Positive);

  py::class_<Kinematics>(m, "Kinematics")
      .def(py::init([](double mass, double k0, cd k, double V) {
             return Kinematics{mass, k0, k, V};
           }),
           "mass"_a, "k0"_a, "k"_a, "V"_a = 0.0)
      .def_readonly("mass", &Kinematics::mass)
      .def_readonly("k0", &Kinematics::k0)
      .def_readonly("k", &Kinematics::k)
      .def_readonly("V", &Kinematics::V);

  py::class_<PlaneWave>(m, "PlaneWave")
      .def_readonly("amplitude", &PlaneWave::amplitude)
      .def_readonly("kt", &PlaneWave::kt)
      .def_readonly("kx", &PlaneWave::kx)
      .def_property_readonly("rep", [](const PlaneWave& w) {
        return w.rep == Rep::Spin0 ? "spin0" : "spin1";
      });

  m.def("spin0_planewave", &spin0_planewave, "a"_a, "kin"_a,
        "direction"_a = Direction::PlusX);
  m.def("spin1_massive_planewave", &spin1_massive_planewave, "a"_a, "kin"_a,
        "direction"_a = Direction::PlusX);
  m.def(
      "photon_planewave",
      [](double e0, double omega, double k, double phase, const std::string& kind,
         double factor) {
        const WaveKind wk = kind == "incident"
                                ? WaveKind::Incident
                                : (kind == "reflected" ? WaveKind::Reflected
                                                       : WaveKind::Transmitted);
        return photon_planewave(e0, omega, k, phase, wk, factor);
      },
      "e0"_a, "omega"_a, "k"_a, "phase"_a = 0.0, "kind"_a = "incident",
      "amplitude_factor"_a = 1.0);
  m.def("residual_first_order", &residual_first_order, "wave"_a);

  m.def(
      "currents",
      [](const Vec& psi, const std::string& rep) {
        const CurrentSample c = currents(psi, representation(parse_rep(rep)));
        py::dict d;
        d["j"] = std::vector<double>{c.j[0], c.j[1], c.j[2], c.j[3]};
        d["S0"] = c.S0;
        d["S"] = std::vector<double>{c.S[0], c.S[1], c.S[2]};
        return d;
      },
      "psi"_a, "rep"_a);
  m.def("poynting", &poynting, "Ez"_a, "Hy"_a);

  m.def(
      "solve_step",
      [](const std::string& particle, double k0, double mass, py::object V,
         py::object eps, py::object ratio, const std::string& branch) {
        return solution_dict(
            solve(make_problem(particle, k0, mass, V, eps, ratio, branch)));
      },
      "particle"_a, "k0"_a = 1.0, "mass"_a = 1.0, "V"_a = py::none(),
      "eps"_a = py::none(), "ratio"_a = py::none(), "branch"_a = "pos",
      "Closed-form step scattering for spin0|spin1|photon|dirac|kg");
  m.def("fresnel_normal_incidence", &fresnel_normal_incidence, "n"_a);

  m.def(
      "sweep",
      [](const std::string& particle, double k0, double mass,
         const std::string& param, double from, double to, int steps) {
        StepProblem tmpl;
        ParamMap map{{"particle", particle},
                     {"k0", format_double(k0)},
                     {"mass", format_double(mass)},
                     {"ratio", "1"}};
        tmpl = step_problem_from(map);
        py::list out;
        for (const SweepRow& row : sweep(tmpl, param, from, to, steps)) {
          py::dict d;
          d["value"] = row.value;
          if (row.sol) d["solution"] = solution_dict(*row.sol);
          else d["error"] = row.error;
          out.append(d);
        }
        return out;
      },
      "particle"_a, "k0"_a, "mass"_a, "param"_a, "from_"_a, "to"_a, "steps"_a);

  m.def(
      "evolve_packet",
      [](const std::string& particle, double x_min, double dx, int n, double dt,
         double x0, double sigma, double k, double V0, double x_step,
         double width, double t_final, int snap_every) {
        Grid1D g{x_min, dx, n, dt};
        PacketSpec p{x0, sigma, k, 1.0};
        EvolveOptions opts;
        opts.snap_every = snap_every;
        Trajectory traj;
        if (particle == "spin0") {
          const FieldState st = init_packet(g, p, FieldKind::Spin0KG, 1.0);
          traj = evolve_spin0(st, g, PotentialProfile{V0, x_step, width}, 1.0,
                              t_final, opts);
        } else if (particle == "photon") {
          const FieldState st = init_packet(g, p, FieldKind::PhotonFDTD, 0.0);
          traj = evolve_photon(st, g, IndexProfile{V0 > 0.0 ? V0 : 1.0, x_step, width},
                               t_final, opts);
        } else if (particle == "dkp-free") {
          const FieldState st = init_packet(g, p, FieldKind::DKPFree, 1.0);
          traj = evolve_dkp_free(st, g, 1.0, t_final, opts);
        } else {
          throw UsageError("particle must be spin0, photon or dkp-free");
        }
        const auto [R, T] = measure_RT(traj, x_step);
        py::dict d;
        d["R_num"] = R;
        d["T_num"] = T;
        d["norm_drift"] = std::abs(traj.final_norm / traj.reference_norm - 1.0);
        d["snapshots"] = static_cast<int>(traj.snaps.size());
        return d;
      },
      "particle"_a, "x_min"_a, "dx"_a, "n"_a, "dt"_a, "x0"_a, "sigma"_a, "k"_a,
      "V0"_a = 0.0, "x_step"_a = 0.0, "width"_a = 0.0, "t_final"_a = 10.0,
      "snap_every"_a = 0, "1D wave-packet step scattering; returns R/T fractions");

  m.attr("__version__") = "0.1.0";
}
