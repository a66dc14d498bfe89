#include "dkp/runio.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dkp/currents.hpp"
#include "dkp/evolve.hpp"

namespace dkp {

namespace fs = std::filesystem;

//==============================================================================
// small format helpers
//==============================================================================

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError("value of '" + key + "' is not a number: " + value);
  }
}

int to_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError("value of '" + key + "' is not an integer: " + value);
  }
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

ParamMap parse_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path.string());
  ParamMap map;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) +
                       " is not key = value: " + t);
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (key.empty()) throw UsageError("empty key in config line " + std::to_string(lineno));
    map[key] = val;
  }
  return map;
}

void validate_keys(const ParamMap& map, const std::set<std::string>& allowed,
                   const std::string& context) {
  for (const auto& [k, v] : map)
    if (!allowed.count(k))
      throw UsageError("unknown key '" + k + "' in " + context);
}

//==============================================================================
// JSON writer
//==============================================================================

std::string JsonObject::escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

JsonObject& JsonObject::field(const std::string& key, const std::string& str) {
  items_.emplace_back(key, "\"" + escape(str) + "\"");
  return *this;
}
JsonObject& JsonObject::field(const std::string& key, double v) {
  items_.emplace_back(key, format_double(v));
  return *this;
}
JsonObject& JsonObject::field(const std::string& key, int v) {
  items_.emplace_back(key, std::to_string(v));
  return *this;
}
JsonObject& JsonObject::field_raw(const std::string& key, const std::string& raw) {
  items_.emplace_back(key, raw);
  return *this;
}
JsonObject& JsonObject::field_null(const std::string& key) {
  items_.emplace_back(key, "null");
  return *this;
}
std::string JsonObject::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (i) out += ",";
    out += "\"" + escape(items_[i].first) + "\":" + items_[i].second;
  }
  out += "}";
  return out;
}
std::string JsonObject::array(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_double(v[i]);
  }
  out += "]";
  return out;
}

//==============================================================================
// resolved-map -> problem objects
//==============================================================================

namespace {

Particle parse_particle(const std::string& s) {
  if (s == "spin0") return Particle::Spin0Massive;
  if (s == "spin1") return Particle::Spin1Massive;
  if (s == "photon") return Particle::Photon;
  if (s == "dirac") return Particle::DiracContrast;
  if (s == "kg") return Particle::KGContrast;
  throw UsageError("unknown particle: " + s);
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::Transmitting: return "transmitting";
    case Regime::Evanescent: return "evanescent";
    case Regime::KleinZone: return "klein_zone";
  }
  return "?";
}

std::string current_name(CurrentKind c) {
  switch (c) {
    case CurrentKind::SCurrent: return "S";
    case CurrentKind::JCurrent: return "j";
    case CurrentKind::Poynting: return "poynting";
  }
  return "?";
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::string now_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << content;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw MissingOutput("missing file: " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

const std::set<std::string>& scatter_keys() {
  static const std::set<std::string> keys{"particle", "k0",     "mass",  "V",
                                          "eps",      "ratio",  "branch", "current"};
  return keys;
}

const std::set<std::string>& evolve_keys() {
  static const std::set<std::string> keys{
      "particle",       "grid.xmin",      "grid.dx",        "grid.n",
      "grid.dt",        "packet.x0",      "packet.sigma",   "packet.k",
      "potential.V0",   "potential.x_step", "potential.width", "run.t_final",
      "run.snap_every"};
  return keys;
}

StepProblem step_problem_from(const ParamMap& map) {
  StepProblem p;
  auto get = [&](const char* k) -> const std::string* {
    auto it = map.find(k);
    return it == map.end() ? nullptr : &it->second;
  };
  const std::string* particle = get("particle");
  if (!particle) throw UsageError("missing key 'particle'");
  p.particle = parse_particle(*particle);
  if (const auto* v = get("k0")) p.k0 = to_double("k0", *v);
  if (const auto* v = get("mass")) p.mass = to_double("mass", *v);

  int nbarrier = 0;
  if (const auto* v = get("V")) {
    p.barrier = Barrier::potential(to_double("V", *v));
    ++nbarrier;
  }
  if (const auto* v = get("eps")) {
    p.barrier = Barrier::epsilon(to_double("eps", *v));
    ++nbarrier;
  }
  if (const auto* v = get("ratio")) {
    p.barrier = Barrier::ratio(cd(to_double("ratio", *v), 0.0));
    ++nbarrier;
  }
  if (nbarrier != 1)
    throw UsageError("exactly one of V, eps, ratio must be given");

  if (const auto* v = get("branch")) {
    if (*v == "pos") p.branch = Branch::Positive;
    else if (*v == "neg") p.branch = Branch::Negative;
    else throw UsageError("branch must be pos or neg");
  }
  return p;
}

std::string scatter_result_json(const ScatterSolution& s) {
  JsonObject o;
  o.field("BoverA_re", s.b_over_a.real())
      .field("BoverA_im", s.b_over_a.imag())
      .field("CoverA_re", s.c_over_a.real())
      .field("CoverA_im", s.c_over_a.imag())
      .field("R", s.R)
      .field("T", s.T)
      .field("regime", regime_name(s.regime))
      .field("current", current_name(s.current_used));
  if (s.R_j) o.field("R_j", *s.R_j);
  if (s.R_S) o.field("R_S", *s.R_S);
  return o.str() + "\n";
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "param,BoverA_re,BoverA_im,R,T,regime\n";
  for (const auto& row : rows) {
    os << format_double(row.value) << ",";
    if (row.sol) {
      os << format_double(row.sol->b_over_a.real()) << ","
         << format_double(row.sol->b_over_a.imag()) << ","
         << format_double(row.sol->R) << "," << format_double(row.sol->T) << ","
         << regime_name(row.sol->regime);
    } else {
      os << "nan,nan,nan,nan," << csv_quote("error(" + row.error + ")");
    }
    os << "\n";
  }
  return os.str();
}

//==============================================================================
// representation dump and algebra report
//==============================================================================

namespace {

std::string fmt_complex_cell(cd z) {
  std::ostringstream os;
  os << format_double(z.real()) << (z.imag() < 0.0 ? "-" : "+")
     << format_double(std::abs(z.imag())) << "i";
  return os.str();
}

void dump_matrix(std::ostream& os, const std::string& name, const Mat& m) {
  os << "# matrix: " << name << " (" << m.rows() << "x" << m.cols() << ")\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) os << " ";
      os << fmt_complex_cell(m(r, c));
    }
    os << "\n";
  }
}

}  // namespace

std::string dump_representation(Rep rep) {
  const BetaSet& b = representation(rep);
  const DerivedMatrices& d = derived(rep);
  std::ostringstream os;
  os << "# representation: " << (rep == Rep::Spin0 ? "spin0" : "spin1") << " ("
     << b.dim() << "x" << b.dim() << ")\n";
  os << "# layout:";
  for (const auto& l : b.labels()) os << " " << l;
  os << "\n";
  for (int mu = 0; mu < 4; ++mu)
    dump_matrix(os, "beta" + std::to_string(mu), b[mu]);
  dump_matrix(os, "eta0", d.eta0);
  for (int i = 0; i < 3; ++i)
    dump_matrix(os, "beta_tilde" + std::to_string(i + 1), d.beta_tilde[i]);
  if (d.gamma) dump_matrix(os, "gamma", *d.gamma);
  return os.str();
}

std::string algebra_report_json() {
  JsonObject o;
  for (Rep rep : {Rep::Spin0, Rep::Spin1}) {
    const std::string tag = rep == Rep::Spin0 ? "spin0" : "spin1";
    const BetaSet& b = representation(rep);
    const auto herm = check_hermiticity(b);
    double herm_worst = 0.0;
    for (double r : herm.residual) herm_worst = std::max(herm_worst, r);
    o.field(tag + ".trilinear_residual", trilinear_residual(b));
    o.field(tag + ".hermiticity_residual", herm_worst);
    bool derived_ok = true;
    try {
      (void)build_derived(b);
    } catch (const AlgebraViolation&) {
      derived_ok = false;
    }
    o.field(tag + ".derived_identities", derived_ok ? "pass" : "fail");
  }
  return o.str() + "\n";
}

bool algebra_ok() {
  for (Rep rep : {Rep::Spin0, Rep::Spin1}) {
    const BetaSet& b = representation(rep);
    if (trilinear_residual(b) > kAlgebraTol) return false;
    if (!check_hermiticity(b).all_ok()) return false;
    try {
      (void)build_derived(b);
    } catch (const AlgebraViolation&) {
      return false;
    }
  }
  return true;
}

//==============================================================================
// evolve runs
//==============================================================================

namespace {

struct EvolveOutputs {
  std::string snapshots_csv;
  std::string summary_json;
};

std::vector<std::string> component_names(FieldKind kind, Rep rep) {
  switch (kind) {
    case FieldKind::Spin0KG: return {"phi", "dphi_dt"};
    case FieldKind::PhotonFDTD: return {"Ez", "Hy"};
    case FieldKind::DKPFree: {
      std::vector<std::string> n;
      for (int c = 0; c < rep_dim(rep); ++c) n.push_back("psi" + std::to_string(c));
      return n;
    }
  }
  return {};
}

EvolveOutputs run_evolve(const ParamMap& map) {
  validate_keys(map, evolve_keys(), "evolve configuration");
  auto need = [&](const char* k) -> const std::string& {
    auto it = map.find(k);
    if (it == map.end()) throw UsageError(std::string("missing key '") + k + "'");
    return it->second;
  };

  Grid1D grid;
  grid.x_min = to_double("grid.xmin", need("grid.xmin"));
  grid.dx = to_double("grid.dx", need("grid.dx"));
  grid.n = to_int("grid.n", need("grid.n"));
  grid.dt = to_double("grid.dt", need("grid.dt"));

  PacketSpec packet;
  packet.x_center = to_double("packet.x0", need("packet.x0"));
  packet.sigma = to_double("packet.sigma", need("packet.sigma"));
  packet.k_center = to_double("packet.k", need("packet.k"));

  PotentialProfile pot;
  pot.V0 = to_double("potential.V0", need("potential.V0"));
  pot.x_step = to_double("potential.x_step", need("potential.x_step"));
  pot.width = to_double("potential.width", need("potential.width"));

  const double t_final = to_double("run.t_final", need("run.t_final"));
  const int snap_every = to_int("run.snap_every", need("run.snap_every"));

  const std::string particle = need("particle");
  const double mass = 1.0;  // natural units for the command line runs

  EvolveOptions opts;
  opts.snap_every = snap_every;

  Trajectory traj;
  double R_analytic = -1.0;
  if (particle == "spin0") {
    FieldState st = init_packet(grid, packet, FieldKind::Spin0KG, mass);
    traj = evolve_spin0(st, grid, pot, mass, t_final, opts);
    if (!pot.trivial()) {
      StepProblem p;
      p.particle = Particle::Spin0Massive;
      p.mass = mass;
      p.k0 = std::sqrt(packet.k_center * packet.k_center + mass * mass);
      p.barrier = Barrier::potential(pot.V0);
      R_analytic = solve_spin0(p).R;
    }
  } else if (particle == "photon") {
    // for photon runs potential.V0 carries the far-side refractive index
    if (pot.V0 < 0.0) throw UsageError("photon runs need potential.V0 = n2 >= 0");
    IndexProfile index{pot.V0 > 0.0 ? pot.V0 : 1.0, pot.x_step, pot.width};
    FieldState st = init_packet(grid, packet, FieldKind::PhotonFDTD, 0.0);
    traj = evolve_photon(st, grid, index, t_final, opts);
    if (!index.trivial()) {
      StepProblem p;
      p.particle = Particle::Photon;
      p.k0 = std::abs(packet.k_center);
      p.barrier = Barrier::ratio(cd(index.n2, 0.0));
      R_analytic = solve_photon(p).R;
    }
  } else if (particle == "dkp-free") {
    if (pot.V0 != 0.0)
      throw UsageError("dkp-free runs are free evolution; potential.V0 must be 0");
    FieldState st = init_packet(grid, packet, FieldKind::DKPFree, mass, Rep::Spin0);
    traj = evolve_dkp_free(st, grid, mass, t_final, opts);
  } else {
    throw UsageError("evolve particle must be spin0, photon or dkp-free");
  }

  // R/T when the run scatters; free runs report the split at the step anyway
  double R_num = 0.0, T_num = 0.0;
  bool separated = true;
  try {
    auto [r, t] = measure_RT(traj, pot.x_step);
    R_num = r;
    T_num = t;
  } catch (const NotSeparated&) {
    separated = false;
    if (!traj.potential.trivial() || !traj.index.trivial()) throw;
  }

  double cont = -1.0;
  if (traj.kind == FieldKind::DKPFree ||
      (traj.kind == FieldKind::Spin0KG && traj.potential.trivial())) {
    if (traj.snaps.size() >= 3) cont = continuity_residual(traj);
  }

  // snapshots.csv
  std::ostringstream csv;
  const auto names = component_names(traj.kind, traj.rep);
  csv << "t,x";
  for (const auto& n : names) csv << "," << n << "_re," << n << "_im";
  csv << ",S0,Sx\n";
  for (const auto& snap : traj.snaps) {
    const auto s0 = density_S0(traj, snap);
    const auto sx = measure_flux(traj, snap);
    for (int j = 0; j < grid.n; ++j) {
      csv << format_double(snap.t) << "," << format_double(grid.x(j));
      for (const auto& c : snap.comp)
        csv << "," << format_double(c(j).real()) << ","
            << format_double(c(j).imag());
      csv << "," << format_double(s0[j]) << "," << format_double(sx[j]) << "\n";
    }
  }

  JsonObject o;
  o.field("R_num", R_num).field("T_num", T_num);
  o.field("norm_drift", std::abs(traj.final_norm / traj.reference_norm - 1.0));
  o.field("cfl", grid.dt / grid.dx);
  o.field("scheme", particle == "spin0"
                        ? "leapfrog"
                        : (particle == "photon" ? "staggered-leapfrog"
                                                : "cayley-midpoint"));
  if (cont >= 0.0)
    o.field("continuity_residual", cont);
  else
    o.field_null("continuity_residual");
  if (R_analytic >= 0.0) {
    o.field("R_analytic", R_analytic);
    o.field("abs_error", std::abs(R_num - R_analytic));
  }
  o.field("separated", separated ? "true" : "false");
  o.field("max_eq1_residual", traj.max_eq1_residual);
  o.field("max_constraint_residual", traj.max_constraint_residual);

  return EvolveOutputs{csv.str(), o.str() + "\n"};
}

std::string run_currents(const ParamMap& map) {
  static const std::set<std::string> keys{"particle", "k0", "mass", "A",
                                          "direction", "eps"};
  validate_keys(map, keys, "currents parameters");
  const std::string particle = map.count("particle") ? map.at("particle") : "spin0";
  const double k0 = map.count("k0") ? to_double("k0", map.at("k0")) : std::sqrt(2.0);
  const double mass = map.count("mass") ? to_double("mass", map.at("mass")) : 1.0;
  const double A = map.count("A") ? to_double("A", map.at("A")) : 1.0;
  const Direction dir = (map.count("direction") && map.at("direction") == "-x")
                            ? Direction::MinusX
                            : Direction::PlusX;

  PlaneWave w;
  if (particle == "spin0") {
    const cd k = dispersion(mass, k0, 0.0);
    w = spin0_planewave(A, Kinematics{mass, k0, k, 0.0}, dir);
  } else if (particle == "spin1") {
    const cd k = dispersion(mass, k0, 0.0);
    w = spin1_massive_planewave(A, Kinematics{mass, k0, k, 0.0}, dir);
  } else if (particle == "photon") {
    w = photon_planewave(A, k0, k0, 0.0, WaveKind::Incident);
  } else {
    throw UsageError("currents particle must be spin0, spin1 or photon");
  }

  const BetaSet& b = representation(w.rep);
  const CurrentSample c = currents(w.amplitude, b);
  JsonObject o;
  o.field_raw("j", JsonObject::array({c.j[0], c.j[1], c.j[2], c.j[3]}))
      .field("S0", c.S0)
      .field_raw("S", JsonObject::array({c.S[0], c.S[1], c.S[2]}));
  return o.str() + "\n";
}

}  // namespace

//==============================================================================
// manifest and orchestration
//==============================================================================

std::string RunManifest::to_json() const {
  JsonObject echo;
  for (const auto& [k, v] : config_echo) echo.field(k, v);
  std::string outs = "[";
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (i) outs += ",";
    JsonObject oo;
    oo.field("path", outputs[i].first).field("hash", outputs[i].second);
    outs += oo.str();
  }
  outs += "]";
  JsonObject status;
  status.field("code", status_code).field("message", status_message);

  JsonObject o;
  o.field("command", command)
      .field_raw("config_echo", echo.str())
      .field("artifact_version", artifact_version)
      .field("started", started)
      .field("finished", finished)
      .field_raw("outputs", outs)
      .field_raw("status", status.str());
  return o.str() + "\n";
}

RunResult run_and_persist(const std::string& command, const ParamMap& resolved,
                          const fs::path& runs_root) {
  RunManifest man;
  man.command = command;
  man.config_echo = resolved;
  man.artifact_version = "0.1.0";
  man.started = now_utc();

  std::string echo;
  for (const auto& [k, v] : resolved) echo += k + "=" + v + "\n";
  const std::string short_hash = fnv1a_hex(command + "\n" + echo).substr(0, 8);

  fs::path dir = runs_root / (man.started + "-" + short_hash);
  for (int suffix = 2; fs::exists(dir); ++suffix)
    dir = runs_root / (man.started + "-" + short_hash + "-" + std::to_string(suffix));
  fs::create_directories(dir);

  auto add_output = [&](const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    man.outputs.emplace_back(name, fnv1a_hex(content));
  };

  try {
    if (command == "scatter") {
      validate_keys(resolved, scatter_keys(), "scatter parameters");
      const StepProblem problem = step_problem_from(resolved);
      ScatterSolution s = solve(problem);
      if (resolved.count("current")) {
        const std::string& c = resolved.at("current");
        CurrentKind want;
        if (c == "S") want = CurrentKind::SCurrent;
        else if (c == "j") want = CurrentKind::JCurrent;
        else if (c == "poynting") want = CurrentKind::Poynting;
        else throw UsageError("current must be S, j or poynting");
        const bool boson = problem.particle == Particle::Spin0Massive ||
                           problem.particle == Particle::Spin1Massive ||
                           problem.particle == Particle::Photon;
        if (!boson && want != CurrentKind::JCurrent)
          throw UsageError("contrast solvers only carry the charge current");
        if (want == CurrentKind::Poynting && problem.particle != Particle::Photon)
          throw UsageError("the Poynting flux needs the photon channel");
        // the flux ratio is current-independent for these states; report the
        // requested bookkeeping
        if (boson) s.current_used = want;
      }
      add_output("summary.json", scatter_result_json(s));
    } else if (command == "sweep") {
      auto keys = scatter_keys();
      keys.insert({"param", "from", "to", "steps"});
      validate_keys(resolved, keys, "sweep parameters");
      auto need = [&](const char* k) -> const std::string& {
        auto it = resolved.find(k);
        if (it == resolved.end())
          throw UsageError(std::string("missing key '") + k + "'");
        return it->second;
      };
      ParamMap base = resolved;
      base.erase("param");
      base.erase("from");
      base.erase("to");
      base.erase("steps");
      const std::string param = need("param");
      // the swept parameter supplies the barrier (or kinematics); make the
      // template parseable by giving it a placeholder barrier when needed
      if (!base.count("V") && !base.count("eps") && !base.count("ratio"))
        base["ratio"] = "1";
      const StepProblem tmpl = step_problem_from(base);
      const auto rows = sweep(tmpl, param, to_double("from", need("from")),
                              to_double("to", need("to")),
                              to_int("steps", need("steps")));
      add_output("sweep.csv", sweep_csv(rows));
    } else if (command == "evolve") {
      const EvolveOutputs out = run_evolve(resolved);
      add_output("snapshots.csv", out.snapshots_csv);
      add_output("summary.json", out.summary_json);
    } else if (command == "currents") {
      add_output("currents.json", run_currents(resolved));
    } else if (command == "dump-rep") {
      validate_keys(resolved, {"rep"}, "dump-rep parameters");
      const std::string rep = resolved.count("rep") ? resolved.at("rep") : "spin0";
      if (rep != "spin0" && rep != "spin1")
        throw UsageError("rep must be spin0 or spin1");
      add_output("rep.txt",
                 dump_representation(rep == "spin0" ? Rep::Spin0 : Rep::Spin1));
    } else if (command == "verify-algebra") {
      add_output("algebra.json", algebra_report_json());
      if (!algebra_ok()) throw AlgebraViolation("algebra identities failed");
    } else {
      throw UsageError("unknown command: " + command);
    }
  } catch (const UsageError&) {
    throw;  // usage problems abort before a run is recorded
  } catch (const Error& e) {
    man.status_code = 1;
    man.status_message = e.what();
  }

  man.finished = now_utc();
  write_file(dir / "manifest.json", man.to_json());  // manifest last
  return RunResult{dir, man};
}

//==============================================================================
// plot data
//==============================================================================

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (quoted) {
      if (c == '"') quoted = false;
      else cur += c;
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void emit_plot_data(const fs::path& run_dir, const std::string& kind,
                    const fs::path& out_path) {
  std::ostringstream os;
  if (kind == "R_vs_param") {
    const std::string csv = read_file(run_dir / "sweep.csv");
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    os << "param,R\n";
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = split_csv_line(line);
      if (f.size() >= 4) os << f[0] << "," << f[3] << "\n";
    }
  } else if (kind == "flux_vs_time" || kind == "snapshot_heatline" ||
             kind == "x_mean_vs_time") {
    const std::string csv = read_file(run_dir / "snapshots.csv");
    const std::string manifest = read_file(run_dir / "manifest.json");
    // split position from the echoed configuration
    double x_split = 0.0;
    const std::string key = "\"potential.x_step\":\"";
    if (const auto pos = manifest.find(key); pos != std::string::npos) {
      const auto end = manifest.find('"', pos + key.size());
      x_split = std::stod(manifest.substr(pos + key.size(), end - pos - key.size()));
    }
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    const auto header = split_csv_line(line);
    int s0_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == "S0") s0_col = static_cast<int>(i);
    if (s0_col < 0) throw MissingOutput("snapshots.csv has no S0 column");

    if (kind == "flux_vs_time") {
      os << "t,S0_left,S0_right\n";
      std::string cur_t;
      double left = 0.0, right = 0.0;
      auto flush = [&]() {
        if (!cur_t.empty())
          os << cur_t << "," << format_double(left) << ","
             << format_double(right) << "\n";
      };
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f[0] != cur_t) {
          flush();
          cur_t = f[0];
          left = right = 0.0;
        }
        const double x = std::stod(f[1]);
        const double s0 = std::stod(f[s0_col]);
        (x < x_split ? left : right) += s0;
      }
      flush();
    } else if (kind == "x_mean_vs_time") {
      // exploratory: S0-weighted mean position per snapshot
      os << "t,x_mean\n";
      std::string cur_t;
      double wx = 0.0, w = 0.0;
      auto flush = [&]() {
        if (!cur_t.empty() && w > 0.0)
          os << cur_t << "," << format_double(wx / w) << "\n";
      };
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f[0] != cur_t) {
          flush();
          cur_t = f[0];
          wx = w = 0.0;
        }
        const double x = std::stod(f[1]);
        const double s0 = std::stod(f[s0_col]);
        wx += x * s0;
        w += s0;
      }
      flush();
    } else {
      // last time block: (x, S0)
      std::vector<std::pair<std::string, std::string>> block;
      std::string cur_t;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f[0] != cur_t) {
          cur_t = f[0];
          block.clear();
        }
        block.emplace_back(f[1], f[s0_col]);
      }
      os << "x,S0\n";
      for (const auto& [x, s0] : block) os << x << "," << s0 << "\n";
    }
  } else {
    throw UsageError("unknown plot kind: " + kind);
  }
  write_file(out_path, os.str());
}

}  // namespace dkp
