#include "dkp/algebra.hpp"

#include <sstream>

namespace dkp {

namespace {

const cd kI(0.0, 1.0);

Mat zeros(int n) { return Mat::Zero(n, n); }

// Levi-Civita symbol, 1-based indices.
int eps3(int i, int j, int k) {
  return (i - j) * (j - k) * (k - i) / 2;
}

BetaSet build_spin0() {
  std::array<Mat, 4> b{zeros(5), zeros(5), zeros(5), zeros(5)};
  // Slots (0-based): 0..2 spatial derivative, 3 time derivative, 4 scalar.
  b[0](3, 4) = -kI;
  b[0](4, 3) = kI;
  for (int i = 1; i <= 3; ++i) {
    b[i](i - 1, 4) = -1.0;
    b[i](4, i - 1) = 1.0;
  }
  return BetaSet{Rep::Spin0, std::move(b)};
}

BetaSet build_spin1() {
  std::array<Mat, 4> b{zeros(10), zeros(10), zeros(10), zeros(10)};
  auto E = [](int i) { return i - 1; };      // 1..3 -> slots 0..2
  auto H = [](int i) { return 2 + i; };      // 1..3 -> slots 3..5
  auto P = [](int i) { return 5 + i; };      // 1..3 -> slots 6..8
  const int P4 = 9;
  for (int i = 1; i <= 3; ++i) {
    b[0](E(i), P(i)) = -kI;
    b[0](P(i), E(i)) = kI;
  }
  for (int k = 1; k <= 3; ++k) {
    for (int i = 1; i <= 3; ++i) {
      for (int j = 1; j <= 3; ++j) {
        const int e = eps3(i, k, j);
        if (e == 0) continue;
        b[k](P(i), H(j)) = -kI * static_cast<double>(e);
        b[k](H(i), P(j)) = kI * static_cast<double>(e);
      }
    }
    b[k](E(k), P4) = -kI;
    b[k](P4, E(k)) = -kI;
  }
  return BetaSet{Rep::Spin1, std::move(b)};
}

}  // namespace

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<std::string> BetaSet::labels() const {
  if (rep == Rep::Spin0)
    return {"phi_1", "phi_2", "phi_3", "phi_0", "phi"};
  return {"E1", "E2", "E3", "H1", "H2", "H3", "p1", "p2", "p3", "p4"};
}

BetaSet build_representation(Rep kind) {
  return kind == Rep::Spin0 ? build_spin0() : build_spin1();
}

double trilinear_residual(const BetaSet& b) {
  double worst = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      for (int la = 0; la < 4; ++la) {
        const double g_nu_la = (nu == la) ? BetaSet::metric[nu] : 0.0;
        const double g_nu_mu = (nu == mu) ? BetaSet::metric[nu] : 0.0;
        Mat lhs = b[mu] * b[nu] * b[la] + b[la] * b[nu] * b[mu];
        Mat rhs = g_nu_la * b[mu] + g_nu_mu * b[la];
        worst = std::max(worst, max_abs(lhs - rhs));
      }
    }
  }
  return worst;
}

HermiticityReport check_hermiticity(const BetaSet& b, double tol) {
  HermiticityReport rep;
  rep.residual[0] = max_abs(b[0] - b[0].adjoint());
  for (int i = 1; i < 4; ++i)
    rep.residual[i] = max_abs(b[i] + b[i].adjoint());
  for (int mu = 0; mu < 4; ++mu) rep.ok[mu] = rep.residual[mu] <= tol;
  return rep;
}

DerivedMatrices build_derived(const BetaSet& b, double tol) {
  if (trilinear_residual(b) > tol)
    throw AlgebraViolation("trilinear residual exceeds tolerance");

  const int n = b.dim();
  const Mat id = Mat::Identity(n, n);
  DerivedMatrices d;
  d.eta0 = 2.0 * b[0] * b[0] - id;
  for (int i = 0; i < 3; ++i)
    d.beta_tilde[i] = b[0] * b[i + 1] - b[i + 1] * b[0];

  auto require = [&](double r, const char* what) {
    if (r > tol) {
      std::ostringstream os;
      os << "derived identity violated: " << what << " residual " << r;
      throw AlgebraViolation(os.str());
    }
  };

  require(max_abs(d.eta0 * d.eta0 - id), "eta0^2 = 1");
  require(max_abs(d.eta0 * b[0] - b[0]), "eta0*beta0 = beta0");
  require(max_abs(b[0] * d.eta0 - b[0]), "beta0*eta0 = beta0");
  for (int i = 1; i < 4; ++i)
    require(max_abs(d.eta0 * b[i] + b[i] * d.eta0), "eta0 anticommutes with beta_i");
  for (int i = 0; i < 3; ++i)
    require(max_abs(d.beta_tilde[i] - d.beta_tilde[i].adjoint()),
            "beta_tilde Hermitian");

  if (b.rep == Rep::Spin1) {
    Mat g = zeros(n);
    for (int i = 0; i < 6; ++i) g(i, i) = 1.0;  // field strength slots
    require(max_abs(g * g - g), "gamma idempotent");
    for (int mu = 0; mu < 4; ++mu)
      require(max_abs(g * b[mu] + b[mu] * g - b[mu]), "gamma*b + b*gamma = b");
    d.gamma = std::move(g);
  }
  return d;
}

const BetaSet& representation(Rep kind) {
  static const BetaSet s0 = build_representation(Rep::Spin0);
  static const BetaSet s1 = build_representation(Rep::Spin1);
  return kind == Rep::Spin0 ? s0 : s1;
}

const DerivedMatrices& derived(Rep kind) {
  static const DerivedMatrices d0 = build_derived(representation(Rep::Spin0));
  static const DerivedMatrices d1 = build_derived(representation(Rep::Spin1));
  return kind == Rep::Spin0 ? d0 : d1;
}

}  // namespace dkp
