#include <doctest.h>

#include "dkp/algebra.hpp"

using namespace dkp;

TEST_CASE("representation dimensions match the spin content") {
  CHECK(build_representation(Rep::Spin0).dim() == 5);
  CHECK(build_representation(Rep::Spin1).dim() == 10);
}

TEST_CASE("trilinear relation holds exhaustively for both representations") {
  CHECK(trilinear_residual(build_representation(Rep::Spin0)) <= 1e-13);
  CHECK(trilinear_residual(build_representation(Rep::Spin1)) <= 1e-13);
}

TEST_CASE("beta0 cubes to itself") {
  for (Rep rep : {Rep::Spin0, Rep::Spin1}) {
    const BetaSet& b = representation(rep);
    CHECK(max_abs(b[0] * b[0] * b[0] - b[0]) <= 1e-13);
  }
}

TEST_CASE("scaling one spatial matrix breaks the algebra badly") {
  BetaSet b = build_representation(Rep::Spin0);
  b.beta[1] *= 2.0;
  CHECK(trilinear_residual(b) > 0.5);
}

TEST_CASE("hermiticity convention: beta0 Hermitian, beta_i anti-Hermitian") {
  for (Rep rep : {Rep::Spin0, Rep::Spin1}) {
    const auto report = check_hermiticity(representation(rep));
    for (int mu = 0; mu < 4; ++mu) {
      CHECK(report.ok[mu]);
      CHECK(report.residual[mu] <= 1e-13);
    }
  }
}

TEST_CASE("the i-scaled convention of the older literature fails the check") {
  // beta_i -> i*beta_i turns anti-Hermitian into Hermitian
  BetaSet b = build_representation(Rep::Spin0);
  const double scale = max_abs(b.beta[2]);
  b.beta[2] *= cd(0.0, 1.0);
  const auto report = check_hermiticity(b);
  CHECK(report.ok[0]);
  CHECK(report.ok[1]);
  CHECK_FALSE(report.ok[2]);
  CHECK(report.ok[3]);
  CHECK(report.residual[2] == doctest::Approx(2.0 * scale).epsilon(1e-12));
}

TEST_CASE("derived matrices satisfy the adjoint-metric identities") {
  for (Rep rep : {Rep::Spin0, Rep::Spin1}) {
    const BetaSet& b = representation(rep);
    const DerivedMatrices d = build_derived(b);
    const Mat id = Mat::Identity(b.dim(), b.dim());
    CHECK(max_abs(d.eta0 * d.eta0 - id) <= 1e-13);
    CHECK(max_abs(d.eta0 * b[0] - b[0]) <= 1e-13);
    CHECK(max_abs(b[0] * d.eta0 - b[0]) <= 1e-13);
    for (int i = 1; i < 4; ++i)
      CHECK(max_abs(d.eta0 * b[i] + b[i] * d.eta0) <= 1e-13);
    for (int i = 0; i < 3; ++i)
      CHECK(max_abs(d.beta_tilde[i] - d.beta_tilde[i].adjoint()) <= 1e-13);
  }
}

TEST_CASE("scalar flux matrix couples the x-derivative and time slots") {
  // the Hermitian matrix displayed with the scalar flux has entries only at
  // (1,4) and (4,1) with unit magnitude; our orientation carries +i at (1,4)
  const DerivedMatrices& d = derived(Rep::Spin0);
  const Mat& t1 = d.beta_tilde[0];
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) {
      const bool coupled = (r == 0 && c == 3) || (r == 3 && c == 0);
      CHECK(std::abs(t1(r, c)) == doctest::Approx(coupled ? 1.0 : 0.0));
    }
  CHECK(t1(0, 3) == cd(0.0, 1.0));
  CHECK(t1(3, 0) == cd(0.0, -1.0));
}

TEST_CASE("massless projector: idempotent, rank 6, compatible with every beta") {
  const BetaSet& b = representation(Rep::Spin1);
  const DerivedMatrices& d = derived(Rep::Spin1);
  REQUIRE(d.gamma.has_value());
  const Mat& g = *d.gamma;
  CHECK(max_abs(g * g - g) <= 1e-13);
  for (int mu = 0; mu < 4; ++mu)
    CHECK(max_abs(g * b[mu] + b[mu] * g - b[mu]) <= 1e-13);
  Eigen::FullPivLU<Mat> lu(g);
  CHECK(lu.rank() == 6);
  CHECK_FALSE(derived(Rep::Spin0).gamma.has_value());
}

TEST_CASE("build_derived rejects a corrupted representation") {
  BetaSet b = build_representation(Rep::Spin1);
  b.beta[3] *= 1.5;
  CHECK_THROWS_AS((void)build_derived(b), AlgebraViolation);
}

TEST_CASE("component labels document the layout") {
  CHECK(representation(Rep::Spin0).labels() ==
        std::vector<std::string>{"phi_1", "phi_2", "phi_3", "phi_0", "phi"});
  CHECK(representation(Rep::Spin1).labels().size() == 10);
  CHECK(representation(Rep::Spin1).labels()[2] == "E3");
  CHECK(representation(Rep::Spin1).labels()[4] == "H2");
}
