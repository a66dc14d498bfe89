#include <doctest.h>

#include <random>

#include "dkp/planewave.hpp"

using namespace dkp;

TEST_CASE("dispersion: propagating, massless, shifted and evanescent branches") {
  CHECK(dispersion(1.0, std::sqrt(2.0), 0.0).real() == doctest::Approx(1.0));
  CHECK(dispersion(0.0, 2.0, 0.0).real() == doctest::Approx(2.0));
  // (1.5 - 3)^2 = k^2 + 1 gives k = sqrt(1.25)
  const cd k = dispersion(1.0, 1.5, 3.0);
  CHECK(k.real() == doctest::Approx(std::sqrt(1.25)));
  CHECK(k.imag() == 0.0);
  CHECK(dispersion(1.0, 1.5, 3.0, Branch::Negative).real() ==
        doctest::Approx(-std::sqrt(1.25)));
  const cd ke = dispersion(1.0, 2.0, 2.0);  // (k0-V) = 0 below the gap
  CHECK(ke.real() == 0.0);
  CHECK(ke.imag() == doctest::Approx(1.0));
}

TEST_CASE("kinematics validation rejects off-shell data") {
  CHECK_THROWS_AS(spin0_planewave(1.0, Kinematics{1.0, 2.0, cd(2.0, 0.0), 0.0},
                                  Direction::PlusX),
                  DispersionViolation);
}

TEST_CASE("scalar plane wave reproduces the incident/reflected pair at unit mass") {
  const Kinematics kin{1.0, std::sqrt(2.0), cd(1.0, 0.0), 0.0};
  const PlaneWave inc = spin0_planewave(1.0, kin, Direction::PlusX);
  CHECK(inc.amplitude(0) == cd(1.0, 0.0));
  CHECK(inc.amplitude(1) == cd(0.0, 0.0));
  CHECK(inc.amplitude(2) == cd(0.0, 0.0));
  CHECK(std::abs(inc.amplitude(3) - cd(0.0, -std::sqrt(2.0))) <= 1e-15);
  CHECK(inc.amplitude(4) == cd(1.0, 0.0));

  const PlaneWave ref = spin0_planewave(1.0, kin, Direction::MinusX);
  CHECK(ref.amplitude(0) == cd(-1.0, 0.0));
  CHECK(std::abs(ref.amplitude(3) - cd(0.0, -std::sqrt(2.0))) <= 1e-15);
  CHECK(ref.amplitude(4) == cd(1.0, 0.0));

  // reversing the direction flips only the derivative slot
  for (int s : {1, 2, 3, 4}) CHECK(inc.amplitude(s) == ref.amplitude(s));
}

TEST_CASE("first-order residual vanishes on shell and flags broken spinors") {
  const Kinematics kin{1.0, std::sqrt(2.0), cd(1.0, 0.0), 0.0};
  PlaneWave w = spin0_planewave(1.0, kin, Direction::PlusX);
  CHECK(residual_first_order(w) <= 1e-12);
  w.amplitude(0) = 0.0;  // zero the derivative slot
  CHECK(residual_first_order(w) > 0.1);
}

TEST_CASE("random massive waves satisfy the first-order equation") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> mdist(0.1, 5.0);
  std::uniform_real_distribution<double> kdist(0.05, 8.0);
  for (int i = 0; i < 200; ++i) {
    const double m = mdist(rng);
    const double k = kdist(rng);
    const double k0 = std::sqrt(k * k + m * m);
    const Kinematics kin{m, k0, cd(k, 0.0), 0.0};
    const Direction dir = (i % 2) ? Direction::PlusX : Direction::MinusX;
    const PlaneWave s0 = spin0_planewave(cd(0.3, 0.7), kin, dir);
    const PlaneWave s1 = spin1_massive_planewave(cd(1.1, -0.2), kin, dir);
    CHECK(residual_first_order(s0) <= 1e-12);
    CHECK(residual_first_order(s1) <= 1e-12);
    const auto r0 = residual_secondary(s0);
    const auto r1 = residual_secondary(s1);
    CHECK(r0.gradient_identity <= 1e-12);
    CHECK(r0.constraint <= 1e-12);
    CHECK(r0.mass_shell <= 1e-12);
    CHECK(r1.gradient_identity <= 1e-12);
    CHECK(r1.constraint <= 1e-12);
    CHECK(r1.mass_shell <= 1e-12);
  }
}

TEST_CASE("waves in a potential region carry the kinetic frequency") {
  // transmitted wave beyond an attractive step: k' real and larger
  const double m = 1.0, k0 = std::sqrt(2.0), V = -0.5;
  const cd kp = dispersion(m, k0, V);
  const Kinematics kin{m, k0, kp, V};
  const PlaneWave w = spin0_planewave(1.0, kin, Direction::PlusX);
  CHECK(residual_first_order(w) <= 1e-12);
  CHECK(w.kt_kin.real() == doctest::Approx(k0 - V));
  // evanescent: decays toward +x
  const cd ke = dispersion(m, k0, 1.0);
  const PlaneWave we =
      spin0_planewave(1.0, Kinematics{m, k0, ke, 1.0}, Direction::PlusX);
  CHECK(we.kx.imag() > 0.0);
  CHECK(residual_first_order(we) <= 1e-12);
}

TEST_CASE("off-shell perturbation shows up in the second-order residual") {
  const double m = 1.0, k = 1.0;
  const double k0 = std::sqrt(k * k + m * m);
  Kinematics kin{m, k0, cd(k, 0.0), 0.0};
  PlaneWave w = spin0_planewave(1.0, kin, Direction::PlusX);
  w.kx *= 1.01;  // 1% off shell
  const auto r = residual_secondary(w);
  // |k^2 - (1.01 k)^2| = 0.0201 k^2, first order in the perturbation
  CHECK(r.mass_shell == doctest::Approx(0.0201 * k * k).epsilon(1e-9));
}

TEST_CASE("vector carrier states match the step-scattering triplet") {
  const PlaneWave inc =
      spin1_planewave(1.0, 1.0, 1.0, Direction::PlusX, WaveKind::Incident);
  CHECK(inc.amplitude(2) == cd(1.0, 0.0));
  CHECK(inc.amplitude(4) == cd(-1.0, 0.0));
  for (int s : {0, 1, 3, 5, 6, 7, 8, 9}) CHECK(inc.amplitude(s) == cd(0.0, 0.0));

  const PlaneWave ref =
      spin1_planewave(1.0, 1.0, 1.0, Direction::PlusX, WaveKind::Reflected);
  CHECK(ref.amplitude(2) == cd(1.0, 0.0));
  CHECK(ref.amplitude(4) == cd(1.0, 0.0));

  const PlaneWave tra =
      spin1_planewave(1.0, 1.0, 4.0, Direction::PlusX, WaveKind::Transmitted);
  CHECK(tra.amplitude(2) == cd(1.0, 0.0));
  CHECK(tra.amplitude(4) == cd(-2.0, 0.0));

  // free-region carriers solve the projected massless equation
  CHECK(residual_first_order(inc) <= 1e-12);
  CHECK(residual_first_order(ref) <= 1e-12);
  const auto sec = residual_secondary(inc);
  CHECK(sec.gradient_identity <= 1e-12);
  CHECK(sec.mass_shell <= 1e-12);
}

TEST_CASE("photon pair: H_y = -(k/omega) E_z and positive incident flux") {
  const PlaneWave a = photon_planewave(1.0, 1.0, 1.0, 0.0, WaveKind::Incident);
  CHECK(a.amplitude(2) == cd(1.0, 0.0));
  CHECK(a.amplitude(4) == cd(-1.0, 0.0));
  CHECK(residual_first_order(a) <= 1e-12);

  const PlaneWave b = photon_planewave(1.0, 2.0, 2.0, 0.0, WaveKind::Incident);
  CHECK(b.amplitude(4) == -b.amplitude(2));

  const PlaneWave r = photon_planewave(1.0, 1.0, 1.0, 0.0, WaveKind::Reflected);
  CHECK(r.amplitude(4) == r.amplitude(2));  // H slot flips with direction
  CHECK(residual_first_order(r) <= 1e-12);

  // lightcone check on the massless carrier
  const auto sec = residual_secondary(a);
  CHECK(sec.mass_shell <= 1e-12);
  CHECK(sec.gradient_identity <= 1e-12);
  CHECK(sec.constraint <= 1e-12);
}
