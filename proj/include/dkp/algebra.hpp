#pragma once
#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "dkp/errors.hpp"

namespace dkp {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

//! Default tolerance for matrix identity residuals. All entries of the
//! representation matrices are 0, +-1 or +-i, so only rounding from a few
//! products can accrue.
inline constexpr double kAlgebraTol = 1e-13;

enum class Rep { Spin0, Spin1 };

inline int rep_dim(Rep r) { return r == Rep::Spin0 ? 5 : 10; }

//==============================================================================
//! The four beta matrices of one representation of the meson algebra
//!
//!   b_mu b_nu b_la + b_la b_nu b_mu = b_mu g_nu_la + b_la g_nu_mu
//!
//! with metric signature (+,-,-,-).  beta[0] is Hermitian, beta[1..3] are
//! anti-Hermitian (the contravariant spatial matrices).
//!
//! Component ordering:
//!   Spin0 (5):  (phi_1, phi_2, phi_3, phi_0, phi)  -- the three spatial
//!               derivative slots, the time derivative slot, and the scalar.
//!   Spin1 (10): (E1, E2, E3, H1, H2, H3, p1, p2, p3, p4) -- six field
//!               strength slots followed by four potential slots.
struct BetaSet {
  Rep rep;
  std::array<Mat, 4> beta;

  static constexpr std::array<double, 4> metric{+1.0, -1.0, -1.0, -1.0};

  int dim() const { return static_cast<int>(beta[0].rows()); }
  const Mat& operator[](int mu) const { return beta[mu]; }
  std::vector<std::string> labels() const;
};

//! Matrices derived from a BetaSet.
//!   eta0        = 2*beta0^2 - 1, the adjoint metric (eta0^2 = 1).
//!   beta_tilde  = beta0*beta_i - beta_i*beta0, Hermitian; they generate the
//!                 Schroedinger-form Hamiltonian and the positive-density flux.
//!   gamma       (Spin1 only) the idempotent projector onto the six field
//!                 strength slots, satisfying gamma*b_mu + b_mu*gamma = b_mu.
struct DerivedMatrices {
  Mat eta0;
  std::array<Mat, 3> beta_tilde;
  std::optional<Mat> gamma;
};

struct HermiticityReport {
  // residual[0] = |beta0 - beta0^dagger|, residual[i] = |beta_i + beta_i^dagger|
  std::array<double, 4> residual{};
  std::array<bool, 4> ok{};
  bool all_ok() const { return ok[0] && ok[1] && ok[2] && ok[3]; }
};

//! Construct the 5x5 or 10x10 representation.
BetaSet build_representation(Rep kind);

//! Max-entry norm of the worst violation of the trilinear relation over all
//! 64 index triples (exhaustive, not sampled).
double trilinear_residual(const BetaSet& b);

//! Hermiticity convention check (beta0 Hermitian, beta_i anti-Hermitian).
//! Note the beta_i of some older conventions equal i times ours; such a set
//! fails this check with residual 2|beta_i|.
HermiticityReport check_hermiticity(const BetaSet& b, double tol = kAlgebraTol);

//! Build eta0, beta_tilde and (Spin1) gamma, verifying every identity they
//! must satisfy.  Throws AlgebraViolation on a bad representation.
DerivedMatrices build_derived(const BetaSet& b, double tol = kAlgebraTol);

//! Cached immutable representation and derived matrices (thread-safe after
//! first use; construction is single-threaded).
const BetaSet& representation(Rep kind);
const DerivedMatrices& derived(Rep kind);

//! Max-entry norm.
double max_abs(const Mat& m);

}  // namespace dkp
