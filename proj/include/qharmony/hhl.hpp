#pragma once

#include <optional>

#include <Eigen/Core>

#include "qharmony/eigensolve.hpp"
#include "qharmony/music.hpp"
#include "qharmony/prefmatrix.hpp"

namespace qharmony {

/// Eigenvalue readout model: exact spectrum, or spectrum quantised into the
/// bins a phase-estimation register with `clock_bits` bits would resolve.
struct HhlMode {
  enum Kind { kExact, kBinned };
  Kind kind = kExact;
  int clock_bits = 6;

  static HhlMode exact() { return {kExact, 0}; }
  static HhlMode binned(int clock_bits = 6) { return {kBinned, clock_bits}; }
};

/// Melodic bias toward pairs starting near a context note:
/// b_i proportional to 1 + alpha * exp(-|n1(i) - context| / sigma).
struct BiasContext {
  Note note;
  double alpha = 3.0;
  double sigma = 2.0;
};

/// Unit-norm right-hand side over the padded register; padding states carry
/// zero amplitude.
struct RhsVector {
  Eigen::VectorXd amplitudes;  // length dim_padded
  int dim_active = 0;
  std::optional<BiasContext> bias;  // empty = uniform
};

RhsVector build_b(const PairTable& pairs, int dim_padded,
                  const std::optional<BiasContext>& bias = {});

/// Post-selected solution distribution over the active pairs.
struct HhlResult {
  Eigen::VectorXd p;       // length dim_active, sums to 1
  double ps_weight = 0.0;  // probability of the accepting ancilla outcome
  HhlMode mode;
};

/// Linear-system stage as amplitude algebra on the eigenbasis of the active
/// block.  With beta_u = <u|b> and C = lambda_min / 2, the accepted amplitude
/// per eigencomponent is beta_u * C / lambda_u, and
/// ps_weight = sum_u beta_u^2 (C / lambda_u)^2.  Binned mode replaces each
/// lambda_u with its clock-register estimate; C always comes from the exact
/// spectrum.
class HhlSolver {
 public:
  explicit HhlSolver(const PreferenceMatrix& matrix);

  HhlResult solve(const RhsVector& b, const HhlMode& mode = HhlMode::exact()) const;

  const EigenDecomposition<double>& decomposition() const { return eig_; }
  double lambda_min() const { return lambda_min_; }
  double lambda_max() const { return lambda_max_; }

 private:
  EigenDecomposition<double> eig_;  // of the active block
  double lambda_min_ = 0.0;
  double lambda_max_ = 0.0;
  int dim_active_ = 0;
  int dim_padded_ = 0;
};

/// One-shot convenience wrapper.
HhlResult hhl_solve(const PreferenceMatrix& matrix, const RhsVector& b,
                    const HhlMode& mode = HhlMode::exact());

/// Depolarising mixture: p_noisy = (1 - alpha) p + alpha / n_active, and the
/// post-selection weight relaxes toward the maximally mixed value 0.5:
/// ps_noisy = (1 - alpha) ps + 0.5 alpha.
HhlResult apply_depolarizing(const HhlResult& ideal, double alpha);

/// Expected post-selection weight E[min(C/lambda, 1)^2] for eigenvalues
/// uniform on [lambda_min, kappa * lambda_min] with C = lambda_min / 2.
/// Closed form: 1 / (4 kappa).
double ps_weight_uniform_spectrum(double kappa);

/// Same expectation by composite Gauss-Legendre quadrature; agrees with the
/// closed form to better than 1e-9 over the supported kappa range.
double ps_weight_uniform_spectrum_quadrature(double kappa);

}  // namespace qharmony
