#include "qharmony/hhl.hpp"

#include <cmath>

#include "qharmony/errors.hpp"

namespace qharmony {

RhsVector build_b(const PairTable& pairs, int dim_padded,
                  const std::optional<BiasContext>& bias) {
  const int n = pairs.size();
  if (n == 0) throw std::invalid_argument("build_b: empty pair set");
  if (dim_padded < n) throw std::invalid_argument("build_b: padded dimension too small");

  RhsVector b;
  b.dim_active = n;
  b.bias = bias;
  b.amplitudes = Eigen::VectorXd::Zero(dim_padded);
  if (!bias) {
    b.amplitudes.head(n).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
    return b;
  }
  for (int i = 0; i < n; ++i) {
    const double distance = std::abs(pairs.at(i).first.midi - bias->note.midi);
    b.amplitudes(i) = 1.0 + bias->alpha * std::exp(-distance / bias->sigma);
  }
  b.amplitudes.head(n) /= b.amplitudes.head(n).norm();
  return b;
}

HhlSolver::HhlSolver(const PreferenceMatrix& matrix)
    : dim_active_(matrix.dim_active), dim_padded_(matrix.dim_padded) {
  eig_ = jacobi_eigh(matrix.active());
  lambda_min_ = eig_.eigenvalues(0);
  lambda_max_ = eig_.eigenvalues(dim_active_ - 1);
  if (lambda_min_ <= 0.0)
    throw NumericalError("hhl: matrix is singular or indefinite (lambda_min <= 0)");
}

HhlResult HhlSolver::solve(const RhsVector& b, const HhlMode& mode) const {
  if (b.amplitudes.size() != dim_padded_)
    throw std::invalid_argument("hhl: rhs length does not match padded dimension");
  if (dim_padded_ > dim_active_ &&
      b.amplitudes.tail(dim_padded_ - dim_active_).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("hhl: rhs has amplitude on padding states");
  const double norm = b.amplitudes.norm();
  if (norm == 0.0) throw std::invalid_argument("hhl: zero rhs");
  if (std::abs(norm - 1.0) > 1e-9) throw std::invalid_argument("hhl: rhs is not unit norm");

  const int n = dim_active_;
  const Eigen::VectorXd beta = eig_.eigenvectors.transpose() * b.amplitudes.head(n);
  const double c = lambda_min_ / 2.0;

  Eigen::VectorXd factors(n);
  if (mode.kind == HhlMode::kExact) {
    factors = (c / eig_.eigenvalues.array()).min(1.0);
  } else {
    if (mode.clock_bits < 1 || mode.clock_bits > 62)
      throw std::invalid_argument("hhl: clock_bits out of range");
    // Quantise each eigenvalue into bins 1..2^m - 1 of an estimation register
    // spanning [0, 1.05 * lambda_max]; the zero bin is forbidden.
    const double bins = static_cast<double>((uint64_t{1} << mode.clock_bits) - 1);
    const double bound = 1.05 * lambda_max_;
    for (int u = 0; u < n; ++u) {
      const double bin = std::max(1.0, std::round(eig_.eigenvalues(u) * bins / bound));
      const double estimate = bin * bound / bins;
      factors(u) = std::min(c / estimate, 1.0);
    }
  }

  HhlResult result;
  result.mode = mode;
  result.ps_weight = (beta.array().square() * factors.array().square()).sum();
  if (result.ps_weight <= 0.0)
    throw NumericalError("hhl: post-selection weight vanished");

  const Eigen::VectorXd amplitude = eig_.eigenvectors * (beta.array() * factors.array()).matrix();
  result.p = amplitude.array().square();
  result.p /= result.p.sum();
  return result;
}

HhlResult hhl_solve(const PreferenceMatrix& matrix, const RhsVector& b, const HhlMode& mode) {
  return HhlSolver(matrix).solve(b, mode);
}

HhlResult apply_depolarizing(const HhlResult& ideal, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("apply_depolarizing: alpha must lie in [0, 1]");
  const auto n = ideal.p.size();
  HhlResult noisy;
  noisy.mode = ideal.mode;
  noisy.p = (1.0 - alpha) * ideal.p.array() + alpha / static_cast<double>(n);
  noisy.ps_weight = (1.0 - alpha) * ideal.ps_weight + 0.5 * alpha;
  return noisy;
}

double ps_weight_uniform_spectrum(double kappa) {
  if (kappa < 1.0) throw std::invalid_argument("ps_weight_uniform_spectrum: kappa must be >= 1");
  return 0.25 / kappa;
}

double ps_weight_uniform_spectrum_quadrature(double kappa) {
  if (kappa < 1.0) throw std::invalid_argument("ps_weight_uniform_spectrum: kappa must be >= 1");
  if (kappa == 1.0) return 0.25;  // degenerate spectrum: every lambda = lambda_min

  // E over lambda ~ U[1, kappa] of min(0.5 / lambda, 1)^2, by 16-point
  // Gauss-Legendre on geometrically spaced segments (the integrand peaks at
  // the left end for large kappa).
  static const double kNodes[8] = {0.0950125098376374, 0.2816035507792589,
                                   0.4580167776572274, 0.6178762444026438,
                                   0.7554044083550030, 0.8656312023878318,
                                   0.9445750230732326, 0.9894009349916499};
  static const double kWeights[8] = {0.1894506104550685, 0.1826034150449236,
                                     0.1691565193950025, 0.1495959888165767,
                                     0.1246289712555339, 0.0951585116824928,
                                     0.0622535239386479, 0.0271524594117541};
  const int segments = 64;
  const double ratio = std::pow(kappa, 1.0 / segments);
  double integral = 0.0;
  double lo = 1.0;
  for (int seg = 0; seg < segments; ++seg) {
    const double hi = seg + 1 == segments ? kappa : lo * ratio;
    const double mid = 0.5 * (hi + lo), half = 0.5 * (hi - lo);
    for (int k = 0; k < 8; ++k) {
      for (double sign : {-1.0, 1.0}) {
        const double lambda = mid + sign * half * kNodes[k];
        const double f = std::min(0.5 / lambda, 1.0);
        integral += kWeights[k] * half * f * f;
      }
    }
    lo = hi;
  }
  return integral / (kappa - 1.0);
}

}  // namespace qharmony
