#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace qharmony {

template <typename Scalar>
struct EigenDecomposition {
  Eigen::Vector<Scalar, Eigen::Dynamic> eigenvalues;  // ascending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> eigenvectors;  // columns
};

namespace detail {

template <typename Scalar>
Scalar off_diagonal_norm(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a) {
  Scalar sum = 0;
  for (Eigen::Index p = 0; p < a.rows(); ++p)
    for (Eigen::Index q = p + 1; q < a.cols(); ++q) sum += a(p, q) * a(p, q);
  return std::sqrt(Scalar(2) * sum);
}

}  // namespace detail

/// Cyclic Jacobi diagonalisation of a symmetric matrix.
///
/// Rotations are applied in a fixed row-major (p, q) order, so the result is
/// reproducible for a given input on any platform with IEEE doubles.
/// Terminates when the off-diagonal Frobenius norm drops below
/// 1e-13 * ||A||_F, which keeps solution distributions accurate to 1e-10
/// even on clustered spectra.  Eigenvalues are returned ascending; each
/// eigenvector's largest-magnitude component is made positive.
///
/// Throws std::invalid_argument if the input is not symmetric to 1e-10
/// (relative to its largest absolute entry).
template <typename Derived>
EigenDecomposition<typename Derived::Scalar> jacobi_eigh(
    const Eigen::MatrixBase<Derived>& input, bool with_vectors = true) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Vector<Scalar, Eigen::Dynamic>;

  Matrix a = input;
  const Eigen::Index n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("jacobi_eigh: matrix must be square");
  if (n == 0) throw std::invalid_argument("jacobi_eigh: empty matrix");

  const Scalar scale = a.cwiseAbs().maxCoeff();
  if (scale > Scalar(0)) {
    Scalar asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (asym > Scalar(1e-10) * std::max(scale, Scalar(1)))
      throw std::invalid_argument("jacobi_eigh: matrix is not symmetric");
  }

  Matrix v;
  if (with_vectors) v = Matrix::Identity(n, n);

  const Scalar threshold = Scalar(1e-13) * a.norm();
  constexpr int kMaxSweeps = 64;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (detail::off_diagonal_norm(a) <= threshold) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (std::abs(apq) <= std::numeric_limits<Scalar>::min()) continue;
        // Stable rotation: t = sign(theta) / (|theta| + sqrt(theta^2 + 1)).
        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        Scalar t;
        if (std::abs(theta) > Scalar(1e154)) {
          t = Scalar(1) / (Scalar(2) * theta);
        } else {
          t = Scalar(1) / (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
          if (theta < Scalar(0)) t = -t;
        }
        const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        const Scalar tau = s / (Scalar(1) + c);

        const Scalar app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);
        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const Scalar akp = a(k, p), akq = a(k, q);
          a(k, p) = akp - s * (akq + tau * akp);
          a(k, q) = akq + s * (akp - tau * akq);
          a(p, k) = a(k, p);
          a(q, k) = a(k, q);
        }
        if (with_vectors) {
          for (Eigen::Index k = 0; k < n; ++k) {
            const Scalar vkp = v(k, p), vkq = v(k, q);
            v(k, p) = vkp - s * (vkq + tau * vkp);
            v(k, q) = vkq + s * (vkp - tau * vkq);
          }
        }
      }
    }
  }

  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&a](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });

  EigenDecomposition<Scalar> out;
  out.eigenvalues = Vector(n);
  for (Eigen::Index i = 0; i < n; ++i) out.eigenvalues(i) = a(order[i], order[i]);
  if (with_vectors) {
    out.eigenvectors = Matrix(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      out.eigenvectors.col(i) = v.col(order[i]);
      Eigen::Index mx = 0;
      out.eigenvectors.col(i).cwiseAbs().maxCoeff(&mx);
      if (out.eigenvectors(mx, i) < Scalar(0)) out.eigenvectors.col(i) = -out.eigenvectors.col(i);
    }
  }
  return out;
}

/// Extremal eigenvalues {min, max} of a symmetric matrix by power iteration,
/// for matrices too large for a full Jacobi pass.  Indefinite inputs are
/// handled by re-anchoring at whichever extreme dominates in magnitude.
/// The start vector is a deterministic integer-hash perturbation of all-ones.
template <typename Derived>
std::pair<typename Derived::Scalar, typename Derived::Scalar> extremal_eigenvalues(
    const Eigen::MatrixBase<Derived>& input, int max_iterations = 5000,
    typename Derived::Scalar tolerance = 1e-11) {
  using Scalar = typename Derived::Scalar;
  using Vector = Eigen::Vector<Scalar, Eigen::Dynamic>;
  const auto& a = input.derived();
  const Eigen::Index n = a.rows();

  Vector start(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    uint64_t h = (static_cast<uint64_t>(i) + 1) * 0x9E3779B97F4A7C15ull;
    h ^= h >> 29;
    start(i) = Scalar(1) + Scalar(1e-3) * (Scalar(h & 0xFFFF) / Scalar(0xFFFF) - Scalar(0.5));
  }
  start /= start.norm();

  // Rayleigh-quotient power iteration; one matvec per step.
  auto dominant = [&](auto&& apply) -> Scalar {
    Vector v = start;
    Scalar prev = std::numeric_limits<Scalar>::infinity();
    Scalar r = 0;
    for (int it = 0; it < max_iterations; ++it) {
      Vector w = apply(v);
      r = v.dot(w);
      const Scalar norm = w.norm();
      if (norm == Scalar(0)) return Scalar(0);
      v = w / norm;
      if (std::abs(r - prev) <= tolerance * std::max(std::abs(r), Scalar(1))) break;
      prev = r;
    }
    return r;
  };

  const Scalar r1 = dominant([&a](const Vector& v) -> Vector { return a * v; });
  if (r1 >= Scalar(0)) {
    const Scalar lambda_max = r1;
    const Scalar mu = lambda_max * (Scalar(1) + Scalar(1e-6)) + Scalar(1e-9);
    const Scalar top = dominant([&a, mu](const Vector& v) -> Vector { return mu * v - a * v; });
    return {mu - top, lambda_max};
  }
  // |lambda_min| dominates: A - r1*I is positive semidefinite.
  const Scalar lambda_min = r1;
  const Scalar top =
      dominant([&a, lambda_min](const Vector& v) -> Vector { return a * v - lambda_min * v; });
  return {lambda_min, top + lambda_min};
}

}  // namespace qharmony
