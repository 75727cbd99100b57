#include "qharmony/prefmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qharmony/eigensolve.hpp"
#include "qharmony/rng.hpp"

namespace qharmony {

namespace {

// Full Jacobi is exact but cubic; beyond this dimension the chromatic sweep
// matrices switch to power iteration for the extremal eigenvalues.
constexpr int kExactEighLimit = 128;

int next_power_of_two(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

std::pair<double, double> extremal_active(const Eigen::MatrixXd& active) {
  if (active.rows() <= kExactEighLimit) {
    auto eig = jacobi_eigh(active, /*with_vectors=*/false);
    return {eig.eigenvalues(0), eig.eigenvalues(active.rows() - 1)};
  }
  return extremal_eigenvalues(active);
}

}  // namespace

PreferenceMatrix build_matrix(const std::vector<Note>& notes, const PenaltyScheme& scheme,
                              const KKProfile& kk) {
  if (notes.empty()) throw std::invalid_argument("build_matrix: empty note set");

  PreferenceMatrix m;
  m.scheme = scheme;
  m.pairs = PairTable::over(notes);
  m.dim_active = m.pairs.size();
  m.dim_padded = next_power_of_two(m.dim_active);
  m.entries = Eigen::MatrixXd::Identity(m.dim_padded, m.dim_padded);

  const auto& pairs = m.pairs.pairs;
  const int n = m.dim_active;

  for (int i = 0; i < n; ++i) {
    const NotePair& p = pairs[i];
    const double instability = 1.0 - 0.5 * (kk.stability(p.first) + kk.stability(p.second));
    m.entries(i, i) =
        scheme.base + scheme.proximity_penalty(p.interval()) + scheme.kk_weight * instability;
  }

  // Post-skip compensation: rewards pair j picking up within a step of where
  // pair i ended, at 0.3 after a skip/leap and 0.15 after a step/unison.
  auto psc = [&pairs](int i, int j) {
    const bool connected = std::abs(pairs[j].first.midi - pairs[i].second.midi) <= 2;
    if (!connected) return 0.0;
    return pairs[i].interval() >= 3 ? 0.3 : 0.15;
  };

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double similarity =
          scheme.alpha_coupling / (1.0 + std::abs(pairs[i].interval() - pairs[j].interval()));
      const double value = similarity + psc(i, j) + psc(j, i);
      m.entries(i, j) = value;
      m.entries(j, i) = value;
    }
  }

  const auto [lambda_min, lambda_max] = extremal_active(m.active());
  (void)lambda_max;
  if (lambda_min < 0.1) {
    m.shift_applied = 0.1 - lambda_min;
    m.entries.topLeftCorner(n, n).diagonal().array() += m.shift_applied;
  }
  return m;
}

SpectralSummary spectral_summary(const PreferenceMatrix& matrix) {
  const auto active = matrix.active();
  const auto [lambda_min, lambda_max] = extremal_active(active);
  if (lambda_min <= 0.0)
    throw std::runtime_error("spectral_summary: active block is not positive definite");
  SpectralSummary s;
  s.lambda_min = lambda_min;
  s.lambda_max = lambda_max;
  s.kappa = lambda_max / lambda_min;
  s.stable_rank = active.squaredNorm() / (lambda_max * lambda_max);
  return s;
}

KappaSweepReport kappa_mc_sweep(const KappaSweepRanges& ranges, int n_samples, uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("kappa_mc_sweep: n_samples must be >= 1");
  auto check = [](double lo, double hi, const char* what) {
    if (lo > hi) throw std::invalid_argument(std::string("kappa_mc_sweep: invalid range for ") + what);
  };
  check(ranges.base_min, ranges.base_max, "base");
  check(ranges.prox_scale_min, ranges.prox_scale_max, "prox scale");
  check(ranges.kk_weight_min, ranges.kk_weight_max, "kk weight");

  const std::vector<Note> notes = default_note_set();
  const KKProfile kk = KKProfile::diatonic_default();

  std::vector<double> kappas(n_samples);
  for (int k = 0; k < n_samples; ++k) {
    Rng rng(seed, static_cast<uint64_t>(k));
    auto uniform = [&rng](double lo, double hi) { return lo + (hi - lo) * rng.next_double(); };
    PenaltyScheme scheme = PenaltyScheme::baseline();
    scheme.base = uniform(ranges.base_min, ranges.base_max);
    scheme.prox_scale = uniform(ranges.prox_scale_min, ranges.prox_scale_max);
    scheme.kk_weight = uniform(ranges.kk_weight_min, ranges.kk_weight_max);

    const PreferenceMatrix m = build_matrix(notes, scheme, kk);
    auto eig = jacobi_eigh(m.active(), /*with_vectors=*/false);
    kappas[k] = eig.eigenvalues(m.dim_active - 1) / eig.eigenvalues(0);
  }

  std::vector<double> sorted = kappas;
  std::sort(sorted.begin(), sorted.end());

  KappaSweepReport report;
  report.n_samples = n_samples;
  report.min_kappa = sorted.front();
  report.max_kappa = sorted.back();
  report.median_kappa = n_samples % 2 == 1
                            ? sorted[n_samples / 2]
                            : 0.5 * (sorted[n_samples / 2 - 1] + sorted[n_samples / 2]);
  double sum = 0.0;
  int below20 = 0, above100 = 0;
  for (double k : sorted) {
    sum += k;
    if (k < 20.0) ++below20;
    if (k > 100.0) ++above100;
  }
  report.mean_kappa = sum / n_samples;
  report.frac_below_20 = static_cast<double>(below20) / n_samples;
  report.frac_above_100 = static_cast<double>(above100) / n_samples;
  return report;
}

}  // namespace qharmony
