#include "qharmony/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "qharmony/errors.hpp"

namespace qharmony {

double binary_fit(const Chord& chord, Note note) {
  const auto tones = chord_tones(chord);
  const int pc = note.pitch_class();
  const bool member = pc == tones[0] || pc == tones[1] || pc == tones[2];
  return member ? 3.0 : 1.0;
}

FitTable FitTable::build(int K) {
  if (K < 1 || K > 12) throw std::invalid_argument("FitTable: K must lie in 1..12");

  FitTable table;
  table.K = K;
  const int keep = K / 2;  // components m <= keep or m >= 12 - keep survive
  constexpr double kTwoPi = 2.0 * std::numbers::pi;

  for (int q = 0; q < 3; ++q) {
    const auto quality = static_cast<ChordQuality>(q);
    const auto tones = chord_tones(Chord{Degree::kI, 0, quality});  // intervals from the root

    // Forward transform of the binary membership signal, e^{-2 pi i m l / 12}.
    std::complex<double> spectrum[12];
    for (int m = 0; m < 12; ++m) {
      std::complex<double> sum = 0.0;
      for (int t : tones) {
        const double angle = -kTwoPi * m * t / 12.0;
        sum += std::complex<double>(std::cos(angle), std::sin(angle));
      }
      spectrum[m] = (m <= keep || m >= 12 - keep) ? sum : 0.0;
    }

    for (int l = 0; l < 12; ++l) {
      std::complex<double> value = 0.0;
      for (int m = 0; m < 12; ++m) {
        const double angle = kTwoPi * m * l / 12.0;
        value += spectrum[m] * std::complex<double>(std::cos(angle), std::sin(angle));
      }
      value /= 12.0;
      if (std::abs(value.imag()) > 1e-9)
        throw NumericalError("FitTable: inverse transform left an imaginary residue");
      double g = value.real();
      // Absorb reconstruction dust so an untruncated spectrum returns the
      // exact 0/1 membership values.
      if (std::abs(g) < 1e-9) g = 0.0;
      if (std::abs(g - 1.0) < 1e-9) g = 1.0;
      g = std::clamp(g, 0.0, 1.0);
      table.values(q, l) = 1.0 + 2.0 * g;
    }
  }
  return table;
}

double fourier_fit(const Chord& chord, Note note, int K) {
  return FitTable::build(K).fit(chord, note);
}

Eigen::VectorXd chord_vector(const NotePair& pair, const TransitionGrammar& grammar,
                             const FitTable& fits, std::optional<Degree> restriction) {
  Eigen::VectorXd cv = Eigen::VectorXd::Zero(kChordStates);
  for (Degree c1 : kAllDegrees) {
    if (restriction && !grammar.allowed(*restriction, c1)) continue;
    const Chord chord1 = chord_of(c1);
    const double fit1 = fits.fit(chord1, pair.first);
    for (Degree c2 : kAllDegrees) {
      const double t = grammar.weight(c1, c2);
      if (t <= 0.0) continue;
      const double fit2 = fits.fit(chord_of(c2), pair.second);
      cv(chord_state(c1, c2)) = std::sqrt(t * fit1 * fit2);
    }
  }
  return cv;
}

ChordVectorSet build_chord_vectors(const PairTable& pairs, const TransitionGrammar& grammar,
                                   const FitTable& fits, std::optional<Degree> restriction) {
  ChordVectorSet set;
  set.restriction = restriction;
  set.vectors = Eigen::MatrixXd::Zero(pairs.size(), kChordStates);
  double max_norm = 0.0;
  for (int i = 0; i < pairs.size(); ++i) {
    set.vectors.row(i) = chord_vector(pairs.at(i), grammar, fits, restriction).transpose();
    max_norm = std::max(max_norm, set.vectors.row(i).norm());
  }
  if (max_norm <= 0.0) throw NumericalError("chord vectors are identically zero");
  set.global_scale = 1.0 / max_norm;
  return set;
}

JointDistribution joint_distribution(const HhlResult& hhl, const ChordVectorSet& cvs) {
  const auto n = cvs.vectors.rows();
  if (hhl.p.size() != n)
    throw std::invalid_argument("joint_distribution: dimension mismatch");

  const double s2 = cvs.global_scale * cvs.global_scale;
  JointDistribution joint;
  joint.probs = Eigen::MatrixXd(n, kChordStates);
  for (Eigen::Index i = 0; i < n; ++i)
    joint.probs.row(i) = hhl.p(i) * s2 * cvs.vectors.row(i).array().square();

  const double z = joint.probs.sum();
  if (z <= 0.0) throw NumericalError("joint_distribution: empty support");
  joint.joint_ps_weight = hhl.ps_weight * z;
  joint.probs /= z;
  joint.melody_marginal = joint.probs.rowwise().sum();
  return joint;
}

}  // namespace qharmony
