#include <doctest.h>

#include <cmath>

#include "qharmony/analysis.hpp"
#include "qharmony/rng.hpp"

using namespace qharmony;

namespace {

const Pipeline& default_pipeline() {
  static const Pipeline pipeline(default_note_set(), PenaltyScheme::baseline(),
                                 KKProfile::diatonic_default(),
                                 TransitionGrammar::default_grammar(), 4, HhlMode::exact());
  return pipeline;
}

Eigen::VectorXd random_distribution(int n, uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd p(n);
  for (int i = 0; i < n; ++i) p(i) = rng.next_double() + 0.01;
  return p / p.sum();
}

}  // namespace

TEST_CASE("kl divergence basics") {
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(49, 1.0 / 49.0);
  CHECK(kl_divergence(u, u) == doctest::Approx(0.0));

  Eigen::VectorXd point = Eigen::VectorXd::Zero(49);
  point(3) = 1.0;
  CHECK(kl_divergence(point, u) == doctest::Approx(std::log(49.0)).epsilon(1e-12));

  Eigen::VectorXd hole = u;
  hole(5) = 0.0;
  CHECK_THROWS_AS(kl_divergence(u, hole), std::invalid_argument);
}

TEST_CASE("kl divergence agrees with a loop recomputation on random laws") {
  for (uint64_t seed : {10u, 20u, 30u}) {
    const auto p = random_distribution(30, seed);
    const auto q = random_distribution(30, seed + 1);
    double expected = 0.0;
    for (int i = 0; i < 30; ++i) expected += p(i) * (std::log(p(i)) - std::log(q(i)));
    CHECK(kl_divergence(p, q) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(kl_divergence(p, q) >= 0.0);
  }
}

TEST_CASE("chi-square uniformity") {
  const Eigen::VectorXd flat = Eigen::VectorXd::Constant(10, 100.0);
  CHECK(chi_square_uniformity(flat).statistic == doctest::Approx(0.0));
  CHECK(chi_square_uniformity(flat).p_value == doctest::Approx(1.0));

  Eigen::VectorXd skewed(2);
  skewed << 30, 10;
  const auto result = chi_square_uniformity(skewed);
  CHECK(result.statistic == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(result.dof == 1);

  CHECK_THROWS_AS(chi_square_uniformity(Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("chi-square p-values against known quantiles") {
  CHECK(chi_square_p_value(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-6));
  CHECK(chi_square_p_value(18.307038053275146, 10) == doctest::Approx(0.05).epsilon(1e-6));
  CHECK(chi_square_p_value(0.0, 5) == doctest::Approx(1.0));
  CHECK(chi_square_p_value(1000.0, 5) < 1e-12);
}

TEST_CASE("goodness-of-fit against expected probabilities") {
  Eigen::VectorXd counts(3), probs(3);
  counts << 50, 30, 20;
  probs << 0.5, 0.3, 0.2;
  CHECK(chi_square_gof(counts, probs).statistic == doctest::Approx(0.0));
  Eigen::VectorXd outside(3), support(3);
  outside << 50, 30, 20;
  support << 0.5, 0.5, 0.0;
  CHECK_THROWS_AS(chi_square_gof(outside, support), std::invalid_argument);
}

TEST_CASE("block stats on a single sample") {
  SampleCounts counts;
  counts.counts = Eigen::MatrixXi::Zero(49, kChordStates);
  counts.counts(1, chord_state(Degree::kIV, Degree::kV)) = 1;  // (B3,C4) IV->V
  counts.total = 1;
  const auto stats = block_stats(counts, default_pipeline().pairs());
  CHECK(stats.v_to_i_rate == 0.0);
  CHECK(stats.tonic_ending_rate == 0.0);
  CHECK(stats.stepwise_rate == 1.0);
  CHECK(stats.nonzero_states == 1);
  REQUIRE(stats.top_sequences.size() == 1);
  CHECK(stats.top_sequences[0].pair_index == 1);
}

TEST_CASE("analytic interval shares of the pair law") {
  const auto& pipeline = default_pipeline();
  const auto shares = interval_shares(pipeline.base_result().p, pipeline.pairs());
  CHECK(shares[0] + shares[1] + shares[2] + shares[3] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(shares[1] > 0.35);
  CHECK(shares[1] < 0.43);
  // Steps enriched roughly 1.6x over the uniform share 12/49.
  CHECK(shares[1] / (12.0 / 49.0) == doctest::Approx(1.59).epsilon(0.12));
}

TEST_CASE("note classification against the sounding triad") {
  CHECK(classify_note(Note{64}, chord_of(Degree::kI)) == NoteClass::kChordTone);
  CHECK(classify_note(Note{62}, chord_of(Degree::kI)) == NoteClass::kStepNct);
  CHECK(classify_note(Note{68}, chord_of(Degree::kvii0)) == NoteClass::kLeapNct);
}

TEST_CASE("every diatonic note sits within a step of every diatonic triad") {
  for (Note note : default_note_set())
    for (Degree d : kAllDegrees)
      CHECK(classify_note(note, chord_of(d)) != NoteClass::kLeapNct);
}

TEST_CASE("progression ratings") {
  CHECK(rate_progression(Degree::kV, Degree::kI).rating == ProgressionRating::kStrong);
  CHECK(rate_progression(Degree::kIV, Degree::kV).rating == ProgressionRating::kStrong);
  CHECK(rate_progression(Degree::kV, Degree::kIV).rating == ProgressionRating::kAvoid);
  CHECK(rate_progression(Degree::kI, Degree::kvi).rating == ProgressionRating::kWeak);
  CHECK(rate_progression(Degree::kI, Degree::kIV).rating == ProgressionRating::kOk);

  // Exactly the dominant-to-subdominant pairs rate avoid.
  int avoid = 0;
  for (Degree a : kAllDegrees)
    for (Degree b : kAllDegrees)
      if (rate_progression(a, b).rating == ProgressionRating::kAvoid) {
        ++avoid;
        CHECK(harmonic_function(a) == HarmonicFunction::kDominant);
        CHECK(harmonic_function(b) == HarmonicFunction::kSubdominant);
      }
  CHECK(avoid == 4);
}

TEST_CASE("the mediant's function assignment is switchable") {
  CHECK(rate_progression(Degree::kiii, Degree::kIV).rating == ProgressionRating::kOk);
  CHECK(rate_progression(Degree::kiii, Degree::kIV, HarmonicFunction::kSubdominant).rating ==
        ProgressionRating::kWeak);
  CHECK(rate_progression(Degree::kV, Degree::kiii, HarmonicFunction::kSubdominant).rating ==
        ProgressionRating::kAvoid);
  CHECK(harmonic_function(Degree::kiii) == HarmonicFunction::kTonic);
  CHECK(harmonic_function(Degree::kiii, HarmonicFunction::kDominant) ==
        HarmonicFunction::kDominant);
  CHECK(harmonic_function(Degree::kV, HarmonicFunction::kDominant) ==
        HarmonicFunction::kDominant);
}

TEST_CASE("grammar-valid progressions never rate avoid") {
  const auto grammar = TransitionGrammar::default_grammar();
  for (Degree a : kAllDegrees)
    for (Degree b : kAllDegrees)
      if (grammar.allowed(a, b))
        CHECK(rate_progression(a, b).rating != ProgressionRating::kAvoid);
}

TEST_CASE("tendency-tone rate on single blocks") {
  const auto& pairs = default_pipeline().pairs();
  std::vector<BlockSample> resolved = {{1, Degree::kV, Degree::kI}};  // B3 -> C4
  CHECK(*tendency_tone_rate(phrases_of(resolved, pairs)) == doctest::Approx(1.0));
  std::vector<BlockSample> unresolved = {{6, Degree::kV, Degree::kI}};  // B3 -> A4
  CHECK(*tendency_tone_rate(phrases_of(unresolved, pairs)) == doctest::Approx(0.0));
  std::vector<BlockSample> unrelated = {{8, Degree::kIV, Degree::kV}};  // C4 -> C4
  CHECK(!tendency_tone_rate(phrases_of(unrelated, pairs)).has_value());
}

TEST_CASE("chord-tone compliance of a frozen chain") {
  // A4/iii, A4/vi, A4/IV, G4/I, G4/V, C4/I, C4/IV, G4/V: 7 of 8 notes are
  // chord tones (the opening A4 over iii is not).
  const auto& pairs = default_pipeline().pairs();
  auto index_of = [&pairs](int midi1, int midi2) {
    for (int i = 0; i < pairs.size(); ++i)
      if (pairs.at(i).first.midi == midi1 && pairs.at(i).second.midi == midi2) return i;
    return -1;
  };
  ChainResult chain;
  chain.blocks = {{index_of(69, 69), Degree::kiii, Degree::kvi},
                  {index_of(69, 67), Degree::kIV, Degree::kI},
                  {index_of(67, 60), Degree::kV, Degree::kI},
                  {index_of(60, 67), Degree::kIV, Degree::kV}};
  CHECK(chord_tone_compliance(chain, pairs) == doctest::Approx(7.0 / 8.0));

  ChainResult all_tones;
  all_tones.blocks = {{index_of(60, 64), Degree::kI, Degree::kI}};
  CHECK(chord_tone_compliance(all_tones, pairs) == doctest::Approx(1.0));
}

TEST_CASE("harmony report on sampled pipeline output") {
  const auto& pipeline = default_pipeline();
  Rng rng(99, 0);
  const auto samples = sample_block(pipeline.joint(), rng, 5000);
  const auto report = harmony_report(phrases_of(samples, pipeline.pairs()));
  CHECK(report.n_outputs == 5000);
  CHECK(report.leap_nct_rate == 0.0);
  CHECK(report.rating_counts[static_cast<int>(ProgressionRating::kAvoid)] == 0);
  CHECK(report.strong_or_ok_rate >= 0.90);
  CHECK(report.chord_tone_rate_n1 > 0.3);
  CHECK(report.chord_tone_rate_n2 > 0.3);
  CHECK(report.both_ct_rate <= report.chord_tone_rate_n1);
  CHECK(report.both_ct_rate <= report.chord_tone_rate_n2);
}

TEST_CASE("gate-cost model and crossover") {
  CHECK(gate_cost(OracleKind::kFourier, 3) == 375);
  CHECK(gate_cost(OracleKind::kLookup, 3) == 12742);
  CHECK(gate_cost(OracleKind::kFourier, 6) == 8064);
  CHECK(gate_cost(OracleKind::kLookup, 6) == 101936);
  CHECK(gate_cost(OracleKind::kFourier, 8) == 129024);
  CHECK(gate_cost(OracleKind::kLookup, 8) == 407744);
  // Interpolated interior anchors: 375 * ceil(21.504^(k/3)).
  CHECK(gate_cost(OracleKind::kFourier, 4) == 1125);
  CHECK(gate_cost(OracleKind::kFourier, 5) == 3000);
  CHECK_THROWS_AS(gate_cost(OracleKind::kFourier, 2), std::invalid_argument);

  const double crossover = gate_cost_crossover_vocab();
  CHECK(crossover == doctest::Approx((12742.0 / 8.0) / (8064.0 / 4096.0)).epsilon(1e-12));
  // The curves really do cross between the adjacent register sizes.
  const int below = static_cast<int>(std::floor(std::log2(crossover)));
  CHECK(gate_cost(OracleKind::kFourier, below) < gate_cost(OracleKind::kLookup, below));
  CHECK(gate_cost(OracleKind::kFourier, below + 1) > gate_cost(OracleKind::kLookup, below + 1));
}

TEST_CASE("tendency rate over a long batch is reported, not asserted to a band") {
  const auto& pipeline = default_pipeline();
  Rng rng(7, 0);
  const auto samples = sample_block(pipeline.joint(), rng, 50000);
  const auto rate = tendency_tone_rate(phrases_of(samples, pipeline.pairs()));
  REQUIRE(rate.has_value());
  CHECK(*rate >= 0.0);
  CHECK(*rate <= 1.0);
}
