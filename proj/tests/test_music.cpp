#include <doctest.h>

#include <set>

#include "qharmony/music.hpp"

using namespace qharmony;

TEST_CASE("default note set is B3..A4") {
  const auto notes = default_note_set();
  REQUIRE(notes.size() == 7);
  const std::vector<int> expected = {59, 60, 62, 64, 65, 67, 69};
  for (size_t i = 0; i < notes.size(); ++i) {
    CHECK(notes[i].midi == expected[i]);
    CHECK(notes[i].pitch_class() == expected[i] % 12);
  }
  CHECK(note_name(notes[0]) == "B3");
  CHECK(note_name(notes[1]) == "C4");
  CHECK(note_name(notes[6]) == "A4");
}

TEST_CASE("interval categories") {
  CHECK(interval_category(0) == IntervalCategory::kUnison);
  CHECK(interval_category(1) == IntervalCategory::kStep);
  CHECK(interval_category(2) == IntervalCategory::kStep);
  CHECK(interval_category(3) == IntervalCategory::kSkip);
  CHECK(interval_category(5) == IntervalCategory::kSkip);
  CHECK(interval_category(6) == IntervalCategory::kLeap);
  CHECK(interval_category(11) == IntervalCategory::kLeap);
  CHECK_THROWS_AS(interval_category(-1), std::invalid_argument);
}

TEST_CASE("pair table indexing is a row-major bijection") {
  const auto table = PairTable::over(default_note_set());
  REQUIRE(table.size() == 49);
  std::set<int> seen;
  for (int a = 0; a < 7; ++a) {
    for (int b = 0; b < 7; ++b) {
      const NotePair& p = table.at(a * 7 + b);
      CHECK(p.index == a * 7 + b);
      CHECK(p.first.midi == table.notes[a].midi);
      CHECK(p.second.midi == table.notes[b].midi);
      seen.insert(p.index);
    }
  }
  CHECK(seen.size() == 49);

  // Interval-category census over the default set.
  int census[4] = {0, 0, 0, 0};
  for (const auto& p : table.pairs) ++census[static_cast<int>(p.category())];
  CHECK(census[0] == 7);
  CHECK(census[1] == 12);
  CHECK(census[2] == 18);
  CHECK(census[3] == 12);
}

TEST_CASE("diatonic chord templates") {
  auto tones = [](Degree d) {
    const auto t = chord_tones(chord_of(d));
    return std::set<int>(t.begin(), t.end());
  };
  CHECK(tones(Degree::kI) == std::set<int>{0, 4, 7});
  CHECK(tones(Degree::kvii0) == std::set<int>{11, 2, 5});
  CHECK(tones(Degree::kvi) == std::set<int>{9, 0, 4});
  CHECK(tones(Degree::kii) == std::set<int>{2, 5, 9});
  CHECK(tones(Degree::kiii) == std::set<int>{4, 7, 11});
  CHECK(tones(Degree::kIV) == std::set<int>{5, 9, 0});
  CHECK(tones(Degree::kV) == std::set<int>{7, 11, 2});

  CHECK(chord_of(Degree::kI).root_pc == 0);
  CHECK(chord_of(Degree::kI).quality == ChordQuality::kMajor);
  CHECK(chord_of(Degree::kii).root_pc == 2);
  CHECK(chord_of(Degree::kii).quality == ChordQuality::kMinor);
  CHECK(chord_of(Degree::kvii0).root_pc == 11);
  CHECK(chord_of(Degree::kvii0).quality == ChordQuality::kDiminished);
}

TEST_CASE("grammar successor sets") {
  const auto g = TransitionGrammar::default_grammar();

  auto successors = [&g](Degree d) {
    std::vector<std::string> names;
    for (Degree s : g.valid_successors(d)) names.emplace_back(degree_name(s));
    return names;
  };
  CHECK(successors(Degree::kV) == std::vector<std::string>{"I", "vi"});
  CHECK(successors(Degree::kvii0) == std::vector<std::string>{"I"});
  CHECK(successors(Degree::kvi) == std::vector<std::string>{"ii", "IV", "V"});
  CHECK(successors(Degree::kI) == std::vector<std::string>{"IV", "V", "vi"});
  CHECK(successors(Degree::kii) == std::vector<std::string>{"I", "IV", "V"});
  CHECK(successors(Degree::kiii) == std::vector<std::string>{"IV", "vi"});
  CHECK(successors(Degree::kIV) == std::vector<std::string>{"I", "V"});

  const int expected_sizes[7] = {3, 3, 2, 2, 2, 3, 1};
  int total = 0;
  for (Degree d : kAllDegrees) {
    const int size = static_cast<int>(g.valid_successors(d).size());
    CHECK(size == expected_sizes[static_cast<int>(d)]);
    total += size;
  }
  CHECK(total == 16);

  CHECK(g.weight(Degree::kI, Degree::kV) == doctest::Approx(0.90));
  CHECK(g.weight(Degree::kvi, Degree::kIV) == doctest::Approx(0.75));
  for (Degree a : kAllDegrees)
    for (Degree b : kAllDegrees) {
      const double w = g.weight(a, b);
      CHECK(w >= 0.0);
      CHECK(w <= 1.0);
    }
}

TEST_CASE("grammar weight overrides keep the zero pattern") {
  auto g = TransitionGrammar::default_grammar();
  g.set_weight(Degree::kI, Degree::kV, 0.5);
  CHECK(g.weight(Degree::kI, Degree::kV) == doctest::Approx(0.5));
  CHECK_THROWS_AS(g.set_weight(Degree::kV, Degree::kIV, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(g.set_weight(Degree::kI, Degree::kV, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(g.set_weight(Degree::kI, Degree::kV, 1.5), std::invalid_argument);
}

TEST_CASE("stability profiles") {
  const auto kk = KKProfile::diatonic_default();
  CHECK(kk.stability(Note{60}) == doctest::Approx(1.00));
  CHECK(kk.stability(Note{64}) == doctest::Approx(0.96));
  CHECK(kk.stability(Note{67}) == doctest::Approx(0.82));
  CHECK(kk.stability(Note{59}) == doctest::Approx(0.75));
  CHECK(kk.stability(Note{69}) == doctest::Approx(0.50));
  CHECK(kk.stability(Note{65}) == doctest::Approx(0.42));
  CHECK(kk.stability(Note{62}) == doctest::Approx(0.35));

  const auto chromatic = KKProfile::chromatic();
  for (int pc = 0; pc < 12; ++pc) {
    CHECK(chromatic.stability_by_pc[pc] > 0.0);
    CHECK(chromatic.stability_by_pc[pc] <= 1.0);
  }
  CHECK(chromatic.stability_by_pc[0] == doctest::Approx(1.0));
}

TEST_CASE("penalty schemes") {
  const auto baseline = PenaltyScheme::baseline();
  CHECK(baseline.base == doctest::Approx(6.0));
  CHECK(baseline.kk_weight == doctest::Approx(1.5));
  CHECK(baseline.alpha_coupling == doctest::Approx(0.4));
  CHECK(baseline.proximity_penalty(0) == doctest::Approx(5.0));
  CHECK(baseline.proximity_penalty(1) == doctest::Approx(0.0));
  CHECK(baseline.proximity_penalty(2) == doctest::Approx(0.0));
  CHECK(baseline.proximity_penalty(3) == doctest::Approx(0.5));
  CHECK(baseline.proximity_penalty(4) == doctest::Approx(0.5));
  CHECK(baseline.proximity_penalty(5) == doctest::Approx(1.2));
  CHECK(baseline.proximity_penalty(6) == doctest::Approx(3.5));
  CHECK(baseline.proximity_penalty(7) == doctest::Approx(0.8));
  CHECK(baseline.proximity_penalty(8) == doctest::Approx(1.8));
  CHECK(baseline.proximity_penalty(9) == doctest::Approx(1.8));
  CHECK(baseline.proximity_penalty(10) == doctest::Approx(2.5));
  CHECK(baseline.proximity_penalty(11) == doctest::Approx(2.5));

  const auto half = PenaltyScheme::half();
  for (int iv = 0; iv <= 11; ++iv)
    CHECK(half.proximity_penalty(iv) == doctest::Approx(0.5 * baseline.proximity_penalty(iv)));
  CHECK(half.base == doctest::Approx(6.0));
  CHECK(half.kk_weight == doctest::Approx(1.5));

  const auto flat = PenaltyScheme::unison_tritone_only();
  CHECK(flat.proximity_penalty(0) == doctest::Approx(5.0));
  CHECK(flat.proximity_penalty(6) == doctest::Approx(3.5));
  for (int iv : {1, 2, 3, 4, 5, 7, 8, 9, 10})
    CHECK(flat.proximity_penalty(iv) == doctest::Approx(1.0));
}

TEST_CASE("degree names round-trip") {
  for (Degree d : kAllDegrees) CHECK(degree_from_name(degree_name(d)) == d);
  CHECK_THROWS_AS(degree_from_name("viii"), std::invalid_argument);
}
