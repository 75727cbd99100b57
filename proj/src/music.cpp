#include "qharmony/music.hpp"

#include <cmath>
#include <stdexcept>

namespace qharmony {

std::vector<Note> default_note_set() {
  return {Note{59}, Note{60}, Note{62}, Note{64}, Note{65}, Note{67}, Note{69}};
}

std::vector<Note> chromatic_note_set(int count, int start_midi) {
  if (count < 1) throw std::invalid_argument("chromatic_note_set: count must be >= 1");
  std::vector<Note> notes;
  notes.reserve(count);
  for (int i = 0; i < count; ++i) notes.push_back(Note{start_midi + i});
  return notes;
}

std::string note_name(Note n) {
  static const char* kNames[12] = {"C",  "C#", "D",  "D#", "E",  "F",
                                   "F#", "G",  "G#", "A",  "A#", "B"};
  int octave = n.midi / 12 - 1;
  return std::string(kNames[n.pitch_class()]) + std::to_string(octave);
}

IntervalCategory interval_category(int semitones) {
  if (semitones < 0) throw std::invalid_argument("interval_category: negative interval");
  if (semitones == 0) return IntervalCategory::kUnison;
  if (semitones <= 2) return IntervalCategory::kStep;
  if (semitones <= 5) return IntervalCategory::kSkip;
  return IntervalCategory::kLeap;
}

std::string_view to_string(IntervalCategory c) {
  switch (c) {
    case IntervalCategory::kUnison: return "unison";
    case IntervalCategory::kStep: return "step";
    case IntervalCategory::kSkip: return "skip";
    case IntervalCategory::kLeap: return "leap";
  }
  return "?";
}

PairTable PairTable::over(std::vector<Note> notes) {
  PairTable table;
  table.notes = std::move(notes);
  const int n = static_cast<int>(table.notes.size());
  table.pairs.reserve(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      table.pairs.push_back(NotePair{table.notes[a], table.notes[b], a * n + b});
  return table;
}

std::string_view degree_name(Degree d) {
  static const char* kNames[7] = {"I", "ii", "iii", "IV", "V", "vi", "vii0"};
  return kNames[static_cast<int>(d)];
}

Degree degree_from_name(std::string_view name) {
  for (Degree d : kAllDegrees)
    if (degree_name(d) == name) return d;
  throw std::invalid_argument("unknown chord degree: " + std::string(name));
}

Chord chord_of(Degree d) {
  switch (d) {
    case Degree::kI: return {d, 0, ChordQuality::kMajor};
    case Degree::kii: return {d, 2, ChordQuality::kMinor};
    case Degree::kiii: return {d, 4, ChordQuality::kMinor};
    case Degree::kIV: return {d, 5, ChordQuality::kMajor};
    case Degree::kV: return {d, 7, ChordQuality::kMajor};
    case Degree::kvi: return {d, 9, ChordQuality::kMinor};
    case Degree::kvii0: return {d, 11, ChordQuality::kDiminished};
  }
  throw std::invalid_argument("chord_of: bad degree");
}

std::array<int, 3> chord_tones(const Chord& c) {
  int third = c.quality == ChordQuality::kMajor ? 4 : 3;
  int fifth = c.quality == ChordQuality::kDiminished ? 6 : 7;
  return {c.root_pc % 12, (c.root_pc + third) % 12, (c.root_pc + fifth) % 12};
}

TransitionGrammar TransitionGrammar::default_grammar() {
  TransitionGrammar g;
  auto set = [&g](Degree from, Degree to, double w) {
    g.t_(static_cast<int>(from), static_cast<int>(to)) = w;
  };
  using enum Degree;
  set(kI, kIV, 0.60);
  set(kI, kV, 0.90);
  set(kI, kvi, 0.25);
  set(kii, kI, 0.50);
  set(kii, kIV, 0.20);
  set(kii, kV, 0.80);
  set(kiii, kIV, 0.70);
  set(kiii, kvi, 0.30);
  set(kIV, kI, 0.80);
  set(kIV, kV, 0.70);
  set(kV, kI, 0.95);
  set(kV, kvi, 0.40);
  set(kvi, kii, 0.45);
  set(kvi, kIV, 0.75);
  set(kvi, kV, 0.65);
  set(kvii0, kI, 1.00);
  return g;
}

void TransitionGrammar::set_weight(Degree from, Degree to, double w) {
  double& cell = t_(static_cast<int>(from), static_cast<int>(to));
  if (cell == 0.0)
    throw std::invalid_argument(std::string("transition ") + std::string(degree_name(from)) +
                                "->" + std::string(degree_name(to)) + " is not in the grammar");
  if (!(w > 0.0 && w <= 1.0))
    throw std::invalid_argument("transition weight must lie in (0, 1]");
  cell = w;
}

std::vector<Degree> TransitionGrammar::valid_successors(Degree from) const {
  std::vector<Degree> out;
  for (Degree to : kAllDegrees)
    if (allowed(from, to)) out.push_back(to);
  return out;
}

KKProfile KKProfile::diatonic_default() {
  KKProfile p = chromatic();
  p.stability_by_pc[0] = 1.00;   // C
  p.stability_by_pc[2] = 0.35;   // D
  p.stability_by_pc[4] = 0.96;   // E
  p.stability_by_pc[5] = 0.42;   // F
  p.stability_by_pc[7] = 0.82;   // G
  p.stability_by_pc[9] = 0.50;   // A
  p.stability_by_pc[11] = 0.75;  // B
  return p;
}

KKProfile KKProfile::chromatic() {
  // C-major probe-tone ratings 6.35, 2.23, 3.48, 2.33, 4.38, 4.09, 2.52,
  // 5.19, 2.39, 3.66, 2.29, 2.88, scaled so C = 1.
  KKProfile p;
  const double raw[12] = {6.35, 2.23, 3.48, 2.33, 4.38, 4.09,
                          2.52, 5.19, 2.39, 3.66, 2.29, 2.88};
  for (int pc = 0; pc < 12; ++pc) p.stability_by_pc[pc] = raw[pc] / raw[0];
  return p;
}

std::string_view to_string(SchemeId id) {
  switch (id) {
    case SchemeId::kBaseline: return "baseline";
    case SchemeId::kHalf: return "half";
    case SchemeId::kUnisonTritoneOnly: return "unison_tritone_only";
  }
  return "?";
}

SchemeId scheme_from_name(std::string_view name) {
  if (name == "baseline") return SchemeId::kBaseline;
  if (name == "half") return SchemeId::kHalf;
  if (name == "unison_tritone_only") return SchemeId::kUnisonTritoneOnly;
  throw std::invalid_argument("unknown penalty scheme: " + std::string(name));
}

double PenaltyScheme::proximity_penalty(int semitones) const {
  double p;
  if (semitones == 0) p = prox_unison;
  else if (semitones <= 2) p = prox_step;
  else if (semitones <= 4) p = prox_skip;
  else if (semitones == 5) p = prox_fourth;
  else if (semitones == 6) p = prox_tritone;
  else if (semitones == 7) p = prox_fifth;
  else if (semitones <= 9) p = prox_sixth;
  else p = prox_seventh_plus;
  return prox_scale * p;
}

PenaltyScheme PenaltyScheme::baseline() { return PenaltyScheme{}; }

PenaltyScheme PenaltyScheme::half() {
  PenaltyScheme s;
  s.prox_scale = 0.5;
  s.scheme_id = SchemeId::kHalf;
  return s;
}

PenaltyScheme PenaltyScheme::unison_tritone_only() {
  PenaltyScheme s;
  s.prox_step = 1.0;
  s.prox_skip = 1.0;
  s.prox_fourth = 1.0;
  s.prox_fifth = 1.0;
  s.prox_sixth = 1.0;
  s.prox_seventh_plus = 1.0;
  s.scheme_id = SchemeId::kUnisonTritoneOnly;
  return s;
}

PenaltyScheme PenaltyScheme::for_scheme(SchemeId id) {
  switch (id) {
    case SchemeId::kBaseline: return baseline();
    case SchemeId::kHalf: return half();
    case SchemeId::kUnisonTritoneOnly: return unison_tritone_only();
  }
  throw std::invalid_argument("for_scheme: bad scheme id");
}

}  // namespace qharmony
