#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace qharmony {

/// A single pitch, identified by its MIDI number.
struct Note {
  int midi = 0;

  int pitch_class() const { return ((midi % 12) + 12) % 12; }

  friend bool operator==(const Note& a, const Note& b) { return a.midi == b.midi; }
  friend bool operator!=(const Note& a, const Note& b) { return a.midi != b.midi; }
};

/// The seven diatonic candidates B3..A4 (MIDI 59-69).
std::vector<Note> default_note_set();

/// `count` consecutive semitones starting at `start_midi`, for scaling sweeps.
std::vector<Note> chromatic_note_set(int count, int start_midi = 48);

/// Note name like "C4" for the C-major pitch classes, "C#4" style otherwise.
std::string note_name(Note n);

enum class IntervalCategory { kUnison, kStep, kSkip, kLeap };

/// 0 -> unison, 1-2 -> step, 3-5 -> skip, >=6 -> leap.
IntervalCategory interval_category(int semitones);

std::string_view to_string(IntervalCategory c);

/// Ordered note pair: the basis state of the melodic register.
struct NotePair {
  Note first;
  Note second;
  int index = 0;  // row-major over the note set

  int interval() const { return std::abs(first.midi - second.midi); }
  IntervalCategory category() const { return interval_category(interval()); }
};

/// All ordered pairs over a note set, indexed row-major:
/// index(a, b) = a * notes.size() + b.
struct PairTable {
  std::vector<Note> notes;
  std::vector<NotePair> pairs;

  static PairTable over(std::vector<Note> notes);

  int size() const { return static_cast<int>(pairs.size()); }
  const NotePair& at(int index) const { return pairs.at(index); }
};

// ---------------------------------------------------------------------------
// Chords and grammar
// ---------------------------------------------------------------------------

enum class Degree : int { kI = 0, kii, kiii, kIV, kV, kvi, kvii0 };
inline constexpr int kDegreeCount = 7;
inline constexpr std::array<Degree, 7> kAllDegrees = {
    Degree::kI, Degree::kii, Degree::kiii, Degree::kIV,
    Degree::kV, Degree::kvi, Degree::kvii0};

enum class ChordQuality { kMajor, kMinor, kDiminished };

std::string_view degree_name(Degree d);   // "I", "ii", ..., "vii0"
Degree degree_from_name(std::string_view name);  // throws on unknown name

/// A diatonic triad in C major.
struct Chord {
  Degree degree = Degree::kI;
  int root_pc = 0;
  ChordQuality quality = ChordQuality::kMajor;
};

/// The fixed C-major mapping: I=(0,maj), ii=(2,min), iii=(4,min), IV=(5,maj),
/// V=(7,maj), vi=(9,min), vii0=(11,dim).
Chord chord_of(Degree d);

/// Pitch classes of the triad: root + {0,4,7} / {0,3,7} / {0,3,6} mod 12.
std::array<int, 3> chord_tones(const Chord& c);

/// Weighted successor relation over the seven triads.  The zero pattern is
/// fixed (16 valid transitions); weights are configurable in (0, 1].
class TransitionGrammar {
 public:
  static TransitionGrammar default_grammar();

  double weight(Degree from, Degree to) const {
    return t_(static_cast<int>(from), static_cast<int>(to));
  }
  bool allowed(Degree from, Degree to) const { return weight(from, to) > 0.0; }

  /// Overwrite a weight.  Throws std::invalid_argument if (from, to) is not a
  /// valid transition or the weight falls outside (0, 1].
  void set_weight(Degree from, Degree to, double w);

  /// Valid successors of `from`, in degree order.
  std::vector<Degree> valid_successors(Degree from) const;

  const Eigen::Matrix<double, 7, 7>& matrix() const { return t_; }

 private:
  TransitionGrammar() { t_.setZero(); }
  Eigen::Matrix<double, 7, 7> t_;
};

// ---------------------------------------------------------------------------
// Tonal stability and penalty schemes
// ---------------------------------------------------------------------------

/// Probe-tone stability ratings per pitch class, normalised so C = 1.
struct KKProfile {
  std::array<double, 12> stability_by_pc{};

  double stability(Note n) const { return stability_by_pc[n.pitch_class()]; }

  /// C-major diatonic ratings: C 1.0, E .96, G .82, B .75, A .50, F .42, D .35.
  /// Non-diatonic pitch classes carry the chromatic extension values so the
  /// profile is total.
  static KKProfile diatonic_default();

  /// Full 12-tone probe-tone profile scaled to C = 1, for chromatic sweeps.
  static KKProfile chromatic();
};

enum class SchemeId { kBaseline, kHalf, kUnisonTritoneOnly };

std::string_view to_string(SchemeId id);
SchemeId scheme_from_name(std::string_view name);

/// Diagonal/off-diagonal penalty coefficients of the preference matrix.
struct PenaltyScheme {
  double base = 6.0;
  // Proximity penalty by melodic interval class.
  double prox_unison = 5.0;
  double prox_step = 0.0;        // 1-2 st
  double prox_skip = 0.5;        // 3-4 st
  double prox_fourth = 1.2;      // 5 st
  double prox_tritone = 3.5;     // 6 st
  double prox_fifth = 0.8;       // 7 st
  double prox_sixth = 1.8;       // 8-9 st
  double prox_seventh_plus = 2.5;  // >= 10 st
  double prox_scale = 1.0;
  double kk_weight = 1.5;
  double alpha_coupling = 0.4;
  SchemeId scheme_id = SchemeId::kBaseline;

  /// prox_scale times the table entry for an unsigned semitone interval.
  double proximity_penalty(int semitones) const;

  static PenaltyScheme baseline();
  /// Interval penalty table halved; anchor and couplings unchanged.
  static PenaltyScheme half();
  /// Every interval class at 1.0 except unison (5.0) and tritone (3.5).
  static PenaltyScheme unison_tritone_only();
  static PenaltyScheme for_scheme(SchemeId id);
};

}  // namespace qharmony
