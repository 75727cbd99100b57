#include "qharmony/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qharmony/errors.hpp"

namespace qharmony {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    double d = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" + value + "'");
  }
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("config: key '" + key + "' expects an integer, got '" + value + "'");
  }
}

uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return static_cast<uint64_t>(v);
  } catch (...) {
    throw ConfigError("config: key '" + key + "' expects an unsigned integer, got '" + value + "'");
  }
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& key, const std::string& value, Parse parse) {
  std::vector<T> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("config: key '" + key + "' has an empty list element");
    out.push_back(parse(key, item));
  }
  if (out.empty()) throw ConfigError("config: key '" + key + "' expects a non-empty list");
  return out;
}

}  // namespace

Note note_from_string(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("empty note");
  if (std::isdigit(static_cast<unsigned char>(t[0])))
    return Note{static_cast<int>(parse_long("note", t))};
  static const std::map<std::string, int> kPc = {
      {"C", 0}, {"C#", 1}, {"Db", 1}, {"D", 2}, {"D#", 3}, {"Eb", 3}, {"E", 4},
      {"F", 5}, {"F#", 6}, {"Gb", 6}, {"G", 7}, {"G#", 8}, {"Ab", 8}, {"A", 9},
      {"A#", 10}, {"Bb", 10}, {"B", 11}};
  size_t split = t.find_first_of("-0123456789");
  if (split == std::string::npos || split == 0)
    throw ConfigError("bad note name: '" + text + "'");
  const auto it = kPc.find(t.substr(0, split));
  if (it == kPc.end()) throw ConfigError("bad note name: '" + text + "'");
  const int octave = static_cast<int>(parse_long("note octave", t.substr(split)));
  return Note{(octave + 1) * 12 + it->second};
}

void apply_config_entry(RunConfig& c, const std::string& key, const std::string& value) {
  if (key.rfind("T_", 0) == 0) {
    // Grammar override: T_<from>_<to> = weight, e.g. T_I_V or T_vii0_I.
    const std::string transition = key.substr(2);
    const size_t sep = transition.find('_');
    if (sep == std::string::npos)
      throw ConfigError("config: grammar key must look like T_I_V, got '" + key + "'");
    const std::string from = transition.substr(0, sep);
    const std::string to = transition.substr(sep + 1);
    try {
      degree_from_name(from);
      degree_from_name(to);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
    c.grammar_overrides[from + ">" + to] = parse_double(key, value);
    return;
  }
  if (key.rfind("kk_pc_", 0) == 0) {
    // Stability override per pitch class: kk_pc_<0..11> = value.
    const long pc = parse_long(key, key.substr(6));
    if (pc < 0 || pc > 11) throw ConfigError("config: kk_pc_ index must lie in 0..11");
    c.kk_overrides[static_cast<int>(pc)] = parse_double(key, value);
    return;
  }

  if (key == "notes")
    c.notes = parse_list<int>(key, value, [](const std::string& k, const std::string& v) {
      return static_cast<int>(parse_long(k, v));
    });
  else if (key == "scheme") c.scheme = value;
  else if (key == "base") c.base = parse_double(key, value);
  else if (key == "kk_weight") c.kk_weight = parse_double(key, value);
  else if (key == "alpha_coupling") c.alpha_coupling = parse_double(key, value);
  else if (key == "prox_scale") c.prox_scale = parse_double(key, value);
  else if (key == "kk_profile") c.kk_profile = value;
  else if (key == "K") c.K = static_cast<int>(parse_long(key, value));
  else if (key == "hhl_mode") c.hhl_mode = value;
  else if (key == "m_clock") c.m_clock = static_cast<int>(parse_long(key, value));
  else if (key == "n_samples") c.n_samples = parse_long(key, value);
  else if (key == "n_blocks") c.n_blocks = static_cast<int>(parse_long(key, value));
  else if (key == "variant") c.variant = value;
  else if (key == "noise_alpha") c.noise_alpha = parse_double(key, value);
  else if (key == "seed") c.seed = parse_u64(key, value);
  else if (key == "out_dir") c.out_dir = value;
  else if (key == "context_note") c.context_note = value;
  else if (key == "context_chord") c.context_chord = value;
  else if (key == "iii_function") c.iii_function = value;
  else if (key == "mc_samples") c.mc_samples = static_cast<int>(parse_long(key, value));
  else if (key == "mc_base_min") c.mc_base_min = parse_double(key, value);
  else if (key == "mc_base_max") c.mc_base_max = parse_double(key, value);
  else if (key == "mc_prox_min") c.mc_prox_min = parse_double(key, value);
  else if (key == "mc_prox_max") c.mc_prox_max = parse_double(key, value);
  else if (key == "mc_kk_min") c.mc_kk_min = parse_double(key, value);
  else if (key == "mc_kk_max") c.mc_kk_max = parse_double(key, value);
  else if (key == "chromatic_sizes")
    c.chromatic_sizes = parse_list<int>(key, value, [](const std::string& k, const std::string& v) {
      return static_cast<int>(parse_long(k, v));
    });
  else if (key == "k_values")
    c.k_values = parse_list<int>(key, value, [](const std::string& k, const std::string& v) {
      return static_cast<int>(parse_long(k, v));
    });
  else if (key == "k_trials") c.k_trials = static_cast<int>(parse_long(key, value));
  else if (key == "k_sweep_samples") c.k_sweep_samples = parse_long(key, value);
  else if (key == "noise_grid")
    c.noise_grid = parse_list<double>(key, value, parse_double);
  else if (key == "ablation_samples") c.ablation_samples = parse_long(key, value);
  else if (key == "ablation_note") c.ablation_note = value;
  else if (key == "ablation_chord") c.ablation_chord = value;
  else if (key == "coverage_samples") c.coverage_samples = parse_long(key, value);
  else
    throw ConfigError("config: unknown key '" + key + "'");
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  RunConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(line_no) + " is not key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config: line " + std::to_string(line_no) + " has an empty key or value");
    apply_config_entry(config, key, value);
  }
  validate(config);
  return config;
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& what) { throw ConfigError("config: " + what); };
  if (c.notes.empty()) fail("note set is empty");
  for (int midi : c.notes)
    if (midi < 0 || midi > 127) fail("note out of MIDI range: " + std::to_string(midi));
  if (c.scheme != "baseline" && c.scheme != "half" && c.scheme != "unison_tritone_only")
    fail("unknown scheme '" + c.scheme + "'");
  if (c.kk_profile != "diatonic" && c.kk_profile != "chromatic")
    fail("kk_profile must be diatonic or chromatic");
  if (c.K < 1 || c.K > 12) fail("K must lie in 1..12");
  if (c.hhl_mode != "exact" && c.hhl_mode != "binned") fail("hhl_mode must be exact or binned");
  if (c.m_clock < 1 || c.m_clock > 16) fail("m_clock must lie in 1..16");
  if (c.n_samples < 1) fail("n_samples must be >= 1");
  if (c.n_blocks < 1) fail("n_blocks must be >= 1");
  if (c.variant != "full" && c.variant != "melody_only" && c.variant != "harmony_only" &&
      c.variant != "unconditioned")
    fail("unknown variant '" + c.variant + "'");
  if (c.noise_alpha < 0.0 || c.noise_alpha > 1.0) fail("noise_alpha must lie in [0, 1]");
  if (c.iii_function != "tonic" && c.iii_function != "subdominant" &&
      c.iii_function != "dominant")
    fail("iii_function must be tonic, subdominant, or dominant");
  if (c.base && *c.base <= 0.0) fail("base must be positive");
  if (c.prox_scale && *c.prox_scale < 0.0) fail("prox_scale must be non-negative");
  if (c.kk_weight && *c.kk_weight < 0.0) fail("kk_weight must be non-negative");
  if (c.alpha_coupling && *c.alpha_coupling < 0.0) fail("alpha_coupling must be non-negative");
  if (c.mc_samples < 1) fail("mc_samples must be >= 1");
  if (c.k_trials < 1) fail("k_trials must be >= 1");
  if (c.k_sweep_samples < 1) fail("k_sweep_samples must be >= 1");
  if (c.ablation_samples < 1) fail("ablation_samples must be >= 1");
  if (c.coverage_samples < 1) fail("coverage_samples must be >= 1");
  for (int k : c.k_values)
    if (k < 1 || k > 12) fail("k_values entries must lie in 1..12");
  for (double a : c.noise_grid)
    if (a < 0.0 || a > 1.0) fail("noise_grid entries must lie in [0, 1]");
  for (int n : c.chromatic_sizes)
    if (n < 1 || n > 48) fail("chromatic_sizes entries must lie in 1..48");
  for (const auto& [pc, value] : c.kk_overrides) {
    (void)pc;
    if (!(value > 0.0 && value <= 1.0)) fail("kk_pc_ stability values must lie in (0, 1]");
  }
  for (const auto& [key, w] : c.grammar_overrides) {
    if (!(w > 0.0 && w <= 1.0)) fail("grammar weight for " + key + " must lie in (0, 1]");
    const size_t sep = key.find('>');
    const Degree from = degree_from_name(key.substr(0, sep));
    const Degree to = degree_from_name(key.substr(sep + 1));
    if (!TransitionGrammar::default_grammar().allowed(from, to))
      fail("transition " + key + " is not in the grammar");
  }
}

std::vector<Note> notes_from(const RunConfig& c) {
  std::vector<Note> notes;
  notes.reserve(c.notes.size());
  for (int midi : c.notes) notes.push_back(Note{midi});
  return notes;
}

PenaltyScheme scheme_from(const RunConfig& c) {
  PenaltyScheme s = PenaltyScheme::for_scheme(scheme_from_name(c.scheme));
  if (c.base) s.base = *c.base;
  if (c.kk_weight) s.kk_weight = *c.kk_weight;
  if (c.alpha_coupling) s.alpha_coupling = *c.alpha_coupling;
  if (c.prox_scale) s.prox_scale = *c.prox_scale;
  return s;
}

KKProfile kk_from(const RunConfig& c) {
  KKProfile profile =
      c.kk_profile == "chromatic" ? KKProfile::chromatic() : KKProfile::diatonic_default();
  for (const auto& [pc, value] : c.kk_overrides) profile.stability_by_pc[pc] = value;
  return profile;
}

TransitionGrammar grammar_from(const RunConfig& c) {
  TransitionGrammar g = TransitionGrammar::default_grammar();
  for (const auto& [key, weight] : c.grammar_overrides) {
    const size_t sep = key.find('>');
    try {
      g.set_weight(degree_from_name(key.substr(0, sep)), degree_from_name(key.substr(sep + 1)),
                   weight);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  return g;
}

HhlMode hhl_mode_from(const RunConfig& c) {
  return c.hhl_mode == "binned" ? HhlMode::binned(c.m_clock) : HhlMode::exact();
}

std::optional<ChainContext> context_from(const RunConfig& c) {
  if (c.context_note.empty() && c.context_chord.empty()) return std::nullopt;
  if (c.context_note.empty() || c.context_chord.empty())
    throw ConfigError("config: context_note and context_chord must be given together");
  try {
    return ChainContext{note_from_string(c.context_note), degree_from_name(c.context_chord)};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

AblationVariant variant_from(const RunConfig& c) {
  try {
    return variant_from_name(c.variant);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

HarmonicFunction iii_function_from(const RunConfig& c) {
  if (c.iii_function == "subdominant") return HarmonicFunction::kSubdominant;
  if (c.iii_function == "dominant") return HarmonicFunction::kDominant;
  return HarmonicFunction::kTonic;
}

Pipeline pipeline_from(const RunConfig& c) {
  return Pipeline(notes_from(c), scheme_from(c), kk_from(c), grammar_from(c), c.K,
                  hhl_mode_from(c));
}

std::optional<uint64_t> resolve_seed(const RunConfig& config, std::optional<uint64_t> cli_seed) {
  if (cli_seed) return cli_seed;
  if (config.seed) return config.seed;
  if (const char* env = std::getenv("QHARMONY_SEED")) {
    return parse_u64("QHARMONY_SEED", env);
  }
  return std::nullopt;
}

}  // namespace qharmony
