#include "qharmony/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qharmony/errors.hpp"

namespace qharmony::io {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write to '" + path + "'");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return in;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

double field_double(const std::string& s) {
  size_t used = 0;
  double v = std::stod(s, &used);
  if (used != s.size()) throw ConfigError("bad numeric field '" + s + "'");
  return v;
}

int field_int(const std::string& s) {
  size_t used = 0;
  int v = std::stoi(s, &used);
  if (used != s.size()) throw ConfigError("bad integer field '" + s + "'");
  return v;
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_matrix_csv(const std::string& path, const PreferenceMatrix& matrix) {
  auto out = open_out(path);
  for (int i = 0; i < matrix.dim_padded; ++i) {
    for (int j = 0; j < matrix.dim_padded; ++j) {
      if (j) out << ',';
      out << format_double(matrix.entries(i, j));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& f : split_line(line)) row.push_back(field_double(f));
    if (!rows.empty() && row.size() != rows.front().size())
      throw ConfigError("matrix csv: ragged rows in '" + path + "'");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("matrix csv: empty file '" + path + "'");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

void write_distribution_csv(const std::string& path, const Eigen::VectorXd& p,
                            const PairTable& pairs) {
  auto out = open_out(path);
  out << "pair_index,n1_midi,n2_midi,probability\n";
  for (int i = 0; i < pairs.size(); ++i) {
    const NotePair& pair = pairs.at(i);
    out << i << ',' << pair.first.midi << ',' << pair.second.midi << ','
        << format_double(p(i)) << '\n';
  }
}

Eigen::VectorXd read_distribution_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("distribution csv: empty file");
  std::vector<double> probs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != 4) throw ConfigError("distribution csv: expected 4 fields");
    probs.push_back(field_double(fields[3]));
  }
  Eigen::VectorXd p(probs.size());
  for (size_t i = 0; i < probs.size(); ++i) p(i) = probs[i];
  return p;
}

void write_joint_csv(const std::string& path, const JointDistribution& joint,
                     const PairTable& pairs) {
  if (joint.probs.rows() != pairs.size())
    throw std::invalid_argument("write_joint_csv: pair table does not match distribution");
  auto out = open_out(path);
  out << "pair_index,c1_degree,c2_degree,probability\n";
  for (Eigen::Index i = 0; i < joint.probs.rows(); ++i) {
    for (Eigen::Index c = 0; c < joint.probs.cols(); ++c) {
      if (joint.probs(i, c) <= 0.0) continue;
      out << i << ',' << degree_name(static_cast<Degree>(c / 8)) << ','
          << degree_name(static_cast<Degree>(c % 8)) << ','
          << format_double(joint.probs(i, c)) << '\n';
    }
  }
}

Eigen::MatrixXd read_joint_csv(const std::string& path, int n_pairs) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("joint csv: empty file");
  Eigen::MatrixXd probs = Eigen::MatrixXd::Zero(n_pairs, kChordStates);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != 4) throw ConfigError("joint csv: expected 4 fields");
    const int pair = field_int(fields[0]);
    if (pair < 0 || pair >= n_pairs) throw ConfigError("joint csv: pair index out of range");
    probs(pair, chord_state(degree_from_name(fields[1]), degree_from_name(fields[2]))) =
        field_double(fields[3]);
  }
  return probs;
}

namespace {
const char* kQualityNames[3] = {"major", "minor", "diminished"};
}

void write_fit_table_csv(const std::string& path, const FitTable& fits) {
  auto out = open_out(path);
  out << "quality,pc_interval,fit\n";
  for (int q = 0; q < 3; ++q)
    for (int l = 0; l < 12; ++l)
      out << kQualityNames[q] << ',' << l << ','
          << format_double(fits.value(static_cast<ChordQuality>(q), l)) << '\n';
}

Eigen::Matrix<double, 3, 12> read_fit_table_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("fit table csv: empty file");
  Eigen::Matrix<double, 3, 12> values = Eigen::Matrix<double, 3, 12>::Zero();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != 3) throw ConfigError("fit table csv: expected 3 fields");
    int quality = -1;
    for (int q = 0; q < 3; ++q)
      if (fields[0] == kQualityNames[q]) quality = q;
    if (quality < 0) throw ConfigError("fit table csv: unknown quality '" + fields[0] + "'");
    const int interval = field_int(fields[1]);
    if (interval < 0 || interval > 11) throw ConfigError("fit table csv: bad pc interval");
    values(quality, interval) = field_double(fields[2]);
  }
  return values;
}

void write_events_csv(const std::string& path, const ChainResult& chain,
                      const PairTable& pairs) {
  auto out = open_out(path);
  out << "block,position,midi,chord_degree,junction_valid\n";
  for (size_t k = 0; k < chain.blocks.size(); ++k) {
    const BlockSample& block = chain.blocks[k];
    const NotePair& pair = pairs.at(block.pair_index);
    const bool junction = k == 0 ? true : chain.junction_valid[k - 1];
    out << k + 1 << ",1," << pair.first.midi << ',' << degree_name(block.c1) << ','
        << (junction ? 1 : 0) << '\n';
    out << k + 1 << ",2," << pair.second.midi << ',' << degree_name(block.c2) << ",1\n";
  }
}

std::vector<NoteEvent> read_events_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("events csv: empty file");
  std::vector<NoteEvent> events;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != 5) throw ConfigError("events csv: expected 5 fields");
    NoteEvent e;
    e.block = field_int(fields[0]);
    e.position = field_int(fields[1]);
    e.midi = field_int(fields[2]);
    e.chord = degree_from_name(fields[3]);
    e.junction_valid = field_int(fields[4]) != 0;
    events.push_back(e);
  }
  return events;
}

void write_samples_csv(const std::string& path, const std::vector<BlockSample>& samples,
                       const PairTable& pairs) {
  auto out = open_out(path);
  out << "index,n1_midi,n2_midi,c1_degree,c2_degree\n";
  for (size_t k = 0; k < samples.size(); ++k) {
    const NotePair& pair = pairs.at(samples[k].pair_index);
    out << k << ',' << pair.first.midi << ',' << pair.second.midi << ','
        << degree_name(samples[k].c1) << ',' << degree_name(samples[k].c2) << '\n';
  }
}

std::vector<SampleRow> read_samples_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("samples csv: empty file");
  std::vector<SampleRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != 5) throw ConfigError("samples csv: expected 5 fields");
    SampleRow row;
    row.n1_midi = field_int(fields[1]);
    row.n2_midi = field_int(fields[2]);
    row.c1 = degree_from_name(fields[3]);
    row.c2 = degree_from_name(fields[4]);
    rows.push_back(row);
  }
  return rows;
}

void write_json(const std::string& path, const nlohmann::json& payload) {
  auto out = open_out(path);
  out << payload.dump(2) << '\n';
}

nlohmann::json read_json(const std::string& path) {
  auto in = open_in(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad json in '" + path + "': " + e.what());
  }
  return j;
}

void write_text(const std::string& path, const std::string& content) {
  auto out = open_out(path);
  out << content;
}

}  // namespace qharmony::io
