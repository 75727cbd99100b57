#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "qharmony/analysis.hpp"
#include "qharmony/generator.hpp"
#include "qharmony/hhl.hpp"
#include "qharmony/music.hpp"
#include "qharmony/oracle.hpp"
#include "qharmony/prefmatrix.hpp"

namespace qharmony::io {

/// Shortest exact decimal form of a double (17 significant digits round-trip).
std::string format_double(double value);

// Matrix dump/load: raw comma-separated rows, full padded matrix, no header.
void write_matrix_csv(const std::string& path, const PreferenceMatrix& matrix);
Eigen::MatrixXd read_matrix_csv(const std::string& path);

// Pair distribution: pair_index,n1_midi,n2_midi,probability.
void write_distribution_csv(const std::string& path, const Eigen::VectorXd& p,
                            const PairTable& pairs);
Eigen::VectorXd read_distribution_csv(const std::string& path);

// Joint distribution: pair_index,c1_degree,c2_degree,probability
// (grammar-supported states only, canonical order).
void write_joint_csv(const std::string& path, const JointDistribution& joint,
                     const PairTable& pairs);
Eigen::MatrixXd read_joint_csv(const std::string& path, int n_pairs);

// Fit table: quality,pc_interval,fit.
void write_fit_table_csv(const std::string& path, const FitTable& fits);
Eigen::Matrix<double, 3, 12> read_fit_table_csv(const std::string& path);

// Note events: block,position,midi,chord_degree,junction_valid.
void write_events_csv(const std::string& path, const ChainResult& chain, const PairTable& pairs);

struct NoteEvent {
  int block = 0;
  int position = 0;  // 1 or 2
  int midi = 0;
  Degree chord = Degree::kI;
  bool junction_valid = true;
};
std::vector<NoteEvent> read_events_csv(const std::string& path);

// Sampled blocks: index,n1_midi,n2_midi,c1_degree,c2_degree.
void write_samples_csv(const std::string& path, const std::vector<BlockSample>& samples,
                       const PairTable& pairs);
struct SampleRow {
  int n1_midi = 0, n2_midi = 0;
  Degree c1 = Degree::kI, c2 = Degree::kI;
};
std::vector<SampleRow> read_samples_csv(const std::string& path);

void write_json(const std::string& path, const nlohmann::json& payload);
nlohmann::json read_json(const std::string& path);

void write_text(const std::string& path, const std::string& content);

}  // namespace qharmony::io
