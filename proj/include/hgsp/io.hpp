#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "hgsp/diffusion.hpp"
#include "hgsp/henn.hpp"
#include "hgsp/randgraph.hpp"
#include "hgsp/spectral.hpp"
#include "hgsp/train.hpp"

namespace hgsp::io {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Hypergraph text format: first line "n m", then one line per hyperedge
// "w k i_1 ... i_k". Blank lines and lines starting with '#' are skipped.
void write_hypergraph(std::ostream& os, const Hypergraph& h);
Hypergraph read_hypergraph(std::istream& is);
void save_hypergraph(const fs::path& p, const Hypergraph& h);
Hypergraph load_hypergraph(const fs::path& p);

/// Comma-separated dense matrix, one row per line.
Matrix read_matrix_csv(std::istream& is);
Matrix load_matrix_csv(const fs::path& p);
void write_matrix_csv(std::ostream& os, const Matrix& m);

// Dataset format: "key=value" header lines (n, m, n_train, n_test, seed,
// t_max, noise_sd, step_size, sources), a line "data", then one record per
// sample "label,time,x_0,...,x_{n-1}". Train samples come first. Values use
// 17 significant digits so the round trip is exact.
void write_dataset(std::ostream& os, const LabeledDataset& d);
LabeledDataset read_dataset(std::istream& is);
void save_dataset(const fs::path& p, const LabeledDataset& d);
LabeledDataset load_dataset(const fs::path& p);

Json to_json(const GnnModel& m);
GnnModel gnn_from_json(const Json& j);
Json to_json(const HennModel& m);
HennModel henn_from_json(const Json& j);

Json to_json(const SimilarityReport& r);
Json to_json(const ArchitectureResult& r);
Json to_json(const SimilarityDecayStudy& s);

void write_training_log(std::ostream& os, const std::vector<LogRow>& rows);
/// Columns n, trial, epsilon, min_nonzero_eig.
void write_decay_csv(std::ostream& os, const SimilarityDecayStudy& s);
/// Log-log plot of mean epsilon against n with +-sd whiskers.
std::string decay_svg(const SimilarityDecayStudy& s);

/// %.17g; parses back to the same double.
std::string format_double(double x);

void write_text(const fs::path& p, const std::string& text);
std::string read_text(const fs::path& p);

}  // namespace hgsp::io
