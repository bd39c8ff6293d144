#include "hgsp/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hgsp::io {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

[[noreturn]] void parse_error(const std::string& what, std::size_t line) {
  fail(ErrorKind::invalid_argument, what + " (line " + std::to_string(line) + ")");
}

bool skippable(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

double parse_number(const std::string& token, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) parse_error("malformed number '" + token + "'", line);
    return v;
  } catch (const std::logic_error&) {
    parse_error("malformed number '" + token + "'", line);
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    while (!cur.empty() && (cur.back() == '\r' || cur.back() == ' ')) cur.pop_back();
    const auto first = cur.find_first_not_of(' ');
    out.push_back(first == std::string::npos ? std::string() : cur.substr(first));
  }
  return out;
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream f(p);
  if (!f) fail(ErrorKind::invalid_argument, "cannot open " + p.string());
  return f;
}

Json epsilon_json(double x) { return std::isfinite(x) ? Json(x) : Json("inf"); }

}  // namespace

void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) fail(ErrorKind::invalid_argument, "cannot write " + p.string());
  f << text;
}

std::string read_text(const fs::path& p) {
  std::ifstream f = open_in(p);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_hypergraph(std::ostream& os, const Hypergraph& h) {
  os << h.num_nodes() << ' ' << h.num_edges() << '\n';
  for (std::size_t j = 0; j < h.num_edges(); ++j) {
    os << format_double(h.weights()[j]) << ' ' << h.edge(j).size();
    for (std::size_t i : h.edge(j)) os << ' ' << i;
    os << '\n';
  }
}

Hypergraph read_hypergraph(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  long long n = -1, m = -1;
  std::vector<NodeSet> edges;
  std::vector<double> weights;
  while (std::getline(is, line)) {
    ++lineno;
    if (skippable(line)) continue;
    std::istringstream ls(line);
    if (n < 0) {
      if (!(ls >> n >> m) || n < 0 || m < 0) parse_error("expected header 'n m'", lineno);
      continue;
    }
    std::string wtok;
    long long k = 0;
    if (!(ls >> wtok >> k) || k < 0) parse_error("expected 'w k i_1 ... i_k'", lineno);
    NodeSet e;
    for (long long a = 0; a < k; ++a) {
      long long i = 0;
      if (!(ls >> i)) parse_error("hyperedge lists fewer than k nodes", lineno);
      if (i < 0 || i >= n) parse_error("node index " + std::to_string(i) + " out of range", lineno);
      e.push_back(static_cast<std::size_t>(i));
    }
    std::string extra;
    if (ls >> extra) parse_error("hyperedge lists more than k nodes", lineno);
    weights.push_back(parse_number(wtok, lineno));
    edges.push_back(std::move(e));
  }
  if (n < 0) fail(ErrorKind::invalid_argument, "hypergraph file has no header");
  if (static_cast<long long>(edges.size()) != m)
    fail(ErrorKind::invalid_argument, "header announces " + std::to_string(m) + " hyperedges, found " +
                                          std::to_string(edges.size()));
  return Hypergraph(static_cast<std::size_t>(n), std::move(edges), std::move(weights));
}

void save_hypergraph(const fs::path& p, const Hypergraph& h) {
  std::ostringstream os;
  write_hypergraph(os, h);
  write_text(p, os.str());
}

Hypergraph load_hypergraph(const fs::path& p) {
  std::ifstream f = open_in(p);
  return read_hypergraph(f);
}

Matrix read_matrix_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (skippable(line)) continue;
    std::vector<double> row;
    for (const auto& tok : split(line, ',')) row.push_back(parse_number(tok, lineno));
    if (!rows.empty() && row.size() != rows[0].size()) parse_error("ragged matrix row", lineno);
    rows.push_back(std::move(row));
  }
  Matrix m(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

Matrix load_matrix_csv(const fs::path& p) {
  std::ifstream f = open_in(p);
  return read_matrix_csv(f);
}

void write_matrix_csv(std::ostream& os, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << format_double(m(i, j));
    os << '\n';
  }
}

void write_dataset(std::ostream& os, const LabeledDataset& d) {
  os << "n=" << d.num_nodes << '\n'
     << "m=" << d.num_edges << '\n'
     << "n_train=" << d.train.size() << '\n'
     << "n_test=" << d.test.size() << '\n'
     << "seed=" << d.seed << '\n'
     << "t_max=" << d.meta.t_max << '\n'
     << "noise_sd=" << format_double(d.meta.noise_sd) << '\n'
     << "step_size=" << format_double(d.meta.step_size) << '\n'
     << "sources=";
  for (std::size_t i = 0; i < d.meta.sources.size(); ++i) os << (i ? "," : "") << d.meta.sources[i];
  os << "\ndata\n";
  auto record = [&](std::size_t idx) {
    const Sample& s = d.samples[idx];
    os << s.label << ',' << s.time;
    for (Eigen::Index i = 0; i < s.signal.size(); ++i) os << ',' << format_double(s.signal(i));
    os << '\n';
  };
  for (std::size_t i : d.train) record(i);
  for (std::size_t i : d.test) record(i);
}

LabeledDataset read_dataset(std::istream& is) {
  LabeledDataset d;
  std::string line;
  std::size_t lineno = 0, n_train = 0, n_test = 0;
  bool in_data = false, have_n = false;
  auto to_size = [&](const std::string& v) {
    const double x = parse_number(v, lineno);
    if (x < 0 || x != std::floor(x)) parse_error("expected a nonnegative integer", lineno);
    return static_cast<std::size_t>(x);
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!in_data) {
      if (skippable(line)) continue;
      if (line == "data") {
        in_data = true;
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) parse_error("expected key=value", lineno);
      const std::string key = line.substr(0, eq), val = line.substr(eq + 1);
      if (key == "n") {
        d.num_nodes = to_size(val);
        have_n = true;
      } else if (key == "m") {
        d.num_edges = to_size(val);
      } else if (key == "n_train") {
        n_train = to_size(val);
      } else if (key == "n_test") {
        n_test = to_size(val);
      } else if (key == "seed") {
        d.seed = std::stoull(val);
      } else if (key == "t_max") {
        d.meta.t_max = to_size(val);
      } else if (key == "noise_sd") {
        d.meta.noise_sd = parse_number(val, lineno);
      } else if (key == "step_size") {
        d.meta.step_size = parse_number(val, lineno);
      } else if (key == "sources") {
        for (const auto& tok : split(val, ',')) d.meta.sources.push_back(to_size(tok));
      } else {
        parse_error("unknown header key '" + key + "'", lineno);
      }
      continue;
    }
    if (line.empty()) continue;
    const auto toks = split(line, ',');
    if (toks.size() != d.num_nodes + 2) parse_error("record has the wrong number of fields", lineno);
    Sample s;
    s.label = static_cast<int>(to_size(toks[0]));
    s.time = static_cast<int>(to_size(toks[1]));
    if (static_cast<std::size_t>(s.label) >= d.meta.sources.size()) parse_error("label out of range", lineno);
    s.signal.resize(static_cast<Eigen::Index>(d.num_nodes));
    for (std::size_t i = 0; i < d.num_nodes; ++i) {
      s.signal(static_cast<Eigen::Index>(i)) = parse_number(toks[i + 2], lineno);
      if (!std::isfinite(s.signal(static_cast<Eigen::Index>(i)))) parse_error("non-finite signal value", lineno);
    }
    (d.samples.size() < n_train ? d.train : d.test).push_back(d.samples.size());
    d.samples.push_back(std::move(s));
  }
  if (!have_n || !in_data) fail(ErrorKind::invalid_argument, "dataset file lacks a header or data section");
  if (d.samples.size() != n_train + n_test)
    fail(ErrorKind::invalid_argument, "dataset announces " + std::to_string(n_train + n_test) + " samples, found " +
                                          std::to_string(d.samples.size()));
  return d;
}

void save_dataset(const fs::path& p, const LabeledDataset& d) {
  std::ostringstream os;
  write_dataset(os, d);
  write_text(p, os.str());
}

LabeledDataset load_dataset(const fs::path& p) {
  std::ifstream f = open_in(p);
  return read_dataset(f);
}

Json to_json(const GnnModel& m) {
  Json layers = Json::array();
  for (const auto& l : m.layers) {
    Json taps = Json::array();
    for (const auto& t : l.taps) {
      Json rows = Json::array();
      for (Eigen::Index i = 0; i < t.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < t.cols(); ++j) row.push_back(t(i, j));
        rows.push_back(std::move(row));
      }
      taps.push_back(std::move(rows));
    }
    layers.push_back({{"in", l.in()}, {"out", l.out()}, {"taps", std::move(taps)}});
  }
  return {{"format", "hgsp-gnn"}, {"version", 1}, {"nonlinearity", to_string(m.nonlinearity)},
          {"linear_output", m.linear_output}, {"layers", layers}};
}

GnnModel gnn_from_json(const Json& j) {
  try {
    if (j.at("format") != "hgsp-gnn" || j.at("version") != 1)
      fail(ErrorKind::invalid_argument, "not an hgsp-gnn version 1 checkpoint");
    GnnModel m;
    m.nonlinearity = parse_nonlinearity(j.at("nonlinearity").get<std::string>());
    m.linear_output = j.value("linear_output", false);
    for (const auto& jl : j.at("layers")) {
      GnnLayer l;
      const auto in = jl.at("in").get<Eigen::Index>(), out = jl.at("out").get<Eigen::Index>();
      for (const auto& jt : jl.at("taps")) {
        Matrix t(in, out);
        if (static_cast<Eigen::Index>(jt.size()) != in)
          fail(ErrorKind::invalid_argument, "checkpoint tap has the wrong row count");
        for (Eigen::Index a = 0; a < in; ++a) {
          const auto& row = jt.at(static_cast<std::size_t>(a));
          if (static_cast<Eigen::Index>(row.size()) != out)
            fail(ErrorKind::invalid_argument, "checkpoint tap has the wrong column count");
          for (Eigen::Index b = 0; b < out; ++b) t(a, b) = row.at(static_cast<std::size_t>(b)).get<double>();
        }
        l.taps.push_back(std::move(t));
      }
      m.layers.push_back(std::move(l));
    }
    for (std::size_t i = 1; i < m.layers.size(); ++i)
      if (m.layers[i].in() != m.layers[i - 1].out())
        fail(ErrorKind::invalid_argument, "checkpoint layer widths do not chain");
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::invalid_argument, std::string("malformed gnn checkpoint: ") + e.what());
  }
}

Json to_json(const HennModel& m) {
  Json stages = Json::array();
  for (const auto& s : m.stages) stages.push_back({{"kind", to_string(s.kind)}, {"model", to_json(s.model)}});
  return {{"format", "hgsp-henn"}, {"version", 1}, {"architecture", m.architecture},
          {"candidates", m.candidates}, {"stages", stages}};
}

HennModel henn_from_json(const Json& j) {
  try {
    if (j.at("format") != "hgsp-henn" || j.at("version") != 1)
      fail(ErrorKind::invalid_argument, "not an hgsp-henn version 1 checkpoint");
    HennModel m;
    m.architecture = j.at("architecture").get<std::string>();
    m.candidates = j.at("candidates").get<std::vector<std::size_t>>();
    for (const auto& js : j.at("stages"))
      m.stages.push_back({parse_gso_kind(js.at("kind").get<std::string>()), gnn_from_json(js.at("model"))});
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::invalid_argument, std::string("malformed henn checkpoint: ") + e.what());
  }
}

Json to_json(const SimilarityReport& r) {
  auto num = [](double x) { return std::isnan(x) ? Json(nullptr) : Json(x); };
  return {{"epsilon", epsilon_json(r.epsilon)},
          {"mu_max", num(r.mu_max)},
          {"mu_min", num(r.mu_min)},
          {"zero_multiplicity_s", r.zero_mult_s},
          {"zero_multiplicity_s_tilde", r.zero_mult_s_tilde},
          {"kernels_match", r.kernels_match},
          {"certified", r.certified},
          {"per_eigen_ratios", r.per_eigen_ratios}};
}

Json to_json(const ArchitectureResult& r) {
  Json shuffles = Json::array();
  for (const auto& s : r.shuffles) {
    Json cands = Json::array();
    for (const auto& c : s.candidate_scores) cands.push_back({{"mean", c.mean}, {"sd", c.sd}});
    shuffles.push_back({{"selected", s.selected},
                        {"validation", s.validation},
                        {"test", s.test},
                        {"max_c", s.max_c},
                        {"candidates", cands}});
  }
  return {{"architecture", r.architecture},
          {"validation_mean", r.validation.mean},
          {"validation_sd", r.validation.sd},
          {"test_mean", r.test.mean},
          {"test_sd", r.test.sd},
          {"max_c", r.max_c},
          {"shuffles", shuffles}};
}

Json to_json(const SimilarityDecayStudy& s) {
  Json sizes = Json::array();
  for (const auto& z : s.sizes)
    sizes.push_back({{"n", z.n},
                     {"mean_epsilon", z.mean},
                     {"sd_epsilon", z.sd},
                     {"min_spectral_gap", z.min_gap},
                     {"concentration_halfwidth", z.concentration}});
  return {{"model", s.model}, {"params", s.params}, {"trials", s.trials}, {"seed", s.seed},
          {"sizes", sizes},   {"slope", s.slope},   {"slope_ci95", {s.slope_ci_low, s.slope_ci_high}}};
}

void write_training_log(std::ostream& os, const std::vector<LogRow>& rows) {
  os << "step,loss,ce,penalty,lr,max_C\n";
  for (const auto& r : rows)
    os << r.step << ',' << format_double(r.loss) << ',' << format_double(r.ce) << ',' << format_double(r.penalty)
       << ',' << format_double(r.lr) << ',' << format_double(r.max_c) << '\n';
}

void write_decay_csv(std::ostream& os, const SimilarityDecayStudy& s) {
  os << "n,trial,epsilon,min_nonzero_eig\n";
  for (const auto& r : s.rows)
    os << r.n << ',' << r.trial << ',' << format_double(r.epsilon) << ',' << format_double(r.min_nonzero_eig) << '\n';
}

std::string decay_svg(const SimilarityDecayStudy& s) {
  const double w = 480, h = 360, pad = 50;
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (const auto& z : s.sizes) {
    const double x = std::log10(static_cast<double>(z.n));
    xlo = std::min(xlo, x);
    xhi = std::max(xhi, x);
    ylo = std::min(ylo, std::log10(std::max(z.mean - z.sd, z.mean * 0.1)));
    yhi = std::max(yhi, std::log10(z.mean + z.sd));
  }
  if (!(xhi > xlo)) xhi = xlo + 1;
  if (!(yhi > ylo)) yhi = ylo + 1;
  auto px = [&](double x) { return pad + (x - xlo) / (xhi - xlo) * (w - 2 * pad); };
  auto py = [&](double y) { return h - pad - (y - ylo) / (yhi - ylo) * (h - 2 * pad); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<line x1=\"" << pad << "\" y1=\"" << h - pad << "\" x2=\"" << w - pad << "\" y2=\"" << h - pad
     << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << h - pad
     << "\" stroke=\"black\"/>\n"
     << "<text x=\"" << w / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">log10 n</text>\n"
     << "<text x=\"15\" y=\"" << h / 2 << "\" transform=\"rotate(-90 15 " << h / 2
     << ")\" text-anchor=\"middle\">log10 mean epsilon</text>\n"
     << "<text x=\"" << w / 2 << "\" y=\"25\" text-anchor=\"middle\">" << s.model << ", slope "
     << format_double(std::round(s.slope * 1000) / 1000) << "</text>\n<polyline fill=\"none\" stroke=\"steelblue\" points=\"";
  for (const auto& z : s.sizes)
    os << px(std::log10(static_cast<double>(z.n))) << ',' << py(std::log10(z.mean)) << ' ';
  os << "\"/>\n";
  for (const auto& z : s.sizes) {
    const double x = px(std::log10(static_cast<double>(z.n)));
    os << "<line x1=\"" << x << "\" y1=\"" << py(std::log10(std::max(z.mean - z.sd, z.mean * 0.1))) << "\" x2=\"" << x
       << "\" y2=\"" << py(std::log10(z.mean + z.sd)) << "\" stroke=\"gray\"/>\n"
       << "<circle cx=\"" << x << "\" cy=\"" << py(std::log10(z.mean)) << "\" r=\"3\" fill=\"steelblue\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace hgsp::io
