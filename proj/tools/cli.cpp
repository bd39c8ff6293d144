#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>

#include "hgsp/spectral.hpp"

namespace hgsp::cli {

namespace fs = std::filesystem;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument:
    case ErrorKind::config: return 2;
    case ErrorKind::numerical: return 3;
    case ErrorKind::assumption: return 4;
  }
  return 1;
}

Json default_config(const std::string& command) {
  if (command == "gen-data")
    return {{"seed", 0},          {"n_points", 500},    {"radius", 0.4},
            {"torus", {{"major", 1.5}, {"minor", 0.5}}}, {"num_sources", 10},
            {"t_max", 30},        {"noise_sd", 0.1},    {"step_size", 0.05},
            {"n_train", 500},     {"n_test", 300}};
  if (command == "train")
    return {{"seed", 0},
            {"dataset", ""},
            {"hypergraph", ""},
            {"architectures", {"henn", "clique", "line", "hgnn"}},
            {"model_space",
             {{"hidden", {2}}, {"taps", {3}}, {"filter_layers", {2}}, {"nonlinearity", "relu"}, {"init_scale", 0.5}}},
            {"lr", 0.0005},
            {"adam_betas", {0.9, 0.999}},
            {"decay_rate", 0.99},
            {"decay_period", 20},
            {"il_cap", 10.0},
            {"il_penalty_weight", 1.0},
            {"penalty", "hinge"},
            {"epochs", 200},
            {"batch_size", 32},
            {"folds", 5},
            {"shuffles", 5}};
  if (command == "eval") return {{"dataset", ""}, {"hypergraph", ""}, {"checkpoint", ""}};
  if (command == "similarity") return {{"s", ""}, {"s_tilde", ""}, {"gso", "custom"}};
  if (command == "bounds")
    return {{"seed", 0},  {"n", 16},         {"epsilon", 0.01}, {"filters", 500},           {"taps", 4},
            {"trials", 200}, {"widths", {1, 2, 2}}, {"nonlinearity", "relu"}, {"instances", 1000},
            {"s", ""},    {"s_tilde", ""}};
  if (command == "rand-study")
    return {{"seed", 0},
            {"model", "er"},
            {"p", 0.5},
            {"sizes", {64, 128, 256, 512}},
            {"trials", 20},
            {"degree_spread", 0.5},
            {"kernel", {{"a", 0.5}, {"b", 0.4}}},
            {"semicircle_n", 0}};
  fail(ErrorKind::config, "unknown command '" + command + "'");
}

namespace {

std::string join_path(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

bool same_kind(const Json& a, const Json& b) {
  if (a.is_number() && b.is_number()) return true;
  return a.type() == b.type();
}

const char* type_name(const Json& j) {
  if (j.is_number()) return "number";
  return j.type_name();
}

}  // namespace

Json merge_config(const Json& defaults, const Json& user, const std::string& path) {
  if (!user.is_object()) fail(ErrorKind::config, (path.empty() ? "config" : path) + ": expected an object");
  Json out = defaults;
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = join_path(path, it.key());
    if (!defaults.contains(it.key())) fail(ErrorKind::config, key + ": unknown key");
    const Json& d = defaults.at(it.key());
    if (!same_kind(d, it.value()))
      fail(ErrorKind::config, key + ": expected " + type_name(d) + ", got " + type_name(it.value()));
    if (d.is_object())
      out[it.key()] = merge_config(d, it.value(), key);
    else
      out[it.key()] = it.value();
  }
  return out;
}

void apply_override(Json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) fail(ErrorKind::config, "--set expects key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  Json patch = value;
  std::vector<std::string> parts;
  std::stringstream ss(key);
  for (std::string part; std::getline(ss, part, '.');) parts.push_back(part);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) patch = Json{{*it, patch}};
  config = merge_config(config, patch);
}

namespace {

struct Context {
  Json config;
  fs::path out;
  std::vector<std::string> formats;
  std::vector<std::string> artifacts;
  std::ostream* log = nullptr;

  bool wants(const std::string& f) const { return std::find(formats.begin(), formats.end(), f) != formats.end(); }
  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = out / name;
    io::write_text(p, text);
    artifacts.push_back(name);
    return p;
  }
  fs::path input(const std::string& key, const std::string& fallback) const {
    std::string v = config.at(key).get<std::string>();
    if (v.empty()) {
      if (fallback.empty()) fail(ErrorKind::config, key + ": required");
      return out / fallback;
    }
    return v;
  }
};

template <class T>
T get(const Json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorKind::config, key + ": invalid value " + j.at(key).dump());
  }
}

std::size_t get_count(const Json& j, const std::string& key) {
  const double v = get<double>(j, key);
  if (v < 0 || v != std::floor(v)) fail(ErrorKind::config, key + ": expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

int cmd_gen_data(Context& c) {
  const Json& cfg = c.config;
  const auto seed = get<std::uint64_t>(cfg, "seed");
  TorusParams torus{get<double>(cfg.at("torus"), "major"), get<double>(cfg.at("torus"), "minor")};
  DatasetParams p;
  p.num_sources = get_count(cfg, "num_sources");
  p.t_max = get_count(cfg, "t_max");
  p.noise_sd = get<double>(cfg, "noise_sd");
  p.step_size = get<double>(cfg, "step_size");
  p.n_train = get_count(cfg, "n_train");
  p.n_test = get_count(cfg, "n_test");
  if (!(p.step_size > 0)) fail(ErrorKind::config, "step_size: must be positive");
  if (!(p.noise_sd >= 0)) fail(ErrorKind::config, "noise_sd: must be nonnegative");
  if (p.n_train == 0) fail(ErrorKind::config, "n_train: must be positive");

  const GeometricHypergraph g = sample_torus_vr(get_count(cfg, "n_points"), get<double>(cfg, "radius"), seed, torus);
  const LabeledDataset d = generate_dataset(g.hypergraph, derive_seed(seed, 1), p);
  std::ostringstream hg, ds, pts;
  io::write_hypergraph(hg, g.hypergraph);
  io::write_dataset(ds, d);
  pts << "index,x,y,z\n";
  for (std::size_t i = 0; i < g.points.size(); ++i)
    pts << g.original_index[i] << ',' << io::format_double(g.points[i][0]) << ',' << io::format_double(g.points[i][1])
        << ',' << io::format_double(g.points[i][2]) << '\n';
  c.write("hypergraph.hg", hg.str());
  c.write("dataset.txt", ds.str());
  c.write("points.csv", pts.str());
  *c.log << "nodes " << g.hypergraph.num_nodes() << " (dropped " << get_count(cfg, "n_points") - g.points.size()
         << " isolated), hyperedges " << g.hypergraph.num_edges() << ", train " << d.train.size() << ", test "
         << d.test.size() << "\n";
  return 0;
}

TrainConfig train_config(const Json& cfg) {
  TrainConfig t;
  t.seed = get<std::uint64_t>(cfg, "seed");
  t.lr = get<double>(cfg, "lr");
  const auto betas = get<std::vector<double>>(cfg, "adam_betas");
  if (betas.size() != 2) fail(ErrorKind::config, "adam_betas: expected two values");
  t.beta1 = betas[0];
  t.beta2 = betas[1];
  t.decay_rate = get<double>(cfg, "decay_rate");
  t.decay_period = get_count(cfg, "decay_period");
  t.il_cap = get<double>(cfg, "il_cap");
  t.il_penalty_weight = get<double>(cfg, "il_penalty_weight");
  t.penalty = parse_penalty(get<std::string>(cfg, "penalty"));
  t.epochs = get_count(cfg, "epochs");
  t.batch_size = get_count(cfg, "batch_size");
  t.folds = get_count(cfg, "folds");
  t.shuffles = get_count(cfg, "shuffles");
  t.validate();
  return t;
}

std::vector<ArchitectureSpec> model_space(Architecture a, const Json& ms) {
  std::vector<ArchitectureSpec> out;
  const auto hidden = get<std::vector<std::size_t>>(ms, "hidden");
  const auto taps = get<std::vector<std::size_t>>(ms, "taps");
  const auto layers = get<std::vector<std::size_t>>(ms, "filter_layers");
  Nonlinearity nl;
  try {
    nl = parse_nonlinearity(get<std::string>(ms, "nonlinearity"));
  } catch (const Error& e) {
    fail(ErrorKind::config, std::string("model_space.nonlinearity: ") + e.what());
  }
  for (std::size_t h : hidden)
    for (std::size_t k : taps)
      for (std::size_t l : layers) {
        if (h == 0 || k == 0 || l == 0) fail(ErrorKind::config, "model_space: widths, taps and layers must be positive");
        if (a == Architecture::henn && l < 2) fail(ErrorKind::config, "model_space.filter_layers: henn needs at least 2");
        out.push_back({a, h, k, l, nl, get<double>(ms, "init_scale")});
      }
  if (out.empty()) fail(ErrorKind::config, "model_space: empty");
  return out;
}

int cmd_train(Context& c) {
  const Json& cfg = c.config;
  const TrainConfig tc = train_config(cfg);
  const Hypergraph h = io::load_hypergraph(c.input("hypergraph", "hypergraph.hg"));
  const LabeledDataset d = io::load_dataset(c.input("dataset", "dataset.txt"));
  if (d.num_nodes != h.num_nodes()) fail(ErrorKind::config, "dataset and hypergraph disagree on the node count");
  Json report = {{"epochs", tc.epochs}, {"batch_size", tc.batch_size}, {"folds", tc.folds},
                 {"shuffles", tc.shuffles}, {"architectures", Json::array()}};
  for (const auto& name : get<std::vector<std::string>>(cfg, "architectures")) {
    Architecture a;
    try {
      a = parse_architecture(name);
    } catch (const Error& e) {
      fail(ErrorKind::config, std::string("architectures: ") + e.what());
    }
    const ArchitectureResult r = cross_validate(d, h, model_space(a, cfg.at("model_space")), tc);
    c.write("checkpoint_" + r.architecture + ".json", dump(io::to_json(r.final_model)));
    std::ostringstream log;
    io::write_training_log(log, r.final_log);
    c.write("log_" + r.architecture + ".csv", log.str());
    report["architectures"].push_back(io::to_json(r));
    *c.log << std::left << std::setw(8) << r.architecture << " validation " << std::fixed << std::setprecision(3)
           << r.validation.mean << " +- " << r.validation.sd << "  test " << r.test.mean << " +- " << r.test.sd
           << "  max C " << r.max_c << "\n";
  }
  c.write("report.json", dump(report));
  return 0;
}

int cmd_eval(Context& c) {
  const Hypergraph h = io::load_hypergraph(c.input("hypergraph", "hypergraph.hg"));
  const LabeledDataset d = io::load_dataset(c.input("dataset", "dataset.txt"));
  const HennModel m = io::henn_from_json(Json::parse(io::read_text(c.input("checkpoint", "checkpoint_henn.json"))));
  std::vector<GsoKind> kinds;
  for (const auto& s : m.stages) kinds.push_back(s.kind);
  const HypergraphContext ctx(h, kinds);
  Json j = {{"architecture", m.architecture},
            {"train_accuracy", accuracy(m, ctx, d, d.train)},
            {"test_accuracy", d.test.empty() ? Json(nullptr) : Json(accuracy(m, ctx, d, d.test))},
            {"max_c", max_filter_lipschitz(m, ctx)}};
  c.write("eval.json", dump(j));
  *c.log << j.dump() << "\n";
  return 0;
}

Matrix load_operator(const fs::path& p, const std::string& kind) {
  if (p.extension() == ".hg") {
    const GsoKind k = parse_gso_kind(kind);
    if (k == GsoKind::custom) fail(ErrorKind::config, "gso: a hypergraph file needs a hypergraph operator kind");
    return gso(io::load_hypergraph(p), k).matrix();
  }
  return io::load_matrix_csv(p);
}

int cmd_similarity(Context& c) {
  const std::string kind = get<std::string>(c.config, "gso");
  const Matrix s = load_operator(c.input("s", ""), kind);
  const Matrix st = load_operator(c.input("s_tilde", ""), kind);
  const SimilarityReport r = spectral_similarity(s, st);
  c.write("similarity.json", dump(io::to_json(r)));
  *c.log << "epsilon " << (std::isfinite(r.epsilon) ? io::format_double(r.epsilon) : "inf") << "\n";
  if (!std::isfinite(r.epsilon)) {
    *c.log << "kernel of S is not contained in the kernel of S~; no finite coefficient\n";
    return 4;
  }
  return 0;
}

int cmd_bounds(Context& c) {
  const Json& cfg = c.config;
  Rng rng(get<std::uint64_t>(cfg, "seed"));
  const std::size_t taps = get_count(cfg, "taps");
  const double slack = kDefaultSlack;
  Json out;
  ShiftOperator s = ShiftOperator::create(Matrix::Zero(1, 1), GsoKind::custom);
  ShiftOperator st = s;
  bool generated = get<std::string>(cfg, "s").empty() && get<std::string>(cfg, "s_tilde").empty();
  if (generated) {
    const auto n = static_cast<Eigen::Index>(get_count(cfg, "n"));
    if (n < 2) fail(ErrorKind::config, "n: must be at least 2");
    s = ShiftOperator::create(random_psd(n, 0, 0.1, 2.0, rng), GsoKind::custom, true);
    const Perturbation p = perturb_relative(s, random_commuting_relative(s.spectrum(), get<double>(cfg, "epsilon"), rng));
    st = ShiftOperator::create(p.s_tilde, GsoKind::custom);
  } else {
    s = ShiftOperator::create(io::load_matrix_csv(c.input("s", "")), GsoKind::custom, true);
    st = ShiftOperator::create(io::load_matrix_csv(c.input("s_tilde", "")), GsoKind::custom);
  }
  const SimilarityReport sim = spectral_similarity(s, st);
  out["epsilon"] = io::to_json(sim)["epsilon"];
  if (!std::isfinite(sim.epsilon)) {
    c.write("bounds.json", dump(out));
    *c.log << "epsilon is infinite; no certificate applies\n";
    return 4;
  }
  const double eps = sim.epsilon;
  bool all = true;

  {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::size_t violations = 0;
    double worst = 0.0, max_diff = 0.0;
    const std::size_t count = get_count(cfg, "filters");
    for (std::size_t i = 0; i < count; ++i) {
      GraphFilter f;
      for (std::size_t k = 0; k < std::max<std::size_t>(taps, 1); ++k) f.coeffs.push_back(coef(rng));
      f = normalize(f, {&s.eigenvalues(), &st.eigenvalues()});
      const Prop1Report r = check_prop1_bound(f, s, st, eps, slack);
      if (!r.holds) ++violations;
      max_diff = std::max(max_diff, r.difference);
      if (r.bound > 0) worst = std::max(worst, r.difference / r.bound);
    }
    out["filter_stability"] = {{"filters", count}, {"violations", violations}, {"max_difference", max_diff},
                               {"max_difference_over_bound", worst}, {"holds", violations == 0}};
    all = all && violations == 0;
  }
  {
    const auto widths = get<std::vector<std::size_t>>(cfg, "widths");
    if (widths.size() < 2) fail(ErrorKind::config, "widths: need at least input and output widths");
    GnnModel m = GnnModel::random(widths, std::max<std::size_t>(taps, 1),
                                  parse_nonlinearity(get<std::string>(cfg, "nonlinearity")), 1.0, rng);
    normalize_filters(m, {&s.eigenvalues(), &st.eigenvalues()});
    const Theorem1Report r = check_theorem1(m, s, st, eps, get_count(cfg, "trials"), rng, slack);
    out["gnn_transferability"] = {{"trials", r.trials},       {"lipschitz", r.lipschitz},
                                  {"bound", r.bound},         {"max_deviation", r.max_deviation},
                                  {"violations", r.violations}, {"holds", r.violations == 0}};
    all = all && r.violations == 0;
  }
  if (generated) {
    const std::size_t count = get_count(cfg, "instances");
    Json pj = Json::object();
    for (PerturbationKind kind : {PerturbationKind::relative, PerturbationKind::additive, PerturbationKind::combined}) {
      std::size_t violations = 0;
      double worst_gap = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < count; ++i) {
        const double delta = get<double>(cfg, "epsilon");
        Perturbation p;
        if (kind == PerturbationKind::relative)
          p = perturb_relative(s, random_commuting_relative(s.spectrum(), delta, rng));
        else if (kind == PerturbationKind::additive)
          p = perturb_additive(s, random_additive(s.spectrum(), delta * s.spectrum().smallest_nonzero(), rng));
        else
          p = perturb_combined(s, random_commuting_relative(s.spectrum(), delta / 2, rng),
                               random_additive(s.spectrum(), delta / 2 * s.spectrum().smallest_nonzero(), rng));
        const double measured = spectral_similarity(s.matrix(), p.s_tilde).epsilon;
        worst_gap = std::max(worst_gap, measured - p.bound);
        if (!(measured <= p.bound + 1e-8)) ++violations;
      }
      const char* name = kind == PerturbationKind::relative ? "relative"
                         : kind == PerturbationKind::additive ? "additive"
                                                              : "combined";
      pj[name] = {{"instances", count}, {"violations", violations}, {"max_measured_minus_bound", worst_gap},
                  {"holds", violations == 0}};
      all = all && violations == 0;
    }
    out["perturbation"] = pj;
  }
  out["all_hold"] = all;
  c.write("bounds.json", dump(out));
  *c.log << "epsilon " << io::format_double(eps) << ", all certificates " << (all ? "hold" : "FAIL") << "\n";
  return 0;
}

RandomModelSpec random_model(const Json& cfg) {
  RandomModelSpec m;
  try {
    m.model = parse_random_model(get<std::string>(cfg, "model"));
  } catch (const Error& e) {
    fail(ErrorKind::config, std::string("model: ") + e.what());
  }
  m.p = get<double>(cfg, "p");
  if (!(m.p > 0 && m.p <= 1)) fail(ErrorKind::config, "p: must lie in (0, 1]");
  std::ostringstream desc;
  switch (m.model) {
    case RandomModel::er: desc << "p=" << m.p; break;
    case RandomModel::chung_lu: {
      const double spread = get<double>(cfg, "degree_spread");
      if (!(spread >= 0 && spread < 2)) fail(ErrorKind::config, "degree_spread: must lie in [0, 2)");
      const double p = m.p;
      // Linear ramp of expected degrees around p n.
      m.degrees = [p, spread](std::size_t n) {
        std::vector<double> w(n);
        for (std::size_t i = 0; i < n; ++i)
          w[i] = p * static_cast<double>(n) *
                 (1.0 - spread / 2 + spread * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(n - 1, 1)));
        return w;
      };
      desc << "w_i = p n (1 - s/2 + s i/(n-1)), p=" << p << ", s=" << spread;
      break;
    }
    case RandomModel::graphon: {
      const double a = get<double>(cfg.at("kernel"), "a"), b = get<double>(cfg.at("kernel"), "b");
      if (!(a > 0 && a + std::max(b, 0.0) <= 1 && a + std::min(b, 0.0) > 0))
        fail(ErrorKind::config, "kernel: need 0 < a + b x y <= 1 on the unit square");
      m.kernel = [a, b](double x, double y) { return a + b * x * y; };
      desc << "W(x,y) = " << a << " + " << b << " x y";
      break;
    }
  }
  m.params = desc.str();
  return m;
}

int cmd_rand_study(Context& c) {
  const Json& cfg = c.config;
  const auto seed = get<std::uint64_t>(cfg, "seed");
  const RandomModelSpec m = random_model(cfg);
  const auto sizes = get<std::vector<std::size_t>>(cfg, "sizes");
  for (std::size_t n : sizes)
    if (n < 3) fail(ErrorKind::config, "sizes: every size must be at least 3");
  const SimilarityDecayStudy st = similarity_decay(m, sizes, get_count(cfg, "trials"), seed);
  Json summary = io::to_json(st);
  if (const std::size_t sn = get_count(cfg, "semicircle_n"); sn > 0) {
    const WeightedGraph g = sample_connected([&](std::uint64_t s) { return m.sample(sn, s); }, derive_seed(seed, 7, sn));
    const EsdSample e = laplacian_deviation_esd(g);
    summary["semicircle"] = {{"n", sn}, {"ks_distance", semicircle_distance(e)}, {"scaling", e.scaling}};
  }
  if (c.wants("csv")) {
    std::ostringstream os;
    io::write_decay_csv(os, st);
    c.write("decay.csv", os.str());
  }
  if (c.wants("json")) c.write("decay_summary.json", dump(summary));
  if (c.wants("svg")) c.write("decay.svg", io::decay_svg(st));
  for (const auto& z : st.sizes)
    *c.log << "n " << z.n << "  mean eps " << io::format_double(z.mean) << "  sd " << io::format_double(z.sd) << "\n";
  *c.log << "log-log slope " << io::format_double(st.slope) << " [" << io::format_double(st.slope_ci_low) << ", "
         << io::format_double(st.slope_ci_high) << "]\n";
  return 0;
}

std::string timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hypergraph signal processing and transferability experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  struct Options {
    std::string config_file, out_dir, formats = "csv,json";
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    bool print_config = false;
  } opt;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"gen-data", "sample the torus hypergraph and the source-localization dataset"},
      {"train", "cross-validate and train the hypergraph architectures"},
      {"eval", "score a checkpoint on a dataset"},
      {"similarity", "spectral similarity coefficient of two operators"},
      {"bounds", "empirical checks of the stability and transferability bounds"},
      {"rand-study", "similarity decay of independent random graphs"}};
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("-c,--config", opt.config_file, "JSON configuration file");
    sub->add_option("-s,--set", opt.sets, "override, key.path=value (repeatable)");
    sub->add_option("-o,--out", opt.out_dir, std::string("output directory (default $") + kOutDirEnv + " or .)");
    sub->add_option("--seed", opt.seed, "global seed");
    sub->add_option("--format", opt.formats, "comma-separated output formats: csv, json, svg");
    sub->add_flag("--print-config", opt.print_config, "print the resolved configuration and exit");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  Context c;
  c.log = &out;
  if (!opt.out_dir.empty())
    c.out = opt.out_dir;
  else if (const char* env = std::getenv(kOutDirEnv); env && *env)
    c.out = env;
  else
    c.out = ".";
  for (std::stringstream ss(opt.formats); ;) {
    std::string f;
    if (!std::getline(ss, f, ',')) break;
    if (f != "csv" && f != "json" && f != "svg") {
      err << "error: --format: unknown format '" << f << "'\n";
      return 2;
    }
    c.formats.push_back(f);
  }

  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  std::string error;
  try {
    Json cfg = default_config(command);
    if (!opt.config_file.empty()) {
      const Json user = Json::parse(io::read_text(opt.config_file), nullptr, false);
      if (user.is_discarded()) fail(ErrorKind::config, opt.config_file + ": not valid JSON");
      cfg = merge_config(cfg, user);
    }
    for (const auto& s : opt.sets) apply_override(cfg, s);
    if (opt.seed) {
      if (!cfg.contains("seed")) fail(ErrorKind::config, "--seed: command '" + command + "' takes no seed");
      cfg["seed"] = *opt.seed;
    }
    c.config = cfg;
    if (opt.print_config) {
      out << dump(cfg);
      return 0;
    }
    if (command == "gen-data") code = cmd_gen_data(c);
    else if (command == "train") code = cmd_train(c);
    else if (command == "eval") code = cmd_eval(c);
    else if (command == "similarity") code = cmd_similarity(c);
    else if (command == "bounds") code = cmd_bounds(c);
    else code = cmd_rand_study(c);
  } catch (const Error& e) {
    code = exit_code(e.kind());
    error = e.what();
  } catch (const std::exception& e) {
    code = 1;
    error = e.what();
  }
  if (!error.empty()) err << "error: " << error << "\n";

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Json manifest = {{"tool", "hgsp"},
                   {"version", kVersion},
                   {"command", command},
                   {"config", c.config},
                   {"artifacts", c.artifacts},
                   {"exit_code", code},
                   {"error", error.empty() ? Json(nullptr) : Json(error)},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"threads", omp_get_max_threads()},
                   {"created", timestamp()},
                   {"seconds", seconds}};
  try {
    io::write_text(c.out / "manifest.json", dump(manifest));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return code == 0 ? 2 : code;
  }
  return code;
}

}  // namespace hgsp::cli
