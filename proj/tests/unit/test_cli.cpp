#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace hgsp;
namespace fs = std::filesystem;
using cli::Json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hgsp_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct Result {
  int code = 0;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "hgsp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

Json read_json(const fs::path& p) { return Json::parse(io::read_text(p)); }

}  // namespace

TEST_CASE("exit codes") {
  CHECK(cli::exit_code(ErrorKind::config) == 2);
  CHECK(cli::exit_code(ErrorKind::invalid_argument) == 2);
  CHECK(cli::exit_code(ErrorKind::numerical) == 3);
  CHECK(cli::exit_code(ErrorKind::assumption) == 4);
}

TEST_CASE("merge_config rejects unknown keys and wrong types by path") {
  const Json d = cli::default_config("gen-data");
  const Json m = cli::merge_config(d, Json{{"torus", {{"minor", 0.4}}}, {"seed", 3}});
  CHECK(m["torus"]["minor"] == 0.4);
  CHECK(m["torus"]["major"] == 1.5);
  CHECK(m["seed"] == 3);
  CHECK_THROWS_WITH_AS(cli::merge_config(d, Json{{"torus", {{"tube", 1}}}}), doctest::Contains("torus.tube"), Error);
  CHECK_THROWS_WITH_AS(cli::merge_config(d, Json{{"radius", "wide"}}), doctest::Contains("radius"), Error);
  CHECK_THROWS_AS(cli::default_config("fly"), Error);
}

TEST_CASE("overrides parse JSON values and fall back to strings") {
  Json c = cli::default_config("train");
  cli::apply_override(c, "epochs=7");
  cli::apply_override(c, "model_space.hidden=[2,4]");
  cli::apply_override(c, "penalty=barrier");
  CHECK(c["epochs"] == 7);
  CHECK(c["model_space"]["hidden"] == Json::array({2, 4}));
  CHECK(c["penalty"] == "barrier");
  CHECK_THROWS_WITH_AS(cli::apply_override(c, "model_space.depth=3"), doctest::Contains("model_space.depth"), Error);
  CHECK_THROWS_AS(cli::apply_override(c, "epochs"), Error);
}

TEST_CASE("hypergraph and matrix io round trip") {
  const Hypergraph h(5, {{0, 1, 2}, {2, 3}, {3, 4}}, {1.0, 0.5, 2.25});
  std::stringstream ss;
  io::write_hypergraph(ss, h);
  const Hypergraph back = io::read_hypergraph(ss);
  CHECK(back.num_nodes() == 5);
  CHECK(back.edges() == h.edges());
  CHECK(back.weights() == h.weights());
  std::stringstream bad("3 2\n1 2 0 1\n1 2 0 7\n");
  CHECK_THROWS_AS(io::read_hypergraph(bad), Error);
  Matrix m(2, 2);
  m << 1.0 / 3.0, -2, 1e-300, 4;
  std::stringstream ms;
  io::write_matrix_csv(ms, m);
  CHECK(io::read_matrix_csv(ms) == m);
}

TEST_CASE("dataset io is exact") {
  const Hypergraph h(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  DatasetParams p;
  p.num_sources = 3;
  p.t_max = 4;
  p.n_train = 10;
  p.n_test = 5;
  const LabeledDataset d = generate_dataset(h, 7, p);
  std::stringstream ss;
  io::write_dataset(ss, d);
  const LabeledDataset back = io::read_dataset(ss);
  REQUIRE(back.samples.size() == d.samples.size());
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    CHECK(back.samples[i].signal == d.samples[i].signal);
    CHECK(back.samples[i].label == d.samples[i].label);
    CHECK(back.samples[i].time == d.samples[i].time);
  }
  CHECK(back.train == d.train);
  CHECK(back.test == d.test);
  CHECK(back.meta.sources == d.meta.sources);
  CHECK(back.seed == d.seed);
}

TEST_CASE("checkpoints round trip") {
  Rng rng(1);
  const HennModel m = make_model(ArchitectureSpec{}, {1, 3}, rng);
  const HennModel back = io::henn_from_json(Json::parse(io::to_json(m).dump()));
  CHECK(back.flatten() == m.flatten());
  CHECK(back.candidates == m.candidates);
  CHECK(back.architecture == m.architecture);
  CHECK(back.stages.back().model.linear_output);
  const GnnModel g = GnnModel::random({1, 3, 2}, 2, Nonlinearity::tanh, 1.0, rng);
  const GnnModel gb = io::gnn_from_json(io::to_json(g));
  CHECK(gb.flatten() == g.flatten());
  CHECK(gb.nonlinearity == Nonlinearity::tanh);
  CHECK_THROWS_AS(io::henn_from_json(Json{{"format", "other"}}), Error);
}

TEST_CASE("similarity command on identical operators") {
  const fs::path dir = scratch("similarity");
  Rng rng(2);
  std::ofstream(dir / "s.csv") << [&] {
    std::ostringstream os;
    io::write_matrix_csv(os, random_psd(6, 0, 0.5, 2.0, rng));
    return os.str();
  }();
  const std::string s = (dir / "s.csv").string();
  const Result r = invoke({"similarity", "--out", dir.string(), "--set", "s=" + s, "--set", "s_tilde=" + s});
  CHECK(r.code == 0);
  const Json j = read_json(dir / "similarity.json");
  CHECK(j["epsilon"].get<double>() == doctest::Approx(0.0).epsilon(1e-12));
  const Json m = read_json(dir / "manifest.json");
  CHECK(m["command"] == "similarity");
  CHECK(m["exit_code"] == 0);
  CHECK(m["artifacts"] == Json::array({"similarity.json"}));
}

TEST_CASE("similarity command reports an infinite coefficient") {
  const fs::path dir = scratch("similarity_inf");
  std::ofstream(dir / "a.csv") << "0,0\n0,1\n";
  std::ofstream(dir / "b.csv") << "1,0\n0,1\n";
  const Result r = invoke({"similarity", "-o", dir.string(), "-s", "s=" + (dir / "a.csv").string(), "-s",
                           "s_tilde=" + (dir / "b.csv").string()});
  CHECK(r.code == 4);
  CHECK(read_json(dir / "similarity.json")["epsilon"] == "inf");
}

TEST_CASE("gen-data writes a small dataset") {
  const fs::path dir = scratch("gen");
  const Result r = invoke({"gen-data", "--out", dir.string(), "--seed", "5", "--set", "n_points=200", "--set",
                           "n_train=20", "--set", "n_test=10", "--set", "radius=0.5"});
  REQUIRE(r.code == 0);
  const LabeledDataset d = io::load_dataset(dir / "dataset.txt");
  const Hypergraph h = io::load_hypergraph(dir / "hypergraph.hg");
  CHECK(d.samples.size() == 30);
  CHECK(d.num_nodes == h.num_nodes());
  CHECK(read_json(dir / "manifest.json")["config"]["seed"] == 5);
}

TEST_CASE("bounds command with an exact copy holds everywhere") {
  const fs::path dir = scratch("bounds");
  const Result r = invoke({"bounds", "--out", dir.string(), "--set", "epsilon=0", "--set", "filters=20", "--set",
                           "trials=10", "--set", "instances=10"});
  REQUIRE(r.code == 0);
  const Json j = read_json(dir / "bounds.json");
  CHECK(j["epsilon"].get<double>() < 1e-12);
  CHECK(j["all_hold"] == true);
  CHECK(j["perturbation"]["additive"]["violations"] == 0);
}

TEST_CASE("configuration errors exit with code 2") {
  const fs::path dir = scratch("errors");
  CHECK(invoke({"gen-data", "--out", dir.string(), "--set", "colour=red"}).code == 2);
  CHECK(read_json(dir / "manifest.json")["exit_code"] == 2);
  CHECK(invoke({"gen-data", "--out", dir.string(), "--set", "step_size=-1"}).code == 2);
  CHECK(invoke({"similarity", "--out", dir.string()}).code == 2);
  CHECK(invoke({"teleport"}).code == 2);
  CHECK(invoke({"gen-data", "--out", dir.string(), "--format", "pdf"}).code == 2);
  const Result p = invoke({"rand-study", "--print-config", "--set", "trials=3"});
  CHECK(p.code == 0);
  CHECK(Json::parse(p.out)["trials"] == 3);
}

TEST_CASE("output directory falls back to the environment") {
  const fs::path dir = scratch("env");
  setenv(cli::kOutDirEnv, dir.string().c_str(), 1);
  const Result r = invoke({"rand-study", "--set", "sizes=[16,24]", "--set", "trials=2", "--format", "csv,json,svg"});
  unsetenv(cli::kOutDirEnv);
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "decay.csv"));
  CHECK(fs::exists(dir / "decay_summary.json"));
  CHECK(fs::exists(dir / "decay.svg"));
  CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("train and eval on a tiny dataset") {
  const fs::path dir = scratch("train");
  REQUIRE(invoke({"gen-data", "--out", dir.string(), "--set", "n_points=200", "--set", "radius=0.5", "--set",
                  "n_train=30", "--set", "n_test=10"})
              .code == 0);
  const Result t = invoke({"train", "--out", dir.string(), "--set", "epochs=2", "--set", "folds=2", "--set",
                           "shuffles=1", "--set", "architectures=[\"henn\",\"hgnn\"]"});
  REQUIRE(t.code == 0);
  CHECK(fs::exists(dir / "checkpoint_henn.json"));
  CHECK(fs::exists(dir / "log_hgnn.csv"));
  const Json rep = read_json(dir / "report.json");
  CHECK(rep.size() >= 2);
  const Result e = invoke({"eval", "--out", dir.string(), "--set",
                           "checkpoint=" + (dir / "checkpoint_henn.json").string()});
  CHECK(e.code == 0);
  const Json ev = read_json(dir / "eval.json");
  CHECK(ev.dump().find("accuracy") != std::string::npos);
}
