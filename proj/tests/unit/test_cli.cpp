#include "anm/catalogue.hpp"
#include "anm/parallel.hpp"
#include "anm_cli/cli.hpp"

#include "oracles.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = anm::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "anm_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

std::string slurp(const fs::path& path) { return oracle::read_text(path); }

// Small generate run over a text file.
std::vector<std::string> generate_args(const fs::path& out, const fs::path& text) {
  return {"generate", "--text-file", text.string(), "--out", out.string(), "--quiet",
          "--param", "population_size=6", "generations=3", "k_neighbours=3", "p_threshold_initial=0.05"};
}

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(run({}).code == anm::cli::usage_error);
  CHECK(run({"transmogrify"}).code == anm::cli::usage_error);
  CHECK(run({"encode", "--bogus"}).code == anm::cli::usage_error);
  CHECK(run({"analyze"}).code == anm::cli::usage_error);  // --catalogue is required
  const auto help = run({"--help"});
  CHECK(help.code == anm::cli::ok);
  CHECK(help.out.find("optimize-stimulus") != std::string::npos);
}

TEST_CASE("input errors exit 2") {
  const auto dir = fresh_dir("input_errors");
  const auto cfg = dir / "bad.cfg";
  write(cfg, "window_ms=50\nflux_capacitance=3\n");
  const auto r = run({"encode", "--text", "AB", "--config", cfg.string(), "--out", dir.string()});
  CHECK(r.code == anm::cli::input_error);
  CHECK(r.err.find("flux_capacitance") != std::string::npos);

  CHECK(run({"encode", "--text", "AB", "--param", "window_ms=abc", "--out", dir.string()}).code ==
        anm::cli::input_error);
  CHECK(run({"encode", "--out", dir.string()}).code == anm::cli::input_error);
  CHECK(run({"ideal", "--stimulus", (dir / "missing.json").string(), "--out", dir.string()}).code ==
        anm::cli::input_error);

  // Non-ASCII text names the offending position.
  const auto bad = run({"encode", "--text", "ab\xc3\xa9", "--out", dir.string()});
  CHECK(bad.code == anm::cli::input_error);
  CHECK(bad.err.find("position 2") != std::string::npos);

  // k_neighbours belongs to generate, not to optimize-stimulus.
  const auto wrong = run({"optimize-stimulus", "--param", "k_neighbours=3", "--out", dir.string()});
  CHECK(wrong.code == anm::cli::input_error);
  CHECK(wrong.err.find("k_neighbours") != std::string::npos);
}

TEST_CASE("unwritable output exits 3") {
  const auto dir = fresh_dir("unwritable");
  const auto blocker = dir / "file";
  write(blocker, "x");
  const auto r = run({"encode", "--text", "AB", "--out", (blocker / "sub").string()});
  CHECK(r.code == anm::cli::runtime_failure);
}

TEST_CASE("encode writes a stimulus and manifest") {
  const auto dir = fresh_dir("encode");
  REQUIRE(run({"encode", "--text", "Hi there", "--out", dir.string()}).code == 0);
  const auto stim = anm::load_stimulus(dir / "stimulus.json");
  CHECK(stim == anm::encode_text("Hi there"));
  const auto m = anm::RunManifest::from_json(slurp(dir / "manifest.json"));
  CHECK(m.command == "encode");
  CHECK(m.inputs.at(0).second == anm::sha256_hex("Hi there"));

  const auto replay = fresh_dir("encode_replay");
  REQUIRE(run({"encode", "--text", "Hi there", "--config", (dir / "manifest.json").string(), "--out",
               replay.string()}).code == 0);
  CHECK(slurp(replay / "stimulus.json") == slurp(dir / "stimulus.json"));

  const auto patterns = fresh_dir("encode_patterns");
  REQUIRE(run({"encode", "--patterns", "1,2,255", "--no-trains", "--out", patterns.string()}).code == 0);
  CHECK(anm::load_stimulus(patterns / "stimulus.json").patterns == std::vector<std::uint8_t>{1, 2, 255});
  CHECK_FALSE(json::parse(slurp(patterns / "stimulus.json")).contains("trains"));
}

TEST_CASE("separability of a single pattern") {
  const auto dir = fresh_dir("sep_single");
  REQUIRE(run({"encode", "--text", "AAAA", "--out", dir.string()}).code == 0);
  const auto r = run({"separability", "--stimulus", (dir / "stimulus.json").string(), "--out", dir.string()});
  REQUIRE(r.code == 0);
  std::istringstream heat(slurp(dir / "heatmap.csv"));
  std::string line;
  std::getline(heat, line);
  CHECK(line.rfind("# manifest_sha256=", 0) == 0);
  std::getline(heat, line);
  CHECK(line == "label,A");
  std::getline(heat, line);
  CHECK(line == "A,0.000000");
  CHECK_FALSE(std::getline(heat, line));
  CHECK(r.out.find("0 pairs") != std::string::npos);
}

TEST_CASE("generate is reproducible and replayable") {
  const auto text = fresh_dir("gen_input") / "text.txt";
  write(text, "AB-BA AB");
  const auto a = fresh_dir("gen_a"), b = fresh_dir("gen_b"), c = fresh_dir("gen_c");

  auto args = generate_args(a, text);
  args.insert(args.end(), {"--seed", "7"});
  REQUIRE(run(args).code == 0);
  args = generate_args(b, text);
  args.insert(args.end(), {"--seed", "7", "--threads", "3"});
  REQUIRE(run(args).code == 0);
  anm::set_thread_count(1);
  for (const char* f : {"catalogue.json", "novelty_trace.csv", "manifest.json"}) {
    CAPTURE(f);
    CHECK(slurp(a / f) == slurp(b / f));
  }

  // Replay from the manifest alone.
  REQUIRE(run({"generate", "--text-file", text.string(), "--config", (a / "manifest.json").string(), "--out",
               c.string(), "--quiet"}).code == 0);
  CHECK(slurp(a / "catalogue.json") == slurp(c / "catalogue.json"));

  const auto d = fresh_dir("gen_d");
  args = generate_args(d, text);
  args.insert(args.end(), {"--seed", "8"});
  REQUIRE(run(args).code == 0);
  CHECK(slurp(a / "catalogue.json") != slurp(d / "catalogue.json"));
}

TEST_CASE("flags override config and config overrides defaults") {
  const auto dir = fresh_dir("override");
  const auto text = dir / "text.txt";
  write(text, "ABBA");
  const auto cfg = dir / "run.cfg";
  write(cfg, "# small run\npopulation_size=4\ngenerations=2\nseed=3\nsample_dt=0.25\n");
  REQUIRE(run({"generate", "--text-file", text.string(), "--config", cfg.string(), "--seed", "99", "--out",
               dir.string(), "--quiet"}).code == 0);
  const auto m = anm::RunManifest::from_json(slurp(dir / "manifest.json"));
  auto value = [&](const std::string& key) {
    for (const auto& [k, v] : m.settings)
      if (k == key) return v;
    return std::string("<missing>");
  };
  CHECK(value("seed") == "99");
  CHECK(value("population_size") == "4");
  CHECK(value("generations") == "2");
  CHECK(value("sample_dt") == "0.25");
  CHECK(value("k_neighbours") == "100");
}

TEST_CASE("analyze reports and empty catalogue") {
  const auto dir = fresh_dir("analyze");
  const auto text = dir / "text.txt";
  write(text, "AB-BA AB");
  REQUIRE(run(generate_args(dir, text)).code == 0);
  const auto cat = anm::load_catalogue(dir / "catalogue.json");
  REQUIRE(!cat.archive.entries.empty());

  const auto r = run({"analyze", "--catalogue", (dir / "catalogue.json").string(), "--text-file", text.string(),
                      "--grouping", "by_generation", "--out", dir.string()});
  REQUIRE(r.code == 0);
  std::istringstream corr(slurp(dir / "correlation.csv"));
  std::string line;
  std::getline(corr, line);
  std::getline(corr, line);
  CHECK(line == "entry_id,pattern,label,count,mean_spikes,class");
  int rows = 0;
  while (std::getline(corr, line)) ++rows;
  CHECK(rows == static_cast<int>(cat.archive.entries.size() * 4));
  CHECK(slurp(dir / "makeup.csv").find("group,motif_instances,motif,percent") != std::string::npos);

  auto empty = cat;
  empty.archive.entries.clear();
  anm::save_catalogue(empty, dir / "empty.json");
  const auto e = run({"analyze", "--catalogue", (dir / "empty.json").string(), "--text-file", text.string(),
                      "--out", dir.string()});
  CHECK(e.code == anm::cli::input_error);
  CHECK(e.err.find("no entries") != std::string::npos);

  write(dir / "truncated.json", slurp(dir / "catalogue.json").substr(0, 200));
  CHECK(run({"analyze", "--catalogue", (dir / "truncated.json").string(), "--text-file", text.string(), "--out",
             dir.string()}).code == anm::cli::input_error);
}

TEST_CASE("ideal responses") {
  const auto dir = fresh_dir("ideal");
  REQUIRE(run({"encode", "--text", "A B", "--out", dir.string()}).code == 0);
  REQUIRE(run({"ideal", "--stimulus", (dir / "stimulus.json").string(), "--out", dir.string()}).code == 0);
  const auto j = json::parse(slurp(dir / "ideal_responses.json"));
  CHECK(j.at("responses").size() == 3);
}

TEST_CASE("evolve and optimize-stimulus produce their outputs") {
  const auto dir = fresh_dir("evolve");
  const auto text = dir / "text.txt";
  write(text, "A-A B");
  const auto r = run({"evolve", "--text-file", text.string(), "--pattern", "DASH", "--out", dir.string(), "--quiet",
                      "--param", "population_size=4", "generations=2"});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "best_genome.json"));
  CHECK(slurp(dir / "targeted_trace.csv").find("generation,best_so_far") != std::string::npos);
  const auto m = anm::RunManifest::from_json(slurp(dir / "manifest.json"));
  CHECK(std::find(m.settings.begin(), m.settings.end(), std::pair<std::string, std::string>{"pattern", "0x2D"}) !=
        m.settings.end());
  CHECK(run({"evolve", "--text-file", text.string(), "--pattern", "Z", "--out", dir.string(), "--quiet"}).code ==
        anm::cli::input_error);

  const auto opt = fresh_dir("optimize");
  REQUIRE(run({"optimize-stimulus", "--out", opt.string(), "--quiet", "--param", "population_size=3",
               "generations=2", "min_length=10", "max_length=20"}).code == 0);
  const auto best = anm::load_stimulus(opt / "best_stimulus.json");
  CHECK(best.patterns.size() >= 10);
  CHECK(best.patterns.size() <= 20);
}
