#include "anm_cli/cli.hpp"

#include "anm/catalogue.hpp"
#include "anm/config.hpp"
#include "anm/error.hpp"
#include "anm/parallel.hpp"
#include "anm/reports.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace anm::cli {
namespace fs = std::filesystem;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out = ".";
  std::optional<double> sample_dt;
  std::optional<int> threads;
  bool quiet = false;
  std::vector<std::string> params;
};

// Where a command reads its stimulus from: a stimulus file or a text file
// encoded on the fly with the configured encoding.
struct StimulusSource {
  std::string stimulus;
  std::string text_file;
};

struct Context {
  const Globals& globals;
  std::string command;
  std::ostream& out;
  std::ostream& err;
  KeyValues inputs;

  void progress(const std::string& line) const {
    if (!globals.quiet) err << line << '\n';
  }
};

// Settings layered as defaults < config file < --param < dedicated flags.
ConfigMap collect_settings(const Globals& g) {
  ConfigMap map;
  if (!g.config.empty()) {
    const fs::path path(g.config);
    if (path.extension() == ".json") {
      // a manifest from an earlier run
      for (auto& [k, v] : RunManifest::from_json(read_file(path)).settings) map[k] = v;
    } else {
      map = load_config(path);
    }
  }
  for (const auto& p : g.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw ValidationError("--param expects key=value, got '" + p + "'");
    map[p.substr(0, eq)] = p.substr(eq + 1);
  }
  if (g.seed) map["seed"] = std::to_string(*g.seed);
  if (g.sample_dt) map["sample_dt"] = format_number(*g.sample_dt);
  return map;
}

using Applier = std::function<bool(std::string_view, std::string_view)>;

// Offers each key to the appliers in turn; a key nobody claims is an error.
void apply_all(const ConfigMap& map, const std::string& command, std::initializer_list<Applier> appliers) {
  for (const auto& [key, value] : map) {
    bool used = false;
    for (const auto& a : appliers)
      if (a(key, value)) used = true;
    if (!used) throw ValidationError("unknown config key '" + key + "' for command '" + command + "'");
  }
}

double parse_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty())
    throw ValidationError("setting '" + std::string(key) + "': cannot parse '" + std::string(text) + "'");
  return v;
}

// Generic keys every command accepts even when it does not use them, so one
// config file can serve several commands.
struct Common {
  std::uint64_t seed = 1;
  double sample_dt = kDefaultSampleDt;

  Applier applier() {
    return [this](std::string_view k, std::string_view v) {
      if (k == "seed") {
        std::uint64_t s = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
        if (ec != std::errc{} || ptr != v.data() + v.size())
          throw ValidationError("setting 'seed': cannot parse '" + std::string(v) + "'");
        seed = s;
        return true;
      }
      if (k == "sample_dt") {
        sample_dt = parse_double(k, v);
        if (!(sample_dt > 0.0)) throw ValidationError("sample_dt must be positive");
        return true;
      }
      return false;
    };
  }
  KeyValues entries() const { return {{"seed", std::to_string(seed)}, {"sample_dt", format_number(sample_dt)}}; }
};

Applier encoding_applier(EncodingParams& p) {
  return [&p](std::string_view k, std::string_view v) { return apply_setting(p, k, v); };
}

std::string hash_of_file(const fs::path& path) { return sha256_hex(read_file(path)); }

StimulusProgram load_source(Context& ctx, const StimulusSource& src, const EncodingParams& encoding) {
  if (!src.stimulus.empty() && !src.text_file.empty())
    throw ValidationError("give either --stimulus or --text-file, not both");
  if (!src.stimulus.empty()) {
    ctx.inputs.emplace_back("stimulus", hash_of_file(src.stimulus));
    return load_stimulus(src.stimulus);
  }
  if (!src.text_file.empty()) {
    const auto text = read_file(src.text_file);
    ctx.inputs.emplace_back("text", sha256_hex(text));
    return encode_text(text, encoding);
  }
  throw ValidationError("a stimulus is required (--stimulus or --text-file)");
}

// Failures while writing results are runtime failures, unlike unreadable inputs.
struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
void writing(F&& body) {
  try {
    body();
  } catch (const FormatError& e) {
    throw OutputError(e.what());
  }
}

fs::path out_dir(const Context& ctx) {
  const fs::path dir(ctx.globals.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

RunManifest make_manifest(const Context& ctx, KeyValues settings) {
  RunManifest m;
  m.command = ctx.command;
  m.settings = std::move(settings);
  m.inputs = ctx.inputs;
  return m;
}

void write_manifest(const Context& ctx, const RunManifest& m) {
  writing([&] { write_file_atomic(out_dir(ctx) / "manifest.json", m.to_json()); });
}

template <class F>
void write_csv(const Context& ctx, const std::string& name, F&& body) {
  std::ostringstream ss;
  body(ss);
  writing([&] { write_file_atomic(out_dir(ctx) / name, ss.str()); });
}

void append(KeyValues& to, const KeyValues& from) { to.insert(to.end(), from.begin(), from.end()); }

std::string fixed(double v, int decimals = 6) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(decimals);
  ss << v;
  return ss.str();
}

std::uint8_t parse_pattern(const std::string& text) {
  if (text.size() == 1) return static_cast<std::uint8_t>(text[0]);
  static const std::map<std::string, std::uint8_t, std::less<>> names{
      {"SPACE", ' '}, {"COMMA", ','}, {"STOP", '.'}, {"DASH", '-'}, {"QUOTE", '"'}};
  if (const auto it = names.find(text); it != names.end()) return it->second;
  int v = 0;
  const int base = text.rfind("0x", 0) == 0 ? 16 : 10;
  const char* begin = text.data() + (base == 16 ? 2 : 0);
  const auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), v, base);
  if (ec != std::errc{} || ptr != text.data() + text.size() || v < 1 || v > 255)
    throw ValidationError("pattern '" + text + "' is neither a character, a label nor a byte value 1..255");
  return static_cast<std::uint8_t>(v);
}

std::vector<std::uint8_t> parse_pattern_list(const std::string& text) {
  std::vector<std::uint8_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || ptr != item.data() + item.size() || v < 0 || v > 255)
      throw ValidationError("--patterns expects comma separated byte values, got '" + item + "'");
    out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

// ---- commands ----

struct EncodeArgs {
  std::string text;
  std::string text_file;
  std::string patterns;
  bool no_trains = false;
};

int cmd_encode(Context& ctx, const EncodeArgs& a) {
  Common common;
  EncodingParams enc;
  bool materialise = !a.no_trains;
  apply_all(collect_settings(ctx.globals), ctx.command,
            {common.applier(), encoding_applier(enc), [&](std::string_view k, std::string_view v) {
               if (k != "materialise_trains") return false;
               if (v != "true" && v != "false")
                 throw ValidationError("setting 'materialise_trains': expected true or false, got '" + std::string(v) + "'");
               materialise = v == "true";
               return true;
             }});
  if (a.no_trains) materialise = false;
  validate(enc);
  const int given = !a.text.empty() + !a.text_file.empty() + !a.patterns.empty();
  if (given != 1) throw ValidationError("encode needs exactly one of --text, --text-file, --patterns");
  StimulusProgram stim;
  if (!a.patterns.empty()) {
    const auto p = parse_pattern_list(a.patterns);
    ctx.inputs.emplace_back("patterns", sha256_hex(std::string(p.begin(), p.end())));
    stim = encode_patterns(p, enc);
  } else {
    const auto text = a.text.empty() ? read_file(a.text_file) : a.text;
    ctx.inputs.emplace_back("text", sha256_hex(text));
    stim = encode_text(text, enc);
  }
  KeyValues settings = setting_entries(enc);
  settings.emplace_back("materialise_trains", materialise ? "true" : "false");
  write_manifest(ctx, make_manifest(ctx, settings));
  writing([&] { save_stimulus(stim, out_dir(ctx) / "stimulus.json", materialise); });
  ctx.out << "encoded " << stim.patterns.size() << " patterns (" << stim.alphabet.size() << " unique), duration "
          << format_number(stim.duration()) << " ms\n";
  return ok;
}

struct GenerateArgs {
  StimulusSource source;
  std::string motif_set;
};

int cmd_generate(Context& ctx, const GenerateArgs& a) {
  NoveltySettings s;
  EncodingParams enc;
  std::string motif_set = "initial";
  apply_all(collect_settings(ctx.globals), ctx.command,
            {[&](std::string_view k, std::string_view v) { return apply_setting(s, k, v); }, encoding_applier(enc),
             [&](std::string_view k, std::string_view v) {
               if (k != "motif_set") return false;
               motif_set = std::string(v);
               return true;
             }});
  if (!a.motif_set.empty()) motif_set = a.motif_set;
  const auto set = MotifSet::parse(motif_set);
  validate(s);
  const auto stim = load_source(ctx, a.source, enc);

  KeyValues settings = setting_entries(s);
  settings.emplace_back("motif_set", set.to_string());
  if (!a.source.text_file.empty()) append(settings, setting_entries(enc));
  const auto manifest = make_manifest(ctx, settings);
  write_manifest(ctx, manifest);

  const auto archive = run_novelty_search(s, stim, set, [&](const GenerationReport& r) {
    ctx.progress("generation " + std::to_string(r.generation) + ": admitted " + std::to_string(r.record->admitted) +
                 ", threshold " + fixed(r.record->threshold, 4) + ", mean complexity " +
                 fixed(r.record->mean_complexity, 1) + ", mode " + std::string(mode_name(r.record->mode)));
  });
  const Catalogue cat{manifest, s.neuron.dt, archive};
  writing([&] { save_catalogue(cat, out_dir(ctx) / "catalogue.json"); });
  write_csv(ctx, "novelty_trace.csv", [&](std::ostream& o) { write_novelty_trace_csv(o, archive, manifest.hash()); });
  ctx.out << "catalogue: " << archive.entries.size() << " entries after " << archive.history.size()
          << " generations\n";
  return ok;
}

struct AnalyzeArgs {
  std::string catalogue;
  StimulusSource source;
  std::string grouping;
};

int cmd_analyze(Context& ctx, const AnalyzeArgs& a) {
  Common common;
  EncodingParams enc;
  std::string grouping = "overall";
  apply_all(collect_settings(ctx.globals), ctx.command,
            {common.applier(), encoding_applier(enc), [&](std::string_view k, std::string_view v) {
               if (k != "grouping") return false;
               grouping = std::string(v);
               return true;
             }});
  if (!a.grouping.empty()) grouping = a.grouping;
  if (grouping != "overall" && grouping != "by_generation")
    throw ValidationError("grouping must be overall or by_generation, got '" + grouping + "'");
  if (a.catalogue.empty()) throw ValidationError("analyze needs --catalogue");
  ctx.inputs.emplace_back("catalogue", hash_of_file(a.catalogue));
  const auto cat = load_catalogue(a.catalogue);
  if (cat.archive.entries.empty()) throw ValidationError("catalogue '" + a.catalogue + "' has no entries to analyse");
  const auto stim = load_source(ctx, a.source, enc);

  KeyValues settings = common.entries();
  settings.emplace_back("grouping", grouping);
  if (!a.source.text_file.empty()) append(settings, setting_entries(enc));
  const auto manifest = make_manifest(ctx, settings);
  write_manifest(ctx, manifest);

  std::vector<CatalogueCorrelation> rows;
  std::vector<Genome> genomes;
  std::size_t strong = 0;
  for (const auto& e : cat.archive.entries) {
    if (e.behaviour.outputs.empty()) throw ValidationError("catalogue entry " + std::to_string(e.genome.id) + " has no output");
    rows.push_back({e.genome.id, correlation_report(e.behaviour.outputs.front(), stim)});
    genomes.push_back(e.genome);
    strong += static_cast<std::size_t>(std::count_if(rows.back().report.begin(), rows.back().report.end(),
                                                     [](const auto& p) { return p.correlation == Correlation::strong; }));
  }
  const auto groups =
      motif_makeup(genomes, grouping == "overall" ? MakeupGrouping::overall : MakeupGrouping::by_generation);
  write_csv(ctx, "correlation.csv", [&](std::ostream& o) { write_correlation_csv(o, rows, manifest.hash()); });
  write_csv(ctx, "makeup.csv", [&](std::ostream& o) { write_makeup_csv(o, groups, manifest.hash()); });
  ctx.out << "analysed " << rows.size() << " entries; " << strong << " strong pattern correlations\n";
  for (const auto& g : groups)
    if (g.generation < 0)
      for (const auto& [id, pct] : g.percent) ctx.out << "  " << motif_name(id) << ' ' << fixed(pct, 1) << "%\n";
  return ok;
}

int cmd_ideal(Context& ctx, const StimulusSource& src) {
  Common common;
  EncodingParams enc;
  apply_all(collect_settings(ctx.globals), ctx.command, {common.applier(), encoding_applier(enc)});
  const auto stim = load_source(ctx, src, enc);
  KeyValues settings = common.entries();
  if (!src.text_file.empty()) append(settings, setting_entries(enc));
  write_manifest(ctx, make_manifest(ctx, settings));
  writing([&] { write_file_atomic(out_dir(ctx) / "ideal_responses.json", ideal_responses_to_json(stim)); });
  ctx.out << "wrote " << stim.alphabet.size() << " ideal responses\n";
  return ok;
}

struct SeparabilityArgs {
  StimulusSource source;
  std::optional<double> threshold;
};

int cmd_separability(Context& ctx, const SeparabilityArgs& a) {
  Common common;
  EncodingParams enc;
  double threshold = 0.5;
  apply_all(collect_settings(ctx.globals), ctx.command,
            {common.applier(), encoding_applier(enc), [&](std::string_view k, std::string_view v) {
               if (k != "threshold") return false;
               threshold = parse_double(k, v);
               return true;
             }});
  if (a.threshold) threshold = *a.threshold;
  const auto stim = load_source(ctx, a.source, enc);
  KeyValues settings = common.entries();
  settings.emplace_back("threshold", format_number(threshold));
  if (!a.source.text_file.empty()) append(settings, setting_entries(enc));
  const auto manifest = make_manifest(ctx, settings);
  write_manifest(ctx, manifest);

  const auto sep = separability(stim, threshold, common.sample_dt);
  write_csv(ctx, "heatmap.csv", [&](std::ostream& o) { write_heatmap_csv(o, sep.matrix, manifest.hash()); });
  write_csv(ctx, "over_threshold.csv", [&](std::ostream& o) { write_over_threshold_csv(o, sep, manifest.hash()); });

  int pairs = 0;
  for (int c : sep.over_threshold) pairs += c;
  ctx.out << sep.patterns.size() << " patterns, " << pairs / 2 << " pairs at or above " << format_number(threshold)
          << '\n';
  std::vector<std::size_t> order(sep.patterns.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sep.over_threshold[x] > sep.over_threshold[y]; });
  for (std::size_t i = 0; i < std::min<std::size_t>(5, order.size()); ++i)
    ctx.out << "  " << pattern_label(sep.patterns[order[i]]) << ' ' << sep.over_threshold[order[i]] << '\n';
  return ok;
}

int cmd_optimize(Context& ctx) {
  StimulusOptSettings s;
  apply_all(collect_settings(ctx.globals), ctx.command,
            {[&](std::string_view k, std::string_view v) { return apply_setting(s, k, v); }});
  validate(s);
  const auto manifest = make_manifest(ctx, setting_entries(s));
  write_manifest(ctx, manifest);
  ctx.progress("optimising stimulus: population " + std::to_string(s.population_size) + ", " +
               std::to_string(s.generations) + " generations");
  const auto result = optimize_stimulus(s);
  writing([&] { save_stimulus(encode_patterns(result.best, s.encoding), out_dir(ctx) / "best_stimulus.json"); });
  write_csv(ctx, "stimulus_trace.csv", [&](std::ostream& o) { write_stimulus_trace_csv(o, result, manifest.hash()); });
  ctx.out << "best fitness " << fixed(result.best_fitness.fitness) << ", " << result.best_fitness.over_threshold
          << " pairs over threshold, length " << result.best.size() << '\n';
  return ok;
}

struct EvolveArgs {
  StimulusSource source;
  std::string pattern;
  std::string motif_set;
};

int cmd_evolve(Context& ctx, const EvolveArgs& a) {
  TargetedSettings s;
  EncodingParams enc;
  std::string motif_set = "initial";
  std::string pattern;
  apply_all(collect_settings(ctx.globals), ctx.command,
            {[&](std::string_view k, std::string_view v) { return apply_setting(s, k, v); }, encoding_applier(enc),
             [&](std::string_view k, std::string_view v) {
               if (k == "motif_set") {
                 motif_set = std::string(v);
                 return true;
               }
               if (k == "pattern") {
                 pattern = std::string(v);
                 return true;
               }
               return false;
             }});
  if (!a.motif_set.empty()) motif_set = a.motif_set;
  if (!a.pattern.empty()) pattern = a.pattern;
  const auto set = MotifSet::parse(motif_set);
  validate(s);
  const auto stim = load_source(ctx, a.source, enc);

  std::uint8_t target_pattern = 0;
  if (pattern.empty()) {
    // most frequent pattern, lowest byte on ties
    std::size_t best = 0;
    for (const auto& [p, windows] : stim.alphabet)
      if (windows.size() > best) {
        best = windows.size();
        target_pattern = p;
      }
  } else {
    target_pattern = parse_pattern(pattern);
    if (!stim.alphabet.contains(target_pattern))
      throw ValidationError("pattern " + pattern_label(target_pattern) + " does not occur in the stimulus");
  }
  const auto target = ideal_responses(stim).at(target_pattern);

  KeyValues settings = setting_entries(s);
  settings.emplace_back("motif_set", set.to_string());
  char hex[8];
  std::snprintf(hex, sizeof hex, "0x%02X", static_cast<unsigned>(target_pattern));
  settings.emplace_back("pattern", hex);
  if (!a.source.text_file.empty()) append(settings, setting_entries(enc));
  const auto manifest = make_manifest(ctx, settings);
  write_manifest(ctx, manifest);

  ctx.progress("evolving towards the ideal response of " + pattern_label(target_pattern));
  const auto result = evolve_targeted(s, stim, target, set);
  writing([&] { write_file_atomic(out_dir(ctx) / "best_genome.json", genome_to_json(result.best)); });
  write_csv(ctx, "targeted_trace.csv", [&](std::ostream& o) { write_targeted_trace_csv(o, result, manifest.hash()); });
  ctx.out << "best distance " << fixed(result.best_distance) << " after " << result.best_so_far.size()
          << " generations (generation 0 best " << fixed(result.best_so_far.front()) << ")\n";
  return ok;
}

void add_source_options(CLI::App* sub, StimulusSource& src) {
  sub->add_option("--stimulus", src.stimulus, "Stimulus file written by encode");
  sub->add_option("--text-file", src.text_file, "Text file encoded with the configured encoding");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evolutionary discovery of spiking network motifs", "anm"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--config", g.config, "key=value config file, or a manifest.json to replay");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--sample-dt", g.sample_dt, "SPIKE-distance sampling step in ms");
  app.add_option("--threads", g.threads, "Worker threads (default: ANM_THREADS or all cores)");
  app.add_option("--param", g.params, "Setting override key=value (repeatable)")->take_all();
  app.add_flag("--quiet", g.quiet, "Suppress progress output");

  EncodeArgs encode;
  auto* s_encode = app.add_subcommand("encode", "Encode text or byte patterns into a stimulus file");
  s_encode->add_option("--text", encode.text, "Text to encode");
  s_encode->add_option("--text-file", encode.text_file, "File whose text is encoded");
  s_encode->add_option("--patterns", encode.patterns, "Comma separated byte values");
  s_encode->add_flag("--no-trains", encode.no_trains, "Store only the pattern list");

  GenerateArgs generate;
  auto* s_generate = app.add_subcommand("generate", "Novelty search producing a behaviour catalogue");
  add_source_options(s_generate, generate.source);
  s_generate->add_option("--motif-set", generate.motif_set, "Profile name or comma separated motif ids");

  AnalyzeArgs analyze;
  auto* s_analyze = app.add_subcommand("analyze", "Correlation and motif makeup reports for a catalogue");
  s_analyze->add_option("--catalogue", analyze.catalogue, "Catalogue file")->required();
  add_source_options(s_analyze, analyze.source);
  s_analyze->add_option("--grouping", analyze.grouping, "overall or by_generation");

  StimulusSource ideal;
  auto* s_ideal = app.add_subcommand("ideal", "Ideal response trains of every stimulus pattern");
  add_source_options(s_ideal, ideal);

  SeparabilityArgs sep;
  auto* s_sep = app.add_subcommand("separability", "Pairwise distances between ideal responses");
  add_source_options(s_sep, sep.source);
  s_sep->add_option("--threshold", sep.threshold, "Separability threshold");

  auto* s_opt = app.add_subcommand("optimize-stimulus", "Evolve a byte-pattern stimulus with separable responses");

  EvolveArgs evolve;
  auto* s_evolve = app.add_subcommand("evolve", "Evolve a network towards one pattern's ideal response");
  add_source_options(s_evolve, evolve.source);
  s_evolve->add_option("--pattern", evolve.pattern, "Target pattern: character, label or byte value");
  s_evolve->add_option("--motif-set", evolve.motif_set, "Profile name or comma separated motif ids");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage_error;
  }

  Context ctx{g, app.get_subcommands().front()->get_name(), out, err, {}};
  try {
    if (g.threads) {
      if (*g.threads < 1) throw ValidationError("--threads must be at least 1");
      set_thread_count(static_cast<std::size_t>(*g.threads));
    }
    if (s_encode->parsed()) return cmd_encode(ctx, encode);
    if (s_generate->parsed()) return cmd_generate(ctx, generate);
    if (s_analyze->parsed()) return cmd_analyze(ctx, analyze);
    if (s_ideal->parsed()) return cmd_ideal(ctx, ideal);
    if (s_sep->parsed()) return cmd_separability(ctx, sep);
    if (s_opt->parsed()) return cmd_optimize(ctx);
    if (s_evolve->parsed()) return cmd_evolve(ctx, evolve);
  } catch (const ValidationError& e) {
    err << "anm " << ctx.command << ": " << e.what() << '\n';
    return input_error;
  } catch (const FormatError& e) {
    err << "anm " << ctx.command << ": " << e.what() << '\n';
    return input_error;
  } catch (const OutputError& e) {
    err << "anm " << ctx.command << ": " << e.what() << '\n';
    return runtime_failure;
  } catch (const std::exception& e) {
    err << "anm " << ctx.command << ": " << e.what() << '\n';
    return runtime_failure;
  }
  return usage_error;
}

}  // namespace anm::cli
