#include "anm/catalogue.hpp"

#include "anm/error.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace anm {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(FormatError::Kind kind, const std::string& what) { throw FormatError(kind, what); }

json train_steps(const SpikeTrain& train, double step) {
  json times = json::array();
  for (double t : train.times) {
    const double q = t / step;
    const double r = std::round(q);
    if (std::abs(q - r) > 1e-6)
      throw ValidationError("spike time " + std::to_string(t) + " is not a multiple of the " + std::to_string(step) +
                            " ms time step");
    times.push_back(static_cast<long long>(r));
  }
  return times;
}

SpikeTrain train_from_steps(const json& times, double duration, double step) {
  SpikeTrain train;
  train.duration = duration;
  for (const auto& t : times) train.times.push_back(static_cast<double>(t.get<long long>()) * step);
  validate(train);
  return train;
}

json genome_json(const Genome& g) {
  json j;
  j["id"] = g.id;
  j["lineage"] = {{"generation", g.lineage.generation}, {"parents", g.lineage.parents}};
  json motifs = json::array();
  for (auto id : g.motifs) motifs.push_back(std::string(motif_name(id)));
  j["motifs"] = motifs;
  json edges = json::array();
  for (const auto& e : g.inter_motif_edges) edges.push_back(json::array({e.source, e.target, e.weight}));
  j["inter_motif_edges"] = edges;
  json inputs = json::array();
  for (const auto& e : g.input_edges) inputs.push_back(json::array({e.channel, e.target, e.weight}));
  j["input_edges"] = inputs;
  j["output_taps"] = g.output_taps;
  return j;
}

Genome genome_from(const json& j) {
  Genome g;
  g.id = j.at("id").get<GenomeId>();
  g.lineage.generation = j.at("lineage").at("generation").get<int>();
  g.lineage.parents = j.at("lineage").at("parents").get<std::vector<GenomeId>>();
  for (const auto& m : j.at("motifs")) g.motifs.push_back(parse_motif_id(m.get<std::string>()));
  for (const auto& e : j.at("inter_motif_edges"))
    g.inter_motif_edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
  for (const auto& e : j.at("input_edges"))
    g.input_edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
  g.output_taps = j.at("output_taps").get<std::vector<int>>();
  validate(g);
  return g;
}

json params_json(const EncodingParams& p) {
  return {{"window_ms", p.window_ms},
          {"burst_ms", p.burst_ms},
          {"spike_rate", p.spike_rate},
          {"bit_order", p.bit_order == BitOrder::lsb_first ? "lsb_first" : "msb_first"}};
}

EncodingParams params_from(const json& j) {
  EncodingParams p;
  p.window_ms = j.at("window_ms").get<double>();
  p.burst_ms = j.at("burst_ms").get<double>();
  p.spike_rate = j.at("spike_rate").get<int>();
  const auto order = j.at("bit_order").get<std::string>();
  if (order == "lsb_first") {
    p.bit_order = BitOrder::lsb_first;
  } else if (order == "msb_first") {
    p.bit_order = BitOrder::msb_first;
  } else {
    throw ValidationError("unknown bit_order '" + order + "'");
  }
  return p;
}

json key_values_json(const KeyValues& kv) {
  json j = json::object();
  for (const auto& [k, v] : kv) j[k] = v;
  return j;
}

KeyValues key_values_from(const json& j) {
  KeyValues kv;
  for (auto it = j.begin(); it != j.end(); ++it) kv.emplace_back(it.key(), it.value().get<std::string>());
  return kv;
}

json manifest_json(const RunManifest& m) {
  return {{"format_version", m.format_version},
          {"command", m.command},
          {"settings", key_values_json(m.settings)},
          {"inputs", key_values_json(m.inputs)}};
}

RunManifest manifest_from(const json& j) {
  RunManifest m;
  m.format_version = j.at("format_version").get<int>();
  m.command = j.at("command").get<std::string>();
  m.settings = key_values_from(j.at("settings"));
  m.inputs = key_values_from(j.at("inputs"));
  return m;
}

json parse_document(std::string_view text, std::string_view format) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(FormatError::Kind::corrupt, "corrupt " + std::string(format) + " file: " + e.what());
  }
  if (!j.is_object()) fail(FormatError::Kind::corrupt, "corrupt " + std::string(format) + " file: not an object");
  try {
    if (j.at("format").get<std::string>() != format)
      fail(FormatError::Kind::schema, "expected a " + std::string(format) + " file, found '" +
                                          j.at("format").get<std::string>() + "'");
    const int version = j.at("format_version").get<int>();
    if (version != kFormatVersion)
      fail(FormatError::Kind::version, "unsupported " + std::string(format) + " format_version " +
                                           std::to_string(version) + " (this build reads " +
                                           std::to_string(kFormatVersion) + ")");
  } catch (const json::exception& e) {
    fail(FormatError::Kind::schema, "malformed " + std::string(format) + " header: " + e.what());
  }
  return j;
}

template <class F>
auto with_schema(std::string_view format, F&& body) {
  try {
    return body();
  } catch (const json::exception& e) {
    fail(FormatError::Kind::schema, "malformed " + std::string(format) + " file: " + e.what());
  } catch (const ValidationError& e) {
    fail(FormatError::Kind::schema, "invalid " + std::string(format) + " content: " + e.what());
  }
}

}  // namespace

std::string RunManifest::to_json() const { return manifest_json(*this).dump(2) + "\n"; }

RunManifest RunManifest::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(FormatError::Kind::corrupt, std::string("corrupt manifest: ") + e.what());
  }
  return with_schema("manifest", [&] { return manifest_from(j); });
}

std::string RunManifest::hash() const { return sha256_hex(to_json()); }

std::string catalogue_to_json(const Catalogue& c) {
  json j;
  j["format"] = "anm-catalogue";
  j["format_version"] = kFormatVersion;
  j["manifest"] = manifest_json(c.manifest);
  j["time_step_ms"] = c.time_step_ms;
  json history = json::array();
  for (const auto& r : c.archive.history)
    history.push_back({{"generation", r.generation},
                       {"threshold", r.threshold},
                       {"mode", r.mode == MutationMode::normal ? "normal" : "pruning"},
                       {"mean_complexity", r.mean_complexity},
                       {"admitted", r.admitted}});
  j["history"] = history;
  json entries = json::array();
  for (const auto& e : c.archive.entries) {
    json outputs = json::array();
    double duration = 0.0;
    for (const auto& t : e.behaviour.outputs) {
      outputs.push_back(train_steps(t, c.time_step_ms));
      duration = t.duration;
    }
    entries.push_back({{"genome", genome_json(e.genome)},
                       {"generation", e.behaviour.generation},
                       {"sparseness", e.behaviour.sparseness},
                       {"threshold_at_admission", e.threshold_at_admission},
                       {"duration_steps", static_cast<long long>(std::llround(duration / c.time_step_ms))},
                       {"outputs", outputs}});
  }
  j["entries"] = entries;
  j["entry_count"] = c.archive.entries.size();
  return j.dump(1) + "\n";
}

Catalogue catalogue_from_json(std::string_view text) {
  const json j = parse_document(text, "anm-catalogue");
  return with_schema("anm-catalogue", [&] {
    Catalogue c;
    c.manifest = manifest_from(j.at("manifest"));
    c.time_step_ms = j.at("time_step_ms").get<double>();
    if (!(c.time_step_ms > 0.0)) throw ValidationError("time_step_ms must be positive");
    for (const auto& r : j.at("history")) {
      GenerationRecord g;
      g.generation = r.at("generation").get<int>();
      g.threshold = r.at("threshold").get<double>();
      const auto mode = r.at("mode").get<std::string>();
      if (mode != "normal" && mode != "pruning") throw ValidationError("unknown mode '" + mode + "'");
      g.mode = mode == "normal" ? MutationMode::normal : MutationMode::pruning;
      g.mean_complexity = r.at("mean_complexity").get<double>();
      g.admitted = r.at("admitted").get<int>();
      c.archive.history.push_back(g);
    }
    const auto& entries = j.at("entries");
    const auto expected = j.contains("entry_count") ? j.at("entry_count").get<std::size_t>() : std::size_t{0};
    if (!j.contains("entry_count") || expected != entries.size())
      fail(FormatError::Kind::incomplete, "incomplete catalogue: entry_count " + std::to_string(expected) +
                                              " but " + std::to_string(entries.size()) + " entries present");
    for (const auto& e : entries) {
      ArchiveEntry entry;
      entry.genome = genome_from(e.at("genome"));
      entry.behaviour.genome_id = entry.genome.id;
      entry.behaviour.generation = e.at("generation").get<int>();
      entry.behaviour.sparseness = e.at("sparseness").get<double>();
      entry.threshold_at_admission = e.at("threshold_at_admission").get<double>();
      const double duration = static_cast<double>(e.at("duration_steps").get<long long>()) * c.time_step_ms;
      for (const auto& o : e.at("outputs")) entry.behaviour.outputs.push_back(train_from_steps(o, duration, c.time_step_ms));
      c.archive.entries.push_back(std::move(entry));
    }
    return c;
  });
}

void save_catalogue(const Catalogue& catalogue, const std::filesystem::path& path) {
  write_file_atomic(path, catalogue_to_json(catalogue));
}

Catalogue load_catalogue(const std::filesystem::path& path) { return catalogue_from_json(read_file(path)); }

std::string stimulus_to_json(const StimulusProgram& s, bool materialise_trains) {
  json j;
  j["format"] = "anm-stimulus";
  j["format_version"] = kFormatVersion;
  j["params"] = params_json(s.params);
  j["patterns"] = s.patterns;
  const double step = 1.0 / s.params.spike_rate;
  j["time_step_ms"] = step;
  if (materialise_trains) {
    json trains = json::array();
    for (const auto& t : s.trains) trains.push_back(train_steps(t, step));
    j["trains"] = trains;
  }
  return j.dump(1) + "\n";
}

StimulusProgram stimulus_from_json(std::string_view text) {
  const json j = parse_document(text, "anm-stimulus");
  return with_schema("anm-stimulus", [&] {
    const auto params = params_from(j.at("params"));
    const auto patterns = j.at("patterns").get<std::vector<std::uint8_t>>();
    StimulusProgram s = encode_patterns(patterns, params);
    if (j.contains("trains")) {
      const double step = j.at("time_step_ms").get<double>();
      const auto& trains = j.at("trains");
      if (trains.size() != s.trains.size()) throw ValidationError("stimulus trains do not match channel count");
      for (std::size_t c = 0; c < s.trains.size(); ++c)
        if (train_from_steps(trains.at(c), s.duration(), step) != s.trains[c])
          throw ValidationError("materialised train of channel " + std::to_string(c) + " disagrees with its patterns");
    }
    return s;
  });
}

void save_stimulus(const StimulusProgram& s, const std::filesystem::path& path, bool materialise_trains) {
  write_file_atomic(path, stimulus_to_json(s, materialise_trains));
}

StimulusProgram load_stimulus(const std::filesystem::path& path) { return stimulus_from_json(read_file(path)); }

std::string genome_to_json(const Genome& genome) {
  json j;
  j["format"] = "anm-genome";
  j["format_version"] = kFormatVersion;
  j["genome"] = genome_json(genome);
  return j.dump(1) + "\n";
}

Genome genome_from_json(std::string_view text) {
  const json j = parse_document(text, "anm-genome");
  return with_schema("anm-genome", [&] { return genome_from(j.at("genome")); });
}

std::string ideal_responses_to_json(const StimulusProgram& stimulus) {
  json j;
  j["format"] = "anm-ideal-responses";
  j["format_version"] = kFormatVersion;
  const double step = 1.0 / stimulus.params.spike_rate;
  j["time_step_ms"] = step;
  j["duration_steps"] = static_cast<long long>(std::llround(stimulus.duration() / step));
  json responses = json::array();
  for (const auto& [pattern, train] : ideal_responses(stimulus))
    responses.push_back({{"pattern", pattern}, {"label", pattern_label(pattern)}, {"times", train_steps(train, step)}});
  j["responses"] = responses;
  return j.dump(1) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(FormatError::Kind::io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(FormatError::Kind::io, "error while reading '" + path.string() + "'");
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(FormatError::Kind::io, "cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      fail(FormatError::Kind::io, "partial write to '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(FormatError::Kind::io, "cannot move '" + tmp.string() + "' into place: " + ec.message());
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 computation failed");
  std::string hex;
  hex.reserve(length * 2);
  char buf[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

}  // namespace anm
