#pragma once

#include "anm/genome.hpp"
#include "anm/novelty_search.hpp"
#include "anm/stimulus_lab.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace anm {

inline constexpr int kFormatVersion = 1;

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Everything needed to replay a run: command, every setting, seed and input
/// fingerprints. Contains nothing machine- or time-dependent.
struct RunManifest {
  int format_version = kFormatVersion;
  std::string command;
  KeyValues settings;
  KeyValues inputs;

  std::string to_json() const;
  static RunManifest from_json(std::string_view text);
  /// SHA-256 of to_json(), hex encoded.
  std::string hash() const;

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

struct Catalogue {
  RunManifest manifest;
  double time_step_ms = 1.0;  // spike times are stored as integer multiples
  NoveltyArchive archive;

  friend bool operator==(const Catalogue&, const Catalogue&) = default;
};

std::string catalogue_to_json(const Catalogue& catalogue);
/// Throws FormatError (corrupt, version, incomplete or schema).
Catalogue catalogue_from_json(std::string_view text);

/// Writes through a temporary file and a rename, so readers never observe a
/// half-written catalogue.
void save_catalogue(const Catalogue& catalogue, const std::filesystem::path& path);
Catalogue load_catalogue(const std::filesystem::path& path);

std::string stimulus_to_json(const StimulusProgram& stimulus, bool materialise_trains = true);
StimulusProgram stimulus_from_json(std::string_view text);
void save_stimulus(const StimulusProgram& stimulus, const std::filesystem::path& path, bool materialise_trains = true);
StimulusProgram load_stimulus(const std::filesystem::path& path);

std::string genome_to_json(const Genome& genome);
Genome genome_from_json(std::string_view text);

std::string ideal_responses_to_json(const StimulusProgram& stimulus);

std::string read_file(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string sha256_hex(std::string_view data);

}  // namespace anm
