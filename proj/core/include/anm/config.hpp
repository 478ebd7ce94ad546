#pragma once

#include "anm/catalogue.hpp"
#include "anm/novelty_search.hpp"
#include "anm/stimulus_lab.hpp"
#include "anm/stimulus_optimizer.hpp"
#include "anm/targeted_evolution.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace anm {

/// Flat key=value document. Blank lines and lines starting with '#' are ignored.
using ConfigMap = std::map<std::string, std::string, std::less<>>;

ConfigMap parse_config(std::string_view text);
ConfigMap load_config(const std::filesystem::path& path);

/// Each returns false when `key` is not a setting of that type and throws
/// ValidationError when the value does not parse.
bool apply_setting(NoveltySettings& s, std::string_view key, std::string_view value);
bool apply_setting(TargetedSettings& s, std::string_view key, std::string_view value);
bool apply_setting(StimulusOptSettings& s, std::string_view key, std::string_view value);
bool apply_setting(EncodingParams& p, std::string_view key, std::string_view value);

/// All settings as key/value strings in a fixed order, round-trippable
/// through apply_setting.
KeyValues setting_entries(const NoveltySettings& s);
KeyValues setting_entries(const TargetedSettings& s);
KeyValues setting_entries(const StimulusOptSettings& s);
KeyValues setting_entries(const EncodingParams& p);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

}  // namespace anm
