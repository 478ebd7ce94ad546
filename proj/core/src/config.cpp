#include "anm/config.hpp"

#include "anm/error.hpp"

#include <charconv>
#include <functional>
#include <string>
#include <vector>

namespace anm {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty())
    throw ValidationError("setting '" + std::string(key) + "': cannot parse '" + std::string(text) + "'");
  return value;
}

template <class T>
std::string number_text(T value) {
  if constexpr (std::is_floating_point_v<T>) {
    return format_number(value);
  } else {
    return std::to_string(value);
  }
}

template <class S>
struct Binding {
  std::string_view key;
  std::function<void(S&, std::string_view)> set;
  std::function<std::string(const S&)> get;
};

template <class S, class Member>
Binding<S> field(std::string_view key, Member member) {
  using T = std::remove_cvref_t<decltype(std::declval<S&>().*member)>;
  return {key, [key, member](S& s, std::string_view v) { s.*member = parse_number<T>(key, v); },
          [member](const S& s) { return number_text(s.*member); }};
}

// Lifts a binding of a nested struct into the enclosing one.
template <class S, class Inner>
std::vector<Binding<S>> nest(Inner S::*member, const std::vector<Binding<Inner>>& inner) {
  std::vector<Binding<S>> out;
  for (const auto& b : inner)
    out.push_back({b.key, [member, set = b.set](S& s, std::string_view v) { set(s.*member, v); },
                   [member, get = b.get](const S& s) { return get(s.*member); }});
  return out;
}

template <class S>
void append(std::vector<Binding<S>>& to, const std::vector<Binding<S>>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

std::vector<Binding<NeuronParams>> neuron_bindings() {
  using P = NeuronParams;
  return {field<P>("tau", &P::tau), field<P>("v_threshold", &P::v_threshold), field<P>("v_reset", &P::v_reset),
          field<P>("refractory", &P::refractory), field<P>("dt", &P::dt)};
}

std::vector<Binding<GenomeOperators>> operator_bindings() {
  using O = GenomeOperators;
  using R = MutationRates;
  std::vector<Binding<O>> b{field<O>("p_conn", &O::p_conn), field<O>("ratio_low", &O::ratio_low),
                            field<O>("output_count", &O::output_count)};
  append(b, nest(&O::rates, std::vector<Binding<R>>{field<R>("rate_add_motif", &R::add_motif),
                                                    field<R>("rate_remove_motif", &R::remove_motif),
                                                    field<R>("rate_replace_motif", &R::replace_motif),
                                                    field<R>("rate_reweight", &R::reweight),
                                                    field<R>("rate_retarget_output", &R::retarget_output)}));
  return b;
}

std::vector<Binding<PruningThresholds>> pruning_bindings() {
  using P = PruningThresholds;
  return {field<P>("pruning_start", &P::start), field<P>("pruning_end", &P::end)};
}

std::vector<Binding<EncodingParams>> encoding_bindings() {
  using E = EncodingParams;
  std::vector<Binding<E>> b{field<E>("window_ms", &E::window_ms), field<E>("burst_ms", &E::burst_ms),
                            field<E>("spike_rate", &E::spike_rate)};
  b.push_back({"bit_order",
               [](E& e, std::string_view v) {
                 if (v == "lsb_first") {
                   e.bit_order = BitOrder::lsb_first;
                 } else if (v == "msb_first") {
                   e.bit_order = BitOrder::msb_first;
                 } else {
                   throw ValidationError("setting 'bit_order': expected lsb_first or msb_first, got '" +
                                         std::string(v) + "'");
                 }
               },
               [](const E& e) { return std::string(e.bit_order == BitOrder::lsb_first ? "lsb_first" : "msb_first"); }});
  return b;
}

const std::vector<Binding<NoveltySettings>>& novelty_bindings() {
  using S = NoveltySettings;
  static const auto table = [] {
    std::vector<Binding<S>> b{field<S>("population_size", &S::population_size),
                              field<S>("generations", &S::generations),
                              field<S>("k_neighbours", &S::k_neighbours),
                              field<S>("p_threshold_initial", &S::p_threshold_initial),
                              field<S>("stagnation_generations", &S::stagnation_generations),
                              field<S>("burst_additions", &S::burst_additions),
                              field<S>("burst_window", &S::burst_window),
                              field<S>("lower_factor", &S::lower_factor),
                              field<S>("raise_factor", &S::raise_factor),
                              field<S>("initial_motifs", &S::initial_motifs)};
    append(b, nest(&S::pruning, pruning_bindings()));
    append(b, nest(&S::operators, operator_bindings()));
    append(b, nest(&S::neuron, neuron_bindings()));
    b.push_back(field<S>("sample_dt", &S::sample_dt));
    b.push_back(field<S>("seed", &S::seed));
    return b;
  }();
  return table;
}

const std::vector<Binding<TargetedSettings>>& targeted_bindings() {
  using S = TargetedSettings;
  static const auto table = [] {
    std::vector<Binding<S>> b{field<S>("population_size", &S::population_size), field<S>("generations", &S::generations),
                              field<S>("goal", &S::goal), field<S>("tournament_size", &S::tournament_size),
                              field<S>("initial_motifs", &S::initial_motifs)};
    append(b, nest(&S::pruning, pruning_bindings()));
    append(b, nest(&S::operators, operator_bindings()));
    append(b, nest(&S::neuron, neuron_bindings()));
    b.push_back(field<S>("sample_dt", &S::sample_dt));
    b.push_back(field<S>("seed", &S::seed));
    return b;
  }();
  return table;
}

const std::vector<Binding<StimulusOptSettings>>& stimulus_bindings() {
  using S = StimulusOptSettings;
  static const auto table = [] {
    std::vector<Binding<S>> b{field<S>("population_size", &S::population_size), field<S>("generations", &S::generations),
                              field<S>("min_length", &S::min_length),      field<S>("max_length", &S::max_length),
                              field<S>("elite_fraction", &S::elite_fraction),
                              field<S>("mutation_rate", &S::mutation_rate), field<S>("threshold", &S::threshold)};
    append(b, nest(&S::encoding, encoding_bindings()));
    b.push_back(field<S>("sample_dt", &S::sample_dt));
    b.push_back(field<S>("seed", &S::seed));
    return b;
  }();
  return table;
}

template <class S>
bool apply(const std::vector<Binding<S>>& table, S& s, std::string_view key, std::string_view value) {
  for (const auto& b : table)
    if (b.key == key) {
      b.set(s, trim(value));
      return true;
    }
  return false;
}

template <class S>
KeyValues entries(const std::vector<Binding<S>>& table, const S& s) {
  KeyValues out;
  for (const auto& b : table) out.emplace_back(std::string(b.key), b.get(s));
  return out;
}

}  // namespace

ConfigMap parse_config(std::string_view text) {
  ConfigMap map;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key=value");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ValidationError("config line " + std::to_string(line_no) + ": empty key");
    if (!map.emplace(std::string(key), std::string(trim(line.substr(eq + 1)))).second)
      throw ValidationError("config line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
  }
  return map;
}

ConfigMap load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const FormatError& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  return parse_config(text);
}

bool apply_setting(NoveltySettings& s, std::string_view key, std::string_view value) {
  return apply(novelty_bindings(), s, key, value);
}
bool apply_setting(TargetedSettings& s, std::string_view key, std::string_view value) {
  return apply(targeted_bindings(), s, key, value);
}
bool apply_setting(StimulusOptSettings& s, std::string_view key, std::string_view value) {
  return apply(stimulus_bindings(), s, key, value);
}
bool apply_setting(EncodingParams& p, std::string_view key, std::string_view value) {
  static const auto table = encoding_bindings();
  return apply(table, p, key, value);
}

KeyValues setting_entries(const NoveltySettings& s) { return entries(novelty_bindings(), s); }
KeyValues setting_entries(const TargetedSettings& s) { return entries(targeted_bindings(), s); }
KeyValues setting_entries(const StimulusOptSettings& s) { return entries(stimulus_bindings(), s); }
KeyValues setting_entries(const EncodingParams& p) {
  static const auto table = encoding_bindings();
  return entries(table, p);
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

}  // namespace anm
