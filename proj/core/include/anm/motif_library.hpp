#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace anm {

/// The recognised circuit motifs. Order is stable and used for reporting.
enum class MotifId : std::uint8_t {
  FFE,
  FFI,
  FBE,
  FBI,
  RCE,
  RCI,
  LTI,
  FFRE,
  FFRI,
  FBRE,
  FBRI,
  FFLI,
  FBLI,
  CPG,
};

inline constexpr std::size_t kMotifCount = 14;
inline constexpr int kMaxMotifSize = 6;

/// Immutable connection-matrix description of a motif. `sign(i, j)` is the
/// sign of the synapse from local neuron i to local neuron j (0 = none).
struct MotifTemplate {
  MotifId id;
  std::string_view name;
  int size;
  std::array<std::array<std::int8_t, kMaxMotifSize>, kMaxMotifSize> matrix;
  std::array<std::int8_t, kMaxMotifSize> input_list;
  int input_count;
  std::array<std::int8_t, kMaxMotifSize> output_list;
  int output_count;

  int sign(int from, int to) const { return matrix[from][to]; }
  std::span<const std::int8_t> inputs() const { return {input_list.data(), static_cast<std::size_t>(input_count)}; }
  std::span<const std::int8_t> outputs() const { return {output_list.data(), static_cast<std::size_t>(output_count)}; }
  bool is_input(int local) const;
  bool is_output(int local) const;
  /// Number of nonzero matrix entries.
  int edge_count() const;
};

const MotifTemplate& motif_template(MotifId id);

/// Looks a template up by its short name ("FFE", "CPG", ...).
/// Throws ValidationError naming the id when it is not recognised.
const MotifTemplate& motif_template(std::string_view name);

MotifId parse_motif_id(std::string_view name);
std::string_view motif_name(MotifId id);

std::span<const MotifId> all_motif_ids();

enum class MotifProfile { initial, expanded, expanded_no_cpg };

MotifProfile parse_motif_profile(std::string_view name);
std::string_view profile_name(MotifProfile profile);

/// Ordered, duplicate-free, non-empty list of motifs available to a run.
class MotifSet {
public:
  explicit MotifSet(std::vector<MotifId> included);
  MotifSet(std::initializer_list<MotifId> included) : MotifSet(std::vector<MotifId>(included)) {}

  static MotifSet from_profile(MotifProfile profile);
  /// Accepts either a profile name or a comma separated list of motif names.
  static MotifSet parse(std::string_view text);

  std::span<const MotifId> included() const { return included_; }
  std::size_t size() const { return included_.size(); }
  bool contains(MotifId id) const;
  MotifId operator[](std::size_t i) const { return included_[i]; }

  std::string to_string() const;

  friend bool operator==(const MotifSet&, const MotifSet&) = default;

private:
  std::vector<MotifId> included_;
};

}  // namespace anm
