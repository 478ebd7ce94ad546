#include "anm/motif_library.hpp"

#include "anm/error.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace anm {
namespace {

using Row = std::array<std::int8_t, kMaxMotifSize>;
using Matrix = std::array<Row, kMaxMotifSize>;

constexpr MotifTemplate make(MotifId id, std::string_view name, int size, Matrix m,
                             std::initializer_list<std::int8_t> in,
                             std::initializer_list<std::int8_t> out) {
  MotifTemplate t{id, name, size, m, {}, 0, {}, 0};
  for (auto v : in) t.input_list[t.input_count++] = v;
  for (auto v : out) t.output_list[t.output_count++] = v;
  return t;
}

// Row i, column j holds the sign of the synapse i -> j.
constexpr std::array<MotifTemplate, kMotifCount> kTemplates{{
    make(MotifId::FFE, "FFE", 2,
         Matrix{{{0, 1}, {0, 0}}},
         {0}, {1}),
    make(MotifId::FFI, "FFI", 3,
         Matrix{{{0, 1, 1}, {0, 0, -1}, {0, 0, 0}}},
         {0}, {2}),
    make(MotifId::FBE, "FBE", 2,
         Matrix{{{0, 1}, {1, 0}}},
         {0}, {1}),
    make(MotifId::FBI, "FBI", 3,
         Matrix{{{0, 1, 0}, {0, 0, 1}, {-1, 0, 0}}},
         {0}, {2}),
    make(MotifId::RCE, "RCE", 4,
         Matrix{{{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}}},
         {0, 1, 2, 3}, {0, 1, 2, 3}),
    make(MotifId::RCI, "RCI", 4,
         Matrix{{{0, -1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -1}, {-1, 0, 0, 0}}},
         {0, 1, 2, 3}, {0, 1, 2, 3}),
    make(MotifId::LTI, "LTI", 3,
         Matrix{{{0, 1, 0}, {0, 0, -1}, {0, 0, 0}}},
         {0, 2}, {0, 2}),
    make(MotifId::FFRE, "FFRE", 4,
         Matrix{{{0, 0, 1, 1}, {0, 0, 1, 1}, {0, 0, 0, 0}, {0, 0, 0, 0}}},
         {0, 1}, {2, 3}),
    make(MotifId::FFRI, "FFRI", 6,
         Matrix{{{0, 0, 1, 0, 1, 0},
                 {0, 0, 0, 1, 0, 1},
                 {0, 0, 0, 0, 0, -1},
                 {0, 0, 0, 0, -1, 0},
                 {0, 0, 0, 0, 0, 0},
                 {0, 0, 0, 0, 0, 0}}},
         {0, 1}, {4, 5}),
    make(MotifId::FBRE, "FBRE", 4,
         Matrix{{{0, 0, 1, 0}, {0, 0, 0, 1}, {0, 1, 0, 0}, {1, 0, 0, 0}}},
         {0, 1}, {2, 3}),
    make(MotifId::FBRI, "FBRI", 6,
         Matrix{{{0, 0, 1, 0, 0, 0},
                 {0, 0, 0, 1, 0, 0},
                 {0, 0, 0, 0, 1, 0},
                 {0, 0, 0, 0, 0, 1},
                 {0, 0, 0, -1, 0, 0},
                 {0, 0, -1, 0, 0, 0}}},
         {0, 1}, {2, 3}),
    make(MotifId::FFLI, "FFLI", 5,
         Matrix{{{0, 0, 1, 1, 0},
                 {0, 0, 1, 0, 1},
                 {0, 0, 0, -1, -1},
                 {0, 0, 0, 0, 0},
                 {0, 0, 0, 0, 0}}},
         {0, 1}, {3, 4}),
    make(MotifId::FBLI, "FBLI", 5,
         Matrix{{{0, 0, 1, 0, 0},
                 {0, 0, 0, 1, 0},
                 {0, 0, 0, 0, 1},
                 {0, 0, 0, 0, 1},
                 {0, 0, -1, -1, 0}}},
         {0, 1}, {2, 3}),
    make(MotifId::CPG, "CPG", 3,
         Matrix{{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}},
         {0, 1, 2}, {0, 1, 2}),
}};

constexpr bool templates_well_formed() {
  for (std::size_t i = 0; i < kTemplates.size(); ++i) {
    const auto& t = kTemplates[i];
    if (static_cast<std::size_t>(t.id) != i) return false;
    if (t.size < 2 || t.size > kMaxMotifSize) return false;
    if (t.input_count == 0 || t.output_count == 0) return false;
    for (int r = 0; r < kMaxMotifSize; ++r) {
      for (int c = 0; c < kMaxMotifSize; ++c) {
        const auto v = t.matrix[r][c];
        if (v < -1 || v > 1) return false;
        if (r == c && v != 0) return false;
        if ((r >= t.size || c >= t.size) && v != 0) return false;
      }
    }
    for (int k = 0; k < t.input_count; ++k)
      if (t.input_list[k] >= t.size) return false;
    for (int k = 0; k < t.output_count; ++k)
      if (t.output_list[k] >= t.size) return false;
  }
  return true;
}
static_assert(templates_well_formed());

constexpr std::array<MotifId, kMotifCount> kAllIds{
    MotifId::FFE,  MotifId::FFI,  MotifId::FBE,  MotifId::FBI,  MotifId::RCE,
    MotifId::RCI,  MotifId::LTI,  MotifId::FFRE, MotifId::FFRI, MotifId::FBRE,
    MotifId::FBRI, MotifId::FFLI, MotifId::FBLI, MotifId::CPG,
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

bool MotifTemplate::is_input(int local) const {
  return std::ranges::find(inputs(), local) != inputs().end();
}

bool MotifTemplate::is_output(int local) const {
  return std::ranges::find(outputs(), local) != outputs().end();
}

int MotifTemplate::edge_count() const {
  int n = 0;
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c)
      if (matrix[r][c] != 0) ++n;
  return n;
}

const MotifTemplate& motif_template(MotifId id) {
  const auto i = static_cast<std::size_t>(id);
  if (i >= kTemplates.size()) throw ValidationError("motif id out of range: " + std::to_string(i));
  return kTemplates[i];
}

const MotifTemplate& motif_template(std::string_view name) {
  return motif_template(parse_motif_id(name));
}

MotifId parse_motif_id(std::string_view name) {
  for (const auto& t : kTemplates)
    if (t.name == name) return t.id;
  throw ValidationError("unknown motif id '" + std::string(name) + "'");
}

std::string_view motif_name(MotifId id) { return motif_template(id).name; }

std::span<const MotifId> all_motif_ids() { return kAllIds; }

MotifProfile parse_motif_profile(std::string_view name) {
  if (name == "initial") return MotifProfile::initial;
  if (name == "expanded") return MotifProfile::expanded;
  if (name == "expanded_no_cpg") return MotifProfile::expanded_no_cpg;
  throw ValidationError("unknown motif profile '" + std::string(name) + "'");
}

std::string_view profile_name(MotifProfile profile) {
  switch (profile) {
    case MotifProfile::initial: return "initial";
    case MotifProfile::expanded: return "expanded";
    case MotifProfile::expanded_no_cpg: return "expanded_no_cpg";
  }
  return "?";
}

MotifSet::MotifSet(std::vector<MotifId> included) : included_(std::move(included)) {
  if (included_.empty()) throw ValidationError("motif set must not be empty");
  std::set<MotifId> seen;
  for (auto id : included_) {
    motif_template(id);
    if (!seen.insert(id).second)
      throw ValidationError("duplicate motif '" + std::string(motif_name(id)) + "' in motif set");
  }
}

MotifSet MotifSet::from_profile(MotifProfile profile) {
  using enum MotifId;
  switch (profile) {
    case MotifProfile::initial:
      return MotifSet{FFE, FBE, FBI, RCE, RCI, LTI, CPG};
    case MotifProfile::expanded:
      return MotifSet(std::vector<MotifId>(kAllIds.begin(), kAllIds.end()));
    case MotifProfile::expanded_no_cpg: {
      std::vector<MotifId> ids;
      for (auto id : kAllIds)
        if (id != CPG) ids.push_back(id);
      return MotifSet(std::move(ids));
    }
  }
  throw ValidationError("unknown motif profile");
}

MotifSet MotifSet::parse(std::string_view text) {
  const auto whole = trim(text);
  if (whole == "initial" || whole == "expanded" || whole == "expanded_no_cpg")
    return from_profile(parse_motif_profile(whole));
  std::vector<MotifId> ids;
  std::size_t start = 0;
  while (start <= whole.size()) {
    const auto comma = whole.find(',', start);
    const auto piece = trim(std::string_view(whole).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!piece.empty()) ids.push_back(parse_motif_id(piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return MotifSet(std::move(ids));
}

bool MotifSet::contains(MotifId id) const { return std::ranges::find(included_, id) != included_.end(); }

std::string MotifSet::to_string() const {
  std::string out;
  for (auto id : included_) {
    if (!out.empty()) out += ',';
    out += motif_name(id);
  }
  return out;
}

}  // namespace anm
