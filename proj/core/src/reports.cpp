#include "anm/reports.hpp"

#include "anm/config.hpp"
#include "anm/csv.hpp"

#include <cstdio>
#include <ostream>

namespace anm {
namespace {

std::string fixed(double v, int decimals = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace

std::string_view mode_name(MutationMode mode) { return mode == MutationMode::normal ? "normal" : "pruning"; }

void write_manifest_line(std::ostream& out, const std::string& manifest_hash) {
  out << "# manifest_sha256=" << manifest_hash << '\n';
}

void write_correlation_csv(std::ostream& out, std::span<const CatalogueCorrelation> rows,
                           const std::string& manifest_hash) {
  write_manifest_line(out, manifest_hash);
  out << "entry_id,pattern,label,count,mean_spikes,class\n";
  for (const auto& row : rows)
    for (const auto& p : row.report)
      out << row.entry_id << ',' << static_cast<int>(p.pattern) << ',' << csv_field(pattern_label(p.pattern)) << ','
          << p.instances << ',' << fixed(p.mean_spikes) << ',' << correlation_name(p.correlation) << '\n';
}

void write_makeup_csv(std::ostream& out, std::span<const MakeupGroup> groups, const std::string& manifest_hash) {
  write_manifest_line(out, manifest_hash);
  out << "group,motif_instances,motif,percent\n";
  for (const auto& g : groups) {
    const std::string group = g.generation < 0 ? "overall" : std::to_string(g.generation);
    for (const auto& [id, pct] : g.percent)
      out << group << ',' << g.motif_instances << ',' << motif_name(id) << ',' << fixed(pct, 4) << '\n';
  }
}

void write_heatmap_csv(std::ostream& out, const DistanceMatrix& matrix, const std::string& manifest_hash) {
  write_manifest_line(out, manifest_hash);
  write_distance_csv(out, matrix);
}

void write_over_threshold_csv(std::ostream& out, const Separability& sep, const std::string& manifest_hash) {
  write_manifest_line(out, manifest_hash);
  out << "pattern,label,over_threshold,threshold\n";
  for (std::size_t i = 0; i < sep.patterns.size(); ++i)
    out << static_cast<int>(sep.patterns[i]) << ',' << csv_field(pattern_label(sep.patterns[i])) << ','
        << sep.over_threshold[i] << ',' << format_number(sep.threshold) << '\n';
}

void write_novelty_trace_csv(std::ostream& out, const NoveltyArchive& archive, const std::string& manifest_hash) {
  write_manifest_line(out, manifest_hash);
  out << "generation,threshold,admitted,archive_size,mean_complexity,mode\n";
  std::size_t archive_size = 0;
  for (const auto& r : archive.history) {
    archive_size += static_cast<std::size_t>(r.admitted);
    out << r.generation << ',' << format_number(r.threshold) << ',' << r.admitted << ',' << archive_size << ','
        << fixed(r.mean_complexity, 3) << ',' << mode_name(r.mode) << '\n';
  }
}

void write_targeted_trace_csv(std::ostream& out, const TargetedResult& result, const std::string& manifest_hash) {
  write_manifest_line(out, manifest_hash);
  out << "generation,best_so_far,generation_best,mean_complexity\n";
  for (std::size_t g = 0; g < result.best_so_far.size(); ++g)
    out << g << ',' << fixed(result.best_so_far[g]) << ',' << fixed(result.generation_best[g]) << ','
        << fixed(result.mean_complexity[g], 3) << '\n';
}

void write_stimulus_trace_csv(std::ostream& out, const StimulusOptResult& result, const std::string& manifest_hash) {
  write_manifest_line(out, manifest_hash);
  out << "generation,best_fitness,over_threshold,min_length,max_length\n";
  for (std::size_t g = 0; g < result.best_so_far.size(); ++g)
    out << g << ',' << fixed(result.best_so_far[g].fitness) << ',' << result.best_so_far[g].over_threshold << ','
        << result.lengths_seen_min[g] << ',' << result.lengths_seen_max[g] << '\n';
}

}  // namespace anm
