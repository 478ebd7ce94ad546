#pragma once

#include "anm/novelty_search.hpp"
#include "anm/spike_metrics.hpp"
#include "anm/stimulus_lab.hpp"
#include "anm/stimulus_optimizer.hpp"
#include "anm/targeted_evolution.hpp"

#include <iosfwd>
#include <span>
#include <string>

namespace anm {

// Every report CSV starts with a "# manifest_sha256=<hex>" line followed by a
// header row.

void write_manifest_line(std::ostream& out, const std::string& manifest_hash);

struct CatalogueCorrelation {
  GenomeId entry_id = 0;
  CorrelationReport report;
};

void write_correlation_csv(std::ostream& out, std::span<const CatalogueCorrelation> rows,
                           const std::string& manifest_hash);
void write_makeup_csv(std::ostream& out, std::span<const MakeupGroup> groups, const std::string& manifest_hash);
void write_heatmap_csv(std::ostream& out, const DistanceMatrix& matrix, const std::string& manifest_hash);
void write_over_threshold_csv(std::ostream& out, const Separability& sep, const std::string& manifest_hash);
void write_novelty_trace_csv(std::ostream& out, const NoveltyArchive& archive, const std::string& manifest_hash);
void write_targeted_trace_csv(std::ostream& out, const TargetedResult& result, const std::string& manifest_hash);
void write_stimulus_trace_csv(std::ostream& out, const StimulusOptResult& result, const std::string& manifest_hash);

std::string_view mode_name(MutationMode mode);

}  // namespace anm
