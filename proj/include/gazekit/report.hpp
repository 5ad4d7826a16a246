#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gazekit/attribution.hpp"
#include "gazekit/config.hpp"
#include "gazekit/io.hpp"

namespace gazekit {

struct AttributionRun {
    std::vector<Fixation> fixations; // after sniffing filter
    std::vector<AttributionRecord> records;
    BatchSummary summary;
    size_t detected = 0;
    size_t sniffing_removed = 0;
};

/// detect -> align -> sniffing filter -> batch attribution, for one dog's
/// recording against one segmentation corpus.
AttributionRun run_attribution(const PipelineConfig& config, const Corpus& corpus,
                               const std::vector<GazeSample>& gaze, const std::string& dog_id);

nlohmann::json stats_report_json(const std::vector<AttributionRecord>& records,
                                 const std::unordered_map<int, const FrameSegmentation*>& frames,
                                 const ClassTaxonomy& taxonomy, bool weighted_lr);

std::string stats_report_text(const nlohmann::json& stats, const ClassTaxonomy& taxonomy);

struct ReportInputs {
    PipelineConfig config;
    std::string corpus_path;
    std::string gaze_path;
    std::string dog_id;
    std::string out_dir;
    std::string maps_dir; // optional; per-frame "<frame>.pgm" saliency maps
    bool weighted_lr = true;
};

/// Chains attribution and statistics into attribution.jsonl, report.json and
/// report.txt under out_dir. Byte-identical outputs for identical inputs.
void run_report(const ReportInputs& inputs);

std::unordered_map<int, const FrameSegmentation*> frame_index(
    const std::vector<FrameSegmentation>& frames);

} // namespace gazekit
