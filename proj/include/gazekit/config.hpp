#pragma once

#include <map>
#include <string>
#include <vector>

#include "gazekit/attribution.hpp"
#include "gazekit/camera.hpp"
#include "gazekit/gaze.hpp"
#include "gazekit/synth.hpp"
#include "gazekit/taxonomy.hpp"

namespace gazekit {

/// Flat `key = value` file with '#' comments. Keys are dotted paths.
std::map<std::string, std::string> parse_kv_file(const std::string& path);

struct PipelineConfig {
    ClassTaxonomy taxonomy;
    CameraModel camera{960, 720, 101.55, 73.60, 29.96};
    std::map<std::string, DogProfile> profiles;
    ChiMode chi_mode = ChiMode::pearson;
    double alpha = 0.05;
    int dof = 15;
    double min_duration_ms = 100.0;
    double dispersion_deg = 1.5;
    int sniffing_max_masks = 2;
    double iou_gate = 0.75;
    bool include_background = false;
    uint64_t seed = 1;
    int threads = 0;

    double dispersion_px() const { return dispersion_deg * camera.px_per_deg_h(); }
    void validate() const;
};

PipelineConfig load_pipeline_config(const std::string& path);

/// Synth config from the same key-value format; per-class keys look like
/// `class.<name>.availability`.
SynthConfig load_synth_config(const std::string& path);

std::string default_pipeline_config_text();

} // namespace gazekit
