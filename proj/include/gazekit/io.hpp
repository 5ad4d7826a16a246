#pragma once

#include <string>
#include <vector>

#include "gazekit/attribution.hpp"
#include "gazekit/camera.hpp"
#include "gazekit/frame.hpp"
#include "gazekit/gaze.hpp"
#include "gazekit/taxonomy.hpp"

namespace gazekit {

/// One recording's segmentations plus the header every subcommand validates
/// before processing.
struct Corpus {
    CameraModel camera;
    ClassTaxonomy taxonomy;
    std::vector<FrameSegmentation> frames;
};

Corpus read_corpus(const std::string& path);
void write_corpus(const std::string& path, const Corpus& corpus);

std::vector<GazeSample> read_gaze_csv(const std::string& path);
void write_gaze_csv(const std::string& path, const std::vector<GazeSample>& samples);

std::vector<CalibrationObservation> read_calibration_csv(const std::string& path);

std::vector<Fixation> read_fixation_csv(const std::string& path);
void write_fixation_csv(const std::string& path, const std::vector<Fixation>& fixations);

void write_attribution_jsonl(const std::string& path,
                             const std::vector<AttributionRecord>& records,
                             const ClassTaxonomy& taxonomy);
std::vector<AttributionRecord> read_attribution_jsonl(const std::string& path,
                                                      const ClassTaxonomy& taxonomy);

/// Formats a double with enough digits to round-trip, without locale or
/// platform drift (reports must be byte-identical across runs).
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace gazekit
