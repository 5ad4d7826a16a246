#include "gazekit/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace gazekit {

using nlohmann::json;

namespace {

json mask_to_json(const InstanceMask& m, const ClassTaxonomy& taxonomy) {
    return json{{"instance_id", m.instance_id},
                {"class", taxonomy.name(m.class_id)},
                {"confidence", m.confidence},
                {"bbox", m.bbox},
                {"rle", {{"width", m.mask.width}, {"height", m.mask.height}, {"runs", m.mask.runs}}}};
}

InstanceMask mask_from_json(const json& j, const ClassTaxonomy& taxonomy) {
    InstanceMask m;
    m.instance_id = j.at("instance_id").get<int>();
    m.class_id = taxonomy.id_of(j.at("class").get<std::string>());
    m.confidence = j.at("confidence").get<double>();
    if (m.confidence < 0.0 || m.confidence > 1.0)
        throw std::invalid_argument("corpus: confidence outside [0, 1]");
    auto bb = j.at("bbox").get<std::vector<int>>();
    if (bb.size() != 4) throw std::invalid_argument("corpus: bbox must have 4 entries");
    m.bbox = {bb[0], bb[1], bb[2], bb[3]};
    const json& rle = j.at("rle");
    m.mask.width = rle.at("width").get<uint32_t>();
    m.mask.height = rle.at("height").get<uint32_t>();
    m.mask.runs = rle.at("runs").get<std::vector<uint32_t>>();
    m.mask.validate();
    return m;
}

} // namespace

Corpus read_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus '" + path + "'");
    json j;
    in >> j;
    Corpus c;
    const json& cam = j.at("camera");
    c.camera.width_px = cam.at("width_px").get<int>();
    c.camera.height_px = cam.at("height_px").get<int>();
    c.camera.hfov_deg = cam.at("hfov_deg").get<double>();
    c.camera.vfov_deg = cam.at("vfov_deg").get<double>();
    c.camera.fps = cam.at("fps").get<double>();
    c.camera.validate();
    c.taxonomy = ClassTaxonomy(j.at("taxonomy").get<std::vector<std::string>>());
    for (const json& jf : j.at("frames")) {
        FrameSegmentation f;
        f.frame_index = jf.at("frame_index").get<int>();
        f.timestamp_ms = jf.at("timestamp_ms").get<double>();
        f.width = uint32_t(c.camera.width_px);
        f.height = uint32_t(c.camera.height_px);
        if (f.frame_index < 0) throw std::invalid_argument("corpus: negative frame index");
        for (const json& jm : jf.at("masks")) {
            InstanceMask m = mask_from_json(jm, c.taxonomy);
            if (m.mask.width != f.width || m.mask.height != f.height)
                throw std::invalid_argument("corpus: mask dimensions differ from camera");
            f.masks.push_back(std::move(m));
        }
        c.frames.push_back(std::move(f));
    }
    return c;
}

void write_corpus(const std::string& path, const Corpus& corpus) {
    json j;
    j["camera"] = {{"width_px", corpus.camera.width_px},
                   {"height_px", corpus.camera.height_px},
                   {"hfov_deg", corpus.camera.hfov_deg},
                   {"vfov_deg", corpus.camera.vfov_deg},
                   {"fps", corpus.camera.fps}};
    j["taxonomy"] = corpus.taxonomy.names();
    json frames = json::array();
    for (const auto& f : corpus.frames) {
        json jf;
        jf["frame_index"] = f.frame_index;
        jf["timestamp_ms"] = f.timestamp_ms;
        json masks = json::array();
        for (const auto& m : f.masks) masks.push_back(mask_to_json(m, corpus.taxonomy));
        jf["masks"] = std::move(masks);
        frames.push_back(std::move(jf));
    }
    j["frames"] = std::move(frames);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write corpus '" + path + "'");
    out << j.dump() << "\n";
}

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

double to_double(const std::string& s, const char* what) {
    try {
        return std::stod(s);
    } catch (...) {
        throw std::runtime_error(std::string("csv: bad ") + what + " value '" + s + "'");
    }
}

} // namespace

std::vector<GazeSample> read_gaze_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open gaze csv '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != "t_ms,x_px,y_px,valid")
        throw std::runtime_error("gaze csv: unexpected header");
    std::vector<GazeSample> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 4) throw std::runtime_error("gaze csv: bad row '" + line + "'");
        out.push_back({to_double(f[0], "t_ms"), to_double(f[1], "x_px"),
                       to_double(f[2], "y_px"), f[3] == "1" || f[3] == "true"});
    }
    return out;
}

void write_gaze_csv(const std::string& path, const std::vector<GazeSample>& samples) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write gaze csv '" + path + "'");
    out << "t_ms,x_px,y_px,valid\n";
    for (const auto& s : samples)
        out << format_double(s.t_ms) << ',' << format_double(s.x_px) << ','
            << format_double(s.y_px) << ',' << (s.valid ? 1 : 0) << "\n";
}

std::vector<CalibrationObservation> read_calibration_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open calibration csv '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != "frame,known_x,known_y,est_x,est_y")
        throw std::runtime_error("calibration csv: unexpected header");
    std::vector<CalibrationObservation> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 5) throw std::runtime_error("calibration csv: bad row '" + line + "'");
        CalibrationObservation o;
        o.frame_index = int(to_double(f[0], "frame"));
        o.known_x = to_double(f[1], "known_x");
        o.known_y = to_double(f[2], "known_y");
        o.est_x = to_double(f[3], "est_x");
        o.est_y = to_double(f[4], "est_y");
        out.push_back(o);
    }
    return out;
}

std::vector<Fixation> read_fixation_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fixation csv '" + path + "'");
    std::string line;
    if (!std::getline(in, line) ||
        line != "dog_id,start_ms,end_ms,x,y,first_frame,last_frame")
        throw std::runtime_error("fixation csv: unexpected header");
    std::vector<Fixation> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 7) throw std::runtime_error("fixation csv: bad row '" + line + "'");
        Fixation fx;
        fx.dog_id = f[0];
        fx.start_ms = to_double(f[1], "start_ms");
        fx.end_ms = to_double(f[2], "end_ms");
        fx.x = to_double(f[3], "x");
        fx.y = to_double(f[4], "y");
        fx.first_frame = int(to_double(f[5], "first_frame"));
        fx.last_frame = int(to_double(f[6], "last_frame"));
        out.push_back(fx);
    }
    return out;
}

void write_fixation_csv(const std::string& path, const std::vector<Fixation>& fixations) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write fixation csv '" + path + "'");
    out << "dog_id,start_ms,end_ms,x,y,first_frame,last_frame\n";
    for (const auto& f : fixations)
        out << f.dog_id << ',' << format_double(f.start_ms) << ',' << format_double(f.end_ms)
            << ',' << format_double(f.x) << ',' << format_double(f.y) << ',' << f.first_frame
            << ',' << f.last_frame << "\n";
}

void write_attribution_jsonl(const std::string& path,
                             const std::vector<AttributionRecord>& records,
                             const ClassTaxonomy& taxonomy) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write attribution jsonl '" + path + "'");
    for (const auto& r : records) {
        json j;
        j["dog_id"] = r.dog_id;
        j["frame"] = r.frame_index;
        if (r.error) {
            j["error"] = r.error_message;
        } else {
            j["null"] = r.distribution.is_null;
            json probs = json::object(), occ = json::object();
            if (!r.distribution.is_null) {
                for (int c = 0; c <= taxonomy.num_classes(); ++c) {
                    double p = r.distribution.probs[size_t(c)];
                    if (p > 0.0) probs[taxonomy.name(c)] = p;
                }
                for (int c = 1; c <= taxonomy.num_classes(); ++c)
                    if (r.occupancy[size_t(c)] > 0.0)
                        occ[taxonomy.name(c)] = r.occupancy[size_t(c)];
            }
            j["probs"] = std::move(probs);
            j["occupancy"] = std::move(occ);
        }
        out << j.dump() << "\n";
    }
}

std::vector<AttributionRecord> read_attribution_jsonl(const std::string& path,
                                                      const ClassTaxonomy& taxonomy) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open attribution jsonl '" + path + "'");
    std::vector<AttributionRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        AttributionRecord r;
        r.dog_id = j.at("dog_id").get<std::string>();
        r.frame_index = j.at("frame").get<int>();
        r.fixation.dog_id = r.dog_id;
        r.fixation.first_frame = r.frame_index;
        if (j.contains("error")) {
            r.error = true;
            r.error_message = j["error"].get<std::string>();
        } else {
            r.distribution.is_null = j.at("null").get<bool>();
            r.distribution.probs.assign(size_t(taxonomy.num_classes()) + 1, 0.0);
            r.occupancy.assign(size_t(taxonomy.num_classes()) + 1, 0.0);
            for (const auto& [name, p] : j.at("probs").items())
                r.distribution.probs[size_t(taxonomy.id_of(name))] = p.get<double>();
            for (const auto& [name, f] : j.at("occupancy").items())
                r.occupancy[size_t(taxonomy.id_of(name))] = f.get<double>();
        }
        out.push_back(std::move(r));
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace gazekit
