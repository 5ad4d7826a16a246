#include "gazekit/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gazekit/rle.hpp"

namespace gazekit {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    size_t e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

double get_double(const std::map<std::string, std::string>& kv, const std::string& key,
                  double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (...) {
        throw std::invalid_argument("config: bad number for '" + key + "'");
    }
}

std::string get_string(const std::map<std::string, std::string>& kv, const std::string& key,
                       const std::string& fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

} // namespace

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config: empty key on line " + std::to_string(lineno));
        kv[key] = value;
    }
    return kv;
}

void PipelineConfig::validate() const {
    camera.validate();
    if (alpha <= 0.0 || alpha >= 1.0)
        throw std::invalid_argument("config: alpha must lie in (0, 1)");
    if (dof < 1) throw std::invalid_argument("config: dof must be >= 1");
    if (min_duration_ms <= 0.0)
        throw std::invalid_argument("config: min_duration_ms must be positive");
    if (dispersion_deg <= 0.0)
        throw std::invalid_argument("config: dispersion_deg must be positive");
    if (sniffing_max_masks < 0)
        throw std::invalid_argument("config: sniffing_max_masks must be >= 0");
    if (iou_gate < 0.0 || iou_gate > 1.0)
        throw std::invalid_argument("config: iou_gate outside [0, 1]");
    for (const auto& [id, p] : profiles)
        if (p.spatial_accuracy_deg <= 0.0)
            throw std::invalid_argument("config: non-positive accuracy for dog '" + id + "'");
}

PipelineConfig load_pipeline_config(const std::string& path) {
    auto kv = parse_kv_file(path);
    PipelineConfig cfg;
    cfg.taxonomy = default_taxonomy();
    cfg.camera.width_px = int(get_double(kv, "camera.width_px", cfg.camera.width_px));
    cfg.camera.height_px = int(get_double(kv, "camera.height_px", cfg.camera.height_px));
    cfg.camera.hfov_deg = get_double(kv, "camera.hfov_deg", cfg.camera.hfov_deg);
    cfg.camera.vfov_deg = get_double(kv, "camera.vfov_deg", cfg.camera.vfov_deg);
    cfg.camera.fps = get_double(kv, "camera.fps", cfg.camera.fps);
    std::string mode = get_string(kv, "chi.mode", "pearson");
    if (mode == "pearson")
        cfg.chi_mode = ChiMode::pearson;
    else if (mode == "symmetric")
        cfg.chi_mode = ChiMode::symmetric;
    else
        throw std::invalid_argument("config: chi.mode must be pearson or symmetric");
    cfg.alpha = get_double(kv, "chi.alpha", cfg.alpha);
    cfg.dof = int(get_double(kv, "chi.dof", cfg.dof));
    cfg.min_duration_ms = get_double(kv, "fixation.min_duration_ms", cfg.min_duration_ms);
    cfg.dispersion_deg = get_double(kv, "fixation.dispersion_deg", cfg.dispersion_deg);
    cfg.sniffing_max_masks =
        int(get_double(kv, "sniffing.max_masks", cfg.sniffing_max_masks));
    cfg.iou_gate = get_double(kv, "iou.gate", cfg.iou_gate);
    cfg.include_background = get_string(kv, "chi.include_background", "0") == "1";
    cfg.seed = uint64_t(get_double(kv, "seed", 1));
    cfg.threads = int(get_double(kv, "threads", 0));

    for (const auto& [key, value] : kv) {
        // dog.<id>.accuracy_deg = <deg>
        if (key.rfind("dog.", 0) != 0) continue;
        auto tail = key.substr(4);
        auto dot = tail.rfind('.');
        if (dot == std::string::npos || tail.substr(dot + 1) != "accuracy_deg")
            throw std::invalid_argument("config: unknown dog key '" + key + "'");
        DogProfile p;
        p.dog_id = tail.substr(0, dot);
        p.spatial_accuracy_deg = std::stod(value);
        p.radius_px = deg_to_px_radius(p.spatial_accuracy_deg, cfg.camera);
        cfg.profiles[p.dog_id] = p;
    }
    cfg.validate();
    return cfg;
}

SynthConfig load_synth_config(const std::string& path) {
    auto kv = parse_kv_file(path);
    SynthConfig cfg;
    cfg.taxonomy = default_taxonomy();
    cfg.classes.assign(size_t(cfg.taxonomy.num_classes()), ClassPlant{});
    cfg.seed = uint64_t(get_double(kv, "seed", 1));
    cfg.fixation_count = int(get_double(kv, "fixations", 100));
    cfg.camera.width_px = int(get_double(kv, "camera.width_px", cfg.camera.width_px));
    cfg.camera.height_px = int(get_double(kv, "camera.height_px", cfg.camera.height_px));
    cfg.camera.hfov_deg = get_double(kv, "camera.hfov_deg", cfg.camera.hfov_deg);
    cfg.camera.vfov_deg = get_double(kv, "camera.vfov_deg", cfg.camera.vfov_deg);
    cfg.camera.fps = get_double(kv, "camera.fps", cfg.camera.fps);
    cfg.null_rate = get_double(kv, "null_rate", 0.0);
    cfg.dog_id = get_string(kv, "dog_id", cfg.dog_id);
    cfg.accuracy_deg = get_double(kv, "accuracy_deg", cfg.accuracy_deg);
    cfg.min_present = int(get_double(kv, "min_present", cfg.min_present));
    for (const auto& [key, value] : kv) {
        if (key.rfind("class.", 0) != 0) continue;
        auto tail = key.substr(6);
        auto dot = tail.rfind('.');
        if (dot == std::string::npos)
            throw std::invalid_argument("config: unknown class key '" + key + "'");
        std::string name = tail.substr(0, dot);
        std::string field = tail.substr(dot + 1);
        int id = cfg.taxonomy.id_of(name);
        ClassPlant& plant = cfg.classes[size_t(id) - 1];
        double v = std::stod(value);
        if (field == "availability")
            plant.availability = v;
        else if (field == "size_mean")
            plant.size_mean = v;
        else if (field == "size_sd")
            plant.size_sd = v;
        else if (field == "attention")
            plant.attention = v;
        else
            throw std::invalid_argument("config: unknown class field '" + field + "'");
    }
    cfg.validate();
    return cfg;
}

std::string default_pipeline_config_text() {
    std::ostringstream os;
    os << "# gazekit pipeline configuration\n"
          "camera.width_px = 960\n"
          "camera.height_px = 720\n"
          "camera.hfov_deg = 101.55\n"
          "camera.vfov_deg = 73.60\n"
          "camera.fps = 29.96\n"
          "\n"
          "# fixations: stable eye positioning >= 100 ms (I-DT dispersion in degrees)\n"
          "fixation.min_duration_ms = 100\n"
          "fixation.dispersion_deg = 1.5\n"
          "\n"
          "# frames with <= this many masks are sniffing bouts\n"
          "sniffing.max_masks = 2\n"
          "\n"
          "chi.mode = pearson\n"
          "chi.alpha = 0.05\n"
          "chi.dof = 15\n"
          "chi.include_background = 0\n"
          "\n"
          "iou.gate = 0.75\n"
          "seed = 1\n"
          "threads = 0\n"
          "\n"
          "# per-dog spatial accuracy, degrees\n"
          "dog.example.accuracy_deg = 5.32\n";
    return os.str();
}

} // namespace gazekit
