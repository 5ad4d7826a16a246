#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gazekit/config.hpp"
#include "gazekit/io.hpp"
#include "gazekit/numeric.hpp"
#include "gazekit/report.hpp"
#include "gazekit/saliency.hpp"
#include "gazekit/seg_eval.hpp"
#include "gazekit/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gazekit;

namespace {

void log_line(const char* level, const std::string& stage, const std::string& detail) {
    std::cerr << "[" << level << "] stage=" << stage << " " << detail << "\n";
}

PipelineConfig effective_config(const std::string& config_path) {
    if (!config_path.empty()) return load_pipeline_config(config_path);
    PipelineConfig cfg;
    cfg.taxonomy = default_taxonomy();
    return cfg;
}

/// Header check: a corpus must agree with the configured camera and taxonomy.
/// With no config file the corpus header becomes the configuration.
void adopt_or_check_corpus(PipelineConfig& cfg, const Corpus& corpus, bool config_given) {
    if (!config_given) {
        cfg.camera = corpus.camera;
        cfg.taxonomy = corpus.taxonomy;
        return;
    }
    const CameraModel& a = cfg.camera;
    const CameraModel& b = corpus.camera;
    if (a.width_px != b.width_px || a.height_px != b.height_px ||
        std::abs(a.hfov_deg - b.hfov_deg) > 1e-9 ||
        std::abs(a.vfov_deg - b.vfov_deg) > 1e-9 || std::abs(a.fps - b.fps) > 1e-9)
        throw std::invalid_argument("corpus camera header differs from configuration");
    if (!(corpus.taxonomy == cfg.taxonomy))
        throw std::invalid_argument("corpus taxonomy differs from configuration");
}

void refresh_profile_radii(PipelineConfig& cfg) {
    for (auto& [id, p] : cfg.profiles)
        p.radius_px = deg_to_px_radius(p.spatial_accuracy_deg, cfg.camera);
}

void write_pgm16(const std::string& path, const SaliencyMap& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write pgm '" + path + "'");
    out << "P5\n" << m.width << " " << m.height << "\n65535\n";
    for (float v : m.values) {
        auto u = uint16_t(std::lround(std::clamp(double(v), 0.0, 1.0) * 65535.0));
        char b[2] = {char(u >> 8), char(u & 0xff)};
        out.write(b, 2);
    }
}

json metrics_json(const MetricsReport& r, const ClassTaxonomy& taxonomy,
                  double iou_threshold) {
    json per_class = json::object();
    for (int c = 1; c <= taxonomy.num_classes(); ++c) {
        json row;
        if (r.mean_iou[size_t(c)]) row["mean_iou"] = *r.mean_iou[size_t(c)];
        if (r.count_accuracy[size_t(c)]) row["count_accuracy"] = *r.count_accuracy[size_t(c)];
        row["precision"] = r.rates.precision[size_t(c)];
        row["recall"] = r.rates.recall[size_t(c)];
        row["coverage_gap"] = r.coverage.class_gap[size_t(c)];
        per_class[taxonomy.name(c)] = std::move(row);
    }
    return json{{"per_class", std::move(per_class)},
                {"accuracy", r.rates.accuracy},
                {"median_iou", r.median_iou},
                {"median_count_accuracy", r.median_count_accuracy},
                {"median_precision", r.median_precision},
                {"median_recall", r.median_recall},
                {"mean_gt_coverage", r.coverage.mean_gt_coverage},
                {"mean_pred_coverage", r.coverage.mean_pred_coverage},
                {"confusion", r.confusion.counts},
                {"iou_threshold", iou_threshold}};
}

struct FixationsArgs {
    std::string gaze_path, corpus_path, config_path, dog_id = "dog", out_dir = ".";
    std::optional<double> min_duration_ms, dispersion_deg;
};

int run_fixations(const FixationsArgs& a) {
    PipelineConfig cfg = effective_config(a.config_path);
    std::optional<Corpus> corpus;
    if (!a.corpus_path.empty()) {
        corpus = read_corpus(a.corpus_path);
        adopt_or_check_corpus(cfg, *corpus, !a.config_path.empty());
    }
    if (a.min_duration_ms) cfg.min_duration_ms = *a.min_duration_ms;
    if (a.dispersion_deg) cfg.dispersion_deg = *a.dispersion_deg;
    cfg.validate();

    auto gaze = read_gaze_csv(a.gaze_path);
    auto fixations = detect_fixations(gaze, cfg.min_duration_ms, cfg.dispersion_px());
    for (auto& f : fixations) {
        f.dog_id = a.dog_id;
        auto [first, last] = align_to_frames(f, cfg.camera.fps);
        f.first_frame = first;
        f.last_frame = last;
    }
    size_t removed = 0;
    if (corpus) {
        auto idx = frame_index(corpus->frames);
        std::vector<Fixation> kept;
        for (const auto& f : fixations) {
            auto it = idx.find(f.first_frame);
            if (it != idx.end() && it->second->masks.size() <= size_t(cfg.sniffing_max_masks))
                ++removed;
            else
                kept.push_back(f);
        }
        fixations = std::move(kept);
    }
    fs::create_directories(a.out_dir);
    std::string out = (fs::path(a.out_dir) / "fixations.csv").string();
    write_fixation_csv(out, fixations);
    log_line("info", "fixations",
             "samples=" + std::to_string(gaze.size()) + " fixations=" +
                 std::to_string(fixations.size()) + " sniffing_removed=" +
                 std::to_string(removed) + " out=" + out);
    return 0;
}

struct AttributeArgs {
    std::string fixations_path, corpus_path, config_path, out_dir = ".";
    std::optional<std::string> chi_mode;
    std::optional<double> alpha, accuracy_deg;
    std::optional<int> dof, threads;
    bool include_background = false;
};

int run_attribute(const AttributeArgs& a) {
    PipelineConfig cfg = effective_config(a.config_path);
    Corpus corpus = read_corpus(a.corpus_path);
    adopt_or_check_corpus(cfg, corpus, !a.config_path.empty());
    if (a.chi_mode) {
        if (*a.chi_mode == "pearson")
            cfg.chi_mode = ChiMode::pearson;
        else if (*a.chi_mode == "symmetric")
            cfg.chi_mode = ChiMode::symmetric;
        else
            throw std::invalid_argument("--chi-mode must be pearson or symmetric");
    }
    if (a.alpha) cfg.alpha = *a.alpha;
    if (a.dof) cfg.dof = *a.dof;
    if (a.threads) cfg.threads = *a.threads;
    if (a.include_background) cfg.include_background = true;
    refresh_profile_radii(cfg);
    cfg.validate();

    auto fixations = read_fixation_csv(a.fixations_path);
    std::unordered_map<std::string, DogProfile> profiles;
    for (const auto& [id, p] : cfg.profiles) profiles[id] = p;
    for (const auto& f : fixations) {
        if (profiles.count(f.dog_id)) continue;
        if (a.accuracy_deg) {
            DogProfile p{f.dog_id, *a.accuracy_deg,
                         deg_to_px_radius(*a.accuracy_deg, cfg.camera)};
            profiles[f.dog_id] = p;
        } else {
            throw std::invalid_argument("no accuracy profile for dog '" + f.dog_id + "'");
        }
    }

    double critical = chi_square_critical(cfg.dof, cfg.alpha);
    std::printf("critical chi-square value: %.3f (alpha=%g, dof=%d)\n", critical, cfg.alpha,
                cfg.dof);

    auto idx = frame_index(corpus.frames);
    BatchSummary summary;
    auto records =
        batch_attribute(fixations, idx, profiles, cfg.camera, cfg.taxonomy.num_classes(),
                        cfg.include_background, cfg.threads, &summary);
    fs::create_directories(a.out_dir);
    std::string out = (fs::path(a.out_dir) / "attribution.jsonl").string();
    write_attribution_jsonl(out, records, cfg.taxonomy);
    log_line("info", "attribute",
             "fixations=" + std::to_string(summary.total) + " nulls=" +
                 std::to_string(summary.nulls) + " errors=" + std::to_string(summary.errors) +
                 " out=" + out);
    return 0;
}

struct SegEvalArgs {
    std::string gt_path, pred_path, out_dir = ".";
    double iou_threshold = 0.75;
};

int run_seg_eval(const SegEvalArgs& a) {
    Corpus gt = read_corpus(a.gt_path);
    Corpus pred = read_corpus(a.pred_path);
    if (gt.camera.width_px != pred.camera.width_px ||
        gt.camera.height_px != pred.camera.height_px)
        throw std::invalid_argument("ground truth and prediction cameras differ");
    if (!(gt.taxonomy == pred.taxonomy))
        throw std::invalid_argument("ground truth and prediction taxonomies differ");

    MetricsReport report = evaluate_corpus(gt.frames, pred.frames, gt.taxonomy);
    std::string table = metrics_table(report, gt.taxonomy);
    fs::create_directories(a.out_dir);
    write_text_file((fs::path(a.out_dir) / "metrics.txt").string(), table);
    write_text_file((fs::path(a.out_dir) / "metrics.json").string(),
                    metrics_json(report, gt.taxonomy, a.iou_threshold).dump(2) + "\n");
    std::cout << table;
    log_line("info", "seg-eval",
             "frames=" + std::to_string(gt.frames.size()) + " accuracy=" +
                 format_double(report.rates.accuracy));
    return 0;
}

struct StatsArgs {
    std::string attribution_path, frames_path, out_dir = ".";
    bool weighted_lr = true;
};

int run_stats(const StatsArgs& a) {
    Corpus corpus = read_corpus(a.frames_path);
    auto records = read_attribution_jsonl(a.attribution_path, corpus.taxonomy);
    auto idx = frame_index(corpus.frames);
    json stats = stats_report_json(records, idx, corpus.taxonomy, a.weighted_lr);
    std::string text = stats_report_text(stats, corpus.taxonomy);
    fs::create_directories(a.out_dir);
    write_text_file((fs::path(a.out_dir) / "stats.json").string(), stats.dump(2) + "\n");
    write_text_file((fs::path(a.out_dir) / "stats.txt").string(), text);
    std::cout << text;
    log_line("info", "stats",
             "records=" + std::to_string(records.size()) + " frames=" +
                 std::to_string(corpus.frames.size()));
    return 0;
}

struct SaliencyArgs {
    std::string maps_dir, images_dir, mode = "color";
    std::string fixations_path, corpus_path, config_path, dog_id, out_dir = ".";
    std::optional<double> accuracy_deg;
    bool generate = false, pooled = false;
    uint64_t seed = 1;
};

int run_saliency(const SaliencyArgs& a) {
    fs::create_directories(a.out_dir);
    if (a.generate) {
        if (a.images_dir.empty())
            throw std::invalid_argument("--generate requires --images <dir of .ppm frames>");
        SaliencyMode mode;
        if (a.mode == "color")
            mode = SaliencyMode::color;
        else if (a.mode == "gray")
            mode = SaliencyMode::grayscale;
        else
            throw std::invalid_argument("--mode must be color or gray");
        std::vector<fs::path> inputs;
        for (const auto& e : fs::directory_iterator(a.images_dir))
            if (e.path().extension() == ".ppm") inputs.push_back(e.path());
        std::sort(inputs.begin(), inputs.end());
        size_t degenerate = 0;
        for (const auto& p : inputs) {
            SaliencyMap m = saliency_map(load_ppm(p.string()), mode);
            if (m.degenerate) ++degenerate;
            write_pgm16((fs::path(a.out_dir) / (p.stem().string() + ".pgm")).string(), m);
        }
        log_line("info", "saliency",
                 "generated=" + std::to_string(inputs.size()) + " degenerate=" +
                     std::to_string(degenerate) + " mode=" + a.mode);
        return 0;
    }

    if (a.maps_dir.empty())
        throw std::invalid_argument("saliency needs --maps <dir> or --generate");
    PipelineConfig cfg = effective_config(a.config_path);
    if (!a.corpus_path.empty()) {
        Corpus corpus = read_corpus(a.corpus_path);
        adopt_or_check_corpus(cfg, corpus, !a.config_path.empty());
    }
    refresh_profile_radii(cfg);
    auto fixations = read_fixation_csv(a.fixations_path);
    std::unordered_map<std::string, DogProfile> profiles;
    for (const auto& [id, p] : cfg.profiles) profiles[id] = p;
    for (const auto& f : fixations) {
        if (profiles.count(f.dog_id)) continue;
        if (!a.accuracy_deg)
            throw std::invalid_argument("no accuracy profile for dog '" + f.dog_id + "'");
        profiles[f.dog_id] = {f.dog_id, *a.accuracy_deg,
                              deg_to_px_radius(*a.accuracy_deg, cfg.camera)};
    }

    std::vector<SaliencyMap> maps;
    std::vector<double> scores;
    std::vector<size_t> map_of_score;
    size_t missing = 0;
    for (const auto& f : fixations) {
        fs::path file = fs::path(a.maps_dir) / (std::to_string(f.first_frame) + ".pgm");
        if (!fs::exists(file)) {
            ++missing;
            continue;
        }
        SaliencyMap m = load_pgm(file.string());
        if (m.width != cfg.camera.width_px || m.height != cfg.camera.height_px)
            throw std::invalid_argument("saliency map dimensions differ from camera: " +
                                        file.string());
        FixationRegion region = make_region(f, profiles.at(f.dog_id), cfg.camera);
        scores.push_back(fixation_score(m, region));
        maps.push_back(std::move(m));
        map_of_score.push_back(maps.size() - 1);
    }
    if (scores.empty()) throw std::invalid_argument("no fixation had a saliency map");

    RocCurve roc;
    if (a.pooled) {
        std::vector<float> pool;
        for (const auto& m : maps) pool.insert(pool.end(), m.values.begin(), m.values.end());
        roc = auc_judd(scores, pool, a.seed);
    } else {
        std::vector<const SaliencyMap*> ptrs;
        for (size_t i : map_of_score) ptrs.push_back(&maps[i]);
        roc = auc_judd_per_frame(scores, ptrs, a.seed);
    }

    std::string csv = "threshold,fpr,tpr\n";
    for (const auto& p : roc.points)
        csv += format_double(p.threshold) + "," + format_double(p.fpr) + "," +
               format_double(p.tpr) + "\n";
    write_text_file((fs::path(a.out_dir) / "roc.csv").string(), csv);
    json summary = {{"auc_judd", roc.auc},
                    {"fpr_pooling", a.pooled ? "pooled" : "per-frame"},
                    {"fixations_scored", scores.size()},
                    {"missing_maps", missing}};
    write_text_file((fs::path(a.out_dir) / "summary.json").string(), summary.dump(2) + "\n");
    std::printf("auc-judd: %.6f (%zu fixations)\n", roc.auc, scores.size());
    log_line("info", "saliency",
             "scored=" + std::to_string(scores.size()) + " missing=" +
                 std::to_string(missing) + " auc=" + format_double(roc.auc));
    return 0;
}

struct SynthArgs {
    std::string config_path, out_dir;
    std::optional<uint64_t> seed;
    std::optional<int> fixations;
    double swap_rate = 0.0, erosion_keep = 1.0, drop_rate = 0.0, spurious_rate = 0.0;
    uint64_t corrupt_seed = 1;
};

int run_synth(const SynthArgs& a) {
    SynthConfig cfg = load_synth_config(a.config_path);
    if (a.seed) cfg.seed = *a.seed;
    if (a.fixations) cfg.fixation_count = *a.fixations;
    SynthCorpus synth = synth_corpus(cfg);

    fs::create_directories(a.out_dir);
    Corpus corpus{cfg.camera, cfg.taxonomy, synth.frames};
    write_corpus((fs::path(a.out_dir) / "corpus.json").string(), corpus);
    write_gaze_csv((fs::path(a.out_dir) / "gaze.csv").string(), synth.gaze);
    write_fixation_csv((fs::path(a.out_dir) / "planted_fixations.csv").string(),
                       synth.planted_fixations);
    write_text_file((fs::path(a.out_dir) / "manifest.json").string(),
                    synth.manifest().dump(2) + "\n");

    bool corrupt = a.swap_rate > 0.0 || a.erosion_keep < 1.0 || a.drop_rate > 0.0 ||
                   a.spurious_rate > 0.0;
    if (corrupt) {
        CorruptionParams params{a.corrupt_seed, a.swap_rate, a.erosion_keep, a.drop_rate,
                                a.spurious_rate};
        Corpus pred{cfg.camera, cfg.taxonomy,
                    corrupt_predictions(synth.frames, params, cfg.taxonomy.num_classes())};
        write_corpus((fs::path(a.out_dir) / "pred.json").string(), pred);
    }
    log_line("info", "synth",
             "fixations=" + std::to_string(synth.fixation_count) + " frames=" +
                 std::to_string(synth.frames.size()) + " gaze_samples=" +
                 std::to_string(synth.gaze.size()) + (corrupt ? " pred=1" : ""));
    return 0;
}

struct ReportArgs {
    std::string corpus_path, gaze_path, config_path, maps_dir, dog_id, out_dir = ".";
    std::optional<double> accuracy_deg;
    std::optional<int> threads;
    std::optional<uint64_t> seed;
    bool weighted_lr = true;
};

int run_report_cmd(const ReportArgs& a) {
    PipelineConfig cfg = effective_config(a.config_path);
    if (a.config_path.empty()) {
        Corpus header = read_corpus(a.corpus_path);
        cfg.camera = header.camera;
        cfg.taxonomy = header.taxonomy;
    }
    if (a.threads) cfg.threads = *a.threads;
    if (a.seed) cfg.seed = *a.seed;
    refresh_profile_radii(cfg);
    if (!cfg.profiles.count(a.dog_id)) {
        if (!a.accuracy_deg)
            throw std::invalid_argument("no accuracy profile for dog '" + a.dog_id + "'");
        cfg.profiles[a.dog_id] = {a.dog_id, *a.accuracy_deg,
                                  deg_to_px_radius(*a.accuracy_deg, cfg.camera)};
    }
    cfg.validate();
    ReportInputs inputs{cfg,        a.corpus_path, a.gaze_path, a.dog_id,
                        a.out_dir,  a.maps_dir,    a.weighted_lr};
    run_report(inputs);
    log_line("info", "report", "out_dir=" + a.out_dir);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gazekit: gaze-to-object attribution and evaluation toolkit"};
    app.require_subcommand(1);

    FixationsArgs fx;
    auto* fix_cmd = app.add_subcommand("fixations", "Detect fixations in a gaze stream");
    fix_cmd->add_option("--gaze", fx.gaze_path, "gaze CSV (t_ms,x_px,y_px,valid)")->required();
    fix_cmd->add_option("--corpus", fx.corpus_path, "segmentation corpus for sniffing filter");
    fix_cmd->add_option("--config", fx.config_path, "pipeline config file");
    fix_cmd->add_option("--dog", fx.dog_id, "dog id stamped on fixations");
    fix_cmd->add_option("--min-duration-ms", fx.min_duration_ms, "minimum duration");
    fix_cmd->add_option("--dispersion-deg", fx.dispersion_deg, "I-DT dispersion threshold");
    fix_cmd->add_option("--out-dir", fx.out_dir, "output directory");

    AttributeArgs at;
    auto* att_cmd = app.add_subcommand("attribute", "Attribute fixations to object classes");
    att_cmd->add_option("--fixations", at.fixations_path, "fixation CSV")->required();
    att_cmd->add_option("--corpus", at.corpus_path, "segmentation corpus")->required();
    att_cmd->add_option("--config", at.config_path, "pipeline config file");
    att_cmd->add_option("--chi-mode", at.chi_mode, "pearson|symmetric");
    att_cmd->add_flag("--include-background", at.include_background,
                      "keep background in the distribution");
    att_cmd->add_option("--alpha", at.alpha, "chi-square significance level");
    att_cmd->add_option("--dof", at.dof, "chi-square degrees of freedom");
    att_cmd->add_option("--threads", at.threads, "worker threads (0 = auto)");
    att_cmd->add_option("--accuracy-deg", at.accuracy_deg,
                        "fallback accuracy for dogs without a profile");
    att_cmd->add_option("--out-dir", at.out_dir, "output directory");

    SegEvalArgs se;
    auto* seg_cmd = app.add_subcommand("seg-eval", "Compare predictions against ground truth");
    seg_cmd->add_option("--gt", se.gt_path, "ground-truth corpus")->required();
    seg_cmd->add_option("--pred", se.pred_path, "predicted corpus")->required();
    seg_cmd->add_option("--iou-threshold", se.iou_threshold, "loss gating IoU threshold");
    seg_cmd->add_option("--out-dir", se.out_dir, "output directory");

    StatsArgs st;
    auto* stats_cmd = app.add_subcommand("stats", "Behavior statistics from attributions");
    stats_cmd->add_option("--attribution", st.attribution_path, "attribution JSONL")
        ->required();
    stats_cmd->add_option("--frames", st.frames_path, "segmentation corpus")->required();
    stats_cmd->add_option("--weighted-lr", st.weighted_lr,
                          "weight regression rows by P(class)");
    stats_cmd->add_option("--out-dir", st.out_dir, "output directory");

    SaliencyArgs sa;
    auto* sal_cmd = app.add_subcommand("saliency", "Saliency map generation or AUC-Judd");
    sal_cmd->add_option("--maps", sa.maps_dir, "directory of <frame>.pgm maps");
    sal_cmd->add_flag("--generate", sa.generate, "generate maps from --images");
    sal_cmd->add_option("--images", sa.images_dir, "directory of .ppm frames");
    sal_cmd->add_option("--mode", sa.mode, "color|gray");
    sal_cmd->add_option("--fixations", sa.fixations_path, "fixation CSV");
    sal_cmd->add_option("--corpus", sa.corpus_path, "corpus supplying the camera header");
    sal_cmd->add_option("--config", sa.config_path, "pipeline config file");
    sal_cmd->add_option("--accuracy-deg", sa.accuracy_deg,
                        "fallback accuracy for dogs without a profile");
    sal_cmd->add_flag("--pooled", sa.pooled, "pool pixels across frames for FPR");
    sal_cmd->add_option("--seed", sa.seed, "jitter seed");
    sal_cmd->add_option("--out-dir", sa.out_dir, "output directory");

    SynthArgs sy;
    auto* syn_cmd = app.add_subcommand("synth", "Generate a synthetic planted corpus");
    syn_cmd->add_option("--config", sy.config_path, "synthesis config file")->required();
    syn_cmd->add_option("--out", sy.out_dir, "output directory")->required();
    syn_cmd->add_option("--seed", sy.seed, "override config seed");
    syn_cmd->add_option("--fixations", sy.fixations, "override fixation count");
    syn_cmd->add_option("--swap-rate", sy.swap_rate, "prediction label swap rate");
    syn_cmd->add_option("--erosion-keep", sy.erosion_keep, "fraction of mask pixels kept");
    syn_cmd->add_option("--drop-rate", sy.drop_rate, "prediction drop rate");
    syn_cmd->add_option("--spurious-rate", sy.spurious_rate, "spurious instance rate");
    syn_cmd->add_option("--corrupt-seed", sy.corrupt_seed, "corruption seed");

    ReportArgs rp;
    auto* rep_cmd = app.add_subcommand("report", "Full pipeline report for one recording");
    rep_cmd->add_option("--corpus", rp.corpus_path, "segmentation corpus")->required();
    rep_cmd->add_option("--gaze", rp.gaze_path, "gaze CSV")->required();
    rep_cmd->add_option("--dog", rp.dog_id, "dog id")->required();
    rep_cmd->add_option("--config", rp.config_path, "pipeline config file");
    rep_cmd->add_option("--maps", rp.maps_dir, "directory of <frame>.pgm saliency maps");
    rep_cmd->add_option("--accuracy-deg", rp.accuracy_deg,
                        "fallback accuracy when the config lacks the dog");
    rep_cmd->add_option("--threads", rp.threads, "worker threads (0 = auto)");
    rep_cmd->add_option("--seed", rp.seed, "seed for jitter and tie-breaking");
    rep_cmd->add_option("--weighted-lr", rp.weighted_lr,
                        "weight regression rows by P(class)");
    rep_cmd->add_option("--out-dir", rp.out_dir, "output directory");

    auto* init_cmd = app.add_subcommand("init-config", "Print a default pipeline config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "[error] " << e.what() << "\n\n" << app.help();
        return std::string(e.get_name()) == "ExtrasError" ||
                       std::string(e.get_name()) == "RequiredError"
                   ? 64
                   : 1;
    }

    try {
        if (fix_cmd->parsed()) return run_fixations(fx);
        if (att_cmd->parsed()) return run_attribute(at);
        if (seg_cmd->parsed()) return run_seg_eval(se);
        if (stats_cmd->parsed()) return run_stats(st);
        if (sal_cmd->parsed()) return run_saliency(sa);
        if (syn_cmd->parsed()) return run_synth(sy);
        if (rep_cmd->parsed()) return run_report_cmd(rp);
        if (init_cmd->parsed()) {
            std::cout << default_pipeline_config_text();
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        log_line("error", "validate", e.what());
        return 1;
    } catch (const json::exception& e) {
        log_line("error", "parse", e.what());
        return 1;
    } catch (const std::runtime_error& e) {
        log_line("error", "io", e.what());
        return 2;
    } catch (const std::exception& e) {
        log_line("error", "internal", e.what());
        return 2;
    }
    return 64;
}
