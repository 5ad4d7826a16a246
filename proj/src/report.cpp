#include "gazekit/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "gazekit/saliency.hpp"
#include "gazekit/stats.hpp"

namespace gazekit {

using nlohmann::json;

std::unordered_map<int, const FrameSegmentation*> frame_index(
    const std::vector<FrameSegmentation>& frames) {
    std::unordered_map<int, const FrameSegmentation*> idx;
    idx.reserve(frames.size());
    for (const auto& f : frames) idx[f.frame_index] = &f;
    return idx;
}

AttributionRun run_attribution(const PipelineConfig& config, const Corpus& corpus,
                               const std::vector<GazeSample>& gaze,
                               const std::string& dog_id) {
    auto pit = config.profiles.find(dog_id);
    if (pit == config.profiles.end())
        throw std::invalid_argument("no accuracy profile for dog '" + dog_id + "'");

    AttributionRun run;
    double dispersion_px = config.dispersion_deg * corpus.camera.px_per_deg_h();
    auto fixations = detect_fixations(gaze, config.min_duration_ms, dispersion_px);
    run.detected = fixations.size();

    auto idx = frame_index(corpus.frames);
    for (auto& f : fixations) {
        f.dog_id = dog_id;
        auto [first, last] = align_to_frames(f, corpus.camera.fps);
        f.first_frame = first;
        f.last_frame = last;
        auto it = idx.find(f.first_frame);
        if (it != idx.end() &&
            it->second->masks.size() <= size_t(config.sniffing_max_masks)) {
            ++run.sniffing_removed;
            continue;
        }
        run.fixations.push_back(f);
    }

    std::unordered_map<std::string, DogProfile> profiles;
    for (const auto& [id, p] : config.profiles) profiles[id] = p;
    run.records =
        batch_attribute(run.fixations, idx, profiles, corpus.camera,
                        corpus.taxonomy.num_classes(), config.include_background,
                        config.threads, &run.summary);
    return run;
}

namespace {

json firth_block(const FirthFit& fit) {
    return json{{"converged", fit.converged},
                {"iterations", fit.iterations},
                {"penalized_loglik", fit.penalized_loglik}};
}

json lr_block(const LrTestResult& lr) {
    return json{{"chi_square", lr.chi_square}, {"dof", lr.dof}, {"p", lr.p}};
}

} // namespace

json stats_report_json(const std::vector<AttributionRecord>& records,
                       const std::unordered_map<int, const FrameSegmentation*>& frames,
                       const ClassTaxonomy& taxonomy, bool weighted_lr) {
    const int K = taxonomy.num_classes();
    BehaviorTable table = behavior_table(records, frames, K);

    json out;
    json classes = json::object();
    for (int c = 1; c <= K; ++c) {
        auto agg = table.class_aggregate(c);
        if (!agg) continue;
        classes[taxonomy.name(c)] = {{"time_in_view", agg->time_in_view},
                                     {"time_fixated_in_view", agg->time_fixated_in_view},
                                     {"size_mean", agg->size_mean},
                                     {"size_sd", agg->size_sd},
                                     {"occupancy_mean", agg->occupancy_mean},
                                     {"occupancy_sd", agg->occupancy_sd},
                                     {"n_in_view", agg->n_in_view},
                                     {"n_fixated", agg->n_fixated}};
    }
    out["classes"] = std::move(classes);
    out["dogs"] = table.dogs;

    // Two-way ANOVA on time-in-view needs a complete dogs x classes grid, so
    // it runs on the classes every dog was exposed to.
    json anova = json::object();
    std::vector<int> complete;
    for (int c = 1; c <= K; ++c) {
        bool all = !table.dogs.empty();
        for (size_t d = 0; d < table.dogs.size(); ++d)
            if (!table.at(d, c)) all = false;
        if (all) complete.push_back(c);
    }
    if (table.dogs.size() >= 2 && complete.size() >= 2) {
        std::vector<std::vector<double>> grid(table.dogs.size());
        for (size_t d = 0; d < table.dogs.size(); ++d)
            for (int c : complete) grid[d].push_back(table.at(d, c)->time_in_view);
        AnovaResult a = two_way_anova(grid);
        std::vector<std::string> names;
        for (int c : complete) names.push_back(taxonomy.name(c));
        anova = {{"classes", names},
                 {"ss_class", a.ss_class},
                 {"ss_dog", a.ss_dog},
                 {"ss_error", a.ss_error},
                 {"dof_class", a.dof_class},
                 {"dof_dog", a.dof_dog},
                 {"dof_error", a.dof_error},
                 {"f_class", a.f_class},
                 {"f_dog", a.f_dog},
                 {"p_class", a.p_class},
                 {"p_dog", a.p_dog},
                 {"partial_eta_sq_class", a.eta_class},
                 {"partial_eta_sq_dog", a.eta_dog}};
    } else {
        anova = {{"skipped", "needs at least two dogs and two fully exposed classes"}};
    }
    out["anova_time_in_view"] = std::move(anova);

    // Firth logistic regression of fixated-or-not on class (and dog), one row
    // per fixation and in-view class.
    json regression = json::object();
    FixationDesign reduced =
        build_fixation_design(records, frames, K, DesignTerms::intercept_dog);
    FixationDesign full =
        build_fixation_design(records, frames, K, DesignTerms::intercept_dog_class);
    if (full.X.rows() > 0 && full.num_params < full.X.rows()) {
        const Eigen::VectorXd* w = weighted_lr ? &full.weights : nullptr;
        FirthFit fit_reduced = fit_firth_logistic(reduced.X, reduced.y, w);
        FirthFit fit_full = fit_firth_logistic(full.X, full.y, w);
        LrTestResult class_effect =
            lr_test(fit_full, full.num_params, fit_reduced, reduced.num_params);
        regression = {{"rows", full.X.rows()},
                      {"weighted", weighted_lr},
                      {"reduced", firth_block(fit_reduced)},
                      {"full", firth_block(fit_full)},
                      {"class_effect", lr_block(class_effect)}};
        if (full.dogs.size() >= 2) {
            FixationDesign inter = build_fixation_design(
                records, frames, K, DesignTerms::intercept_dog_class_interaction);
            if (inter.num_params < inter.X.rows()) {
                FirthFit fit_inter = fit_firth_logistic(
                    inter.X, inter.y, weighted_lr ? &inter.weights : nullptr);
                regression["interaction"] = firth_block(fit_inter);
                regression["interaction_effect"] =
                    lr_block(lr_test(fit_inter, inter.num_params, fit_full, full.num_params));
            }
        }
    } else {
        regression = {{"skipped", "not enough fixation rows"}};
    }
    out["regression"] = std::move(regression);

    // Size preference: Spearman of class mean size against fixated share.
    std::vector<double> sizes, shares;
    std::vector<std::string> spearman_classes;
    for (int c = 1; c <= K; ++c) {
        auto agg = table.class_aggregate(c);
        if (!agg) continue;
        sizes.push_back(agg->size_mean);
        shares.push_back(agg->time_fixated_in_view);
        spearman_classes.push_back(taxonomy.name(c));
    }
    if (sizes.size() >= 3) {
        SpearmanResult sp = spearman(sizes, shares);
        out["spearman_size_vs_fixated"] = {{"classes", spearman_classes},
                                           {"rho", sp.rho},
                                           {"p", sp.p},
                                           {"defined", sp.defined}};
    } else {
        out["spearman_size_vs_fixated"] = {{"skipped", "fewer than three exposed classes"}};
    }

    LargestObjectStats lo = largest_object_stats(records, frames);
    out["largest_object"] = {{"included_fraction", lo.included_fraction},
                             {"size_mean", lo.size_mean},
                             {"size_sd", lo.size_sd},
                             {"n", lo.n}};
    return out;
}

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

} // namespace

std::string stats_report_text(const json& stats, const ClassTaxonomy& taxonomy) {
    std::string s;
    s += "class                 in_view  fixated|view  size_mean  size_sd  n_view  n_fix\n";
    const json& classes = stats.at("classes");
    for (int c = 1; c <= taxonomy.num_classes(); ++c) {
        const std::string& name = taxonomy.name(c);
        if (!classes.contains(name)) continue;
        const json& row = classes.at(name);
        char line[160];
        std::snprintf(line, sizeof line, "%-20s  %7.4f  %12.4f  %9.5f  %7.5f  %6zu  %5zu\n",
                      name.c_str(), row.at("time_in_view").get<double>(),
                      row.at("time_fixated_in_view").get<double>(),
                      row.at("size_mean").get<double>(), row.at("size_sd").get<double>(),
                      row.at("n_in_view").get<size_t>(), row.at("n_fixated").get<size_t>());
        s += line;
    }
    s += "\n";

    const json& anova = stats.at("anova_time_in_view");
    if (anova.contains("skipped")) {
        s += "anova: skipped (" + anova.at("skipped").get<std::string>() + ")\n";
    } else {
        s += "anova time-in-view: F_class(" + std::to_string(anova.at("dof_class").get<int>()) +
             "," + std::to_string(anova.at("dof_error").get<int>()) + ") = " +
             fmt("%.4f", anova.at("f_class").get<double>()) + ", p = " +
             fmt("%.6f", anova.at("p_class").get<double>()) + ", partial eta^2 = " +
             fmt("%.4f", anova.at("partial_eta_sq_class").get<double>()) + "\n";
        s += "                    F_dog(" + std::to_string(anova.at("dof_dog").get<int>()) +
             "," + std::to_string(anova.at("dof_error").get<int>()) + ") = " +
             fmt("%.4f", anova.at("f_dog").get<double>()) + ", p = " +
             fmt("%.6f", anova.at("p_dog").get<double>()) + ", partial eta^2 = " +
             fmt("%.4f", anova.at("partial_eta_sq_dog").get<double>()) + "\n";
    }

    const json& reg = stats.at("regression");
    if (reg.contains("skipped")) {
        s += "regression: skipped (" + reg.at("skipped").get<std::string>() + ")\n";
    } else {
        const json& lr = reg.at("class_effect");
        s += "firth lr class effect: chi2(" + std::to_string(lr.at("dof").get<int>()) +
             ") = " + fmt("%.4f", lr.at("chi_square").get<double>()) + ", p = " +
             fmt("%.6f", lr.at("p").get<double>()) +
             (reg.at("weighted").get<bool>() ? " (weighted rows)\n" : "\n");
        if (reg.contains("interaction_effect")) {
            const json& ie = reg.at("interaction_effect");
            s += "firth lr dog x class:  chi2(" + std::to_string(ie.at("dof").get<int>()) +
                 ") = " + fmt("%.4f", ie.at("chi_square").get<double>()) + ", p = " +
                 fmt("%.6f", ie.at("p").get<double>()) + "\n";
        }
    }

    const json& sp = stats.at("spearman_size_vs_fixated");
    if (sp.contains("skipped")) {
        s += "spearman size vs fixated: skipped (" + sp.at("skipped").get<std::string>() +
             ")\n";
    } else if (!sp.at("defined").get<bool>()) {
        s += "spearman size vs fixated: undefined (constant input)\n";
    } else {
        s += "spearman size vs fixated: rho = " + fmt("%.4f", sp.at("rho").get<double>()) +
             ", p = " + fmt("%.6f", sp.at("p").get<double>()) + "\n";
    }

    const json& lo = stats.at("largest_object");
    s += "largest object fixated: " + fmt("%.4f", lo.at("included_fraction").get<double>()) +
         " of " + std::to_string(lo.at("n").get<size_t>()) + " fixations, mean frame share " +
         fmt("%.5f", lo.at("size_mean").get<double>()) + "\n";
    return s;
}

void run_report(const ReportInputs& inputs) {
    Corpus corpus = read_corpus(inputs.corpus_path);
    const CameraModel& a = inputs.config.camera;
    const CameraModel& b = corpus.camera;
    if (a.width_px != b.width_px || a.height_px != b.height_px ||
        std::abs(a.hfov_deg - b.hfov_deg) > 1e-9 ||
        std::abs(a.vfov_deg - b.vfov_deg) > 1e-9 || std::abs(a.fps - b.fps) > 1e-9)
        throw std::invalid_argument("corpus camera header differs from configuration");
    if (corpus.taxonomy.names() != inputs.config.taxonomy.names())
        throw std::invalid_argument("corpus taxonomy differs from configuration");

    auto gaze = read_gaze_csv(inputs.gaze_path);
    AttributionRun run = run_attribution(inputs.config, corpus, gaze, inputs.dog_id);

    std::filesystem::create_directories(inputs.out_dir);
    std::filesystem::path dir(inputs.out_dir);
    write_fixation_csv((dir / "fixations.csv").string(), run.fixations);
    write_attribution_jsonl((dir / "attribution.jsonl").string(), run.records,
                            corpus.taxonomy);

    auto idx = frame_index(corpus.frames);
    json stats =
        stats_report_json(run.records, idx, corpus.taxonomy, inputs.weighted_lr);

    json report;
    report["summary"] = {{"fixations_detected", run.detected},
                         {"sniffing_removed", run.sniffing_removed},
                         {"attributed", run.summary.total},
                         {"nulls", run.summary.nulls},
                         {"retained", run.summary.retained},
                         {"errors", run.summary.errors},
                         {"frames", corpus.frames.size()}};
    report["stats"] = std::move(stats);

    json saliency = json::object();
    if (inputs.maps_dir.empty()) {
        saliency = {{"skipped", "no saliency maps supplied"}};
    } else {
        std::filesystem::path maps(inputs.maps_dir);
        std::vector<SaliencyMap> loaded;
        std::vector<size_t> map_of_score;
        std::vector<double> scores;
        size_t missing = 0;
        const DogProfile& profile = inputs.config.profiles.at(inputs.dog_id);
        for (const auto& r : run.records) {
            if (r.error) continue;
            auto file = maps / (std::to_string(r.frame_index) + ".pgm");
            if (!std::filesystem::exists(file)) {
                ++missing;
                continue;
            }
            SaliencyMap m = load_pgm(file.string());
            if (m.width != corpus.camera.width_px || m.height != corpus.camera.height_px)
                throw std::invalid_argument("saliency map dimensions differ from camera: " +
                                            file.string());
            FixationRegion region = make_region(r.fixation, profile, corpus.camera);
            scores.push_back(fixation_score(m, region));
            loaded.push_back(std::move(m));
            map_of_score.push_back(loaded.size() - 1);
        }
        if (scores.empty()) {
            saliency = {{"skipped", "no fixation had a saliency map"},
                        {"missing_maps", missing}};
        } else {
            std::vector<const SaliencyMap*> ptrs;
            for (size_t i : map_of_score) ptrs.push_back(&loaded[i]);
            RocCurve roc = auc_judd_per_frame(scores, ptrs, inputs.config.seed);
            saliency = {{"auc_judd", roc.auc},
                        {"fixations_scored", scores.size()},
                        {"missing_maps", missing}};
        }
    }
    report["saliency"] = std::move(saliency);
    write_text_file((dir / "report.json").string(), report.dump(2) + "\n");

    std::string text;
    text += "fixations detected: " + std::to_string(run.detected) + "\n";
    text += "sniffing removed:   " + std::to_string(run.sniffing_removed) + "\n";
    text += "attributed:         " + std::to_string(run.summary.total) + " (" +
            std::to_string(run.summary.nulls) + " null, " +
            std::to_string(run.summary.errors) + " errors)\n\n";
    text += stats_report_text(report["stats"], corpus.taxonomy);
    const json& sal = report["saliency"];
    if (sal.contains("skipped"))
        text += "saliency: skipped (" + sal.at("skipped").get<std::string>() + ")\n";
    else
        text += "saliency auc-judd: " + fmt("%.4f", sal.at("auc_judd").get<double>()) +
                " over " + std::to_string(sal.at("fixations_scored").get<size_t>()) +
                " fixations\n";
    write_text_file((dir / "report.txt").string(), text);
}

} // namespace gazekit
