#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gazekit/attribution.hpp"
#include "gazekit/frame.hpp"
#include "gazekit/taxonomy.hpp"

namespace gazekit {

struct BehaviorCell {
    double time_in_view = 0.0;         // fraction of fixation frames with the class present
    double time_fixated_in_view = 0.0; // mean P(class) over fixations with class in view
    double size_mean = 0.0;            // instance area / frame area
    double size_sd = 0.0;
    double occupancy_mean = 0.0; // over fixations where P(class) > 0
    double occupancy_sd = 0.0;
    size_t n_in_view = 0;
    size_t n_fixated = 0;
};

/// Per (dog, class) behavior metrics. Cells with zero exposure are absent.
struct BehaviorTable {
    std::vector<std::string> dogs;
    int num_classes = 0;
    std::vector<std::optional<BehaviorCell>> cells; // dogs x classes (1-based class)

    std::optional<BehaviorCell>& at(size_t dog, int class_id) {
        return cells[dog * size_t(num_classes) + size_t(class_id - 1)];
    }
    const std::optional<BehaviorCell>& at(size_t dog, int class_id) const {
        return cells[dog * size_t(num_classes) + size_t(class_id - 1)];
    }
    /// Mean of a cell field over dogs with exposure; absent if none.
    std::optional<BehaviorCell> class_aggregate(int class_id) const;
};

BehaviorTable behavior_table(const std::vector<AttributionRecord>& records,
                             const std::unordered_map<int, const FrameSegmentation*>& frames,
                             int num_classes);

struct AnovaResult {
    double ss_class = 0.0, ss_dog = 0.0, ss_error = 0.0, ss_total = 0.0;
    int dof_class = 0, dof_dog = 0, dof_error = 0;
    double f_class = 0.0, f_dog = 0.0;
    double eta_class = 0.0, eta_dog = 0.0; // partial eta squared
    double p_class = 1.0, p_dog = 1.0;
};

/// Two-way ANOVA without interaction on a complete dogs x classes grid of
/// proportions, one observation per cell.
AnovaResult two_way_anova(const std::vector<std::vector<double>>& grid);

struct FirthFit {
    Eigen::VectorXd coefficients;
    Eigen::VectorXd standard_errors;
    double penalized_loglik = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> loglik_trace;
};

/// Firth-penalized logistic regression via IRLS with the hat-matrix score
/// correction. Finite estimates even under complete separation.
FirthFit fit_firth_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const Eigen::VectorXd* case_weights = nullptr,
                            double tol = 1e-8, int max_iter = 100);

struct LrTestResult {
    double chi_square = 0.0;
    int dof = 0;
    double p = 1.0;
};

LrTestResult lr_test(const FirthFit& full, int dof_full, const FirthFit& reduced,
                     int dof_reduced);

struct SpearmanResult {
    double rho = 0.0;
    double p = 1.0;
    bool defined = false; // false when an input is constant
};

SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y);

struct LargestObjectStats {
    double included_fraction = 0.0; // fixations whose largest in-frame object was attended
    double size_mean = 0.0;         // largest-object frame share when fixated
    double size_sd = 0.0;
    size_t n = 0;
};

LargestObjectStats largest_object_stats(
    const std::vector<AttributionRecord>& records,
    const std::unordered_map<int, const FrameSegmentation*>& frames);

/// Design matrix for the fixation regressions: one row per (fixation,
/// in-view class); outcome 1 iff P(class) > 0; optional weight = P(class).
struct FixationDesign {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    Eigen::VectorXd weights;
    std::vector<std::string> dogs;
    int num_params = 0;
};

enum class DesignTerms { intercept_dog, intercept_dog_class, intercept_dog_class_interaction };

FixationDesign build_fixation_design(
    const std::vector<AttributionRecord>& records,
    const std::unordered_map<int, const FrameSegmentation*>& frames, int num_classes,
    DesignTerms terms);

} // namespace gazekit
