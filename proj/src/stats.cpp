#include "gazekit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "gazekit/numeric.hpp"

namespace gazekit {

namespace {

struct Welford {
    size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    void add(double v) {
        ++n;
        double d = v - mean;
        mean += d / double(n);
        m2 += d * (v - mean);
    }
    double sd() const { return n < 2 ? 0.0 : std::sqrt(m2 / double(n - 1)); }
};

} // namespace

std::optional<BehaviorCell> BehaviorTable::class_aggregate(int class_id) const {
    BehaviorCell agg;
    size_t n = 0;
    for (size_t d = 0; d < dogs.size(); ++d) {
        const auto& cell = at(d, class_id);
        if (!cell) continue;
        agg.time_in_view += cell->time_in_view;
        agg.time_fixated_in_view += cell->time_fixated_in_view;
        agg.size_mean += cell->size_mean;
        agg.size_sd += cell->size_sd;
        agg.occupancy_mean += cell->occupancy_mean;
        agg.occupancy_sd += cell->occupancy_sd;
        agg.n_in_view += cell->n_in_view;
        agg.n_fixated += cell->n_fixated;
        ++n;
    }
    if (n == 0) return std::nullopt;
    double dn = double(n);
    agg.time_in_view /= dn;
    agg.time_fixated_in_view /= dn;
    agg.size_mean /= dn;
    agg.size_sd /= dn;
    agg.occupancy_mean /= dn;
    agg.occupancy_sd /= dn;
    return agg;
}

BehaviorTable behavior_table(const std::vector<AttributionRecord>& records,
                             const std::unordered_map<int, const FrameSegmentation*>& frames,
                             int num_classes) {
    BehaviorTable table;
    table.num_classes = num_classes;

    std::map<std::string, size_t> dog_index;
    for (const auto& r : records) {
        if (r.error || r.distribution.is_null) continue;
        if (!dog_index.count(r.dog_id)) {
            dog_index[r.dog_id] = table.dogs.size();
            table.dogs.push_back(r.dog_id);
        }
    }
    table.cells.assign(table.dogs.size() * size_t(num_classes), std::nullopt);

    const size_t nd = table.dogs.size();
    std::vector<size_t> dog_fix_count(nd, 0);
    std::vector<std::vector<size_t>> in_view(nd, std::vector<size_t>(num_classes + 1, 0));
    std::vector<std::vector<double>> p_sum(nd, std::vector<double>(num_classes + 1, 0.0));
    std::vector<std::vector<Welford>> occ(nd, std::vector<Welford>(num_classes + 1));
    std::vector<std::vector<Welford>> size_stats(nd, std::vector<Welford>(num_classes + 1));

    for (const auto& r : records) {
        if (r.error || r.distribution.is_null) continue;
        auto fit = frames.find(r.frame_index);
        if (fit == frames.end() || fit->second == nullptr) continue;
        const FrameSegmentation& frame = *fit->second;
        size_t d = dog_index[r.dog_id];
        ++dog_fix_count[d];
        double frame_area = double(frame.width) * frame.height;
        std::vector<bool> present(size_t(num_classes) + 1, false);
        for (const auto& m : frame.masks) {
            if (m.class_id < 1 || m.class_id > num_classes) continue;
            present[size_t(m.class_id)] = true;
            size_stats[d][size_t(m.class_id)].add(double(rle_area(m.mask)) / frame_area);
        }
        for (int c = 1; c <= num_classes; ++c) {
            if (!present[size_t(c)]) continue;
            ++in_view[d][size_t(c)];
            p_sum[d][size_t(c)] += r.distribution.probs[size_t(c)];
            if (r.distribution.probs[size_t(c)] > 0.0)
                occ[d][size_t(c)].add(r.occupancy[size_t(c)]);
        }
    }

    for (size_t d = 0; d < nd; ++d) {
        for (int c = 1; c <= num_classes; ++c) {
            if (in_view[d][size_t(c)] == 0) continue; // zero exposure: absent, not zero
            BehaviorCell cell;
            cell.n_in_view = in_view[d][size_t(c)];
            cell.time_in_view = double(cell.n_in_view) / double(dog_fix_count[d]);
            cell.time_fixated_in_view = p_sum[d][size_t(c)] / double(cell.n_in_view);
            cell.size_mean = size_stats[d][size_t(c)].mean;
            cell.size_sd = size_stats[d][size_t(c)].sd();
            cell.occupancy_mean = occ[d][size_t(c)].mean;
            cell.occupancy_sd = occ[d][size_t(c)].sd();
            cell.n_fixated = occ[d][size_t(c)].n;
            table.at(d, c) = cell;
        }
    }
    return table;
}

AnovaResult two_way_anova(const std::vector<std::vector<double>>& grid) {
    const size_t d = grid.size();
    if (d < 2) throw std::invalid_argument("two_way_anova: need at least 2 rows");
    const size_t k = grid[0].size();
    if (k < 2) throw std::invalid_argument("two_way_anova: need at least 2 columns");
    for (const auto& row : grid)
        if (row.size() != k)
            throw std::invalid_argument("two_way_anova: grid has missing cells");

    double grand = 0.0;
    for (const auto& row : grid)
        for (double v : row) grand += v;
    grand /= double(d * k);

    std::vector<double> dog_mean(d, 0.0), class_mean(k, 0.0);
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < k; ++j) {
            dog_mean[i] += grid[i][j] / double(k);
            class_mean[j] += grid[i][j] / double(d);
        }

    AnovaResult r;
    for (size_t j = 0; j < k; ++j) {
        double dm = class_mean[j] - grand;
        r.ss_class += double(d) * dm * dm;
    }
    for (size_t i = 0; i < d; ++i) {
        double dm = dog_mean[i] - grand;
        r.ss_dog += double(k) * dm * dm;
    }
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < k; ++j) {
            double dv = grid[i][j] - grand;
            r.ss_total += dv * dv;
        }
    r.ss_error = r.ss_total - r.ss_class - r.ss_dog;

    r.dof_class = int(k) - 1;
    r.dof_dog = int(d) - 1;
    r.dof_error = r.dof_class * r.dof_dog;
    double ms_error = r.ss_error / double(r.dof_error);
    r.f_class = ms_error > 0.0 ? (r.ss_class / r.dof_class) / ms_error : 0.0;
    r.f_dog = ms_error > 0.0 ? (r.ss_dog / r.dof_dog) / ms_error : 0.0;
    double denom_c = r.ss_class + r.ss_error;
    double denom_d = r.ss_dog + r.ss_error;
    r.eta_class = denom_c > 0.0 ? r.ss_class / denom_c : 0.0;
    r.eta_dog = denom_d > 0.0 ? r.ss_dog / denom_d : 0.0;
    // F survival via the beta tail: P[F > f] = I_{d2/(d2+d1 f)}(d2/2, d1/2)
    auto f_sf = [](double f, double d1, double d2) {
        if (f <= 0.0) return 1.0;
        return regularized_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
    };
    r.p_class = f_sf(r.f_class, r.dof_class, r.dof_error);
    r.p_dog = f_sf(r.f_dog, r.dof_dog, r.dof_error);
    return r;
}

namespace {

double penalized_loglik(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const Eigen::VectorXd& w, const Eigen::VectorXd& beta) {
    Eigen::VectorXd eta = X * beta;
    double ll = 0.0;
    Eigen::VectorXd p(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        double e = eta[i];
        // log(1 + exp(e)) computed stably
        double log1pe = e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
        ll += w[i] * (y[i] * e - log1pe);
        p[i] = 1.0 / (1.0 + std::exp(-e));
    }
    Eigen::MatrixXd info = X.transpose() *
                           (w.array() * p.array() * (1.0 - p.array())).matrix().asDiagonal() *
                           X;
    Eigen::LLT<Eigen::MatrixXd> llt(info);
    if (llt.info() != Eigen::Success) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(info);
        double det = lu.determinant();
        return ll + 0.5 * std::log(std::max(det, 1e-300));
    }
    double half_logdet = 0.0;
    for (Eigen::Index i = 0; i < info.rows(); ++i)
        half_logdet += std::log(llt.matrixL()(i, i));
    return ll + half_logdet;
}

} // namespace

FirthFit fit_firth_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const Eigen::VectorXd* case_weights, double tol, int max_iter) {
    const Eigen::Index n = X.rows(), p = X.cols();
    if (y.size() != n) throw std::invalid_argument("fit_firth_logistic: X/y size mismatch");
    for (Eigen::Index i = 0; i < n; ++i)
        if (y[i] != 0.0 && y[i] != 1.0)
            throw std::invalid_argument("fit_firth_logistic: outcomes must be 0 or 1");
    Eigen::VectorXd w = case_weights ? *case_weights : Eigen::VectorXd::Ones(n);
    if (w.size() != n)
        throw std::invalid_argument("fit_firth_logistic: weight size mismatch");

    FirthFit fit;
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    double ll = penalized_loglik(X, y, w, beta);
    fit.loglik_trace.push_back(ll);

    Eigen::MatrixXd info(p, p);
    for (int iter = 0; iter < max_iter; ++iter) {
        Eigen::VectorXd eta = X * beta;
        Eigen::VectorXd prob(n), wdiag(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            prob[i] = 1.0 / (1.0 + std::exp(-eta[i]));
            wdiag[i] = w[i] * prob[i] * (1.0 - prob[i]);
        }
        info = X.transpose() * wdiag.asDiagonal() * X;
        Eigen::LDLT<Eigen::MatrixXd> solver(info);
        // hat diagonal h_i = wdiag_i * x_i' info^{-1} x_i
        Eigen::MatrixXd XInv = solver.solve(X.transpose()); // p x n
        Eigen::VectorXd score = Eigen::VectorXd::Zero(p);
        for (Eigen::Index i = 0; i < n; ++i) {
            double h = wdiag[i] * X.row(i).dot(XInv.col(i));
            double resid = w[i] * (y[i] - prob[i]) + h * (0.5 - prob[i]);
            score += resid * X.row(i).transpose();
        }
        fit.iterations = iter + 1;
        if (score.lpNorm<Eigen::Infinity>() < tol) {
            fit.converged = true;
            break;
        }
        Eigen::VectorXd step = solver.solve(score);
        // step-halving keeps the penalized likelihood monotone
        double new_ll = 0.0;
        Eigen::VectorXd cand;
        bool accepted = false;
        for (int half = 0; half < 20; ++half) {
            cand = beta + step;
            new_ll = penalized_loglik(X, y, w, cand);
            if (new_ll >= ll - 1e-12) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        beta = cand;
        ll = new_ll;
        fit.loglik_trace.push_back(ll);
    }

    fit.coefficients = beta;
    fit.penalized_loglik = ll;
    Eigen::MatrixXd cov = info.completeOrthogonalDecomposition().pseudoInverse();
    fit.standard_errors = cov.diagonal().array().max(0.0).sqrt();
    return fit;
}

LrTestResult lr_test(const FirthFit& full, int dof_full, const FirthFit& reduced,
                     int dof_reduced) {
    if (dof_full <= dof_reduced)
        throw std::invalid_argument("lr_test: models are not nested");
    LrTestResult r;
    r.dof = dof_full - dof_reduced;
    r.chi_square = std::max(0.0, 2.0 * (full.penalized_loglik - reduced.penalized_loglik));
    r.p = chi2_sf(r.chi_square, double(r.dof));
    return r;
}

namespace {

std::vector<double> mid_ranks(const std::vector<double>& v) {
    const size_t n = v.size();
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
        double r = 0.5 * (double(i) + double(j)) + 1.0; // average rank, 1-based
        for (size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
        i = j + 1;
    }
    return ranks;
}

} // namespace

SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("spearman: length mismatch");
    if (x.size() < 3)
        throw std::invalid_argument("spearman: need at least 3 pairs");
    SpearmanResult res;
    auto rx = mid_ranks(x);
    auto ry = mid_ranks(y);
    const double n = double(x.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return res; // constant input: undefined
    res.defined = true;
    res.rho = sxy / std::sqrt(sxx * syy);
    double dof = n - 2.0;
    if (std::fabs(res.rho) >= 1.0) {
        res.p = 0.0;
    } else {
        double t = res.rho * std::sqrt(dof / (1.0 - res.rho * res.rho));
        res.p = student_t_two_sided_p(t, dof);
    }
    return res;
}

LargestObjectStats largest_object_stats(
    const std::vector<AttributionRecord>& records,
    const std::unordered_map<int, const FrameSegmentation*>& frames) {
    LargestObjectStats s;
    Welford size_w;
    size_t total = 0, included = 0;
    for (const auto& r : records) {
        if (r.error || r.distribution.is_null) continue;
        auto fit = frames.find(r.frame_index);
        if (fit == frames.end() || fit->second == nullptr) continue;
        const FrameSegmentation& frame = *fit->second;
        if (frame.masks.empty()) continue;
        const InstanceMask* largest = nullptr;
        uint64_t best = 0;
        for (const auto& m : frame.masks) {
            uint64_t a = rle_area(m.mask);
            if (largest == nullptr || a > best) {
                largest = &m;
                best = a;
            }
        }
        ++total;
        if (size_t(largest->class_id) < r.distribution.probs.size() &&
            r.distribution.probs[size_t(largest->class_id)] > 0.0) {
            ++included;
            size_w.add(double(best) / (double(frame.width) * frame.height));
        }
    }
    s.n = total;
    s.included_fraction = total == 0 ? 0.0 : double(included) / double(total);
    s.size_mean = size_w.mean;
    s.size_sd = size_w.sd();
    return s;
}

FixationDesign build_fixation_design(
    const std::vector<AttributionRecord>& records,
    const std::unordered_map<int, const FrameSegmentation*>& frames, int num_classes,
    DesignTerms terms) {
    std::map<std::string, size_t> dog_index;
    for (const auto& r : records) {
        if (r.error || r.distribution.is_null) continue;
        if (!dog_index.count(r.dog_id)) dog_index[r.dog_id] = dog_index.size();
    }
    FixationDesign design;
    design.dogs.resize(dog_index.size());
    for (const auto& [id, i] : dog_index) design.dogs[i] = id;

    struct Row {
        size_t dog;
        int cls;
        double y, w;
    };
    std::vector<Row> rows;
    std::set<int> seen_classes;
    for (const auto& r : records) {
        if (r.error || r.distribution.is_null) continue;
        auto fit = frames.find(r.frame_index);
        if (fit == frames.end() || fit->second == nullptr) continue;
        std::vector<bool> present(size_t(num_classes) + 1, false);
        for (const auto& m : fit->second->masks)
            if (m.class_id >= 1 && m.class_id <= num_classes) present[size_t(m.class_id)] = true;
        size_t d = dog_index[r.dog_id];
        for (int c = 1; c <= num_classes; ++c) {
            if (!present[size_t(c)]) continue;
            double p = r.distribution.probs[size_t(c)];
            rows.push_back({d, c, p > 0.0 ? 1.0 : 0.0, p > 0.0 ? p : 1.0});
            seen_classes.insert(c);
        }
    }

    // Levels with no rows get no dummy column; an all-zero column would make
    // the Fisher information singular.
    std::map<int, int> class_level; // class id -> 0-based level, 0 is baseline
    for (int c : seen_classes) class_level.emplace(c, int(class_level.size()));

    const int nd = int(dog_index.size());
    const int dog_terms = std::max(0, nd - 1); // reference coding, first dog baseline
    const int class_terms = std::max(0, int(class_level.size()) - 1);
    int cols = 1 + dog_terms;
    if (terms != DesignTerms::intercept_dog) cols += class_terms;
    if (terms == DesignTerms::intercept_dog_class_interaction)
        cols += dog_terms * class_terms;
    design.num_params = cols;

    design.X = Eigen::MatrixXd::Zero(Eigen::Index(rows.size()), cols);
    design.y.resize(Eigen::Index(rows.size()));
    design.weights.resize(Eigen::Index(rows.size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        const Row& row = rows[i];
        Eigen::Index ri = Eigen::Index(i);
        int level = class_level.at(row.cls);
        design.X(ri, 0) = 1.0;
        int col = 1;
        if (row.dog >= 1) design.X(ri, col + int(row.dog) - 1) = 1.0;
        col += dog_terms;
        if (terms != DesignTerms::intercept_dog) {
            if (level >= 1) design.X(ri, col + level - 1) = 1.0;
            col += class_terms;
            if (terms == DesignTerms::intercept_dog_class_interaction && row.dog >= 1 &&
                level >= 1)
                design.X(ri, col + (int(row.dog) - 1) * class_terms + level - 1) = 1.0;
        }
        design.y[ri] = row.y;
        design.weights[ri] = row.w;
    }
    return design;
}

} // namespace gazekit
