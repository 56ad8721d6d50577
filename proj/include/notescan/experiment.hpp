#pragma once

#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "notescan/dataset.hpp"
#include "notescan/eval.hpp"
#include "notescan/learn/model.hpp"
#include "notescan/resample.hpp"
#include "notescan/text.hpp"

namespace notescan {

struct EvalReport {
    std::string classifier;
    /// Oversampling percentage of the SMOTE level (levels are cumulative).
    int smote_percent = 0;
    std::size_t level = 0;
    bool strict = false;
    std::size_t records = 0;
    std::array<std::size_t, kClassCount> class_counts{};
    std::size_t folds = 0;
    Metrics metrics;
};

struct ExperimentOptions {
    std::vector<int> smote_percents{100, 200, 300};
    std::size_t smote_k = 5;
    std::uint64_t seed = 1;
    std::vector<ClassifierSpec> classifiers{RfParams{}, NbParams{}, PartParams{}};
    std::size_t folds = 10;
    /// Oversample inside each training fold instead of before splitting.
    bool strict = false;
};

inline std::string leakage_warning() {
    return "warning: SMOTE was applied to the whole dataset before cross-validation, so synthetic "
           "records interpolated from held-out records can sit in training folds and accuracy is "
           "optimistic; set strict_smote=true to oversample inside each training fold only.";
}

/// Cross-validates every classifier at every cumulative SMOTE level of a
/// normalized dataset. Reports are ordered level-major, classifier-minor.
inline std::vector<EvalReport> run_experiment(const Dataset& normalized, const ExperimentOptions& opts) {
    const auto levels = smote_levels(opts.smote_percents, opts.smote_k, opts.seed);
    std::vector<Dataset> resampled;
    if (!opts.strict) resampled = smote_schedule(normalized, levels);
    std::vector<EvalReport> reports;
    for (std::size_t l = 0; l < levels.size(); ++l) {
        for (const auto& spec : opts.classifiers) {
            EvalReport r;
            r.classifier = std::string(kind_of(spec));
            r.smote_percent = levels[l].percent;
            r.level = l + 1;
            r.strict = opts.strict;
            CvResult cv;
            if (opts.strict) {
                std::vector<SmoteConfig> prefix(levels.begin(), levels.begin() + static_cast<std::ptrdiff_t>(l + 1));
                cv = cross_validate(normalized, make_trainer(spec, std::move(prefix)), opts.folds, opts.seed);
                r.records = normalized.size();
                r.class_counts = normalized.class_counts();
            } else {
                cv = cross_validate(resampled[l], spec, opts.folds, opts.seed);
                r.records = resampled[l].size();
                r.class_counts = resampled[l].class_counts();
            }
            r.folds = cv.plan.k;
            r.metrics = cv.metrics;
            reports.push_back(std::move(r));
        }
    }
    return reports;
}

namespace detail {

inline std::string pct(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << 100.0 * v;
    return s.str();
}

inline std::string upper(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

inline std::vector<std::string> classifier_order(const std::vector<EvalReport>& reports) {
    std::vector<std::string> names;
    for (const auto& r : reports) {
        if (std::find(names.begin(), names.end(), r.classifier) == names.end()) names.push_back(r.classifier);
    }
    return names;
}

inline std::vector<std::size_t> level_order(const std::vector<EvalReport>& reports) {
    std::vector<std::size_t> levels;
    for (const auto& r : reports) {
        if (std::find(levels.begin(), levels.end(), r.level) == levels.end()) levels.push_back(r.level);
    }
    return levels;
}

inline std::string level_name(const EvalReport& r) { return "SMOTE " + std::to_string(r.smote_percent) + "%"; }

}  // namespace detail

/// Human-readable tables: accuracy per level and classifier, then one
/// weighted-metric table per classifier with confusion matrices.
inline void write_report_text(const std::vector<EvalReport>& reports, std::ostream& out) {
    if (reports.empty()) return;
    const auto names = detail::classifier_order(reports);
    const auto levels = detail::level_order(reports);
    auto find = [&](std::size_t level, const std::string& name) -> const EvalReport& {
        for (const auto& r : reports) {
            if (r.level == level && r.classifier == name) return r;
        }
        throw InvalidArgument("incomplete report grid");
    };
    out << "Protocol: " << (reports.front().strict ? "strict (SMOTE inside each training fold)"
                                                   : "SMOTE before cross-validation")
        << ", " << reports.front().folds << "-fold stratified cross-validation\n";
    if (!reports.front().strict) out << leakage_warning() << '\n';
    out << "\nAccuracy (%)\n" << std::left << std::setw(14) << "Level";
    for (const auto& n : names) out << std::setw(10) << detail::upper(n);
    out << "Records (yes/no)\n";
    for (auto l : levels) {
        const auto& first = find(l, names.front());
        out << std::setw(14) << detail::level_name(first);
        for (const auto& n : names) out << std::setw(10) << detail::pct(find(l, n).metrics.accuracy);
        out << first.records << " (" << first.class_counts[0] << "/" << first.class_counts[1] << ")\n";
    }
    for (const auto& n : names) {
        out << '\n' << detail::upper(n) << " weighted averages\n";
        out << std::setw(14) << "Level" << std::setw(10) << "TP Rate" << std::setw(11) << "Precision"
            << std::setw(10) << "Recall" << std::setw(11) << "F-Measure" << "Confusion [yes->yes yes->no; no->yes no->no]\n";
        for (auto l : levels) {
            const auto& r = find(l, n);
            const auto& w = r.metrics.weighted;
            const auto& cm = r.metrics.confusion.counts;
            out << std::setw(14) << detail::level_name(r) << std::setw(10) << detail::pct(w.tp_rate)
                << std::setw(11) << detail::pct(w.precision) << std::setw(10) << detail::pct(w.recall)
                << std::setw(11) << detail::pct(w.f_measure) << "[" << cm[0][0] << " " << cm[0][1] << "; "
                << cm[1][0] << " " << cm[1][1] << "]" << (w.precision_undefined ? "  (undefined precision set to 0)" : "")
                << '\n';
        }
    }
    out << std::right;
}

inline constexpr std::string_view kReportMagic = "notescan-report";

/// Tab-separated report: one row per (classifier, level) with weighted and
/// per-class metrics as fractions and the pooled confusion matrix.
inline void write_report_tsv(const std::vector<EvalReport>& reports, std::ostream& out) {
    using text::format_double;
    out << "# " << kReportMagic << " 1\n";
    if (!reports.empty()) out << "# protocol " << (reports.front().strict ? "strict" : "presplit") << '\n';
    out << "classifier\tlevel\tsmote_percent\trecords\tfolds\taccuracy\ttp_rate\tprecision\trecall\tf_measure";
    for (auto l : kLabels) {
        const std::string s(to_string(l));
        out << "\ttp_rate_" << s << "\tprecision_" << s << "\trecall_" << s << "\tf_measure_" << s;
    }
    out << "\tcm_yes_yes\tcm_yes_no\tcm_no_yes\tcm_no_no\tprecision_undefined\n";
    for (const auto& r : reports) {
        const auto& m = r.metrics;
        out << r.classifier << '\t' << r.level << '\t' << r.smote_percent << '\t' << r.records << '\t' << r.folds
            << '\t' << format_double(m.accuracy) << '\t' << format_double(m.weighted.tp_rate) << '\t'
            << format_double(m.weighted.precision) << '\t' << format_double(m.weighted.recall) << '\t'
            << format_double(m.weighted.f_measure);
        for (const auto& pc : m.per_class) {
            out << '\t' << format_double(pc.tp_rate) << '\t' << format_double(pc.precision) << '\t'
                << format_double(pc.recall) << '\t' << format_double(pc.f_measure);
        }
        const auto& cm = m.confusion.counts;
        out << '\t' << cm[0][0] << '\t' << cm[0][1] << '\t' << cm[1][0] << '\t' << cm[1][1] << '\t'
            << (m.weighted.precision_undefined ? 1 : 0) << '\n';
    }
}

}  // namespace notescan
