#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "notescan/config.hpp"
#include "notescan/dataset.hpp"
#include "notescan/error.hpp"
#include "notescan/experiment.hpp"
#include "notescan/fixtures.hpp"
#include "notescan/imaging.hpp"
#include "notescan/learn/model.hpp"
#include "notescan/resample.hpp"
#include "notescan/tabular_io.hpp"
#include "notescan/texfeat.hpp"

namespace notescan {

struct ManifestEntry {
    std::string filename;
    Label label;
};

/// "filename,label" lines with an optional header; '#' starts a comment line.
inline std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) throw FileNotFoundError("label manifest not found: " + path.string());
    std::ifstream in(path, std::ios::binary);
    std::vector<ManifestEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (detail::next_line(in, line)) {
        ++line_no;
        const auto t = text::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto fields = text::split(t, ',');
        if (fields.size() != 2) throw ParseError(line_no, path.string() + ": expected filename,label");
        const auto name = text::trim(fields[0]);
        const auto label_text = text::trim(fields[1]);
        if (entries.empty() && text::lower(name) == "filename") continue;
        const auto label = parse_label(label_text);
        if (!label) throw UnknownLabelError(line_no, path.string() + ": unknown label '" + std::string(label_text) + "'");
        entries.push_back({std::string(name), *label});
    }
    if (entries.empty()) throw ParseError(line_no, path.string() + ": manifest lists no images");
    return entries;
}

struct ExtractFailure {
    std::string filename;
    std::string message;
};

struct ExtractResult {
    /// Records of the images that succeeded, in filename order.
    std::vector<FeatureRecord> records;
    std::vector<std::string> filenames;
    std::vector<ExtractFailure> failures;
};

inline FeatureVector extract_features(const std::filesystem::path& image, const Config& cfg) {
    return feature_vector(preprocess(image, preprocess_options(cfg)), glcm_options(cfg));
}

/// Features of every manifest image under `dir`. Images are processed
/// concurrently; failures are collected per file and do not stop the run.
inline ExtractResult extract_directory(const std::filesystem::path& dir, const std::filesystem::path& manifest,
                                       const Config& cfg, unsigned threads = std::thread::hardware_concurrency()) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) throw FileNotFoundError("image directory not found: " + dir.string());
    bool any_image = false;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        const auto ext = text::lower(e.path().extension().string());
        if (e.is_regular_file() && (ext == ".png" || ext == ".jpg" || ext == ".jpeg")) {
            any_image = true;
            break;
        }
    }
    if (!any_image) throw InvalidArgument("image directory " + dir.string() + " contains no JPEG or PNG files");
    auto entries = read_manifest(manifest);
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.filename < b.filename; });

    struct Slot {
        std::optional<FeatureVector> features;
        std::string error;
    };
    std::vector<Slot> slots(entries.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < entries.size(); i = next++) {
            try {
                slots[i].features = extract_features(dir / entries[i].filename, cfg);
            } catch (const std::exception& e) {
                slots[i].error = e.what();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(entries.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    ExtractResult out;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (slots[i].features) {
            out.records.push_back({*slots[i].features, entries[i].label});
            out.filenames.push_back(entries[i].filename);
        } else {
            out.failures.push_back({entries[i].filename, slots[i].error});
        }
    }
    return out;
}

inline std::filesystem::path strip_dataset_extension(std::filesystem::path p) {
    const auto ext = text::lower(p.extension().string());
    if (ext == ".csv" || ext == ".arff") p.replace_extension();
    return p;
}

namespace detail {

inline void require(const std::string& value, const char* key) {
    if (value.empty()) throw ConfigError(std::string("missing required setting --") + key);
}

}  // namespace detail

/// Exit codes of the command functions: 0 success, 1 partial failure (or a
/// "fake" verdict for predict), 2 error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitError = 2;

inline int cmd_fixtures(const Config& cfg, std::ostream& out) {
    validate(cfg);
    detail::require(cfg.output, "output");
    if (cfg.fixtures_real + cfg.fixtures_fake == 0) throw ConfigError("fixtures_real + fixtures_fake must be >= 1");
    FixtureOptions opts;
    opts.real = cfg.fixtures_real;
    opts.fake = cfg.fixtures_fake;
    opts.seed = cfg.seed;
    opts.rois = cfg.rois;
    const auto entries = write_fixtures(cfg.output, opts);
    out << "wrote " << entries.size() << " images (" << opts.real << " real, " << opts.fake << " fake) and "
        << (std::filesystem::path(cfg.output) / "labels.csv").string() << '\n';
    return kExitOk;
}

inline int cmd_extract(const Config& cfg, std::ostream& out, std::ostream& err) {
    validate(cfg);
    detail::require(cfg.input, "input");
    detail::require(cfg.labels, "labels");
    detail::require(cfg.output, "output");
    const auto result = extract_directory(cfg.input, cfg.labels, cfg);
    for (const auto& f : result.failures) err << "error: " << f.filename << ": " << f.message << '\n';
    if (result.records.empty()) {
        err << "error: no image could be processed\n";
        return kExitError;
    }
    const Dataset ds = build_dataset(result.records);
    const auto stem = strip_dataset_extension(cfg.output);
    if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());
    auto csv = stem;
    auto arff = stem;
    csv += ".csv";
    arff += ".arff";
    write_csv(ds, csv);
    write_arff(ds, arff);
    out << "extracted " << ds.size() << " records (" << ds.count(Label::yes) << " yes, " << ds.count(Label::no)
        << " no) to " << csv.string() << " and " << arff.string() << '\n';
    return result.failures.empty() ? kExitOk : kExitFailure;
}

inline int cmd_resample(const Config& cfg, std::ostream& out) {
    validate(cfg);
    detail::require(cfg.input, "input");
    detail::require(cfg.output, "output");
    const Dataset raw = read_dataset(cfg.input);
    const auto norm = min_max_normalize(raw);
    const auto levels = smote_levels(cfg.smote_levels, cfg.smote_k, cfg.seed);
    const auto outputs = smote_schedule(norm.dataset, levels);
    const std::filesystem::path dir(cfg.output);
    std::filesystem::create_directories(dir);
    write_params(norm.params, dir / "normalization.params");
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        const auto name = "level" + std::to_string(i + 1) + "_smote" + std::to_string(levels[i].percent) + ".csv";
        write_csv(outputs[i], dir / name);
        out << name << ": " << outputs[i].count(Label::no) << " no / " << outputs[i].count(Label::yes) << " yes\n";
    }
    return kExitOk;
}

inline int cmd_train(const Config& cfg, std::ostream& out) {
    validate(cfg);
    detail::require(cfg.input, "input");
    detail::require(cfg.model, "model");
    if (cfg.classifiers.size() != 1) throw ConfigError("train needs exactly one classifier");
    const auto spec = classifier_spec(cfg, cfg.classifiers.front());
    const Dataset raw = read_dataset(cfg.input);
    auto norm = min_max_normalize(raw);
    if (!cfg.params.empty()) norm.params = compose(read_params(cfg.params), norm.params);
    const Model model = train(spec, norm.dataset);
    save_model(model, std::filesystem::path(cfg.model));
    const std::string params_path = cfg.model + ".params";
    write_params(norm.params, std::filesystem::path(params_path));
    std::size_t correct = 0;
    for (const auto& rec : norm.dataset.records) correct += predict(model, rec.features).label == rec.label;
    out << "trained " << kind_of(model) << " on " << norm.dataset.size() << " records ("
        << norm.dataset.count(Label::yes) << " yes, " << norm.dataset.count(Label::no) << " no)";
    if (const auto* rf = std::get_if<RfModel>(&model)) out << ", " << rf->trees.size() << " trees";
    if (const auto* part = std::get_if<PartModel>(&model)) out << ", " << part->rules.size() << " rules";
    out << "; training accuracy " << std::fixed << std::setprecision(2)
        << 100.0 * static_cast<double>(correct) / static_cast<double>(norm.dataset.size()) << "%\n"
        << std::defaultfloat << "model: " << cfg.model << "\nnormalization: " << params_path << '\n';
    return kExitOk;
}

inline int cmd_eval(const Config& cfg, std::ostream& out) {
    validate(cfg);
    detail::require(cfg.input, "input");
    const Dataset raw = read_dataset(cfg.input);
    const auto norm = min_max_normalize(raw);
    const auto reports = run_experiment(norm.dataset, experiment_options(cfg));
    write_report_text(reports, out);
    if (!cfg.output.empty()) {
        const std::filesystem::path path(cfg.output);
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
        std::ofstream tsv(path, std::ios::binary | std::ios::trunc);
        write_report_tsv(reports, tsv);
        if (!tsv) throw IoError("cannot write report " + path.string());
        out << "\nreport: " << path.string() << '\n';
    }
    return kExitOk;
}

/// Prints the verdict; the exit code is 0 for a genuine note, 1 for a counterfeit.
inline int cmd_predict(const Config& cfg, std::ostream& out) {
    validate(cfg);
    detail::require(cfg.model, "model");
    detail::require(cfg.image, "image");
    const std::string params_path = cfg.params.empty() ? cfg.model + ".params" : cfg.params;
    const auto params = read_params(std::filesystem::path(params_path));
    const Model model = load_model(std::filesystem::path(cfg.model));
    const FeatureVector raw = extract_features(cfg.image, cfg);
    const Prediction p = predict(model, apply_normalization(raw, params));
    out << "verdict: " << (p.label == Label::yes ? "real" : "fake") << '\n';
    out << "confidence: " << text::format_double(p.confidence);
    if (std::holds_alternative<NbModel>(model)) out << " (posterior)";
    else if (std::holds_alternative<RfModel>(model)) out << " (vote fraction)";
    else out << " (rule " << *p.rule << " accuracy)";
    out << '\n';
    for (std::size_t a = 0; a < kFeatureCount; ++a) {
        out << kFeatureNames[a] << ": " << text::format_double(raw[a]) << '\n';
    }
    return p.label == Label::yes ? kExitOk : kExitFailure;
}

}  // namespace notescan
