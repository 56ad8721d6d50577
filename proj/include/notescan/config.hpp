#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "notescan/error.hpp"
#include "notescan/experiment.hpp"
#include "notescan/imaging.hpp"
#include "notescan/learn/model.hpp"
#include "notescan/texfeat.hpp"
#include "notescan/text.hpp"

namespace notescan {

/// Run configuration. Loaded from a flat "key = value" file ('#' comments);
/// every key can also be given as --key on the command line.
struct Config {
    RoiSpec rois;
    std::size_t resize_rows = kStandardRows;
    std::size_t resize_cols = kStandardCols;
    std::size_t wiener_window = 3;
    std::size_t glcm_levels = 8;
    bool glcm_symmetric = false;
    std::vector<int> smote_levels{100, 200, 300};
    std::size_t smote_k = 5;
    std::uint64_t seed = 1;
    std::vector<std::string> classifiers{"rf"};
    std::size_t rf_trees = 100;
    std::size_t rf_features = kDefaultFeaturesPerSplit;
    bool rf_bootstrap = true;
    std::size_t rf_min_leaf = 1;
    double part_confidence = 0.25;
    std::size_t part_min_leaf = 2;
    double nb_variance_floor = 1e-9;
    std::size_t cv_folds = 10;
    bool strict_smote = false;
    std::size_t fixtures_real = 50;
    std::size_t fixtures_fake = 20;
    std::string input;
    std::string labels;
    std::string output;
    std::string model;
    std::string params;
    std::string image;
};

/// Keys accepted in config files and as --key flags, in documentation order.
inline const std::vector<std::string_view>& config_keys() {
    static const std::vector<std::string_view> keys{
        "roi_strip",       "roi_bottom",    "resize_rows",     "resize_cols",   "wiener_window",
        "glcm_levels",     "glcm_symmetric", "smote_levels",   "smote_k",       "seed",
        "classifier",      "rf_trees",      "rf_features",     "rf_bootstrap",  "rf_min_leaf",
        "part_confidence", "part_min_leaf", "nb_variance_floor", "cv_folds",    "strict_smote",
        "fixtures_real",   "fixtures_fake", "input",           "labels",        "output",
        "model",           "params",        "image"};
    return keys;
}

namespace detail {

inline std::size_t to_size(std::string_view key, std::string_view v) {
    const auto n = text::parse_int<std::size_t>(text::trim(v));
    if (!n) throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" + std::string(v) + "'");
    return *n;
}

inline double to_real(std::string_view key, std::string_view v) {
    const auto d = text::parse_double(text::trim(v));
    if (!d) throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(v) + "'");
    return *d;
}

inline bool to_bool(std::string_view key, std::string_view v) {
    const auto s = text::lower(text::trim(v));
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(v) + "'");
}

inline FractionalRect to_rect(std::string_view key, std::string_view v) {
    const auto parts = text::split(v, ',');
    if (parts.size() != 4) throw ConfigError(std::string(key) + ": expected top,left,height,width");
    return {to_real(key, parts[0]), to_real(key, parts[1]), to_real(key, parts[2]), to_real(key, parts[3])};
}

}  // namespace detail

/// Applies one key. Unknown keys and malformed values raise ConfigError.
inline void set_config_value(Config& cfg, std::string_view key, std::string_view value) {
    using namespace detail;
    const std::string v(text::trim(value));
    if (key == "roi_strip") cfg.rois.strip = to_rect(key, v);
    else if (key == "roi_bottom") cfg.rois.bottom = to_rect(key, v);
    else if (key == "resize_rows") cfg.resize_rows = to_size(key, v);
    else if (key == "resize_cols") cfg.resize_cols = to_size(key, v);
    else if (key == "wiener_window") cfg.wiener_window = to_size(key, v);
    else if (key == "glcm_levels") cfg.glcm_levels = to_size(key, v);
    else if (key == "glcm_symmetric") cfg.glcm_symmetric = to_bool(key, v);
    else if (key == "smote_levels") {
        cfg.smote_levels.clear();
        for (auto p : text::split(v, ',')) {
            const auto n = text::parse_int<int>(text::trim(p));
            if (!n) throw ConfigError("smote_levels: expected integers, got '" + std::string(p) + "'");
            cfg.smote_levels.push_back(*n);
        }
    } else if (key == "smote_k") cfg.smote_k = to_size(key, v);
    else if (key == "seed") {
        const auto n = text::parse_int<std::uint64_t>(v);
        if (!n) throw ConfigError("seed: expected an unsigned integer, got '" + v + "'");
        cfg.seed = *n;
    } else if (key == "classifier") {
        cfg.classifiers.clear();
        for (auto c : text::split(v, ',')) {
            const std::string name = text::lower(text::trim(c));
            if (name == "all") {
                cfg.classifiers.insert(cfg.classifiers.end(), {"rf", "nb", "part"});
            } else {
                cfg.classifiers.push_back(name);
            }
        }
    } else if (key == "rf_trees") cfg.rf_trees = to_size(key, v);
    else if (key == "rf_features") cfg.rf_features = to_size(key, v);
    else if (key == "rf_bootstrap") cfg.rf_bootstrap = to_bool(key, v);
    else if (key == "rf_min_leaf") cfg.rf_min_leaf = to_size(key, v);
    else if (key == "part_confidence") cfg.part_confidence = to_real(key, v);
    else if (key == "part_min_leaf") cfg.part_min_leaf = to_size(key, v);
    else if (key == "nb_variance_floor") cfg.nb_variance_floor = to_real(key, v);
    else if (key == "cv_folds") cfg.cv_folds = to_size(key, v);
    else if (key == "strict_smote") cfg.strict_smote = to_bool(key, v);
    else if (key == "fixtures_real") cfg.fixtures_real = to_size(key, v);
    else if (key == "fixtures_fake") cfg.fixtures_fake = to_size(key, v);
    else if (key == "input") cfg.input = v;
    else if (key == "labels") cfg.labels = v;
    else if (key == "output") cfg.output = v;
    else if (key == "model") cfg.model = v;
    else if (key == "params") cfg.params = v;
    else if (key == "image") cfg.image = v;
    else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

inline void parse_config(Config& cfg, std::istream& in, const std::string& source = "config") {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto t = text::trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(source + ":" + std::to_string(line_no) + ": expected key = value");
        }
        try {
            set_config_value(cfg, text::trim(t.substr(0, eq)), t.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(source + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

inline Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    Config cfg;
    parse_config(cfg, in, path.string());
    return cfg;
}

/// NOTESCAN_SEED, when set, replaces the configured seed.
inline void apply_environment(Config& cfg) {
    if (const char* env = std::getenv("NOTESCAN_SEED"); env && *env) {
        const auto n = text::parse_int<std::uint64_t>(text::trim(env));
        if (!n) throw ConfigError("NOTESCAN_SEED must be an unsigned integer, got '" + std::string(env) + "'");
        cfg.seed = *n;
    }
}

/// Checks every constraint owned by the pipeline modules.
inline void validate(const Config& cfg) {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (cfg.resize_rows == 0 || cfg.resize_cols == 0) fail("resize_rows and resize_cols must be >= 1");
    if (cfg.wiener_window < 3 || cfg.wiener_window % 2 == 0) fail("wiener_window must be odd and >= 3");
    if (cfg.glcm_levels < 2 || cfg.glcm_levels > 256) fail("glcm_levels must be in [2,256]");
    try {
        validate(cfg.rois, cfg.resize_rows, cfg.resize_cols);
    } catch (const Error& e) {
        fail(std::string("ROI configuration: ") + e.what());
    }
    if (cfg.smote_levels.empty()) fail("smote_levels must list at least one level");
    for (int p : cfg.smote_levels) {
        if (p < 100 || p % 100 != 0) fail("smote_levels: " + std::to_string(p) + " is not a positive multiple of 100");
    }
    if (cfg.smote_k < 1) fail("smote_k must be >= 1");
    if (cfg.classifiers.empty()) fail("classifier must name at least one of nb, rf, part");
    for (const auto& c : cfg.classifiers) {
        if (c != "nb" && c != "rf" && c != "part") fail("unknown classifier '" + c + "' (expected nb, rf, part or all)");
    }
    if (cfg.rf_trees < 1) fail("rf_trees must be >= 1");
    if (cfg.rf_features < 1 || cfg.rf_features > kFeatureCount) fail("rf_features must be in [1,16]");
    if (cfg.rf_min_leaf < 1) fail("rf_min_leaf must be >= 1");
    if (!(cfg.part_confidence > 0 && cfg.part_confidence < 0.5)) fail("part_confidence must be in (0,0.5)");
    if (cfg.part_min_leaf < 1) fail("part_min_leaf must be >= 1");
    if (!(cfg.nb_variance_floor > 0)) fail("nb_variance_floor must be > 0");
    if (cfg.cv_folds < 2) fail("cv_folds must be >= 2");
}

inline PreprocessOptions preprocess_options(const Config& cfg) {
    return {cfg.resize_rows, cfg.resize_cols, cfg.wiener_window, cfg.rois};
}

inline GlcmOptions glcm_options(const Config& cfg) { return {cfg.glcm_levels, cfg.glcm_symmetric}; }

inline ClassifierSpec classifier_spec(const Config& cfg, std::string_view name) {
    if (name == "nb") return NbParams{cfg.nb_variance_floor};
    if (name == "rf") return RfParams{cfg.rf_trees, cfg.rf_features, cfg.rf_bootstrap, cfg.rf_min_leaf, cfg.seed};
    if (name == "part") return PartParams{cfg.part_confidence, cfg.part_min_leaf};
    throw ConfigError("unknown classifier '" + std::string(name) + "'");
}

inline ExperimentOptions experiment_options(const Config& cfg) {
    ExperimentOptions opts;
    opts.smote_percents = cfg.smote_levels;
    opts.smote_k = cfg.smote_k;
    opts.seed = cfg.seed;
    opts.classifiers.clear();
    for (const auto& c : cfg.classifiers) opts.classifiers.push_back(classifier_spec(cfg, c));
    opts.folds = cfg.cv_folds;
    opts.strict = cfg.strict_smote;
    return opts;
}

}  // namespace notescan
