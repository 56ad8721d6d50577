// notescan: counterfeit banknote detection pipeline.
//
//   notescan fixtures --output DIR
//   notescan extract  --input DIR --labels FILE --output STEM
//   notescan resample --input DATASET --output DIR [--smote_levels 100,200,300]
//   notescan train    --input DATASET --classifier rf --model FILE [--params FILE]
//   notescan eval     --input DATASET [--classifier all] [--output REPORT.tsv]
//   notescan predict  --model FILE --image SCAN [--params FILE]
//
// Every config-file key is also accepted as --key. Precedence: built-in
// defaults < --config file < NOTESCAN_SEED < command-line flags.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "notescan/notescan.hpp"

int main(int argc, char** argv) {
    using namespace notescan;

    CLI::App app{"Counterfeit banknote detection from texture features"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "Flat key = value configuration file");

    std::map<std::string, std::string> overrides;
    std::map<std::string, CLI::Option*> flags;
    for (auto key : config_keys()) {
        const std::string k(key);
        flags[k] = app.add_option("--" + k, overrides[k], "Overrides config key " + k);
    }

    struct Verb {
        const char* name;
        const char* help;
    };
    const Verb verbs[] = {
        {"fixtures", "Generate a synthetic scan corpus and label manifest"},
        {"extract", "Preprocess scans and write the feature dataset (CSV + ARFF)"},
        {"resample", "Normalize a dataset and write one SMOTE output per level"},
        {"train", "Train a classifier and write the model and normalization files"},
        {"eval", "Stratified cross-validation per SMOTE level and classifier"},
        {"predict", "Classify one scan; exit code 0 = real, 1 = fake, 2 = error"},
    };
    for (const auto& v : verbs) app.add_subcommand(v.name, v.help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    const std::string verb = app.get_subcommands().front()->get_name();
    try {
        Config cfg = config_path.empty() ? Config{} : load_config(config_path);
        apply_environment(cfg);
        for (auto key : config_keys()) {
            const std::string k(key);
            if (flags[k]->count() > 0) set_config_value(cfg, k, overrides[k]);
        }
        if (verb == "fixtures") return cmd_fixtures(cfg, std::cout);
        if (verb == "extract") return cmd_extract(cfg, std::cout, std::cerr);
        if (verb == "resample") return cmd_resample(cfg, std::cout);
        if (verb == "train") return cmd_train(cfg, std::cout);
        if (verb == "eval") return cmd_eval(cfg, std::cout);
        if (verb == "predict") return cmd_predict(cfg, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
