#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "notescan/dataset.hpp"
#include "notescan/error.hpp"
#include "notescan/learn/common.hpp"

namespace notescan {

struct GaussianParams {
    double mean = 0;
    double variance = 1;

    friend bool operator==(const GaussianParams&, const GaussianParams&) = default;
};

struct NbParams {
    double variance_floor = 1e-9;
};

struct NbModel {
    ClassDistribution priors{};
    std::array<std::array<GaussianParams, kFeatureCount>, kClassCount> likelihood{};

    friend bool operator==(const NbModel&, const NbModel&) = default;
};

/// Gaussian naive Bayes with unbiased per-class variances floored at
/// params.variance_floor.
inline NbModel train_naive_bayes(const Dataset& ds, const NbParams& params = {}) {
    const auto counts = ds.class_counts();
    for (std::size_t c = 0; c < kClassCount; ++c) {
        if (counts[c] == 0) {
            throw SingleClassError("naive Bayes needs records of both classes; '" +
                                   std::string(to_string(label_at(c))) + "' is absent");
        }
    }
    NbModel m;
    std::array<FeatureVector, kClassCount> sum{};
    for (const auto& rec : ds.records) {
        auto& s = sum[index_of(rec.label)];
        for (std::size_t a = 0; a < kFeatureCount; ++a) s[a] += rec.features[a];
    }
    for (std::size_t c = 0; c < kClassCount; ++c) {
        m.priors[c] = static_cast<double>(counts[c]) / static_cast<double>(ds.size());
        for (std::size_t a = 0; a < kFeatureCount; ++a) {
            m.likelihood[c][a].mean = sum[c][a] / static_cast<double>(counts[c]);
        }
    }
    std::array<FeatureVector, kClassCount> ss{};
    for (const auto& rec : ds.records) {
        const std::size_t c = index_of(rec.label);
        for (std::size_t a = 0; a < kFeatureCount; ++a) {
            const double d = rec.features[a] - m.likelihood[c][a].mean;
            ss[c][a] += d * d;
        }
    }
    for (std::size_t c = 0; c < kClassCount; ++c) {
        for (std::size_t a = 0; a < kFeatureCount; ++a) {
            const double var = counts[c] > 1 ? ss[c][a] / static_cast<double>(counts[c] - 1) : 0.0;
            m.likelihood[c][a].variance = std::max(var, params.variance_floor);
        }
    }
    return m;
}

/// log prior + sum of log Gaussian densities, per class.
inline ClassDistribution nb_log_scores(const NbModel& m, const FeatureVector& x) {
    ClassDistribution score{};
    for (std::size_t c = 0; c < kClassCount; ++c) {
        double s = std::log(m.priors[c]);
        for (std::size_t a = 0; a < kFeatureCount; ++a) {
            const auto& g = m.likelihood[c][a];
            const double d = x[a] - g.mean;
            s += -0.5 * std::log(2.0 * std::numbers::pi * g.variance) - d * d / (2.0 * g.variance);
        }
        score[c] = s;
    }
    return score;
}

/// Posterior from log scores by max-subtracted exponentiation.
inline ClassDistribution softmax(const ClassDistribution& logs) {
    const double top = logs[argmax(logs)];
    ClassDistribution p{};
    double z = 0;
    for (std::size_t c = 0; c < kClassCount; ++c) {
        p[c] = std::exp(logs[c] - top);
        z += p[c];
    }
    for (auto& v : p) v /= z;
    return p;
}

inline Prediction predict_nb(const NbModel& m, const FeatureVector& x) {
    const auto logs = nb_log_scores(m, x);
    const auto post = softmax(logs);
    const std::size_t best = argmax(logs);
    return {label_at(best), post[best], std::nullopt};
}

}  // namespace notescan
