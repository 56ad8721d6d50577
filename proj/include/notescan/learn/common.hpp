#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "notescan/dataset.hpp"

namespace notescan {

using ClassDistribution = std::array<double, kClassCount>;

/// Index of the largest entry; ties keep the earlier class ("yes" first).
inline std::size_t argmax(const ClassDistribution& d) noexcept {
    std::size_t best = 0;
    for (std::size_t c = 1; c < d.size(); ++c) {
        if (d[c] > d[best]) best = c;
    }
    return best;
}

struct Prediction {
    Label label = Label::yes;
    /// Posterior (NB), vote fraction (RF) or rule accuracy (PART).
    double confidence = 0;
    /// Index of the PART rule that fired.
    std::optional<std::size_t> rule;
};

}  // namespace notescan
