#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "notescan/error.hpp"
#include "notescan/learn/forest.hpp"
#include "notescan/learn/naive_bayes.hpp"
#include "notescan/learn/part.hpp"
#include "notescan/learn/tree.hpp"
#include "notescan/text.hpp"

namespace notescan {

using ClassifierSpec = std::variant<NbParams, RfParams, PartParams>;
using Model = std::variant<NbModel, RfModel, PartModel>;

inline std::string_view kind_of(const ClassifierSpec& spec) {
    constexpr std::string_view names[] = {"nb", "rf", "part"};
    return names[spec.index()];
}

inline std::string_view kind_of(const Model& model) {
    constexpr std::string_view names[] = {"nb", "rf", "part"};
    return names[model.index()];
}

/// Default-parameter spec for "nb", "rf" or "part".
inline ClassifierSpec classifier_from_name(std::string_view name) {
    if (name == "nb") return NbParams{};
    if (name == "rf") return RfParams{};
    if (name == "part") return PartParams{};
    throw InvalidArgument("unknown classifier '" + std::string(name) + "' (expected nb, rf or part)");
}

inline Model train(const ClassifierSpec& spec, const Dataset& ds) {
    return std::visit(
        [&](const auto& p) -> Model {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, NbParams>) return train_naive_bayes(ds, p);
            else if constexpr (std::is_same_v<P, RfParams>) return train_random_forest(ds, p);
            else return train_part(ds, p);
        },
        spec);
}

inline Prediction predict(const Model& model, const FeatureVector& x) {
    return std::visit(
        [&](const auto& m) -> Prediction {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, NbModel>) return predict_nb(m, x);
            else if constexpr (std::is_same_v<M, RfModel>) return predict_rf(m, x);
            else return predict_part(m, x);
        },
        model);
}

inline constexpr std::string_view kModelMagic = "notescan-model";
inline constexpr int kModelVersion = 1;

namespace detail {

inline std::string fmt(double v) { return text::format_double(v); }

inline void write_tree(std::ostream& out, const DecisionTree& tree) {
    out << "tree " << tree.nodes.size() << '\n';
    for (const auto& n : tree.nodes) {
        if (n.is_leaf()) {
            out << "L " << fmt(n.distribution[0]) << ' ' << fmt(n.distribution[1]) << '\n';
        } else {
            out << "S " << n.attribute << ' ' << fmt(n.threshold) << ' ' << n.left << ' ' << n.right << ' '
                << fmt(n.distribution[0]) << ' ' << fmt(n.distribution[1]) << '\n';
        }
    }
}

/// Whitespace-token reader over the model body.
class TokenReader {
public:
    explicit TokenReader(std::istream& in) {
        std::ostringstream buf;
        buf << in.rdbuf();
        body_ = buf.str();
        tokens_ = text::split_ws(body_);
    }

    std::string_view next() {
        if (pos_ >= tokens_.size()) throw CorruptFileError("model file is truncated");
        return tokens_[pos_++];
    }

    void expect(std::string_view word) {
        const auto t = next();
        if (t != word) {
            throw CorruptFileError("expected '" + std::string(word) + "' in model file, found '" + std::string(t) + "'");
        }
    }

    double real() {
        const auto t = next();
        const auto v = text::parse_double(t);
        if (!v) throw CorruptFileError("bad number '" + std::string(t) + "' in model file");
        return *v;
    }

    template <typename Int = std::size_t>
    Int integer() {
        const auto t = next();
        const auto v = text::parse_int<Int>(t);
        if (!v) throw CorruptFileError("bad integer '" + std::string(t) + "' in model file");
        return *v;
    }

    Label label() {
        const auto t = next();
        const auto l = parse_label(t);
        if (!l) throw CorruptFileError("bad class label '" + std::string(t) + "' in model file");
        return *l;
    }

    bool done() const { return pos_ >= tokens_.size(); }

private:
    std::string body_;
    std::vector<std::string_view> tokens_;
    std::size_t pos_ = 0;
};

inline DecisionTree read_tree(TokenReader& in) {
    in.expect("tree");
    const auto count = in.integer();
    if (count == 0) throw CorruptFileError("empty tree in model file");
    DecisionTree tree;
    tree.nodes.resize(count);
    for (auto& n : tree.nodes) {
        const auto tag = in.next();
        if (tag == "L") {
            n.distribution = {in.real(), in.real()};
        } else if (tag == "S") {
            n.attribute = in.integer<int>();
            n.threshold = in.real();
            n.left = in.integer<int>();
            n.right = in.integer<int>();
            n.distribution = {in.real(), in.real()};
            const auto limit = static_cast<int>(count);
            if (n.attribute < 0 || n.attribute >= static_cast<int>(kFeatureCount) || n.left <= 0 || n.right <= 0 ||
                n.left >= limit || n.right >= limit) {
                throw CorruptFileError("tree node references are out of range");
            }
        } else {
            throw CorruptFileError("bad tree node tag '" + std::string(tag) + "'");
        }
    }
    return tree;
}

}  // namespace detail

/// Text serialization: a "notescan-model <version>" line, "kind <nb|rf|part>",
/// the kind-specific body, and a closing "end". Numbers use shortest
/// round-trip formatting, so the same model always yields the same bytes.
inline void save_model(const Model& model, std::ostream& out) {
    using detail::fmt;
    out << kModelMagic << ' ' << kModelVersion << '\n' << "kind " << kind_of(model) << '\n';
    if (const auto* nb = std::get_if<NbModel>(&model)) {
        out << "priors " << fmt(nb->priors[0]) << ' ' << fmt(nb->priors[1]) << '\n';
        for (std::size_t c = 0; c < kClassCount; ++c) {
            out << "class " << to_string(label_at(c)) << '\n';
            for (std::size_t a = 0; a < kFeatureCount; ++a) {
                out << "gauss " << a << ' ' << fmt(nb->likelihood[c][a].mean) << ' '
                    << fmt(nb->likelihood[c][a].variance) << '\n';
            }
        }
    } else if (const auto* rf = std::get_if<RfModel>(&model)) {
        const auto& p = rf->params;
        out << "params " << p.n_trees << ' ' << p.features_per_split << ' ' << (p.bootstrap ? 1 : 0) << ' '
            << p.min_leaf << ' ' << p.seed << '\n';
        out << "trees " << rf->trees.size() << '\n';
        for (const auto& t : rf->trees) detail::write_tree(out, t);
    } else {
        const auto& part = std::get<PartModel>(model);
        out << "rules " << part.rules.size() << '\n';
        for (const auto& r : part.rules) {
            out << "rule " << to_string(r.predicted) << ' ' << r.coverage << ' ' << fmt(r.accuracy) << ' '
                << r.conjuncts.size();
            for (const auto& c : r.conjuncts) {
                out << ' ' << c.attribute << ' ' << (c.op == Comparison::less_equal ? "<=" : ">") << ' '
                    << fmt(c.threshold);
            }
            out << '\n';
        }
    }
    out << "end\n";
}

inline std::string serialize_model(const Model& model) {
    std::ostringstream out;
    save_model(model, out);
    return out.str();
}

inline Model load_model(std::istream& in) {
    detail::TokenReader tok(in);
    const auto magic = tok.next();
    if (magic != kModelMagic) throw CorruptFileError("not a notescan model file");
    const auto version = tok.next();
    if (version != std::to_string(kModelVersion)) {
        throw VersionError("unsupported model version '" + std::string(version) + "'");
    }
    tok.expect("kind");
    const auto kind = tok.next();
    Model model;
    if (kind == "nb") {
        NbModel nb;
        tok.expect("priors");
        nb.priors = {tok.real(), tok.real()};
        for (std::size_t c = 0; c < kClassCount; ++c) {
            tok.expect("class");
            if (tok.label() != label_at(c)) throw CorruptFileError("naive Bayes classes out of order");
            for (std::size_t a = 0; a < kFeatureCount; ++a) {
                tok.expect("gauss");
                if (tok.integer() != a) throw CorruptFileError("naive Bayes attributes out of order");
                nb.likelihood[c][a] = {tok.real(), tok.real()};
                if (!(nb.likelihood[c][a].variance > 0)) throw CorruptFileError("non-positive variance");
            }
        }
        model = nb;
    } else if (kind == "rf") {
        RfModel rf;
        tok.expect("params");
        rf.params.n_trees = tok.integer();
        rf.params.features_per_split = tok.integer();
        rf.params.bootstrap = tok.integer<int>() != 0;
        rf.params.min_leaf = tok.integer();
        rf.params.seed = tok.integer<std::uint64_t>();
        tok.expect("trees");
        const auto n = tok.integer();
        if (n == 0 || n != rf.params.n_trees) throw CorruptFileError("forest tree count mismatch");
        for (std::size_t t = 0; t < n; ++t) rf.trees.push_back(detail::read_tree(tok));
        model = std::move(rf);
    } else if (kind == "part") {
        PartModel part;
        tok.expect("rules");
        const auto n = tok.integer();
        if (n == 0) throw CorruptFileError("PART model without rules");
        for (std::size_t i = 0; i < n; ++i) {
            tok.expect("rule");
            Rule r;
            r.predicted = tok.label();
            r.coverage = tok.integer();
            r.accuracy = tok.real();
            const auto m = tok.integer();
            for (std::size_t j = 0; j < m; ++j) {
                Condition c;
                c.attribute = tok.integer();
                if (c.attribute >= kFeatureCount) throw CorruptFileError("rule attribute out of range");
                const auto op = tok.next();
                if (op == "<=") c.op = Comparison::less_equal;
                else if (op == ">") c.op = Comparison::greater;
                else throw CorruptFileError("bad rule operator '" + std::string(op) + "'");
                c.threshold = tok.real();
                r.conjuncts.push_back(c);
            }
            part.rules.push_back(std::move(r));
        }
        if (!part.rules.back().conjuncts.empty()) throw CorruptFileError("PART model lacks a default rule");
        model = std::move(part);
    } else {
        throw CorruptFileError("unknown model kind '" + std::string(kind) + "'");
    }
    tok.expect("end");
    if (!tok.done()) throw CorruptFileError("trailing data after model end");
    return model;
}

inline void save_model(const Model& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    save_model(model, out);
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

inline Model load_model(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) throw FileNotFoundError("model file not found: " + path.string());
    std::ifstream in(path, std::ios::binary);
    return load_model(in);
}

}  // namespace notescan
