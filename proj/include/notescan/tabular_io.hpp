#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "notescan/dataset.hpp"
#include "notescan/error.hpp"
#include "notescan/text.hpp"

namespace notescan {

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) throw FileNotFoundError("file not found: " + path.string());
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

inline void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

/// Next line without its terminator (LF or CRLF).
inline bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

inline double parse_feature(std::string_view field, std::size_t line, std::string_view attr) {
    field = text::trim(field);
    if (field == "?") throw ParseError(line, "missing value for " + std::string(attr) + " is not supported");
    const auto v = text::parse_double(field);
    if (!v) throw ParseError(line, "non-numeric value '" + std::string(field) + "' for " + std::string(attr));
    return *v;
}

inline std::string csv_header() {
    std::string h;
    for (auto name : kFeatureNames) {
        h += name;
        h += ',';
    }
    h += kClassAttribute;
    return h;
}

inline void write_row(std::ostream& out, const FeatureRecord& rec) {
    for (double v : rec.features) out << text::format_double(v) << ',';
    out << to_string(rec.label) << '\n';
}

}  // namespace detail

/// CSV layout: header of the 17 attribute names, then one record per line;
/// ',' separator, '.' decimal point, LF line endings, shortest round-trip
/// number formatting.
inline void write_csv(const Dataset& ds, std::ostream& out) {
    out << detail::csv_header() << '\n';
    for (const auto& rec : ds.records) detail::write_row(out, rec);
}

inline void write_csv(const Dataset& ds, const std::filesystem::path& path) {
    auto out = detail::open_out(path);
    write_csv(ds, out);
    detail::finish(out, path);
}

inline Dataset read_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!detail::next_line(in, line)) throw ParseError(1, "empty CSV file");
    ++line_no;
    if (text::trim(line) != detail::csv_header()) {
        throw ParseError(line_no, "unexpected CSV header; expected " + detail::csv_header());
    }
    Dataset ds;
    while (detail::next_line(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const auto fields = text::split(line, ',');
        if (fields.size() != kFeatureCount + 1) {
            throw ParseError(line_no, "expected " + std::to_string(kFeatureCount + 1) + " fields, got " +
                                          std::to_string(fields.size()));
        }
        FeatureRecord rec;
        for (std::size_t a = 0; a < kFeatureCount; ++a) {
            rec.features[a] = detail::parse_feature(fields[a], line_no, kFeatureNames[a]);
        }
        const auto label_text = text::trim(fields[kFeatureCount]);
        const auto label = parse_label(label_text);
        if (!label) throw UnknownLabelError(line_no, "unknown label '" + std::string(label_text) + "'");
        rec.label = *label;
        ds.records.push_back(rec);
    }
    if (ds.empty()) throw ParseError(line_no, "CSV file has no data rows");
    return ds;
}

inline Dataset read_csv(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    try {
        return read_csv(in);
    } catch (const UnknownLabelError& e) {
        throw UnknownLabelError(path.string(), e);
    } catch (const ParseError& e) {
        throw ParseError(path.string(), e);
    }
}

inline void write_arff(const Dataset& ds, std::ostream& out) {
    out << "% counterfeit banknote texture features\n";
    out << "@relation " << kRelationName << "\n\n";
    for (auto name : kFeatureNames) out << "@attribute " << name << " numeric\n";
    out << "@attribute " << kClassAttribute << " {yes,no}\n\n@data\n";
    for (const auto& rec : ds.records) detail::write_row(out, rec);
}

inline void write_arff(const Dataset& ds, const std::filesystem::path& path) {
    auto out = detail::open_out(path);
    write_arff(ds, out);
    detail::finish(out, path);
}

namespace detail {

/// Splits "name type..." where name may be quoted and contain blanks.
inline std::pair<std::string_view, std::string_view> split_attribute(std::string_view rest, std::size_t line) {
    rest = text::trim(rest);
    if (rest.empty()) throw ParseError(line, "@attribute without a name");
    std::size_t end = 0;
    if (rest.front() == '\'' || rest.front() == '"') {
        end = rest.find(rest.front(), 1);
        if (end == std::string_view::npos) throw ParseError(line, "unterminated quoted attribute name");
        return {rest.substr(1, end - 1), text::trim(rest.substr(end + 1))};
    }
    while (end < rest.size() && !std::isspace(static_cast<unsigned char>(rest[end])) && rest[end] != '{') ++end;
    return {rest.substr(0, end), text::trim(rest.substr(end))};
}

struct ArffAttribute {
    std::string name;
    AttributeKind kind;
    std::vector<std::string> values;
};

}  // namespace detail

/// ARFF reader for the banknote schema: 16 numeric attributes followed by a
/// nominal class declaring exactly {yes,no} in any order. Accepts % comments,
/// blank lines, case-insensitive keywords and quoted or bare tokens.
inline Dataset read_arff(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<detail::ArffAttribute> attrs;
    bool in_data = false;
    Dataset ds;
    std::size_t data_line = 0;
    while (detail::next_line(in, line)) {
        ++line_no;
        const auto t = text::trim(line);
        if (t.empty() || t.front() == '%') continue;
        if (!in_data) {
            if (t.front() != '@') throw ParseError(line_no, "expected a header declaration");
            const auto space = t.find_first_of(" \t");
            const std::string keyword = text::lower(t.substr(0, space));
            const std::string_view rest = space == std::string_view::npos ? std::string_view{} : t.substr(space);
            if (keyword == "@relation") continue;
            if (keyword == "@attribute") {
                auto [name, type] = detail::split_attribute(rest, line_no);
                detail::ArffAttribute attr{std::string(name), AttributeKind::numeric, {}};
                const std::string type_lc = text::lower(type);
                if (!type.empty() && type.front() == '{') {
                    if (type.back() != '}') throw ParseError(line_no, "unterminated nominal declaration");
                    attr.kind = AttributeKind::nominal;
                    for (auto v : text::split(type.substr(1, type.size() - 2), ',')) {
                        attr.values.emplace_back(text::unquote(text::trim(v)));
                    }
                } else if (type_lc != "numeric" && type_lc != "real" && type_lc != "integer") {
                    throw ParseError(line_no, "unsupported attribute type '" + std::string(type) + "'");
                }
                attrs.push_back(std::move(attr));
                continue;
            }
            if (keyword == "@data") {
                if (attrs.size() != kFeatureCount + 1) {
                    throw ParseError(line_no, "expected " + std::to_string(kFeatureCount + 1) +
                                                  " attributes, found " + std::to_string(attrs.size()));
                }
                for (std::size_t a = 0; a < kFeatureCount; ++a) {
                    if (attrs[a].kind != AttributeKind::numeric) {
                        throw ParseError(line_no, "attribute '" + attrs[a].name + "' must be numeric");
                    }
                }
                auto cls = attrs.back().values;
                std::sort(cls.begin(), cls.end());
                if (attrs.back().kind != AttributeKind::nominal || cls != std::vector<std::string>{"no", "yes"}) {
                    throw ParseError(line_no, "class attribute must be nominal {yes,no}");
                }
                in_data = true;
                data_line = line_no;
                continue;
            }
            throw ParseError(line_no, "unknown declaration '" + keyword + "'");
        }
        if (t.front() == '{') throw ParseError(line_no, "sparse ARFF rows are not supported");
        const auto fields = text::split(t, ',');
        if (fields.size() != attrs.size()) {
            throw ParseError(line_no, "row has " + std::to_string(fields.size()) + " values but " +
                                          std::to_string(attrs.size()) + " attributes are declared");
        }
        FeatureRecord rec;
        for (std::size_t a = 0; a < kFeatureCount; ++a) {
            rec.features[a] = detail::parse_feature(fields[a], line_no, attrs[a].name);
        }
        const auto value = text::unquote(text::trim(fields.back()));
        if (value == "?") throw ParseError(line_no, "missing class value is not supported");
        const auto label = parse_label(value);
        if (!label) throw UnknownLabelError(line_no, "undeclared nominal value '" + std::string(value) + "'");
        rec.label = *label;
        ds.records.push_back(rec);
    }
    if (!in_data) throw ParseError(line_no, "missing @data section");
    if (ds.empty()) throw ParseError(data_line, "@data section has no rows");
    return ds;
}

inline Dataset read_arff(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    try {
        return read_arff(in);
    } catch (const UnknownLabelError& e) {
        throw UnknownLabelError(path.string(), e);
    } catch (const ParseError& e) {
        throw ParseError(path.string(), e);
    }
}

/// Reads .arff files as ARFF and anything else as CSV.
inline Dataset read_dataset(const std::filesystem::path& path) {
    return text::lower(path.extension().string()) == ".arff" ? read_arff(path) : read_csv(path);
}

inline void write_dataset(const Dataset& ds, const std::filesystem::path& path) {
    if (text::lower(path.extension().string()) == ".arff") {
        write_arff(ds, path);
    } else {
        write_csv(ds, path);
    }
}

inline constexpr std::string_view kParamsMagic = "notescan-normalization";
inline constexpr int kParamsVersion = 1;

inline void write_params(const NormalizationParams& p, std::ostream& out) {
    out << kParamsMagic << ' ' << kParamsVersion << '\n';
    for (std::size_t a = 0; a < kFeatureCount; ++a) {
        out << kFeatureNames[a] << ' ' << text::format_double(p.ranges[a].min) << ' '
            << text::format_double(p.ranges[a].max) << '\n';
    }
    out << "end\n";
}

inline void write_params(const NormalizationParams& p, const std::filesystem::path& path) {
    auto out = detail::open_out(path);
    write_params(p, out);
    detail::finish(out, path);
}

inline NormalizationParams read_params(std::istream& in) {
    std::string line;
    if (!detail::next_line(in, line)) throw CorruptFileError("empty normalization file");
    const auto head = text::split_ws(line);
    if (head.size() != 2 || head[0] != kParamsMagic) throw CorruptFileError("not a normalization file");
    if (head[1] != std::to_string(kParamsVersion)) {
        throw VersionError("unsupported normalization file version " + std::string(head[1]));
    }
    NormalizationParams p;
    for (std::size_t a = 0; a < kFeatureCount; ++a) {
        if (!detail::next_line(in, line)) throw CorruptFileError("normalization file is truncated");
        const auto f = text::split_ws(line);
        if (f.size() != 3 || f[0] != kFeatureNames[a]) {
            throw CorruptFileError("bad normalization entry for " + std::string(kFeatureNames[a]));
        }
        const auto lo = text::parse_double(f[1]);
        const auto hi = text::parse_double(f[2]);
        if (!lo || !hi || *lo > *hi) throw CorruptFileError("bad range for " + std::string(kFeatureNames[a]));
        p.ranges[a] = {*lo, *hi};
    }
    if (!detail::next_line(in, line) || text::trim(line) != "end") {
        throw CorruptFileError("normalization file is truncated");
    }
    return p;
}

inline NormalizationParams read_params(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    return read_params(in);
}

}  // namespace notescan
