#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "notescan/notescan.hpp"

using namespace notescan;
using testing_helpers::record;

namespace {

const std::filesystem::path kGolden = NOTESCAN_GOLDEN_DIR;

Dataset golden_rows() {
    Dataset ds;
    ds.records.push_back({{0.125, 0.5, 1, 0, 0.75, 0.25, 0.375, 0.0625, 1, 0, 0.5, 0.5, 0.2, 0.8, 0.1, 0.9}, Label::yes});
    ds.records.push_back({{0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1}, Label::no});
    FeatureRecord flat;
    for (std::size_t a = 0; a < kFeatureCount; ++a) flat.features[a] = a < 8 ? 0.3 : 0.7;
    ds.records.push_back(flat);
    return ds;
}

std::string csv_with_row(const std::string& row) {
    std::ostringstream out;
    write_csv(golden_rows(), out);
    return out.str() + row + "\n";
}

template <class Fn>
std::size_t parse_error_line(Fn fn) {
    try {
        fn();
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST(BuildDataset, PaperSizedCorpus) {
    std::vector<FeatureRecord> recs;
    for (int i = 0; i < 70; ++i) recs.push_back(record({double(i)}, i < 20 ? Label::no : Label::yes));
    const auto ds = build_dataset(recs);
    EXPECT_EQ(ds.size(), 70u);
    EXPECT_EQ(ds.count(Label::no), 20u);
    EXPECT_EQ(ds.count(Label::yes), 50u);
    EXPECT_EQ(ds.meta.size(), 17u);
    EXPECT_EQ(ds.meta.back().name, "Class");
    EXPECT_EQ(ds.meta.back().nominal_values, (std::vector<std::string>{"yes", "no"}));
}

TEST(BuildDataset, SingletonAndEmpty) {
    EXPECT_EQ(build_dataset({record({1}, Label::yes)}).size(), 1u);
    EXPECT_THROW(build_dataset({}), EmptyDatasetError);
}

TEST(BuildDataset, NonFiniteFeatureRejected) {
    EXPECT_THROW(build_dataset({record({std::nan("")}, Label::yes)}), InvalidArgument);
}

TEST(Normalize, EndpointsMidpointAndConstantColumn) {
    Dataset ds;
    ds.records = {record({0, 4}, Label::yes), record({5, 4}, Label::no), record({10, 4}, Label::yes)};
    const auto n = min_max_normalize(ds);
    EXPECT_EQ(n.dataset.records[0].features[0], 0.0);
    EXPECT_EQ(n.dataset.records[1].features[0], 0.5);
    EXPECT_EQ(n.dataset.records[2].features[0], 1.0);
    for (const auto& r : n.dataset.records) EXPECT_EQ(r.features[1], 0.0);
    EXPECT_EQ(n.params.ranges[0], (AttributeRange{0, 10}));
    EXPECT_EQ(n.dataset.records[1].label, Label::no);
}

TEST(Normalize, UnseenValuesAreClamped) {
    NormalizationParams p;
    for (auto& r : p.ranges) r = {0, 10};
    FeatureVector v{};
    v[0] = 0;
    v[1] = 10;
    v[2] = 5;
    v[3] = 11;
    v[4] = -3;
    const auto out = apply_normalization(v, p);
    EXPECT_EQ(out[0], 0.0);
    EXPECT_EQ(out[1], 1.0);
    EXPECT_EQ(out[2], 0.5);
    EXPECT_EQ(out[3], 1.0);
    EXPECT_EQ(out[4], 0.0);
}

TEST(Normalize, OutputInUnitIntervalAndOrderPreserved) {
    std::mt19937 gen(12);
    for (int trial = 0; trial < 30; ++trial) {
        const auto ds = testing_helpers::random_dataset(gen, 2 + gen() % 60, 1e3);
        const auto n = min_max_normalize(ds);
        for (std::size_t a = 0; a < kFeatureCount; ++a) {
            for (std::size_t i = 0; i < ds.size(); ++i) {
                const double v = n.dataset.records[i].features[a];
                EXPECT_GE(v, 0.0);
                EXPECT_LE(v, 1.0);
                for (std::size_t j = 0; j < ds.size(); ++j) {
                    if (ds.records[i].features[a] < ds.records[j].features[a]) {
                        EXPECT_LE(v, n.dataset.records[j].features[a]);
                    }
                }
            }
        }
    }
}

TEST(Normalize, ComposedParamsMatchTwoStageScaling) {
    std::mt19937 gen(13);
    const auto raw = testing_helpers::random_dataset(gen, 40, 50);
    const auto first = min_max_normalize(raw);
    Dataset subset;
    subset.records.assign(first.dataset.records.begin() + 5, first.dataset.records.begin() + 25);
    const auto second = min_max_normalize(subset);
    const auto combined = compose(first.params, second.params);
    for (std::size_t i = 5; i < 25; ++i) {
        const auto direct = apply_normalization(raw.records[i].features, combined);
        for (std::size_t a = 0; a < kFeatureCount; ++a) {
            EXPECT_NEAR(direct[a], second.dataset.records[i - 5].features[a], 1e-12);
        }
    }
}

TEST(Csv, GoldenFileMatchesWriterByteForByte) {
    std::ostringstream out;
    write_csv(golden_rows(), out);
    std::ifstream in(kGolden / "three_rows.csv");
    const std::string golden((std::istreambuf_iterator<char>(in)), {});
    EXPECT_EQ(out.str(), golden);
    EXPECT_EQ(read_csv(kGolden / "three_rows.csv"), golden_rows());
}

TEST(Csv, RoundTripRandomDatasets) {
    std::mt19937 gen(14);
    const auto dir = testing_helpers::temp_dir("csv_rt");
    for (int trial = 0; trial < 25; ++trial) {
        auto ds = testing_helpers::random_dataset(gen, 1 + gen() % 80, trial % 2 ? 1e-6 : 1e9);
        ds.records[0].features[3] = -0.0;
        ds.records[0].features[4] = 5e-324;
        write_csv(ds, dir / "d.csv");
        EXPECT_EQ(read_csv(dir / "d.csv"), ds);
    }
}

TEST(Csv, ShortRowReportsLineNumber) {
    std::string row = "1,2,3,4,5,6,7,8,9,10,11,12,13,14,yes";
    std::istringstream in(csv_with_row(row));
    EXPECT_EQ(parse_error_line([&] { read_csv(in); }), 5u);
}

TEST(Csv, UnknownLabelError) {
    std::istringstream in(csv_with_row("1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,maybe"));
    EXPECT_THROW(read_csv(in), UnknownLabelError);
}

TEST(Csv, MissingAndNonNumericValuesRejected) {
    std::istringstream missing(csv_with_row("1,2,3,?,5,6,7,8,9,10,11,12,13,14,15,16,no"));
    EXPECT_EQ(parse_error_line([&] { read_csv(missing); }), 5u);
    std::istringstream text(csv_with_row("1,2,3,x,5,6,7,8,9,10,11,12,13,14,15,16,no"));
    EXPECT_THROW(read_csv(text), ParseError);
    std::istringstream inf(csv_with_row("1,2,3,inf,5,6,7,8,9,10,11,12,13,14,15,16,no"));
    EXPECT_THROW(read_csv(inf), ParseError);
}

TEST(Csv, WrongHeaderRejected) {
    std::istringstream in("a,b\n1,yes\n");
    EXPECT_EQ(parse_error_line([&] { read_csv(in); }), 1u);
}

TEST(Csv, MissingFileIsIoError) {
    EXPECT_THROW(read_csv(std::filesystem::path("/nonexistent/x.csv")), FileNotFoundError);
}

TEST(Arff, WriterOutputReadsBack) {
    std::mt19937 gen(15);
    for (int trial = 0; trial < 25; ++trial) {
        const auto ds = testing_helpers::random_dataset(gen, 1 + gen() % 80, 1e4);
        std::stringstream buf;
        write_arff(ds, buf);
        EXPECT_EQ(read_arff(buf), ds);
    }
}

TEST(Arff, HandWrittenFixtureWithCommentsAndOddSpacing) {
    EXPECT_EQ(read_arff(kGolden / "three_rows_commented.arff"), golden_rows());
    EXPECT_EQ(read_dataset(kGolden / "three_rows_commented.arff"), golden_rows());
}

TEST(Arff, MissingDataSectionReportsLine) {
    std::stringstream buf;
    write_arff(golden_rows(), buf);
    std::string text = buf.str();
    text = text.substr(0, text.find("@data"));
    std::istringstream in(text);
    EXPECT_GT(parse_error_line([&] { read_arff(in); }), 0u);
}

TEST(Arff, UndeclaredNominalRejected) {
    std::stringstream buf;
    write_arff(golden_rows(), buf);
    std::istringstream in(buf.str() + "1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,maybe\n");
    EXPECT_THROW(read_arff(in), ParseError);
}

TEST(Arff, RowArityMismatchRejected) {
    std::stringstream buf;
    write_arff(golden_rows(), buf);
    std::istringstream in(buf.str() + "1,2,3,yes\n");
    EXPECT_THROW(read_arff(in), ParseError);
}

TEST(Params, RoundTripExactly) {
    std::mt19937 gen(16);
    const auto p = min_max_normalize(testing_helpers::random_dataset(gen, 30, 1e5)).params;
    std::stringstream buf;
    write_params(p, buf);
    EXPECT_EQ(read_params(buf), p);
}

TEST(Params, BadVersionAndTruncation) {
    std::istringstream future("notescan-normalization 9\n");
    EXPECT_THROW(read_params(future), VersionError);
    std::stringstream buf;
    write_params(NormalizationParams{}, buf);
    const auto text = buf.str();
    std::istringstream cut(text.substr(0, text.size() / 2));
    EXPECT_THROW(read_params(cut), CorruptFileError);
}
