#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "cytoclass/dataset.hpp"
#include "helpers.hpp"

using namespace cyto;

TEST_CASE("load_wdbc parses the full UCI file") {
    const Dataset& ds = testutil::wdbc();
    CHECK(ds.size() == 569);
    CHECK(ds.width() == 10);
    CHECK(ds.schema() == wdbc_mean_feature_names());
}

TEST_CASE("load_wdbc keeps fields 3-12 verbatim") {
    std::vector<double> f1 = {17.99, 10.38, 122.8, 1001.0, 0.1184,
                              0.2776, 0.3001, 0.1471, 0.2419, 0.07871};
    std::vector<double> f2 = {13.54, 14.36, 87.46, 566.3, 0.09779,
                              0.08129, 0.06664, 0.04781, 0.1885, 0.05766};
    std::stringstream in;
    in << testutil::wdbc_line("1", "M", f1) << "\n" << testutil::wdbc_line("2", "B", f2) << "\n";
    Dataset ds = load_wdbc(in);
    REQUIRE(ds.size() == 2);
    CHECK(ds.samples()[0].diagnosis == Diagnosis::A);
    CHECK(ds.samples()[1].diagnosis == Diagnosis::N);
    for (std::size_t j = 0; j < 10; ++j) {
        CHECK(ds.samples()[0].features[j] == doctest::Approx(f1[j]).epsilon(1e-12));
        CHECK(ds.samples()[1].features[j] == doctest::Approx(f2[j]).epsilon(1e-12));
    }
}

TEST_CASE("load_wdbc error paths report the record number") {
    auto expect_error = [](const std::string& content, const std::string& fragment) {
        std::stringstream in(content);
        try {
            load_wdbc(in);
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find(fragment) != std::string::npos);
        }
    };
    std::vector<double> f(10, 1.0);
    expect_error("", "empty source");
    expect_error("1,M,1,2,3\n", "record 1");
    expect_error(testutil::wdbc_line("1", "X", f), "unknown diagnosis code");
    expect_error(testutil::wdbc_line("1", "M", f) + "\n" + testutil::wdbc_line("1", "B", f),
                 "duplicate sample id");
    std::string bad = testutil::wdbc_line("1", "M", f);
    bad.replace(bad.find("1.000000"), 8, "abcdefgh");  // keeps the field count
    expect_error(bad, "unparsable real");
}

TEST_CASE("load_wdbc accepts CRLF line endings") {
    std::vector<double> f(10, 1.0);
    std::stringstream in(testutil::wdbc_line("1", "M", f) + "\r\n");
    CHECK(load_wdbc(in).size() == 1);
}

TEST_CASE("train_test_split produces the default 448/121 partition") {
    DataSplit split = train_test_split(testutil::wdbc(), 448, 7);
    CHECK(split.train.size() == 448);
    CHECK(split.test.size() == 121);
    CHECK(split.method == "stratified");
}

TEST_CASE("train_test_split partition and determinism") {
    const Dataset& ds = testutil::wdbc();
    for (long long seed : {0LL, 1LL, 42LL, -5LL}) {
        DataSplit a = train_test_split(ds, 448, seed);
        DataSplit b = train_test_split(ds, 448, seed);
        std::set<std::string> train_ids, test_ids;
        for (const Sample& s : a.train.samples()) train_ids.insert(s.id);
        for (const Sample& s : a.test.samples()) test_ids.insert(s.id);
        CHECK(train_ids.size() + test_ids.size() == ds.size());
        for (const auto& id : train_ids) CHECK(test_ids.count(id) == 0);

        std::set<std::string> train_b;
        for (const Sample& s : b.train.samples()) train_b.insert(s.id);
        CHECK(train_ids == train_b);  // identical membership, identical seed
    }
}

TEST_CASE("train_test_split stratification keeps class shares") {
    DataSplit split = train_test_split(testutil::wdbc(), 448, 3);
    std::size_t train_a = 0;
    for (const Sample& s : split.train.samples())
        if (s.diagnosis == Diagnosis::A) ++train_a;
    // 212/569 malignant -> about 167 of 448.
    const double expected = 448.0 * 212.0 / 569.0;
    CHECK(std::abs(static_cast<double>(train_a) - expected) <= 1.0);
}

TEST_CASE("train_test_split rejects out-of-range counts") {
    const Dataset& ds = testutil::wdbc();
    CHECK_THROWS_AS(train_test_split(ds, 0, 1), DataError);
    CHECK_THROWS_AS(train_test_split(ds, ds.size(), 1), DataError);
    CHECK_THROWS_AS(train_test_split(ds, ds.size() + 5, 1), DataError);
}

TEST_CASE("train_test_split rejects a single-class dataset") {
    std::vector<Sample> samples;
    for (int i = 0; i < 10; ++i)
        samples.push_back({"s" + std::to_string(i), Diagnosis::N, {double(i)}});
    Dataset ds({"x"}, samples);
    CHECK_THROWS_AS(train_test_split(ds, 5, 0), DataError);
}

TEST_CASE("select_features identity projection") {
    const Dataset& ds = testutil::wdbc();
    CHECK(select_features(ds, ds.schema()) == ds);
}

TEST_CASE("select_features projects the retained WDBC subset") {
    std::vector<std::string> keep = {"radius",      "texture",  "smoothness",
                                     "compactness", "symmetry", "fdimension"};
    Dataset sel = select_features(testutil::wdbc(), keep);
    CHECK(sel.width() == 6);
    CHECK(sel.schema() == keep);
    CHECK(sel.size() == testutil::wdbc().size());
    // Order and ids preserved, values aligned to source columns.
    CHECK(sel.samples()[0].id == testutil::wdbc().samples()[0].id);
    CHECK(sel.column("texture") == testutil::wdbc().column("texture"));
}

TEST_CASE("select_features rejects bad name lists") {
    const Dataset& ds = testutil::wdbc();
    CHECK_THROWS_AS(select_features(ds, {"bogus"}), DataError);
    CHECK_THROWS_AS(select_features(ds, {"radius", "radius"}), DataError);
    CHECK_THROWS_AS(select_features(ds, {}), DataError);
}

TEST_CASE("dataset invariants rejected at construction") {
    CHECK_THROWS_AS(Dataset({"x"}, {}), DataError);
    CHECK_THROWS_AS(Dataset({}, {Sample{"a", Diagnosis::N, {}}}), DataError);
    CHECK_THROWS_AS(Dataset({"x"}, {Sample{"a", Diagnosis::N, {1.0, 2.0}}}), DataError);
    CHECK_THROWS_AS(
        Dataset({"x"}, {Sample{"a", Diagnosis::N, {std::numeric_limits<double>::infinity()}}}),
        DataError);
}

TEST_CASE("split membership is a pure function of inputs across train counts") {
    std::mt19937_64 rng(99);
    Dataset ds = testutil::random_dataset(rng, 60, 3);
    for (std::size_t count : {1ul, 10ul, 30ul, 59ul}) {
        DataSplit a = train_test_split(ds, count, 11);
        DataSplit b = train_test_split(ds, count, 11);
        CHECK(a.train == b.train);
        CHECK(a.test == b.test);
        CHECK(a.train.size() == count);
    }
}
