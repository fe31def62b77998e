#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pqmt/dataio.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <string>

using namespace pqmt;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("pqmt_dataio_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

Dataset tiny_dataset() {
    Dataset data;
    for (int i = 0; i < 6; ++i) {
        std::vector<float> image(28 * 28, 0.0f);
        image[i] = 1.0f;
        image[100 + i] = 0.5f;
        data.images.push_back(image);
        data.labels.push_back(i % 3);
    }
    return data;
}

}  // namespace

TEST_CASE("idx round trip") {
    TempDir dir;
    Dataset data = tiny_dataset();
    write_idx(dir.file("img.idx"), dir.file("lbl.idx"), data);
    Dataset loaded = load_idx(dir.file("img.idx"), dir.file("lbl.idx"));
    REQUIRE(loaded.size() == data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(loaded.labels[i] == data.labels[i]);
        // Byte quantization allows up to half a grayscale step of error.
        for (int k = 0; k < 28 * 28; ++k)
            CHECK(std::abs(loaded.images[i][k] - data.images[i][k]) <= 0.501f / 255.0f);
    }
    // Byte 255 normalizes to exactly 1.0.
    Dataset full;
    full.images.push_back(std::vector<float>(28 * 28, 1.0f));
    full.labels.push_back(0);
    write_idx(dir.file("f.idx"), dir.file("fl.idx"), full);
    CHECK(load_idx(dir.file("f.idx"), dir.file("fl.idx")).images[0][0] == 1.0f);
}

TEST_CASE("idx errors are distinct") {
    TempDir dir;
    Dataset data = tiny_dataset();
    write_idx(dir.file("img.idx"), dir.file("lbl.idx"), data);

    SUBCASE("bad magic") {
        std::ofstream bad(dir.file("bad.idx"), std::ios::binary);
        bad.write("\x00\x00\x00\x07", 4);
        bad.close();
        CHECK_THROWS_WITH_AS((void)load_idx(dir.file("bad.idx"), dir.file("lbl.idx")),
                             doctest::Contains("magic"), std::runtime_error);
    }
    SUBCASE("truncated images") {
        std::ifstream in(dir.file("img.idx"), std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)), {});
        std::ofstream out(dir.file("trunc.idx"), std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
        out.close();
        CHECK_THROWS_WITH_AS((void)load_idx(dir.file("trunc.idx"), dir.file("lbl.idx")),
                             doctest::Contains("truncated"), std::runtime_error);
    }
    SUBCASE("count mismatch") {
        Dataset fewer = tiny_dataset();
        fewer.images.pop_back();
        fewer.labels.pop_back();
        write_idx(dir.file("img5.idx"), dir.file("lbl5.idx"), fewer);
        CHECK_THROWS_WITH_AS((void)load_idx(dir.file("img.idx"), dir.file("lbl5.idx")),
                             doctest::Contains("mismatch"), std::runtime_error);
    }
    SUBCASE("missing file") {
        CHECK_THROWS((void)load_idx(dir.file("nope.idx"), dir.file("lbl.idx")));
    }
}

TEST_CASE("class subsetting") {
    Dataset data = tiny_dataset();  // labels 0,1,2,0,1,2

    Dataset two = subset_classes(data, {2, 0});
    REQUIRE(two.size() == 4);
    CHECK(two.labels == std::vector<int>{1, 0, 1, 0});  // relabeled in list order

    Dataset single = subset_classes(data, {1});
    for (int label : single.labels) CHECK(label == 0);

    CHECK_THROWS((void)subset_classes(data, {}));
    CHECK_THROWS((void)subset_classes(data, {0, 0}));
    CHECK_THROWS((void)subset_classes(data, {7}));
}

TEST_CASE("synthetic dataset") {
    Dataset a = make_synthetic(3, 5, 11);
    REQUIRE(a.size() == 15);
    for (const auto& image : a.images) {
        REQUIRE(image.size() == 28u * 28u);
        for (float v : image) {
            CHECK(v >= 0.0f);
            CHECK(v <= 1.0f);
        }
    }
    Dataset b = make_synthetic(3, 5, 11);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a.images[i] == b.images[i]);
    Dataset c = make_synthetic(3, 5, 12);
    CHECK(a.images[0] != c.images[0]);
}

TEST_CASE("float formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456.789, 0.0, -2.5e17}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("csv writing") {
    TempDir dir;
    write_csv(dir.file("out.csv"), {"a", "b"}, {{"1", "2"}, {"3.5", "x"}});
    std::ifstream in(dir.file("out.csv"));
    std::string content((std::istreambuf_iterator<char>(in)), {});
    CHECK(content == "a,b\n1,2\n3.5,x\n");

    CHECK_THROWS((void)write_csv(dir.file("bad.csv"), {"a", "b"}, {{"1"}}));
}

TEST_CASE("json writing") {
    TempDir dir;
    nlohmann::json value = {{"k", 1.5}, {"list", {1, 2}}};
    write_json(dir.file("out.json"), value);
    std::ifstream in(dir.file("out.json"));
    nlohmann::json parsed = nlohmann::json::parse(in);
    CHECK(parsed == value);
}
