#include "ric/image.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

using namespace ric;

namespace {

GrayImage random_image(std::mt19937_64& rng, std::size_t w, std::size_t h)
{
    std::vector<std::uint8_t> px(w * h);
    for (auto& p : px) {
        p = static_cast<std::uint8_t>(rng() % 256);
    }
    return GrayImage(w, h, std::move(px));
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("pgm roundtrip and formats")
{
    std::mt19937_64 rng(1);
    const auto img = random_image(rng, 7, 5);
    CHECK(read_pgm(write_pgm(img)) == img);
    CHECK(read_pgm(write_pgm_ascii(img)) == img);

    const std::string with_comments = "P2\n# a comment\n2 1\n# another\n255\n0 255\n";
    const auto small = read_pgm(with_comments);
    CHECK(small.width == 2);
    CHECK(small.pixels == std::vector<std::uint8_t>{0, 255});

    CHECK_THROWS_WITH_AS(read_pgm("P5\n2 2\n65535\n"), doctest::Contains("unsupported maxval"), std::runtime_error);
    CHECK_THROWS_AS(read_pgm("P5\n2 2\n255\nabc"), std::runtime_error);
    CHECK_THROWS_AS(read_pgm("P6\n1 1\n255\nabc"), std::runtime_error);
    CHECK_THROWS_AS(read_pgm("P2\n2 1\n255\n0 300\n"), std::runtime_error);
    CHECK_THROWS_AS(GrayImage(2, 2, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("gray_histogram")
{
    const GrayImage img(2, 2, {0, 0, 255, 7});
    const auto hist = gray_histogram(img);
    REQUIRE(hist.grid.cells() == 256);
    CHECK(hist.n == 4);
    CHECK(hist.counts[0] == 2);
    CHECK(hist.counts[7] == 1);
    CHECK(hist.counts[255] == 1);
    CHECK(hist.grid.boundary(256) == 256.0);
}

TEST_CASE("quantization levels")
{
    std::mt19937_64 rng(2);
    const auto img = random_image(rng, 16, 16);
    CHECK(quantize(img, SubPartition::finest(256)) == img);

    // A single interval collapses to the rounded mean.
    const GrayImage pair(2, 1, {10, 13});
    const auto flat = quantize(pair, SubPartition::whole(256));
    CHECK(flat.pixels == std::vector<std::uint8_t>{12, 12});

    // Empty intervals map to their midpoint: [0,128) has centre 63.5 -> 64.
    const GrayImage bright(1, 1, {200});
    const auto q = make_quantizer(gray_histogram(bright), SubPartition({0, 128, 256}, 256));
    CHECK(q.levels == std::vector<std::uint8_t>{64, 200});
    CHECK(q.lut[5] == 64);
    CHECK(q.lut[130] == 200);

    CHECK_THROWS_AS(make_quantizer(BinnedSample(CellGrid({0.0, 1.0}), {1}), SubPartition::whole(1)),
                    std::invalid_argument);
}

TEST_CASE("applying one quantizer twice changes nothing")
{
    std::mt19937_64 rng(3);
    std::vector<std::size_t> cuts{0};
    for (std::size_t c = 1; c < 256; ++c) {
        if (rng() % 9 == 0) {
            cuts.push_back(c);
        }
    }
    cuts.push_back(256);
    const SubPartition part(cuts, 256);
    const auto img = random_image(rng, 32, 32);
    const auto q = make_quantizer(gray_histogram(img), part);
    const auto once = q.apply(img);
    CHECK(q.apply(once) == once);
    CHECK(distinct_levels(once) <= part.intervals());
}

TEST_CASE("psnr")
{
    std::mt19937_64 rng(4);
    const auto img = random_image(rng, 10, 10);
    CHECK(psnr(img, img) == kInfinitePsnr);

    auto off = img;
    for (auto& p : off.pixels) {
        p = p == 255 ? 254 : static_cast<std::uint8_t>(p + 1);
    }
    CHECK(psnr(img, off) == doctest::Approx(48.1308036086791).epsilon(1e-12));
    CHECK(psnr(off, img) == psnr(img, off));
    CHECK_THROWS_AS(psnr(img, random_image(rng, 5, 5)), std::invalid_argument);

    // Splitting every interval in two can only lower the error.
    const auto coarse = quantize(img, SubPartition({0, 64, 128, 192, 256}, 256));
    const auto fine = quantize(img, SubPartition({0, 32, 64, 96, 128, 160, 192, 224, 256}, 256));
    CHECK(psnr(img, fine) >= psnr(img, coarse));
}

TEST_CASE("report json")
{
    const GrayImage pair(2, 1, {10, 13});
    const auto q = make_quantizer(gray_histogram(pair), SubPartition::whole(256));
    auto j = nlohmann::json::parse(quantization_report_json(q, 20.5));
    CHECK(j.at("m") == 1);
    CHECK(j.at("levels") == nlohmann::json::array({12}));
    CHECK(j.at("psnr_db").get<double>() == 20.5);
    j = nlohmann::json::parse(quantization_report_json(q, kInfinitePsnr));
    CHECK(j.at("psnr_db").is_null());
}

TEST_CASE("MDL quantizer on a natural photograph")
{
    const auto bytes = slurp(RIC_TEST_DATA_DIR "/camera512.pgm");
    REQUIRE(!bytes.empty());
    const auto img = read_pgm(bytes);
    CHECK(img.width == 512);
    const auto hist = gray_histogram(img);
    const auto sel = dp_select(hist);
    const auto out = make_quantizer(hist, sel.partition).apply(img);
    CHECK(distinct_levels(out) <= sel.partition.intervals());
    CHECK(psnr(img, out) >= 30.0);
}
