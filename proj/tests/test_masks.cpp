#include "gcb/imageio.hpp"
#include "gcb/masks.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <random>

using namespace gcb;

namespace {

Mask rect(int w, int h, int x0, int y0, int x1, int y1)
{
    Mask m(w, h);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) m.set(x, y);
    return m;
}

Mask random_mask(std::mt19937_64& rng, int w, int h, double p)
{
    std::bernoulli_distribution on(p);
    Mask m(w, h);
    for (auto& b : m.bits) b = on(rng) ? 1 : 0;
    return m;
}

bool subset(const Mask& a, const Mask& b)
{
    for (std::size_t i = 0; i < a.bits.size(); ++i)
        if (a.bits[i] && !b.bits[i]) return false;
    return true;
}

}  // namespace

TEST(Iou, Basics)
{
    const Mask a = rect(10, 10, 0, 0, 5, 10);
    const Mask b = rect(10, 10, 0, 0, 10, 5);
    const Mask empty(10, 10);
    EXPECT_EQ(iou(a, a), 1.0);
    EXPECT_EQ(iou(a, empty), 0.0);
    EXPECT_EQ(iou(empty, empty), 0.0);
    EXPECT_DOUBLE_EQ(iou(a, b), 25.0 / 75.0);
    EXPECT_DOUBLE_EQ(iou(a, b), iou(b, a));
    EXPECT_THROW(iou(a, Mask(5, 5)), MaskError);
}

TEST(Refine, NoNegativesIsIdentity)
{
    MaskBundle b{rect(100, 100, 0, 0, 50, 50), {}};
    const auto r = refine_mask(b);
    EXPECT_EQ(r.mask, b.positive);
    EXPECT_TRUE(r.valid);
}

TEST(Refine, NegativeEqualToPositiveIsIgnored)
{
    MaskBundle b{rect(100, 100, 0, 0, 50, 50), {{"body", rect(100, 100, 0, 0, 50, 50)}}};
    const auto r = refine_mask(b);
    EXPECT_EQ(r.mask, b.positive);
    EXPECT_TRUE(r.valid);
    ASSERT_EQ(r.ignored.size(), 1u);
    EXPECT_EQ(r.ignored[0], "body");
}

TEST(Refine, SwallowedObjectIsInvalid)
{
    // Positive 100x100 = 10,000 px. Negative covers 9,900 of it plus 2,375
    // outside, so IoU = 9900 / 12375 = 0.8 and only 100 px remain.
    const int w = 200, h = 100;
    Mask pos = rect(w, h, 0, 0, 100, 100);
    Mask neg = rect(w, h, 0, 0, 100, 99);
    for (int i = 0; i < 2375; ++i) neg.set(100 + i % 100, i / 100);
    ASSERT_EQ(neg.count(), 12275u);
    MaskBundle b{pos, {{"tire", neg}}};
    EXPECT_NEAR(iou(neg, pos), 0.8, 1e-12);
    const auto r = refine_mask(b);
    EXPECT_EQ(r.mask.count(), 100u);
    EXPECT_FALSE(r.valid);
    EXPECT_TRUE(r.ignored.empty());
}

TEST(Refine, SubtractsParts)
{
    MaskBundle b{rect(100, 100, 0, 0, 60, 60), {{"wheel", rect(100, 100, 50, 50, 70, 70)}}};
    const auto r = refine_mask(b);
    EXPECT_EQ(r.mask.count(), 3600u - 100u);
    EXPECT_TRUE(r.valid);
    EXPECT_FALSE(r.mask.at(55, 55));
}

TEST(Refine, MinimumAreaRule)
{
    // 2% of a 40,000 px object is 800 px, above the 256 px floor.
    // tau_ignore = 1 turns the guard off; these negatives cover nearly the whole object.
    MaskBundle b{rect(200, 200, 0, 0, 200, 200), {{"x", rect(200, 200, 0, 0, 200, 197)}}};
    const RefineParams p{1.0, 256, 0.02};
    auto r = refine_mask(b, p);
    EXPECT_EQ(r.mask.count(), 600u);
    EXPECT_FALSE(r.valid);
    b.negatives[0].second = rect(200, 200, 0, 0, 200, 196);
    r = refine_mask(b, p);
    EXPECT_EQ(r.mask.count(), 800u);
    EXPECT_TRUE(r.valid);
}

TEST(Refine, DimensionMismatch)
{
    MaskBundle b{rect(10, 10, 0, 0, 5, 5), {{"x", Mask(11, 10)}}};
    EXPECT_THROW(refine_mask(b), MaskError);
}

TEST(Refine, SubsetAndIdempotentOnRandomBundles)
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> tau(0.05, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const int w = 24, h = 20;
        MaskBundle b{random_mask(rng, w, h, 0.7), {}};
        const int nneg = static_cast<int>(rng() % 4);
        for (int i = 0; i < nneg; ++i) {
            // Mix of small parts and near-copies of the object.
            Mask n = (rng() % 3 == 0) ? b.positive : random_mask(rng, w, h, 0.2);
            if (rng() % 2) n.bits[rng() % n.bits.size()] ^= 1;
            b.negatives.emplace_back("n" + std::to_string(i), n);
        }
        RefineParams p;
        p.tau_ignore = tau(rng);
        p.min_pixels = 10;
        const auto r1 = refine_mask(b, p);
        EXPECT_TRUE(subset(r1.mask, b.positive));
        MaskBundle again{r1.mask, b.negatives};
        const auto r2 = refine_mask(again, p);
        EXPECT_EQ(r2.mask, r1.mask) << "trial " << trial;
    }
}

TEST(Extract, FlatPatch)
{
    const Rgb8 red{185, 40, 66};
    RgbImage img(32, 32, red);
    const auto px = extract_pixels(img, Mask(32, 32, true));
    EXPECT_EQ(px.source_count, 1024u);
    ASSERT_EQ(px.samples.size(), 1024u);
    for (const auto& s : px.samples) EXPECT_EQ(s, srgb_to_lab(red));
}

TEST(Extract, CapIsDeterministic)
{
    RgbImage img(100, 100);
    std::mt19937 rng(1);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(rng());
    const Mask all(100, 100, true);
    const auto a = extract_pixels(img, all, 100, 9);
    const auto b = extract_pixels(img, all, 100, 9);
    const auto c = extract_pixels(img, all, 100, 10);
    EXPECT_EQ(a.samples.size(), 100u);
    EXPECT_EQ(a.source_count, 10000u);
    EXPECT_EQ(a.samples, b.samples);
    EXPECT_NE(a.samples, c.samples);
}

TEST(Extract, ExactProportionsWithoutCap)
{
    const Rgb8 p{10, 200, 30}, q{240, 240, 0};
    RgbImage img(40, 10, p);
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 10; ++x) img.set(x, y, q);  // 100 of 400
    Mask m(40, 10, true);
    m.set(39, 9, false);  // 399 masked
    const auto px = extract_pixels(img, m);
    std::size_t nq = std::count(px.samples.begin(), px.samples.end(), srgb_to_lab(q));
    std::size_t np = std::count(px.samples.begin(), px.samples.end(), srgb_to_lab(p));
    EXPECT_EQ(nq, 100u);
    EXPECT_EQ(np, 299u);
}

TEST(Extract, Errors)
{
    RgbImage img(8, 8);
    EXPECT_THROW(extract_pixels(img, Mask(8, 8)), MaskError);
    EXPECT_THROW(extract_pixels(img, Mask(8, 9, true)), MaskError);
    EXPECT_THROW(extract_pixels(img, Mask(8, 8, true), 0), MaskError);
}

TEST(MaskFiles, Naming)
{
    EXPECT_EQ(mask_filename("0", "hair dryer"), "0.hair_dryer.mask.png");
    EXPECT_EQ(negative_mask_filename("img_3", "Car", "black wheel"), "img_3.car.neg.black_wheel.mask.png");
}

TEST(MaskFiles, PngRoundTrip)
{
    const auto dir = std::filesystem::temp_directory_path() / "gcb_masks_test";
    std::filesystem::create_directories(dir);
    std::mt19937_64 rng(3);
    const Mask m = random_mask(rng, 37, 23, 0.5);
    write_png_mask(dir / "m.png", m);
    EXPECT_EQ(read_png_mask(dir / "m.png"), m);

    RgbImage img(13, 7);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(rng());
    write_png_rgb(dir / "i.png", img);
    const auto back = read_png_rgb(dir / "i.png");
    EXPECT_EQ(back.width, 13);
    EXPECT_EQ(back.height, 7);
    EXPECT_EQ(back.data, img.data);
    EXPECT_THROW(read_png_rgb(dir / "missing.png"), ImageIoError);
    std::filesystem::remove_all(dir);
}
