#include <catch_amalgamated.hpp>

#include <string>

#include "negsym/image.hpp"
#include "negsym/image_io.hpp"
#include "helpers.hpp"

using namespace negsym;

TEST_CASE("load_image reads binary PGM with full-scale intensities") {
    auto dir = testutil::scratch_dir("image_pgm");
    std::string pgm = "P5\n256 256\n255\n" + std::string(256 * 256, '\xff');
    testutil::write_bytes(dir / "white.pgm", pgm);

    GreyImage img = load_image((dir / "white.pgm").string());
    REQUIRE(img.size() == 256);
    for (double v : img.pixels()) REQUIRE(v == 1.0);
}

TEST_CASE("load_image handles header comments and sub-255 maxval") {
    auto dir = testutil::scratch_dir("image_pgm_hdr");
    std::string pgm = "P5\n# a comment\n8 # width then height\n8\n100\n" + std::string(64, '\x64');
    testutil::write_bytes(dir / "c.pgm", pgm);
    GreyImage img = load_image((dir / "c.pgm").string());
    REQUIRE(img.size() == 8);
    REQUIRE(img.at(0, 0) == 1.0);
}

TEST_CASE("load_image converts RGB PNG with BT.601 luma") {
    auto dir = testutil::scratch_dir("image_png");
    testutil::write_png_rgb(dir / "red.png", 64, 64, 255, 0, 0);
    GreyImage img = load_image((dir / "red.png").string());
    REQUIRE(img.size() == 64);
    for (double v : img.pixels()) REQUIRE(v == Catch::Approx(0.299).margin(1e-12));
}

TEST_CASE("load_image centre-crops non-square rasters") {
    auto dir = testutil::scratch_dir("image_crop");
    // 300x200: columns [50, 250) survive. Mark column 50 of every row.
    std::string px(300 * 200, '\0');
    for (int i = 0; i < 200; ++i) px[static_cast<std::size_t>(i) * 300 + 50] = '\xff';
    testutil::write_bytes(dir / "wide.pgm", "P5\n300 200\n255\n" + px);

    GreyImage img = load_image((dir / "wide.pgm").string());
    REQUIRE(img.size() == 200);
    REQUIRE(img.at(0, 0) == 1.0);
    REQUIRE(img.at(0, 1) == 0.0);
}

TEST_CASE("load_image error paths") {
    auto dir = testutil::scratch_dir("image_errors");
    CHECK_THROWS_MATCHES(load_image((dir / "nope.pgm").string()), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::file_not_found; }));

    testutil::write_bytes(dir / "ascii.pgm", "P2\n2 2\n255\n0 0 0 0\n");
    CHECK_THROWS_MATCHES(load_image((dir / "ascii.pgm").string()), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::unsupported_format; }));

    testutil::write_bytes(dir / "tiny.pgm", "P5\n7 7\n255\n" + std::string(49, 'x'));
    CHECK_THROWS_MATCHES(load_image((dir / "tiny.pgm").string()), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::degenerate_image; }));

    testutil::write_bytes(dir / "wide16.pgm", "P5\n8 8\n65535\n" + std::string(128, 'x'));
    CHECK_THROWS_MATCHES(load_image((dir / "wide16.pgm").string()), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::unsupported_format; }));
}

TEST_CASE("PGM write/load round-trip is byte-exact") {
    auto dir = testutil::scratch_dir("image_roundtrip");
    GreyImage img = testutil::smooth_image(0);
    write_pgm(img, (dir / "a.pgm").string());
    GreyImage back = load_image((dir / "a.pgm").string());
    write_pgm(back, (dir / "b.pgm").string());
    REQUIRE(testutil::read_bytes(dir / "a.pgm") == testutil::read_bytes(dir / "b.pgm"));
}

TEST_CASE("resize identity and constants") {
    GreyImage img = testutil::smooth_image(1);
    REQUIRE(resize(img, img.size()) == img);

    GreyImage half(64);
    for (auto& v : half.pixels()) v = 0.5;
    GreyImage shrunk = resize(half, 32);
    for (double v : shrunk.pixels()) REQUIRE(v == 0.5);

    CHECK_THROWS_MATCHES(resize(img, 7), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::degenerate_image; }));
}

TEST_CASE("resize round-trip stays close on smooth images") {
    GreyImage img = testutil::smooth_image(2);
    GreyImage back = resize(resize(img, 128), 256);
    REQUIRE(testutil::disk_mad(back, img) <= 0.02);
}

TEST_CASE("standardize maps a two-value image onto exactly +-1") {
    GreyImage img(64);
    DiskMask mask(64);
    REQUIRE(mask.count() % 2 == 0);  // 3096 members: alternating fill splits evenly
    int flip = 0;
    mask.for_each([&](int i, int j) { img.at(i, j) = (flip++ % 2) ? 1.0 : 0.0; });
    StandardizedSamples s = standardize(img, mask);
    for (double v : s.values) REQUIRE(std::abs(v) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(mean_of(s.values) == Catch::Approx(0.0).margin(1e-9));
    REQUIRE(variance_of(s.values, 0.0) == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("standardize rejects constant images and is idempotent") {
    GreyImage flat(32);
    for (auto& v : flat.pixels()) v = 0.25;
    DiskMask mask(32);
    CHECK_THROWS_MATCHES(standardize(flat, mask), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::zero_variance_image; }));

    GreyImage img = testutil::smooth_image(3);
    StandardizedSamples once = standardize(img, DiskMask(img.size()));
    REQUIRE(std::abs(mean_of(once.values)) <= 1e-9);
    REQUIRE(std::abs(variance_of(once.values, mean_of(once.values)) - 1.0) <= 1e-9);

    StandardizedSamples twice = standardize_sequence(once.values, Errc::zero_variance_image);
    for (std::size_t i = 0; i < once.values.size(); ++i)
        REQUIRE(twice.values[i] == Catch::Approx(once.values[i]).margin(1e-9));
}

TEST_CASE("disk mask is preserved by the centre transforms") {
    const int n = 101;  // odd size: integer centre
    DiskMask mask(n);
    REQUIRE(mask.count() > 0);

    // Membership is invariant under the exact permutation maps.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            REQUIRE(mask.inside(i, j) == mask.inside(n - 1 - i, j));
            REQUIRE(mask.inside(i, j) == mask.inside(j, n - 1 - i));
            REQUIRE(mask.inside(i, j) == mask.inside(j, i));
        }

    // For arbitrary angles the preimage of an inside pixel stays in bounds.
    SplitMix64 rng(7);
    DiskMask m2(256);
    const double c = (256 - 1) / 2.0;
    for (int trial = 0; trial < 25; ++trial) {
        const double rad = rng.uniform(0.0, 360.0) * std::numbers::pi / 180.0;
        const double cs = std::cos(rad), sn = std::sin(rad);
        m2.for_each([&](int i, int j) {
            const double x = j - c, y = c - i;
            const double sx = cs * x + sn * y;
            const double sy = cs * y - sn * x;
            REQUIRE(c + sx >= -1e-9);
            REQUIRE(c + sx <= 255 + 1e-9);
            REQUIRE(c - sy >= -1e-9);
            REQUIRE(c - sy <= 255 + 1e-9);
        });
    }
}

TEST_CASE("GreyImage validates size and pixel range") {
    CHECK_THROWS_AS(GreyImage(7), Error);
    CHECK_THROWS_AS(GreyImage::from_pixels(8, std::vector<double>(64, 1.5)), Error);
    CHECK_THROWS_AS(GreyImage::from_pixels(8, std::vector<double>(63, 0.5)), Error);
}
