#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "diffsim/features/glcm.hpp"
#include "diffsim/rng.hpp"

using namespace diffsim;

namespace {

ImageU8 checkerboard(int n) {
    ImageU8 img(n, n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            img.at(x, y) = (x + y) % 2 ? 255 : 0;
    return img;
}

ImageU8 random_image(int w, int h, std::uint64_t seed) {
    ImageU8 img(w, h);
    Rng rng(seed);
    for (auto& v : img.data)
        v = static_cast<std::uint8_t>(rng.uniform_int(256));
    return img;
}

ImageU8 transpose(const ImageU8& in) {
    ImageU8 out(in.height, in.width);
    for (int y = 0; y < in.height; ++y)
        for (int x = 0; x < in.width; ++x)
            out.at(y, x) = in.at(x, y);
    return out;
}

ImageU8 hflip(const ImageU8& in) {
    ImageU8 out(in.width, in.height);
    for (int y = 0; y < in.height; ++y)
        for (int x = 0; x < in.width; ++x)
            out.at(in.width - 1 - x, y) = in.at(x, y);
    return out;
}

// Independent pair counting, as literal as possible: walk every pixel,
// look up the displaced partner, bin both values.
std::vector<double> brute_counts(const ImageU8& img, int dx, int dy, int levels) {
    std::vector<double> mat(static_cast<std::size_t>(levels) * levels, 0.0);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const int xx = x + dx, yy = y + dy;
            if (xx < 0 || xx >= img.width || yy < 0 || yy >= img.height)
                continue;
            const int i = img.at(x, y) * levels / 256;
            const int j = img.at(xx, yy) * levels / 256;
            mat[static_cast<std::size_t>(i) * levels + j] += 1.0;
        }
    return mat;
}

} // namespace

TEST_CASE("glcm: checkerboard statistics by hand") {
    const ImageU8 board = checkerboard(8);

    // Horizontal steps always land on the opposite color.
    const auto h0 = haralick(glcm_matrix(board, 1, 0, 2), 2);
    CHECK(h0.contrast == doctest::Approx(1.0));
    CHECK(h0.dissimilarity == doctest::Approx(1.0));
    CHECK(h0.homogeneity == doctest::Approx(0.5));
    CHECK(h0.angular_second_moment == doctest::Approx(0.5));
    CHECK(h0.energy == doctest::Approx(std::sqrt(0.5)));
    CHECK(h0.correlation == doctest::Approx(-1.0));

    // Diagonal steps always land on the same color.
    for (const int angle : {45, 135}) {
        const auto hd = haralick(glcm_matrix(board, 1, angle, 2), 2);
        CHECK(hd.contrast == doctest::Approx(0.0));
        CHECK(hd.dissimilarity == doctest::Approx(0.0));
        CHECK(hd.homogeneity == doctest::Approx(1.0));
        CHECK(hd.correlation == doctest::Approx(1.0));
    }
}

TEST_CASE("glcm: constant images are perfectly homogeneous") {
    const ImageU8 img(10, 10, 100);
    for (const int levels : {2, 256}) {
        const auto f = haralick(glcm_matrix(img, 1, 0, levels), levels);
        CHECK(f.contrast == 0.0);
        CHECK(f.dissimilarity == 0.0);
        CHECK(f.homogeneity == doctest::Approx(1.0));
        CHECK(f.angular_second_moment == doctest::Approx(1.0));
        CHECK(f.energy == doctest::Approx(1.0));
        CHECK(f.correlation == 1.0); // no gray-level variation
    }
}

TEST_CASE("glcm: haralick summaries of a small hand-made matrix") {
    const std::vector<double> p{0.5, 0.25, 0.25, 0.0};
    const auto f = haralick(p, 2);
    CHECK(f.contrast == doctest::Approx(0.5));
    CHECK(f.dissimilarity == doctest::Approx(0.5));
    CHECK(f.homogeneity == doctest::Approx(0.75));
    CHECK(f.angular_second_moment == doctest::Approx(0.375));
    CHECK(f.energy == doctest::Approx(std::sqrt(0.375)));
    CHECK(f.correlation == doctest::Approx(-1.0 / 3.0));
}

TEST_CASE("glcm: symmetric matrices are symmetric and sum to one") {
    const ImageU8 img = random_image(24, 18, 5);
    for (const int d : {1, 3})
        for (const int angle : {0, 45, 90, 135}) {
            const auto p = glcm_matrix(img, d, angle, 16);
            double sum = 0.0;
            for (int i = 0; i < 16; ++i)
                for (int j = 0; j < 16; ++j) {
                    REQUIRE(p[i * 16 + j] == p[j * 16 + i]);
                    sum += p[i * 16 + j];
                }
            REQUIRE(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
}

TEST_CASE("glcm: counts agree with a brute-force pair walk") {
    const ImageU8 img = random_image(17, 11, 6);
    const int levels = 8;
    const struct { int angle, dx, dy; } dirs[] = {
        {0, 2, 0}, {45, 2, -2}, {90, 0, -2}, {135, -2, -2}};
    for (const auto& dir : dirs) {
        const auto raw =
            glcm_matrix(img, 2, dir.angle, levels, /*symmetric=*/false,
                        /*normalized=*/false);
        const auto want = brute_counts(img, dir.dx, dir.dy, levels);
        REQUIRE(raw == want);

        // Symmetric mode adds the transposed counts.
        const auto sym = glcm_matrix(img, 2, dir.angle, levels, true, false);
        for (int i = 0; i < levels; ++i)
            for (int j = 0; j < levels; ++j)
                REQUIRE(sym[i * levels + j] ==
                        want[i * levels + j] + want[j * levels + i]);
    }
}

TEST_CASE("glcm: gray levels bin as value * levels / 256") {
    ImageU8 img(2, 1);
    img.at(0, 0) = 63;  // -> bin 0 of 4
    img.at(1, 0) = 64;  // -> bin 1 of 4
    const auto counts = glcm_matrix(img, 1, 0, 4, false, false);
    REQUIRE(counts[0 * 4 + 1] == 1.0);
    double total = 0.0;
    for (const double v : counts)
        total += v;
    REQUIRE(total == 1.0);

    ImageU8 bright(2, 1);
    bright.at(0, 0) = 255; // top bin
    bright.at(1, 0) = 192; // 192*4/256 = 3 as well
    const auto top = glcm_matrix(bright, 1, 0, 4, false, false);
    REQUIRE(top[3 * 4 + 3] == 1.0);
}

TEST_CASE("glcm: transposing the image swaps the 0 and 90 degree directions") {
    const ImageU8 img = random_image(20, 14, 7);
    const ImageU8 imgT = transpose(img);
    for (const int d : {1, 2}) {
        CHECK(glcm_matrix(img, d, 0, 16) == glcm_matrix(imgT, d, 90, 16));
        CHECK(glcm_matrix(img, d, 90, 16) == glcm_matrix(imgT, d, 0, 16));
        CHECK(glcm_matrix(img, d, 45, 16) == glcm_matrix(imgT, d, 45, 16));
        CHECK(glcm_matrix(img, d, 135, 16) == glcm_matrix(imgT, d, 135, 16));
    }
}

TEST_CASE("glcm: mirroring the image swaps the 45 and 135 degree directions") {
    const ImageU8 img = random_image(20, 14, 8);
    const ImageU8 imgF = hflip(img);
    for (const int d : {1, 2}) {
        CHECK(glcm_matrix(img, d, 45, 16) == glcm_matrix(imgF, d, 135, 16));
        CHECK(glcm_matrix(img, d, 135, 16) == glcm_matrix(imgF, d, 45, 16));
        CHECK(glcm_matrix(img, d, 0, 16) == glcm_matrix(imgF, d, 0, 16));
        CHECK(glcm_matrix(img, d, 90, 16) == glcm_matrix(imgF, d, 90, 16));
    }
}

TEST_CASE("glcm: invalid parameters are rejected") {
    const ImageU8 img = random_image(8, 8, 9);
    CHECK_THROWS_AS(glcm_matrix(img, 0, 0, 16), std::invalid_argument);
    CHECK_THROWS_AS(glcm_matrix(img, -1, 0, 16), std::invalid_argument);
    CHECK_THROWS_AS(glcm_matrix(img, 1, 30, 16), std::invalid_argument);
    CHECK_THROWS_AS(glcm_matrix(img, 1, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(glcm_matrix(img, 8, 0, 16), std::invalid_argument);
    CHECK_NOTHROW(glcm_matrix(img, 7, 0, 16));
}
