#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "negsym/negentropy.hpp"
#include "negsym/synthetic.hpp"

using namespace negsym;

namespace {

// Closed-form oracle for the exact two-point distribution {-1,+1}: the odd
// first term vanishes, leaving k2*(e^{-1/2} - sqrt(1/2))^2.
double two_point_oracle() {
    const double d = std::exp(-0.5) - std::sqrt(0.5);
    return kNegentropyK2 * d * d;
}

// Closed-form oracle for uniform[-sqrt(3), sqrt(3)] (unit variance): the
// first term vanishes by symmetry and E[exp(-y^2/2)] integrates to
// sqrt(2*pi) * erf(sqrt(3/2)) / (2*sqrt(3)).
double uniform_oracle() {
    const double e = std::sqrt(2.0 * std::numbers::pi) * std::erf(std::sqrt(1.5)) / (2.0 * std::numbers::sqrt3);
    const double d = e - std::sqrt(0.5);
    return kNegentropyK2 * d * d;
}

StandardizedSamples two_point_samples(std::size_t n) {
    StandardizedSamples s;
    s.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.values.push_back(i % 2 ? 1.0 : -1.0);
    return s;
}

StandardizedSamples gaussian_samples(std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    StandardizedSamples s;
    s.values.reserve(n);
    for (std::size_t i = 0; i < n; i += 2) {
        const double u1 = 1.0 - rng.next_double();  // (0,1]
        const double u2 = rng.next_double();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        s.values.push_back(mag * std::cos(2.0 * std::numbers::pi * u2));
        s.values.push_back(mag * std::sin(2.0 * std::numbers::pi * u2));
    }
    return standardize_sequence(s.values, Errc::zero_variance_image);
}

}  // namespace

TEST_CASE("negentropy constants come from their closed forms") {
    REQUIRE(kNegentropyK1 == Catch::Approx(36.0 / (8.0 * std::sqrt(3.0) - 9.0)).epsilon(1e-15));
    REQUIRE(kNegentropyK2 == Catch::Approx(24.0 / (16.0 * std::sqrt(3.0) - 27.0)).epsilon(1e-15));
    REQUIRE(kGaussianEntropy == Catch::Approx(1.4189385332046727).epsilon(1e-15));
}

TEST_CASE("negentropy of the exact two-point distribution matches the closed form") {
    const double oracle = two_point_oracle();
    REQUIRE(oracle == Catch::Approx(0.3406).margin(1e-4));
    REQUIRE(negentropy(two_point_samples(1000)) == Catch::Approx(oracle).margin(1e-12));
}

TEST_CASE("negentropy vanishes on seeded Gaussian samples") {
    REQUIRE(negentropy(gaussian_samples(1'000'000, 2024)) <= 0.005);
}

TEST_CASE("negentropy of seeded uniform samples matches the integral oracle") {
    const double oracle = uniform_oracle();
    REQUIRE(oracle == Catch::Approx(0.0645).margin(3e-4));

    SplitMix64 rng(515151);
    std::vector<double> raw(1'000'000);
    for (auto& v : raw) v = rng.uniform(-std::numbers::sqrt3, std::numbers::sqrt3);
    const double j = negentropy(standardize_sequence(raw, Errc::zero_variance_image));
    REQUIRE(j == Catch::Approx(oracle).margin(0.003));
}

TEST_CASE("negentropy needs at least two samples") {
    StandardizedSamples one;
    one.values = {0.0};
    CHECK_THROWS_MATCHES(negentropy(one), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::too_few_samples; }));
}

TEST_CASE("entropy approximation is the Gaussian entropy minus negentropy") {
    auto s = two_point_samples(64);
    REQUIRE(entropy_approx(s) == kGaussianEntropy - negentropy(s));
    REQUIRE(entropy_approx(s) == Catch::Approx(1.0783).margin(1e-3));
    REQUIRE(entropy_approx(gaussian_samples(1'000'000, 7)) == Catch::Approx(1.41894).margin(0.005));
}

TEST_CASE("curve negentropy standardizes first and rejects degenerate input") {
    std::vector<double> flat(32, 3.5);
    CHECK_THROWS_MATCHES(curve_negentropy(flat), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::zero_variance_curve; }));

    std::vector<double> shorty(7, 1.0);
    CHECK_THROWS_MATCHES(curve_negentropy(shorty), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::too_few_samples; }));

    // +-c alternation standardizes onto +-1: same closed form as above,
    // whatever the scale.
    std::vector<double> alt(64);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = (i % 2 ? 0.125 : -0.125) + 7.0;
    REQUIRE(curve_negentropy(alt) == Catch::Approx(two_point_oracle()).margin(1e-3));

    std::vector<double> flipped(alt.rbegin(), alt.rend());
    REQUIRE(curve_negentropy(flipped) == Catch::Approx(curve_negentropy(alt)).margin(1e-12));
}

TEST_CASE("negentropy is permutation-invariant and non-negative") {
    SplitMix64 rng(909);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> raw(257);
        for (auto& v : raw) v = rng.next_double() + (trial % 3 == 0 ? 4.0 * rng.next_double() : 0.0);
        auto s = standardize_sequence(raw, Errc::zero_variance_image);
        const double j = negentropy(s);
        REQUIRE(j >= 0.0);

        // deterministic shuffle
        for (std::size_t i = s.values.size(); i > 1; --i)
            std::swap(s.values[i - 1], s.values[rng.next() % i]);
        REQUIRE(negentropy(s) == Catch::Approx(j).margin(1e-12));
    }
}

TEST_CASE("negentropy after standardization is affine-invariant") {
    SplitMix64 rng(4242);
    std::vector<double> raw(4096);
    for (auto& v : raw) v = rng.next_double() * rng.next_double();
    const double j = negentropy(standardize_sequence(raw, Errc::zero_variance_image));
    for (auto [a, b] : {std::pair{3.7, -1.0}, {0.031, 12.0}}) {
        std::vector<double> mapped(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) mapped[i] = a * raw[i] + b;
        REQUIRE(negentropy(standardize_sequence(mapped, Errc::zero_variance_image)) == Catch::Approx(j).margin(1e-9));
    }
}

TEST_CASE("negentropy is bitwise deterministic") {
    auto s = gaussian_samples(10'000, 5);
    REQUIRE(negentropy(s) == negentropy(s));
}
