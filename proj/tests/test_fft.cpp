#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "windcast/fft.hpp"
#include "windcast/rng.hpp"
#include "windcast/series.hpp"
#include "windcast/svmd.hpp"

using namespace windcast;

namespace {

// Independent O(N^2) one-sided DFT used as the oracle throughout.
std::vector<cd> direct_dft(const std::vector<double>& f) {
    const std::size_t n = f.size();
    std::vector<cd> out(n / 2 + 1, cd(0, 0));
    for (std::size_t k = 0; k < out.size(); ++k) {
        cd s(0, 0);
        for (std::size_t t = 0; t < n; ++t) {
            double ang = -2.0 * M_PI * static_cast<double>(k) * static_cast<double>(t) /
                         static_cast<double>(n);
            s += f[t] * cd(std::cos(ang), std::sin(ang));
        }
        out[k] = s;
    }
    return out;
}

std::vector<double> random_series(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

} // namespace

TEST_CASE("constant series concentrates in the zero-frequency bin") {
    Spectrum s = analyze({1.0, 1.0, 1.0, 1.0});
    CHECK(std::abs(s.bins[0]) == doctest::Approx(4.0).epsilon(1e-12));
    for (std::size_t k = 1; k < s.num_bins(); ++k) CHECK(std::abs(s.bins[k]) < 1e-12);
}

TEST_CASE("pure tone lands in its bin") {
    const std::size_t n = 64, tone = 8;
    std::vector<double> f(n);
    for (std::size_t t = 0; t < n; ++t)
        f[t] = std::cos(2.0 * M_PI * static_cast<double>(tone) * static_cast<double>(t) /
                        static_cast<double>(n));
    Spectrum s = analyze(f);
    std::size_t best = 0;
    for (std::size_t k = 1; k < s.num_bins(); ++k)
        if (std::abs(s.bins[k]) > std::abs(s.bins[best])) best = k;
    CHECK(best == tone);
    CHECK(std::abs(s.bins[tone]) == doctest::Approx(32.0).epsilon(1e-9));
}

TEST_CASE("round trip through the one-sided spectrum") {
    for (std::size_t n : {128u, 127u, 96u, 1440u}) {
        std::vector<double> f = random_series(n, 7 + n);
        std::vector<double> back = synthesize(analyze(f));
        double max_err = 0.0, scale = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            max_err = std::max(max_err, std::fabs(back[t] - f[t]));
            scale = std::max(scale, std::fabs(f[t]));
        }
        CHECK(max_err < 1e-10 * std::max(scale, 1.0));
    }
}

TEST_CASE("matches the direct DFT oracle") {
    for (std::size_t n : {64u, 96u, 131u}) {
        std::vector<double> f = random_series(n, 100 + n);
        Spectrum fast = analyze(f);
        std::vector<cd> slow = direct_dft(f);
        REQUIRE(fast.num_bins() == slow.size());
        for (std::size_t k = 0; k < slow.size(); ++k)
            CHECK(std::abs(fast.bins[k] - slow[k]) < 1e-8);
    }
}

TEST_CASE("omega grid spans [0, pi]") {
    Spectrum s = analyze(random_series(100, 5));
    CHECK(s.omega(0) == 0.0);
    CHECK(s.omega(s.num_bins() - 1) == doctest::Approx(M_PI).epsilon(1e-12));
}

TEST_CASE("empty series is rejected") {
    CHECK_THROWS_AS(analyze({}), InvalidInput);
    Series empty;
    CHECK_THROWS_AS(spectrum(empty), InvalidInput);
}
