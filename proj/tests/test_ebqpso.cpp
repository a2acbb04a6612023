#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "windcast/benchmarks.hpp"
#include "windcast/ebqpso.hpp"
#include "windcast/rng.hpp"

using namespace windcast;

TEST_CASE("mean_best") {
    CHECK(mean_best({{1, 1}, {3, 3}}) == std::vector<double>{2, 2});
    CHECK(mean_best({{0.25, -4}}) == std::vector<double>{0.25, -4});
    // 25 random particles against a per-dimension summation oracle
    Rng rng(3);
    std::vector<std::vector<double>> pb(25, std::vector<double>(4));
    std::vector<double> sums(4, 0.0);
    for (auto& p : pb)
        for (std::size_t j = 0; j < 4; ++j) {
            p[j] = rng.uniform(-5, 5);
            sums[j] += p[j];
        }
    std::vector<double> m = mean_best(pb);
    for (std::size_t j = 0; j < 4; ++j)
        CHECK(m[j] == doctest::Approx(sums[j] / 25.0).epsilon(1e-12));
    CHECK_THROWS_AS(mean_best({}), InvalidInput);
}

TEST_CASE("contraction-expansion coefficient") {
    CHECK(contraction_expansion(0, 100, CeMode::linear_decay) == doctest::Approx(1.0));
    CHECK(contraction_expansion(100, 100, CeMode::linear_decay) == doctest::Approx(0.5));
    for (std::size_t t : {0u, 13u, 100u})
        CHECK(contraction_expansion(t, 100, CeMode::fixed, 0.5) == 0.5);
}

TEST_CASE("normalize and denormalize") {
    SearchSpace space;
    space.lower = {1e-4, 1e-4, 1.0};
    space.upper = {1e4, 1e4, 25.0};
    space.log_scale = {true, true, false};
    space.integer_dims = {false, false, true};

    CHECK(normalize({1e-4, 1e-4, 1.0}, space) == std::vector<double>{0, 0, 0});
    CHECK(normalize({1e4, 1e4, 25.0}, space) == std::vector<double>{1, 1, 1});

    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> x = {std::pow(10.0, rng.uniform(-4, 4)),
                                 std::pow(10.0, rng.uniform(-4, 4)),
                                 std::floor(rng.uniform(1.0, 25.0))};
        std::vector<double> back = denormalize(normalize(x, space), space);
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(back[j] == doctest::Approx(x[j]).epsilon(1e-12));
    }

    bool clamped = false;
    std::vector<double> n = normalize({1e5, 1.0, 12.0}, space, &clamped);
    CHECK(clamped);
    CHECK(n[0] == 1.0);

    // integer dims round on decode
    std::vector<double> d = denormalize({0.5, 0.5, 0.51}, space);
    CHECK(d[2] == std::round(1.0 + 0.51 * 24.0));
}

TEST_CASE("qpso step: degenerate swarm is a fixed point") {
    Swarm swarm;
    swarm.particles.resize(3);
    for (auto& p : swarm.particles) {
        p.position = {0.4, 0.6};
        p.pbest_position = {0.4, 0.6};
    }
    Rng rng(5);
    qpso_step(swarm, {0.4, 0.6}, {0.4, 0.6}, 0.75, rng);
    for (const auto& p : swarm.particles) {
        CHECK(p.position[0] == doctest::Approx(0.4).epsilon(1e-15));
        CHECK(p.position[1] == doctest::Approx(0.6).epsilon(1e-15));
    }
}

TEST_CASE("qpso step: alpha 0 jumps straight to the attractor") {
    Swarm swarm;
    swarm.particles.resize(1);
    swarm.particles[0].position = {0.9};
    swarm.particles[0].pbest_position = {0.2};
    Rng rng(11);
    Rng probe(11);
    double phi = probe.uniform();
    qpso_step(swarm, {0.8}, {0.5}, 0.0, rng);
    CHECK(swarm.particles[0].position[0] ==
          doctest::Approx(phi * 0.2 + (1 - phi) * 0.8).epsilon(1e-15));
}

TEST_CASE("qpso step: fixed seed reproduces exactly") {
    auto run_once = [] {
        Swarm swarm;
        swarm.particles.resize(2);
        swarm.particles[0].position = {0.1};
        swarm.particles[0].pbest_position = {0.3};
        swarm.particles[1].position = {0.7};
        swarm.particles[1].pbest_position = {0.6};
        Rng rng(123);
        qpso_step(swarm, {0.5}, {0.45}, 0.8, rng);
        return std::make_pair(swarm.particles[0].position[0], swarm.particles[1].position[0]);
    };
    auto a = run_once();
    auto b = run_once();
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
}

TEST_CASE("transposon: zero jumping rate leaves the pool untouched") {
    std::vector<std::vector<double>> pool = {{0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}};
    Rng rng(9);
    CHECK(transposon_operator(pool, 0.0, 1, 1, rng) == pool);
}

TEST_CASE("transposon: within-chromosome cut-and-paste permutation") {
    std::vector<double> c = {10.0, 20.0, 30.0};
    detail::cut_paste_within(c, 0, 2, 1);
    CHECK(c == std::vector<double>{20.0, 30.0, 10.0});
}

TEST_CASE("transposon: between-chromosome copy-and-paste overwrites the target gene") {
    // find a seed whose draw sequence fires chromosome 0 onto partner 1 in
    // copy mode with loci 1 -> 1, then verify the documented semantics
    for (std::uint64_t seed = 0; seed < 20000; ++seed) {
        Rng probe(seed);
        bool fire0 = probe.uniform() < 0.9;
        std::size_t c2 =
            static_cast<std::size_t>(std::max(1.0, std::ceil(probe.uniform() * 2.0))) - 1;
        bool cut = probe.uniform() > 0.5;
        std::size_t src = probe.index(3);
        std::size_t dst = probe.index(3);
        bool fire1 = probe.uniform() < 0.9;
        if (fire0 && c2 == 1 && !cut && src == 1 && dst == 1 && !fire1) {
            std::vector<std::vector<double>> pool = {{1.0, 2.0, 3.0}, {7.0, 8.0, 9.0}};
            Rng rng(seed);
            auto bred = transposon_operator(pool, 0.9, 1, 1, rng);
            CHECK(bred[0] == std::vector<double>{1.0, 2.0, 3.0});  // source unchanged
            CHECK(bred[1] == std::vector<double>{7.0, 2.0, 9.0});  // target locus overwritten
            return;
        }
    }
    FAIL("no seed produced the wanted draw sequence");
}

TEST_CASE("transposon: genes never leave the pool's closure") {
    // cut operations conserve the multiset; copy may duplicate but cannot
    // invent values
    Rng rng(31);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<std::vector<double>> pool(4, std::vector<double>(5));
        std::multiset<double> before;
        for (auto& c : pool)
            for (double& g : c) {
                g = rng.uniform();
                before.insert(g);
            }
        auto bred = transposon_operator(pool, 1.0, 1, 2, rng);
        for (auto& c : bred)
            for (double g : c) CHECK(before.count(g) > 0);
    }
}

TEST_CASE("transposon: pure cut runs preserve the multiset exactly") {
    // jumping_rate 1 with a coin forced to cut cannot be arranged through the
    // public API, so check the conservation on single-fire cases instead:
    // scan seeds where every fired operation drew cut
    std::size_t checked = 0;
    for (std::uint64_t seed = 0; seed < 3000 && checked < 25; ++seed) {
        Rng probe(seed);
        bool all_cut = true;
        for (std::size_t i = 0; i < 3; ++i) {
            if (probe.uniform() >= 1.0) continue;  // always fires at rate 1
            probe.uniform();                       // partner
            if (!(probe.uniform() > 0.5)) all_cut = false;
            probe.index(3);
            probe.index(3);
        }
        if (!all_cut) continue;
        ++checked;
        std::vector<std::vector<double>> pool = {{0.1, 0.2, 0.3}, {0.4, 0.5, 0.6},
                                                 {0.7, 0.8, 0.9}};
        std::multiset<double> before;
        for (auto& c : pool)
            for (double g : c) before.insert(g);
        Rng rng(seed);
        auto bred = transposon_operator(pool, 1.0, 1, 1, rng);
        std::multiset<double> after;
        for (auto& c : bred)
            for (double g : c) after.insert(g);
        CHECK(before == after);
    }
    CHECK(checked == 25);
}

TEST_CASE("run: constant fitness gives a flat history at that constant") {
    SearchSpace space = SearchSpace::box({-1, -1}, {1, 1});
    EbqpsoConfig config;
    config.population = 8;
    config.generations = 12;
    config.dimension = 2;
    config.lambda = 3;
    config.seed = 4;
    OptimizationTrace trace =
        run_ebqpso([](const std::vector<double>&) { return 2.5; }, space, config);
    CHECK(trace.best_fitness == 2.5);
    for (double f : trace.fitness_history) CHECK(f == 2.5);
}

TEST_CASE("run: sphere converges and history is monotone") {
    SearchSpace space =
        SearchSpace::box(std::vector<double>(5, -100.0), std::vector<double>(5, 100.0));
    EbqpsoConfig config;
    config.population = 20;
    config.generations = 80;
    config.dimension = 5;
    config.seed = 7;
    OptimizationTrace trace =
        run_ebqpso([](const std::vector<double>& x) { return sphere(x); }, space, config);
    CHECK(trace.best_fitness < 1e-6);
    for (std::size_t t = 1; t < trace.fitness_history.size(); ++t)
        CHECK(trace.fitness_history[t] <= trace.fitness_history[t - 1]);
}

TEST_CASE("run: mccormick reaches the known minimum") {
    SearchSpace space = benchmark_space("mccormick", 2);
    EbqpsoConfig config;
    config.population = 25;
    config.generations = 100;
    config.dimension = 2;
    config.seed = 12;
    OptimizationTrace trace =
        run_ebqpso([](const std::vector<double>& x) { return mccormick(x); }, space, config);
    CHECK(trace.best_fitness == doctest::Approx(-1.9133).epsilon(1e-3));
}

TEST_CASE("run: evaluation budget respects the complexity-table bound") {
    SearchSpace space =
        SearchSpace::box(std::vector<double>(3, -5.0), std::vector<double>(3, 5.0));
    EbqpsoConfig config;
    config.population = 25;
    config.generations = 100;
    config.dimension = 3;
    config.lambda = 5;
    config.seed = 3;
    std::size_t calls = 0;
    OptimizationTrace trace = run_ebqpso(
        [&calls](const std::vector<double>& x) {
            ++calls;
            return sphere(x);
        },
        space, config);
    CHECK(trace.evaluation_count == calls);
    const double bound = static_cast<double>(config.generations * config.population) *
                             (2.0 + static_cast<double>(config.lambda)) /
                             static_cast<double>(config.lambda) +
                         static_cast<double>(config.population);
    CHECK(static_cast<double>(calls) <= bound);
}

TEST_CASE("run: identical seed and config give an identical trace") {
    SearchSpace space =
        SearchSpace::box(std::vector<double>(4, -2.0), std::vector<double>(4, 2.0));
    EbqpsoConfig config;
    config.population = 10;
    config.generations = 30;
    config.dimension = 4;
    config.seed = 99;
    auto fn = [](const std::vector<double>& x) { return ackley(x); };
    OptimizationTrace a = run_ebqpso(fn, space, config);
    OptimizationTrace b = run_ebqpso(fn, space, config);
    CHECK(a.best_fitness == b.best_fitness);
    CHECK(a.best_position == b.best_position);
    CHECK(a.fitness_history == b.fitness_history);
    CHECK(a.evaluation_count == b.evaluation_count);
}

TEST_CASE("run: every evaluated point stays inside the decoded box") {
    SearchSpace space;
    space.lower = {1e-4, 1.0};
    space.upper = {1e4, 25.0};
    space.log_scale = {true, false};
    space.integer_dims = {false, true};
    EbqpsoConfig config;
    config.population = 10;
    config.generations = 25;
    config.dimension = 2;
    config.seed = 6;
    bool ok = true;
    run_ebqpso(
        [&](const std::vector<double>& x) {
            if (x[0] < 1e-4 || x[0] > 1e4 || x[1] < 1.0 || x[1] > 25.0) ok = false;
            if (x[1] != std::round(x[1])) ok = false;
            return (std::log10(x[0]) - 1.0) * (std::log10(x[0]) - 1.0) + x[1];
        },
        space, config);
    CHECK(ok);
}

TEST_CASE("run: non-finite fitness is treated as worst") {
    SearchSpace space = SearchSpace::box({-1.0}, {1.0});
    EbqpsoConfig config;
    config.population = 6;
    config.generations = 20;
    config.dimension = 1;
    config.seed = 2;
    OptimizationTrace trace = run_ebqpso(
        [](const std::vector<double>& x) {
            if (x[0] < 0.0) return std::nan("");  // half the box is poison
            return x[0];
        },
        space, config);
    CHECK(std::isfinite(trace.best_fitness));
    CHECK(trace.best_position[0] >= 0.0);
}

TEST_CASE("benchmark function values") {
    CHECK(sphere({0, 0, 0}) == 0.0);
    CHECK(griewank(std::vector<double>(20, 0.0)) == 0.0);
    CHECK(std::fabs(ackley(std::vector<double>(20, 0.0))) < 1e-12);
    CHECK(mccormick({-0.54719, -1.54719}) == doctest::Approx(-1.9133).epsilon(1e-4));
    CHECK(benchmark("sphere", {1.0, 2.0}) == 5.0);
    CHECK_THROWS_AS(benchmark("nope", {1.0}), InvalidInput);
    CHECK_THROWS_AS(mccormick({1.0}), InvalidInput);
    CHECK_THROWS_AS(benchmark_space("mccormick", 5), InvalidInput);
}

TEST_CASE("pso baseline minimizes and counts evaluations") {
    SearchSpace space =
        SearchSpace::box(std::vector<double>(5, -100.0), std::vector<double>(5, 100.0));
    EbqpsoConfig config;
    config.population = 20;
    config.generations = 80;
    config.dimension = 5;
    config.seed = 8;
    OptimizationTrace trace =
        run_pso([](const std::vector<double>& x) { return sphere(x); }, space, config);
    CHECK(trace.best_fitness < 1.0);
    CHECK(trace.evaluation_count == config.population * (config.generations + 1));
}
