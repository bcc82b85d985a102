#include "doctest.h"

#include "test_support.hpp"

#include "wildseg/errors.hpp"
#include "wildseg/segmentation.hpp"
#include "wildseg/signals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

using namespace wildseg;

namespace {

bool same_path(const SolutionPath &a, const SolutionPath &b) {
    if (a.nodes.size() != b.nodes.size() || !(a.fingerprint == b.fingerprint)) {
        return false;
    }
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        const PathNode &x = a.nodes[i];
        const PathNode &y = b.nodes[i];
        if (x.location != y.location || x.magnitude != y.magnitude || !(x.generating_interval == y.generating_interval) ||
            !(x.scope == y.scope) || x.survival_threshold != y.survival_threshold || x.parent != y.parent ||
            x.order != y.order) {
            return false;
        }
    }
    return true;
}

SolutionPath hand_path(Index length, const std::vector<std::pair<Index, double>> &nodes) {
    SolutionPath path;
    path.series_length = length;
    for (const auto &[loc, survival] : nodes) {
        PathNode n;
        n.location = loc;
        n.magnitude = survival;
        n.survival_threshold = survival;
        n.order = path.nodes.size();
        path.nodes.push_back(n);
    }
    return path;
}

std::vector<double> sorted_survivals(const SolutionPath &path) {
    std::vector<double> out;
    for (const PathNode &n : path.nodes) {
        out.push_back(n.survival_threshold);
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

} // namespace

TEST_CASE("draw_intervals basics") {
    const IntervalSet tiny = draw_intervals(2, 3, 99);
    REQUIRE(tiny.size() == 3);
    for (const Interval &iv : tiny.intervals) {
        CHECK(iv == Interval{1, 2});
    }

    const IntervalSet a = draw_intervals(100, 5000, 17);
    const IntervalSet b = draw_intervals(100, 5000, 17);
    REQUIRE(a.size() == 5000);
    CHECK(a.intervals == b.intervals);
    CHECK(a.intervals != draw_intervals(100, 5000, 18).intervals);
    for (const Interval &iv : a.intervals) {
        CHECK(1 <= iv.s);
        CHECK(iv.s < iv.e);
        CHECK(iv.e <= 100);
    }
    CHECK(draw_intervals(10, 0, 1).size() == 0);
    CHECK_THROWS_AS(draw_intervals(1, 5, 1), InvalidInputError);
}

TEST_CASE("draw_intervals is uniform over ordered pairs") {
    // Bin s and e into a 10 x 10 grid; exact cell probabilities come from
    // enumerating every pair s < e.
    constexpr Index T = 1000;
    constexpr int bins = 10;
    const auto bin = [](Index t) { return static_cast<int>((t - 1) * bins / T); };

    std::map<std::pair<int, int>, double> expected;
    double pairs = 0;
    for (Index s = 1; s <= T; ++s) {
        for (Index e = s + 1; e <= T; ++e) {
            expected[{bin(s), bin(e)}] += 1.0;
            pairs += 1.0;
        }
    }
    const std::size_t M = 100000;
    std::map<std::pair<int, int>, double> observed;
    for (const Interval &iv : draw_intervals(T, M, 424242).intervals) {
        observed[{bin(iv.s), bin(iv.e)}] += 1.0;
    }
    double chi2 = 0.0;
    for (const auto &[cell, count] : expected) {
        const double e = count / pairs * static_cast<double>(M);
        const double o = observed[cell];
        chi2 += (o - e) * (o - e) / e;
    }
    REQUIRE(expected.size() == 55);
    // 0.999 quantile of chi-square with 54 degrees of freedom.
    CHECK(chi2 < 91.8718);
}

TEST_CASE("recommended_M") {
    CHECK(recommended_M(1000, 1000) == 63);
    CHECK(recommended_M(1000, 100) == 8290);
    for (Index t : {100, 1000, 10000, 100000}) {
        CHECK(recommended_M(t, t) == static_cast<std::int64_t>(std::ceil(9.0 * std::log(static_cast<double>(t)))));
    }
    CHECK_THROWS_AS(recommended_M(100, 1), InvalidInputError);
    CHECK_THROWS_AS(recommended_M(100, 101), InvalidInputError);
}

TEST_CASE("binseg examples") {
    const TimeSeries step({0, 0, 0, 1, 1, 1});
    const SolutionPath path = binseg(step, 0.5);
    CHECK(apply_threshold(path, 0.5).locations() == std::vector<Index>{3});
    REQUIRE(path.nodes.size() == 1);
    CHECK(path.nodes[0].magnitude == doctest::Approx(3.0 / std::sqrt(6.0)));

    const TimeSeries flat(std::vector<double>(20, 4.0));
    CHECK(binseg(flat, 1e-12).nodes.empty());

    const PiecewiseConstantSignal blocks = test_signal("blocks").signal;
    const SolutionPath bp = binseg(testing::noiseless(blocks), 1e-6);
    CHECK(apply_threshold(bp, 1e-6).locations() == blocks.change_points());

    CHECK_THROWS_AS(binseg(TimeSeries({1.0}), 0.0), InvalidInputError);
    CHECK_THROWS_AS(binseg(step, -1.0), InvalidInputError);
}

TEST_CASE("wbs reduces to binseg with M = 0 and augmentation") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const TimeSeries x = testing::noisy_random_signal(rng, 50 + static_cast<Index>(rng() % 300));
        const double zeta = std::uniform_real_distribution<double>(0.0, 4.0)(rng);
        DetectionParams params;
        params.M = 0;
        params.augment = true;
        params.zeta = zeta;
        const SolutionPath w = wbs(x, params, draw_intervals(x.length(), 0, 1));
        const SolutionPath b = binseg(x, zeta);
        REQUIRE(w.nodes.size() == b.nodes.size());
        for (std::size_t i = 0; i < w.nodes.size(); ++i) {
            CHECK(w.nodes[i].location == b.nodes[i].location);
            CHECK(w.nodes[i].magnitude == b.nodes[i].magnitude);
        }
        CHECK(apply_threshold(w, zeta) == apply_threshold(b, zeta));
    }
}

TEST_CASE("wbs examples") {
    const TimeSeries flat(std::vector<double>(100, -1.5));
    DetectionParams params;
    params.zeta = 1e-12;
    CHECK(wbs(flat, params, draw_intervals(100, 500, 3)).nodes.empty());

    const PiecewiseConstantSignal teeth = test_signal("teeth10").signal;
    params.M = 5000;
    params.zeta = 0.2;
    const TimeSeries x = testing::noiseless(teeth);
    const SolutionPath path = wbs(x, params, draw_intervals(x.length(), 5000, 2013));
    CHECK(apply_threshold(path, 0.2).locations() == teeth.change_points());
    CHECK(teeth.change_points().size() == 13);
}

TEST_CASE("wbs input validation") {
    const TimeSeries x({1, 2, 3, 4, 5});
    DetectionParams params;
    params.augment = false;
    CHECK_THROWS_AS(wbs(x, params, draw_intervals(5, 0, 0)), InvalidInputError);
    params.augment = true;
    CHECK_THROWS_AS(wbs(x, params, draw_intervals(6, 10, 0)), InvalidInputError);
    CHECK_THROWS_AS(wbs(TimeSeries({1.0}), params, IntervalSet{}), InvalidInputError);
}

TEST_CASE("parallel kernel matches the serial reference bit for bit") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const TimeSeries x = testing::noisy_random_signal(rng, 30 + static_cast<Index>(rng() % 250));
        for (bool augment : {true, false}) {
            DetectionParams params;
            params.augment = augment;
            params.zeta = trial % 3 == 0 ? 0.0 : 1.5;
            const IntervalSet draws = draw_intervals(x.length(), 1 + rng() % 400, rng());
            CHECK(same_path(wbs(x, params, draws), reference::wbs(x, params, draws)));
        }
    }
}

TEST_CASE("thresholding the path equals direct recursion, and models are nested") {
    std::mt19937_64 rng(1234);
    int violations = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const TimeSeries x = testing::noisy_random_signal(rng, 40 + static_cast<Index>(rng() % 200));
        DetectionParams params;
        params.augment = trial % 2 == 0;
        const IntervalSet draws = draw_intervals(x.length(), 200, rng());
        params.zeta = 0.0;
        const SolutionPath full = wbs(x, params, draws);

        std::vector<double> zetas;
        for (int i = 0; i < 10; ++i) {
            zetas.push_back(std::uniform_real_distribution<double>(0.0, 6.0)(rng));
        }
        std::sort(zetas.begin(), zetas.end());
        ChangePointSet previous;
        for (std::size_t i = 0; i < zetas.size(); ++i) {
            params.zeta = zetas[i];
            const ChangePointSet thresholded = apply_threshold(full, zetas[i]);
            if (!(thresholded == apply_threshold(wbs(x, params, draws), zetas[i]))) {
                ++violations;
            }
            if (i > 0 && !thresholded.is_subset_of(previous)) {
                ++violations;
            }
            previous = thresholded;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("without augmentation each threshold crossing removes exactly one change-point") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const TimeSeries x = testing::noisy_random_signal(rng, 200);
        DetectionParams params;
        params.augment = false;
        const SolutionPath path = wbs(x, params, draw_intervals(x.length(), 2000, rng()));
        const std::vector<double> survivals = sorted_survivals(path);
        for (std::size_t k = 0; k + 1 < survivals.size(); ++k) {
            REQUIRE(survivals[k] > survivals[k + 1]);
            const double mid = 0.5 * (survivals[k] + survivals[k + 1]);
            CHECK(apply_threshold(path, mid).size() == k + 1);
        }
    }
}

TEST_CASE("path structure: survival thresholds, scope containment, partitions") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const TimeSeries x = testing::noisy_random_signal(rng, 150);
        DetectionParams params;
        const SolutionPath path = wbs(x, params, draw_intervals(x.length(), 300, rng()));
        std::vector<Index> locations;
        for (const PathNode &node : path.nodes) {
            locations.push_back(node.location);
            CHECK(node.scope.s <= node.location);
            CHECK(node.location < node.scope.e);
            CHECK(node.scope.contains(node.generating_interval));
            CHECK(node.survival_threshold <= node.magnitude);
            if (node.parent) {
                const PathNode &parent = path.nodes[*node.parent];
                CHECK(node.survival_threshold == std::min(node.magnitude, parent.survival_threshold));
                const bool left = node.scope == Interval{parent.scope.s, parent.location};
                const bool right = node.scope == Interval{parent.location + 1, parent.scope.e};
                CHECK((left || right));
                CHECK(*node.parent < node.order);
            } else {
                CHECK(node.scope == Interval{1, x.length()});
                CHECK(node.survival_threshold == node.magnitude);
            }
        }
        std::sort(locations.begin(), locations.end());
        CHECK(std::adjacent_find(locations.begin(), locations.end()) == locations.end());
    }
}

TEST_CASE("detected locations are invariant under positive affine maps") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const TimeSeries x = testing::noisy_random_signal(rng, 120);
        const std::uint64_t seed = rng();
        for (const auto &[a, c] : {std::pair{2.0, 0.0}, std::pair{0.5, 10.0}, std::pair{3.7, -2.0}}) {
            std::vector<double> y(x.values().begin(), x.values().end());
            for (double &v : y) {
                v = a * v + c;
            }
            DetectionParams params;
            params.M = 300;
            params.seed = seed;
            params.zeta = 1.0;
            const ChangePointSet base = apply_threshold(detect(x, params), 1.0);
            params.zeta = a;
            CHECK(apply_threshold(detect(TimeSeries(y), params), a) == base);
        }
    }
}

TEST_CASE("detection is deterministic") {
    std::mt19937_64 rng(1);
    const TimeSeries x = testing::noisy_random_signal(rng, 500);
    DetectionParams params;
    params.seed = 42;
    params.M = 1000;
    CHECK(same_path(detect(x, params), detect(x, params)));
}

TEST_CASE("apply_threshold extremes") {
    std::mt19937_64 rng(2);
    const TimeSeries x = testing::noisy_random_signal(rng, 100);
    const SolutionPath path = detect(x, DetectionParams{Method::Wild, 200, true, 4, 0.0});
    CHECK(apply_threshold(path, std::numeric_limits<double>::infinity()).empty());
    CHECK(apply_threshold(path, 0.0).size() == path.nodes.size());
    CHECK_THROWS_AS(apply_threshold(path, -0.1), InvalidInputError);
}

TEST_CASE("solution path prefixes") {
    const SolutionPath path = hand_path(100, {{40, 5.0}, {10, 3.0}, {70, 1.0}});
    const auto models = solution_path_prefixes(path, 2);
    REQUIRE(models.size() == 3);
    CHECK(models[0].empty());
    CHECK(models[1].locations() == std::vector<Index>{40});
    CHECK(models[2].locations() == std::vector<Index>{10, 40});

    const auto none = solution_path_prefixes(path, 0);
    REQUIRE(none.size() == 1);
    CHECK(none[0].empty());
    CHECK(solution_path_prefixes(path, 10).size() == 4);

    // Ties in survival threshold are broken by detection order.
    const SolutionPath tied = hand_path(100, {{50, 2.0}, {20, 2.0}, {80, 1.0}});
    CHECK(solution_path_prefixes(tied, 1)[1].locations() == std::vector<Index>{50});
}

TEST_CASE("prefixes coincide with thresholded models between consecutive survival thresholds") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const TimeSeries x = testing::noisy_random_signal(rng, 200);
        const SolutionPath path = detect(x, DetectionParams{Method::Wild, 500, true, rng(), 0.0});
        const auto models = solution_path_prefixes(path, 15);
        const std::vector<double> survivals = sorted_survivals(path);
        for (std::size_t k = 1; k + 1 < models.size(); ++k) {
            CHECK(models[k - 1].is_subset_of(models[k]));
            CHECK(models[k].size() == k);
            if (survivals[k - 1] > survivals[k]) {
                CHECK(models[k] == apply_threshold(path, 0.5 * (survivals[k - 1] + survivals[k])));
            }
        }
    }
}

TEST_CASE("time-threshold map") {
    SolutionPath one = hand_path(10, {{4, 3.83}});
    const auto lines = time_threshold_map(one, 0.0, 5.0);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].location == 4);
    CHECK(lines[0].zeta_low == 0.0);
    CHECK(lines[0].zeta_high == 3.83);
    CHECK(time_threshold_map(hand_path(10, {{4, 7.0}}), 0.0, 5.0)[0].zeta_high == 5.0);
    CHECK(time_threshold_map(SolutionPath{}, 0.0, 5.0).empty());
    CHECK_THROWS_AS(time_threshold_map(one, 2.0, 2.0), InvalidInputError);

    std::mt19937_64 rng(12);
    const TimeSeries x = testing::noisy_random_signal(rng, 300);
    const SolutionPath path = detect(x, DetectionParams{Method::Wild, 1000, true, 9, 0.0});
    const auto map = time_threshold_map(path, 0.0, 5.0);
    CHECK(std::is_sorted(map.begin(), map.end(),
                         [](const ThresholdLine &a, const ThresholdLine &b) { return a.location < b.location; }));
    for (double zeta = 0.0; zeta < 5.0; zeta += 0.173) {
        const auto crossing = std::count_if(map.begin(), map.end(), [&](const ThresholdLine &l) {
            return l.zeta_low <= zeta && l.zeta_high > zeta;
        });
        CHECK(static_cast<std::size_t>(crossing) == apply_threshold(path, zeta).size());
    }
}

TEST_CASE("refine_locations") {
    const TimeSeries flat(std::vector<double>(10, 1.0));
    CHECK(refine_locations(flat, ChangePointSet{}).locations.empty());

    std::vector<double> step(100, 0.0);
    std::fill(step.begin() + 50, step.end(), 1.0);
    const TimeSeries x(step);
    const RefinedLocations r = refine_locations(x, ChangePointSet::make({52}, 100));
    CHECK(r.locations.locations() == std::vector<Index>{50});
    CHECK(r.collisions.empty());

    for (const std::string &name : test_signal_names()) {
        const PiecewiseConstantSignal f = test_signal(name).signal;
        const RefinedLocations fixed = refine_locations(testing::noiseless(f), f.change_point_set());
        CHECK_MESSAGE(fixed.locations.locations() == f.change_points(), name);
    }

    // Adjacent refinement windows share only their boundary, so refined
    // locations stay distinct and keep their order.
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 50; ++trial) {
        const TimeSeries y = testing::noisy_random_signal(rng, 120);
        std::vector<Index> guess;
        for (Index t = 1 + static_cast<Index>(rng() % 7); t < 120; t += 3 + static_cast<Index>(rng() % 15)) {
            guess.push_back(t);
        }
        const RefinedLocations out = refine_locations(y, ChangePointSet::make(guess, 120));
        CHECK(out.locations.size() == guess.size());
        CHECK(out.collisions.empty());
    }
}

TEST_CASE("fit_means") {
    const TimeSeries x({0, 0, 2, 2});
    const PiecewiseConstantSignal none = fit_means(x, ChangePointSet{});
    CHECK(none.values() == std::vector<double>{1.0});
    const PiecewiseConstantSignal two = fit_means(x, ChangePointSet::make({2}, 4));
    CHECK(two.values() == std::vector<double>{0.0, 2.0});
    CHECK(two.evaluate() == std::vector<double>{0, 0, 2, 2});

    const PiecewiseConstantSignal fms = test_signal("fms").signal;
    CHECK(fit_means(testing::noiseless(fms), fms.change_point_set()).evaluate() == fms.evaluate());
}
