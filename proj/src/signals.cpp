#include "wildseg/signals.hpp"

#include "wildseg/errors.hpp"
#include "wildseg/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace wildseg {

namespace {

std::vector<Index> every_ten(Index first, Index last) {
    std::vector<Index> out;
    for (Index t = first; t <= last; t += 10) {
        out.push_back(t);
    }
    return out;
}

} // namespace

const std::vector<std::string> &test_signal_names() {
    static const std::vector<std::string> names{"blocks", "fms", "mix", "teeth10", "stairs10"};
    return names;
}

TestSignal test_signal(std::string_view name) {
    if (name == "blocks") {
        return {"blocks",
                PiecewiseConstantSignal(2048, {205, 267, 308, 472, 512, 820, 902, 1332, 1557, 1598, 1659},
                                        {0, 14.64, -3.66, 7.32, -7.32, 10.98, -4.39, 3.29, 19.03, 7.68, 15.37, 0}),
                10.0};
    }
    if (name == "fms") {
        return {"fms",
                PiecewiseConstantSignal(497, {139, 226, 243, 300, 309, 333},
                                        {-0.18, 0.08, 1.07, -0.53, 0.16, -0.69, -0.16}),
                0.3};
    }
    if (name == "mix") {
        return {"mix",
                PiecewiseConstantSignal(560, {11, 21, 41, 61, 91, 121, 161, 201, 251, 301, 361, 421, 491},
                                        {7, -7, 6, -6, 5, -5, 4, -4, 3, -3, 2, -2, 1, -1}),
                4.0};
    }
    if (name == "teeth10") {
        std::vector<double> levels(14);
        for (std::size_t i = 0; i < levels.size(); ++i) {
            levels[i] = static_cast<double>(i % 2);
        }
        return {"teeth10", PiecewiseConstantSignal(140, every_ten(11, 131), std::move(levels)), 0.4};
    }
    if (name == "stairs10") {
        std::vector<double> levels(15);
        for (std::size_t i = 0; i < levels.size(); ++i) {
            levels[i] = static_cast<double>(i + 1);
        }
        return {"stairs10", PiecewiseConstantSignal(150, every_ten(11, 141), std::move(levels)), 0.3};
    }
    throw InvalidInputError("unknown test signal '" + std::string(name) + "'");
}

PiecewiseConstantSignal demo_signal() {
    return PiecewiseConstantSignal(300, {130, 150, 170}, {0.0, 1.0, -1.0, 0.0});
}

PiecewiseConstantSignal random_signal(const SimulationConfig &config) {
    if (!(config.N_avg >= 0.0) || !(config.sigma2_jmp > 0.0) || !(config.noise_sigma >= 0.0) || config.length < 2) {
        throw InvalidInputError("simulation needs N_avg >= 0, sigma2_jmp > 0, noise_sigma >= 0 and T >= 2");
    }
    std::mt19937_64 engine(config.seed);

    Index count = 0;
    if (config.N_avg > 0.0) {
        count = std::poisson_distribution<Index>(config.N_avg)(engine);
    }
    count = std::min(count, config.length - 1);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::set<Index> locations;
    while (static_cast<Index>(locations.size()) < count) {
        const auto loc = static_cast<Index>(std::floor(unit(engine) * static_cast<double>(config.length)));
        if (loc >= 1 && loc <= config.length - 1) {
            locations.insert(loc);
        }
    }

    std::normal_distribution<double> jump(0.0, std::sqrt(config.sigma2_jmp));
    std::vector<double> levels{0.0};
    for (Index i = 0; i < count; ++i) {
        levels.push_back(levels.back() + jump(engine));
    }
    return PiecewiseConstantSignal(config.length, {locations.begin(), locations.end()}, std::move(levels));
}

std::vector<double> linear_trend_signal(const TrendSignal &spec) {
    if (spec.length < 1 || spec.pieces.empty() || spec.pieces.front().start != 1) {
        throw InvalidInputError("trend pieces must start at index 1");
    }
    for (std::size_t i = 1; i < spec.pieces.size(); ++i) {
        if (spec.pieces[i].start <= spec.pieces[i - 1].start || spec.pieces[i].start > spec.length) {
            throw InvalidInputError("trend piece starts must increase within [1, T]");
        }
    }
    std::vector<double> f(static_cast<std::size_t>(spec.length));
    std::size_t piece = 0;
    for (Index t = 1; t <= spec.length; ++t) {
        while (piece + 1 < spec.pieces.size() && spec.pieces[piece + 1].start <= t) {
            ++piece;
        }
        const TrendPiece &p = spec.pieces[piece];
        f[static_cast<std::size_t>(t - 1)] = p.intercept + p.slope * static_cast<double>(t - p.start);
    }
    return f;
}

TimeSeries add_noise(std::span<const double> f, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) {
        throw InvalidInputError("noise standard deviation must be nonnegative");
    }
    std::vector<double> x(f.begin(), f.end());
    if (sigma > 0.0) {
        std::mt19937_64 engine(seed);
        std::normal_distribution<double> z(0.0, 1.0);
        for (double &v : x) {
            v += sigma * z(engine);
        }
    }
    return TimeSeries(std::move(x));
}

std::string to_csv(std::span<const double> values) {
    std::string out;
    out.reserve(values.size() * 8);
    for (double v : values) {
        out += format_number(v);
        out += '\n';
    }
    return out;
}

std::string to_descriptor_json(const PiecewiseConstantSignal &signal, double sigma) {
    nlohmann::ordered_json j;
    j["T"] = signal.length();
    j["change_points"] = signal.change_points();
    j["values"] = signal.values();
    j["sigma"] = sigma;
    return j.dump(2) + "\n";
}

} // namespace wildseg
