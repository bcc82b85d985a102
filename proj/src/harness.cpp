#include "wildseg/harness.hpp"

#include "wildseg/errors.hpp"
#include "wildseg/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace wildseg {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double parse_double(std::string_view text, std::string_view what) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw InvalidInputError("bad number '" + std::string(text) + "' in " + std::string(what));
    }
    return value;
}

struct Outcome {
    bool ok = false;
    std::int64_t error = 0;
    double mse = 0.0;
    std::string failure;
};

ChangePointSet run_method(const MethodSpec &spec, const TimeSeries &x, std::size_t M, std::uint64_t seed) {
    DetectionParams params;
    params.method = spec.method;
    params.M = M;
    params.augment = true;
    params.seed = seed;

    switch (spec.stopping) {
    case Stopping::Ssic: {
        params.zeta = 0.0;
        const SolutionPath path = detect(x, params);
        return ssic_select(x, path, spec.ssic).change_points;
    }
    case Stopping::Threshold: {
        const double sigma = mad_sigma(x);
        if (sigma == 0.0) {
            throw InvalidInputError("estimated noise scale is zero; threshold undefined");
        }
        params.zeta = default_threshold({spec.C, sigma, x.length()});
        return apply_threshold(detect(x, params), params.zeta);
    }
    case Stopping::FixedZeta:
        params.zeta = spec.zeta;
        return apply_threshold(detect(x, params), params.zeta);
    }
    return {};
}

} // namespace

double mse(std::span<const double> truth, std::span<const double> fitted) {
    if (truth.size() != fitted.size()) {
        throw InvalidInputError("mse: length mismatch (" + std::to_string(truth.size()) + " vs " +
                                std::to_string(fitted.size()) + ")");
    }
    if (truth.empty()) {
        return 0.0;
    }
    long double total = 0.0L;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const long double d = static_cast<long double>(truth[i]) - fitted[i];
        total += d * d;
    }
    return static_cast<double>(total / static_cast<long double>(truth.size()));
}

MethodSpec parse_method_spec(std::string_view text) {
    MethodSpec spec;
    spec.id = std::string(text);
    const auto dash = text.find('-');
    if (dash == std::string_view::npos) {
        throw InvalidInputError("method '" + spec.id + "' should look like wbs-ssic, wbs-c1.3 or bs-z0.5");
    }
    const std::string_view family = text.substr(0, dash);
    const std::string_view rule = text.substr(dash + 1);
    if (family == "wbs") {
        spec.method = Method::Wild;
    } else if (family == "bs") {
        spec.method = Method::BinSeg;
    } else {
        throw InvalidInputError("unknown method family '" + std::string(family) + "'");
    }

    if (rule == "ssic") {
        spec.stopping = Stopping::Ssic;
    } else if (rule.size() > 1 && rule.front() == 'c') {
        spec.stopping = Stopping::Threshold;
        spec.C = parse_double(rule.substr(1), spec.id);
        if (!(spec.C > 0.0)) {
            throw InvalidInputError("threshold constant must be positive in '" + spec.id + "'");
        }
    } else if (rule.size() > 1 && rule.front() == 'z') {
        spec.stopping = Stopping::FixedZeta;
        spec.zeta = parse_double(rule.substr(1), spec.id);
        if (!(spec.zeta >= 0.0)) {
            throw InvalidInputError("threshold must be nonnegative in '" + spec.id + "'");
        }
    } else {
        throw InvalidInputError("unknown stopping rule '" + std::string(rule) + "'");
    }
    return spec;
}

ModelSpec parse_model_spec(std::string_view text) {
    ModelSpec spec;
    spec.id = std::string(text);
    if (text.starts_with("random")) {
        SimulationConfig config;
        std::string_view rest = text.substr(6);
        if (!rest.empty()) {
            if (rest.front() != ':') {
                throw InvalidInputError("random model should look like random:navg=4:sjmp2=3:T=500:sigma=1");
            }
            rest.remove_prefix(1);
        }
        while (!rest.empty()) {
            const auto colon = rest.find(':');
            const std::string_view item = rest.substr(0, colon);
            rest = colon == std::string_view::npos ? std::string_view{} : rest.substr(colon + 1);
            const auto eq = item.find('=');
            if (eq == std::string_view::npos) {
                throw InvalidInputError("expected key=value in '" + spec.id + "'");
            }
            const std::string_view key = item.substr(0, eq);
            const double value = parse_double(item.substr(eq + 1), spec.id);
            if (key == "navg") {
                config.N_avg = value;
            } else if (key == "sjmp2") {
                config.sigma2_jmp = value;
            } else if (key == "T") {
                config.length = static_cast<Index>(value);
            } else if (key == "sigma") {
                config.noise_sigma = value;
            } else {
                throw InvalidInputError("unknown random-model key '" + std::string(key) + "'");
            }
        }
        spec.signal_name = "random";
        spec.random = config;
        random_signal(config); // validates
        return spec;
    }

    const auto at = text.find('@');
    spec.signal_name = std::string(text.substr(0, at));
    test_signal(spec.signal_name); // validates the name
    if (at != std::string_view::npos) {
        spec.noise_sigma = parse_double(text.substr(at + 1), spec.id);
        if (!(*spec.noise_sigma >= 0.0)) {
            throw InvalidInputError("noise level must be nonnegative in '" + spec.id + "'");
        }
    }
    return spec;
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view model, std::uint64_t replication,
                          std::string_view method) {
    std::uint64_t h = splitmix64(base_seed);
    h = splitmix64(h ^ fnv1a(model));
    h = splitmix64(h ^ replication);
    if (!method.empty()) {
        h = splitmix64(h ^ fnv1a(method));
    }
    return h;
}

std::size_t histogram_bin(std::int64_t error) noexcept {
    return static_cast<std::size_t>(std::clamp<std::int64_t>(error, -3, 3) + 3);
}

SummaryStats summarize(std::vector<double> values) {
    if (values.empty()) {
        throw InvalidInputError("cannot summarise an empty sample");
    }
    std::sort(values.begin(), values.end());
    const auto quantile = [&](double p) {
        const double h = p * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
    };
    SummaryStats s;
    s.min = values.front();
    s.q1 = quantile(0.25);
    s.median = quantile(0.5);
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    s.q3 = quantile(0.75);
    s.max = values.back();
    return s;
}

BenchmarkReport run_benchmark(const BenchmarkConfig &config) {
    if (config.replications < 1) {
        throw InvalidInputError("benchmark needs at least one replication");
    }
    const std::size_t n_models = config.models.size();
    const std::size_t n_methods = config.methods.size();
    const std::size_t reps = config.replications;

    // outcomes[(model * reps + r) * n_methods + method]
    std::vector<Outcome> outcomes(n_models * reps * n_methods);
    const auto jobs = static_cast<std::int64_t>(n_models * reps);

#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t job = 0; job < jobs; ++job) {
        const std::size_t mi = static_cast<std::size_t>(job) / reps;
        const std::size_t r = static_cast<std::size_t>(job) % reps;
        const ModelSpec &model = config.models[mi];
        Outcome *row = &outcomes[static_cast<std::size_t>(job) * n_methods];
        try {
            PiecewiseConstantSignal truth;
            double sigma = 0.0;
            if (model.random) {
                SimulationConfig sim = *model.random;
                sim.seed = derive_seed(config.base_seed, model.id, r, "signal");
                truth = random_signal(sim);
                sigma = sim.noise_sigma;
            } else {
                TestSignal ts = test_signal(model.signal_name);
                truth = std::move(ts.signal);
                sigma = model.noise_sigma.value_or(ts.noise_sigma);
            }
            const std::vector<double> f = truth.evaluate();
            const TimeSeries x = add_noise(f, sigma, derive_seed(config.base_seed, model.id, r));
            const auto n_true = static_cast<std::int64_t>(truth.num_change_points());

            for (std::size_t k = 0; k < n_methods; ++k) {
                const MethodSpec &method = config.methods[k];
                try {
                    const ChangePointSet cps =
                        run_method(method, x, config.M, derive_seed(config.base_seed, model.id, r, method.id));
                    row[k].ok = true;
                    row[k].error = static_cast<std::int64_t>(cps.size()) - n_true;
                    row[k].mse = mse(f, fit_means(x, cps).evaluate());
                } catch (const std::exception &e) {
                    row[k].failure = "replication " + std::to_string(r) + ": " + e.what();
                }
            }
        } catch (const std::exception &e) {
            for (std::size_t k = 0; k < n_methods; ++k) {
                row[k].failure = "replication " + std::to_string(r) + ": " + e.what();
            }
        }
    }

    BenchmarkReport report;
    report.base_seed = config.base_seed;
    report.replications = reps;
    report.M = config.M;
    for (std::size_t mi = 0; mi < n_models; ++mi) {
        for (std::size_t k = 0; k < n_methods; ++k) {
            CellReport cell;
            cell.model = config.models[mi].id;
            cell.method = config.methods[k].id;
            long double mse_total = 0.0L;
            std::vector<double> errors;
            for (std::size_t r = 0; r < reps; ++r) {
                const Outcome &o = outcomes[(mi * reps + r) * n_methods + k];
                if (!o.ok) {
                    ++cell.failed;
                    cell.failures.push_back(o.failure);
                    continue;
                }
                ++cell.completed;
                ++cell.histogram[histogram_bin(o.error)];
                cell.errors.push_back(o.error);
                errors.push_back(static_cast<double>(o.error));
                mse_total += o.mse;
            }
            if (cell.completed > 0) {
                cell.summary = summarize(errors);
                cell.mean_mse = static_cast<double>(mse_total / static_cast<long double>(cell.completed));
            }
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

std::string distribution_csv(const BenchmarkReport &report) {
    std::string out = "model,method,bin_le_m3,bin_m2,bin_m1,bin_0,bin_p1,bin_p2,bin_ge3,mean_mse\n";
    for (const CellReport &cell : report.cells) {
        out += cell.model + "," + cell.method;
        for (std::size_t count : cell.histogram) {
            out += "," + std::to_string(count);
        }
        out += "," + (cell.completed > 0 ? format_number(cell.mean_mse) : std::string("NA")) + "\n";
    }
    return out;
}

std::string summary_csv(const BenchmarkReport &report) {
    std::string out = "model,method,min,q1,median,mean,q3,max\n";
    for (const CellReport &cell : report.cells) {
        out += cell.model + "," + cell.method;
        const SummaryStats &s = cell.summary;
        for (double v : {s.min, s.q1, s.median, s.mean, s.q3, s.max}) {
            out += "," + (cell.completed > 0 ? format_number(v) : std::string("NA"));
        }
        out += "\n";
    }
    return out;
}

std::string report_json(const BenchmarkReport &report) {
    nlohmann::ordered_json j;
    j["metadata"] = {{"base_seed", report.base_seed},
                     {"replications", report.replications},
                     {"M", report.M},
                     {"shared_noise", report.shared_noise}};
    static constexpr std::array<const char *, 7> kBins{"bin_le_m3", "bin_m2", "bin_m1", "bin_0",
                                                       "bin_p1",    "bin_p2", "bin_ge3"};
    auto distribution = nlohmann::ordered_json::array();
    auto summary = nlohmann::ordered_json::array();
    for (const CellReport &cell : report.cells) {
        nlohmann::ordered_json row{{"model", cell.model}, {"method", cell.method}};
        for (std::size_t i = 0; i < kBins.size(); ++i) {
            row[kBins[i]] = cell.histogram[i];
        }
        row["mean_mse"] = cell.completed > 0 ? nlohmann::ordered_json(cell.mean_mse) : nlohmann::ordered_json(nullptr);
        row["completed"] = cell.completed;
        row["failed"] = cell.failed;
        row["failures"] = cell.failures;
        distribution.push_back(std::move(row));

        nlohmann::ordered_json stats{{"model", cell.model}, {"method", cell.method}};
        const SummaryStats &s = cell.summary;
        const std::array<std::pair<const char *, double>, 6> fields{
            {{"min", s.min}, {"q1", s.q1}, {"median", s.median}, {"mean", s.mean}, {"q3", s.q3}, {"max", s.max}}};
        for (const auto &[name, value] : fields) {
            stats[name] = cell.completed > 0 ? nlohmann::ordered_json(value) : nlohmann::ordered_json(nullptr);
        }
        summary.push_back(std::move(stats));
    }
    j["distribution"] = std::move(distribution);
    j["summary"] = std::move(summary);
    return j.dump(2) + "\n";
}

} // namespace wildseg
