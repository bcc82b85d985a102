#include "wildseg/cli.hpp"

#include "wildseg/errors.hpp"
#include "wildseg/io.hpp"
#include "wildseg/signals.hpp"

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace wildseg::cli {

namespace {

using json = nlohmann::ordered_json;

json optional_number(const std::optional<double> &v) {
    return v ? json(*v) : json(nullptr);
}

json interval_json(const Interval &iv) {
    return json::array({iv.s, iv.e});
}

std::vector<std::string> split_list(const std::vector<std::string> &items) {
    std::vector<std::string> out;
    for (const std::string &item : items) {
        std::size_t start = 0;
        while (start <= item.size()) {
            const std::size_t comma = item.find(',', start);
            const std::string token = item.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            if (!token.empty()) {
                out.push_back(token);
            }
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
    }
    return out;
}

std::uint64_t default_seed() {
    const char *env = std::getenv("WILDSEG_SEED");
    if (env == nullptr || *env == '\0') {
        return 0;
    }
    std::uint64_t seed = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw UsageError("WILDSEG_SEED must be an unsigned 64-bit integer, got '" + std::string(text) + "'");
    }
    return seed;
}

} // namespace

DetectOutput run_detect(const TimeSeries &x, const DetectOptions &options) {
    if (x.length() < 2) {
        throw InvalidInputError("detection needs at least 2 observations, got " + std::to_string(x.length()));
    }
    DetectOutput out;
    out.length = x.length();
    out.options = options;

    if (options.sigma) {
        out.sigma_hat = *options.sigma;
    } else if (x.length() >= 3) {
        out.sigma_hat = mad_sigma(x);
    }

    DetectionParams params;
    params.method = options.method;
    params.M = options.M;
    params.augment = options.augment;
    params.seed = options.seed;

    ChangePointSet cps;
    if (options.stopping == Stopping::Threshold) {
        if (!out.sigma_hat) {
            throw InvalidInputError("threshold stopping needs a noise scale: supply --sigma or at least 3 observations");
        }
        if (*out.sigma_hat == 0.0) {
            throw InvalidInputError("estimated noise scale is zero (is the input constant or a pure ramp?); "
                                    "threshold stopping would accept every split. Supply --sigma or use --stopping ssic");
        }
        params.zeta = default_threshold({options.C, *out.sigma_hat, x.length()});
        out.zeta = params.zeta;
        out.path = detect(x, params);
        cps = apply_threshold(out.path, params.zeta);
    } else if (options.stopping == Stopping::Ssic) {
        params.zeta = 0.0;
        out.path = detect(x, params);
        out.selection = ssic_select(x, out.path, options.ssic);
        cps = out.selection->change_points;
        if (out.selection->boundary_hit) {
            out.warnings.push_back("sSIC selected the largest model considered (K = " +
                                   std::to_string(options.ssic.K) + "); consider raising --K");
        }
    } else {
        throw InvalidInputError("unsupported stopping rule");
    }

    if (options.refine) {
        RefinedLocations refined = refine_locations(x, cps);
        for (Index loc : refined.collisions) {
            out.warnings.push_back("refinement collision at " + std::to_string(loc) + "; estimates merged");
        }
        cps = std::move(refined.locations);
    }

    out.change_points = cps.locations();
    out.fitted_means = fit_means(x, cps).values();
    return out;
}

std::string to_json(const DetectOutput &output) {
    const DetectOptions &o = output.options;
    const bool wild = o.method == Method::Wild;
    const bool threshold = o.stopping == Stopping::Threshold;

    json j;
    j["schema_version"] = kSchemaVersion;
    j["T"] = output.length;
    j["change_points"] = output.change_points;
    j["fitted_means"] = output.fitted_means;
    j["sigma_hat"] = optional_number(output.sigma_hat);
    j["method"] = {
        {"method", std::string(to_string(o.method))},
        {"stopping", threshold ? "threshold" : "ssic"},
        {"C", threshold ? json(o.C) : json(nullptr)},
        {"alpha", threshold ? json(nullptr) : json(o.ssic.alpha)},
        {"K", threshold ? json(nullptr) : json(o.ssic.K)},
        {"M", wild ? json(o.M) : json(nullptr)},
        {"seed", wild ? json(o.seed) : json(nullptr)},
        {"augment", wild ? json(o.augment) : json(nullptr)},
        {"refine", o.refine},
        {"zeta", optional_number(output.zeta)},
    };

    if (output.selection) {
        json scores = json::array();
        for (const ModelScore &s : output.selection->scores) {
            scores.push_back({{"k", s.k},
                              {"sigma2_hat", s.sigma2_hat},
                              {"ssic", std::isfinite(s.ssic) ? json(s.ssic) : json(nullptr)}});
        }
        j["selection"] = {{"k_hat", output.selection->k_hat},
                          {"boundary_hit", output.selection->boundary_hit},
                          {"scores", std::move(scores)}};
    } else {
        j["selection"] = nullptr;
    }

    json nodes = json::array();
    for (const PathNode &node : output.path.nodes) {
        nodes.push_back({{"order", node.order},
                         {"location", node.location},
                         {"magnitude", node.magnitude},
                         {"survival_threshold", node.survival_threshold},
                         {"generating_interval", interval_json(node.generating_interval)},
                         {"scope", interval_json(node.scope)},
                         {"parent", node.parent ? json(*node.parent) : json(nullptr)}});
    }
    j["solution_path"] = std::move(nodes);
    j["warnings"] = output.warnings;
    return j.dump(2) + "\n";
}

std::vector<ThresholdLine> run_ttmap(const TimeSeries &x, const TtmapOptions &options) {
    DetectionParams params;
    params.method = Method::Wild;
    params.M = options.M;
    params.augment = options.augment;
    params.seed = options.seed;
    params.zeta = 0.0;
    return time_threshold_map(detect(x, params), options.zeta_min, options.zeta_max);
}

std::string ttmap_csv(const std::vector<ThresholdLine> &lines) {
    std::string out = "location,zeta_low,zeta_high\n";
    for (const ThresholdLine &line : lines) {
        out += std::to_string(line.location) + "," + format_number(line.zeta_low) + "," +
               format_number(line.zeta_high) + "\n";
    }
    return out;
}

int main(int argc, char **argv) {
    CLI::App app{"Wild and standard binary segmentation for change-points in piecewise-constant signals.\n"
                 "Change-point b means segments ..b | b+1.. (1-based)."};
    app.require_subcommand(1);

    // detect
    auto *detect_cmd = app.add_subcommand("detect", "Detect change-points in a single-column CSV series");
    std::string detect_input;
    std::string detect_method = "wbs";
    std::string detect_stopping = "ssic";
    DetectOptions dopt;
    std::string detect_out;
    detect_cmd->add_option("input", detect_input, "Input CSV (one value per line)")->required();
    detect_cmd->add_option("--method", detect_method, "wbs or bs")->check(CLI::IsMember({"wbs", "bs"}));
    detect_cmd->add_option("--stopping", detect_stopping, "threshold or ssic")
        ->check(CLI::IsMember({"threshold", "ssic"}));
    auto *c_opt = detect_cmd->add_option("--C", dopt.C, "Threshold constant (threshold stopping)")
                      ->check(CLI::PositiveNumber);
    auto *m_opt = detect_cmd->add_option("--M", dopt.M, "Number of random intervals (wbs)");
    auto *seed_opt = detect_cmd->add_option("--seed", dopt.seed, "Interval-draw seed (default $WILDSEG_SEED or 0)");
    auto *augment_opt = detect_cmd->add_option("--augment", dopt.augment, "Include the whole scope as a candidate");
    auto *alpha_opt = detect_cmd->add_option("--alpha", dopt.ssic.alpha, "sSIC penalty exponent (> 1)");
    auto *k_opt = detect_cmd->add_option("--K", dopt.ssic.K, "Largest model size for sSIC");
    auto *sigma_opt = detect_cmd->add_option("--sigma", "Noise standard deviation (overrides the MAD estimate)")
                          ->check(CLI::NonNegativeNumber);
    detect_cmd->add_option("--refine", dopt.refine, "Re-estimate locations on mid-point intervals");
    detect_cmd->add_option("--out", detect_out, "Output JSON path (default stdout)");

    // simulate
    auto *sim_cmd = app.add_subcommand("simulate", "Write a noisy test signal as CSV plus its truth as JSON");
    std::string sim_model;
    std::uint64_t sim_seed = 0;
    double sim_navg = 4.0;
    double sim_sjmp2 = 1.0;
    Index sim_length = 500;
    std::string sim_out = "-";
    std::string sim_truth;
    sim_cmd->add_option("--model", sim_model, "blocks, fms, mix, teeth10, stairs10 or random")
        ->required()
        ->check(CLI::IsMember({"blocks", "fms", "mix", "teeth10", "stairs10", "random"}));
    auto *sim_sigma_opt =
        sim_cmd->add_option("--sigma", "Noise standard deviation (default: the model's own)")
            ->check(CLI::NonNegativeNumber);
    auto *sim_seed_opt = sim_cmd->add_option("--seed", sim_seed, "Noise seed");
    auto *navg_opt = sim_cmd->add_option("--navg", sim_navg, "Mean number of change-points (random)");
    auto *sjmp_opt = sim_cmd->add_option("--sjmp2", sim_sjmp2, "Jump-height variance (random)");
    auto *len_opt = sim_cmd->add_option("--T", sim_length, "Length (random)");
    sim_cmd->add_option("--out", sim_out, "Series CSV path (default stdout)");
    sim_cmd->add_option("--truth", sim_truth, "Truth JSON path");

    // bench
    auto *bench_cmd = app.add_subcommand("bench", "Monte-Carlo benchmark of detection methods on test signals");
    std::vector<std::string> bench_models{"blocks", "fms", "mix", "teeth10", "stairs10"};
    std::vector<std::string> bench_methods{"wbs-c1", "wbs-c1.3", "wbs-ssic", "bs-c1", "bs-c1.3"};
    BenchmarkConfig bench;
    std::string bench_dir = ".";
    bench_cmd->add_option("--models", bench_models, "Comma-separated models (name, name@sigma, random:navg=..:..)");
    bench_cmd->add_option("--methods", bench_methods, "Comma-separated methods (wbs-ssic, wbs-c1.3, bs-c1, wbs-z0.2)");
    bench_cmd->add_option("--reps", bench.replications, "Replications per model")->check(CLI::PositiveNumber);
    auto *bench_seed_opt = bench_cmd->add_option("--seed", bench.base_seed, "Base seed");
    bench_cmd->add_option("--M", bench.M, "Random intervals per WBS run");
    bench_cmd->add_option("--out-dir", bench_dir, "Directory for bench_distribution.csv, bench_summary.csv, "
                                                  "bench_report.json");

    // ttmap
    auto *tt_cmd = app.add_subcommand("ttmap", "Time-threshold map of a WBS solution path as CSV");
    std::string tt_input;
    std::string tt_out;
    TtmapOptions topt;
    tt_cmd->add_option("input", tt_input, "Input CSV")->required();
    tt_cmd->add_option("--zeta-min", topt.zeta_min, "Lowest threshold shown")->check(CLI::NonNegativeNumber);
    tt_cmd->add_option("--zeta-max", topt.zeta_max, "Highest threshold shown");
    tt_cmd->add_option("--M", topt.M, "Number of random intervals");
    auto *tt_seed_opt = tt_cmd->add_option("--seed", topt.seed, "Interval-draw seed");
    tt_cmd->add_option("--augment", topt.augment, "Include the whole scope as a candidate");
    tt_cmd->add_option("--out", tt_out, "Output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << "wildseg: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*detect_cmd) {
            dopt.method = detect_method == "bs" ? Method::BinSeg : Method::Wild;
            dopt.stopping = detect_stopping == "threshold" ? Stopping::Threshold : Stopping::Ssic;
            if (dopt.stopping == Stopping::Ssic && c_opt->count() > 0) {
                throw UsageError("--C only applies to --stopping threshold");
            }
            if (dopt.stopping == Stopping::Threshold && (alpha_opt->count() > 0 || k_opt->count() > 0)) {
                throw UsageError("--alpha and --K only apply to --stopping ssic");
            }
            if (dopt.method == Method::BinSeg && (m_opt->count() > 0 || augment_opt->count() > 0)) {
                throw UsageError("--M and --augment only apply to --method wbs");
            }
            if (!(dopt.ssic.alpha > 1.0)) {
                throw UsageError("--alpha must exceed 1");
            }
            if (dopt.method == Method::Wild && dopt.M == 0 && !dopt.augment) {
                throw UsageError("--M 0 requires --augment true");
            }
            if (seed_opt->count() == 0) {
                dopt.seed = default_seed();
            }
            if (sigma_opt->count() > 0) {
                dopt.sigma = sigma_opt->as<double>();
            }
            const TimeSeries x = read_series_csv(detect_input);
            write_text(detect_out, to_json(run_detect(x, dopt)));
            return 0;
        }

        if (*sim_cmd) {
            const bool random = sim_model == "random";
            if (!random && (navg_opt->count() > 0 || sjmp_opt->count() > 0 || len_opt->count() > 0)) {
                throw UsageError("--navg, --sjmp2 and --T only apply to --model random");
            }
            if (sim_seed_opt->count() == 0) {
                sim_seed = default_seed();
            }
            PiecewiseConstantSignal truth;
            double sigma = 1.0;
            if (random) {
                SimulationConfig config;
                config.N_avg = sim_navg;
                config.sigma2_jmp = sim_sjmp2;
                config.length = sim_length;
                config.noise_sigma = sim_sigma_opt->count() > 0 ? sim_sigma_opt->as<double>() : 1.0;
                config.seed = sim_seed;
                truth = random_signal(config);
                sigma = config.noise_sigma;
            } else {
                TestSignal ts = test_signal(sim_model);
                truth = std::move(ts.signal);
                sigma = sim_sigma_opt->count() > 0 ? sim_sigma_opt->as<double>() : ts.noise_sigma;
            }
            // The signal and the noise use separate streams derived from one seed.
            const TimeSeries x = add_noise(truth.evaluate(), sigma, sim_seed ^ 0x6e6f697365ULL);
            write_text(sim_out, to_csv(x.values()));
            if (!sim_truth.empty()) {
                write_text(sim_truth, to_descriptor_json(truth, sigma));
            }
            return 0;
        }

        if (*bench_cmd) {
            if (bench_seed_opt->count() == 0) {
                bench.base_seed = default_seed();
            }
            try {
                for (const std::string &m : split_list(bench_models)) {
                    bench.models.push_back(parse_model_spec(m));
                }
                for (const std::string &m : split_list(bench_methods)) {
                    bench.methods.push_back(parse_method_spec(m));
                }
            } catch (const InvalidInputError &e) {
                throw UsageError(e.what());
            }
            if (bench.models.empty() || bench.methods.empty()) {
                throw UsageError("--models and --methods must not be empty");
            }
            const BenchmarkReport report = run_benchmark(bench);
            const std::filesystem::path dir(bench_dir);
            std::filesystem::create_directories(dir);
            write_text(dir / "bench_distribution.csv", distribution_csv(report));
            write_text(dir / "bench_summary.csv", summary_csv(report));
            write_text(dir / "bench_report.json", report_json(report));
            return 0;
        }

        if (*tt_cmd) {
            if (!(topt.zeta_min < topt.zeta_max)) {
                throw UsageError("--zeta-min must be below --zeta-max");
            }
            if (topt.M == 0 && !topt.augment) {
                throw UsageError("--M 0 requires --augment true");
            }
            if (tt_seed_opt->count() == 0) {
                topt.seed = default_seed();
            }
            const TimeSeries x = read_series_csv(tt_input);
            write_text(tt_out, ttmap_csv(run_ttmap(x, topt)));
            return 0;
        }
    } catch (const UsageError &e) {
        std::cerr << "wildseg: usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "wildseg: error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace wildseg::cli
