#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "omegalab/geometry.hpp"
#include "omegalab/probmodel.hpp"
#include "omegalab/stats.hpp"

using namespace omegalab;

namespace {

struct Options {
    std::string config;
    std::string out;
    int64_t B = 100;
    uint64_t T = 10'000;
    uint64_t Q = 1;
    uint64_t seed = 0;
    uint64_t N = 100'000;
    int workers = 1;
    std::string mode = "exact";
    std::string k = "2";
};

void emit_error(const std::string& code, const std::string& message) {
    nlohmann::json j;
    j["error"] = {{"code", code}, {"message", message}};
    std::cerr << j.dump() << "\n";
}

void write_output(const Options& opts, const std::string& name, const std::string& content) {
    if (opts.out.empty()) return;
    std::filesystem::create_directories(opts.out);
    std::ofstream f(std::filesystem::path(opts.out) / name, std::ios::binary);
    if (!f) throw ValidationError("cannot write output file: " + name);
    f << content;
}

VarietyConfig load_config(const Options& opts) {
    if (opts.config.empty()) throw ValidationError("--config is required");
    return load_variety_config_file(opts.config);
}

CovMode parse_mode(const std::string& mode) {
    if (mode == "exact") return CovMode::Exact;
    if (mode == "estimate") return CovMode::Estimate;
    throw ValidationError("--mode must be exact or estimate");
}

// Enumerate over a partition of the leading-parameter domain, one chunk per
// worker; the chunks are disjoint and cover the domain, so the merged set is
// the full enumeration regardless of worker count.
std::vector<IntegralPoint> parallel_enumerate(const VarietySpec& v, int64_t B, int workers,
                                              const PrimeTable* table) {
    if (workers < 1) throw ValidationError("--workers must be >= 1");
    auto [lo, hi] = enumeration_domain(v, B);
    std::vector<std::vector<IntegralPoint>> parts(workers);
    std::vector<std::exception_ptr> errors(workers);
    int64_t span = hi - lo + 1;
    int64_t chunk = (span + workers - 1) / workers;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                int64_t a = lo + w * chunk;
                int64_t b = std::min(hi, a + chunk - 1);
                if (a > hi) return;
                EnumOptions eo;
                eo.range = std::make_pair(a, b);
                eo.table = table;
                parts[w] = enumerate_points(v, B, eo);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<IntegralPoint> all;
    for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    std::sort(all.begin(), all.end());
    return all;
}

uint64_t working_table_limit(const Options& opts) {
    uint64_t want = std::max<uint64_t>(
        {static_cast<uint64_t>(std::max<int64_t>(opts.B, 2)), opts.T, 1'000'000});
    return std::min(want, PrimeTable::capacity_cap());
}

int cmd_enumerate(const Options& opts) {
    auto cfg = load_config(opts);
    if (opts.B < 0) throw ValidationError("--B must be nonnegative");
    PrimeTable table = PrimeTable::build(working_table_limit(opts));
    auto points = parallel_enumerate(cfg.variety, opts.B, opts.workers, &table);
    std::string csv = points_to_csv(points, cfg.variety.ncoords());
    std::cout << csv;
    write_output(opts, "points.csv", csv);
    return 0;
}

int cmd_predict_cov(const Options& opts) {
    auto cfg = load_config(opts);
    if (cfg.divisors.empty()) throw ValidationError("config declares no divisors");
    CovMode mode = parse_mode(opts.mode);
    PrimeTable table = PrimeTable::build(std::max<uint64_t>(opts.T, 100));
    CovOptions co;
    co.T = opts.T;
    co.table = &table;
    auto pred = predict_covariance(cfg.variety, cfg.divisors, mode, co);
    std::string json = covariance_to_json(pred);
    std::cout << json << "\n";
    write_output(opts, "covariance.json", json + "\n");
    return 0;
}

int cmd_ffdensity(const Options& opts) {
    auto cfg = load_config(opts);
    if (cfg.divisors.empty()) throw ValidationError("config declares no divisors");
    PrimeTable table = PrimeTable::build(std::max<uint64_t>(opts.T, 100));
    std::ostringstream csv;
    csv << "label,p,partialSum,c,cprime\n";
    for (const auto& d : cfg.divisors) {
        MertensFit fit = mertens_sum(cfg.variety, d, opts.T, table);
        for (const auto& [p, s] : fit.partial_sums)
            csv << d.label << ',' << p << ',' << s << ',' << fit.c << ',' << fit.cprime
                << '\n';
    }
    std::cout << csv.str();
    write_output(opts, "density.csv", csv.str());
    return 0;
}

int cmd_pipeline(const Options& opts) {
    auto cfg = load_config(opts);
    if (cfg.divisors.empty()) throw ValidationError("config declares no divisors");
    if (opts.B < 2) throw ValidationError("--B must be >= 2");
    if (!(std::log(static_cast<double>(opts.B)) > 1))
        throw ValidationError("normalization base must exceed e: increase --B");
    CovMode mode = parse_mode(opts.mode);
    PrimeTable table = PrimeTable::build(working_table_limit(opts));
    CovOptions co;
    co.T = opts.T;
    co.table = &table;
    auto pred = predict_covariance(cfg.variety, cfg.divisors, mode, co);
    int n = static_cast<int>(cfg.divisors.size());
    std::vector<double> cdiag(n);
    for (int i = 0; i < n; ++i) {
        cdiag[i] = pred.c[i][i];
        if (!(cdiag[i] > 0)) throw ValidationError("nonpositive diagonal c_{i,i}");
    }

    auto points = parallel_enumerate(cfg.variety, opts.B, opts.workers, &table);

    // Partition the point stream across workers; exact accumulators merge to
    // the same sums for every partition.
    int workers = opts.workers;
    std::vector<EmpiricalSummary> sums(workers, EmpiricalSummary(n, 100'000, opts.seed));
    std::vector<std::vector<std::vector<double>>> normed(workers);
    std::vector<uint64_t> skipped(workers, 0);
    std::vector<std::exception_ptr> errors(workers);
    size_t chunk = (points.size() + workers - 1) / workers;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                size_t a = w * chunk, b = std::min(points.size(), a + chunk);
                for (size_t i = a; i < b && a < points.size(); ++i) {
                    std::vector<int> om(n);
                    bool ok = true;
                    for (int d = 0; d < n && ok; ++d) {
                        try {
                            om[d] = omega_Z(points[i], cfg.variety, cfg.divisors[d], table);
                        } catch (const ValidationError&) {
                            ok = false; // point lies on the divisor: omega undefined
                        }
                    }
                    if (!ok) {
                        ++skipped[w];
                        continue;
                    }
                    auto z = normalize_K(om, cdiag, static_cast<double>(opts.B));
                    sums[w].accumulate(z);
                    normed[w].push_back(std::move(z));
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    EmpiricalSummary total = sums[0];
    for (int w = 1; w < workers; ++w) total = EmpiricalSummary::merge(total, sums[w]);
    std::vector<std::vector<double>> samples;
    uint64_t total_skipped = 0;
    for (int w = 0; w < workers; ++w) {
        samples.insert(samples.end(), normed[w].begin(), normed[w].end());
        total_skipped += skipped[w];
    }
    if (total.count() < 2)
        throw ValidationError("not enough points for a pipeline report; increase --B");

    FitReport rep = compare_matrices(total.correlation(), pred.sigma, 0.2, total.count());
    if (samples.size() >= 1000) {
        for (const auto& t : default_projections(n, opts.seed)) {
            double target = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) target += t[i] * pred.sigma[i][j] * t[j];
            rep.ksStatistics.push_back(
                projection_test(samples, t, std::max(target, 0.0), 0.05));
        }
    }
    nlohmann::json j = nlohmann::json::parse(fit_report_to_json(rep));
    j["pointCount"] = points.size();
    j["skippedPoints"] = total_skipped;
    j["labels"] = pred.labels;
    j["predictedRank"] = pred.rank;
    std::string json = j.dump(2);
    std::cout << json << "\n";
    write_output(opts, "fit_report.json", json + "\n");

    if (!opts.out.empty() && !samples.empty()) {
        for (int i = 0; i < n; ++i) {
            std::vector<double> t(n, 0), proj;
            t[i] = 1;
            proj.reserve(samples.size());
            for (const auto& z : samples) proj.push_back(z[i]);
            write_output(opts, "proj_" + cfg.divisors[i].label + ".csv",
                         projection_to_csv(t, proj));
            write_output(opts, "hist_" + cfg.divisors[i].label + ".svg",
                         svg_histogram(proj, 1.0));
        }
    }
    return 0;
}

int cmd_model_sim(const Options& opts) {
    if (opts.config.empty()) throw ValidationError("--config is required");
    std::ifstream f(opts.config);
    if (!f) throw ValidationError("cannot read model config: " + opts.config);
    std::stringstream buf;
    buf << f.rdbuf();
    auto model = model_config_from_json(buf.str());
    std::vector<int> k;
    std::stringstream ks(opts.k);
    std::string item;
    while (std::getline(ks, item, ',')) k.push_back(std::stoi(item));
    if (static_cast<int>(k.size()) != model.n)
        throw ValidationError("--k must list one exponent per model coordinate");
    auto rep = moment_report(model, k, opts.N, opts.seed);
    std::string json = moment_report_to_json(rep);
    std::cout << json << "\n";
    write_output(opts, "moment_report.json", json + "\n");
    return 0;
}

int cmd_equidist(const Options& opts) {
    auto cfg = load_config(opts);
    if (opts.Q < 1) throw ValidationError("--Q must be >= 1");
    PrimeTable table = PrimeTable::build(working_table_limit(opts));
    EnumOptions eo;
    eo.table = &table;
    auto rep = check_equidistribution(cfg.variety, opts.Q, opts.B, eo);
    nlohmann::json j;
    j["Q"] = rep.Q;
    j["classCount"] = rep.class_count;
    j["pointCount"] = rep.point_count;
    j["maxDeviation"] = rep.max_deviation;
    j["l2Deviation"] = rep.l2_deviation;
    j["deviations"] = rep.deviations;
    std::string json = j.dump(2);
    std::cout << json << "\n";
    write_output(opts, "equidist.json", json + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"omegalab: statistics of prime divisors on integral points of varieties"};
    app.require_subcommand(1);
    Options opts;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config, "variety/model config JSON path");
        sub->add_option("--B", opts.B, "height bound");
        sub->add_option("--T", opts.T, "prime bound for densities/estimates");
        sub->add_option("--Q", opts.Q, "modulus for equidistribution");
        sub->add_option("--seed", opts.seed, "RNG seed");
        sub->add_option("--N", opts.N, "sample count for model simulation");
        sub->add_option("--workers", opts.workers, "worker thread count");
        sub->add_option("--mode", opts.mode, "covariance mode: exact|estimate");
        sub->add_option("--k", opts.k, "moment multi-index, comma separated");
        sub->add_option("--out", opts.out, "output directory");
        return sub;
    };
    auto* enumerate = add_common(app.add_subcommand("enumerate", "integral points to CSV"));
    auto* predict = add_common(app.add_subcommand("predict-cov", "covariance prediction"));
    auto* ffdensity =
        add_common(app.add_subcommand("ffdensity", "finite-field densities and Mertens fit"));
    auto* pipeline =
        add_common(app.add_subcommand("pipeline", "enumerate, normalize, fit report"));
    auto* modelsim = add_common(app.add_subcommand("model-sim", "probabilistic model moments"));
    auto* equidist = add_common(app.add_subcommand("equidist", "residue equidistribution"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("validation", e.what());
        return 2;
    }

    try {
        if (enumerate->parsed()) return cmd_enumerate(opts);
        if (predict->parsed()) return cmd_predict_cov(opts);
        if (ffdensity->parsed()) return cmd_ffdensity(opts);
        if (pipeline->parsed()) return cmd_pipeline(opts);
        if (modelsim->parsed()) return cmd_model_sim(opts);
        if (equidist->parsed()) return cmd_equidist(opts);
        emit_error("validation", "unknown subcommand");
        return 2;
    } catch (const ValidationError& e) {
        emit_error("validation", e.what());
        return 2;
    } catch (const CapacityError& e) {
        emit_error("budget", e.what());
        return 3;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 1;
    }
}
