#include "driver.hpp"

#include "impact_lattice/engine.hpp"
#include "impact_lattice/output.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <tuple>

namespace impact_lattice::cli {

namespace fs = std::filesystem;

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string smax_table_row(const EnsembleStats& s) {
    return format_number(s.params.temperature) + "," + format_number(s.params.alpha) + "," +
           format_fixed6(s.mean_largest_fraction) + "," + format_fixed6(s.std_largest_fraction) + "," +
           format_fixed6(s.mean_cluster_count) + "," + format_fixed6(s.mean_small_cluster_count) + "," +
           std::to_string(s.runs) + "\n";
}

std::string histogram_csv(const EnsembleStats& s) {
    std::string out = "size,mean_count\n";
    for (auto [size, mean] : s.mean_histogram) out += std::to_string(size) + "," + format_fixed6(mean) + "\n";
    return out;
}

std::string histogram_filename(double alpha, double temperature) {
    return "histogram_" + format_number(alpha) + "_" + format_number(temperature) + ".csv";
}

namespace {

class OutputLog {
public:
    explicit OutputLog(fs::path dir) : dir_{std::move(dir)} {}

    void write(const std::string& kind, const std::string& name, std::string_view bytes) {
        write_file(dir_ / name, bytes);
        add(kind, dir_ / name);
    }

    void add(const std::string& kind, const fs::path& path) {
        records_.push_back({kind, path.filename().string(), sha256_file(path)});
    }

    std::vector<OutputRecord> take() { return std::move(records_); }
    const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
    std::vector<OutputRecord> records_;
};

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

RunManifest finish(const Job& job, OutputLog& log) {
    RunManifest m{job, log.take(), kToolVersion, utc_timestamp()};
    write_manifest(m, log.dir() / "manifest.json");
    return m;
}

}  // namespace

RunManifest execute_run(const Job& job, const Executor& exec) {
    job.validate();
    ensure_directory(job.out);
    OutputLog log{job.out};
    const auto schedule = job.effective_snapshots();

    with_engine(job.engine, job.params, [&](const auto& engine) {
        const RunResult result = run(job.params, schedule, engine, exec);
        std::string observables =
            "step,smax_frac,n_clusters,n_small_clusters,mean_sustain,boundary_sustain,interior_sustain\n";
        for (const Configuration& snap : result.snapshots) {
            for (const auto& path : emit_snapshot(snap, job.out)) log.add("snapshot", path);
            const SustainField field = job.sustain == SustainMethod::analytic
                                           ? sustain_probability_field(snap, engine, exec)
                                           : sustain_probability_montecarlo(snap, engine, job.sustain_samples, exec);
            for (const auto& path : emit_sustain_map(field, job.out)) log.add("sustain_map", path);

            const RunObservables obs = observe(snap);
            const BoundarySplit split = split_boundary_interior(snap, field);
            double mean = 0.0;
            for (double v : field.values) mean += v;
            mean /= static_cast<double>(field.values.size());
            observables += std::to_string(snap.step_index()) + "," + format_fixed6(obs.largest_fraction) + "," +
                           std::to_string(obs.cluster_count) + "," + std::to_string(obs.small_cluster_count) + "," +
                           format_fixed6(mean) + "," + format_fixed6(split.boundary_mean) + "," +
                           format_fixed6(split.interior_mean) + "\n";
        }
        log.write("observables", "observables.csv", observables);

        if (job.runs > 1) {
            const EnsembleStats stats = ensemble_run(job.params, job.runs, job.params.steps, engine, exec);
            log.write("smax_table", "smax_table.csv", std::string(kSmaxTableHeader) + "\n" + smax_table_row(stats));
            log.write("histogram", histogram_filename(job.params.alpha, job.params.temperature),
                      histogram_csv(stats));
        }
    });
    return finish(job, log);
}

RunManifest execute_sweep(const Job& job, const Executor& exec) {
    job.validate();
    ensure_directory(job.out);
    OutputLog log{job.out};

    std::vector<ModelParams> cells;
    for (double t : job.temperatures)
        for (double a : job.alphas) {
            ModelParams p = job.params;
            p.temperature = t;
            p.alpha = a;
            cells.push_back(p);
        }
    std::ranges::stable_sort(cells, {}, [](const ModelParams& p) { return std::tuple{p.temperature, p.alpha}; });

    auto cell_name = [](const ModelParams& p) {
        return "alpha=" + format_number(p.alpha) + ", T=" + format_number(p.temperature);
    };

    std::vector<AnyEngine> engines;
    engines.reserve(cells.size());
    for (const auto& c : cells) engines.push_back(make_engine(job.engine, c));

    // One task per (cell, run); each writes only its own slot.
    const std::size_t runs = job.runs;
    std::vector<RunObservables> results(cells.size() * runs);
    exec.parallel_for(results.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            const std::size_t cell = t / runs, r = t % runs;
            try {
                std::visit(
                    [&](const auto& engine) {
                        const std::size_t schedule[] = {job.params.steps};
                        const auto member = member_params(cells[cell], r, job.params.steps);
                        results[t] = observe(run(member, schedule, engine).final_state);
                    },
                    engines[cell]);
            } catch (const std::exception& e) {
                throw CellError("sweep cell " + cell_name(cells[cell]) + " failed: " + e.what());
            }
        }
    });

    std::string table = std::string(kSmaxTableHeader) + "\n";
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const EnsembleStats stats =
            aggregate(cells[c], std::span<const RunObservables>(results).subspan(c * runs, runs));
        table += smax_table_row(stats);
        log.write("histogram", histogram_filename(cells[c].alpha, cells[c].temperature), histogram_csv(stats));
    }
    log.write("smax_table", "smax_table.csv", table);
    return finish(job, log);
}

RunManifest execute_replay(const Job& job, const Executor& exec) {
    Job replayed = read_manifest(job.manifest).job;
    replayed.out = job.out;
    return execute(replayed, exec);
}

RunManifest execute(const Job& job, const Executor& exec) {
    switch (job.mode) {
        case Mode::sweep: return execute_sweep(job, exec);
        case Mode::replay: return execute_replay(job, exec);
        case Mode::run: break;
    }
    return execute_run(job, exec);
}

}  // namespace impact_lattice::cli
