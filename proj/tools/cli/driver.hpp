#pragma once
// Orchestration behind the CLI subcommands. Each returns the manifest it wrote.

#include "job.hpp"
#include "manifest.hpp"

#include "impact_lattice/observables.hpp"
#include "impact_lattice/parallel.hpp"

#include <string>

namespace impact_lattice::cli {

/// A sweep cell failed; the message names the cell.
class CellError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal form of v ("2", "0.5").
std::string format_number(double v);

inline constexpr const char* kSmaxTableHeader =
    "T,alpha,mean_smax_frac,std_smax_frac,mean_n_clusters,mean_n_small_clusters,runs";

std::string smax_table_row(const EnsembleStats& stats);
std::string histogram_csv(const EnsembleStats& stats);
std::string histogram_filename(double alpha, double temperature);

RunManifest execute_run(const Job& job, const Executor& exec);
RunManifest execute_sweep(const Job& job, const Executor& exec);
/// Re-executes the job stored in `job.manifest`, writing into `job.out`.
RunManifest execute_replay(const Job& job, const Executor& exec);

RunManifest execute(const Job& job, const Executor& exec);

}  // namespace impact_lattice::cli
