#pragma once

// File outputs. Numbers are written in the shortest form that reads back to
// the same double, with '.' as the decimal separator regardless of locale.

#include <string>
#include <vector>

#include "srgov/harness/config.h"
#include "srgov/harness/episode.h"
#include "srgov/harness/trainer.h"
#include "srgov/srsm.h"

namespace srgov {
namespace harness {

/// Trace CSV columns: t, mode, the 12 state components, the 12 estimate
/// components, the setpoint position, norm_true, norm_est, u1..u4 and the
/// index of the cycle the row belongs to.
std::vector<std::string> TraceColumns();

/// Throws InvalidArgument when `traces` holds no rows and IoError when the
/// file cannot be written.
void WriteTraceCsv(const std::vector<srsm::CycleTrace>& traces,
                   const std::string& path);

/// Per-cycle records of one or more episodes:
/// policy,episode,cycle,alpha,mc_entry_est,mc_peak_est,mc_peak_true,
/// sc_peak_true,r_mpn,reward,duration
void WriteCycleCsv(const std::vector<std::string>& labels,
                   const std::vector<const EpisodeResult*>& episodes,
                   const std::string& path);

/// Summary of a single run as pretty-printed JSON: the episode metrics,
/// the chosen alphas, the configuration echo and the seed.
void WriteRunSummary(const RunConfig& cfg, const EpisodeResult& result,
                     const std::string& path);

/// Summary of an evaluation: per-seed metrics for both policies and their
/// aggregates.
void WriteEvalSummary(const RunConfig& cfg, const EvalSummary& summary,
                      const std::string& model_path, const std::string& path);

/// Creates `dir` and its parents. Throws IoError on failure.
void EnsureDirectory(const std::string& dir);

}  // namespace harness
}  // namespace srgov
