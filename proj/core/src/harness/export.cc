#include "srgov/harness/export.h"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "json.hpp"
#include "srgov/error.h"

namespace srgov {
namespace harness {

namespace {

void AppendNum(std::string& out, double v) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, result.ptr);
}

std::ofstream OpenForWrite(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Throw(ErrorCode::kIoError, "cannot open " + path + " for writing");
  return out;
}

const char* const kStateNames[plant::kStateDim] = {
    "px", "py", "pz", "vx", "vy", "vz", "roll", "pitch", "yaw", "wx", "wy", "wz"};

}  // namespace

std::vector<std::string> TraceColumns() {
  std::vector<std::string> cols = {"t", "mode"};
  for (const char* name : kStateNames) cols.emplace_back(name);
  for (const char* name : kStateNames) cols.push_back(std::string("xh_") + name);
  for (const char* name : {"sp_px", "sp_py", "sp_pz", "norm_true", "norm_est",
                           "u1", "u2", "u3", "u4", "cycle"}) {
    cols.emplace_back(name);
  }
  return cols;
}

void WriteTraceCsv(const std::vector<srsm::CycleTrace>& traces,
                   const std::string& path) {
  std::size_t rows = 0;
  for (const auto& trace : traces) rows += trace.rows.size();
  if (rows == 0) Throw(ErrorCode::kInvalidArgument, "no trace rows to export");

  std::string out;
  const std::vector<std::string> cols = TraceColumns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += cols[i];
  }
  out.push_back('\n');
  for (std::size_t c = 0; c < traces.size(); ++c) {
    for (const srsm::TraceRow& row : traces[c].rows) {
      AppendNum(out, row.t);
      out.push_back(',');
      out += srsm::ToString(row.mode);
      for (int i = 0; i < plant::kStateDim; ++i) {
        out.push_back(',');
        AppendNum(out, row.x(i));
      }
      for (int i = 0; i < plant::kStateDim; ++i) {
        out.push_back(',');
        AppendNum(out, row.xhat(i));
      }
      for (int i = 0; i < 3; ++i) {
        out.push_back(',');
        AppendNum(out, row.sp(i));
      }
      out.push_back(',');
      AppendNum(out, row.true_norm_sq);
      out.push_back(',');
      AppendNum(out, row.est_norm_sq);
      for (int i = 0; i < plant::kInputDim; ++i) {
        out.push_back(',');
        AppendNum(out, row.u(i));
      }
      out.push_back(',');
      out += std::to_string(c);
      out.push_back('\n');
    }
  }
  std::ofstream file = OpenForWrite(path);
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) Throw(ErrorCode::kIoError, "failed writing " + path);
}

void WriteCycleCsv(const std::vector<std::string>& labels,
                   const std::vector<const EpisodeResult*>& episodes,
                   const std::string& path) {
  if (labels.size() != episodes.size()) {
    Throw(ErrorCode::kInvalidArgument, "one label per episode is required");
  }
  std::string out =
      "policy,episode,cycle,alpha,mc_entry_est,mc_peak_est,mc_peak_true,"
      "sc_peak_true,r_mpn,reward,duration\n";
  for (std::size_t e = 0; e < episodes.size(); ++e) {
    for (const CycleRecord& rec : episodes[e]->records) {
      out += labels[e] + "," + std::to_string(e) + "," +
             std::to_string(rec.cycle);
      for (double v : {rec.alpha, rec.mc_entry_est_norm_sq,
                       rec.mc_peak_est_norm_sq, rec.mc_peak_true_norm_sq,
                       rec.sc_peak_true_norm_sq, rec.r_mpn, rec.reward,
                       rec.duration}) {
        out.push_back(',');
        AppendNum(out, v);
      }
      out.push_back('\n');
    }
  }
  std::ofstream file = OpenForWrite(path);
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) Throw(ErrorCode::kIoError, "failed writing " + path);
}

namespace {

nlohmann::json EpisodeJson(const EpisodeResult& result) {
  nlohmann::json alphas = nlohmann::json::array();
  for (const CycleRecord& rec : result.records) alphas.push_back(rec.alpha);
  return {
      {"mission_time", result.mission_time},
      {"cycles", result.cycles},
      {"success", result.success},
      {"outcome", std::string(ToString(result.outcome))},
      {"total_reward", result.total_reward},
      {"alphas", alphas},
  };
}

nlohmann::json StatsJson(const EpisodeStats& stats) {
  return {
      {"mean_mission_time", stats.mean_mission_time},
      {"success_rate", stats.success_rate},
      {"mean_mc_entry_est", stats.mean_mc_entry_est},
      {"mean_mc_peak_est", stats.mean_mc_peak_est},
      {"max_mc_peak_est", stats.max_mc_peak_est},
      {"mean_mc_peak_true", stats.mean_mc_peak_true},
      {"max_true", stats.max_true},
      {"mean_alpha", stats.mean_alpha},
      {"mc_violations", stats.mc_violations},
  };
}

nlohmann::json ConfigJson(const RunConfig& cfg) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [key, value] : ConfigValues(cfg)) out[key] = value;
  return out;
}

void WriteJson(const nlohmann::json& doc, const std::string& path) {
  std::ofstream file = OpenForWrite(path);
  file << doc.dump(2) << '\n';
  if (!file) Throw(ErrorCode::kIoError, "failed writing " + path);
}

}  // namespace

void WriteRunSummary(const RunConfig& cfg, const EpisodeResult& result,
                     const std::string& path) {
  nlohmann::json doc = EpisodeJson(result);
  doc["policy"] = ToString(cfg.policy);
  doc["seed"] = cfg.seed;
  doc["config"] = ConfigJson(cfg);
  WriteJson(doc, path);
}

void WriteEvalSummary(const RunConfig& cfg, const EvalSummary& summary,
                      const std::string& model_path, const std::string& path) {
  nlohmann::json episodes = nlohmann::json::array();
  for (std::size_t i = 0; i < summary.seeds.size(); ++i) {
    episodes.push_back({{"seed", summary.seeds[i]},
                        {"rl", EpisodeJson(summary.rl[i])},
                        {"baseline", EpisodeJson(summary.baseline[i])}});
  }
  nlohmann::json doc = {
      {"model", model_path},
      {"rl", StatsJson(Summarize(summary.rl, cfg.rho_m))},
      {"baseline", StatsJson(Summarize(summary.baseline, cfg.rho_m))},
      {"episodes", episodes},
      {"config", ConfigJson(cfg)},
  };
  WriteJson(doc, path);
}

void EnsureDirectory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) Throw(ErrorCode::kIoError, "cannot create " + dir + ": " + ec.message());
}

}  // namespace harness
}  // namespace srgov
