#include "srgov/harness/config.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "srgov/error.h"

namespace srgov {
namespace harness {

namespace {

[[noreturn]] void Bad(const std::string& what) {
  Throw(ErrorCode::kConfigError, what);
}

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(Trim(item));
  return out;
}

double ParseDouble(const std::string& key, const std::string& text) {
  const std::string t = Trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    Bad(key + ": expected a number, got '" + text + "'");
  }
  return value;
}

template <typename Int>
Int ParseInt(const std::string& key, const std::string& text) {
  const std::string t = Trim(text);
  Int value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    Bad(key + ": expected an integer, got '" + text + "'");
  }
  return value;
}

Eigen::Vector3d ParseTriple(const std::string& key, const std::string& text) {
  const std::vector<std::string> parts = Split(text, ',');
  if (parts.size() != 3) Bad(key + ": expected three comma separated numbers");
  return Eigen::Vector3d(ParseDouble(key, parts[0]), ParseDouble(key, parts[1]),
                         ParseDouble(key, parts[2]));
}

std::string Format(double v) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, result.ptr);
}

std::string FormatTriple(const Eigen::Vector3d& v) {
  return Format(v(0)) + "," + Format(v(1)) + "," + Format(v(2));
}

struct Field {
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename Member>
Field DoubleField(Member member) {
  return Field{
      [member](RunConfig& c, const std::string& k, const std::string& v) {
        std::invoke(member, c) = ParseDouble(k, v);
      },
      [member](const RunConfig& c) { return Format(std::invoke(member, c)); }};
}

template <typename Int, typename Member>
Field IntField(Member member) {
  return Field{
      [member](RunConfig& c, const std::string& k, const std::string& v) {
        std::invoke(member, c) = ParseInt<Int>(k, v);
      },
      [member](const RunConfig& c) {
        return std::to_string(std::invoke(member, c));
      }};
}

const std::map<std::string, Field>& Fields() {
  static const std::map<std::string, Field> fields = {
      {"mass", DoubleField([](auto& c) -> auto& { return c.quad.mass; })},
      {"gravity", DoubleField([](auto& c) -> auto& { return c.quad.gravity; })},
      {"inertia",
       Field{[](RunConfig& c, const std::string& k, const std::string& v) {
               c.quad.inertia_diag = ParseTriple(k, v);
             },
             [](const RunConfig& c) { return FormatTriple(c.quad.inertia_diag); }}},
      {"meas_noise_pos",
       DoubleField([](auto& c) -> auto& { return c.noise.position; })},
      {"meas_noise_ang",
       DoubleField([](auto& c) -> auto& { return c.noise.angle; })},
      {"lqr_q_pos",
       DoubleField([](auto& c) -> auto& { return c.weights.lqr_q_pos; })},
      {"lqr_q_other",
       DoubleField([](auto& c) -> auto& { return c.weights.lqr_q_other; })},
      {"lqr_r", DoubleField([](auto& c) -> auto& { return c.weights.lqr_r; })},
      {"obs_q", DoubleField([](auto& c) -> auto& { return c.weights.obs_q; })},
      {"obs_q_hidden",
       DoubleField([](auto& c) -> auto& { return c.weights.obs_q_hidden; })},
      {"obs_r", DoubleField([](auto& c) -> auto& { return c.weights.obs_r; })},
      {"rho_s", DoubleField([](auto& c) -> auto& { return c.rho_s; })},
      {"rho_m", DoubleField([](auto& c) -> auto& { return c.rho_m; })},
      {"d_safe", DoubleField([](auto& c) -> auto& { return c.d_safe; })},
      {"t_mc", DoubleField([](auto& c) -> auto& { return c.sr.t_mc; })},
      {"t_rb", DoubleField([](auto& c) -> auto& { return c.sr.t_rb; })},
      {"t_est", DoubleField([](auto& c) -> auto& { return c.sr.t_est; })},
      {"dt", DoubleField([](auto& c) -> auto& { return c.sr.dt; })},
      {"v_unstable", DoubleField([](auto& c) -> auto& { return c.sr.v_unstable; })},
      {"t_sc_max", DoubleField([](auto& c) -> auto& { return c.sr.t_sc_max; })},
      {"waypoints",
       Field{[](RunConfig& c, const std::string& k, const std::string& v) {
               std::vector<Eigen::Vector3d> points;
               for (const std::string& item : Split(v, ';')) {
                 if (!item.empty()) points.push_back(ParseTriple(k, item));
               }
               c.mission.waypoints = std::move(points);
             },
             [](const RunConfig& c) {
               std::string out;
               for (const auto& w : c.mission.waypoints) {
                 if (!out.empty()) out += "; ";
                 out += FormatTriple(w);
               }
               return out;
             }}},
      {"goal_tol", DoubleField([](auto& c) -> auto& { return c.mission.goal_tol; })},
      {"alpha_max", DoubleField([](auto& c) -> auto& { return c.alpha_max; })},
      {"policy",
       Field{[](RunConfig& c, const std::string& k, const std::string& v) {
               const std::string t = Trim(v);
               if (t == "conservative") {
                 c.policy = governor::PolicyKind::kConservative;
               } else if (t == "baseline") {
                 c.policy = governor::PolicyKind::kBaseline;
               } else if (t == "rl") {
                 c.policy = governor::PolicyKind::kLearned;
               } else {
                 Bad(k + ": expected conservative, baseline or rl, got '" + v + "'");
               }
             },
             [](const RunConfig& c) { return ToString(c.policy); }}},
      {"gamma", DoubleField([](auto& c) -> auto& { return c.sac.gamma; })},
      {"lr", DoubleField([](auto& c) -> auto& { return c.sac.lr; })},
      {"batch", IntField<int>([](auto& c) -> auto& { return c.sac.batch; })},
      {"warmup", IntField<int>([](auto& c) -> auto& { return c.sac.warmup; })},
      {"updates_per_step",
       IntField<int>([](auto& c) -> auto& { return c.sac.updates_per_step; })},
      {"target_entropy",
       DoubleField([](auto& c) -> auto& { return c.sac.target_entropy; })},
      {"total_steps",
       IntField<std::int64_t>([](auto& c) -> auto& { return c.sac.total_steps; })},
      {"buffer_capacity", IntField<std::int64_t>([](auto& c) -> auto& {
         return c.sac.buffer_capacity;
       })},
      {"tau", DoubleField([](auto& c) -> auto& { return c.sac.tau; })},
      {"hidden", IntField<int>([](auto& c) -> auto& { return c.sac.hidden; })},
      {"init_log_beta",
       DoubleField([](auto& c) -> auto& { return c.sac.init_log_beta; })},
      {"reward_scale",
       DoubleField([](auto& c) -> auto& { return c.sac.reward_scale; })},
      {"seed", IntField<std::uint64_t>([](auto& c) -> auto& { return c.seed; })},
      {"out_dir",
       Field{[](RunConfig& c, const std::string&, const std::string& v) {
               c.out_dir = Trim(v);
             },
             [](const RunConfig& c) { return c.out_dir; }}},
      {"trace_every",
       IntField<int>([](auto& c) -> auto& { return c.trace_every; })},
      {"max_cycles", IntField<int>([](auto& c) -> auto& { return c.max_cycles; })},
      {"validate_every",
       IntField<int>([](auto& c) -> auto& { return c.validate_every; })},
  };
  return fields;
}

}  // namespace

std::string ToString(governor::PolicyKind kind) {
  switch (kind) {
    case governor::PolicyKind::kConservative: return "conservative";
    case governor::PolicyKind::kBaseline: return "baseline";
    case governor::PolicyKind::kLearned: return "rl";
  }
  return "?";
}

void RunConfig::Validate() const {
  try {
    quad.Validate();
    if (!(noise.position >= 0.0) || !(noise.angle >= 0.0)) {
      Bad("measurement noise must be non-negative");
    }
    for (double w : {weights.lqr_q_pos, weights.lqr_q_other, weights.lqr_r,
                     weights.obs_q, weights.obs_q_hidden, weights.obs_r}) {
      if (!(w > 0.0) || !std::isfinite(w)) Bad("design weights must be positive");
    }
    if (!(0.0 < rho_s && rho_s < rho_m && rho_m < 1.0)) {
      Bad("need 0 < rho_s < rho_m < 1");
    }
    if (!(d_safe > 0.0)) Bad("d_safe must be positive");
    sr.Validate();
    mission.Validate();
    if (!(alpha_max > 0.0) || !std::isfinite(alpha_max)) {
      Bad("alpha_max must be positive");
    }
    sac.Validate();
    if (trace_every < 0) Bad("trace_every must be >= 0");
    if (max_cycles <= 0) Bad("max_cycles must be positive");
    if (validate_every < 0) Bad("validate_every must be >= 0");
    if (out_dir.empty()) Bad("out_dir must not be empty");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigError) throw;
    Bad(e.what());
  }
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> keys;
  for (const auto& [key, field] : Fields()) keys.push_back(key);
  return keys;
}

void SetKey(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = Fields().find(key);
  if (it == Fields().end()) Bad("unknown key '" + key + "'");
  it->second.set(cfg, key, value);
}

void ApplyConfigText(RunConfig& cfg, const std::string& text,
                     const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::set<std::string> seen;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    const std::string body = Trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) Bad(where + "expected key = value");
    const std::string key = Trim(body.substr(0, eq));
    if (!seen.insert(key).second) Bad(where + "repeated key '" + key + "'");
    try {
      SetKey(cfg, key, body.substr(eq + 1));
    } catch (const Error& e) {
      Bad(where + e.what());
    }
  }
}

void ApplyConfigFile(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) Throw(ErrorCode::kIoError, "cannot open config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  ApplyConfigText(cfg, buffer.str(), path);
}

void ApplyEnvironment(RunConfig& cfg) {
  for (const auto& [key, field] : Fields()) {
    std::string name = kEnvPrefix;
    for (char ch : key) {
      name.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    }
    if (const char* value = std::getenv(name.c_str())) {
      try {
        field.set(cfg, key, value);
      } catch (const Error& e) {
        Bad(name + ": " + e.what());
      }
    }
  }
}

std::map<std::string, std::string> ConfigValues(const RunConfig& cfg) {
  std::map<std::string, std::string> out;
  for (const auto& [key, field] : Fields()) out[key] = field.get(cfg);
  return out;
}

std::string DumpConfig(const RunConfig& cfg) {
  std::string out;
  for (const auto& [key, value] : ConfigValues(cfg)) {
    out += key + " = " + value + "\n";
  }
  return out;
}

}  // namespace harness
}  // namespace srgov
