#include "srgov/sac/model_io.h"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "json.hpp"
#include "srgov/error.h"

namespace srgov {
namespace sac {

namespace {

using nlohmann::json;

struct Block {
  const char* name;
  Vec* data;
};

// Every block in file order. Shared by save and load so the two can never
// disagree.
std::vector<Block> Blocks(Agent& agent, Vec (&moments)[8]) {
  return {
      {"policy", &agent.policy().params()},
      {"q1", &agent.q1().params()},
      {"q2", &agent.q2().params()},
      {"q1_target", &agent.q1_target().params()},
      {"q2_target", &agent.q2_target().params()},
      {"log_beta", &agent.log_beta_vec()},
      {"adam_policy_m", &moments[0]},
      {"adam_policy_v", &moments[1]},
      {"adam_q1_m", &moments[2]},
      {"adam_q1_v", &moments[3]},
      {"adam_q2_m", &moments[4]},
      {"adam_q2_v", &moments[5]},
      {"adam_beta_m", &moments[6]},
      {"adam_beta_v", &moments[7]},
  };
}

void AppendLittleEndian(std::string& out, const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::uint64_t bits = 0;
    const double x = v(i);
    std::memcpy(&bits, &x, sizeof bits);
    for (int byte = 0; byte < 8; ++byte) {
      out.push_back(static_cast<char>((bits >> (8 * byte)) & 0xffu));
    }
  }
}

double ReadLittleEndian(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int byte = 7; byte >= 0; --byte) bits = (bits << 8) | p[byte];
  double x = 0.0;
  std::memcpy(&x, &bits, sizeof x);
  return x;
}

[[noreturn]] void Mismatch(const std::string& path, const std::string& what) {
  Throw(ErrorCode::kSchemaMismatch, path + ": " + what);
}

}  // namespace

void SaveModel(const Agent& agent_in, double alpha_max,
               const std::string& path) {
  // Blocks() hands out mutable pointers; saving only reads through them.
  Agent& agent = const_cast<Agent&>(agent_in);
  Vec moments[8] = {agent.policy_opt().m(), agent.policy_opt().v(),
                    agent.q1_opt().m(),     agent.q1_opt().v(),
                    agent.q2_opt().m(),     agent.q2_opt().v(),
                    agent.beta_opt().m(),   agent.beta_opt().v()};
  const SacConfig& cfg = agent.config();

  json manifest;
  manifest["format"] = kModelFormatName;
  manifest["version"] = kModelFormatVersion;
  manifest["state_dim"] = agent.state_dim();
  manifest["action_dim"] = agent.action_dim();
  manifest["policy_sizes"] = agent.policy().sizes();
  manifest["critic_sizes"] = agent.q1().sizes();
  manifest["alpha_max"] = alpha_max;
  manifest["beta"] = agent.beta();
  manifest["config"] = {
      {"gamma", cfg.gamma},
      {"lr", cfg.lr},
      {"batch", cfg.batch},
      {"warmup", cfg.warmup},
      {"updates_per_step", cfg.updates_per_step},
      {"target_entropy", cfg.target_entropy},
      {"total_steps", cfg.total_steps},
      {"buffer_capacity", cfg.buffer_capacity},
      {"tau", cfg.tau},
      {"hidden", cfg.hidden},
      {"init_log_beta", cfg.init_log_beta},
      {"reward_scale", cfg.reward_scale},
      {"seed", cfg.seed},
  };
  manifest["adam_steps"] = {
      {"policy", agent.policy_opt().steps()},
      {"q1", agent.q1_opt().steps()},
      {"q2", agent.q2_opt().steps()},
      {"beta", agent.beta_opt().steps()},
  };
  json blocks = json::array();
  std::string payload;
  for (const Block& block : Blocks(agent, moments)) {
    blocks.push_back({{"name", block.name}, {"count", block.data->size()}});
    AppendLittleEndian(payload, *block.data);
  }
  manifest["blocks"] = blocks;

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Throw(ErrorCode::kIoError, "cannot open " + path + " for writing");
  out << manifest.dump() << '\n';
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) Throw(ErrorCode::kIoError, "failed writing " + path);
}

LoadedModel LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Throw(ErrorCode::kIoError, "cannot open " + path);
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  const std::size_t newline = bytes.find('\n');
  if (newline == std::string::npos) Mismatch(path, "missing manifest line");

  json manifest;
  SacConfig cfg;
  int state_dim = 0;
  int action_dim = 0;
  double alpha_max = 0.0;
  std::vector<int> policy_sizes;
  std::vector<int> critic_sizes;
  json listed;
  json steps;
  try {
    manifest = json::parse(bytes.substr(0, newline));
    if (manifest.at("format").get<std::string>() != kModelFormatName) {
      Mismatch(path, "not a model file");
    }
    const int version = manifest.at("version").get<int>();
    if (version != kModelFormatVersion) {
      Mismatch(path, "unsupported format version " + std::to_string(version));
    }
    state_dim = manifest.at("state_dim").get<int>();
    action_dim = manifest.at("action_dim").get<int>();
    alpha_max = manifest.at("alpha_max").get<double>();
    const json& c = manifest.at("config");
    cfg.gamma = c.at("gamma").get<double>();
    cfg.lr = c.at("lr").get<double>();
    cfg.batch = c.at("batch").get<int>();
    cfg.warmup = c.at("warmup").get<int>();
    cfg.updates_per_step = c.at("updates_per_step").get<int>();
    cfg.target_entropy = c.at("target_entropy").get<double>();
    cfg.total_steps = c.at("total_steps").get<std::int64_t>();
    cfg.buffer_capacity = c.at("buffer_capacity").get<std::int64_t>();
    cfg.tau = c.at("tau").get<double>();
    cfg.hidden = c.at("hidden").get<int>();
    cfg.init_log_beta = c.at("init_log_beta").get<double>();
    cfg.reward_scale = c.at("reward_scale").get<double>();
    cfg.seed = c.at("seed").get<std::uint64_t>();
    policy_sizes = manifest.at("policy_sizes").get<std::vector<int>>();
    critic_sizes = manifest.at("critic_sizes").get<std::vector<int>>();
    listed = manifest.at("blocks");
    steps = manifest.at("adam_steps");
  } catch (const json::exception& e) {
    Mismatch(path, std::string("bad manifest: ") + e.what());
  }

  auto agent = std::make_shared<Agent>(state_dim, action_dim, cfg);
  if (policy_sizes != agent->policy().sizes() ||
      critic_sizes != agent->q1().sizes()) {
    Mismatch(path, "layer sizes do not match the configuration");
  }
  Vec moments[8] = {
      Vec::Zero(agent->policy().params().size()),
      Vec::Zero(agent->policy().params().size()),
      Vec::Zero(agent->q1().params().size()),
      Vec::Zero(agent->q1().params().size()),
      Vec::Zero(agent->q2().params().size()),
      Vec::Zero(agent->q2().params().size()),
      Vec::Zero(1),
      Vec::Zero(1)};
  const std::vector<Block> blocks = Blocks(*agent, moments);
  if (!listed.is_array() || listed.size() != blocks.size()) {
    Mismatch(path, "unexpected block list");
  }

  std::size_t offset = newline + 1;
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    Vec& target = *blocks[i].data;
    if (!listed[i].is_object() ||
        listed[i].value("name", std::string()) != blocks[i].name ||
        listed[i].value("count", Eigen::Index{-1}) != target.size()) {
      Mismatch(path, std::string("unexpected block ") + blocks[i].name);
    }
    const std::size_t need = static_cast<std::size_t>(target.size()) * 8;
    if (bytes.size() - offset < need) Mismatch(path, "truncated parameter data");
    for (Eigen::Index k = 0; k < target.size(); ++k) {
      target(k) = ReadLittleEndian(data + offset + 8 * k);
    }
    offset += need;
  }
  if (offset != bytes.size()) Mismatch(path, "trailing bytes after parameters");

  try {
    agent->policy_opt().SetState(moments[0], moments[1],
                                 steps.at("policy").get<std::int64_t>());
    agent->q1_opt().SetState(moments[2], moments[3],
                             steps.at("q1").get<std::int64_t>());
    agent->q2_opt().SetState(moments[4], moments[5],
                             steps.at("q2").get<std::int64_t>());
    agent->beta_opt().SetState(moments[6], moments[7],
                               steps.at("beta").get<std::int64_t>());
  } catch (const json::exception& e) {
    Mismatch(path, std::string("bad optimizer state: ") + e.what());
  }
  return LoadedModel{std::move(agent), alpha_max};
}

}  // namespace sac
}  // namespace srgov
