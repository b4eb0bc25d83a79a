#pragma once

// Model file: one line of JSON (the manifest) terminated by '\n', followed
// by the parameter blocks listed in the manifest, each a run of
// little-endian IEEE-754 doubles. docs/model_format.md gives the layout.

#include <memory>
#include <string>

#include "srgov/sac/agent.h"

namespace srgov {
namespace sac {

inline constexpr int kModelFormatVersion = 1;
inline constexpr const char* kModelFormatName = "srgov-sac-model";

struct LoadedModel {
  std::shared_ptr<const Agent> agent;
  double alpha_max = 0.0;
};

/// Throws IoError if the file cannot be written.
void SaveModel(const Agent& agent, double alpha_max, const std::string& path);

/// Throws IoError if the file cannot be read, SchemaMismatch on a wrong
/// format name or version, malformed manifest, or truncated or oversized
/// parameter data.
LoadedModel LoadModel(const std::string& path);

}  // namespace sac
}  // namespace srgov
