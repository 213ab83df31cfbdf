#pragma once

#include <filesystem>
#include <memory>
#include <stdexcept>

#include "satoff/agents/ddpg.hpp"
#include "satoff/agents/dqn.hpp"

namespace satoff::agents {

inline constexpr int kManifestSchemaVersion = 1;

class MissingCheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Writes `manifest.json` plus network checkpoints into `dir`. The manifest
/// records the policy kind, the observation normalisation constants and, for
/// the discrete agent, the action grid.
void save_policy(const DdpgAgent& agent, const std::filesystem::path& dir);
void save_policy(const DqnAgent& agent, const std::filesystem::path& dir);

/// Throws MissingCheckpointError when the manifest or a network file is absent.
std::unique_ptr<Policy> load_policy(const std::filesystem::path& dir);

bool has_manifest(const std::filesystem::path& dir);

}  // namespace satoff::agents
