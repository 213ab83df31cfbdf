#include "satoff/agents/persistence.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace satoff::agents {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifest = "manifest.json";

json scale_json(const ObservationScale& s) {
    return {{"local_queue_len", s.maxima[0]},
            {"server_queue_len", s.maxima[1]},
            {"num_communicating", s.maxima[2]},
            {"num_arrivals_last_slot", s.maxima[3]}};
}

ObservationScale scale_from(const json& j) {
    ObservationScale s;
    s.maxima = {j.at("local_queue_len").get<double>(), j.at("server_queue_len").get<double>(),
                j.at("num_communicating").get<double>(), j.at("num_arrivals_last_slot").get<double>()};
    return s;
}

// Writes next to the destination and renames, so readers never see a partial file.
void save_net(const nn::Mlp& net, const fs::path& path) {
    const fs::path tmp = path.string() + ".tmp";
    net.save(tmp);
    fs::rename(tmp, path);
}

void write_manifest(const json& manifest, const fs::path& dir) {
    const fs::path tmp = dir / (std::string(kManifest) + ".tmp");
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw nn::CheckpointError("cannot write '" + tmp.string() + "'");
        out << manifest.dump(2) << '\n';
        if (!out) throw nn::CheckpointError("failed writing '" + tmp.string() + "'");
    }
    fs::rename(tmp, dir / kManifest);
}

nn::Mlp load_net(const fs::path& dir, const json& networks, const char* key) {
    const fs::path path = dir / networks.at(key).get<std::string>();
    if (!fs::exists(path)) throw MissingCheckpointError("missing network checkpoint '" + path.string() + "'");
    return nn::Mlp::load(path);
}

}  // namespace

bool has_manifest(const fs::path& dir) { return fs::is_regular_file(dir / kManifest); }

void save_policy(const DdpgAgent& agent, const fs::path& dir) {
    fs::create_directories(dir);
    save_net(agent.actor(), dir / "actor.bin");
    save_net(agent.critic(), dir / "critic.bin");
    write_manifest({{"schema_version", kManifestSchemaVersion},
                    {"policy", to_string(PolicyKind::DDPG)},
                    {"observation_scale", scale_json(agent.scale())},
                    {"networks", {{"actor", "actor.bin"}, {"critic", "critic.bin"}}}},
                   dir);
}

void save_policy(const DqnAgent& agent, const fs::path& dir) {
    fs::create_directories(dir);
    save_net(agent.q_net(), dir / "q.bin");
    const ActionGrid& g = agent.grid();
    write_manifest({{"schema_version", kManifestSchemaVersion},
                    {"policy", to_string(PolicyKind::DQN)},
                    {"observation_scale", scale_json(agent.scale())},
                    {"grid", {{"p_off", g.p_off_levels()}, {"sl_conf", g.conf_levels()}, {"sl_int", g.int_levels()}}},
                    {"networks", {{"q", "q.bin"}}}},
                   dir);
}

std::unique_ptr<Policy> load_policy(const fs::path& dir) {
    const fs::path manifest_path = dir / kManifest;
    std::ifstream in(manifest_path);
    if (!in) throw MissingCheckpointError("missing policy manifest '" + manifest_path.string() + "'");
    json m;
    try {
        in >> m;
        if (m.at("schema_version").get<int>() != kManifestSchemaVersion) {
            throw nn::CheckpointError("unsupported manifest schema_version in '" + manifest_path.string() + "'");
        }
        const PolicyKind kind = policy_kind_from_string(m.at("policy").get<std::string>());
        const ObservationScale scale = scale_from(m.at("observation_scale"));
        const json& nets = m.at("networks");
        switch (kind) {
            case PolicyKind::DDPG:
                return std::make_unique<DdpgAgent>(scale, load_net(dir, nets, "actor"), load_net(dir, nets, "critic"));
            case PolicyKind::DQN: {
                const json& g = m.at("grid");
                ActionGrid grid(g.at("p_off").get<std::vector<double>>(), g.at("sl_conf").get<std::vector<double>>(),
                                g.at("sl_int").get<std::vector<double>>());
                return std::make_unique<DqnAgent>(scale, std::move(grid), load_net(dir, nets, "q"));
            }
            default: return std::make_unique<StaticPolicy>(kind);
        }
    } catch (const json::exception& e) {
        throw nn::CheckpointError("malformed manifest '" + manifest_path.string() + "': " + e.what());
    }
}

}  // namespace satoff::agents
