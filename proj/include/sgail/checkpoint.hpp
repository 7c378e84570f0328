#pragma once

#include <map>
#include <string>
#include <vector>

#include "sgail/approximator.hpp"

namespace sgail {

/// Versioned text container for model snapshots: metadata lines plus one
/// section per network (spec descriptor + flat parameter vector + optional
/// named extras such as a Gaussian policy's log-stddev). Round-trips
/// parameters exactly.
struct Checkpoint {
    static constexpr const char* kMagic = "SGAIL1";

    struct NetEntry {
        std::string name;
        ApproximatorSpec spec;
        std::vector<double> params;
        std::map<std::string, std::vector<double>> extras;
    };

    std::map<std::string, std::string> meta;
    std::vector<NetEntry> nets;

    const NetEntry& net(const std::string& name) const;
    bool has_net(const std::string& name) const;
    std::string meta_at(const std::string& key) const;

    void save(const std::string& path) const;
    std::string serialize() const;
    static Checkpoint load(const std::string& path);
    static Checkpoint parse(const std::string& text);
};

} // namespace sgail
