#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sgail/env.hpp"
#include "sgail/models.hpp"
#include "sgail/trainer.hpp"

namespace sgail {

/// Flat key = value configuration with dotted keys; '#' starts a comment.
class Config {
  public:
    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    int get_int(const std::string& key, int fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<int> get_int_list(const std::string& key, std::vector<int> fallback) const;
    std::vector<std::uint64_t> get_seed_list(const std::string& key,
                                             std::vector<std::uint64_t> fallback) const;
    void set(const std::string& key, const std::string& value);

    const std::map<std::string, std::string>& entries() const { return entries_; }

  private:
    std::map<std::string, std::string> entries_;
};

/// Environment and train configuration assembled from a Config.
std::unique_ptr<Env> make_env(const Config& cfg);
TrainConfig make_train_config(const Config& cfg);

std::string metrics_csv_header(int n_tasks);
std::string format_metrics_row(const MetricsRecord& rec);
void write_metrics_csv(const std::string& path, const std::vector<MetricsRecord>& records,
                       int n_tasks);
std::vector<MetricsRecord> read_metrics_csv(const std::string& path);

/// Per-task value heatmap over the 11x11 grid; puddle cells carry no value.
struct HeatmapGrid {
    std::vector<std::vector<double>> values; // [y][x]
    std::vector<std::vector<bool>> blocked;  // puddle mask
};

HeatmapGrid compute_value_heatmap(const ValueFunction& value, const GridEnv& env, int task);
/// CSV layout: row index = y (first row y = 0), column = x; puddles as "NA".
void write_heatmap_csv(const std::string& path, const HeatmapGrid& grid);
HeatmapGrid read_heatmap_csv(const std::string& path);
/// Cell with the highest value (ignoring blocked cells).
GridCell heatmap_argmax(const HeatmapGrid& grid);

void export_trajectories_csv(const std::string& path, const std::vector<Trajectory>& trajs);
std::vector<Trajectory> read_trajectories_csv(const std::string& path, int state_dim,
                                              int action_dim, int task_dim);

/// Curve summary: per (variant, epoch), the across-seed median success of
/// each task. Input: variant name -> one metrics sequence per seed.
struct CurvePoint {
    std::string variant;
    int epoch = 0;
    std::vector<double> median_success;
};
std::vector<CurvePoint> median_curves(
    const std::map<std::string, std::vector<std::vector<MetricsRecord>>>& runs);
void write_curves_csv(const std::string& path, const std::vector<CurvePoint>& curves);

std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t file_hash(const std::string& path);
/// Writes "<hex-hash>  <name>" per file (names relative to the manifest dir).
void write_manifest(const std::string& path, const std::vector<std::string>& files,
                    const std::string& base_dir);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace sgail
