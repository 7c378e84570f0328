#include "sgail/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sgail {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

} // namespace

Config Config::parse(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    int lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) +
                                                     ": empty key");
        cfg.entries_[key] = value;
    }
    return cfg;
}

Config Config::load(const std::string& path) { return parse(read_text_file(path)); }

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string Config::get(const std::string& key, const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

int Config::get_int(const std::string& key, int fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    try {
        return std::stoi(it->second);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "' is not an integer");
    }
}

double Config::get_double(const std::string& key, double fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "' is not a number");
    }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("config key '" + key + "' is not a boolean");
}

std::vector<int> Config::get_int_list(const std::string& key, std::vector<int> fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::vector<int> out;
    for (const auto& part : split(it->second, ',')) {
        const std::string p = trim(part);
        if (p.empty()) continue;
        out.push_back(std::stoi(p));
    }
    return out;
}

std::vector<std::uint64_t> Config::get_seed_list(const std::string& key,
                                                 std::vector<std::uint64_t> fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::vector<std::uint64_t> out;
    for (const auto& part : split(it->second, ',')) {
        const std::string p = trim(part);
        if (p.empty()) continue;
        out.push_back(std::stoull(p));
    }
    if (out.empty()) throw std::invalid_argument("config key '" + key + "' has no seeds");
    return out;
}

void Config::set(const std::string& key, const std::string& value) { entries_[key] = value; }

std::unique_ptr<Env> make_env(const Config& cfg) {
    const std::string id = cfg.get("env", "grid");
    if (id == "grid") {
        const int horizon = cfg.get_int("grid.horizon", 60);
        if (cfg.has("grid.layout"))
            return std::make_unique<GridEnv>(
                GridWorld::from_layout(read_text_file(cfg.get("grid.layout", "")), horizon));
        return std::make_unique<GridEnv>(GridWorld::default_world(horizon));
    }
    if (id == "reacher") {
        ReacherWorld w;
        w.l1 = cfg.get_double("reacher.l1", w.l1);
        w.l2 = cfg.get_double("reacher.l2", w.l2);
        w.dt = cfg.get_double("reacher.dt", w.dt);
        w.damping = cfg.get_double("reacher.damping", w.damping);
        w.torque_limit = cfg.get_double("reacher.torque_limit", w.torque_limit);
        w.success_radius = cfg.get_double("reacher.success_radius", 0.0);
        w.horizon = cfg.get_int("reacher.horizon", w.horizon);
        return std::make_unique<ReacherEnv>(std::move(w));
    }
    throw std::invalid_argument("unknown env '" + id + "'");
}

TrainConfig make_train_config(const Config& cfg) {
    TrainConfig tc;
    tc.variant = parse_variant(cfg.get("variant", "sgail"));
    if (cfg.has("erc")) tc.variant.erc = cfg.get_bool("erc", tc.variant.erc);
    tc.variant.info_lambda1 = cfg.get_double("train.info_lambda1", tc.variant.info_lambda1);
    tc.variant.info_lambda2 = cfg.get_double("train.info_lambda2", tc.variant.info_lambda2);
    tc.env_id = cfg.get("env", "grid");
    tc.expert_per_task = cfg.get_int("train.expert_per_task", tc.expert_per_task);
    tc.epochs = cfg.get_int("train.epochs", tc.epochs);
    tc.episodes_per_epoch = cfg.get_int("train.episodes_per_epoch", tc.episodes_per_epoch);
    tc.disc_updates = cfg.get_int("train.disc_updates", tc.disc_updates);
    tc.value_updates = cfg.get_int("train.value_updates", tc.value_updates);
    tc.gamma = cfg.get_double("train.gamma", tc.gamma);
    tc.lr_disc = cfg.get_double("train.lr_disc", tc.lr_disc);
    tc.lr_value = cfg.get_double("train.lr_value", tc.lr_value);
    tc.seed = static_cast<std::uint64_t>(cfg.get_double("train.seed", 0));
    tc.eval_interval = cfg.get_int("train.eval_interval", tc.eval_interval);
    tc.eval_trials = cfg.get_int("train.eval_trials", tc.eval_trials);
    tc.eval_sweep = cfg.get_bool("train.eval_sweep", tc.eval_sweep);
    tc.hidden = cfg.get_int_list("net.hidden", tc.hidden);
    tc.trpo.kl_limit = cfg.get_double("trpo.kl_limit", tc.trpo.kl_limit);
    tc.trpo.cg_iterations = cfg.get_int("trpo.cg_iterations", tc.trpo.cg_iterations);
    tc.trpo.cg_damping = cfg.get_double("trpo.cg_damping", tc.trpo.cg_damping);
    tc.trpo.line_search_shrink =
        cfg.get_double("trpo.line_search_shrink", tc.trpo.line_search_shrink);
    tc.trpo.max_backtracks = cfg.get_int("trpo.max_backtracks", tc.trpo.max_backtracks);
    tc.trpo.fvp_batch_cap = cfg.get_int("trpo.fvp_batch_cap", tc.trpo.fvp_batch_cap);
    const std::string mode = cfg.get("beta.mode", "constant");
    if (mode == "constant")
        tc.beta.mode = BetaSchedule::Mode::Constant;
    else if (mode == "linear")
        tc.beta.mode = BetaSchedule::Mode::Linear;
    else
        throw std::invalid_argument("unknown beta.mode '" + mode + "'");
    tc.beta.start = cfg.get_double("beta.start", tc.beta.start);
    tc.beta.end = cfg.get_double("beta.end",
                                 tc.beta.mode == BetaSchedule::Mode::Constant ? tc.beta.start
                                                                              : tc.beta.end);
    if (tc.beta.mode == BetaSchedule::Mode::Constant) tc.beta.end = tc.beta.start;
    tc.beta.span = cfg.get_int("beta.span", std::max(1, tc.epochs / 2));
    return tc;
}

std::string metrics_csv_header(int n_tasks) {
    std::string h = "epoch,beta,d_loss,v_loss,surrogate_gain";
    for (int t = 0; t < n_tasks; ++t) h += ",success_task" + std::to_string(t + 1);
    return h;
}

std::string format_metrics_row(const MetricsRecord& rec) {
    std::string row = std::to_string(rec.epoch) + "," + fmt(rec.beta) + "," + fmt(rec.d_loss) +
                      "," + fmt(rec.v_loss) + "," + fmt(rec.surrogate_gain);
    for (int s : rec.success) row += "," + std::to_string(s);
    return row;
}

void write_metrics_csv(const std::string& path, const std::vector<MetricsRecord>& records,
                       int n_tasks) {
    std::string out = metrics_csv_header(n_tasks) + "\n";
    for (const auto& rec : records) {
        if (static_cast<int>(rec.success.size()) != n_tasks)
            throw std::invalid_argument("metrics record task count mismatch");
        out += format_metrics_row(rec) + "\n";
    }
    write_text_file(path, out);
}

std::vector<MetricsRecord> read_metrics_csv(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty metrics file " + path);
    const auto header = split(trim(line), ',');
    if (header.size() < 6 || header[0] != "epoch")
        throw std::runtime_error("unexpected metrics schema in " + path);

    std::vector<MetricsRecord> records;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        auto cells = split(line, ',');
        if (cells.size() != header.size())
            throw std::runtime_error("ragged metrics row in " + path);
        MetricsRecord rec;
        rec.epoch = std::stoi(cells[0]);
        rec.beta = std::stod(cells[1]);
        rec.d_loss = std::stod(cells[2]);
        rec.v_loss = std::stod(cells[3]);
        rec.surrogate_gain = std::stod(cells[4]);
        for (std::size_t i = 5; i < cells.size(); ++i) rec.success.push_back(std::stoi(cells[i]));
        records.push_back(std::move(rec));
    }
    return records;
}

HeatmapGrid compute_value_heatmap(const ValueFunction& value, const GridEnv& env, int task) {
    const GridWorld& world = env.world();
    if (task < 0 || task >= world.num_tasks())
        throw std::invalid_argument("heatmap task out of range");
    HeatmapGrid grid;
    grid.values.assign(GridWorld::kHeight, std::vector<double>(GridWorld::kWidth, 0.0));
    grid.blocked.assign(GridWorld::kHeight, std::vector<bool>(GridWorld::kWidth, false));
    const auto task_vec = TaskVariable::make(task, env.task_dim());
    for (int y = 0; y < GridWorld::kHeight; ++y)
        for (int x = 0; x < GridWorld::kWidth; ++x) {
            if (world.is_puddle({x, y})) {
                grid.blocked[y][x] = true;
                continue;
            }
            const std::vector<double> state = {double(x), double(y)};
            grid.values[y][x] = value.value(env.featurize(state), task_vec.onehot);
        }
    return grid;
}

void write_heatmap_csv(const std::string& path, const HeatmapGrid& grid) {
    std::string out;
    for (std::size_t y = 0; y < grid.values.size(); ++y) {
        for (std::size_t x = 0; x < grid.values[y].size(); ++x) {
            if (x > 0) out += ",";
            char buf[32];
            if (grid.blocked[y][x]) {
                out += "NA";
            } else {
                std::snprintf(buf, sizeof(buf), "%.17g", grid.values[y][x]);
                out += buf;
            }
        }
        out += "\n";
    }
    write_text_file(path, out);
}

HeatmapGrid read_heatmap_csv(const std::string& path) {
    std::istringstream in(read_text_file(path));
    HeatmapGrid grid;
    for (std::string line; std::getline(in, line);) {
        line = trim(line);
        if (line.empty()) continue;
        std::vector<double> row;
        std::vector<bool> mask;
        for (const auto& cell : split(line, ',')) {
            const std::string c = trim(cell);
            if (c == "NA") {
                row.push_back(0.0);
                mask.push_back(true);
            } else {
                row.push_back(std::stod(c));
                mask.push_back(false);
            }
        }
        grid.values.push_back(std::move(row));
        grid.blocked.push_back(std::move(mask));
    }
    return grid;
}

GridCell heatmap_argmax(const HeatmapGrid& grid) {
    GridCell best{-1, -1};
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < grid.values.size(); ++y)
        for (std::size_t x = 0; x < grid.values[y].size(); ++x)
            if (!grid.blocked[y][x] && grid.values[y][x] > best_value) {
                best_value = grid.values[y][x];
                best = {static_cast<int>(x), static_cast<int>(y)};
            }
    return best;
}

void export_trajectories_csv(const std::string& path, const std::vector<Trajectory>& trajs) {
    std::string out = "episode,t";
    if (!trajs.empty() && !trajs[0].steps.empty()) {
        const auto& first = trajs[0].steps[0];
        for (std::size_t i = 0; i < first.state.size(); ++i)
            out += ",s" + std::to_string(i);
        for (std::size_t i = 0; i < first.action.size(); ++i)
            out += ",a" + std::to_string(i);
    }
    out += ",task\n";
    for (std::size_t e = 0; e < trajs.size(); ++e) {
        const int task = trajs[e].task.index();
        for (std::size_t t = 0; t < trajs[e].steps.size(); ++t) {
            const auto& step = trajs[e].steps[t];
            out += std::to_string(e) + "," + std::to_string(t);
            for (double v : step.state) out += "," + fmt(v);
            for (double v : step.action) out += "," + fmt(v);
            out += "," + std::to_string(task) + "\n";
        }
    }
    write_text_file(path, out);
}

std::vector<Trajectory> read_trajectories_csv(const std::string& path, int state_dim,
                                              int action_dim, int task_dim) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty trajectory file " + path);
    std::vector<Trajectory> trajs;
    int cur_episode = -1;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        auto cells = split(line, ',');
        if (static_cast<int>(cells.size()) != 2 + state_dim + action_dim + 1)
            throw std::runtime_error("ragged trajectory row in " + path);
        const int episode = std::stoi(cells[0]);
        Step step;
        for (int i = 0; i < state_dim; ++i) step.state.push_back(std::stod(cells[2 + i]));
        for (int i = 0; i < action_dim; ++i)
            step.action.push_back(std::stod(cells[2 + state_dim + i]));
        const int task = std::stoi(cells.back());
        if (episode != cur_episode) {
            trajs.push_back({TaskVariable::make(task, task_dim), {}, false});
            cur_episode = episode;
        }
        if (!trajs.back().steps.empty())
            trajs.back().steps.back().next_state = step.state;
        trajs.back().steps.push_back(std::move(step));
    }
    // next_state of each episode's final row is unrecoverable from this
    // schema; callers only rely on (state, action) pairs.
    return trajs;
}

std::vector<CurvePoint> median_curves(
    const std::map<std::string, std::vector<std::vector<MetricsRecord>>>& runs) {
    std::vector<CurvePoint> out;
    for (const auto& [variant, seeds] : runs) {
        if (seeds.empty()) continue;
        const std::size_t n_records = seeds[0].size();
        for (const auto& run : seeds)
            if (run.size() != n_records)
                throw std::invalid_argument("runs of '" + variant +
                                            "' have mismatched record counts");
        for (std::size_t r = 0; r < n_records; ++r) {
            CurvePoint pt;
            pt.variant = variant;
            pt.epoch = seeds[0][r].epoch;
            const std::size_t n_tasks = seeds[0][r].success.size();
            for (std::size_t t = 0; t < n_tasks; ++t) {
                std::vector<double> vals;
                for (const auto& run : seeds) vals.push_back(run[r].success.at(t));
                std::sort(vals.begin(), vals.end());
                const std::size_t n = vals.size();
                pt.median_success.push_back(n % 2 == 1 ? vals[n / 2]
                                                       : 0.5 * (vals[n / 2 - 1] + vals[n / 2]));
            }
            out.push_back(std::move(pt));
        }
    }
    return out;
}

void write_curves_csv(const std::string& path, const std::vector<CurvePoint>& curves) {
    std::size_t n_tasks = 0;
    for (const auto& pt : curves) n_tasks = std::max(n_tasks, pt.median_success.size());
    std::string out = "variant,epoch";
    for (std::size_t t = 0; t < n_tasks; ++t)
        out += ",median_success_task" + std::to_string(t + 1);
    out += "\n";
    for (const auto& pt : curves) {
        out += pt.variant + "," + std::to_string(pt.epoch);
        for (std::size_t t = 0; t < n_tasks; ++t)
            out += "," + (t < pt.median_success.size() ? fmt(pt.median_success[t]) : "");
        out += "\n";
    }
    write_text_file(path, out);
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t file_hash(const std::string& path) { return fnv1a64(read_text_file(path)); }

void write_manifest(const std::string& path, const std::vector<std::string>& files,
                    const std::string& base_dir) {
    std::vector<std::string> sorted = files;
    std::sort(sorted.begin(), sorted.end());
    std::string out;
    for (const auto& rel : sorted) {
        char buf[24];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(
                          file_hash((std::filesystem::path(base_dir) / rel).string())));
        out += std::string(buf) + "  " + rel + "\n";
    }
    write_text_file(path, out);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file " + path);
    out << content;
}

} // namespace sgail
