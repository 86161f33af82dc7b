#include "ipp/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ipp/errors.hpp"

namespace ipp {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<Vec2> parse_point_list(const std::string& text) {
    // "x,y; x,y; ..."
    std::vector<Vec2> pts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto comma = item.find(',');
        if (comma == std::string::npos)
            throw ConfigError("expected 'x,y' pair in point list: " + item);
        pts.push_back({std::stod(item.substr(0, comma)), std::stod(item.substr(comma + 1))});
    }
    return pts;
}

}  // namespace

IniFile IniFile::parse_string(const std::string& text) {
    IniFile ini;
    std::stringstream ss(text);
    std::string line;
    std::string section = "";
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("malformed section header at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key=value at line " + std::to_string(lineno));
        ini.sections_[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return ini;
}

IniFile IniFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str());
}

bool IniFile::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string IniFile::get(const std::string& section, const std::string& key,
                         const std::string& fallback) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return fallback;
    const auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

double IniFile::get_double(const std::string& section, const std::string& key,
                           double fallback) const {
    if (!has(section, key)) return fallback;
    try {
        return std::stod(get(section, key, ""));
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for [" + section + "] " + key);
    }
}

long IniFile::get_long(const std::string& section, const std::string& key, long fallback) const {
    if (!has(section, key)) return fallback;
    try {
        return std::stol(get(section, key, ""));
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for [" + section + "] " + key);
    }
}

bool IniFile::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key, "");
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("bad boolean value for [" + section + "] " + key);
}

GpHyperparams PipelineConfig::planning_hyper() const {
    GpHyperparams h = sensor;
    h.sigma_n = sensor.sigma_n * level_noise;
    h.length_scales = {sensor.length_scales.x * level_length,
                       sensor.length_scales.y * level_length};
    return h;
}

void PipelineConfig::validate() const {
    region.validate();
    rf.validate();
    sensor.validate();
    if (depots.empty()) throw ConfigError("at least one depot is required");
    for (const auto& d : depots)
        if (!region.contains(d)) throw ConfigError("depot position is outside free space");
    if (task_count < 0) throw ConfigError("task count must be nonnegative");
    if (v0 <= 0.0) throw ConfigError("v0 must be positive");
    if (v0 <= wind.speed)
        throw ConfigError("airspeed v0 must exceed the wind speed");
    if (uav_speed <= 0.0 || uav_r_min <= 0.0)
        throw ConfigError("UAV speed and turn radius must be positive");
    if (sensing_period <= 0.0) throw ConfigError("sensing period must be positive");
    if (threads < 1) throw ConfigError("threads must be >= 1");
}

PipelineConfig default_config() {
    PipelineConfig cfg;
    cfg.region.bounds = {{0.0, 0.0}, {20000.0, 20000.0}};

    cfg.wind_kind = WindKind::Uniform;
    cfg.wind.speed = 10.0;
    cfg.wind.from_deg = 45.0;  // from the northeast
    cfg.wind_spacing = 500.0;

    cfg.rf.position = {10000.0, 10000.0};
    cfg.rf.tx_power_dbm = 30.0;
    cfg.rf.frequency_hz = 146e6;
    cfg.rf.gain_tx_dbi = 6.0;
    cfg.rf.gain_rx_dbi = 2.0;
    cfg.rf.shadowing_sigma_db = 4.0;
    cfg.rf.shadowing_length_m = 2000.0;
    cfg.shadow_spacing = 500.0;

    cfg.sensor.sigma_f = 30.0;
    cfg.sensor.sigma_n = 1.0;
    cfg.sensor.length_scales = {4000.0, 4000.0};
    cfg.prior_mean_dbm = 0.0;

    cfg.task_count = 12;
    cfg.grid_spacing = 2000.0;

    cfg.planner_samples = 2000;
    cfg.v0 = 100.0;

    cfg.depots = {{10000.0, 19000.0}, {1000.0, 1000.0}, {19000.0, 1000.0}};
    cfg.uav_speed = 100.0;
    cfg.uav_r_min = 50.0;
    cfg.sensing_period = 10.0;
    return cfg;
}

void apply_desk_scale(PipelineConfig& cfg) {
    const double factor = 2000.0 / cfg.region.bounds.width();
    auto scale_pt = [&](Vec2& p) {
        p.x = cfg.region.bounds.min.x + (p.x - cfg.region.bounds.min.x) * factor;
        p.y = cfg.region.bounds.min.y + (p.y - cfg.region.bounds.min.y) * factor;
    };
    for (auto& obs : cfg.region.obstacles)
        for (auto& v : obs) scale_pt(v);
    scale_pt(cfg.rf.position);
    for (auto& d : cfg.depots) scale_pt(d);
    cfg.region.bounds.max = {cfg.region.bounds.min.x + cfg.region.bounds.width() * factor,
                             cfg.region.bounds.min.y + cfg.region.bounds.height() * factor};

    cfg.sensor.length_scales.x *= factor;
    cfg.sensor.length_scales.y *= factor;
    cfg.rf.shadowing_length_m *= factor;
    cfg.wind_spacing *= factor;
    cfg.shadow_spacing *= factor;
    cfg.grid_spacing *= factor;
    cfg.planner_samples = std::min(cfg.planner_samples, 500);
    cfg.sensing_period = 2.0;
    cfg.ga.generations = std::min(cfg.ga.generations, 200);
}

PipelineConfig config_from_ini(const IniFile& ini) {
    PipelineConfig cfg = default_config();

    cfg.region.bounds.min = {ini.get_double("scenario", "region_min_x", cfg.region.bounds.min.x),
                             ini.get_double("scenario", "region_min_y", cfg.region.bounds.min.y)};
    cfg.region.bounds.max = {ini.get_double("scenario", "region_max_x", cfg.region.bounds.max.x),
                             ini.get_double("scenario", "region_max_y", cfg.region.bounds.max.y)};
    const auto scenario = ini.sections().find("scenario");
    if (scenario != ini.sections().end()) {
        for (const auto& [key, value] : scenario->second) {
            if (key.rfind("obstacle", 0) == 0) cfg.region.obstacles.push_back(parse_point_list(value));
        }
    }

    cfg.wind_kind = parse_wind_kind(ini.get("wind", "kind", "uniform"));
    cfg.wind.speed = ini.get_double("wind", "speed", cfg.wind.speed);
    cfg.wind.from_deg = ini.get_double("wind", "from_deg", cfg.wind.from_deg);
    cfg.wind.center = {ini.get_double("wind", "center_x", 0.0),
                       ini.get_double("wind", "center_y", 0.0)};
    cfg.wind.radius = ini.get_double("wind", "radius", 0.0);
    cfg.wind.length = ini.get_double("wind", "length", 0.0);
    cfg.wind_spacing = ini.get_double("wind", "spacing", cfg.wind_spacing);

    cfg.rf.position = {ini.get_double("rf", "x", cfg.rf.position.x),
                       ini.get_double("rf", "y", cfg.rf.position.y)};
    cfg.rf.tx_power_dbm = ini.get_double("rf", "tx_power_dbm", cfg.rf.tx_power_dbm);
    cfg.rf.frequency_hz = ini.get_double("rf", "frequency_hz", cfg.rf.frequency_hz);
    cfg.rf.gain_tx_dbi = ini.get_double("rf", "gain_tx_dbi", cfg.rf.gain_tx_dbi);
    cfg.rf.gain_rx_dbi = ini.get_double("rf", "gain_rx_dbi", cfg.rf.gain_rx_dbi);
    cfg.rf.shadowing_sigma_db = ini.get_double("rf", "shadow_sigma_db", cfg.rf.shadowing_sigma_db);
    cfg.rf.shadowing_length_m = ini.get_double("rf", "shadow_length_m", cfg.rf.shadowing_length_m);
    cfg.shadow_spacing = ini.get_double("rf", "spacing", cfg.shadow_spacing);

    cfg.sensor.sigma_f = ini.get_double("gp", "sigma_f", cfg.sensor.sigma_f);
    cfg.sensor.sigma_n = ini.get_double("gp", "sigma_n", cfg.sensor.sigma_n);
    cfg.sensor.length_scales = {ini.get_double("gp", "length_x", cfg.sensor.length_scales.x),
                                ini.get_double("gp", "length_y", cfg.sensor.length_scales.y)};
    cfg.prior_mean_dbm = ini.get_double("gp", "prior_mean_dbm", cfg.prior_mean_dbm);
    cfg.level_noise = ini.get_double("placement", "level_noise", cfg.level_noise);
    cfg.level_length = ini.get_double("placement", "level_length", cfg.level_length);

    cfg.task_count = static_cast<int>(ini.get_long("placement", "tasks", cfg.task_count));
    cfg.grid_spacing = ini.get_double("placement", "grid_spacing", cfg.grid_spacing);
    cfg.placement_restarts =
        static_cast<int>(ini.get_long("placement", "restarts", cfg.placement_restarts));

    cfg.planner_samples = static_cast<int>(ini.get_long("planner", "samples", cfg.planner_samples));
    cfg.planner_gamma = ini.get_double("planner", "gamma", cfg.planner_gamma);
    cfg.v0 = ini.get_double("planner", "v0", cfg.v0);

    cfg.ga.population = static_cast<int>(ini.get_long("routing", "population", cfg.ga.population));
    cfg.ga.generations =
        static_cast<int>(ini.get_long("routing", "generations", cfg.ga.generations));
    cfg.ga.tournament = static_cast<int>(ini.get_long("routing", "tournament", cfg.ga.tournament));
    cfg.ga.crossover_rate = ini.get_double("routing", "crossover", cfg.ga.crossover_rate);
    cfg.ga.mutation_swap = ini.get_double("routing", "mut_swap", cfg.ga.mutation_swap);
    cfg.ga.mutation_inversion =
        ini.get_double("routing", "mut_inversion", cfg.ga.mutation_inversion);
    cfg.ga.mutation_split = ini.get_double("routing", "mut_split", cfg.ga.mutation_split);
    cfg.ga.elites = static_cast<int>(ini.get_long("routing", "elites", cfg.ga.elites));

    if (ini.has("mission", "depots")) cfg.depots = parse_point_list(ini.get("mission", "depots", ""));
    cfg.uav_speed = ini.get_double("mission", "speed", cfg.uav_speed);
    cfg.uav_r_min = ini.get_double("mission", "r_min", cfg.uav_r_min);
    cfg.sensing_period = ini.get_double("mission", "period", cfg.sensing_period);
    cfg.refit_every = static_cast<int>(ini.get_long("mission", "refit_every", cfg.refit_every));
    cfg.refit = ini.get_bool("mission", "refit", cfg.refit);
    cfg.tracking_dt = ini.get_double("mission", "dt", cfg.tracking_dt);
    cfg.mission_max_time = ini.get_double("mission", "max_time", cfg.mission_max_time);

    cfg.seed = static_cast<std::uint64_t>(ini.get_long("run", "seed", static_cast<long>(cfg.seed)));
    cfg.threads = static_cast<int>(ini.get_long("run", "threads", cfg.threads));
    cfg.out_dir = ini.get("output", "dir", cfg.out_dir);

    if (ini.get_bool("run", "desk_scale", false)) apply_desk_scale(cfg);
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    return config_from_ini(IniFile::parse_file(path));
}

}  // namespace ipp
