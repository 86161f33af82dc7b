#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ipp/geometry.hpp"
#include "ipp/gp.hpp"
#include "ipp/rf.hpp"
#include "ipp/routing.hpp"
#include "ipp/wind.hpp"

namespace ipp {

// Key/value config file with [section] headers and '#' comments.
class IniFile {
public:
    static IniFile parse_file(const std::string& path);   // throws ConfigError
    static IniFile parse_string(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long get_long(const std::string& section, const std::string& key, long fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

struct PipelineConfig {
    // scenario
    Region region;
    WindKind wind_kind = WindKind::Uniform;
    WindParams wind;
    double wind_spacing = 500.0;
    RfSource rf;
    double shadow_spacing = 500.0;

    // gp / sensor model
    GpHyperparams sensor;
    double prior_mean_dbm = 0.0;
    double level_noise = 0.1;   // planning sigma_n = sensor sigma_n * level_noise
    double level_length = 1.5;  // planning length scales = sensor scales * level_length

    // placement
    int task_count = 12;
    double grid_spacing = 2000.0;
    int placement_restarts = 5;

    // planner
    int planner_samples = 2000;
    double planner_gamma = 2.0;
    double v0 = 100.0;

    // routing
    GaParams ga;

    // mission
    std::vector<Vec2> depots;
    double uav_speed = 100.0;
    double uav_r_min = 50.0;
    double sensing_period = 10.0;
    int refit_every = 20;
    bool refit = true;
    double tracking_dt = 0.1;
    double mission_max_time = 1e5;

    // run
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_dir = "out";

    GpHyperparams planning_hyper() const;
    void validate() const;  // throws ConfigError
};

// Full-scale scenario: 20 km region, 10 m/s wind from the northeast,
// 146 MHz source in the center, 3 UAVs.
PipelineConfig default_config();

// Shrinks the geometry to a 2 km region (length scales with it) and tightens
// the sensing period so test missions finish in seconds.
void apply_desk_scale(PipelineConfig& cfg);

PipelineConfig load_config(const std::string& path);
PipelineConfig config_from_ini(const IniFile& ini);

}  // namespace ipp
