#pragma once

#include <cstdint>
#include <vector>

#include "ipp/geometry.hpp"

namespace ipp {

constexpr double kSpeedOfLight = 299792458.0;  // m/s

// Free-space path-loss distance clamp; keeps the field finite near the source.
constexpr double kMinPathLossDistance = 1.0;  // m

struct RfSource {
    Vec2 position;
    double tx_power_dbm = 30.0;
    double frequency_hz = 146e6;
    double gain_tx_dbi = 6.0;
    double gain_rx_dbi = 2.0;
    double shadowing_sigma_db = 0.0;
    double shadowing_length_m = 1000.0;
    std::uint64_t seed = 0;

    double wavelength() const { return kSpeedOfLight / frequency_hz; }
    void validate() const;
};

// Spatially correlated dB offsets on a regular lattice; lognormal shadowing
// in linear units is Gaussian in dB. Same seed regenerates bit-identical grids.
struct ShadowField {
    Vec2 origin;
    double spacing = 0.0;
    int nx = 0;
    int ny = 0;
    std::uint64_t seed = 0;
    std::vector<double> grid;  // dB, row-major

    double at(const Vec2& p) const;  // bilinear; throws DomainError outside coverage
    static ShadowField zero();       // no shadowing anywhere
    bool empty() const { return grid.empty(); }
};

ShadowField make_shadow_field(const Region& region, double spacing, const RfSource& src);

// Free-space path loss in dB; d clamped below kMinPathLossDistance. G is linear.
double path_loss_db(double d, double lambda, double gain_linear);

// Received power at p: tx power + antenna gains - path loss + shadow offset.
double rf_truth(const Vec2& p, const RfSource& src, const ShadowField& shadow);

}  // namespace ipp
