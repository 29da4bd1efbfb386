#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ringlase/counting.hpp"
#include "ringlase/laser.hpp"
#include "ringlase/ring.hpp"

namespace ringlase {

struct CurrentSweep {
    double start_ma = 60.0;
    double stop_ma = 115.0;
    double step_ma = 1.0;

    std::vector<double> points() const;
};

struct SpectraSettings {
    std::vector<double> powers_w{0.1e-3, 0.5e-3, 1.0e-3, 1.5e-3, 2.19e-3};
    std::size_t n_modes = 0;
    PumpPhase phase = PumpPhase::random;
};

struct CoincidenceSettings {
    double acquisition_s = 10.0;
    int half_bins = 100;
    std::vector<double> powers_w;
    double histogram_power_w = 2.157e-3;
};

struct BiphotonSettings {
    double signal_step_pm = 1.0;
    std::size_t signal_points = 401;
    double idler_step_pm = 2.0;
    std::size_t idler_points = 201;
    double rate_constant = 1e12;  // pairs/s per W^2
    PumpPhase phase = PumpPhase::coherent;
    std::vector<double> powers_w{0.7e-3, 0.95e-3, 1.2e-3, 1.45e-3};
};

struct AnalysisSettings {
    double truncation = 1e-12;
    std::vector<double> reference_schmidt{4.07, 2.75};
};

struct Scenario {
    std::string name = "default";
    std::optional<std::uint64_t> seed;
    std::string output_dir = "out";
    RingParams ring;
    bool energy_match = true;
    ThermalNonlinearParams thermal;
    LoopParams loop;
    CurrentSweep sweep;
    SpectraSettings spectra;
    DetectionChain detection;
    CoincidenceSettings coincidences;
    BiphotonSettings biphoton;
    AnalysisSettings analysis;

    /// Ring used by every computation: energy matched when requested.
    RingParams effective_ring() const;
    void validate() const;
};

/// Built-in calibrated values used for fields absent from the config.
Scenario default_scenario();

struct LoadedScenario {
    Scenario scenario;
    std::vector<std::string> defaulted;  // "block.field = value"
};

/// Throws ConfigError; parse errors carry line and column.
LoadedScenario parse_scenario(const std::string& text, const std::string& origin = "<config>");
LoadedScenario load_scenario(const std::string& path);

}  // namespace ringlase
