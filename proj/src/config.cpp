#include "ringlase/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"

#include "ringlase/errors.hpp"
#include "ringlase/io.hpp"

namespace ringlase {

using nlohmann::json;

namespace {

// Config units -> SI
constexpr double kUm = 1e-6;
constexpr double kPm = 1e-12;
constexpr double kMw = 1e-3;
constexpr double kPs = 1e-12;
constexpr double kPmPerMw = 1e-9;   // pm/mW -> m/W
constexpr double kPerMw = 1e3;      // counts/s per mW -> per W

double parse_decimal(const std::string& s, const std::string& field) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e) throw ConfigError(field + ": not a number: \"" + s + "\"");
    return v;
}

double as_number(const json& j, const std::string& field) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_decimal(j.get<std::string>(), field);
    throw ConfigError(field + ": expected a number or decimal string");
}

std::uint64_t as_unsigned(const json& j, const std::string& field) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer()) {
        if (j.get<std::int64_t>() < 0) throw ConfigError(field + ": must be >= 0");
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    }
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError(field + ": not an unsigned integer: \"" + s + "\"");
        return v;
    }
    if (j.is_number_float()) {
        const double d = j.get<double>();
        if (d >= 0.0 && d == std::floor(d) && d < 9007199254740992.0) return static_cast<std::uint64_t>(d);
    }
    throw ConfigError(field + ": expected an unsigned integer");
}

std::string show(double v) { return format_double(v); }

std::string show(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + format_double(v[k]);
    return s + "]";
}

std::string show_phase(PumpPhase p) { return p == PumpPhase::random ? "random" : "coherent"; }

class Block {
public:
    Block(const json& root, std::string name, std::vector<std::string>& defaulted)
        : name_(std::move(name)), defaulted_(defaulted) {
        if (!root.contains(name_)) throw ConfigError(name_ + ": missing block");
        obj_ = &root.at(name_);
        if (!obj_->is_object()) throw ConfigError(name_ + ": expected an object");
    }

    void number(const std::string& key, double& target, double scale = 1.0) {
        handle(key, [&](const json& j) { target = as_number(j, path(key)) * scale; },
               [&] { return show(target / scale); });
    }

    void wavelength(const std::string& key, Wavelength& target) {
        handle(key,
               [&](const json& j) {
                   const double nm = as_number(j, path(key));
                   if (!(nm > 0.0) || !std::isfinite(nm)) throw ConfigError(path(key) + ": must be > 0");
                   target = Wavelength::from_nm(nm);
               },
               [&] { return show(target.nm()); });
    }

    template <class Int>
    void integer(const std::string& key, Int& target) {
        handle(key, [&](const json& j) { target = static_cast<Int>(as_unsigned(j, path(key))); },
               [&] { return std::to_string(target); });
    }

    void boolean(const std::string& key, bool& target) {
        handle(key,
               [&](const json& j) {
                   if (!j.is_boolean()) throw ConfigError(path(key) + ": expected true or false");
                   target = j.get<bool>();
               },
               [&] { return std::string(target ? "true" : "false"); });
    }

    void numbers(const std::string& key, std::vector<double>& target, double scale = 1.0) {
        handle(key,
               [&](const json& j) {
                   if (!j.is_array()) throw ConfigError(path(key) + ": expected an array");
                   target.clear();
                   for (std::size_t k = 0; k < j.size(); ++k)
                       target.push_back(as_number(j[k], path(key) + "[" + std::to_string(k) + "]") * scale);
               },
               [&] {
                   std::vector<double> v;
                   for (double x : target) v.push_back(x / scale);
                   return show(v);
               });
    }

    void phase(const std::string& key, PumpPhase& target) {
        handle(key,
               [&](const json& j) {
                   const std::string s = j.is_string() ? j.get<std::string>() : "";
                   if (s == "random") target = PumpPhase::random;
                   else if (s == "coherent") target = PumpPhase::coherent;
                   else throw ConfigError(path(key) + ": expected \"random\" or \"coherent\"");
               },
               [&] { return show_phase(target); });
    }

    void finish() const {
        for (auto it = obj_->begin(); it != obj_->end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError(path(it.key()) + ": unknown field");
    }

private:
    std::string path(const std::string& key) const { return name_ + "." + key; }

    void handle(const std::string& key, const std::function<void(const json&)>& read,
                const std::function<std::string()>& current) {
        seen_.insert(key);
        if (obj_->contains(key)) read(obj_->at(key));
        else defaulted_.push_back(path(key) + " = " + current());
    }

    const json* obj_ = nullptr;
    std::string name_;
    std::vector<std::string>& defaulted_;
    std::set<std::string> seen_;
};

std::string locate(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

std::vector<double> CurrentSweep::points() const {
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((stop_ma - start_ma) / step_ma + 1e-9));
    for (long k = 0; k <= n; ++k) out.push_back(start_ma + static_cast<double>(k) * step_ma);
    return out;
}

RingParams Scenario::effective_ring() const { return energy_match ? energy_matched(ring) : ring; }

void Scenario::validate() const {
    ring.validate();
    thermal.validate();
    loop.validate();
    detection.validate();
    if (!(sweep.step_ma > 0.0)) throw ConfigError("loop.current_step_mA: must be > 0");
    if (!(sweep.start_ma >= 0.0)) throw ConfigError("loop.current_start_mA: must be >= 0");
    if (!(sweep.stop_ma > sweep.start_ma)) throw ConfigError("loop.current_stop_mA: must exceed current_start_mA");
    for (double p : spectra.powers_w)
        if (!(p > 0.0)) throw ConfigError("loop.spectra_powers_mW: powers must be > 0");
    if (!(coincidences.acquisition_s > 0.0)) throw ConfigError("detection.acquisition_s: must be > 0");
    if (coincidences.half_bins < 1) throw ConfigError("detection.histogram_half_bins: must be >= 1");
    for (double p : coincidences.powers_w)
        if (!(p > 0.0)) throw ConfigError("detection.powers_mW: powers must be > 0");
    if (!(coincidences.histogram_power_w > 0.0)) throw ConfigError("detection.histogram_power_mW: must be > 0");
    if (!(biphoton.signal_step_pm > 0.0)) throw ConfigError("biphoton.signal_step_pm: must be > 0");
    if (!(biphoton.idler_step_pm > 0.0)) throw ConfigError("biphoton.idler_step_pm: must be > 0");
    if (biphoton.signal_points < 2) throw ConfigError("biphoton.signal_points: must be >= 2");
    if (biphoton.idler_points < 2) throw ConfigError("biphoton.idler_points: must be >= 2");
    if (!(biphoton.rate_constant > 0.0)) throw ConfigError("biphoton.rate_constant: must be > 0");
    for (double p : biphoton.powers_w)
        if (!(p > 0.0)) throw ConfigError("biphoton.powers_mW: powers must be > 0");
    if (!(analysis.truncation >= 0.0 && analysis.truncation < 1.0))
        throw ConfigError("analysis.truncation: must be in [0, 1)");
}

Scenario default_scenario() {
    Scenario s;
    s.thermal.shift_m_per_w = 47.963800904977369 * kPmPerMw;
    s.thermal.tpa_power_w = 10.0 * kMw;
    s.loop.gain_slope_db_per_ma = 0.11067404750105381;
    s.loop.gain_offset_ma = -24.308469451621662;
    s.detection.noise_signal_per_w = 397636.67813578207 * kPerMw;
    s.detection.noise_idler_per_w = 308664.32486871205 * kPerMw;
    s.coincidences.powers_w = {1.2e-3, 1.45e-3, 1.7e-3, 1.95e-3, 2.157e-3};
    return s;
}

LoadedScenario parse_scenario(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ":" + locate(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
    }
    if (!root.is_object()) throw ConfigError(origin + ": top level must be an object");

    LoadedScenario out{default_scenario(), {}};
    Scenario& s = out.scenario;
    auto& d = out.defaulted;

    static const std::set<std::string> top = {"name",   "seed",   "output_dir", "ring",    "thermal",
                                              "loop",   "detection", "biphoton", "analysis"};
    for (auto it = root.begin(); it != root.end(); ++it)
        if (!top.count(it.key())) throw ConfigError(it.key() + ": unknown field");

    if (root.contains("name")) {
        if (!root["name"].is_string()) throw ConfigError("name: expected a string");
        s.name = root["name"].get<std::string>();
    } else {
        d.push_back("name = " + s.name);
    }
    if (root.contains("seed") && !root["seed"].is_null()) s.seed = as_unsigned(root["seed"], "seed");
    if (root.contains("output_dir")) {
        if (!root["output_dir"].is_string()) throw ConfigError("output_dir: expected a string");
        s.output_dir = root["output_dir"].get<std::string>();
    } else {
        d.push_back("output_dir = " + s.output_dir);
    }

    {
        Block b(root, "ring", d);
        b.number("length_um", s.ring.length_m, kUm);
        b.number("group_index", s.ring.group_index);
        b.wavelength("lambda_pump_nm", s.ring.lambda_pump);
        b.wavelength("lambda_signal_nm", s.ring.lambda_signal);
        b.wavelength("lambda_idler_nm", s.ring.lambda_idler);
        b.number("Q_pump", s.ring.q_pump);
        b.number("Q_signal", s.ring.q_signal);
        b.number("Q_idler", s.ring.q_idler);
        b.number("through_extinction_dB", s.ring.through_extinction_db);
        b.number("drop_loss_dB", s.ring.drop_loss_db);
        b.boolean("energy_match", s.energy_match);
        b.finish();
    }
    {
        Block b(root, "thermal", d);
        b.number("shift_pm_per_mW", s.thermal.shift_m_per_w, kPmPerMw);
        b.number("tpa_power_mW", s.thermal.tpa_power_w, kMw);
        b.finish();
    }
    {
        Block b(root, "loop", d);
        b.number("round_trip_transmission", s.loop.round_trip_transmission);
        b.number("saturation_power_mW", s.loop.saturation_power_w, kMw);
        b.number("gain_slope_dB_per_mA", s.loop.gain_slope_db_per_ma);
        b.number("gain_offset_mA", s.loop.gain_offset_ma);
        b.number("ring_input_factor", s.loop.ring_input_factor);
        b.number("monitor_factor", s.loop.monitor_factor);
        b.number("mode_spacing_pm", s.loop.mode_spacing_m, kPm);
        b.number("weight_exponent", s.loop.weight_exponent);
        b.number("damping", s.loop.damping);
        b.boolean("filter_loss", s.loop.filter_loss);
        b.integer("max_iterations", s.loop.max_iterations);
        b.number("tolerance", s.loop.tolerance);
        b.number("current_start_mA", s.sweep.start_ma);
        b.number("current_stop_mA", s.sweep.stop_ma);
        b.number("current_step_mA", s.sweep.step_ma);
        b.numbers("spectra_powers_mW", s.spectra.powers_w, kMw);
        b.integer("spectra_modes", s.spectra.n_modes);
        b.phase("spectra_phase", s.spectra.phase);
        b.finish();
    }
    {
        Block b(root, "detection", d);
        b.number("signal_transmission_dB", s.detection.signal_transmission_db);
        b.number("idler_transmission_dB", s.detection.idler_transmission_db);
        b.number("jitter_sigma_ps", s.detection.jitter_sigma_s, kPs);
        b.number("bin_width_ps", s.detection.bin_width_s, kPs);
        b.number("noise_signal_per_mW", s.detection.noise_signal_per_w, kPerMw);
        b.number("noise_idler_per_mW", s.detection.noise_idler_per_w, kPerMw);
        b.number("dark_rate", s.detection.dark_rate);
        b.number("acquisition_s", s.coincidences.acquisition_s);
        b.integer("histogram_half_bins", s.coincidences.half_bins);
        b.numbers("powers_mW", s.coincidences.powers_w, kMw);
        b.number("histogram_power_mW", s.coincidences.histogram_power_w, kMw);
        b.finish();
    }
    {
        Block b(root, "biphoton", d);
        b.number("signal_step_pm", s.biphoton.signal_step_pm);
        b.integer("signal_points", s.biphoton.signal_points);
        b.number("idler_step_pm", s.biphoton.idler_step_pm);
        b.integer("idler_points", s.biphoton.idler_points);
        b.number("rate_constant", s.biphoton.rate_constant);
        b.phase("pump_phase", s.biphoton.phase);
        b.numbers("powers_mW", s.biphoton.powers_w, kMw);
        b.finish();
    }
    {
        Block b(root, "analysis", d);
        b.number("truncation", s.analysis.truncation);
        b.numbers("reference_schmidt", s.analysis.reference_schmidt);
        b.finish();
    }
    s.validate();
    return out;
}

LoadedScenario load_scenario(const std::string& path) {
    return parse_scenario(read_file(path), path);
}

}  // namespace ringlase
