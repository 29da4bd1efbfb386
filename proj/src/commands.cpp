#include "ringlase/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "ringlase/biphoton.hpp"
#include "ringlase/config.hpp"
#include "ringlase/counting.hpp"
#include "ringlase/errors.hpp"
#include "ringlase/io.hpp"
#include "ringlase/laser.hpp"
#include "ringlase/schmidt.hpp"

#ifndef RINGLASE_VERSION
#define RINGLASE_VERSION "dev"
#endif

namespace ringlase {

namespace {

constexpr double kFitLo = 72.0;
constexpr double kFitHi = 95.0;

struct Context {
    Scenario sc;
    RingParams ring;
    Provenance prov;
    std::filesystem::path out_dir;
    std::ostream& out;
    const RunOptions& opts;

    std::string file(const std::string& name) const { return (out_dir / name).string(); }

    std::uint64_t seed(const std::string& command) const {
        if (!sc.seed) throw ConfigError("seed: required by '" + command + "' (set it in the config or pass --seed)");
        return *sc.seed;
    }

    LasingState state_at(double power_w) const {
        const double i = current_for_power(power_w, sc.loop, ring, sc.thermal);
        return solve_steady_state(i, sc.loop, ring, sc.thermal);
    }
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k) { return seed ^ (k * 0x9E3779B97F4A7C15ULL); }

std::string label(double power_w) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4gmW", power_w * 1e3);
    return buf;
}

std::string row(std::initializer_list<double> values) {
    std::string s;
    bool first = true;
    for (double v : values) {
        if (!first) s += ',';
        s += format_double(v);
        first = false;
    }
    return s + "\n";
}

int lasing_curve_cmd(Context& ctx) {
    const auto pts = lasing_curve(ctx.sc.sweep.points(), ctx.sc.loop, ctx.ring, ctx.sc.thermal);
    std::string csv = ctx.prov.header() + "current_mA,P_PM_W,P_in_W,shift_pm,fwhm_pm\n";
    std::vector<double> fx, fy;
    for (const auto& p : pts) {
        csv += row({p.current_ma, p.monitor_power_w, p.power_w, p.shift_pm, p.fwhm_pm});
        if (p.current_ma >= kFitLo && p.current_ma <= kFitHi) {
            fx.push_back(p.current_ma);
            fy.push_back(p.monitor_power_w);
        }
    }
    write_atomic(ctx.file("lasing_curve.csv"), csv);
    if (fx.size() >= 2) {
        const auto fit = linear_fit(fx, fy);
        write_atomic(ctx.file("lasing_fit.csv"), ctx.prov.header() + "fit_lo_mA,fit_hi_mA,threshold_mA,slope_nW_per_mA\n" +
                                                     row({kFitLo, kFitHi, fit.x_intercept(), fit.slope * 1e9}));
        ctx.out << "threshold " << format_double(fit.x_intercept()) << " mA, slope "
                << format_double(fit.slope * 1e9) << " nW/mA\n";
    }
    ctx.out << "wrote " << pts.size() << " points to " << ctx.file("lasing_curve.csv") << "\n";
    return kExitOk;
}

int pump_spectra_cmd(Context& ctx) {
    const auto& set = ctx.sc.spectra;
    const std::uint64_t seed = set.phase == PumpPhase::random ? ctx.seed("pump-spectra") : ctx.sc.seed.value_or(0);
    std::string summary = ctx.prov.header() + "P_in_mW,current_mA,center_nm,shift_pm,fwhm_pm,modes\n";
    for (std::size_t k = 0; k < set.powers_w.size(); ++k) {
        const auto st = ctx.state_at(set.powers_w[k]);
        const auto spec = pump_spectrum(st, ctx.sc.loop, set.n_modes, set.phase, derive_seed(seed, k));
        std::string csv = ctx.prov.header() + "wavelength_nm,power_W,phase_rad\n";
        for (std::size_t m = 0; m < spec.size(); ++m) {
            const double nm = angular_frequency_to_wavelength(AngularFrequency(spec.frequency(m))).nm();
            const auto a = spec.amplitudes[m];
            csv += row({nm, std::norm(a) * spec.spacing, std::arg(a)});
        }
        write_atomic(ctx.file("pump_spectrum_" + label(set.powers_w[k]) + ".csv"), csv);
        const double fwhm = emission_fwhm_pm(spec);
        summary += row({st.power_w * 1e3, st.current_ma, st.center_wavelength().nm(), st.hot.pump_shift_m() * 1e12,
                        fwhm, static_cast<double>(spec.size())});
        ctx.out << label(set.powers_w[k]) << ": I = " << format_double(st.current_ma) << " mA, FWHM "
                << format_double(fwhm) << " pm\n";
    }
    write_atomic(ctx.file("pump_spectra.csv"), summary);
    return kExitOk;
}

GridMeta meta(const SpectralGrid& s, const SpectralGrid& i, double s_step_pm, double i_step_pm) {
    return {angular_frequency_to_wavelength(AngularFrequency(s.center())).nm(), s_step_pm, s.size(),
            angular_frequency_to_wavelength(AngularFrequency(i.center())).nm(), i_step_pm, i.size()};
}

struct JsdCase {
    std::string tag;
    PumpSpectrum pump;
    HotRingState hot;
};

int jsd_cmd(Context& ctx) {
    const auto& b = ctx.sc.biphoton;
    std::vector<JsdCase> cases;
    if (ctx.opts.power_mw && *ctx.opts.power_mw == 0.0) {
        // forced single-mode CW pump on the cold ring
        const auto cold = cold_state(ctx.ring);
        const auto& line = cold.line(Resonance::pump);
        const double spacing = wavelength_span_to_angular(ctx.sc.loop.mode_spacing_m, ctx.ring.lambda_pump);
        cases.push_back({"cw", single_mode_pump(line.center(), 1e-3, spacing), cold});
    } else {
        std::vector<double> powers = b.powers_w;
        if (ctx.opts.power_mw) {
            if (!(*ctx.opts.power_mw > 0.0)) throw ConfigError("--power: must be >= 0");
            powers = {*ctx.opts.power_mw * 1e-3};
        }
        const std::uint64_t seed = b.phase == PumpPhase::random ? ctx.seed("jsd") : ctx.sc.seed.value_or(0);
        for (std::size_t k = 0; k < powers.size(); ++k) {
            const auto st = ctx.state_at(powers[k]);
            cases.push_back({label(powers[k]), pump_spectrum(st, ctx.sc.loop, 0, b.phase, derive_seed(seed, k)), st.hot});
        }
    }
    for (const auto& c : cases) {
        const auto sg = signal_grid(c.hot, b.signal_step_pm, b.signal_points);
        const auto ig = idler_grid(c.hot, b.idler_step_pm, b.idler_points);
        const auto jsa = joint_spectral_amplitude(c.pump, c.hot, sg, ig);
        const GridMeta gm = meta(sg, ig, b.signal_step_pm, b.idler_step_pm);
        const Eigen::MatrixXcd density = jsd(jsa).cast<cdouble>();
        write_atomic(ctx.file("jsd_" + c.tag + ".csv"), format_matrix(ctx.prov, gm, MatrixKind::jsd, density));
        write_atomic(ctx.file("jsa_" + c.tag + ".csv"), format_matrix(ctx.prov, gm, MatrixKind::jsa, jsa.amplitudes));

        Eigen::MatrixXd stim(static_cast<Eigen::Index>(sg.size()), static_cast<Eigen::Index>(ig.size()));
        for (std::size_t r = 0; r < sg.size(); ++r) {
            const auto spec = stimulated_idler_spectrum(sg[r], c.pump, c.hot, sg, ig);
            for (std::size_t col = 0; col < ig.size(); ++col)
                stim(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) = spec[col];
        }
        stim /= stim.sum() * jsa.cell_area();
        write_atomic(ctx.file("stimulated_" + c.tag + ".csv"),
                     format_matrix(ctx.prov, gm, MatrixKind::jsd, stim.cast<cdouble>()));
        ctx.out << c.tag << ": wrote jsd, jsa and stimulated matrices (" << sg.size() << "x" << ig.size() << ")\n";
    }
    return kExitOk;
}

std::string schmidt_csv(const Provenance& prov, const SchmidtSpectrum& s) {
    std::string csv = prov.header() + "n,lambda_n\n";
    for (std::size_t n = 0; n < s.coefficients.size(); ++n)
        csv += std::to_string(n + 1) + "," + format_double(s.coefficients[n]) + "\n";
    csv += "K,S_bits\n" + row({schmidt_number(s), entanglement_entropy(s)});
    return csv;
}

int schmidt_cmd(Context& ctx) {
    const double trunc = ctx.sc.analysis.truncation;
    if (ctx.opts.input) {
        const MatrixFile f = parse_matrix(read_file(*ctx.opts.input));
        const auto sg = make_grid_pm(wavelength_to_angular_frequency(Wavelength::from_nm(f.grid.signal_center_nm)),
                                     f.grid.signal_step_pm, f.grid.signal_points);
        const auto ig = make_grid_pm(wavelength_to_angular_frequency(Wavelength::from_nm(f.grid.idler_center_nm)),
                                     f.grid.idler_step_pm, f.grid.idler_points);
        Eigen::MatrixXcd amp = f.values;
        if (f.kind == MatrixKind::jsd) {
            // a density carries no phase; use its square root as a real amplitude
            if (f.values.real().minCoeff() < 0.0) throw ConfigError("matrix file: negative density");
            amp = f.values.real().cwiseSqrt().cast<cdouble>();
            ctx.out << "note: density input, phases assumed flat\n";
        }
        const auto s = schmidt_decompose(amp, sg.step() * ig.step(), trunc);
        write_atomic(ctx.file("schmidt.csv"), schmidt_csv(ctx.prov, s));
        ctx.out << "K = " << format_double(schmidt_number(s)) << ", S = " << format_double(entanglement_entropy(s))
                << " bits\n";
        return kExitOk;
    }
    const auto& b = ctx.sc.biphoton;
    const std::uint64_t seed = b.phase == PumpPhase::random ? ctx.seed("schmidt") : ctx.sc.seed.value_or(0);
    std::string summary = ctx.prov.header() + "P_in_mW,K,S_bits\n";
    std::vector<double> ks;
    for (std::size_t k = 0; k < b.powers_w.size(); ++k) {
        const auto st = ctx.state_at(b.powers_w[k]);
        const auto pump = pump_spectrum(st, ctx.sc.loop, 0, b.phase, derive_seed(seed, k));
        const auto jsa = joint_spectral_amplitude(pump, st.hot, signal_grid(st.hot, b.signal_step_pm, b.signal_points),
                                                  idler_grid(st.hot, b.idler_step_pm, b.idler_points));
        const auto s = schmidt_decompose(jsa, trunc);
        write_atomic(ctx.file("schmidt_" + label(b.powers_w[k]) + ".csv"), schmidt_csv(ctx.prov, s));
        const double kk = schmidt_number(s);
        ks.push_back(kk);
        summary += row({st.power_w * 1e3, kk, entanglement_entropy(s)});
        ctx.out << label(b.powers_w[k]) << ": K = " << format_double(kk) << "\n";
    }
    write_atomic(ctx.file("schmidt_summary.csv"), summary);
    const auto& ref = ctx.sc.analysis.reference_schmidt;
    if (ref.size() == 2 && ks.size() >= 2)
        ctx.out << "reference endpoints " << format_double(ref[0]) << " / " << format_double(ref[1])
                << ", |dK| " << format_double(std::abs(ks.front() - ref[0])) << " / "
                << format_double(std::abs(ks.back() - ref[1])) << "\n";
    return kExitOk;
}

int coincidences_cmd(Context& ctx) {
    const std::uint64_t seed = ctx.seed("coincidences");
    const auto& cs = ctx.sc.coincidences;
    const auto& chain = ctx.sc.detection;
    auto rate_at = [&](double power_w, LasingState& st) {
        st = ctx.state_at(power_w);
        const auto pump = pump_spectrum(st, ctx.sc.loop, 0, PumpPhase::coherent, 0);
        return pair_generation_rate(st, pump, ctx.sc.biphoton.rate_constant);
    };
    std::string csv = ctx.prov.header() +
                      "P_in_mW,current_mA,pair_rate,singles_signal,singles_idler,coincidences,car,car_multipair,"
                      "suppression,car_mc,car_mc_sigma\n";
    for (std::size_t k = 0; k < cs.powers_w.size(); ++k) {
        LasingState st = solve_steady_state(0.0, ctx.sc.loop, ctx.ring, ctx.sc.thermal);
        const double r = rate_at(cs.powers_w[k], st);
        const auto rates = detected_rates(r, chain, st.power_w);
        const auto pred = car_analytic(r, chain, st.power_w);
        const auto hist = simulate_histogram(r, st.power_w, chain, cs.acquisition_s, derive_seed(seed, k), cs.half_bins);
        const auto est = car(hist);
        csv += row({st.power_w * 1e3, st.current_ma, r, rates.singles_signal, rates.singles_idler,
                    rates.true_coincidences, pred.with_noise, pred.multipair_only,
                    pred.multipair_only / pred.with_noise, est.value, est.sigma});
        ctx.out << label(cs.powers_w[k]) << ": R = " << format_double(r) << " /s, CAR " << format_double(pred.with_noise)
                << " (multipair only " << format_double(pred.multipair_only) << "), simulated "
                << format_double(est.value) << "\n";
    }
    write_atomic(ctx.file("coincidences.csv"), csv);

    LasingState st = solve_steady_state(0.0, ctx.sc.loop, ctx.ring, ctx.sc.thermal);
    const double r = rate_at(cs.histogram_power_w, st);
    const auto hist = simulate_histogram(r, st.power_w, chain, cs.acquisition_s,
                                         derive_seed(seed, cs.powers_w.size()), cs.half_bins);
    std::string h = ctx.prov.header() + "delay_ps,counts\n";
    for (std::size_t k = 0; k < hist.counts.size(); ++k)
        h += format_double(hist.delay(k) * 1e12) + "," + std::to_string(hist.counts[k]) + "\n";
    write_atomic(ctx.file("histogram_" + label(cs.histogram_power_w) + ".csv"), h);
    return kExitOk;
}

int validate_cmd(const LoadedScenario& loaded, std::ostream& out) {
    out << "valid: " << loaded.scenario.name << "\n";
    for (const auto& d : loaded.defaulted) out << "defaulted: " << d << "\n";
    if (!loaded.scenario.seed) out << "warning: no seed; coincidences and random-phase spectra will refuse to run\n";
    return kExitOk;
}

}  // namespace

int run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
    std::string stage = "config";
    try {
        static const std::vector<std::string> known = {"lasing-curve", "pump-spectra", "jsd",
                                                       "schmidt",      "coincidences", "validate"};
        if (std::find(known.begin(), known.end(), opts.command) == known.end())
            throw ConfigError("unknown command '" + opts.command + "'");
        const std::string text = read_file(opts.config_path);
        LoadedScenario loaded = parse_scenario(text, opts.config_path);
        if (opts.seed) loaded.scenario.seed = opts.seed;
        if (opts.command == "validate") return validate_cmd(loaded, out);

        Context ctx{loaded.scenario,
                    loaded.scenario.effective_ring(),
                    Provenance{RINGLASE_VERSION, sha256_hex(text), loaded.scenario.seed, opts.timestamp},
                    std::filesystem::path(opts.out_dir.value_or(loaded.scenario.output_dir)),
                    out,
                    opts};
        std::filesystem::create_directories(ctx.out_dir);
        stage = opts.command;
        if (opts.command == "lasing-curve") return lasing_curve_cmd(ctx);
        if (opts.command == "pump-spectra") return pump_spectra_cmd(ctx);
        if (opts.command == "jsd") return jsd_cmd(ctx);
        if (opts.command == "schmidt") return schmidt_cmd(ctx);
        return coincidences_cmd(ctx);
    } catch (const ConfigError& e) {
        err << "ringlase: " << stage << ": config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SolverError& e) {
        err << "ringlase: " << stage << ": solver error: " << e.what() << " (last iterate "
            << format_double(e.last_iterate()) << " after " << e.iterations() << " iterations)\n";
        return kExitNumeric;
    } catch (const DomainError& e) {
        err << "ringlase: " << stage << ": numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const AnalysisError& e) {
        err << "ringlase: " << stage << ": analysis error: " << e.what() << "\n";
        return kExitAnalysis;
    } catch (const std::exception& e) {
        err << "ringlase: " << stage << ": " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace ringlase
