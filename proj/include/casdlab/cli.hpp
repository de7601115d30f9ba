#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "casdlab/casdlab.hpp"

namespace casdlab::cli {

using ordered_json = nlohmann::ordered_json;

// =============================================================================
// Output sink: files under the run directory plus a hashed manifest
// =============================================================================

struct output_sink {
    std::filesystem::path outdir = "out";
    std::vector<std::string> formats = {"csv", "json"};
    bool to_stdout = false;
    std::vector<std::pair<std::string, std::string>> written;

    bool wants(const std::string& fmt) const {
        for (const auto& f : formats)
            if (f == fmt) return true;
        return false;
    }

    void emit(const std::string& name, const std::string& content, bool primary = false) {
        write_file(outdir / name, content);
        written.emplace_back(name, content);
        if (primary && to_stdout) std::cout << content;
    }

    void finish() {
        ordered_json manifest;
        manifest["files"] = ordered_json::array();
        for (const auto& [name, content] : written) {
            ordered_json f;
            f["path"] = name;
            f["hash"] = content_hash(content);
            f["bytes"] = content.size();
            manifest["files"].push_back(f);
        }
        write_file(outdir / "manifest.json", manifest.dump(2) + "\n");
    }
};

// =============================================================================
// Circuit selection shared by the simulation commands
// =============================================================================

struct circuit_source {
    std::string topology = "dcvs";
    std::string netlist_path;
    double vddl = 0.9;
    double vddh = 1.8;
    double period = 2e-9;
    double load_cap = 1e-15;
    std::string in_node_override;
    std::string out_node_override;
    double out_high_override = 0.0;

    bool from_file() const { return !netlist_path.empty(); }

    topology_kind kind() const {
        if (topology == "dcvs") return topology_kind::dcvs;
        if (topology == "cm") return topology_kind::cm;
        if (topology == "wcmls") return topology_kind::wcmls;
        if (topology == "hvls") return topology_kind::hvls;
        if (topology == "cascode_classd") return topology_kind::cascode_classd;
        throw error("bad-config", "unknown topology '" + topology + "'");
    }

    circuit make(double at_period = 0.0) const {
        if (from_file()) return parse_netlist(read_file(netlist_path));
        topology_options opt;
        opt.input_period = at_period > 0.0 ? at_period : period;
        opt.load_cap = load_cap;
        return generate_topology(kind(), vddl, vddh, deck_pair::defaults(), opt);
    }

    std::string input_node() const {
        if (!in_node_override.empty()) return in_node_override;
        return kind() == topology_kind::cascode_classd ? "drvn" : "vin";
    }

    /// Primary measured output and its swing.
    std::pair<std::string, double> primary_output() const {
        const double hi = out_high_override > 0.0 ? out_high_override : vddh;
        if (!out_node_override.empty()) return {out_node_override, hi};
        switch (kind()) {
            case topology_kind::hvls: return {"x", hi};
            default: return {"out", hi};
        }
    }

    std::vector<output_check> functional_outputs() const {
        if (kind() == topology_kind::hvls)
            return {{"x", 0.0, vddh, 0.1, 0.9}, {"vol", 0.0, vddl, 0.1, 0.9}};
        return {{"out", 0.0, vddh, 0.1, 0.9}};
    }

    std::vector<std::string> supply_sources() const { return {"VDDH", "VDDL"}; }

    void add_options(CLI::App* sub) {
        sub->add_option("--topology", topology,
                        "built-in circuit: dcvs, cm, wcmls, hvls, cascode_classd")
            ->default_val(topology);
        sub->add_option("--netlist", netlist_path, "netlist file instead of a built-in");
        sub->add_option("--vddl", vddl, "low-domain supply (V)")->default_val(vddl);
        sub->add_option("--vddh", vddh, "high-domain supply (V)")->default_val(vddh);
        sub->add_option("--period", period, "input period (s)")->default_val(period);
        sub->add_option("--load-cap", load_cap, "output load capacitance (F)")
            ->default_val(load_cap);
        sub->add_option("--in-node", in_node_override, "input node for measurements");
        sub->add_option("--out-node", out_node_override, "output node for measurements");
        sub->add_option("--out-high", out_high_override, "output swing high level (V)");
    }
};

namespace detail {

inline std::string csv_of_rows(const std::string& header,
                               const std::vector<std::vector<double>>& rows) {
    return csv_table(header, rows);
}

inline transient_result run_transient(const circuit_source& src, double temp_c) {
    const circuit c = src.make();
    sim_options opt;
    opt.temperature_c = temp_c;
    if (c.tran) return transient_from_directive(c, opt);
    opt.dt = src.period / 256.0;
    opt.t_stop = 8.0 * src.period;
    return transient(c, opt);
}

inline delay_report delay_of(const circuit_source& src, const transient_result& r) {
    const auto [out, out_hi] = src.primary_output();
    return measure_delay(r, src.input_node(), out, 0.0, src.vddl, 0.0, out_hi,
                         4.0 * src.period);
}

}  // namespace detail

// =============================================================================
// Subcommand handlers
// =============================================================================

inline void cmd_mismatch(output_sink& sink, double vdd, double fc, double ropt, double dt_max,
                         int dt_steps, double tau_over_tc, double ramp_fraction) {
    mismatch_spec spec;
    spec.vdd = vdd;
    spec.f_c = fc;
    spec.r_opt = ropt;
    spec.validate();
    std::vector<double> grid;
    for (int i = 0; i < dt_steps; ++i) grid.push_back(dt_max * i / (dt_steps - 1));
    const auto par = calibrated_parasitics(spec, tau_over_tc);
    const auto table = degradation_sweep(spec, par, grid, ramp_fraction);

    if (sink.wants("csv")) {
        std::vector<std::vector<double>> rows;
        for (const auto& r : table.rows) rows.push_back({r.delta_t, r.norm_ideal, r.norm_nonideal});
        sink.emit("degradation.csv", csv_table("delta_t,norm_ideal,norm_nonideal", rows), true);
    }
    if (sink.wants("json")) {
        ordered_json j;
        j["p_ideal_w"] = ideal_power(vdd, ropt);
        j["tau_s"] = time_constant(cascode_rout(par), cascode_cout(par));
        j["rows"] = ordered_json::array();
        for (const auto& r : table.rows) {
            ordered_json row;
            row["delta_t"] = r.delta_t;
            row["norm_ideal"] = r.norm_ideal;
            row["norm_nonideal"] = r.norm_nonideal;
            j["rows"].push_back(row);
        }
        sink.emit("degradation.json", j.dump(2) + "\n");
    }
    if (sink.wants("svg")) {
        svg_series ideal{"closed form", {}, {}}, rc{"RC waveform", {}, {}};
        for (const auto& r : table.rows) {
            ideal.x.push_back(r.delta_t);
            ideal.y.push_back(r.norm_ideal);
            rc.x.push_back(r.delta_t);
            rc.y.push_back(r.norm_nonideal);
        }
        sink.emit("degradation.svg",
                  svg_line_chart("normalized output power vs delay mismatch", "delta_t",
                                 "P/P_ideal", {ideal, rc}));
    }
}

inline void cmd_negres(output_sink& sink, double gm_p3, double ro_p3, double gm_n5, double ro_n5,
                       double gm_p5, double ro_p5, double delta_max, int steps) {
    abc_factors f;
    f.a = gm_p3 * ro_p3;
    f.b = gm_n5 * ro_n5;
    f.c = gm_p5 * ro_p5;
    f.r0 = ro_p3 + ro_n5 + ro_p5;
    f.ro_p5 = ro_p5;
    const double dstar = critical_delta(f.c);  // throws critical-delta-divergent at c = 1

    std::vector<std::vector<double>> rows;
    for (int i = 0; i < steps; ++i) {
        const double d = delta_max * i / (steps - 1);
        const auto r = r_eq_delta(d, f.c, f.r0, f.ro_p5);
        rows.push_back({d, r.value, r.singular ? 1.0 : 0.0});
    }

    if (sink.wants("csv")) {
        sink.emit("negres.csv", csv_table("delta,r_eq_ohm,singular", rows), true);
    }
    if (sink.wants("json")) {
        ordered_json j;
        j["a"] = f.a;
        j["b"] = f.b;
        j["c"] = f.c;
        j["r0_ohm"] = f.r0;
        j["ro_p5_ohm"] = f.ro_p5;
        j["critical_delta"] = dstar;
        j["r_eq_at_operating_delta_ohm"] = r_eq_full(f).value;
        j["rows"] = ordered_json::array();
        for (const auto& r : rows) {
            ordered_json row;
            row["delta"] = r[0];
            row["r_eq_ohm"] = r[1];
            row["singular"] = r[2] != 0.0;
            j["rows"].push_back(row);
        }
        sink.emit("negres.json", j.dump(2) + "\n");
    }
    if (sink.wants("svg")) {
        svg_series s{"r_eq", {}, {}};
        for (const auto& r : rows)
            if (std::isfinite(r[1]) && std::abs(r[1]) < 10.0 * f.r0) {
                s.x.push_back(r[0]);
                s.y.push_back(r[1]);
            }
        sink.emit("negres.svg",
                  svg_line_chart("latch input resistance vs delta", "delta", "r_eq (ohm)", {s}));
    }
}

inline void cmd_sim(output_sink& sink, const circuit_source& src, double temp_c) {
    const auto r = detail::run_transient(src, temp_c);

    std::string header = "t_s";
    for (const auto& n : r.node_names) header += "," + n + "_V";
    for (const auto& s : r.source_names) header += "," + s + "_A";
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < r.time.size(); ++i) {
        std::vector<double> row{r.time[i]};
        for (const auto& v : r.node_v) row.push_back(v[i]);
        for (const auto& s : r.src_i) row.push_back(s[i]);
        rows.push_back(std::move(row));
    }
    if (sink.wants("csv")) sink.emit("transient.csv", csv_table(header, rows), true);
    if (sink.wants("json")) {
        ordered_json j;
        j["nodes"] = r.node_names;
        j["sources"] = r.source_names;
        j["samples"] = r.time.size();
        j["t_stop_s"] = r.time.back();
        j["max_residual_a"] = r.max_residual;
        sink.emit("transient.json", j.dump(2) + "\n");
    }
    if (sink.wants("svg")) {
        const auto [node, hi] = src.primary_output();
        if (r.has_node(node)) {
            svg_series s{node, r.time, r.voltage(node)};
            sink.emit("transient.svg", svg_line_chart("transient", "t (s)", "V", {s}));
        }
    }
}

inline void cmd_delay(output_sink& sink, const circuit_source& src, double temp_c) {
    const auto r = detail::run_transient(src, temp_c);
    const auto rep = detail::delay_of(src, r);
    ordered_json j;
    j["t_dh_s"] = rep.t_dh;
    j["t_dl_s"] = rep.t_dl;
    j["mean_delay_s"] = rep.mean_delay();
    if (sink.wants("json")) sink.emit("delay.json", j.dump(2) + "\n", true);
    if (sink.wants("csv"))
        sink.emit("delay.csv", csv_table("t_dh_s,t_dl_s", {{rep.t_dh, rep.t_dl}}));
}

inline void cmd_fmax(output_sink& sink, const circuit_source& src, double f_lo, double f_hi,
                     double tol_hz) {
    auto gen = [&](double f) { return src.make(1.0 / f); };
    auto spec_fn = [&](double f) {
        functional_spec s;
        s.period = 1.0 / f;
        s.outputs = src.functional_outputs();
        return s;
    };
    const auto res = max_frequency(functional_probe(gen, spec_fn, sim_options{}), f_lo, f_hi,
                                   tol_hz);
    ordered_json j;
    j["f_max_hz"] = res.f_max;
    j["probes"] = res.probes;
    if (sink.wants("json")) sink.emit("fmax.json", j.dump(2) + "\n", true);
    if (sink.wants("csv")) sink.emit("fmax.csv", csv_table("f_max_hz", {{res.f_max}}));
}

inline void cmd_power(output_sink& sink, const circuit_source& src, double temp_c) {
    const auto r = detail::run_transient(src, temp_c);
    const double t_end = r.time.back();
    const auto p = measure_power(r, src.supply_sources(), 0.5 * t_end, t_end, src.period);
    const auto rep = detail::delay_of(src, r);
    ordered_json j;
    j["avg_power_w"] = p.avg_power;
    j["energy_per_cycle_j"] = p.energy_per_cycle;
    j["pdp_j"] = p.avg_power * rep.mean_delay();
    if (sink.wants("json")) sink.emit("power.json", j.dump(2) + "\n", true);
    if (sink.wants("csv"))
        sink.emit("power.csv", csv_table("avg_power_w,energy_per_cycle_j,pdp_j",
                                         {{p.avg_power, p.energy_per_cycle,
                                           p.avg_power * rep.mean_delay()}}));
}

inline void cmd_leakage(output_sink& sink, const circuit_source& src, double temp_c,
                        double vin_level) {
    const circuit c = src.make();
    sim_options opt;
    opt.temperature_c = temp_c;
    std::map<std::string, double> levels{{"VIN", vin_level}};
    if (src.kind() == topology_kind::hvls) levels["VINB"] = src.vddl - vin_level;
    const double leak = measure_leakage(c, levels, src.supply_sources(), opt);
    ordered_json j;
    j["leakage_a"] = leak;
    if (sink.wants("json")) sink.emit("leakage.json", j.dump(2) + "\n", true);
    if (sink.wants("csv")) sink.emit("leakage.csv", csv_table("leakage_a", {{leak}}));
}

inline void cmd_corners(output_sink& sink, const circuit_source& src) {
    const circuit c = src.make();
    const auto [out, out_hi] = src.primary_output();

    auto tdh = [&](const circuit& cc, const corner_spec& cs) {
        sim_options o;
        o.temperature_c = cs.temp_c;
        const auto r = transient_from_directive(cc, o);
        return measure_delay(r, src.input_node(), out, 0.0, src.vddl, 0.0, out_hi,
                             4.0 * src.period).t_dh;
    };
    auto tdl = [&](const circuit& cc, const corner_spec& cs) {
        sim_options o;
        o.temperature_c = cs.temp_c;
        const auto r = transient_from_directive(cc, o);
        return measure_delay(r, src.input_node(), out, 0.0, src.vddl, 0.0, out_hi,
                             4.0 * src.period).t_dl;
    };
    auto power = [&](const circuit& cc, const corner_spec& cs) {
        sim_options o;
        o.temperature_c = cs.temp_c;
        const auto r = transient_from_directive(cc, o);
        const double t_end = r.time.back();
        return measure_power(r, src.supply_sources(), 0.5 * t_end, t_end, src.period).avg_power;
    };
    auto leak = [&](const circuit& cc, const corner_spec& cs) {
        sim_options o;
        o.temperature_c = cs.temp_c;
        std::map<std::string, double> levels{{"VIN", 0.0}};
        if (src.kind() == topology_kind::hvls) levels["VINB"] = src.vddl;
        return measure_leakage(cc, levels, src.supply_sources(), o);
    };

    const auto rows = corner_sweep(
        c, {corner_spec::FF(), corner_spec::TT(), corner_spec::SS()},
        {{"t_dh_s", tdh}, {"t_dl_s", tdl}, {"avg_power_w", power}, {"leakage_a", leak}});

    if (sink.wants("csv")) {
        std::string out_csv = "corner,measure,value\n";
        for (const auto& r : rows)
            out_csv += r.corner + "," + r.measure + "," + format_double(r.value) + "\n";
        sink.emit("corners.csv", out_csv, true);
    }
    if (sink.wants("json")) {
        ordered_json j;
        j["rows"] = ordered_json::array();
        for (const auto& r : rows) {
            ordered_json row;
            row["corner"] = r.corner;
            row["measure"] = r.measure;
            row["value"] = r.value;
            j["rows"].push_back(row);
        }
        sink.emit("corners.json", j.dump(2) + "\n");
    }
}

inline void cmd_mc(output_sink& sink, const circuit_source& src, std::size_t n,
                   std::uint64_t seed, double vth_sigma, double kp_rel_sigma,
                   const std::string& metric_name, const std::string& mode) {
    variation_spec spec;
    spec.seed = seed;
    spec.vth_sigma = vth_sigma;
    spec.kp_rel_sigma = kp_rel_sigma;
    spec.mode = (mode == "shared") ? variation_spec::correlation::shared
                                   : variation_spec::correlation::per_device;

    const circuit c = src.make();
    const auto [out, out_hi] = src.primary_output();
    auto metric = [&](const circuit& cc) {
        const auto r = transient_from_directive(cc, sim_options{});
        const auto rep = measure_delay(r, src.input_node(), out, 0.0, src.vddl, 0.0, out_hi,
                                       4.0 * src.period);
        if (metric_name == "tdh") return rep.t_dh;
        if (metric_name == "tdl") return rep.t_dl;
        return rep.mean_delay();
    };

    const auto res = run_monte_carlo(c, metric, spec, n);

    if (sink.wants("csv")) {
        std::string csv = "sample_idx,metric,status\n";
        std::size_t vi = 0, fi = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (fi < res.failed.size() && res.failed[fi] == i) {
                csv += std::to_string(i) + ",nan,failed\n";
                ++fi;
            } else {
                csv += std::to_string(i) + "," + format_double(res.values[vi]) + ",ok\n";
                ++vi;
            }
        }
        sink.emit("mc_samples.csv", csv, true);
    }
    if (sink.wants("json")) {
        ordered_json j;
        j["n"] = res.n;
        j["mean"] = res.stats.mean;
        j["std"] = res.stats.std;
        j["within_3sigma"] = res.stats.within_3sigma;
        j["failed"] = res.failed.size();
        sink.emit("mc_summary.json", j.dump(2) + "\n");
    }
    if (sink.wants("svg")) {
        svg_series s{"count", {}, {}};
        for (std::size_t b = 0; b < res.stats.hist.counts.size(); ++b) {
            s.x.push_back(0.5 * (res.stats.hist.edges[b] + res.stats.hist.edges[b + 1]));
            s.y.push_back(static_cast<double>(res.stats.hist.counts[b]));
        }
        sink.emit("mc_hist.svg",
                  svg_line_chart("metric distribution", metric_name, "count", {s}));
    }
}

inline void cmd_validate_eqs(output_sink& sink) {
    const auto rep = validate_equations();
    if (sink.wants("json")) {
        ordered_json j;
        auto section = [](const std::vector<section_check_row>& rows) {
            ordered_json arr = ordered_json::array();
            for (const auto& r : rows) {
                ordered_json row;
                row["dt_frac"] = r.dt_frac;
                if (r.tau_over_period > 0.0) row["tau_over_period"] = r.tau_over_period;
                row["derived_re"] = r.derived.real();
                row["derived_im"] = r.derived.imag();
                row["variant_re"] = r.variant.real();
                row["variant_im"] = r.variant.imag();
                row["rel_dev"] = r.rel_dev;
                arr.push_back(row);
            }
            return arr;
        };
        j["ramp_section"] = {{"rows", section(rep.ramp_rows)},
                             {"max_rel_dev", rep.ramp_max_rel_dev}};
        j["exp_section"] = {{"rows", section(rep.exp_rows)},
                            {"max_rel_dev", rep.exp_max_rel_dev}};
        ordered_json power;
        power["rows"] = ordered_json::array();
        for (const auto& r : rep.power_rows) {
            ordered_json row;
            row["delta_t"] = r.delta_t;
            row["closed_form"] = r.closed_form;
            row["oracle"] = r.oracle;
            row["rel_dev"] = r.rel_dev;
            power["rows"].push_back(row);
        }
        power["max_rel_dev"] = rep.power_max_rel_dev;
        power["gate"] = rep.power_gate;
        power["within_gate"] = rep.power_within_gate;
        power["deviation_documented"] = !rep.power_within_gate;
        j["power_bracket"] = power;
        j["notes"] = rep.notes;
        sink.emit("validation.json", j.dump(2) + "\n", true);
    }
    if (sink.wants("csv")) {
        std::vector<std::vector<double>> rows;
        for (const auto& r : rep.power_rows)
            rows.push_back({r.delta_t, r.closed_form, r.oracle, r.rel_dev});
        sink.emit("validation.csv",
                  csv_table("delta_t,closed_form,oracle,rel_dev", rows));
    }
}

// =============================================================================
// Dispatch
// =============================================================================

inline int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"behavioral class-D / level-shifter analysis toolbox"};
    app.require_subcommand(1);

    auto sink = std::make_shared<output_sink>();
    std::uint64_t seed = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-o,--outdir", sink->outdir, "output directory")->default_val("out");
        sub->add_option("--format", sink->formats, "output formats: csv, json, svg")
            ->delimiter(',');
        sub->add_flag("--stdout", sink->to_stdout, "also print the primary output to stdout");
        sub->add_option("--seed", seed, "random seed for stochastic commands");
        sub->set_config("--config", "", "run file with flat key=value lines mirroring the flags");
    };

    // mismatch
    {
        auto* sub = app.add_subcommand("mismatch", "output-power degradation vs drive skew");
        auto vdd = std::make_shared<double>(0.9);
        auto fc = std::make_shared<double>(12.4e9);
        auto ropt = std::make_shared<double>(50.0);
        auto dt_max = std::make_shared<double>(0.2);
        auto steps = std::make_shared<int>(11);
        auto tau = std::make_shared<double>(0.05);
        auto rf = std::make_shared<double>(0.5);
        sub->add_option("--vdd", *vdd, "low-domain supply (V)");
        sub->add_option("--fc", *fc, "carrier frequency (Hz)");
        sub->add_option("--ropt", *ropt, "load resistance (ohm)");
        sub->add_option("--dt-max", *dt_max, "largest delta_t in the sweep");
        sub->add_option("--dt-steps", *steps, "number of sweep points");
        sub->add_option("--tau-over-tc", *tau, "RC time constant as a fraction of t_c");
        sub->add_option("--ramp-fraction", *rf, "ramp share of the transition window");
        add_common(sub);
        sub->callback([=] {
            cmd_mismatch(*sink, *vdd, *fc, *ropt, *dt_max, *steps, *tau, *rf);
        });
    }

    // negres
    {
        auto* sub = app.add_subcommand("negres", "latch equivalent-resistance table");
        auto gm_p3 = std::make_shared<double>(1e-3);
        auto ro_p3 = std::make_shared<double>(1e5);
        auto gm_n5 = std::make_shared<double>(1e-3);
        auto ro_n5 = std::make_shared<double>(1e5);
        auto gm_p5 = std::make_shared<double>(1e-3);
        auto ro_p5 = std::make_shared<double>(1e5);
        auto dmax = std::make_shared<double>(2.0);
        auto steps = std::make_shared<int>(101);
        sub->add_option("--gm-p3", *gm_p3, "gm of P3 (S)");
        sub->add_option("--ro-p3", *ro_p3, "ro of P3 (ohm)");
        sub->add_option("--gm-n5", *gm_n5, "gm of N5 (S)");
        sub->add_option("--ro-n5", *ro_n5, "ro of N5 (ohm)");
        sub->add_option("--gm-p5", *gm_p5, "gm of P5 (S)");
        sub->add_option("--ro-p5", *ro_p5, "ro of P5 (ohm)");
        sub->add_option("--delta-max", *dmax, "upper end of the delta grid");
        sub->add_option("--steps", *steps, "grid points");
        add_common(sub);
        sub->callback([=] {
            cmd_negres(*sink, *gm_p3, *ro_p3, *gm_n5, *ro_n5, *gm_p5, *ro_p5, *dmax, *steps);
        });
    }

    auto add_sim_command = [&](const std::string& name, const std::string& desc,
                               auto handler) -> CLI::App* {
        auto* sub = app.add_subcommand(name, desc);
        auto src = std::make_shared<circuit_source>();
        auto temp = std::make_shared<double>(27.0);
        src->add_options(sub);
        sub->add_option("--temp", *temp, "simulation temperature (C)");
        add_common(sub);
        sub->callback([=] { handler(*sink, *src, *temp); });
        return sub;
    };

    add_sim_command("sim", "transient simulation to CSV",
                    [](output_sink& s, const circuit_source& src, double t) {
                        cmd_sim(s, src, t);
                    });
    add_sim_command("delay", "propagation delays of the primary output",
                    [](output_sink& s, const circuit_source& src, double t) {
                        cmd_delay(s, src, t);
                    });
    add_sim_command("power", "average power and energy per cycle",
                    [](output_sink& s, const circuit_source& src, double t) {
                        cmd_power(s, src, t);
                    });

    // leakage (extra input-level flag)
    {
        auto* sub = app.add_subcommand("leakage", "static supply current at the DC point");
        auto src = std::make_shared<circuit_source>();
        auto temp = std::make_shared<double>(27.0);
        auto vin = std::make_shared<double>(0.0);
        src->add_options(sub);
        sub->add_option("--temp", *temp, "simulation temperature (C)");
        sub->add_option("--vin", *vin, "static input level (V)");
        add_common(sub);
        sub->callback([=] { cmd_leakage(*sink, *src, *temp, *vin); });
    }

    // fmax
    {
        auto* sub = app.add_subcommand("fmax", "maximum operating frequency by bisection");
        auto src = std::make_shared<circuit_source>();
        auto f_lo = std::make_shared<double>(0.2e9);
        auto f_hi = std::make_shared<double>(50e9);
        auto tol = std::make_shared<double>(0.1e9);
        src->add_options(sub);
        sub->add_option("--f-lo", *f_lo, "frequency that must pass (Hz)");
        sub->add_option("--f-hi", *f_hi, "frequency that must fail (Hz)");
        sub->add_option("--tol", *tol, "bisection tolerance (Hz)");
        add_common(sub);
        sub->callback([=] { cmd_fmax(*sink, *src, *f_lo, *f_hi, *tol); });
    }

    // corners
    {
        auto* sub = app.add_subcommand("corners", "FF/TT/SS measurement table");
        auto src = std::make_shared<circuit_source>();
        src->add_options(sub);
        add_common(sub);
        sub->callback([=] { cmd_corners(*sink, *src); });
    }

    // mc
    {
        auto* sub = app.add_subcommand("mc", "Monte Carlo process variation study");
        auto src = std::make_shared<circuit_source>();
        auto n = std::make_shared<std::size_t>(100);
        auto vth_sigma = std::make_shared<double>(0.02);
        auto kp_sigma = std::make_shared<double>(0.05);
        auto metric = std::make_shared<std::string>("tdh");
        auto mode = std::make_shared<std::string>("per_device");
        src->add_options(sub);
        sub->add_option("-n,--samples", *n, "sample count");
        sub->add_option("--vth-sigma", *vth_sigma, "threshold sigma (V)");
        sub->add_option("--kp-sigma", *kp_sigma, "relative kp sigma");
        sub->add_option("--metric", *metric, "tdh, tdl or tp");
        sub->add_option("--mode", *mode, "per_device or shared");
        add_common(sub);
        sub->callback([=, &seed] {
            cmd_mc(*sink, *src, *n, seed, *vth_sigma, *kp_sigma, *metric, *mode);
        });
    }

    // validate-eqs
    {
        auto* sub = app.add_subcommand("validate-eqs",
                                       "closed-form vs oracle cross-check report");
        add_common(sub);
        sub->callback([=] { cmd_validate_eqs(*sink); });
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        sink->finish();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace casdlab::cli
