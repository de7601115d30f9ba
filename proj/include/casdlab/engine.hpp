#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "casdlab/device.hpp"
#include "casdlab/error.hpp"
#include "casdlab/netlist.hpp"

namespace casdlab {

// =============================================================================
// Simulation options and results
// =============================================================================

enum class integration_method { trapezoidal, backward_euler };

struct sim_options {
    double dt = 1e-12;           // base timestep (s)
    double t_stop = 1e-9;        // s
    integration_method method = integration_method::trapezoidal;
    double newton_tol_v = 1e-6;  // V
    double newton_tol_i = 1e-9;  // A
    int newton_max_iters = 100;
    double gmin = 1e-12;         // S to ground at every node
    double temperature_c = 27.0;
    bool leakage = false;
    double cap_floor = 1e-16;    // F added at every node for a nonsingular dynamic matrix
    int max_step_halvings = 8;
};

struct transient_result {
    std::vector<double> time;
    std::vector<std::string> node_names;
    std::vector<std::string> source_names;
    std::vector<std::pair<std::string, std::string>> source_nodes;  // (+, -) per source
    std::vector<std::vector<double>> node_v;  // [node][step]
    std::vector<std::vector<double>> src_i;   // delivered current, [source][step]
    double max_residual = 0.0;                // largest accepted KCL residual (A)

    const std::vector<double>& voltage(const std::string& node) const {
        for (std::size_t i = 0; i < node_names.size(); ++i)
            if (node_names[i] == node) return node_v[i];
        throw error("unknown-node", "no node named '" + node + "' in result");
    }
    const std::vector<double>& current(const std::string& source) const {
        for (std::size_t i = 0; i < source_names.size(); ++i)
            if (source_names[i] == source) return src_i[i];
        throw error("unknown-source", "no source named '" + source + "' in result");
    }
    bool has_node(const std::string& node) const {
        for (const auto& n : node_names)
            if (n == node) return true;
        return false;
    }
};

// =============================================================================
// Modified nodal analysis core
// =============================================================================

namespace detail {

struct compiled_mosfet {
    int d = -1, g = -1, s = -1, b = -1;
    mosfet_params params;
};

struct compiled_two_terminal {
    int a = -1, b = -1;
    double value = 0.0;  // conductance for R, capacitance for C
};

struct compiled_source {
    int p = -1, n = -1;
    stimulus stim;
    int branch = 0;  // row/column in the MNA system
    std::string name;
};

class mna_system {
public:
    mna_system(const circuit& c, const sim_options& opt) : opt_(opt) {
        for (const auto& name : c.nodes())
            if (name != "0") index_[name] = static_cast<int>(node_names_.size()), node_names_.push_back(name);

        auto idx = [&](const std::string& n) -> int { return n == "0" ? -1 : index_.at(n); };

        for (const auto& e : c.elements) {
            switch (e.k) {
                case element::kind::resistor:
                    resistors_.push_back({idx(e.terminals[0]), idx(e.terminals[1]), 1.0 / e.value});
                    break;
                case element::kind::capacitor:
                    caps_.push_back({idx(e.terminals[0]), idx(e.terminals[1]), e.value});
                    break;
                case element::kind::vsource: {
                    compiled_source s;
                    s.p = idx(e.terminals[0]);
                    s.n = idx(e.terminals[1]);
                    s.stim = e.stim;
                    s.name = e.name;
                    sources_.push_back(s);
                    break;
                }
                case element::kind::mosfet: {
                    compiled_mosfet m;
                    m.d = idx(e.terminals[0]);
                    m.g = idx(e.terminals[1]);
                    m.s = idx(e.terminals[2]);
                    m.b = idx(e.terminals[3]);
                    m.params = c.resolved_params(e);
                    mosfets_.push_back(m);
                    // lumped device capacitances
                    if (m.params.cgs > 0.0) caps_.push_back({m.g, m.s, m.params.cgs});
                    if (m.params.cgd > 0.0) caps_.push_back({m.g, m.d, m.params.cgd});
                    if (m.params.cdb > 0.0) caps_.push_back({m.d, m.b, m.params.cdb});
                    break;
                }
            }
        }
        if (opt_.cap_floor > 0.0)
            for (int n = 0; n < num_nodes(); ++n) caps_.push_back({n, -1, opt_.cap_floor});

        for (std::size_t i = 0; i < sources_.size(); ++i)
            sources_[i].branch = num_nodes() + static_cast<int>(i);

        cap_v_.assign(caps_.size(), 0.0);
        cap_i_.assign(caps_.size(), 0.0);
    }

    int num_nodes() const { return static_cast<int>(node_names_.size()); }
    int system_size() const { return num_nodes() + static_cast<int>(sources_.size()); }
    const std::vector<std::string>& node_names() const { return node_names_; }
    const std::vector<compiled_source>& sources() const { return sources_; }

    /// Newton solve of the (possibly companion-augmented) nodal equations.
    /// dynamic_h <= 0 means DC (capacitors open). Returns the converged KCL
    /// residual. Throws no-convergence / singular-matrix.
    double newton_solve(Eigen::VectorXd& x, double t, double src_scale, double dynamic_h) {
        const int nn = num_nodes();
        const int sz = system_size();
        Eigen::MatrixXd J(sz, sz);
        Eigen::VectorXd F(sz);

        double max_dx = std::numeric_limits<double>::infinity();
        for (int iter = 0; iter < opt_.newton_max_iters; ++iter) {
            J.setZero();
            F.setZero();
            assemble(J, F, x, t, src_scale, dynamic_h);

            double max_f = 0.0;
            for (int n = 0; n < nn; ++n) max_f = std::max(max_f, std::abs(F[n]));
            if (max_f < opt_.newton_tol_i && max_dx < opt_.newton_tol_v) return max_f;

            Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
            if (!lu.isInvertible())
                throw error("singular-matrix", "nodal matrix is singular (floating subcircuit?)");
            Eigen::VectorXd dx = lu.solve(-F);

            max_dx = 0.0;
            for (int n = 0; n < nn; ++n) {
                dx[n] = std::clamp(dx[n], -1.0, 1.0);  // voltage step limiting
                max_dx = std::max(max_dx, std::abs(dx[n]));
            }
            x += dx;
        }
        throw error("no-convergence", "Newton iteration did not converge");
    }

    void assemble(Eigen::MatrixXd& J, Eigen::VectorXd& F, const Eigen::VectorXd& x, double t,
                  double src_scale, double dynamic_h) const {
        auto v = [&](int n) -> double { return n < 0 ? 0.0 : x[n]; };
        auto addJ = [&](int r, int c, double g) {
            if (r >= 0 && c >= 0) J(r, c) += g;
        };
        auto addF = [&](int r, double i) {
            if (r >= 0) F[r] += i;
        };

        for (int n = 0; n < num_nodes(); ++n) {
            J(n, n) += opt_.gmin;
            F[n] += opt_.gmin * x[n];
        }

        for (const auto& r : resistors_) {
            const double i = r.value * (v(r.a) - v(r.b));
            addF(r.a, i);
            addF(r.b, -i);
            addJ(r.a, r.a, r.value);
            addJ(r.a, r.b, -r.value);
            addJ(r.b, r.a, -r.value);
            addJ(r.b, r.b, r.value);
        }

        if (dynamic_h > 0.0) {
            const bool trap = opt_.method == integration_method::trapezoidal;
            for (std::size_t k = 0; k < caps_.size(); ++k) {
                const auto& cp = caps_[k];
                const double geq = (trap ? 2.0 : 1.0) * cp.value / dynamic_h;
                const double vb = v(cp.a) - v(cp.b);
                const double hist = trap ? (geq * cap_v_[k] + cap_i_[k]) : (geq * cap_v_[k]);
                const double i = geq * vb - hist;
                addF(cp.a, i);
                addF(cp.b, -i);
                addJ(cp.a, cp.a, geq);
                addJ(cp.a, cp.b, -geq);
                addJ(cp.b, cp.a, -geq);
                addJ(cp.b, cp.b, geq);
            }
        }

        for (const auto& m : mosfets_) {
            const double vd = v(m.d), vg = v(m.g), vs = v(m.s);
            const bool nmos = m.params.pol == polarity::nmos;
            // conventional current flows from the higher of (d, s) to the lower
            int hi = m.d, lo = m.s;
            double vhi = vd, vlo = vs;
            if (vd < vs) {
                hi = m.s;
                lo = m.d;
                vhi = vs;
                vlo = vd;
            }
            operating_point op;
            op.vgs = nmos ? (vg - vlo) : (vhi - vg);
            op.vds = vhi - vlo;
            const device_eval e = drain_current_with_derivatives(m.params, op, opt_.leakage,
                                                                 opt_.temperature_c);
            addF(hi, e.i);
            addF(lo, -e.i);
            // dI/dvg, dI/dvhi, dI/dvlo in absolute terminal voltages
            const double dig = nmos ? e.gm : -e.gm;
            const double dihi = nmos ? e.gds : (e.gm + e.gds);
            const double dilo = nmos ? (-e.gm - e.gds) : -e.gds;
            addJ(hi, m.g, dig);
            addJ(hi, hi, dihi);
            addJ(hi, lo, dilo);
            addJ(lo, m.g, -dig);
            addJ(lo, hi, -dihi);
            addJ(lo, lo, -dilo);
        }

        for (const auto& s : sources_) {
            const int br = s.branch;
            const double ib = x[br];  // current from + to - inside the source
            addF(s.p, ib);
            addF(s.n, -ib);
            addJ(s.p, br, 1.0);
            addJ(s.n, br, -1.0);
            F[br] = v(s.p) - v(s.n) - src_scale * s.stim.value_at(t);
            addJ(br, s.p, 1.0);
            addJ(br, s.n, -1.0);
        }
    }

    /// Refresh the capacitor companion state from a converged solution.
    void update_cap_state(const Eigen::VectorXd& x, double h) {
        auto v = [&](int n) -> double { return n < 0 ? 0.0 : x[n]; };
        const bool trap = opt_.method == integration_method::trapezoidal;
        for (std::size_t k = 0; k < caps_.size(); ++k) {
            const auto& cp = caps_[k];
            const double geq = (trap ? 2.0 : 1.0) * cp.value / h;
            const double vb = v(cp.a) - v(cp.b);
            const double i = trap ? (geq * (vb - cap_v_[k]) - cap_i_[k]) : (geq * (vb - cap_v_[k]));
            cap_v_[k] = vb;
            cap_i_[k] = i;
        }
    }

    void init_cap_state(const Eigen::VectorXd& x) {
        auto v = [&](int n) -> double { return n < 0 ? 0.0 : x[n]; };
        for (std::size_t k = 0; k < caps_.size(); ++k) {
            cap_v_[k] = v(caps_[k].a) - v(caps_[k].b);
            cap_i_[k] = 0.0;
        }
    }

private:
    sim_options opt_;
    std::map<std::string, int> index_;
    std::vector<std::string> node_names_;
    std::vector<compiled_two_terminal> resistors_;
    std::vector<compiled_two_terminal> caps_;
    std::vector<compiled_mosfet> mosfets_;
    std::vector<compiled_source> sources_;
    std::vector<double> cap_v_;
    std::vector<double> cap_i_;
};

/// Robust DC solve: plain Newton, then source stepping, then a pseudo-transient
/// settle (backward Euler with growing artificial steps, which walks the state
/// into a stable basin of bistable circuits) polished by a final Newton pass.
/// A singular nodal matrix aborts immediately; it marks a modeling error, not a
/// convergence problem.
inline Eigen::VectorXd robust_dc_solve(const circuit& c, const sim_options& opt, double t = 0.0) {
    mna_system sys(c, opt);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.system_size());
    try {
        sys.newton_solve(x, t, 1.0, 0.0);
        return x;
    } catch (const error& e) {
        if (e.code() == "singular-matrix") throw;
    }

    // source stepping
    try {
        x.setZero();
        for (int k = 1; k <= 10; ++k) sys.newton_solve(x, t, k / 10.0, 0.0);
        return x;
    } catch (const error& e) {
        if (e.code() == "singular-matrix") throw;
    }

    // pseudo-transient settle: integrate toward a stable state and try to
    // polish with plain Newton once movement per step is small (slow diode
    // tails settle asymptotically, so the polish attempt is periodic rather
    // than gated on full settling)
    sim_options pt = opt;
    pt.method = integration_method::backward_euler;
    mna_system dyn(c, pt);
    x.setZero();
    dyn.init_cap_state(x);
    double h = 1e-15;
    for (int step = 0; step < 2000; ++step) {
        Eigen::VectorXd trial = x;
        try {
            dyn.newton_solve(trial, t, 1.0, h);
        } catch (const error& e) {
            if (e.code() == "singular-matrix") throw;
            h *= 0.5;
            if (h < 1e-24) break;
            continue;
        }
        double moved = 0.0;
        for (int n = 0; n < dyn.num_nodes(); ++n) moved = std::max(moved, std::abs(trial[n] - x[n]));
        x = trial;
        dyn.update_cap_state(x, h);
        if (step > 10 && (moved < 1e-6 || step % 25 == 24)) {
            Eigen::VectorXd polish = x;
            try {
                sys.newton_solve(polish, t, 1.0, 0.0);
                return polish;
            } catch (const error& e) {
                if (e.code() == "singular-matrix") throw;
            }
        }
        h = std::min(h * 1.5, 1e-11);
    }
    throw error("no-convergence", "DC operating point not found (source stepping and "
                                  "pseudo-transient startup both failed)");
}

}  // namespace detail

// =============================================================================
// DC operating point
// =============================================================================

/// Newton solution of the nonlinear nodal equations with gmin at every node.
inline std::map<std::string, double> dc_operating_point(const circuit& c, const sim_options& opt) {
    detail::mna_system sys(c, opt);
    const Eigen::VectorXd x = detail::robust_dc_solve(c, opt);
    std::map<std::string, double> out;
    out["0"] = 0.0;
    for (int n = 0; n < sys.num_nodes(); ++n) out[sys.node_names()[n]] = x[n];
    return out;
}

// =============================================================================
// Transient analysis
// =============================================================================

inline transient_result transient(const circuit& c, const sim_options& opt) {
    if (!(opt.dt > 0.0) || !(opt.t_stop >= opt.dt))
        throw error("invalid-argument", "need dt > 0 and t_stop >= dt");
    detail::mna_system sys(c, opt);

    // DC point at t = 0 seeds the integration
    Eigen::VectorXd x = detail::robust_dc_solve(c, opt);
    sys.init_cap_state(x);

    transient_result res;
    res.node_names = sys.node_names();
    for (const auto& s : sys.sources()) {
        res.source_names.push_back(s.name);
        res.source_nodes.emplace_back(
            s.p >= 0 ? res.node_names[s.p] : "0",
            s.n >= 0 ? res.node_names[s.n] : "0");
    }
    res.node_v.assign(res.node_names.size(), {});
    res.src_i.assign(res.source_names.size(), {});

    auto record = [&](double t) {
        res.time.push_back(t);
        for (int n = 0; n < sys.num_nodes(); ++n) res.node_v[n].push_back(x[n]);
        for (std::size_t s = 0; s < sys.sources().size(); ++s)
            res.src_i[s].push_back(-x[sys.sources()[s].branch]);  // delivered current
    };
    record(0.0);

    // advance from t over h, halving locally on Newton failure
    std::function<void(double, double, int)> advance = [&](double t, double h, int depth) {
        Eigen::VectorXd trial = x;
        try {
            const double resid = sys.newton_solve(trial, t + h, 1.0, h);
            res.max_residual = std::max(res.max_residual, resid);
        } catch (const error& e) {
            if (e.code() == "singular-matrix") throw;
            if (depth >= opt.max_step_halvings)
                throw error("step-failure", "timestep halving exhausted at t = " + format_double(t));
            advance(t, 0.5 * h, depth + 1);
            advance(t + 0.5 * h, 0.5 * h, depth + 1);
            return;
        }
        x = trial;
        sys.update_cap_state(x, h);
    };

    const auto n_steps = static_cast<std::size_t>(std::round(opt.t_stop / opt.dt));
    for (std::size_t k = 1; k <= n_steps; ++k) {
        const double t0 = static_cast<double>(k - 1) * opt.dt;
        advance(t0, opt.dt, 0);
        record(static_cast<double>(k) * opt.dt);
    }
    return res;
}

/// Convenience wrapper honoring the circuit's .tran directive.
inline transient_result transient_from_directive(const circuit& c, sim_options opt) {
    if (!c.tran) throw error("missing-tran", "circuit has no .tran directive");
    opt.dt = c.tran->dt;
    opt.t_stop = c.tran->t_stop;
    return transient(c, opt);
}

// =============================================================================
// Measurements
// =============================================================================

struct delay_report {
    double t_dh = 0.0;  // rising-edge propagation delay (s)
    double t_dl = 0.0;  // falling-edge propagation delay (s)
    std::vector<double> in_rise, in_fall, out_rise, out_fall;  // crossing times used
    bool pass = false;

    double mean_delay() const { return 0.5 * (t_dh + t_dl); }
};

namespace detail {

inline std::vector<double> crossings(const std::vector<double>& t, const std::vector<double>& v,
                                     double level, bool rising) {
    std::vector<double> out;
    for (std::size_t i = 1; i < t.size(); ++i) {
        const bool cross = rising ? (v[i - 1] < level && v[i] >= level)
                                  : (v[i - 1] > level && v[i] <= level);
        if (cross) {
            const double f = (level - v[i - 1]) / (v[i] - v[i - 1]);
            out.push_back(t[i - 1] + f * (t[i] - t[i - 1]));
        }
    }
    return out;
}

/// Mean of (first output crossing after each input crossing), pairing each
/// input edge with the output edge that lands before the next input edge.
inline std::optional<double> mean_edge_delay(const std::vector<double>& in_x,
                                             const std::vector<double>& out_x) {
    double sum = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < in_x.size(); ++i) {
        const double t_in = in_x[i];
        const double t_next = (i + 1 < in_x.size()) ? in_x[i + 1]
                                                    : std::numeric_limits<double>::infinity();
        for (double t_out : out_x) {
            if (t_out > t_in && t_out <= t_next) {
                sum += t_out - t_in;
                ++count;
                break;
            }
        }
    }
    if (count == 0) return std::nullopt;
    return sum / count;
}

}  // namespace detail

/// 50%-of-swing propagation delays, rising and falling edges measured
/// separately and averaged over all complete cycles after settle_time.
inline delay_report measure_delay(const transient_result& r, const std::string& in_node,
                                  const std::string& out_node, double in_lo, double in_hi,
                                  double out_lo, double out_hi, double settle_time = 0.0) {
    const auto& vin = r.voltage(in_node);
    const auto& vout = r.voltage(out_node);
    const double in_mid = 0.5 * (in_lo + in_hi);
    const double out_mid = 0.5 * (out_lo + out_hi);

    auto after = [&](std::vector<double> xs) {
        std::vector<double> out;
        for (double x : xs)
            if (x >= settle_time) out.push_back(x);
        return out;
    };

    delay_report rep;
    rep.in_rise = after(detail::crossings(r.time, vin, in_mid, true));
    rep.in_fall = after(detail::crossings(r.time, vin, in_mid, false));
    rep.out_rise = after(detail::crossings(r.time, vout, out_mid, true));
    rep.out_fall = after(detail::crossings(r.time, vout, out_mid, false));

    if (rep.in_rise.empty() && rep.in_fall.empty())
        throw error("no-crossing", "input never crosses its 50% level");
    if (rep.out_rise.empty() && rep.out_fall.empty())
        throw error("no-crossing", "output never crosses its 50% level");

    const auto dh = detail::mean_edge_delay(rep.in_rise, rep.out_rise);
    const auto dl = detail::mean_edge_delay(rep.in_fall, rep.out_fall);
    if (!dh || !dl) throw error("no-crossing", "no paired input/output edges in the window");
    rep.t_dh = *dh;
    rep.t_dl = *dl;
    rep.pass = rep.t_dh >= 0.0 && rep.t_dl >= 0.0;
    return rep;
}

struct output_check {
    std::string node;
    double target_low = 0.0;
    double target_high = 1.0;
    double margin_lo = 0.1;  // must dip below low + margin_lo * swing
    double margin_hi = 0.9;  // must reach above low + margin_hi * swing
};

struct functional_spec {
    std::vector<output_check> outputs;
    double period = 0.0;
    int settle_cycles = 4;
    int check_cycles = 4;
};

struct functional_result {
    bool pass = true;
    std::vector<std::string> reasons;
};

/// Pass iff every output reaches both margin levels in every checked cycle.
inline functional_result functional_check(const transient_result& r, const functional_spec& spec) {
    if (!(spec.period > 0.0)) throw error("bad-config", "functional spec needs a period");
    const double t_end = r.time.back();
    const double need = (spec.settle_cycles + spec.check_cycles) * spec.period;
    if (need > t_end * (1.0 + 1e-9))
        throw error("bad-config", "check window does not fit in the simulated span");
    for (const auto& oc : spec.outputs)
        if (!r.has_node(oc.node))
            throw error("bad-config", "functional spec names unknown node '" + oc.node + "'");

    functional_result out;
    for (const auto& oc : spec.outputs) {
        const auto& v = r.voltage(oc.node);
        const double swing = oc.target_high - oc.target_low;
        const double hi_level = oc.target_low + oc.margin_hi * swing;
        const double lo_level = oc.target_low + oc.margin_lo * swing;
        for (int cyc = spec.settle_cycles; cyc < spec.settle_cycles + spec.check_cycles; ++cyc) {
            const double t0 = cyc * spec.period;
            const double t1 = t0 + spec.period;
            double vmin = std::numeric_limits<double>::infinity();
            double vmax = -vmin;
            for (std::size_t i = 0; i < r.time.size(); ++i) {
                if (r.time[i] < t0 || r.time[i] > t1) continue;
                vmin = std::min(vmin, v[i]);
                vmax = std::max(vmax, v[i]);
            }
            if (vmax < hi_level) {
                out.pass = false;
                out.reasons.push_back("swing-shortfall: " + oc.node + " cycle " +
                                      std::to_string(cyc) + " high " + format_double(vmax) +
                                      " < " + format_double(hi_level));
            }
            if (vmin > lo_level) {
                out.pass = false;
                out.reasons.push_back("swing-shortfall: " + oc.node + " cycle " +
                                      std::to_string(cyc) + " low " + format_double(vmin) + " > " +
                                      format_double(lo_level));
            }
        }
    }
    return out;
}

struct bisect_result {
    double f_max = 0.0;
    int probes = 0;
};

/// Bisect a monotone pass/fail boundary. probe(f_lo) must pass and
/// probe(f_hi) must fail.
inline bisect_result max_frequency(const std::function<bool(double)>& probe, double f_lo,
                                   double f_hi, double tol_hz) {
    if (!(f_lo > 0.0) || !(f_hi > f_lo) || !(tol_hz > 0.0))
        throw error("invalid-argument", "need 0 < f_lo < f_hi and tol_hz > 0");
    if (!probe(f_lo)) throw error("bracket-invalid", "probe fails at f_lo");
    if (probe(f_hi)) throw error("bracket-invalid", "probe passes at f_hi");
    bisect_result res;
    while (f_hi - f_lo > tol_hz) {
        const double mid = 0.5 * (f_lo + f_hi);
        ++res.probes;
        if (probe(mid))
            f_lo = mid;
        else
            f_hi = mid;
    }
    res.f_max = 0.5 * (f_lo + f_hi);
    return res;
}

/// Standard circuit probe: regenerate at each frequency, simulate eight input
/// periods, check the last four.
inline std::function<bool(double)> functional_probe(
    const std::function<circuit(double)>& generator,
    const std::function<functional_spec(double)>& make_spec, sim_options opt,
    int points_per_period = 256) {
    return [=](double f) mutable -> bool {
        const double period = 1.0 / f;
        opt.dt = period / points_per_period;
        opt.t_stop = 8.0 * period;
        const circuit c = generator(f);
        try {
            const auto r = transient(c, opt);
            return functional_check(r, make_spec(f)).pass;
        } catch (const error& e) {
            if (e.code() == "bad-config") throw;
            return false;  // non-convergence at speed counts as failure
        }
    };
}

struct power_report {
    double avg_power = 0.0;        // W
    double energy_per_cycle = 0.0; // J
};

/// Time-averaged power delivered by the named sources over [t0, t1].
inline power_report measure_power(const transient_result& r,
                                  const std::vector<std::string>& source_names, double t0,
                                  double t1, double period) {
    if (!(t1 > t0)) throw error("empty-window", "need t1 > t0");
    std::vector<std::size_t> src;
    for (const auto& name : source_names) {
        bool found = false;
        for (std::size_t s = 0; s < r.source_names.size(); ++s)
            if (r.source_names[s] == name) {
                src.push_back(s);
                found = true;
            }
        if (!found) throw error("unknown-source", "no source named '" + name + "'");
    }

    auto node_voltage = [&](const std::string& n, std::size_t i) -> double {
        return n == "0" ? 0.0 : r.voltage(n)[i];
    };

    double energy = 0.0;
    double span = 0.0;
    double prev_p = 0.0, prev_t = 0.0;
    bool have_prev = false;
    for (std::size_t i = 0; i < r.time.size(); ++i) {
        const double t = r.time[i];
        if (t < t0 || t > t1) continue;
        double p = 0.0;
        for (std::size_t s : src) {
            const auto& [np, nn] = r.source_nodes[s];
            p += (node_voltage(np, i) - node_voltage(nn, i)) * r.src_i[s][i];
        }
        if (have_prev) {
            energy += 0.5 * (p + prev_p) * (t - prev_t);
            span += t - prev_t;
        }
        prev_p = p;
        prev_t = t;
        have_prev = true;
    }
    if (span <= 0.0) throw error("empty-window", "no samples in the window");
    power_report rep;
    rep.avg_power = energy / span;
    rep.energy_per_cycle = rep.avg_power * period;
    return rep;
}

/// Static supply current at the DC point with the subthreshold model enabled.
/// source_levels pins the named inputs to DC values; the returned current is
/// the signed sum delivered by the supply sources.
inline double measure_leakage(const circuit& c, const std::map<std::string, double>& source_levels,
                              const std::vector<std::string>& supply_names, sim_options opt) {
    circuit work = c;
    for (auto& e : work.elements) {
        if (e.k != element::kind::vsource) continue;
        auto it = source_levels.find(e.name);
        if (it != source_levels.end()) e.stim = stimulus::dc(it->second);
    }
    opt.leakage = true;

    detail::mna_system sys(work, opt);
    const Eigen::VectorXd x = detail::robust_dc_solve(work, opt);

    double total = 0.0;
    for (const auto& s : sys.sources())
        for (const auto& name : supply_names)
            if (s.name == name) total += -x[s.branch];
    return total;
}

// =============================================================================
// Process corners
// =============================================================================

struct corner_spec {
    std::string name = "TT";
    double temp_c = 27.0;
    double dvth = 0.0;      // signed threshold shift (V)
    double kp_scale = 1.0;

    static corner_spec TT() { return {"TT", 27.0, 0.0, 1.0}; }
    static corner_spec FF() { return {"FF", -40.0, -0.03, 1.1}; }
    static corner_spec SS() { return {"SS", 85.0, 0.03, 0.9}; }
};

/// Corner and temperature dependence of a deck: vth drifts -1 mV/C, mobility
/// scales as (T/300K)^-1.5.
inline mosfet_params apply_corner(mosfet_params p, const corner_spec& corner) {
    p.vth = std::max(0.01, p.vth + corner.dvth - 1e-3 * (corner.temp_c - 27.0));
    p.kp *= corner.kp_scale * std::pow((corner.temp_c + 273.15) / 300.15, -1.5);
    return p;
}

inline circuit apply_corner(const circuit& c, const corner_spec& corner) {
    circuit out = c;
    for (auto& [name, card] : out.models) card.params = apply_corner(card.params, corner);
    return out;
}

struct corner_row {
    std::string corner;
    std::string measure;
    double value = 0.0;
};

/// Run each measurement on the circuit re-parameterized per corner. Simulation
/// errors are rethrown annotated with the corner name.
inline std::vector<corner_row> corner_sweep(
    const circuit& c, const std::vector<corner_spec>& corners,
    const std::vector<std::pair<std::string,
                                std::function<double(const circuit&, const corner_spec&)>>>& measures) {
    std::vector<corner_row> rows;
    for (const auto& corner : corners) {
        const circuit cc = apply_corner(c, corner);
        for (const auto& [mname, fn] : measures) {
            try {
                rows.push_back({corner.name, mname, fn(cc, corner)});
            } catch (const error& e) {
                throw error(e.code(), std::string(e.what()) + " [corner " + corner.name + "]");
            }
        }
    }
    return rows;
}

}  // namespace casdlab
