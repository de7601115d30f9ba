#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "casdlab/device.hpp"
#include "casdlab/error.hpp"

namespace casdlab {

// =============================================================================
// Netlist text format
// =============================================================================
//
//   * full-line comment            # comment to end of line
//   M<name> <d> <g> <s> <b> <model> [W=<v>] [L=<v>]
//   R<name> <n1> <n2> <value>
//   C<name> <n1> <n2> <value>
//   V<name> <n+> <n-> (DC <v> | <v> | PULSE(v1 v2 td tr tf pw period))
//   .model <name> nmos|pmos (vth=.. kp=.. lambda=.. cgs=.. cgd=.. cdb=..
//                            i0=.. nslope=.. wref=.. lref=..)
//   .tran <dt> <t_stop>
//   .end
//
// Engineering suffixes f p n u m k meg g, case-insensitive. Node "0" is
// ground. Element kind is the first letter of the name, case-insensitive.
// W/L scale the model transconductance as kp_eff = kp * (W/L) / (wref/lref).

class parse_error : public error {
public:
    parse_error(std::string code, const std::string& message, int line, int col)
        : error(std::move(code), at(line, col) + message), line_(line), col_(col) {}

    int line() const { return line_; }
    int col() const { return col_; }

private:
    static std::string at(int line, int col) {
        return "line " + std::to_string(line) + ", col " + std::to_string(col) + ": ";
    }
    int line_ = 0, col_ = 0;
};

struct stimulus {
    enum class kind { dc, pulse };
    kind k = kind::dc;
    double dc_level = 0.0;
    // pulse parameters
    double v1 = 0.0, v2 = 0.0;
    double t_delay = 0.0, t_rise = 0.0, t_fall = 0.0;
    double pulse_width = 0.0, period = 0.0;

    static stimulus dc(double level) {
        stimulus s;
        s.k = kind::dc;
        s.dc_level = level;
        return s;
    }
    static stimulus pulse(double v1, double v2, double t_delay, double t_rise, double t_fall,
                          double pulse_width, double period) {
        stimulus s;
        s.k = kind::pulse;
        s.v1 = v1;
        s.v2 = v2;
        s.t_delay = t_delay;
        s.t_rise = t_rise;
        s.t_fall = t_fall;
        s.pulse_width = pulse_width;
        s.period = period;
        return s;
    }

    double value_at(double t) const {
        if (k == kind::dc) return dc_level;
        if (t < t_delay) return v1;
        double u = std::fmod(t - t_delay, period);
        if (u < t_rise) return v1 + (v2 - v1) * (u / t_rise);
        u -= t_rise;
        if (u < pulse_width) return v2;
        u -= pulse_width;
        if (u < t_fall) return v2 + (v1 - v2) * (u / t_fall);
        return v1;
    }

    bool operator==(const stimulus&) const = default;
};

struct element {
    enum class kind { mosfet, resistor, capacitor, vsource };
    kind k = kind::resistor;
    std::string name;
    std::vector<std::string> terminals;  // mosfet: d g s b; others: two
    std::string model;                   // mosfet only
    double width = 1.0, length = 1.0;    // mosfet only
    double value = 0.0;                  // R/C only
    stimulus stim;                       // V only
    int line = 0, col = 0;

    // programmatic per-element deck override (Monte Carlo); never printed
    std::optional<mosfet_params> params_override;

    bool operator==(const element& o) const {
        return k == o.k && name == o.name && terminals == o.terminals && model == o.model &&
               width == o.width && length == o.length && value == o.value && stim == o.stim;
    }
};

struct model_card {
    mosfet_params params;
    double w_ref = 1.0;
    double l_ref = 1.0;

    bool operator==(const model_card& o) const {
        const auto& p = params;
        const auto& q = o.params;
        return p.pol == q.pol && p.vth == q.vth && p.kp == q.kp && p.lambda == q.lambda &&
               p.cgs == q.cgs && p.cgd == q.cgd && p.cdb == q.cdb &&
               p.subthreshold_i0 == q.subthreshold_i0 && p.subthreshold_n == q.subthreshold_n &&
               w_ref == o.w_ref && l_ref == o.l_ref;
    }
};

struct tran_directive {
    double dt = 0.0;
    double t_stop = 0.0;
    bool operator==(const tran_directive&) const = default;
};

struct diagnostic {
    std::string code;
    std::string message;
    int line = 0, col = 0;

    std::string format(const std::string& file = "<netlist>") const {
        return file + ":" + std::to_string(line) + ":" + std::to_string(col) + " " + code + " " +
               message;
    }
};

struct circuit {
    std::vector<element> elements;
    std::map<std::string, model_card> models;
    std::optional<tran_directive> tran;

    bool operator==(const circuit& o) const {
        return elements == o.elements && models == o.models && tran == o.tran;
    }

    /// Node names in order of first appearance.
    std::vector<std::string> nodes() const {
        std::vector<std::string> out;
        std::set<std::string> seen;
        for (const auto& e : elements)
            for (const auto& t : e.terminals)
                if (seen.insert(t).second) out.push_back(t);
        return out;
    }

    const element* find_element(const std::string& name) const {
        for (const auto& e : elements)
            if (e.name == name) return &e;
        return nullptr;
    }

    /// Device deck for a mosfet element with the W/L transconductance scale
    /// applied (and the Monte Carlo override honored).
    mosfet_params resolved_params(const element& e) const {
        auto it = models.find(e.model);
        if (it == models.end()) throw error("unresolved-model", "no model named " + e.model);
        mosfet_params p = e.params_override ? *e.params_override : it->second.params;
        const double ref_ratio = it->second.w_ref / it->second.l_ref;
        p.kp *= (e.width / e.length) / ref_ratio;
        return p;
    }
};

// =============================================================================
// Number formatting and parsing
// =============================================================================

/// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double v) {
    char buf[48];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

inline std::optional<double> suffix_scale(const std::string& sfx) {
    static const std::map<std::string, double> table = {
        {"", 1.0},     {"f", 1e-15}, {"p", 1e-12}, {"n", 1e-9}, {"u", 1e-6},
        {"m", 1e-3},   {"k", 1e3},   {"meg", 1e6}, {"g", 1e9}};
    auto it = table.find(sfx);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

struct token {
    std::string text;
    int col = 0;
};

inline std::vector<token> tokenize_line(const std::string& line) {
    std::vector<token> out;
    std::string cur;
    int cur_col = 0;
    auto flush = [&] {
        if (!cur.empty()) {
            out.push_back({cur, cur_col});
            cur.clear();
        }
    };
    for (int i = 0; i < static_cast<int>(line.size()); ++i) {
        const char c = line[i];
        if (c == '#') break;  // comment to end of line
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
            flush();
        } else if (c == '(' || c == ')' || c == '=') {
            flush();
            out.push_back({std::string(1, c), i + 1});
        } else {
            if (cur.empty()) cur_col = i + 1;
            cur += c;
        }
    }
    flush();
    return out;
}

inline double parse_number(const token& tok, int line) {
    const char* begin = tok.text.c_str();
    char* end = nullptr;
    const double base = std::strtod(begin, &end);
    if (end == begin)
        throw parse_error("malformed-number", "expected a number, got '" + tok.text + "'", line,
                          tok.col);
    const auto scale = suffix_scale(lower(end));
    if (!scale)
        throw parse_error("bad-unit-suffix", "unknown unit suffix '" + std::string(end) + "'",
                          line, tok.col);
    return base * *scale;
}

}  // namespace detail

// =============================================================================
// Parser
// =============================================================================

inline circuit parse_netlist(const std::string& text) {
    using detail::token;
    circuit c;

    int line_no = 0;
    std::size_t pos = 0;
    bool ended = false;
    while (pos <= text.size() && !ended) {
        const std::size_t eol = text.find('\n', pos);
        const std::string raw =
            text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
        pos = (eol == std::string::npos) ? text.size() + 1 : eol + 1;
        ++line_no;

        if (!raw.empty() && raw[0] == '*') continue;  // full-line comment
        auto toks = detail::tokenize_line(raw);
        if (toks.empty()) continue;

        auto need = [&](std::size_t n, const std::string& what) {
            if (toks.size() < n)
                throw parse_error("arity-error", "expected " + what, line_no,
                                  toks.empty() ? 1 : toks.back().col);
        };
        auto num = [&](std::size_t i) { return detail::parse_number(toks[i], line_no); };

        const std::string first = toks[0].text;
        if (first[0] == '.') {
            const std::string directive = detail::lower(first);
            if (directive == ".end") {
                ended = true;
            } else if (directive == ".tran") {
                need(3, ".tran <dt> <t_stop>");
                c.tran = tran_directive{num(1), num(2)};
            } else if (directive == ".model") {
                need(4, ".model <name> nmos|pmos (...)");
                model_card card;
                const std::string mname = toks[1].text;
                const std::string type = detail::lower(toks[2].text);
                if (type == "nmos")
                    card.params.pol = polarity::nmos;
                else if (type == "pmos")
                    card.params.pol = polarity::pmos;
                else
                    throw parse_error("bad-model-type", "model type must be nmos or pmos", line_no,
                                      toks[2].col);
                std::size_t i = 3;
                const bool parens = toks[i].text == "(";
                if (parens) ++i;
                while (i < toks.size() && toks[i].text != ")") {
                    need(i + 3, "key=value in model card");
                    if (toks[i + 1].text != "=")
                        throw parse_error("bad-model-param", "expected key=value", line_no,
                                          toks[i].col);
                    const std::string key = detail::lower(toks[i].text);
                    const double v = num(i + 2);
                    auto& p = card.params;
                    if (key == "vth") p.vth = v;
                    else if (key == "kp") p.kp = v;
                    else if (key == "lambda") p.lambda = v;
                    else if (key == "cgs") p.cgs = v;
                    else if (key == "cgd") p.cgd = v;
                    else if (key == "cdb") p.cdb = v;
                    else if (key == "i0") p.subthreshold_i0 = v;
                    else if (key == "nslope") p.subthreshold_n = v;
                    else if (key == "wref") card.w_ref = v;
                    else if (key == "lref") card.l_ref = v;
                    else
                        throw parse_error("bad-model-param", "unknown model parameter '" + key + "'",
                                          line_no, toks[i].col);
                    i += 3;
                }
                c.models[mname] = card;
            } else {
                throw parse_error("unknown-directive", "unknown directive '" + first + "'", line_no,
                                  toks[0].col);
            }
            continue;
        }

        element e;
        e.name = first;
        e.line = line_no;
        e.col = toks[0].col;
        const char kind_letter = static_cast<char>(std::tolower(static_cast<unsigned char>(first[0])));
        switch (kind_letter) {
            case 'm': {
                need(6, "M<name> d g s b <model>");
                e.k = element::kind::mosfet;
                e.terminals = {toks[1].text, toks[2].text, toks[3].text, toks[4].text};
                e.model = toks[5].text;
                std::size_t i = 6;
                while (i < toks.size()) {
                    need(i + 3, "W=<v> or L=<v>");
                    if (toks[i + 1].text != "=")
                        throw parse_error("arity-error", "expected key=value after model", line_no,
                                          toks[i].col);
                    const std::string key = detail::lower(toks[i].text);
                    if (key == "w") e.width = num(i + 2);
                    else if (key == "l") e.length = num(i + 2);
                    else
                        throw parse_error("arity-error", "unknown mosfet parameter '" + key + "'",
                                          line_no, toks[i].col);
                    i += 3;
                }
                break;
            }
            case 'r':
            case 'c': {
                need(4, "element needs two nodes and a value");
                if (toks.size() > 4)
                    throw parse_error("arity-error", "unexpected trailing tokens", line_no,
                                      toks[4].col);
                e.k = (kind_letter == 'r') ? element::kind::resistor : element::kind::capacitor;
                e.terminals = {toks[1].text, toks[2].text};
                e.value = num(3);
                break;
            }
            case 'v': {
                need(4, "V<name> n+ n- <value>|PULSE(...)");
                e.k = element::kind::vsource;
                e.terminals = {toks[1].text, toks[2].text};
                const std::string spec = detail::lower(toks[3].text);
                if (spec == "pulse") {
                    need(13, "PULSE(v1 v2 td tr tf pw period)");
                    if (toks[4].text != "(" || toks[12].text != ")")
                        throw parse_error("arity-error", "PULSE needs seven parenthesized values",
                                          line_no, toks[4].col);
                    e.stim = stimulus::pulse(num(5), num(6), num(7), num(8), num(9), num(10),
                                             num(11));
                } else if (spec == "dc") {
                    need(5, "DC <value>");
                    e.stim = stimulus::dc(num(4));
                } else {
                    e.stim = stimulus::dc(num(3));
                }
                break;
            }
            default:
                throw parse_error("unknown-element",
                                  "unknown element letter '" + std::string(1, first[0]) + "'",
                                  line_no, toks[0].col);
        }
        c.elements.push_back(std::move(e));
    }
    return c;
}

// =============================================================================
// Canonical printer
// =============================================================================

inline std::string print_netlist(const circuit& c) {
    std::string out;
    for (const auto& [name, card] : c.models) {
        const auto& p = card.params;
        out += ".model " + name + (p.pol == polarity::nmos ? " nmos (" : " pmos (");
        out += "vth=" + format_double(p.vth);
        out += " kp=" + format_double(p.kp);
        out += " lambda=" + format_double(p.lambda);
        out += " cgs=" + format_double(p.cgs);
        out += " cgd=" + format_double(p.cgd);
        out += " cdb=" + format_double(p.cdb);
        out += " i0=" + format_double(p.subthreshold_i0);
        out += " nslope=" + format_double(p.subthreshold_n);
        out += " wref=" + format_double(card.w_ref);
        out += " lref=" + format_double(card.l_ref);
        out += ")\n";
    }
    for (const auto& e : c.elements) {
        switch (e.k) {
            case element::kind::mosfet:
                out += e.name + " " + e.terminals[0] + " " + e.terminals[1] + " " + e.terminals[2] +
                       " " + e.terminals[3] + " " + e.model + " W=" + format_double(e.width) +
                       " L=" + format_double(e.length) + "\n";
                break;
            case element::kind::resistor:
            case element::kind::capacitor:
                out += e.name + " " + e.terminals[0] + " " + e.terminals[1] + " " +
                       format_double(e.value) + "\n";
                break;
            case element::kind::vsource:
                out += e.name + " " + e.terminals[0] + " " + e.terminals[1];
                if (e.stim.k == stimulus::kind::dc) {
                    out += " DC " + format_double(e.stim.dc_level) + "\n";
                } else {
                    const auto& s = e.stim;
                    out += " PULSE(" + format_double(s.v1) + " " + format_double(s.v2) + " " +
                           format_double(s.t_delay) + " " + format_double(s.t_rise) + " " +
                           format_double(s.t_fall) + " " + format_double(s.pulse_width) + " " +
                           format_double(s.period) + ")\n";
                }
                break;
        }
    }
    if (c.tran)
        out += ".tran " + format_double(c.tran->dt) + " " + format_double(c.tran->t_stop) + "\n";
    out += ".end\n";
    return out;
}

// =============================================================================
// Validation
// =============================================================================

inline std::vector<diagnostic> validate(const circuit& c) {
    std::vector<diagnostic> diags;

    std::map<std::string, int> degree;
    std::map<std::string, bool> touches_source;
    for (const auto& e : c.elements) {
        for (const auto& t : e.terminals) {
            ++degree[t];
            if (e.k == element::kind::vsource) touches_source[t] = true;
        }
        if (e.k == element::kind::mosfet && !c.models.count(e.model))
            diags.push_back({"unresolved-model", "element " + e.name + " references undefined model '" +
                                 e.model + "'",
                             e.line, e.col});
        if ((e.k == element::kind::resistor || e.k == element::kind::capacitor) && !(e.value > 0.0))
            diags.push_back(
                {"non-positive-value", "element " + e.name + " needs a positive value", e.line, e.col});
        if (e.k == element::kind::vsource && e.stim.k == stimulus::kind::pulse) {
            const auto& s = e.stim;
            if (!(s.t_rise > 0.0) || !(s.t_fall > 0.0) ||
                !(s.period > s.t_rise + s.t_fall + s.pulse_width))
                diags.push_back({"bad-stimulus",
                                 "pulse on " + e.name +
                                     " needs t_rise, t_fall > 0 and period > t_rise+t_fall+pw",
                                 e.line, e.col});
        }
    }

    for (const auto& [node, deg] : degree) {
        if (node == "0") continue;
        if (deg < 2 && !touches_source[node])
            diags.push_back({"dangling-node",
                             "node '" + node + "' touches only " + std::to_string(deg) +
                                 " terminal(s)",
                             0, 0});
    }

    if (!degree.count("0")) {
        diags.push_back({"no-ground", "no element touches the ground node '0'", 0, 0});
    } else {
        // reachability from ground through element connectivity
        std::set<std::string> reached{"0"};
        bool grew = true;
        while (grew) {
            grew = false;
            for (const auto& e : c.elements) {
                bool any = false;
                for (const auto& t : e.terminals) any = any || reached.count(t);
                if (!any) continue;
                for (const auto& t : e.terminals)
                    if (reached.insert(t).second) grew = true;
            }
        }
        for (const auto& [node, deg] : degree)
            if (!reached.count(node))
                diags.push_back(
                    {"unreachable-node", "node '" + node + "' has no path to ground", 0, 0});
    }
    return diags;
}

// =============================================================================
// Built-in topologies
// =============================================================================

enum class topology_kind { dcvs, cm, wcmls, hvls, cascode_classd };

struct deck_pair {
    mosfet_params nmos;
    mosfet_params pmos;

    /// Technology-agnostic defaults: 0.4 V thresholds, PMOS kp at half the
    /// NMOS value for the mobility ratio, mild channel-length modulation,
    /// lumped femtofarad-scale capacitances. The subthreshold prefactor is the
    /// current at threshold, microamp scale, so off-state leakage lands well
    /// above the gmin floor.
    static deck_pair defaults() {
        deck_pair d;
        d.nmos = {polarity::nmos, 0.4, 4e-4, 0.05, 1e-16, 1e-16, 2e-16, 2e-6, 1.5};
        d.pmos = {polarity::pmos, 0.4, 2e-4, 0.05, 1e-16, 1e-16, 2e-16, 2e-6, 1.5};
        return d;
    }
};

struct topology_options {
    double input_period = 2e-9;  // s
    double load_cap = 1e-15;     // F on each output node
    double edge_fraction = 0.01; // input rise/fall as a fraction of the period
};

namespace detail {

inline element mosfet_el(const std::string& name, const std::string& d, const std::string& g,
                         const std::string& s, const std::string& b, const std::string& model,
                         double w) {
    element e;
    e.k = element::kind::mosfet;
    e.name = name;
    e.terminals = {d, g, s, b};
    e.model = model;
    e.width = w;
    e.length = 1.0;
    return e;
}

inline element cap_el(const std::string& name, const std::string& n1, const std::string& n2,
                      double value) {
    element e;
    e.k = element::kind::capacitor;
    e.name = name;
    e.terminals = {n1, n2};
    e.value = value;
    return e;
}

inline element vsrc_el(const std::string& name, const std::string& np, const std::string& nm,
                       stimulus s) {
    element e;
    e.k = element::kind::vsource;
    e.name = name;
    e.terminals = {np, nm};
    e.stim = s;
    return e;
}

inline stimulus input_pulse(double v_low, double v_high, const topology_options& opt) {
    const double tr = opt.edge_fraction * opt.input_period;
    const double pw = 0.5 * opt.input_period - tr;
    return stimulus::pulse(v_low, v_high, 0.0, tr, tr, pw, opt.input_period);
}

}  // namespace detail

/// Construct one of the built-in level-shifter / class-D test circuits.
/// All circuits pass validate() and carry a .tran directive covering eight
/// input periods.
inline circuit generate_topology(topology_kind kind, double vddl, double vddh,
                                 const deck_pair& deck = deck_pair::defaults(),
                                 const topology_options& opt = topology_options{}) {
    using detail::cap_el;
    using detail::mosfet_el;
    using detail::vsrc_el;
    if (!(vddl > 0.0) || !(vddh >= vddl))
        throw error("invalid-argument", "need vddh >= vddl > 0");

    circuit c;
    c.models["nmod"] = model_card{deck.nmos, 1.0, 1.0};
    c.models["pmod"] = model_card{deck.pmos, 1.0, 1.0};

    const stimulus vin = detail::input_pulse(0.0, vddl, opt);
    const stimulus vinb = detail::input_pulse(vddl, 0.0, opt);
    auto& el = c.elements;

    switch (kind) {
        case topology_kind::dcvs:
            // cross-coupled PMOS pull-up over a differential NMOS pair,
            // complement generated by a low-domain inverter
            el.push_back(mosfet_el("MND", "vinb", "vin", "0", "0", "nmod", 2));
            el.push_back(mosfet_el("MPD", "vinb", "vin", "vddl", "vddl", "pmod", 4));
            el.push_back(mosfet_el("MN1", "outb", "vin", "0", "0", "nmod", 8));
            el.push_back(mosfet_el("MN2", "out", "vinb", "0", "0", "nmod", 8));
            el.push_back(mosfet_el("MP1", "outb", "out", "vddh", "vddh", "pmod", 2));
            el.push_back(mosfet_el("MP2", "out", "outb", "vddh", "vddh", "pmod", 2));
            el.push_back(cap_el("CL1", "out", "0", opt.load_cap));
            el.push_back(cap_el("CL2", "outb", "0", opt.load_cap));
            break;

        case topology_kind::cm:
            // diode-connected mirror instead of the latch
            el.push_back(mosfet_el("MND", "vinb", "vin", "0", "0", "nmod", 2));
            el.push_back(mosfet_el("MPD", "vinb", "vin", "vddl", "vddl", "pmod", 4));
            el.push_back(mosfet_el("MN1", "mir", "vin", "0", "0", "nmod", 4));
            el.push_back(mosfet_el("MP1", "mir", "mir", "vddh", "vddh", "pmod", 2));
            el.push_back(mosfet_el("MN2", "out", "vinb", "0", "0", "nmod", 4));
            el.push_back(mosfet_el("MP2", "out", "mir", "vddh", "vddh", "pmod", 4));
            el.push_back(cap_el("CL1", "out", "0", opt.load_cap));
            break;

        case topology_kind::wcmls:
            // mirror with a feedback PMOS switch that cuts the static path
            // once the output is high
            el.push_back(mosfet_el("MND", "vinb", "vin", "0", "0", "nmod", 2));
            el.push_back(mosfet_el("MPD", "vinb", "vin", "vddl", "vddl", "pmod", 4));
            el.push_back(mosfet_el("MP1", "mira", "mira", "vddh", "vddh", "pmod", 2));
            el.push_back(mosfet_el("MPF", "mirb", "out", "mira", "vddh", "pmod", 2));
            el.push_back(mosfet_el("MN1", "mirb", "vin", "0", "0", "nmod", 4));
            el.push_back(mosfet_el("MP2", "out", "mira", "vddh", "vddh", "pmod", 4));
            el.push_back(mosfet_el("MN2", "out", "vinb", "0", "0", "nmod", 4));
            el.push_back(cap_el("CL1", "out", "0", opt.load_cap));
            break;

        case topology_kind::hvls: {
            // Dual-output regenerative shifter; wiring rationale in TOPOLOGY.md.
            // P5/P6: cross-coupled pair on the full-swing pair x/xb, flipped
            // directly by the input devices N1/N2. P1/P2: gate-at-vddl pass
            // devices deriving the upper-domain pair voh/vohb (discharge stops
            // at vddl + vth). P3/P4: diode-connected drags that take the
            // abandoned upper node the rest of the way down, self-extinguishing
            // one threshold above the low-domain node. N5/N6: source followers
            // from the vddl rail forming the low-domain outputs, cut off
            // crisply by the full-swing gates; N3/N4 pull those outputs low.
            el.push_back(mosfet_el("MP5", "xb", "x", "vddh", "vddh", "pmod", 2));
            el.push_back(mosfet_el("MP6", "x", "xb", "vddh", "vddh", "pmod", 2));
            el.push_back(mosfet_el("MP1", "vohb", "vddl", "xb", "vddh", "pmod", 2));
            el.push_back(mosfet_el("MP2", "voh", "vddl", "x", "vddh", "pmod", 2));
            el.push_back(mosfet_el("MP3", "volb", "volb", "vohb", "vddh", "pmod", 1));
            el.push_back(mosfet_el("MP4", "vol", "vol", "voh", "vddh", "pmod", 1));
            el.push_back(mosfet_el("MN1", "xb", "vin", "0", "0", "nmod", 8));
            el.push_back(mosfet_el("MN2", "x", "vinb", "0", "0", "nmod", 8));
            el.push_back(mosfet_el("MN3", "volb", "vin", "0", "0", "nmod", 8));
            el.push_back(mosfet_el("MN4", "vol", "vinb", "0", "0", "nmod", 8));
            el.push_back(mosfet_el("MN5", "vddl", "xb", "volb", "0", "nmod", 4));
            el.push_back(mosfet_el("MN6", "vddl", "x", "vol", "0", "nmod", 4));
            el.push_back(cap_el("CLX", "x", "0", opt.load_cap));
            el.push_back(cap_el("CLXB", "xb", "0", opt.load_cap));
            el.push_back(cap_el("CLV", "vol", "0", opt.load_cap));
            el.push_back(cap_el("CLVB", "volb", "0", opt.load_cap));
            break;
        }

        case topology_kind::cascode_classd: {
            // four-high switching stack, outer devices driven by the two
            // domains, inner cascodes biased at vddl
            el.push_back(mosfet_el("MP1", "np", "drvp", "vddh", "vddh", "pmod", 8));
            el.push_back(mosfet_el("MP2", "out", "vddl", "np", "vddh", "pmod", 8));
            el.push_back(mosfet_el("MN2", "out", "vddl", "nn", "0", "nmod", 4));
            el.push_back(mosfet_el("MN1", "nn", "drvn", "0", "0", "nmod", 4));
            el.push_back(cap_el("CL1", "out", "0", opt.load_cap));
            break;
        }
    }

    if (kind == topology_kind::cascode_classd) {
        el.push_back(vsrc_el("VDRVN", "drvn", "0", detail::input_pulse(0.0, vddl, opt)));
        el.push_back(vsrc_el("VDRVP", "drvp", "0", detail::input_pulse(vddl, vddh, opt)));
    } else if (kind == topology_kind::hvls) {
        el.push_back(vsrc_el("VIN", "vin", "0", vin));
        el.push_back(vsrc_el("VINB", "vinb", "0", vinb));
    } else {
        el.push_back(vsrc_el("VIN", "vin", "0", vin));
    }
    el.push_back(vsrc_el("VDDL", "vddl", "0", stimulus::dc(vddl)));
    el.push_back(vsrc_el("VDDH", "vddh", "0", stimulus::dc(vddh)));

    c.tran = tran_directive{opt.input_period / 256.0, 8.0 * opt.input_period};
    return c;
}

}  // namespace casdlab
