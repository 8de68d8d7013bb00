#include "ahdyn/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ahdyn/csv.hpp"
#include "ahdyn/errors.hpp"

namespace ahdyn {

std::string_view kind_name(ExperimentKind k) noexcept {
    switch (k) {
        case ExperimentKind::dynamics: return "dynamics";
        case ExperimentKind::spectrum: return "spectrum";
        case ExperimentKind::dm_compare: return "dm_compare";
    }
    return "?";
}

std::string_view observable_name(Observable o) noexcept {
    switch (o) {
        case Observable::ke: return "ke";
        case Observable::pop: return "pop";
        case Observable::current: return "current";
    }
    return "?";
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

namespace {

std::string nearest(std::string_view word, const std::vector<std::string>& candidates) {
    std::string best;
    std::size_t best_d = std::numeric_limits<std::size_t>::max();
    for (const auto& c : candidates) {
        const std::size_t d = edit_distance(word, c);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

std::string fmt(double v) { return csv::format_double(v); }

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto piece = trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start));
        if (!piece.empty()) out.push_back(piece);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <class T>
std::string join_list(const std::vector<T>& v, const std::function<std::string(const T&)>& f) {
    std::string out;
    for (const auto& x : v) {
        if (!out.empty()) out += ",";
        out += f(x);
    }
    return out;
}

// Collects parse problems instead of stopping at the first one.
struct Reader {
    std::vector<std::string> issues;

    void number(const std::string& path, const std::string& text, double& out) {
        double v = 0.0;
        const auto t = trim(text);
        const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
        if (res.ec != std::errc{} || res.ptr != t.data() + t.size() || t.empty()) {
            issues.push_back(path + ": expected a number, got '" + text + "'");
            return;
        }
        out = v;
    }

    template <class Int>
    void integer(const std::string& path, const std::string& text, Int& out) {
        Int v = 0;
        const auto t = trim(text);
        const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
        if (res.ec != std::errc{} || res.ptr != t.data() + t.size() || t.empty()) {
            issues.push_back(path + ": expected a non-negative integer, got '" + text + "'");
            return;
        }
        out = v;
    }

    void numbers(const std::string& path, const std::string& text, std::vector<double>& out) {
        std::vector<double> v;
        for (const auto& piece : split_list(text)) {
            double x = 0.0;
            const std::size_t before = issues.size();
            number(path, piece, x);
            if (issues.size() == before) v.push_back(x);
        }
        out = std::move(v);
    }

    void integers(const std::string& path, const std::string& text, std::vector<std::size_t>& out) {
        std::vector<std::size_t> v;
        for (const auto& piece : split_list(text)) {
            std::size_t x = 0;
            const std::size_t before = issues.size();
            integer(path, piece, x);
            if (issues.size() == before) v.push_back(x);
        }
        out = std::move(v);
    }
};

// Flat view of a bath for editing: symmetric leads only.
struct BathFields {
    int leads = 1;
    double kT = 0.05;
    double gamma = 0.01;
    double mu = 0.0;
    double mu_left = 0.0;
    double mu_right = 0.0;

    static BathFields of(const BathSpec& b) {
        BathFields f;
        f.leads = static_cast<int>(b.leads.size());
        f.kT = b.kT;
        f.gamma = b.total_gamma();
        if (b.leads.size() == 1) {
            f.mu = b.leads[0].mu;
        } else if (b.leads.size() == 2) {
            f.mu_left = b.leads[0].mu;
            f.mu_right = b.leads[1].mu;
        }
        return f;
    }

    BathSpec build() const {
        if (leads == 2) {
            BathSpec b;
            b.kT = kT;
            b.leads = {Lead{0.5 * gamma, mu_left}, Lead{0.5 * gamma, mu_right}};
            return b;
        }
        return BathSpec::single(gamma, mu, kT);
    }
};

const std::map<std::string, std::vector<std::string>>& known_keys() {
    static const std::map<std::string, std::vector<std::string>> keys{
        {"", {"preset", "name", "description", "kind"}},
        {"model", {"mass", "omega", "g", "e_d", "hbar"}},
        {"bath", {"leads", "kT", "gamma", "mu", "mu_left", "mu_right"}},
        {"dynamics", {"methods", "dt", "amplitude_source", "update_stride"}},
        {"ensemble", {"n_traj", "t_final", "record_stride", "seed", "init_temperature"}},
        {"output", {"observables"}},
        {"sweep", {"e_d", "gamma", "mu_left", "update_stride"}},
        {"probe", {"x", "x_min", "x_max", "x_points"}},
    };
    return keys;
}

std::string dotted(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
}

std::vector<std::string> all_dotted_keys() {
    std::vector<std::string> out;
    for (const auto& [section, keys] : known_keys())
        for (const auto& k : keys) out.push_back(dotted(section, k));
    return out;
}

std::string panel_value(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 4);
    return std::string(buf, res.ptr);
}

}  // namespace

void ExperimentPreset::validate() const {
    std::vector<std::string> issues;
    const auto collect = [&](const auto& fn) {
        try {
            fn();
        } catch (const ConfigError& e) {
            issues.insert(issues.end(), e.issues().begin(), e.issues().end());
        }
    };
    collect([&] { model.validate(); });
    collect([&] { bath.validate(); });
    collect([&] { ensemble.validate(); });
    if (name.empty()) issues.push_back("name: must not be empty");
    if (name.find_first_of("/\\") != std::string::npos) issues.push_back("name: must not contain path separators");
    if (!(dynamics.dt > 0.0) || !std::isfinite(dynamics.dt)) issues.push_back("dynamics.dt: must be > 0");
    if (dynamics.update_stride < 1) issues.push_back("dynamics.update_stride: must be >= 1");
    if (kind == ExperimentKind::dynamics) {
        if (methods.empty()) issues.push_back("dynamics.methods: at least one method is required");
        if (observables.empty()) issues.push_back("output.observables: at least one observable is required");
    }
    const bool two_leads = bath.two_leads();
    for (const auto o : observables) {
        if (o == Observable::current && !two_leads)
            issues.push_back("output.observables: 'current' needs bath.leads = 2");
    }
    for (const double v : sweep.gamma)
        if (!(v > 0.0) || !std::isfinite(v)) issues.push_back("sweep.gamma: values must be > 0, got " + fmt(v));
    for (const double v : sweep.e_d)
        if (!(v > 0.0) || !std::isfinite(v)) issues.push_back("sweep.e_d: values must be > 0, got " + fmt(v));
    for (const double v : sweep.mu_left)
        if (!(v > 0.0) || !std::isfinite(v)) issues.push_back("sweep.mu_left: values must be > 0, got " + fmt(v));
    for (const auto v : sweep.update_stride)
        if (v < 1) issues.push_back("sweep.update_stride: values must be >= 1");
    if (!sweep.mu_left.empty() && !two_leads) issues.push_back("sweep.mu_left: needs bath.leads = 2");
    if (kind != ExperimentKind::dynamics) {
        if (!std::isfinite(probe_x)) issues.push_back("probe.x: must be finite");
        if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max))
            issues.push_back("probe.x_max: must exceed probe.x_min");
        if (x_points < 2) issues.push_back("probe.x_points: must be >= 2");
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));

    for (const auto& panel : panels()) {
        if (kind == ExperimentKind::dynamics) {
            for (const auto m : methods) {
                MethodConfig mc = panel.dynamics;
                mc.method = m;
                try {
                    mc.validate(panel.model, panel.bath);
                } catch (const StabilityError& e) {
                    if (panel.label.empty()) throw;
                    throw StabilityError("panel " + panel.label + ": " + e.what());
                }
            }
        } else {
            panel.model.validate();
            panel.bath.validate();
        }
    }
}

std::vector<Panel> ExperimentPreset::panels() const {
    std::vector<Panel> out{Panel{"", model, bath, dynamics}};
    const auto expand = [&out](const auto& values, const char* tag, const auto& apply) {
        if (values.empty()) return;
        std::vector<Panel> next;
        for (const auto& base : out) {
            for (const auto& v : values) {
                Panel p = base;
                if (!p.label.empty()) p.label += "_";
                p.label += tag + panel_value(static_cast<double>(v));
                apply(p, v);
                next.push_back(std::move(p));
            }
        }
        out = std::move(next);
    };
    expand(sweep.e_d, "ed", [](Panel& p, double v) { p.model.e_d = v; });
    expand(sweep.gamma, "gamma", [](Panel& p, double v) {
        const double scale = v / p.bath.total_gamma();
        for (auto& l : p.bath.leads) l.gamma *= scale;
    });
    expand(sweep.mu_left, "muL", [](Panel& p, double v) {
        p.bath.leads[0].mu = v;
        p.bath.leads[1].mu = -v;
    });
    expand(sweep.update_stride, "stride", [](Panel& p, std::size_t v) { p.dynamics.update_stride = v; });
    return out;
}

ConfigTable to_table(const ExperimentPreset& e) {
    ConfigTable t;
    t[""]["name"] = e.name;
    t[""]["description"] = e.description;
    t[""]["kind"] = std::string(kind_name(e.kind));
    t["model"] = {{"mass", fmt(e.model.mass)},
                  {"omega", fmt(e.model.omega)},
                  {"g", fmt(e.model.g)},
                  {"e_d", fmt(e.model.e_d)},
                  {"hbar", fmt(e.model.hbar)}};
    const auto b = BathFields::of(e.bath);
    t["bath"]["leads"] = std::to_string(b.leads);
    t["bath"]["kT"] = fmt(b.kT);
    t["bath"]["gamma"] = fmt(b.gamma);
    if (b.leads == 2) {
        t["bath"]["mu_left"] = fmt(b.mu_left);
        t["bath"]["mu_right"] = fmt(b.mu_right);
    } else {
        t["bath"]["mu"] = fmt(b.mu);
    }
    t["dynamics"]["methods"] = join_list<Method>(e.methods, [](const Method& m) { return std::string(method_name(m)); });
    t["dynamics"]["dt"] = fmt(e.dynamics.dt);
    t["dynamics"]["amplitude_source"] =
        e.dynamics.amplitude_source == AmplitudeSource::fitted ? "fitted" : "analytic";
    t["dynamics"]["update_stride"] = std::to_string(e.dynamics.update_stride);
    t["ensemble"] = {{"n_traj", std::to_string(e.ensemble.n_traj)},
                     {"t_final", fmt(e.ensemble.t_final)},
                     {"record_stride", std::to_string(e.ensemble.record_stride)},
                     {"seed", std::to_string(e.ensemble.seed)},
                     {"init_temperature", fmt(e.ensemble.init_temperature)}};
    t["output"]["observables"] =
        join_list<Observable>(e.observables, [](const Observable& o) { return std::string(observable_name(o)); });
    const auto dlist = [](const std::vector<double>& v) { return join_list<double>(v, [](const double& x) { return fmt(x); }); };
    t["sweep"] = {{"e_d", dlist(e.sweep.e_d)},
                  {"gamma", dlist(e.sweep.gamma)},
                  {"mu_left", dlist(e.sweep.mu_left)},
                  {"update_stride", join_list<std::size_t>(e.sweep.update_stride, [](const std::size_t& x) {
                       return std::to_string(x);
                   })}};
    t["probe"] = {{"x", fmt(e.probe_x)},
                  {"x_min", fmt(e.x_min)},
                  {"x_max", fmt(e.x_max)},
                  {"x_points", std::to_string(e.x_points)}};
    return t;
}

ExperimentPreset from_table(const ConfigTable& table) {
    Reader r;
    const auto& keys = known_keys();
    for (const auto& [section, entries] : table) {
        const auto sec = keys.find(section);
        for (const auto& [key, value] : entries) {
            (void)value;
            if (sec == keys.end() ||
                std::find(sec->second.begin(), sec->second.end(), key) == sec->second.end()) {
                const auto path = dotted(section, key);
                r.issues.push_back("unknown key '" + path + "' (did you mean '" +
                                   nearest(path, all_dotted_keys()) + "'?)");
            }
        }
    }
    if (!r.issues.empty()) throw ConfigError(std::move(r.issues));

    const auto get = [&](const std::string& section, const std::string& key) -> const std::string* {
        const auto s = table.find(section);
        if (s == table.end()) return nullptr;
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    };

    ExperimentPreset e = default_preset();
    if (const auto* name = get("", "preset")) e = preset(trim(*name));

    if (const auto* v = get("", "name")) e.name = trim(*v);
    if (const auto* v = get("", "description")) e.description = trim(*v);
    if (const auto* v = get("", "kind")) {
        const auto k = trim(*v);
        if (k == "dynamics") e.kind = ExperimentKind::dynamics;
        else if (k == "spectrum") e.kind = ExperimentKind::spectrum;
        else if (k == "dm_compare") e.kind = ExperimentKind::dm_compare;
        else r.issues.push_back("kind: expected dynamics, spectrum or dm_compare, got '" + k + "'");
    }

    if (const auto* v = get("model", "mass")) r.number("model.mass", *v, e.model.mass);
    if (const auto* v = get("model", "omega")) r.number("model.omega", *v, e.model.omega);
    if (const auto* v = get("model", "g")) r.number("model.g", *v, e.model.g);
    if (const auto* v = get("model", "e_d")) r.number("model.e_d", *v, e.model.e_d);
    if (const auto* v = get("model", "hbar")) r.number("model.hbar", *v, e.model.hbar);

    auto b = BathFields::of(e.bath);
    const bool mu_right_given = get("bath", "mu_right") != nullptr;
    if (const auto* v = get("bath", "leads")) {
        r.integer("bath.leads", *v, b.leads);
        if (b.leads != 1 && b.leads != 2) r.issues.push_back("bath.leads: must be 1 or 2, got " + trim(*v));
    }
    if (const auto* v = get("bath", "kT")) r.number("bath.kT", *v, b.kT);
    if (const auto* v = get("bath", "gamma")) r.number("bath.gamma", *v, b.gamma);
    if (const auto* v = get("bath", "mu")) {
        r.number("bath.mu", *v, b.mu);
        if (b.leads == 2) r.issues.push_back("bath.mu: applies to one lead; use bath.mu_left / bath.mu_right");
    }
    if (const auto* v = get("bath", "mu_left")) {
        r.number("bath.mu_left", *v, b.mu_left);
        if (!mu_right_given) b.mu_right = -b.mu_left;
    }
    if (mu_right_given) r.number("bath.mu_right", *get("bath", "mu_right"), b.mu_right);
    if (b.leads == 1 && (get("bath", "mu_left") || mu_right_given))
        r.issues.push_back("bath.mu_left: needs bath.leads = 2");
    e.bath = b.build();

    if (const auto* v = get("dynamics", "methods")) {
        e.methods.clear();
        for (const auto& piece : split_list(*v)) {
            if (const auto m = parse_method(piece)) {
                if (std::find(e.methods.begin(), e.methods.end(), *m) == e.methods.end()) e.methods.push_back(*m);
            } else {
                r.issues.push_back("dynamics.methods: unknown method '" + piece +
                                   "' (expected ED, EF-LD, M-ED, NM-ED or SH)");
            }
        }
    }
    if (const auto* v = get("dynamics", "dt")) r.number("dynamics.dt", *v, e.dynamics.dt);
    if (const auto* v = get("dynamics", "amplitude_source")) {
        const auto s = trim(*v);
        if (s == "analytic") e.dynamics.amplitude_source = AmplitudeSource::analytic;
        else if (s == "fitted") e.dynamics.amplitude_source = AmplitudeSource::fitted;
        else r.issues.push_back("dynamics.amplitude_source: expected analytic or fitted, got '" + s + "'");
    }
    if (const auto* v = get("dynamics", "update_stride"))
        r.integer("dynamics.update_stride", *v, e.dynamics.update_stride);

    if (const auto* v = get("ensemble", "n_traj")) r.integer("ensemble.n_traj", *v, e.ensemble.n_traj);
    if (const auto* v = get("ensemble", "t_final")) r.number("ensemble.t_final", *v, e.ensemble.t_final);
    if (const auto* v = get("ensemble", "record_stride"))
        r.integer("ensemble.record_stride", *v, e.ensemble.record_stride);
    if (const auto* v = get("ensemble", "seed")) r.integer("ensemble.seed", *v, e.ensemble.seed);
    if (const auto* v = get("ensemble", "init_temperature"))
        r.number("ensemble.init_temperature", *v, e.ensemble.init_temperature);

    if (const auto* v = get("output", "observables")) {
        e.observables.clear();
        for (const auto& piece : split_list(*v)) {
            Observable o;
            if (piece == "ke") o = Observable::ke;
            else if (piece == "pop") o = Observable::pop;
            else if (piece == "current") o = Observable::current;
            else {
                r.issues.push_back("output.observables: unknown observable '" + piece +
                                   "' (expected ke, pop or current)");
                continue;
            }
            if (std::find(e.observables.begin(), e.observables.end(), o) == e.observables.end())
                e.observables.push_back(o);
        }
    }

    if (const auto* v = get("sweep", "e_d")) r.numbers("sweep.e_d", *v, e.sweep.e_d);
    if (const auto* v = get("sweep", "gamma")) r.numbers("sweep.gamma", *v, e.sweep.gamma);
    if (const auto* v = get("sweep", "mu_left")) r.numbers("sweep.mu_left", *v, e.sweep.mu_left);
    if (const auto* v = get("sweep", "update_stride")) r.integers("sweep.update_stride", *v, e.sweep.update_stride);

    if (const auto* v = get("probe", "x")) r.number("probe.x", *v, e.probe_x);
    if (const auto* v = get("probe", "x_min")) r.number("probe.x_min", *v, e.x_min);
    if (const auto* v = get("probe", "x_max")) r.number("probe.x_max", *v, e.x_max);
    if (const auto* v = get("probe", "x_points")) r.integer("probe.x_points", *v, e.x_points);

    if (!r.issues.empty()) throw ConfigError(std::move(r.issues));
    e.validate();
    return e;
}

namespace {

// Drop "; ..." and "# ..." comments that follow whitespace on a line; the INI
// reader only understands whole-line comments.
std::string strip_inline_comments(std::string_view text) {
    std::string out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        for (std::size_t i = 1; i < line.size(); ++i) {
            if ((line[i] == ';' || line[i] == '#') && (line[i - 1] == ' ' || line[i - 1] == '\t')) {
                line = line.substr(0, i);
                break;
            }
        }
        out.append(line);
        out.push_back('\n');
        pos = end + 1;
    }
    return out;
}

}  // namespace

ConfigTable parse_ini(std::string_view text) {
    boost::property_tree::ptree tree;
    std::istringstream in{strip_inline_comments(text)};
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError({"line " + std::to_string(e.line()) + ": " + e.message()});
    }
    ConfigTable t;
    for (const auto& [key, node] : tree) {
        if (node.empty()) {
            t[""][key] = node.data();
        } else {
            auto& section = t[key];
            for (const auto& [k, v] : node) section[k] = v.data();
        }
    }
    return t;
}

std::string format_ini(const ConfigTable& table) {
    std::string out;
    if (const auto top = table.find(""); top != table.end()) {
        for (const auto& [k, v] : top->second) out += k + " = " + v + "\n";
    }
    for (const auto& [section, entries] : table) {
        if (section.empty()) continue;
        out += "\n[" + section + "]\n";
        for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
    }
    return out;
}

ExperimentPreset load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({path.string() + ": cannot open file"});
    std::ostringstream buf;
    buf << in.rdbuf();
    if (path.extension() == ".json") {
        nlohmann::json manifest;
        try {
            manifest = nlohmann::json::parse(buf.str());
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError({path.string() + ": " + e.what()});
        }
        if (!manifest.contains("config") || !manifest["config"].is_object())
            throw ConfigError({path.string() + ": manifest has no 'config' object"});
        ConfigTable t;
        for (const auto& [section, entries] : manifest["config"].items()) {
            if (!entries.is_object()) throw ConfigError({path.string() + ": config." + section + " is not an object"});
            for (const auto& [k, v] : entries.items()) {
                if (!v.is_string())
                    throw ConfigError({path.string() + ": config." + section + "." + k + " is not a string"});
                t[section == "_" ? "" : section][k] = v.get<std::string>();
            }
        }
        return from_table(t);
    }
    return from_table(parse_ini(buf.str()));
}

}  // namespace ahdyn
