#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "scenario.hpp"

namespace cgur::cli {

namespace {

const std::set<std::string>& known_kinds() {
    static const std::set<std::string> k = {
        "heisenberg",  "linear",         "schrodinger",      "shannon",          "renyi",
        "bona_fide",   "det_cov",        "entropy_variance", "cg_entropic",      "cg_variance",
        "cg_K",        "witness_variance", "witness_cg_variance", "witness_naive", "witness_entropy",
        "bounds"};
    return k;
}

std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* allowed : keys) ok = ok || k == allowed;
        if (!ok) throw ConfigError(join(where, k), "unknown field");
    }
}

const json& require(const json& j, const std::string& where, const char* key) {
    if (!j.is_object()) throw ConfigError(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(join(where, key), "missing required field");
    return *it;
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where, "expected a number");
    double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(where, "expected a finite number");
    return v;
}

double positive(const json& j, const std::string& where) {
    double v = number(j, where);
    if (!(v > 0)) throw ConfigError(where, "must be positive");
    return v;
}

double number_or(const json& j, const std::string& where, const char* key, double def) {
    auto it = j.find(key);
    return it == j.end() ? def : number(*it, join(where, key));
}

std::string string(const json& j, const std::string& where) {
    if (!j.is_string()) throw ConfigError(where, "expected a string");
    return j.get<std::string>();
}

int integer(const json& j, const std::string& where) {
    if (!j.is_number_integer()) throw ConfigError(where, "expected an integer");
    return j.get<int>();
}

std::vector<double> vector_of(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<std::vector<double>> matrix_of(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where, "expected an array of rows");
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vector_of(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

Range parse_range(const json& j, const std::string& where) {
    only_keys(j, where, {"min", "max", "steps", "log"});
    Range r;
    r.min = number(require(j, where, "min"), join(where, "min"));
    r.max = number(require(j, where, "max"), join(where, "max"));
    r.steps = integer(require(j, where, "steps"), join(where, "steps"));
    if (auto it = j.find("log"); it != j.end()) {
        if (!it->is_boolean()) throw ConfigError(join(where, "log"), "expected a boolean");
        r.log = it->get<bool>();
    }
    if (r.steps < 1) throw ConfigError(join(where, "steps"), "must be at least 1");
    if (r.max < r.min) throw ConfigError(join(where, "max"), "must not be below min");
    if (r.log && !(r.min > 0)) throw ConfigError(join(where, "min"), "must be positive for a log range");
    return r;
}

json range_json(const Range& r) { return json{{"min", r.min}, {"max", r.max}, {"steps", r.steps}, {"log", r.log}}; }

CGSpec parse_cg(const json& j, const std::string& where) {
    if (!j.is_object() || j.size() != 1) throw ConfigError(where, "expected {\"standard\": ...} or {\"periodic\": ...}");
    if (auto it = j.find("standard"); it != j.end()) {
        const std::string w = join(where, "standard");
        only_keys(*it, w, {"delta", "u_cen"});
        StandardSpec s;
        s.delta = positive(require(*it, w, "delta"), join(w, "delta"));
        if (auto c = it->find("u_cen"); c != it->end() && !c->is_null()) s.u_cen = number(*c, join(w, "u_cen"));
        return s;
    }
    if (auto it = j.find("periodic"); it != j.end()) {
        const std::string w = join(where, "periodic");
        only_keys(*it, w, {"s", "T", "u_cen"});
        PeriodicSpec p;
        p.s = positive(require(*it, w, "s"), join(w, "s"));
        p.period = positive(require(*it, w, "T"), join(w, "T"));
        p.u_cen = number_or(*it, w, "u_cen", 0.0);
        try {
            (void)PeriodicCG::from_period(p.s, p.period, p.u_cen);
        } catch (const std::exception& e) {
            throw ConfigError(join(w, "T"), e.what());
        }
        return p;
    }
    throw ConfigError(where, "expected \"standard\" or \"periodic\"");
}

json cg_json(const CGSpec& s) {
    if (const auto* st = std::get_if<StandardSpec>(&s)) {
        json body{{"delta", st->delta}};
        body["u_cen"] = st->u_cen ? json(*st->u_cen) : json(nullptr);
        return json{{"standard", body}};
    }
    const auto& p = std::get<PeriodicSpec>(s);
    return json{{"periodic", {{"s", p.s}, {"T", p.period}, {"u_cen", p.u_cen}}}};
}

} // namespace

double Range::at(int i) const {
    if (steps == 1 || i == 0) return min;
    if (i == steps - 1) return max;
    double f = static_cast<double>(i) / (steps - 1);
    if (log) return std::exp(std::log(min) + f * (std::log(max) - std::log(min)));
    return min + f * (max - min);
}

StateSpec parse_state(const json& j, const std::string& where) {
    const std::string kind = string(require(j, where, "kind"), join(where, "kind"));
    if (kind == "gaussian") {
        if (j.contains("preset")) {
            only_keys(j, where, {"kind", "preset", "r", "theta", "nbar", "q", "p", "hbar"});
            GaussianPreset g;
            g.preset = string(j["preset"], join(where, "preset"));
            if (g.preset != "vacuum" && g.preset != "thermal" && g.preset != "squeezed")
                throw ConfigError(join(where, "preset"), "expected vacuum, thermal or squeezed");
            g.r = number_or(j, where, "r", 0.0);
            g.theta = number_or(j, where, "theta", 0.0);
            g.nbar = number_or(j, where, "nbar", 0.0);
            g.q = number_or(j, where, "q", 0.0);
            g.p = number_or(j, where, "p", 0.0);
            g.hbar = number_or(j, where, "hbar", 1.0);
            if (!(g.hbar > 0)) throw ConfigError(join(where, "hbar"), "must be positive");
            if (g.nbar < 0) throw ConfigError(join(where, "nbar"), "must be non-negative");
            return g;
        }
        only_keys(j, where, {"kind", "mean", "cov", "hbar"});
        GaussianExplicit g;
        g.mean = vector_of(require(j, where, "mean"), join(where, "mean"));
        g.cov = matrix_of(require(j, where, "cov"), join(where, "cov"));
        g.hbar = number_or(j, where, "hbar", 1.0);
        const std::size_t n = g.mean.size();
        if (n == 0 || n % 2 != 0) throw ConfigError(join(where, "mean"), "length must be 2 * modes");
        if (g.cov.size() != n) throw ConfigError(join(where, "cov"), "must be " + std::to_string(n) + " x " + std::to_string(n));
        for (std::size_t i = 0; i < n; ++i)
            if (g.cov[i].size() != n)
                throw ConfigError(join(where, "cov") + "[" + std::to_string(i) + "]", "row length must be " + std::to_string(n));
        try {
            Eigen::VectorXd m = Eigen::Map<const Eigen::VectorXd>(g.mean.data(), static_cast<Eigen::Index>(n));
            Eigen::MatrixXd c(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < n; ++k) c(i, k) = g.cov[i][k];
            (void)GaussianState(m, c, ModeSystem(static_cast<int>(n / 2), g.hbar));
        } catch (const std::exception& e) {
            throw ConfigError(join(where, "cov"), e.what());
        }
        return g;
    }
    if (kind == "grid") {
        only_keys(j, where, {"kind", "csv", "hbar"});
        GridCsv g;
        g.path = string(require(j, where, "csv"), join(where, "csv"));
        g.hbar = number_or(j, where, "hbar", 1.0);
        if (!(g.hbar > 0)) throw ConfigError(join(where, "hbar"), "must be positive");
        return g;
    }
    if (kind == "fock_superposition") {
        only_keys(j, where, {"kind", "coefficients", "hbar"});
        FockSpec f;
        const std::string w = join(where, "coefficients");
        f.coefficients = matrix_of(require(j, where, "coefficients"), w);
        if (f.coefficients.empty()) throw ConfigError(w, "must not be empty");
        for (std::size_t i = 0; i < f.coefficients.size(); ++i)
            if (f.coefficients[i].size() != 2) throw ConfigError(w + "[" + std::to_string(i) + "]", "expected [re, im]");
        f.hbar = number_or(j, where, "hbar", 1.0);
        if (!(f.hbar > 0)) throw ConfigError(join(where, "hbar"), "must be positive");
        return f;
    }
    if (kind == "two_mode_squeezed") {
        only_keys(j, where, {"kind", "r", "hbar"});
        TmsvSpec t;
        t.r = number(require(j, where, "r"), join(where, "r"));
        t.hbar = number_or(j, where, "hbar", 1.0);
        if (!(t.hbar > 0)) throw ConfigError(join(where, "hbar"), "must be positive");
        return t;
    }
    throw ConfigError(join(where, "kind"), "unknown state kind '" + kind + "'");
}

StateSpec parse_state_shorthand(const std::string& text) {
    if (!text.empty() && text.front() == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError("state", e.what());
        }
        return parse_state(j);
    }
    auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    double arg = 0.0;
    if (colon != std::string::npos) {
        const std::string tail = text.substr(colon + 1);
        auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), arg);
        if (ec != std::errc() || ptr != tail.data() + tail.size())
            throw ConfigError("state", "bad numeric argument '" + tail + "'");
    }
    if (head == "vacuum") return GaussianPreset{.preset = "vacuum"};
    if (head == "thermal") return GaussianPreset{.preset = "thermal", .nbar = arg};
    if (head == "squeezed") return GaussianPreset{.preset = "squeezed", .r = arg};
    if (head == "tmsv") return TmsvSpec{.r = arg};
    if (head == "coherent2") {
        GaussianExplicit g;
        g.mean = {arg, -arg, 0.5 * arg, 0.25 * arg};
        g.cov.assign(4, std::vector<double>(4, 0.0));
        for (int i = 0; i < 4; ++i) g.cov[i][i] = 0.5;
        return g;
    }
    throw ConfigError("state", "unknown shorthand '" + text + "'");
}

json to_json(const StateSpec& s) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, GaussianPreset>) {
                return json{{"kind", "gaussian"}, {"preset", v.preset}, {"r", v.r},   {"theta", v.theta},
                            {"nbar", v.nbar},     {"q", v.q},           {"p", v.p},   {"hbar", v.hbar}};
            } else if constexpr (std::is_same_v<T, GaussianExplicit>) {
                return json{{"kind", "gaussian"}, {"mean", v.mean}, {"cov", v.cov}, {"hbar", v.hbar}};
            } else if constexpr (std::is_same_v<T, GridCsv>) {
                return json{{"kind", "grid"}, {"csv", v.path}, {"hbar", v.hbar}};
            } else if constexpr (std::is_same_v<T, FockSpec>) {
                return json{{"kind", "fock_superposition"}, {"coefficients", v.coefficients}, {"hbar", v.hbar}};
            } else {
                return json{{"kind", "two_mode_squeezed"}, {"r", v.r}, {"hbar", v.hbar}};
            }
        },
        s);
}

ScenarioConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("<root>", "expected an object");
    only_keys(j, "", {"name", "seed", "state", "pair", "cg", "alpha", "witness_sign", "urs", "sweep",
                      "outputs"});
    ScenarioConfig c;
    c.name = string(require(j, "", "name"), "name");
    if (auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_unsigned()) throw ConfigError("seed", "expected a non-negative integer");
        c.seed = it->get<std::uint64_t>();
    }
    if (auto it = j.find("state"); it != j.end() && !it->is_null()) c.state = parse_state(*it, "state");

    if (auto it = j.find("pair"); it != j.end()) {
        if (it->is_string()) {
            if (it->get<std::string>() != "canonical") throw ConfigError("pair", "expected \"canonical\" or an object");
        } else {
            only_keys(*it, "pair", {"du", "dv", "cco"});
            c.pair.canonical = false;
            c.pair.du = vector_of(require(*it, "pair", "du"), "pair.du");
            c.pair.dv = vector_of(require(*it, "pair", "dv"), "pair.dv");
            if (auto f = it->find("cco"); f != it->end()) {
                if (!f->is_boolean()) throw ConfigError("pair.cco", "expected a boolean");
                c.pair.cco = f->get<bool>();
            }
            if (c.pair.du.size() != c.pair.dv.size() || c.pair.du.empty() || c.pair.du.size() % 2 != 0)
                throw ConfigError("pair", "du and dv must have equal even length 2 * modes");
        }
    }
    if (auto it = j.find("cg"); it != j.end()) {
        only_keys(*it, "cg", {"u", "v"});
        if (auto u = it->find("u"); u != it->end()) c.cg_u = parse_cg(*u, "cg.u");
        if (auto v = it->find("v"); v != it->end()) c.cg_v = parse_cg(*v, "cg.v");
    }
    c.alpha = number_or(j, "", "alpha", 1.0);
    if (c.alpha < 0.5 || c.alpha > 1.0) throw ConfigError("alpha", "must lie in [0.5, 1]");
    if (auto it = j.find("witness_sign"); it != j.end()) {
        c.witness_sign = integer(*it, "witness_sign");
        if (c.witness_sign != 1 && c.witness_sign != -1) throw ConfigError("witness_sign", "must be +1 or -1");
    }
    const json& urs = require(j, "", "urs");
    if (!urs.is_array() || urs.empty()) throw ConfigError("urs", "expected a non-empty array of kinds");
    for (std::size_t i = 0; i < urs.size(); ++i) {
        const std::string w = "urs[" + std::to_string(i) + "]";
        std::string k = string(urs[i], w);
        if (!known_kinds().contains(k)) throw ConfigError(w, "unknown kind '" + k + "'");
        c.urs.push_back(std::move(k));
    }
    if (c.urs.size() > 1 && std::find(c.urs.begin(), c.urs.end(), "bounds") != c.urs.end())
        throw ConfigError("urs", "bounds tabulates the bound curves and cannot be combined with other kinds");
    if (auto it = j.find("sweep"); it != j.end() && !it->is_null()) {
        only_keys(*it, "sweep", {"gamma", "delta", "small_delta"});
        SweepSpec s;
        if (auto g = it->find("gamma"); g != it->end()) s.gamma = parse_range(*g, "sweep.gamma");
        if (auto d = it->find("delta"); d != it->end()) s.delta = parse_range(*d, "sweep.delta");
        if (auto d = it->find("small_delta"); d != it->end()) s.small_delta = parse_range(*d, "sweep.small_delta");
        if (s.gamma && (s.delta || s.small_delta)) throw ConfigError("sweep", "give either gamma or delta/small_delta");
        if (!s.gamma && !(s.delta && s.small_delta)) throw ConfigError("sweep", "delta and small_delta go together");
        if (s.delta && !(s.delta->min > 0)) throw ConfigError("sweep.delta.min", "must be positive");
        if (s.small_delta && !(s.small_delta->min > 0)) throw ConfigError("sweep.small_delta.min", "must be positive");
        if (s.gamma && !(s.gamma->min > 0)) throw ConfigError("sweep.gamma.min", "must be positive");
        c.sweep = s;
    }
    if (auto it = j.find("outputs"); it != j.end()) {
        only_keys(*it, "outputs", {"reports", "table"});
        if (auto r = it->find("reports"); r != it->end()) c.outputs.reports = string(*r, "outputs.reports");
        if (auto t = it->find("table"); t != it->end()) c.outputs.table = string(*t, "outputs.table");
    }
    return c;
}

ScenarioConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // Recover line and column from the byte offset.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col), "syntax error");
    }
    return parse_config(j);
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), "cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

json to_json(const ScenarioConfig& c) {
    json j;
    j["name"] = c.name;
    j["seed"] = c.seed;
    j["state"] = c.state ? to_json(*c.state) : json(nullptr);
    if (c.pair.canonical)
        j["pair"] = "canonical";
    else
        j["pair"] = json{{"du", c.pair.du}, {"dv", c.pair.dv}, {"cco", c.pair.cco}};
    json cg = json::object();
    if (c.cg_u) cg["u"] = cg_json(*c.cg_u);
    if (c.cg_v) cg["v"] = cg_json(*c.cg_v);
    j["cg"] = cg;
    j["alpha"] = c.alpha;
    j["witness_sign"] = c.witness_sign;
    j["urs"] = c.urs;
    if (c.sweep) {
        json s = json::object();
        if (c.sweep->gamma) s["gamma"] = range_json(*c.sweep->gamma);
        if (c.sweep->delta) s["delta"] = range_json(*c.sweep->delta);
        if (c.sweep->small_delta) s["small_delta"] = range_json(*c.sweep->small_delta);
        j["sweep"] = s;
    } else {
        j["sweep"] = nullptr;
    }
    j["outputs"] = json{{"reports", c.outputs.reports}, {"table", c.outputs.table}};
    return j;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

json to_json(const URReport& r) {
    auto num = [](double x) { return std::isfinite(x) ? json(x) : json(format_double(x)); };
    return json{{"kind", r.kind},
                {"lhs", num(r.lhs)},
                {"bound", num(r.bound)},
                {"margin", num(r.margin)},
                {"verdict", std::string(to_string(r.verdict))},
                {"annotations", r.annotations}};
}

} // namespace cgur::cli
