#include "herdsim/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace herdsim {

using nlohmann::json;

namespace {

Rat rat_field(const json& j, const std::string& key) {
    if (!j.contains(key)) throw ParseError("missing field '" + key + "'");
    const auto& v = j.at(key);
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rat(v.get<long long>());
    throw ParseError("field '" + key + "' must be a rational string like \"61/64\" or \"0.25\"");
}

Rat rat_field_or(const json& j, const std::string& key, const Rat& fallback) {
    return j.contains(key) ? rat_field(j, key) : fallback;
}

std::string rat_str(const Rat& r) { return format_rational(r); }

}  // namespace

RunConfig config_from_json(const json& j) {
    RunConfig cfg;
    if (!j.contains("model")) throw ParseError("missing 'model' section");
    const json& m = j.at("model");
    const std::string variant = m.value("variant", "baseline4");
    if (variant == "baseline4")
        cfg.model.variant = SignalVariant::Baseline4;
    else if (variant == "appendix6")
        cfg.model.variant = SignalVariant::Appendix6;
    else
        throw ParseError("unknown model variant '" + variant + "'");
    cfg.model.p0 = rat_field(m, "p0");
    cfg.model.pS = rat_field(m, "pS");
    cfg.model.Q = rat_field(m, "Q");
    cfg.model.q = rat_field(m, "q");
    if (cfg.model.variant == SignalVariant::Appendix6) {
        cfg.model.ps = rat_field(m, "ps");
        cfg.model.pSigma = rat_field(m, "pSigma");
        cfg.model.eta = rat_field(m, "eta");
    }

    if (!j.contains("congestion")) throw ParseError("missing 'congestion' section");
    const json& c = j.at("congestion");
    cfg.congestion.k = rat_field_or(c, "k", Rat(0));
    const std::string mode = c.value("mode", "differ");
    if (mode == "differ")
        cfg.congestion.mode = CongestionMode::Differ;
    else if (mode == "conform")
        cfg.congestion.mode = CongestionMode::Conform;
    else
        throw ParseError("unknown congestion mode '" + mode + "'");
    if (c.contains("scope")) {
        const auto& s = c.at("scope");
        if (s.is_string()) {
            if (s.get<std::string>() != "all")
                throw ParseError("unknown scope '" + s.get<std::string>() + "'");
            cfg.congestion.scope = AllPredecessors{};
        } else if (s.is_object() && s.contains("window")) {
            cfg.congestion.scope = Window{s.at("window").get<int>()};
        } else if (s.is_object() && s.contains("discounted")) {
            cfg.congestion.scope = Discounted{rat_field(s, "discounted")};
        } else {
            throw ParseError("scope must be \"all\", {\"window\": m} or {\"discounted\": beta}");
        }
    }
    if (c.contains("kOverrides")) {
        for (const auto& [key, value] : c.at("kOverrides").items()) {
            const int period = std::stoi(key);
            cfg.congestion.k_overrides[period] = parse_rational(value.get<std::string>());
        }
    }
    cfg.congestion.check();

    cfg.horizon = j.value("horizon", 0);
    const std::string tb = j.value("tiebreak", "preferR");
    if (tb == "preferR")
        cfg.tiebreak = Tiebreak::PreferR;
    else if (tb == "preferL")
        cfg.tiebreak = Tiebreak::PreferL;
    else
        throw ParseError("unknown tiebreak '" + tb + "'");
    const std::string nm = j.value("numericMode", "exact");
    if (nm == "exact")
        cfg.numeric_mode = NumericMode::Exact;
    else if (nm == "float")
        cfg.numeric_mode = NumericMode::Float;
    else
        throw ParseError("unknown numericMode '" + nm + "'");
    const std::string fmt = j.value("format", "json");
    if (fmt == "json")
        cfg.format = OutputFormat::Json;
    else if (fmt == "csv")
        cfg.format = OutputFormat::Csv;
    else
        throw ParseError("unknown format '" + fmt + "'");
    cfg.seed = j.value("seed", std::uint64_t{0});
    return cfg;
}

json config_to_json(const RunConfig& cfg) {
    json m;
    m["variant"] = cfg.model.variant == SignalVariant::Baseline4 ? "baseline4" : "appendix6";
    m["p0"] = rat_str(cfg.model.p0);
    m["pS"] = rat_str(cfg.model.pS);
    m["Q"] = rat_str(cfg.model.Q);
    m["q"] = rat_str(cfg.model.q);
    if (cfg.model.variant == SignalVariant::Appendix6) {
        m["ps"] = rat_str(cfg.model.ps);
        m["pSigma"] = rat_str(cfg.model.pSigma);
        m["eta"] = rat_str(cfg.model.eta);
    }
    json c;
    c["k"] = rat_str(cfg.congestion.k);
    c["mode"] = cfg.congestion.mode == CongestionMode::Differ ? "differ" : "conform";
    if (std::holds_alternative<AllPredecessors>(cfg.congestion.scope)) {
        c["scope"] = "all";
    } else if (const auto* w = std::get_if<Window>(&cfg.congestion.scope)) {
        c["scope"] = json{{"window", w->m}};
    } else {
        c["scope"] = json{{"discounted", rat_str(std::get<Discounted>(cfg.congestion.scope).beta)}};
    }
    if (!cfg.congestion.k_overrides.empty()) {
        json o;
        for (const auto& [period, k] : cfg.congestion.k_overrides)
            o[std::to_string(period)] = rat_str(k);
        c["kOverrides"] = o;
    }
    json j;
    j["model"] = m;
    j["congestion"] = c;
    j["horizon"] = cfg.horizon;
    j["tiebreak"] = cfg.tiebreak == Tiebreak::PreferR ? "preferR" : "preferL";
    j["numericMode"] = cfg.numeric_mode == NumericMode::Exact ? "exact" : "float";
    j["format"] = cfg.format == OutputFormat::Json ? "json" : "csv";
    j["seed"] = cfg.seed;
    return j;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("cannot parse config '" + path + "': " + e.what());
    }
    return config_from_json(j);
}

RunConfig bundled_config(const std::string& name) {
    RunConfig cfg;
    cfg.congestion.mode = CongestionMode::Differ;
    cfg.horizon = 8;
    cfg.seed = 12345;
    if (name == "example1a") {
        cfg.model = {SignalVariant::Baseline4, Rat(1, 2), Rat(61, 64), Rat(15611, 16384),
                     Rat(9, 256),              Rat(0),    Rat(0),      Rat(0)};
        cfg.congestion.k = Rat(1, 3);
    } else if (name == "example1b") {
        cfg.model = {SignalVariant::Baseline4, Rat(5, 8), Rat(61, 64), Rat(3903, 4096),
                     Rat(9, 256),              Rat(0),    Rat(0),      Rat(0)};
        cfg.congestion.k = Rat(1, 100);
    } else if (name == "appendix") {
        cfg.model = {SignalVariant::Appendix6, Rat(1, 2),  Rat(4, 5),
                     Rat(987, 1250),           Rat(187, 2000), Rat(1, 10),
                     Rat(1, 10),               Rat(2501, 50000)};
        cfg.congestion.k = Rat(1, 25);
        cfg.congestion.mode = CongestionMode::Conform;
        cfg.horizon = 7;
    } else if (name == "herd_demo") {
        cfg.model = {SignalVariant::Baseline4, Rat(1, 2), Rat(1, 2), Rat(9, 20),
                     Rat(19, 50),              Rat(0),    Rat(0),    Rat(0)};
        cfg.congestion.k = Rat(1, 3);
    } else {
        throw std::invalid_argument("unknown bundled config '" + name +
                                    "' (valid: example1a, example1b, appendix, herd_demo)");
    }
    return cfg;
}

}  // namespace herdsim
