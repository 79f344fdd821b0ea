#include "tailclass/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "tailclass/errors.hpp"
#include "tailclass/version.hpp"

namespace tailclass {

using nlohmann::json;

namespace {

// Shortest decimal form that parses back to the same double.
std::string dtos(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

double stod_strict(const std::string& s, const std::string& ctx) {
    size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw UsageError(ctx + ": expected a number, got '" + s + "'");
    }
    if (pos != s.size()) throw UsageError(ctx + ": trailing characters in '" + s + "'");
    return v;
}

std::vector<double> parse_csv_doubles(const std::string& s, const std::string& ctx) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(stod_strict(tok, ctx));
    if (out.empty()) throw UsageError(ctx + ": empty list");
    return out;
}

}  // namespace

// --- family spec text form ---------------------------------------------------

FamilySpec parse_family_spec(const std::string& text) {
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    std::map<std::string, double> kv;
    if (colon != std::string::npos) {
        std::stringstream ss(text.substr(colon + 1));
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw UsageError("model '" + text + "': expected key=value, got '" + tok + "'");
            kv[tok.substr(0, eq)] = stod_strict(tok.substr(eq + 1), "model " + text);
        }
    }
    auto take = [&](const std::string& key, std::optional<double> dflt =
                                                 std::nullopt) -> double {
        auto it = kv.find(key);
        if (it == kv.end()) {
            if (dflt) return *dflt;
            throw UsageError("model '" + text + "': missing parameter '" + key + "'");
        }
        const double v = it->second;
        kv.erase(it);
        return v;
    };
    FamilySpec spec;
    if (name == "pareto") {
        spec = ParetoSpec{take("a")};
    } else if (name == "exp" || name == "exponential") {
        auto it = kv.find("lambda");
        if (it != kv.end()) { kv["rate"] = it->second; kv.erase("lambda"); }
        spec = ExponentialSpec{take("rate")};
    } else if (name == "weibull") {
        spec = WeibullSpec{take("shape"), take("scale", 1.0)};
    } else if (name == "lognormal") {
        spec = LognormalSpec{take("mu", 0.0), take("sigma", 1.0)};
    } else if (name == "burr") {
        spec = BurrSpec{take("c"), take("k")};
    } else if (name == "logppareto" || name == "lpp") {
        spec = LogPerturbedParetoSpec{take("a"), take("p")};
    } else {
        throw UsageError("unknown family '" + name + "' in model '" + text + "'");
    }
    if (!kv.empty())
        throw UsageError("model '" + text + "': unknown parameter '" + kv.begin()->first + "'");
    try {
        build(spec);  // constraint check
    } catch (const InvalidParameter& e) {
        throw UsageError("model '" + text + "': " + e.what());
    }
    return spec;
}

std::string format_family_spec(const FamilySpec& spec) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ParetoSpec>)
                return "pareto:a=" + dtos(s.a);
            else if constexpr (std::is_same_v<T, ExponentialSpec>)
                return "exp:rate=" + dtos(s.rate);
            else if constexpr (std::is_same_v<T, WeibullSpec>)
                return "weibull:shape=" + dtos(s.shape) + ",scale=" + dtos(s.scale);
            else if constexpr (std::is_same_v<T, LognormalSpec>)
                return "lognormal:mu=" + dtos(s.mu) + ",sigma=" + dtos(s.sigma);
            else if constexpr (std::is_same_v<T, BurrSpec>)
                return "burr:c=" + dtos(s.c) + ",k=" + dtos(s.k);
            else
                return "logppareto:a=" + dtos(s.a) + ",p=" + dtos(s.p);
        },
        spec);
}

// --- command line ------------------------------------------------------------

namespace {

void finalize_config(RunConfig& cfg) {
    const size_t n = cfg.models.size();
    switch (cfg.command) {
        case Command::Convolve:
            if (n != 2) throw UsageError("convolve requires exactly 2 --model specs");
            break;
        case Command::Verify:
            if (n != 1 && n != 2) throw UsageError("verify requires 1 or 2 --model specs");
            break;
        default:
            if (n != 1) throw UsageError("this command requires exactly 1 --model spec");
    }
    for (double u : cfg.u_grid)
        if (!(u > 1.0)) throw UsageError("--u-grid values must be > 1");
    for (double k : cfg.kappa_grid)
        if (!(k > 0.0)) throw UsageError("--kappa values must be > 0");
    if (!(cfg.tol > 0.0 && cfg.tol < 0.5)) throw UsageError("--tol must be in (0, 0.5)");
    if (cfg.output_defaulted &&
        (cfg.command == Command::Convolve || cfg.command == Command::Pitman))
        cfg.output = OutputFormat::Csv;
    if (cfg.output == OutputFormat::Csv && cfg.command != Command::Convolve &&
        cfg.command != Command::Pitman)
        throw UsageError("csv output is reserved for convolve and pitman curves");
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& argv) {
    RunConfig cfg;
    CLI::App app{"numerical classification of distribution tails"};
    app.name("tailclass");
    app.require_subcommand(1);

    std::vector<std::string> model_texts;
    std::string u_csv, kappa_csv, out_format;
    struct SubBinding { Command cmd; CLI::App* sub; };
    std::vector<SubBinding> subs;
    for (auto [name, cmd, desc] :
         {std::tuple{"classify", Command::Classify, "class membership verdicts for one model"},
          std::tuple{"indices", Command::Indices, "Matuszewska indices and xh limits"},
          std::tuple{"convolve", Command::Convolve, "density/tail/hazard curve of a convolution"},
          std::tuple{"pitman", Command::Pitman, "Pitman integral sweep"},
          std::tuple{"verify", Command::Verify, "route-agreement checks (1 model) or convolution closure (2 models)"}}) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--model", model_texts, "family spec, e.g. pareto:a=2 (repeatable)");
        sub->add_option("--x-start", [&cfg](auto& res) {
            cfg.grid.x_start = stod_strict(res[0], "--x-start"); return true; },
            "grid start");
        sub->add_option("--grid-ratio", [&cfg](auto& res) {
            cfg.grid.ratio = stod_strict(res[0], "--grid-ratio"); return true; },
            "grid multiplier (> 1)");
        sub->add_option("--grid-count", [&cfg](auto& res) {
            cfg.grid.count = static_cast<int>(stod_strict(res[0], "--grid-count")); return true; },
            "number of grid points");
        sub->add_option("--window", [&cfg](auto& res) {
            cfg.grid.window = static_cast<int>(stod_strict(res[0], "--window")); return true; },
            "tail window size (>= 8)");
        sub->add_option("--u-grid", u_csv, "comma list of ratio-limit u values");
        sub->add_option("--kappa", kappa_csv, "comma list of Pitman kappa values");
        sub->add_option("--tol", cfg.tol, "verdict tolerance band");
        sub->add_option("--abs-tol", cfg.quad.abs_tol, "quadrature absolute tolerance");
        sub->add_option("--rel-tol", cfg.quad.rel_tol, "quadrature relative tolerance");
        sub->add_option("--max-depth", cfg.quad.max_depth, "quadrature bisection depth");
        sub->add_option("--edge-split", cfg.quad.edge_split, "endpoint peel fraction");
        sub->add_option("--out", out_format, "output format: json, csv or text");
        sub->add_option("--output-path", cfg.output_path, "write output to a file");
        subs.push_back({cmd, sub});
    }

    std::vector<std::string> args(argv.rbegin(), argv.rend());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    for (const auto& b : subs)
        if (app.got_subcommand(b.sub)) cfg.command = b.cmd;
    for (const auto& t : model_texts) cfg.models.push_back(parse_family_spec(t));
    if (!u_csv.empty()) cfg.u_grid = parse_csv_doubles(u_csv, "--u-grid");
    if (!kappa_csv.empty()) cfg.kappa_grid = parse_csv_doubles(kappa_csv, "--kappa");
    if (!out_format.empty()) {
        cfg.output_defaulted = false;
        if (out_format == "json") cfg.output = OutputFormat::Json;
        else if (out_format == "csv") cfg.output = OutputFormat::Csv;
        else if (out_format == "text") cfg.output = OutputFormat::Text;
        else throw UsageError("--out must be json, csv or text");
    }
    finalize_config(cfg);
    return cfg;
}

// --- JSON encoding -----------------------------------------------------------

namespace {

json num_json(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double num_from(const json& j) {
    if (j.is_number()) return j.get<double>();
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
}

json grid_json(const GridSpec& g) {
    return json{{"x_start", g.x_start}, {"ratio", g.ratio}, {"count", g.count},
                {"window", g.window}};
}

GridSpec grid_from(const json& j) {
    GridSpec g;
    g.x_start = j.at("x_start").get<double>();
    g.ratio = j.at("ratio").get<double>();
    g.count = j.at("count").get<int>();
    g.window = j.at("window").get<int>();
    return g;
}

json le_json(const LimitEstimate& e) {
    return json{{"lower", num_json(e.lower)},         {"upper", num_json(e.upper)},
                {"trend", num_json(e.trend)},         {"prev_lower", num_json(e.prev_lower)},
                {"prev_upper", num_json(e.prev_upper)}, {"grid", grid_json(e.grid)}};
}

LimitEstimate le_from(const json& j) {
    LimitEstimate e;
    e.lower = num_from(j.at("lower"));
    e.upper = num_from(j.at("upper"));
    e.trend = num_from(j.at("trend"));
    e.prev_lower = num_from(j.at("prev_lower"));
    e.prev_upper = num_from(j.at("prev_upper"));
    e.grid = grid_from(j.at("grid"));
    return e;
}

json idx_json(const IndexEstimate& i) {
    return json{{"gamma", num_json(i.gamma)},
                {"delta", num_json(i.delta)},
                {"gamma_infinite", i.gamma_infinite},
                {"delta_infinite", i.delta_infinite},
                {"residual", num_json(i.residual)},
                {"u_grid", i.u_grid}};
}

IndexEstimate idx_from(const json& j) {
    IndexEstimate i;
    i.gamma = num_from(j.at("gamma"));
    i.delta = num_from(j.at("delta"));
    i.gamma_infinite = j.at("gamma_infinite").get<bool>();
    i.delta_infinite = j.at("delta_infinite").get<bool>();
    i.residual = num_from(j.at("residual"));
    i.u_grid = j.at("u_grid").get<std::vector<double>>();
    return i;
}

const char* verdict_str(Verdict v) { return to_string(v); }

Verdict verdict_from_str(const std::string& s) {
    if (s == "Member") return Verdict::Member;
    if (s == "NonMember") return Verdict::NonMember;
    return Verdict::Inconclusive;
}

ClassId class_from_str(const std::string& s) {
    if (s == "D") return ClassId::D;
    if (s == "E") return ClassId::E;
    if (s == "L") return ClassId::L;
    if (s == "S") return ClassId::S;
    if (s == "A") return ClassId::A;
    if (s == "DcapA") return ClassId::DcapA;
    return ClassId::DcapL;
}

json verdict_json(const ClassVerdict& v) {
    json ev = json::array();
    for (const auto& e : v.evidence)
        ev.push_back(json{{"name", e.name},
                          {"lower", num_json(e.lower)},
                          {"upper", num_json(e.upper)},
                          {"trend", num_json(e.trend)}});
    return json{{"class", to_string(v.class_id)},
                {"verdict", verdict_str(v.verdict)},
                {"route", v.route},
                {"tolerance", v.tolerance},
                {"evidence", ev},
                {"note", v.note},
                {"grid", grid_json(v.grid)}};
}

ClassVerdict verdict_from(const json& j) {
    ClassVerdict v;
    v.class_id = class_from_str(j.at("class").get<std::string>());
    v.verdict = verdict_from_str(j.at("verdict").get<std::string>());
    v.route = j.at("route").get<std::string>();
    v.tolerance = j.at("tolerance").get<double>();
    for (const auto& e : j.at("evidence"))
        v.evidence.push_back({e.at("name").get<std::string>(), num_from(e.at("lower")),
                              num_from(e.at("upper")), num_from(e.at("trend"))});
    v.note = j.at("note").get<std::string>();
    v.grid = grid_from(j.at("grid"));
    return v;
}

json fit_json(const PotterFit& f) {
    return json{{"exponent", f.exponent},
                {"direction", f.direction == PotterDirection::UpperBound ? "upper" : "lower"},
                {"C", num_json(f.C)},
                {"x0", num_json(f.x0)},
                {"max_violation", num_json(f.max_violation)}};
}

PotterFit fit_from(const json& j) {
    PotterFit f;
    f.exponent = j.at("exponent").get<double>();
    f.direction = j.at("direction").get<std::string>() == "upper"
                      ? PotterDirection::UpperBound
                      : PotterDirection::LowerBound;
    f.C = num_from(j.at("C"));
    f.x0 = num_from(j.at("x0"));
    f.max_violation = num_from(j.at("max_violation"));
    return f;
}

json bound_json(const BoundCheck& b) {
    return json{{"bound", b.bound == BoundName::HazardLower ? "hazard_lower" : "hazard_upper"},
                {"exponent", b.exponent},
                {"lambda", num_json(b.lambda)},
                {"fit", fit_json(b.fit)},
                {"rhs", num_json(b.rhs)},
                {"observed", le_json(b.observed)},
                {"holds", b.holds},
                {"hypothesis_ok", b.hypothesis_ok},
                {"note", b.note}};
}

BoundCheck bound_from(const json& j) {
    BoundCheck b;
    b.bound = j.at("bound").get<std::string>() == "hazard_lower" ? BoundName::HazardLower
                                                                 : BoundName::HazardUpper;
    b.exponent = j.at("exponent").get<double>();
    b.lambda = num_from(j.at("lambda"));
    b.fit = fit_from(j.at("fit"));
    b.rhs = num_from(j.at("rhs"));
    b.observed = le_from(j.at("observed"));
    b.holds = j.at("holds").get<bool>();
    b.hypothesis_ok = j.at("hypothesis_ok").get<bool>();
    b.note = j.at("note").get<std::string>();
    return b;
}

json closure_json(const ClosureVerdict& t) {
    json pre{{"f1_idx", idx_json(t.pre.f1_idx)},
             {"tail1_idx", idx_json(t.pre.tail1_idx)},
             {"tail2_idx", idx_json(t.pre.tail2_idx)},
             {"density_ok", t.pre.density_ok},
             {"ordering_ok", t.pre.ordering_ok},
             {"witness_found", t.pre.witness_found},
             {"witness_delta", num_json(t.pre.witness_delta)},
             {"witness_liminf", le_json(t.pre.witness_liminf)},
             {"satisfied", t.pre.satisfied}};
    json out{{"preconditions", pre},
             {"conv_E", verdict_json(t.conv_E)},
             {"conv_tail_idx", idx_json(t.conv_tail_idx)},
             {"max_sum", le_json(t.max_sum)},
             {"max_sum_to_one", t.max_sum_to_one},
             {"left_DcapA", verdict_json(t.left_DcapA)},
             {"right_DcapA", verdict_json(t.right_DcapA)}};
    if (t.conv_DcapA) out["conv_DcapA"] = verdict_json(*t.conv_DcapA);
    return out;
}

ClosureVerdict closure_from(const json& j) {
    ClosureVerdict t;
    const json& pre = j.at("preconditions");
    t.pre.f1_idx = idx_from(pre.at("f1_idx"));
    t.pre.tail1_idx = idx_from(pre.at("tail1_idx"));
    t.pre.tail2_idx = idx_from(pre.at("tail2_idx"));
    t.pre.density_ok = pre.at("density_ok").get<bool>();
    t.pre.ordering_ok = pre.at("ordering_ok").get<bool>();
    t.pre.witness_found = pre.at("witness_found").get<bool>();
    t.pre.witness_delta = num_from(pre.at("witness_delta"));
    t.pre.witness_liminf = le_from(pre.at("witness_liminf"));
    t.pre.satisfied = pre.at("satisfied").get<bool>();
    t.conv_E = verdict_from(j.at("conv_E"));
    t.conv_tail_idx = idx_from(j.at("conv_tail_idx"));
    t.max_sum = le_from(j.at("max_sum"));
    t.max_sum_to_one = j.at("max_sum_to_one").get<bool>();
    t.left_DcapA = verdict_from(j.at("left_DcapA"));
    t.right_DcapA = verdict_from(j.at("right_DcapA"));
    if (j.contains("conv_DcapA")) t.conv_DcapA = verdict_from(j.at("conv_DcapA"));
    return t;
}

const char* command_str(Command c) {
    switch (c) {
        case Command::Classify: return "classify";
        case Command::Indices: return "indices";
        case Command::Convolve: return "convolve";
        case Command::Pitman: return "pitman";
        default: return "verify";
    }
}

Command command_from_str(const std::string& s) {
    if (s == "classify") return Command::Classify;
    if (s == "indices") return Command::Indices;
    if (s == "convolve") return Command::Convolve;
    if (s == "pitman") return Command::Pitman;
    if (s == "verify") return Command::Verify;
    throw UsageError("unknown command '" + s + "'");
}

const char* output_str(OutputFormat f) {
    switch (f) {
        case OutputFormat::Json: return "json";
        case OutputFormat::Csv: return "csv";
        default: return "text";
    }
}

json config_json(const RunConfig& c, const GridSpec& base_grid) {
    json models = json::array();
    for (const auto& m : c.models) models.push_back(format_family_spec(m));
    return json{{"command", command_str(c.command)},
                {"models", models},
                {"grid", grid_json(base_grid)},
                {"quad",
                 {{"abs_tol", c.quad.abs_tol},
                  {"rel_tol", c.quad.rel_tol},
                  {"max_depth", c.quad.max_depth},
                  {"edge_split", c.quad.edge_split}}},
                {"u_grid", c.u_grid},
                {"kappa_grid", c.kappa_grid},
                {"tol", c.tol},
                {"output", output_str(c.output)},
                {"output_path", c.output_path}};
}

void config_from(const json& j, RunConfig& c, GridSpec& base_grid) {
    c.command = command_from_str(j.at("command").get<std::string>());
    for (const auto& m : j.at("models"))
        c.models.push_back(parse_family_spec(m.get<std::string>()));
    base_grid = grid_from(j.at("grid"));
    c.grid.x_start = base_grid.x_start;
    c.grid.ratio = base_grid.ratio;
    c.grid.count = base_grid.count;
    c.grid.window = base_grid.window;
    const json& q = j.at("quad");
    c.quad.abs_tol = q.at("abs_tol").get<double>();
    c.quad.rel_tol = q.at("rel_tol").get<double>();
    c.quad.max_depth = q.at("max_depth").get<int>();
    c.quad.edge_split = q.at("edge_split").get<double>();
    c.u_grid = j.at("u_grid").get<std::vector<double>>();
    c.kappa_grid = j.at("kappa_grid").get<std::vector<double>>();
    c.tol = j.at("tol").get<double>();
    const std::string of = j.at("output").get<std::string>();
    c.output = of == "json" ? OutputFormat::Json
                            : (of == "csv" ? OutputFormat::Csv : OutputFormat::Text);
    c.output_defaulted = false;
    c.output_path = j.at("output_path").get<std::string>();
}

}  // namespace

json to_json(const Report& r) {
    json j;
    j["version"] = r.version;
    j["config"] = config_json(r.config, r.base_grid);
    json vs = json::array();
    for (const auto& v : r.verdicts) vs.push_back(verdict_json(v));
    j["verdicts"] = vs;
    if (r.tail_idx || r.density_idx || r.hazard_idx) {
        json idx;
        if (r.tail_idx) idx["tail"] = idx_json(*r.tail_idx);
        if (r.density_idx) idx["density"] = idx_json(*r.density_idx);
        if (r.hazard_idx) idx["hazard"] = idx_json(*r.hazard_idx);
        j["indices"] = idx;
    }
    if (r.xh) {
        j["xh"] = le_json(*r.xh);
        j["xh_unbounded"] = r.xh_unbounded;
    }
    if (!r.bounds.empty()) {
        json bs = json::array();
        for (const auto& b : r.bounds) bs.push_back(bound_json(b));
        j["bounds"] = bs;
    }
    if (r.closure) j["closure"] = closure_json(*r.closure);
    if (r.curve) {
        json rows = json::array();
        for (const auto& row : r.curve->rows) {
            json jr = json::array();
            for (double v : row) jr.push_back(num_json(v));
            rows.push_back(jr);
        }
        j["curve"] = json{{"header", r.curve->header}, {"rows", rows}};
    }
    j["timings"] = r.timings;
    return j;
}

Report report_from_json(const json& j) {
    Report r;
    r.version = j.at("version").get<std::string>();
    config_from(j.at("config"), r.config, r.base_grid);
    for (const auto& v : j.at("verdicts")) r.verdicts.push_back(verdict_from(v));
    if (j.contains("indices")) {
        const json& idx = j.at("indices");
        if (idx.contains("tail")) r.tail_idx = idx_from(idx.at("tail"));
        if (idx.contains("density")) r.density_idx = idx_from(idx.at("density"));
        if (idx.contains("hazard")) r.hazard_idx = idx_from(idx.at("hazard"));
    }
    if (j.contains("xh")) {
        r.xh = le_from(j.at("xh"));
        r.xh_unbounded = j.at("xh_unbounded").get<bool>();
    }
    if (j.contains("bounds"))
        for (const auto& b : j.at("bounds")) r.bounds.push_back(bound_from(b));
    if (j.contains("closure")) r.closure = closure_from(j.at("closure"));
    if (j.contains("curve")) {
        CurveTable t;
        t.header = j.at("curve").at("header").get<std::vector<std::string>>();
        for (const auto& row : j.at("curve").at("rows")) {
            std::vector<double> rr;
            for (const auto& v : row) rr.push_back(num_from(v));
            t.rows.push_back(std::move(rr));
        }
        r.curve = std::move(t);
    }
    r.timings = j.at("timings").get<std::map<std::string, double>>();
    return r;
}

json canonical_form(json report_json) {
    report_json.erase("timings");
    return report_json;
}

// --- execution ---------------------------------------------------------------

namespace {

struct SectionTimer {
    std::map<std::string, double>& sink;
    std::string name;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    ~SectionTimer() {
        sink[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                         .count();
    }
};

void render_text(const Report& r, std::ostream& out) {
    out << "tailclass " << r.version << "\n";
    for (const auto& m : r.config.models) out << "model: " << format_family_spec(m) << "\n";
    for (const auto& v : r.verdicts) {
        out << "class " << to_string(v.class_id) << ": " << to_string(v.verdict) << " ["
            << v.route << "] tol=" << v.tolerance;
        if (!v.note.empty()) out << "  (" << v.note << ")";
        out << "\n";
        for (const auto& e : v.evidence)
            out << "  " << e.name << ": lower=" << e.lower << " upper=" << e.upper
                << " trend=" << e.trend << "\n";
    }
    auto idx_line = [&](const char* name, const IndexEstimate& i) {
        out << "indices " << name << ": gamma=" << (i.gamma_infinite ? "inf" : dtos(i.gamma))
            << " delta=" << (i.delta_infinite ? "inf" : dtos(i.delta))
            << " residual=" << i.residual << "\n";
    };
    if (r.tail_idx) idx_line("tail", *r.tail_idx);
    if (r.density_idx) idx_line("density", *r.density_idx);
    if (r.hazard_idx) idx_line("hazard", *r.hazard_idx);
    if (r.xh)
        out << "xh: lower=" << r.xh->lower << " upper=" << r.xh->upper
            << (r.xh_unbounded ? " (unbounded)" : "") << "\n";
    for (const auto& b : r.bounds)
        out << "bound " << (b.bound == BoundName::HazardLower ? "lower" : "upper")
            << " exponent=" << b.exponent << " rhs=" << b.rhs
            << " holds=" << (b.holds ? "yes" : "no")
            << (b.hypothesis_ok ? "" : " [hypothesis violated]") << "\n";
    if (r.closure) {
        const auto& t = *r.closure;
        out << "closure preconditions: " << (t.pre.satisfied ? "satisfied" : "not satisfied");
        if (t.pre.witness_found) out << " (witness delta=" << t.pre.witness_delta << ")";
        out << "\n";
        out << "convolution E: " << to_string(t.conv_E.verdict) << "\n";
        out << "convolution tail index: gamma="
            << (t.conv_tail_idx.gamma_infinite ? "inf" : dtos(t.conv_tail_idx.gamma))
            << " delta="
            << (t.conv_tail_idx.delta_infinite ? "inf" : dtos(t.conv_tail_idx.delta)) << "\n";
        out << "max_sum_ratio window: [" << t.max_sum.lower << ", " << t.max_sum.upper
            << "] to_one=" << (t.max_sum_to_one ? "yes" : "no") << "\n";
        if (t.conv_DcapA) out << "convolution DcapA: " << to_string(t.conv_DcapA->verdict) << "\n";
    }
    if (r.curve) {
        out << "curve rows: " << r.curve->rows.size() << " (use --out csv for the data)\n";
    }
}

void render_csv(const Report& r, std::ostream& out) {
    if (!r.curve) throw UsageError("csv output is reserved for convolve and pitman curves");
    for (size_t i = 0; i < r.curve->header.size(); ++i)
        out << (i ? "," : "") << r.curve->header[i];
    out << "\n";
    char buf[64];
    for (const auto& row : r.curve->rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.12g", row[i]);
            out << (i ? "," : "") << buf;
        }
        out << "\n";
    }
}

}  // namespace

bool any_inconclusive(const Report& r) {
    for (const auto& v : r.verdicts)
        if (v.verdict == Verdict::Inconclusive) return true;
    if (r.closure) {
        const auto& t = *r.closure;
        if (t.conv_E.verdict == Verdict::Inconclusive) return true;
        if (t.left_DcapA.verdict == Verdict::Inconclusive) return true;
        if (t.right_DcapA.verdict == Verdict::Inconclusive) return true;
        if (t.conv_DcapA && t.conv_DcapA->verdict == Verdict::Inconclusive) return true;
    }
    return false;
}

Report run(const RunConfig& config, std::ostream& out) {
    RunConfig cfg = config;
    finalize_config(cfg);

    Report rep;
    rep.version = kVersion;
    rep.config = cfg;

    std::vector<DistributionModel> models;
    for (const auto& s : cfg.models) models.push_back(build(s));

    double support = 0.0;
    for (const auto& m : models) support = std::max(support, m.support_low);
    const bool two_model = models.size() == 2;
    if (two_model) support = std::max(support, models[0].support_low + models[1].support_low);

    GridSpec grid = GridSpec::defaults_for(support);
    if (cfg.grid.x_start) grid.x_start = *cfg.grid.x_start;
    if (cfg.grid.ratio) grid.ratio = *cfg.grid.ratio;
    if (cfg.grid.count) grid.count = *cfg.grid.count;
    if (cfg.grid.window) grid.window = *cfg.grid.window;
    try {
        grid.validate();
    } catch (const GridError& e) {
        throw UsageError(e.what());
    }
    rep.base_grid = grid;

    ClassifierConfig cc;
    cc.tol = cfg.tol;
    cc.u_grid = cfg.u_grid;
    cc.kappa_grid = cfg.kappa_grid;
    cc.quad = cfg.quad;

    switch (cfg.command) {
        case Command::Classify: {
            SectionTimer t{rep.timings, "classify"};
            const Classification c = classify_all(models[0], grid, cc);
            rep.verdicts = {c.d, c.e, c.l, c.s, c.a, c.dcap_a};
            rep.tail_idx = c.tail_idx;
            rep.density_idx = c.density_idx;
            rep.hazard_idx = c.hazard_idx;
            rep.xh = c.xh;
            rep.xh_unbounded = c.xh_unbounded;
            break;
        }
        case Command::Indices: {
            SectionTimer t{rep.timings, "indices"};
            const auto& m = models[0];
            const double umax = 32.0;
            rep.tail_idx = matuszewska_indices(
                m.log_tail, cap_grid_finite({m.log_tail}, grid, umax), cc.index_u_grid);
            rep.density_idx = matuszewska_indices(
                m.log_density, cap_grid_finite({m.log_tail, m.log_density}, grid, umax),
                cc.index_u_grid);
            auto log_h = [&](double x) { return m.log_density(x) - m.log_tail(x); };
            rep.hazard_idx = matuszewska_indices(
                log_h, cap_grid_finite({m.log_tail, m.log_density}, grid, umax),
                cc.index_u_grid);
            const GridSpec gh = cap_grid_finite({m.log_tail, m.log_density}, grid, 1.0);
            rep.xh = xh_limits(m, gh);
            rep.xh_unbounded =
                rep.xh->prev_upper > 0 && rep.xh->upper >= 3.0 * rep.xh->prev_upper;
            break;
        }
        case Command::Convolve: {
            SectionTimer t{rep.timings, "convolve"};
            const ConvolvedModel conv(models[0], models[1], cfg.quad);
            const DistributionModel cm = conv.as_model();
            const GridSpec g = cap_grid_finite({cm.log_tail, cm.log_density}, grid, 1.0);
            CurveTable table;
            table.header = {"x", "density", "tail", "hazard", "max_sum_ratio"};
            for (int k = 0; k < g.count; ++k) {
                const double x = g.point(k);
                const double ld = cm.log_density(x), lt = cm.log_tail(x);
                const double l1 = models[0].log_tail(x), l2 = models[1].log_tail(x);
                const double off = std::max(l1, l2);
                const double msr =
                    std::exp(lt - off) / (std::exp(l1 - off) + std::exp(l2 - off));
                table.rows.push_back(
                    {x, std::exp(ld), std::exp(lt), std::exp(ld - lt), msr});
            }
            rep.curve = std::move(table);
            break;
        }
        case Command::Pitman: {
            SectionTimer t{rep.timings, "pitman"};
            const auto& m = models[0];
            const GridSpec g = cap_grid_finite({m.log_tail, m.log_density}, grid, 1.0);
            CurveTable table;
            table.header = {"x", "kappa", "integral"};
            for (int k = 0; k < g.count; ++k) {
                const double x = g.point(k);
                for (double kappa : cfg.kappa_grid) {
                    double val;
                    try {
                        val = pitman_integral(m, kappa, x, cfg.quad);
                    } catch (const OverflowGuard&) {
                        val = std::numeric_limits<double>::quiet_NaN();
                    }
                    table.rows.push_back({x, kappa, val});
                }
            }
            rep.curve = std::move(table);
            break;
        }
        case Command::Verify: {
            SectionTimer t{rep.timings, "verify"};
            if (two_model) {
                rep.closure =
                    verify_convolution_closure(models[0], models[1], grid, cfg.quad, cc);
            } else {
                const auto& m = models[0];
                rep.verdicts = {test_E(m, grid, ERoute::Both, cc),
                                test_D(m, grid, DRoute::Both, cc),
                                test_S(m, grid, SRoute::Both, cc), test_A(m, grid, cc),
                                test_DcapA(m, grid, cc)};
                const double umax = 32.0;
                rep.density_idx = matuszewska_indices(
                    m.log_density, cap_grid_finite({m.log_tail, m.log_density}, grid, umax),
                    cc.index_u_grid);
                rep.tail_idx = matuszewska_indices(
                    m.log_tail, cap_grid_finite({m.log_tail}, grid, umax), cc.index_u_grid);
                if (!rep.density_idx->delta_infinite && rep.density_idx->delta > 1.0)
                    rep.bounds.push_back(check_hazard_lower_bound(
                        m, 1.0 + 0.5 * (rep.density_idx->delta - 1.0), grid, cc));
                if (!rep.density_idx->gamma_infinite) {
                    rep.bounds.push_back(
                        check_hazard_upper_bound(m, rep.density_idx->gamma + 0.5, 2.0, grid, cc));
                    rep.bounds.push_back(
                        check_hazard_upper_bound(m, rep.density_idx->gamma + 1.0, 10.0, grid, cc));
                }
            }
            break;
        }
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (!cfg.output_path.empty()) {
        file.open(cfg.output_path);
        if (!file) throw std::runtime_error("cannot open output file " + cfg.output_path);
        sink = &file;
    }
    switch (cfg.output) {
        case OutputFormat::Json: *sink << to_json(rep).dump(2) << "\n"; break;
        case OutputFormat::Csv: render_csv(rep, *sink); break;
        case OutputFormat::Text: render_text(rep, *sink); break;
    }
    return rep;
}

}  // namespace tailclass
