#include "ltd/io.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace ltd::io {
namespace {

json parse_json(std::string_view text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(0, std::string(what) + ": " + e.what());
    }
}

Rational to_rational(const json& v, const char* what) {
    try {
        if (v.is_string()) return Rational::parse(v.get<std::string>());
        if (v.is_number()) return Rational::parse(v.dump());
    } catch (const std::exception& e) {
        throw ParseError(0, std::string(what) + ": " + e.what());
    }
    throw ParseError(0, std::string(what) + ": expected a number string");
}

Field to_field(const json& arr, const char* what, std::optional<std::size_t> n) {
    if (!arr.is_array()) throw ParseError(0, std::string(what) + ": expected an array");
    Field h;
    h.reserve(arr.size());
    for (const auto& v : arr) h.push_back(to_rational(v, what));
    if (n && h.size() != *n)
        throw ParseError(0, std::string(what) + ": expected " + std::to_string(*n) + " entries, got " +
                                std::to_string(h.size()));
    return h;
}

std::string format_time(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", t);
    return buf;
}

std::optional<std::uint64_t> parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

void set_key(Settings& s, std::string_view key, std::string_view value, std::size_t line) {
    const auto v = parse_u64(value);
    if (!v) throw ParseError(line, "invalid value for '" + std::string(key) + "'");
    if (key == "max_partition_nodes")
        s.limits.max_partition_nodes = *v;
    else if (key == "max_enumeration_nodes")
        s.limits.max_enumeration_nodes = *v;
    else if (key == "max_subset_nodes")
        s.limits.max_subset_nodes = *v;
    else if (key == "threads")
        s.limits.threads = static_cast<unsigned>(*v);
    else if (key == "sim_threads")
        s.sim_threads = static_cast<unsigned>(*v);
    else if (key == "seed")
        s.seed = *v;
    else
        throw ParseError(line, "unknown setting '" + std::string(key) + "'");
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

Field parse_field(std::string_view text, std::optional<std::size_t> n) {
    const json doc = parse_json(text, "field");
    if (!doc.is_object() || !doc.contains("h")) throw ParseError(0, "field: expected {\"h\": [...]}");
    return to_field(doc["h"], "field", n);
}

FieldRange parse_range(std::string_view text, std::optional<std::size_t> n) {
    const json doc = parse_json(text, "range");
    if (!doc.is_object() || !doc.contains("h_minus") || !doc.contains("h_plus"))
        throw ParseError(0, "range: expected {\"h_minus\": [...], \"h_plus\": [...]}");
    FieldRange r{to_field(doc["h_minus"], "range h_minus", n), to_field(doc["h_plus"], "range h_plus", n)};
    try {
        r.validate(r.lower.size());
    } catch (const ContractError& e) {
        throw ParseError(0, std::string("range: ") + e.what());
    }
    return r;
}

FieldSchedule parse_schedule(std::string_view text, const std::optional<FieldRange>& range,
                             std::optional<std::size_t> n) {
    const json doc = parse_json(text, "schedule");
    const json* points = &doc;
    std::optional<Rational> period;
    if (doc.is_object()) {
        if (!doc.contains("breakpoints")) throw ParseError(0, "schedule: missing \"breakpoints\"");
        points = &doc["breakpoints"];
        if (doc.contains("period")) period = to_rational(doc["period"], "schedule period");
    }
    if (!points->is_array() || points->empty()) throw ParseError(0, "schedule: expected a nonempty breakpoint array");
    std::vector<Breakpoint> bps;
    for (const auto& p : *points) {
        if (!p.is_object() || !p.contains("t") || !p.contains("h"))
            throw ParseError(0, "schedule: breakpoints need \"t\" and \"h\"");
        bps.push_back({to_rational(p["t"], "schedule time"), to_field(p["h"], "schedule field", n)});
    }
    try {
        FieldSchedule s(std::move(bps), period);
        if (range) s.attach_range(*range);
        return s;
    } catch (const ContractError& e) {
        throw ParseError(0, std::string("schedule: ") + e.what());
    }
}

json to_json(const Field& h) {
    json arr = json::array();
    for (const auto& v : h) arr.push_back(v.str());
    return arr;
}

json to_json(const FieldRange& range) { return {{"h_minus", to_json(range.lower)}, {"h_plus", to_json(range.upper)}}; }

json to_json(const FieldSchedule& schedule) {
    json arr = json::array();
    for (const auto& b : schedule.breakpoints()) arr.push_back({{"t", b.time.str()}, {"h", to_json(b.field)}});
    if (!schedule.period()) return arr;
    return {{"breakpoints", arr}, {"period", schedule.period()->str()}};
}

json to_json(const Configuration& x) {
    json arr = json::array();
    for (Action a : x.states()) arr.push_back(value(a));
    return arr;
}

json to_json(const NodeSet& s) {
    json arr = json::array();
    for (Agent a : s) arr.push_back(a + 1);
    return arr;
}

json to_json(const Partition& p) { return {{"plus", to_json(p.plus)}, {"minus", to_json(p.minus)}}; }

json to_json(const EquilibriumSet& set) {
    json members = json::array();
    for (const auto& m : set.members) members.push_back(to_json(m));
    return {{"members", members}, {"least", to_json(set.least)}, {"greatest", to_json(set.greatest)}};
}

json to_json(const AdmissiblePath& path) {
    json steps = json::array();
    for (const auto& s : path.steps) steps.push_back(json::array({s.agent + 1, value(s.action)}));
    json mode = json::array();
    if (path.monotone) mode.push_back("monotone");
    if (path.anti_monotone) mode.push_back("anti-monotone");
    if (path.improvement) mode.push_back("improvement");
    if (path.best_response) mode.push_back("best-response");
    return {{"start", to_json(path.start)}, {"steps", steps}, {"end", to_json(path.end())}, {"mode", mode}};
}

json to_json(const DecompositionWitness& w) {
    return {{"partition", to_json(w.partition)}, {"h_star", to_json(w.field_star)}, {"x_star", to_json(w.config_star)}};
}

json to_json(const HittingSummary& s) {
    const auto frac = [&](std::size_t k) { return s.runs == 0 ? 0.0 : static_cast<double>(k) / static_cast<double>(s.runs); };
    return {{"runs", s.runs},
            {"absorbed_plus", s.absorbed_plus},
            {"absorbed_minus", s.absorbed_minus},
            {"absorbed_other", s.absorbed_other},
            {"not_absorbed", s.not_absorbed},
            {"fraction_absorbed_plus", frac(s.absorbed_plus)},
            {"fraction_absorbed_minus", frac(s.absorbed_minus)},
            {"reached_consensus", s.reached_consensus},
            {"mean_hitting_time", s.mean_hitting_time},
            {"median_hitting_time", s.median_hitting_time},
            {"hitting_times", s.hitting_times}};
}

json to_json(const GameClass& c) {
    return {{"consensus_kind", to_string(c.consensus_kind)}, {"polarizable", c.polarizable}};
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "event,time,agent,new_state,magnetization\n";
    os << "0," << format_time(0.0) << ",,," << traj.samples.front().magnetization << '\n';
    for (std::size_t k = 0; k < traj.events.size(); ++k) {
        const auto& e = traj.events[k];
        os << k + 1 << ',' << format_time(e.time) << ',' << e.agent + 1 << ',' << value(e.new_state) << ','
           << traj.samples[k + 1].magnetization << '\n';
    }
}

std::string trajectory_csv(const Trajectory& traj) {
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    return os.str();
}

Settings parse_settings(std::string_view text, Settings base) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        std::string_view value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        set_key(base, trim(line.substr(0, eq)), value, line_no);
    }
    return base;
}

Settings apply_env_overrides(Settings s) {
    static constexpr std::pair<const char*, const char*> kVars[] = {
        {"LTD_MAX_PARTITION_NODES", "max_partition_nodes"},
        {"LTD_MAX_ENUMERATION_NODES", "max_enumeration_nodes"},
        {"LTD_MAX_SUBSET_NODES", "max_subset_nodes"},
        {"LTD_THREADS", "threads"},
        {"LTD_SIM_THREADS", "sim_threads"},
        {"LTD_SEED", "seed"},
    };
    for (const auto& [var, key] : kVars) {
        if (const char* v = std::getenv(var)) {
            try {
                set_key(s, key, trim(v), 0);
            } catch (const ParseError&) {
                throw ParseError(0, std::string("invalid value in ") + var);
            }
        }
    }
    return s;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace ltd::io
