#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "ltd/io.hpp"
#include "ltd/lattice.hpp"
#include "oracle.hpp"

namespace ltd::cli {
namespace {

using io::json;

class BadInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string config;
    std::string output;
    std::string format;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;

    std::string network;
    std::string h;
    std::string range;
    std::string h_minus;
    std::string h_plus;
    std::string schedule;
    std::string x0;
    std::string tau;
    std::string horizon = "100";
    std::size_t runs = 100;
    std::size_t max_n = 8;
    std::size_t instances = 200;
    std::string schedule_out;
};

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

Rational rational_arg(const std::string& text, const char* what) {
    try {
        return Rational::parse(trim(text));
    } catch (const std::exception& e) {
        throw BadInput(std::string(what) + ": " + e.what());
    }
}

bool is_file(const std::string& arg) {
    std::error_code ec;
    return std::filesystem::is_regular_file(arg, ec);
}

// A JSON file (`{"h": [...]}`) or an inline comma list such as "0,-1/2,3".
Field field_arg(const std::string& arg, std::size_t n, const char* what) {
    if (is_file(arg)) return io::parse_field(io::read_file(arg), n);
    Field h;
    std::stringstream ss(arg);
    for (std::string item; std::getline(ss, item, ',');) h.push_back(rational_arg(item, what));
    if (h.size() != n)
        throw BadInput(std::string(what) + ": expected " + std::to_string(n) + " entries, got " +
                       std::to_string(h.size()));
    return h;
}

bool has_range(const Options& o) { return !o.range.empty() || !o.h_minus.empty() || !o.h_plus.empty(); }

FieldRange range_arg(const Options& o, std::size_t n) {
    if (!o.range.empty()) {
        if (!is_file(o.range)) throw BadInput("range file '" + o.range + "' not found");
        return io::parse_range(io::read_file(o.range), n);
    }
    if (!o.h_minus.empty() || !o.h_plus.empty()) {
        if (o.h_minus.empty() || o.h_plus.empty()) throw BadInput("--h-minus and --h-plus must be given together");
        FieldRange r{field_arg(o.h_minus, n, "--h-minus"), field_arg(o.h_plus, n, "--h-plus")};
        try {
            r.validate(n);
        } catch (const ContractError& e) {
            throw BadInput(e.what());
        }
        return r;
    }
    if (!o.h.empty()) return FieldRange::point(field_arg(o.h, n, "--h"));
    throw BadInput("a field range is required (--range, --h-minus/--h-plus or --h)");
}

Field field_req(const Options& o, std::size_t n) {
    if (o.h.empty()) throw BadInput("--h is required");
    return field_arg(o.h, n, "--h");
}

Configuration config_arg(const std::string& text, std::size_t n) {
    Configuration x;
    try {
        x = Configuration::parse(text);
    } catch (const std::exception& e) {
        throw BadInput(std::string("--x0: ") + e.what());
    }
    if (x.size() != n) throw BadInput("--x0: expected " + std::to_string(n) + " entries");
    return x;
}

double horizon_arg(const Options& o) {
    const Rational t = rational_arg(o.horizon, "--horizon");
    if (t.sign() < 0) throw BadInput("--horizon must be nonnegative");
    return t.to_double();
}

Rational tau_arg(const Options& o) {
    if (o.tau.empty()) throw BadInput("--tau is required");
    const Rational tau = rational_arg(o.tau, "--tau");
    if (tau.sign() <= 0) throw BadInput("--tau must be positive");
    return tau;
}

// --schedule FILE, or --range/--h-minus/--h-plus with --tau, or a constant --h.
FieldSchedule schedule_arg(const Options& o, std::size_t n) {
    if (!o.schedule.empty()) {
        if (!is_file(o.schedule)) throw BadInput("schedule file '" + o.schedule + "' not found");
        std::optional<FieldRange> range;
        if (has_range(o)) range = range_arg(o, n);
        return io::parse_schedule(io::read_file(o.schedule), range, n);
    }
    if (!o.tau.empty()) return oscillation_schedule(range_arg(o, n), tau_arg(o));
    if (!o.h.empty()) return FieldSchedule::constant(field_arg(o.h, n, "--h"));
    throw BadInput("a schedule is required (--schedule, --h, or a range with --tau)");
}

Configuration random_start(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(mix_seed(seed, 0));
    std::vector<Action> s(n);
    for (auto& a : s) a = (rng() >> 63) != 0U ? Action::plus : Action::minus;
    return Configuration(std::move(s));
}

std::string set_str(const NodeSet& s) {
    std::string out = "{";
    for (std::size_t k = 0; k < s.size(); ++k) out += (k ? "," : "") + std::to_string(s[k] + 1);
    return out + "}";
}

std::string partition_str(const Partition& p) { return set_str(p.minus) + "|" + set_str(p.plus) + " (V-|V+)"; }

std::string field_str(const Field& h) {
    std::string s = "(";
    for (std::size_t i = 0; i < h.size(); ++i) s += (i ? "," : "") + h[i].str();
    return s + ")";
}

std::string path_text(const AdmissiblePath& path) {
    std::ostringstream os;
    os << "start " << path.start.str() << '\n';
    for (std::size_t k = 0; k < path.steps.size(); ++k)
        os << "step " << k + 1 << ": agent " << path.steps[k].agent + 1 << " -> "
           << (path.steps[k].action == Action::plus ? "+1" : "-1") << '\n';
    os << "end " << path.end().str() << '\n';
    return os.str();
}

json trajectory_json(const Trajectory& t) {
    json events = json::array();
    for (const auto& e : t.events) events.push_back(json::array({e.time, e.agent + 1, value(e.new_state)}));
    json out = {{"seed", t.seed},
                {"horizon", t.horizon},
                {"initial", io::to_json(t.initial)},
                {"events", events},
                {"final", io::to_json(t.final)},
                {"absorbed", t.absorbed},
                {"activations", t.activations}};
    out["hitting_time"] = t.hitting_time_consensus ? json(*t.hitting_time_consensus) : json(nullptr);
    return out;
}

struct Context {
    Options opt;
    io::Settings settings;
    Network net;

    [[nodiscard]] std::uint64_t seed() const { return opt.seed.value_or(settings.seed); }
    [[nodiscard]] std::string format(const char* fallback) const { return opt.format.empty() ? fallback : opt.format; }
};

struct Result {
    int code = kTrue;
    std::string text;
};

void require_format(const std::string& f, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (f == a) return;
    throw BadInput("unsupported --format '" + f + "'");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

Result cmd_classify(const Context& c) {
    const auto f = c.format("text");
    require_format(f, {"text", "json"});
    const std::size_t n = c.net.size();
    GameClass cls;
    bool robust_label = false;
    if (has_range(c.opt)) {
        const auto r = range_arg(c.opt, n);
        cls = classify_range(c.net, r, c.settings.limits);
        robust_label = !r.degenerate();
    } else {
        cls = classify_field(c.net, field_req(c.opt, n), c.settings.limits);
    }
    const std::string label = describe(cls, robust_label);
    if (f == "json") {
        json j = io::to_json(cls);
        j["description"] = label;
        j["robust"] = robust_label;
        return {kTrue, dump(j)};
    }
    return {kTrue, label + "\n"};
}

Result cmd_equilibria(const Context& c) {
    const auto f = c.format("text");
    require_format(f, {"text", "json"});
    const auto set = enumerate_equilibria(c.net, field_req(c.opt, c.net.size()), c.settings.limits);
    if (f == "json") return {kTrue, dump(io::to_json(set))};
    std::string s;
    for (const auto& x : set.members) s += x.str() + "\n";
    s += "least " + set.least.str() + "\ngreatest " + set.greatest.str() + "\n";
    return {kTrue, s};
}

Result cmd_indecomposable(const Context& c) {
    const auto f = c.format("text");
    require_format(f, {"text", "json"});
    const auto range = range_arg(c.opt, c.net.size());
    const auto result = check_indecomposable(c.net, range, c.settings.limits);
    std::optional<DecompositionWitness> witness;
    if (!result.indecomposable) witness = decomposition_witness(c.net, range, c.settings.limits);
    const int code = result.indecomposable ? kTrue : kFalse;
    if (f == "json") {
        json j = {{"indecomposable", result.indecomposable}};
        j["witness"] = witness ? io::to_json(*witness) : json(nullptr);
        return {code, dump(j)};
    }
    if (result.indecomposable) return {code, "indecomposable\n"};
    std::string s = "not indecomposable\npartition " + partition_str(witness->partition) + "\n";
    s += "h* = " + field_str(witness->field_star) + "\nx* = " + witness->config_star.str() + "\n";
    return {code, s};
}

Result cmd_witness(const Context& c) {
    const auto f = c.format("json");
    require_format(f, {"text", "json"});
    const auto witness = decomposition_witness(c.net, range_arg(c.opt, c.net.size()), c.settings.limits);
    const int code = witness ? kTrue : kFalse;
    if (f == "json") return {code, dump(witness ? io::to_json(*witness) : json(nullptr))};
    if (!witness) return {code, "none\n"};
    return {code, "partition " + partition_str(witness->partition) + "\nh* = " + field_str(witness->field_star) +
                      "\nx* = " + witness->config_star.str() + "\n"};
}

Result cmd_robust_path(const Context& c) {
    const auto f = c.format("text");
    require_format(f, {"text", "json"});
    if (c.opt.x0.empty()) throw BadInput("--x0 is required");
    const auto range = range_arg(c.opt, c.net.size());
    const auto x = config_arg(c.opt.x0, c.net.size());
    try {
        const auto path = robust_consensus_path(c.net, range, x, c.settings.limits);
        return {kTrue, f == "json" ? dump(io::to_json(path)) : path_text(path)};
    } catch (const NotIndecomposable& e) {
        if (f == "json") return {kFalse, dump({{"path", nullptr}, {"violating", io::to_json(e.partition())}})};
        return {kFalse, "not indecomposable\npartition " + partition_str(e.partition()) + "\n"};
    }
}

Result trajectory_output(const Context& c, const Trajectory& t, const char* fallback) {
    const auto f = c.format(fallback);
    require_format(f, {"csv", "json", "text"});
    if (f == "csv") return {kTrue, io::trajectory_csv(t)};
    if (f == "json") return {kTrue, dump(trajectory_json(t))};
    std::ostringstream os;
    os << "events " << t.events.size() << "\nfinal " << t.final.str() << "\nabsorbed " << (t.absorbed ? "yes" : "no")
       << "\nvisits +1 " << consensus_visits(t, Action::plus) << "\nvisits -1 " << consensus_visits(t, Action::minus)
       << '\n';
    return {kTrue, os.str()};
}

Result cmd_simulate(const Context& c) {
    const std::size_t n = c.net.size();
    const auto schedule = schedule_arg(c.opt, n);
    const auto x0 = c.opt.x0.empty() ? random_start(c.seed(), n) : config_arg(c.opt.x0, n);
    return trajectory_output(c, simulate(c.net, schedule, x0, horizon_arg(c.opt), c.seed()), "csv");
}

Result cmd_oscillate(const Context& c, std::ostream& err) {
    const std::size_t n = c.net.size();
    const auto schedule = oscillation_schedule(range_arg(c.opt, n), tau_arg(c.opt));
    if (!c.opt.schedule_out.empty()) {
        std::ofstream os(c.opt.schedule_out);
        if (!(os << dump(io::to_json(schedule)))) throw BadInput("cannot write '" + c.opt.schedule_out + "'");
    }
    const auto x0 = c.opt.x0.empty() ? random_start(c.seed(), n) : config_arg(c.opt.x0, n);
    const auto traj = simulate(c.net, schedule, x0, horizon_arg(c.opt), c.seed());
    err << "visits +1: " << consensus_visits(traj, Action::plus) << ", visits -1: " << consensus_visits(traj, Action::minus)
        << '\n';
    return trajectory_output(c, traj, "csv");
}

Result cmd_stats(const Context& c) {
    const auto f = c.format("json");
    require_format(f, {"text", "json"});
    const std::size_t n = c.net.size();
    if (c.opt.runs == 0) throw BadInput("--runs must be at least 1");
    const auto schedule = schedule_arg(c.opt, n);
    InitialState init;
    if (!c.opt.x0.empty()) init.fixed = config_arg(c.opt.x0, n);
    const unsigned threads = c.opt.threads.value_or(c.settings.sim_threads);
    const auto runs = run_batch(c.net, schedule, init, c.opt.runs, horizon_arg(c.opt), c.seed(), threads);
    const auto s = summarize(runs);
    if (f == "json") {
        json j = io::to_json(s);
        j["base_seed"] = c.seed();
        return {kTrue, dump(j)};
    }
    std::ostringstream os;
    os << "runs " << s.runs << "\nabsorbed +1 " << s.absorbed_plus << "\nabsorbed -1 " << s.absorbed_minus
       << "\nabsorbed other " << s.absorbed_other << "\nnot absorbed " << s.not_absorbed << "\nreached consensus "
       << s.reached_consensus << "\nmean hitting time " << s.mean_hitting_time << "\nmedian hitting time "
       << s.median_hitting_time << '\n';
    return {kTrue, os.str()};
}

Result cmd_oracle_check(const Context& c) {
    const auto f = c.format("text");
    require_format(f, {"text", "json"});
    if (c.opt.max_n < 1 || c.opt.max_n > 12) throw BadInput("--max-n must lie in 1..12");
    const auto report = oracle::run_suite(c.opt.max_n, c.opt.instances, c.seed());
    const int code = report.passed() ? kTrue : kFalse;
    if (f == "json") {
        json props = json::object();
        for (const auto& [name, t] : report.properties) props[name] = {{"checks", t.checks}, {"failures", t.failures}};
        return {code, dump({{"instances", report.instances},
                            {"seed", c.seed()},
                            {"passed", report.passed()},
                            {"properties", props},
                            {"failures", report.failures}})};
    }
    std::ostringstream os;
    for (const auto& [name, t] : report.properties)
        os << (t.failures == 0 ? "ok   " : "FAIL ") << name << " " << t.checks - t.failures << "/" << t.checks << '\n';
    for (const auto& msg : report.failures) os << "  " << msg << '\n';
    os << (report.passed() ? "PASS" : "FAIL") << ": " << report.instances << " instances, " << report.total_checks()
       << " checks, " << report.total_failures() << " failures\n";
    return {code, os.str()};
}

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config, "Settings file (key = value)");
    sub->add_option("-o,--output", o.output, "Write the result to this file instead of stdout");
    sub->add_option("--format", o.format, "Output format: text, json or csv (command dependent)");
    sub->add_option("--seed", o.seed, "Random seed (overrides config and LTD_SEED)");
    sub->add_option("--threads", o.threads, "Worker threads");
}

void add_network(CLI::App* sub, Options& o) { sub->add_option("network", o.network, "Network file")->required(); }

void add_field(CLI::App* sub, Options& o) {
    sub->add_option("--h", o.h, "Field: JSON file {\"h\": [...]} or inline list \"0,-1/2,...\"");
}

void add_range(CLI::App* sub, Options& o) {
    sub->add_option("--range", o.range, "Range JSON file {\"h_minus\": [...], \"h_plus\": [...]}");
    sub->add_option("--h-minus", o.h_minus, "Lower field (file or inline list)");
    sub->add_option("--h-plus", o.h_plus, "Upper field (file or inline list)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Linear threshold dynamics and network coordination games", "ltd"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    Options o;

    auto* classify = app.add_subcommand("classify", "Consensus kind and polarizability of a field or range");
    auto* equilibria = app.add_subcommand("equilibria", "All pure equilibria for a field");
    auto* indecomposable = app.add_subcommand("indecomposable", "Check (h-,h+)-indecomposability");
    auto* witness = app.add_subcommand("witness", "Decomposition witness (partition, h*, x*)");
    auto* robust_path = app.add_subcommand("robust-path", "Improvement path to consensus valid for the whole range");
    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate one trajectory");
    auto* oscillate = app.add_subcommand("oscillate", "Simulate under the alternating h+/h- schedule");
    auto* stats = app.add_subcommand("stats", "Monte Carlo absorption and hitting-time statistics");
    auto* oracle_check = app.add_subcommand("oracle-check", "Cross-check the library against brute-force oracles");

    for (auto* sub : {classify, equilibria, indecomposable, witness, robust_path, simulate_cmd, oscillate, stats,
                      oracle_check})
        add_common(sub, o);
    for (auto* sub : {classify, equilibria, indecomposable, witness, robust_path, simulate_cmd, oscillate, stats})
        add_network(sub, o);
    for (auto* sub : {classify, equilibria, indecomposable, witness, robust_path, simulate_cmd, stats}) add_field(sub, o);
    for (auto* sub : {classify, indecomposable, witness, robust_path, simulate_cmd, oscillate, stats}) add_range(sub, o);
    for (auto* sub : {robust_path, simulate_cmd, oscillate, stats}) sub->add_option("--x0", o.x0, "Initial configuration");
    for (auto* sub : {simulate_cmd, oscillate, stats}) {
        sub->add_option("--horizon", o.horizon, "Time horizon (fractions allowed)");
        sub->add_option("--tau", o.tau, "Half-period of the alternating schedule");
    }
    for (auto* sub : {simulate_cmd, stats}) sub->add_option("--schedule", o.schedule, "Schedule JSON file");
    oscillate->add_option("--schedule-out", o.schedule_out, "Also write the generated schedule JSON here");
    stats->add_option("--runs", o.runs, "Number of runs");
    oracle_check->add_option("--max-n", o.max_n, "Largest instance size");
    oracle_check->add_option("--instances", o.instances, "Number of random instances");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kTrue;
        }
        err << "error: " << e.what() << '\n';
        return kBadInput;
    }

    Result result;
    try {
        Context c{o, {}, {}};
        if (!o.config.empty()) c.settings = io::parse_settings(io::read_file(o.config));
        c.settings = io::apply_env_overrides(c.settings);
        if (o.threads) c.settings.limits.threads = *o.threads;
        if (!o.network.empty()) {
            if (!is_file(o.network)) throw BadInput("network file '" + o.network + "' not found");
            c.net = parse_network(io::read_file(o.network));
        }

        if (classify->parsed())
            result = cmd_classify(c);
        else if (equilibria->parsed())
            result = cmd_equilibria(c);
        else if (indecomposable->parsed())
            result = cmd_indecomposable(c);
        else if (witness->parsed())
            result = cmd_witness(c);
        else if (robust_path->parsed())
            result = cmd_robust_path(c);
        else if (simulate_cmd->parsed())
            result = cmd_simulate(c);
        else if (oscillate->parsed())
            result = cmd_oscillate(c, err);
        else if (stats->parsed())
            result = cmd_stats(c);
        else
            result = cmd_oracle_check(c);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const BadInput& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const ContractError& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const RationalOverflow& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    }

    if (o.output.empty()) {
        out << result.text;
    } else {
        std::ofstream file(o.output, std::ios::binary);
        if (!(file << result.text)) {
            err << "error: cannot write '" << o.output << "'\n";
            return kBadInput;
        }
    }
    return result.code;
}

}  // namespace ltd::cli
