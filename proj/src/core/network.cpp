#include "ltd/network.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <sstream>

namespace ltd {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

Action action_from_int(int v) {
    if (v == 1) return Action::plus;
    if (v == -1) return Action::minus;
    throw ContractError("agent state must be -1 or +1, got " + std::to_string(v));
}

// ---------------------------------------------------------------------------
// Configuration

Configuration::Configuration(std::initializer_list<int> states) {
    states_.reserve(states.size());
    for (int v : states) states_.push_back(action_from_int(v));
}

Configuration Configuration::from_mask(std::size_t n, std::uint64_t mask) {
    if (n > 64) throw ContractError("from_mask supports at most 64 agents");
    std::vector<Action> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = (mask >> i) & 1U ? Action::plus : Action::minus;
    return Configuration(std::move(s));
}

Configuration Configuration::parse(std::string_view text) {
    std::vector<Action> s;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && (text[pos] == ',' || text[pos] == ' ' || text[pos] == '\t')) ++pos;
        if (pos >= text.size()) break;
        std::size_t end = pos;
        while (end < text.size() && text[end] != ',' && text[end] != ' ' && text[end] != '\t') ++end;
        auto token = text.substr(pos, end - pos);
        if (!token.empty() && token.front() == '+') token.remove_prefix(1);
        int v = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc() || ptr != token.data() + token.size() || (v != 1 && v != -1))
            throw ParseError(0, "invalid agent state '" + std::string(text.substr(pos, end - pos)) + "'");
        s.push_back(action_from_int(v));
        pos = end;
    }
    if (s.empty()) throw ParseError(0, "empty configuration");
    return Configuration(std::move(s));
}

Configuration Configuration::flipped(Agent i) const {
    Configuration y = *this;
    y.flip(i);
    return y;
}

bool Configuration::is_consensus() const noexcept {
    return std::adjacent_find(states_.begin(), states_.end(), std::not_equal_to<>()) == states_.end();
}

bool Configuration::is_consensus(Action a) const noexcept {
    return std::all_of(states_.begin(), states_.end(), [a](Action s) { return s == a; });
}

long Configuration::magnetization() const noexcept {
    long m = 0;
    for (Action s : states_) m += value(s);
    return m;
}

NodeSet Configuration::positive_part() const {
    NodeSet out;
    for (Agent i = 0; i < states_.size(); ++i)
        if (states_[i] == Action::plus) out.push_back(i);
    return out;
}

NodeSet Configuration::negative_part() const {
    NodeSet out;
    for (Agent i = 0; i < states_.size(); ++i)
        if (states_[i] == Action::minus) out.push_back(i);
    return out;
}

std::uint64_t Configuration::mask() const {
    if (states_.size() > 64) throw ContractError("mask supports at most 64 agents");
    std::uint64_t m = 0;
    for (Agent i = 0; i < states_.size(); ++i)
        if (states_[i] == Action::plus) m |= std::uint64_t{1} << i;
    return m;
}

bool Configuration::leq(const Configuration& other) const {
    if (size() != other.size()) throw ContractError("configuration size mismatch");
    for (Agent i = 0; i < size(); ++i)
        if (value(states_[i]) > value(other.states_[i])) return false;
    return true;
}

Configuration Configuration::join(const Configuration& other) const {
    if (size() != other.size()) throw ContractError("configuration size mismatch");
    Configuration y = *this;
    for (Agent i = 0; i < size(); ++i)
        if (other.states_[i] == Action::plus) y.states_[i] = Action::plus;
    return y;
}

Configuration Configuration::meet(const Configuration& other) const {
    if (size() != other.size()) throw ContractError("configuration size mismatch");
    Configuration y = *this;
    for (Agent i = 0; i < size(); ++i)
        if (other.states_[i] == Action::minus) y.states_[i] = Action::minus;
    return y;
}

std::string Configuration::str() const {
    std::string out = "(";
    for (Agent i = 0; i < states_.size(); ++i) {
        if (i > 0) out += ',';
        out += states_[i] == Action::plus ? "+1" : "-1";
    }
    return out + ")";
}

// ---------------------------------------------------------------------------
// Network

Network::Network(std::size_t n, std::span<const Link> links) : out_(n), in_(n), degree_(n) {
    for (const auto& l : links) {
        if (l.tail >= n || l.head >= n) throw ContractError("link endpoint out of range");
        if (l.tail == l.head) throw ContractError("self-loop on agent " + std::to_string(l.tail + 1));
        if (l.weight.sign() < 0) throw ContractError("negative weight");
        if (l.weight.is_zero()) continue;
        out_[l.tail].push_back({l.head, l.weight});
    }
    for (Agent i = 0; i < n; ++i) {
        auto& row = out_[i];
        std::sort(row.begin(), row.end(), [](const Edge& a, const Edge& b) { return a.head < b.head; });
        for (std::size_t k = 1; k < row.size(); ++k)
            if (row[k].head == row[k - 1].head)
                throw ContractError("duplicate link " + std::to_string(i + 1) + " -> " + std::to_string(row[k].head + 1));
        for (const auto& e : row) {
            degree_[i] += e.weight;
            in_[e.head].push_back(i);
        }
    }
}

Rational Network::weight(Agent i, Agent j) const {
    const auto& row = out_.at(i);
    auto it = std::lower_bound(row.begin(), row.end(), j, [](const Edge& e, Agent a) { return e.head < a; });
    return it != row.end() && it->head == j ? it->weight : Rational{};
}

std::size_t Network::link_count() const noexcept {
    std::size_t m = 0;
    for (const auto& row : out_) m += row.size();
    return m;
}

bool operator==(const Network& a, const Network& b) {
    if (a.size() != b.size()) return false;
    for (Agent i = 0; i < a.size(); ++i) {
        const auto& ra = a.out_[i];
        const auto& rb = b.out_[i];
        if (ra.size() != rb.size()) return false;
        for (std::size_t k = 0; k < ra.size(); ++k)
            if (ra[k].head != rb[k].head || ra[k].weight != rb[k].weight) return false;
    }
    return true;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
        std::size_t end = pos;
        while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
        if (end > pos) out.push_back(line.substr(pos, end - pos));
        pos = end;
    }
    return out;
}

std::size_t parse_count(std::string_view tok, std::size_t line, const char* what) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError(line, std::string("invalid ") + what + " '" + std::string(tok) + "'");
    return v;
}

}  // namespace

Network parse_network(std::string_view text) {
    std::optional<std::size_t> n;
    std::vector<Network::Link> links;
    std::vector<std::pair<Agent, Agent>> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        const auto tokens = split_ws(line);
        if (tokens.empty() || tokens.front().front() == '#') {
            if (end == text.size()) break;
            continue;
        }
        if (!n) {
            if (tokens.size() != 2 || tokens[0] != "n") throw ParseError(line_no, "expected 'n <count>' header");
            n = parse_count(tokens[1], line_no, "node count");
            if (*n == 0) throw ParseError(line_no, "node count must be positive");
        } else {
            if (tokens.size() != 4 || tokens[0] != "e") throw ParseError(line_no, "expected 'e <i> <j> <weight>'");
            const auto i = parse_count(tokens[1], line_no, "node id");
            const auto j = parse_count(tokens[2], line_no, "node id");
            if (i < 1 || i > *n || j < 1 || j > *n) throw ParseError(line_no, "node id out of range");
            if (i == j) throw ParseError(line_no, "self-loop on node " + std::to_string(i));
            Rational w;
            try {
                w = Rational::parse(tokens[3]);
            } catch (const std::exception& e) {
                throw ParseError(line_no, e.what());
            }
            if (w.sign() < 0) throw ParseError(line_no, "negative weight");
            const std::pair<Agent, Agent> key{i - 1, j - 1};
            if (std::find(seen.begin(), seen.end(), key) != seen.end())
                throw ParseError(line_no, "duplicate edge " + std::to_string(i) + " " + std::to_string(j));
            seen.push_back(key);
            links.push_back({i - 1, j - 1, w});
        }
        if (end == text.size()) break;
    }
    if (!n) throw ParseError(line_no, "missing 'n <count>' header");
    return Network(*n, links);
}

std::string serialize_network(const Network& net) {
    std::ostringstream os;
    os << "n " << net.size() << '\n';
    for (Agent i = 0; i < net.size(); ++i)
        for (const auto& e : net.out_edges(i)) os << "e " << i + 1 << ' ' << e.head + 1 << ' ' << e.weight << '\n';
    return os.str();
}

Rational restricted_out_degree(const Network& net, Agent node, std::span<const Agent> subset) {
    if (node >= net.size()) throw ContractError("node id out of range");
    Rational sum;
    for (Agent j : subset) {
        if (j >= net.size()) throw ContractError("subset member out of range");
        sum += net.weight(node, j);
    }
    return sum;
}

SplitWeights split_weights(const Network& net, Agent node, const Configuration& x) {
    if (node >= net.size()) throw ContractError("node id out of range");
    if (x.size() != net.size()) throw ContractError("configuration size mismatch");
    SplitWeights s;
    for (const auto& e : net.out_edges(node)) (x[e.head] == Action::plus ? s.plus : s.minus) += e.weight;
    return s;
}

Rational neighbor_sum(const Network& net, Agent i, const Configuration& x) {
    Rational sum;
    for (const auto& e : net.out_edges(i)) {
        if (x[e.head] == Action::plus)
            sum += e.weight;
        else
            sum -= e.weight;
    }
    return sum;
}

NodeSet make_node_set(std::size_t n, std::span<const Agent> ids) {
    NodeSet s(ids.begin(), ids.end());
    for (Agent a : s)
        if (a >= n) throw ContractError("subset member out of range");
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

}  // namespace ltd
