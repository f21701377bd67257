#pragma once

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "psearch/instance.hpp"

namespace psearch {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view strip_comment(std::string_view line) {
    auto pos = line.find('#');
    if (pos != std::string_view::npos) line = line.substr(0, pos);
    return line;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t begin = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(begin, i - begin));
            begin = i + 1;
        }
    }
    return out;
}

inline double parse_double(std::string_view token, const std::string& context) {
    std::string t(trim(token));
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(t, &used);
    } catch (const std::exception&) {
        throw ParseError(context + ": expected a number, got '" + t + "'");
    }
    if (used != t.size()) throw ParseError(context + ": trailing characters in '" + t + "'");
    return value;
}

inline long long parse_id(std::string_view token, const std::string& context) {
    std::string t(trim(token));
    std::size_t used = 0;
    long long value = 0;
    try {
        value = std::stoll(t, &used);
    } catch (const std::exception&) {
        throw ParseError(context + ": expected a vertex id, got '" + t + "'");
    }
    if (used != t.size() || value < 0) throw ParseError(context + ": invalid vertex id '" + t + "'");
    return value;
}

// Shortest decimal form that round-trips the exact double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
        std::sscanf(shorter, "%lf", &back);
        if (back == v) return shorter;
    }
    return buf;
}

} // namespace detail

// Parses the two-file on-disk instance format.
//
// Graph file: '#' comments, one undirected edge per line: "u v w" with
// nonnegative integer ids and a positive decimal weight. The vertex set is
// the set of edge endpoints.
//
// Sites file: one header line "start: <id>" plus site lines
// "v: c1@p1, c2@p2, ...". Vertices without a site line get an empty tier
// list. Ids are normalized to dense 0-based indices (ascending id order);
// the original ids are retained for output.
inline Instance load_instance(const std::string& graph_text, const std::string& sites_text,
                              const InstanceOptions& options = {}) {
    std::vector<std::pair<long long, std::pair<long long, double>>> raw_edges;
    std::vector<long long> ids;

    int lineno = 0;
    std::istringstream gin(graph_text);
    for (std::string line; std::getline(gin, line);) {
        ++lineno;
        std::string_view body = detail::trim(detail::strip_comment(line));
        if (body.empty()) continue;
        std::string context = "graph line " + std::to_string(lineno);
        std::istringstream ls{std::string(body)};
        std::string ustr, vstr, wstr, extra;
        if (!(ls >> ustr >> vstr >> wstr) || (ls >> extra)) {
            throw ParseError(context + ": expected 'u v w'");
        }
        long long u = detail::parse_id(ustr, context);
        long long v = detail::parse_id(vstr, context);
        double w = detail::parse_double(wstr, context);
        if (w <= 0.0) throw ParseError(context + ": nonpositive weight");
        if (u == v) throw ParseError(context + ": self-loop");
        raw_edges.push_back({u, {v, w}});
        ids.push_back(u);
        ids.push_back(v);
    }

    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    auto dense = [&](long long ext, const std::string& context) -> int {
        auto it = std::lower_bound(ids.begin(), ids.end(), ext);
        if (it == ids.end() || *it != ext) {
            throw ParseError(context + ": unknown vertex " + std::to_string(ext));
        }
        return static_cast<int>(it - ids.begin());
    };

    bool have_start = false;
    long long start_ext = 0;
    std::vector<std::vector<Tier>> tiers(ids.size());
    std::vector<bool> seen_site(ids.size(), false);

    lineno = 0;
    std::istringstream sin(sites_text);
    for (std::string line; std::getline(sin, line);) {
        ++lineno;
        std::string_view body = detail::trim(detail::strip_comment(line));
        if (body.empty()) continue;
        std::string context = "sites line " + std::to_string(lineno);
        auto colon = body.find(':');
        if (colon == std::string_view::npos) throw ParseError(context + ": expected ':'");
        std::string_view head = detail::trim(body.substr(0, colon));
        std::string_view rest = detail::trim(body.substr(colon + 1));
        if (head == "start") {
            if (have_start) throw ParseError(context + ": duplicate start line");
            have_start = true;
            start_ext = detail::parse_id(rest, context);
            continue;
        }
        long long ext = detail::parse_id(head, context);
        int v = dense(ext, context);
        if (seen_site[v]) throw ParseError(context + ": duplicate site line for vertex " + std::to_string(ext));
        seen_site[v] = true;
        if (rest.empty()) continue;
        for (std::string_view entry : detail::split(rest, ',')) {
            entry = detail::trim(entry);
            if (entry.empty()) throw ParseError(context + ": empty tier entry");
            auto at = entry.find('@');
            if (at == std::string_view::npos) throw ParseError(context + ": expected 'cost@prob'");
            double c = detail::parse_double(entry.substr(0, at), context);
            double p = detail::parse_double(entry.substr(at + 1), context);
            tiers[v].push_back({c, p});
        }
    }
    if (!have_start) throw ParseError("sites file: missing start line");
    if (ids.empty()) throw ParseError("graph file: no edges");

    std::vector<Edge> edges;
    edges.reserve(raw_edges.size());
    for (std::size_t i = 0; i < raw_edges.size(); ++i) {
        const auto& [u, vw] = raw_edges[i];
        edges.push_back({dense(u, "graph"), dense(vw.first, "graph"), vw.second});
    }

    auto sit = std::lower_bound(ids.begin(), ids.end(), start_ext);
    if (sit == ids.end() || *sit != start_ext) {
        throw ParseError("sites file: start vertex " + std::to_string(start_ext) +
                         " is not present in the graph");
    }
    int start = static_cast<int>(sit - ids.begin());

    Instance inst = make_instance(static_cast<int>(ids.size()), start, edges, std::move(tiers), options);
    inst.external_ids = std::move(ids);
    return inst;
}

inline std::string write_graph(const Instance& inst) {
    std::string out = "# u v w\n";
    for (const Edge& e : inst.edges) {
        out += std::to_string(inst.external_id(e.u)) + ' ' + std::to_string(inst.external_id(e.v)) +
               ' ' + detail::format_double(e.weight) + '\n';
    }
    return out;
}

inline std::string write_sites(const Instance& inst) {
    std::string out = "start: " + std::to_string(inst.external_id(inst.start)) + '\n';
    for (int v = 0; v < inst.vertex_count(); ++v) {
        const Site& s = inst.sites[v];
        if (s.tiers.empty()) continue;
        out += std::to_string(inst.external_id(v)) + ": ";
        for (std::size_t i = 0; i < s.tiers.size(); ++i) {
            if (i) out += ", ";
            out += detail::format_double(s.tiers[i].cost) + '@' + detail::format_double(s.tiers[i].prob);
        }
        out += '\n';
    }
    return out;
}

// Comma- or space-separated list of external vertex ids.
inline std::vector<int> parse_walk_ids(const Instance& inst, const std::string& text) {
    std::vector<int> verts;
    std::string token;
    for (char c : text + ",") {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!token.empty()) {
                verts.push_back(inst.dense_id(detail::parse_id(token, "walk")));
                token.clear();
            }
        } else {
            token += c;
        }
    }
    if (verts.empty()) throw ParseError("walk: no vertices given");
    return verts;
}

} // namespace psearch
