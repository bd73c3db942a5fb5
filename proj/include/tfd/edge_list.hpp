#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "tfd/digraph.hpp"

namespace tfd {

// Plain-text interchange format:
//   - an optional run of comment lines starting with '#'
//   - a header line "n m"
//   - exactly m lines "u v", one directed edge u -> v each
// Comment lines may appear anywhere; tokens are whitespace-separated
// decimal integers.
struct EdgeListLoad {
    Digraph graph;
    std::size_t duplicates_collapsed = 0;
};

inline EdgeListLoad load_edge_list(std::istream& is) {
    long line_no = 0;
    std::string line;
    auto next_fields = [&](const char* what) -> std::istringstream {
        while (std::getline(is, line)) {
            ++line_no;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos) continue;
            if (line[first] == '#') continue;
            return std::istringstream(line);
        }
        throw parse_error(std::string("unexpected end of file, expected ") + what, line_no + 1);
    };
    auto read_pair = [&](const char* what) -> std::pair<long long, long long> {
        std::istringstream fields = next_fields(what);
        long long a = 0, b = 0;
        std::string extra;
        if (!(fields >> a >> b) || (fields >> extra))
            throw parse_error(std::string("expected two integers (") + what + "), got \"" + line +
                                  "\"",
                              line_no);
        return {a, b};
    };

    const auto [n, m] = read_pair("header \"n m\"");
    if (n < 0 || m < 0) throw parse_error("header counts must be non-negative", line_no);

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
        const auto [u, v] = read_pair("an edge line \"u v\"");
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw parse_error("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                  ") outside vertex range 0.." + std::to_string(n - 1),
                              line_no);
        if (u == v) throw parse_error("self-loop at vertex " + std::to_string(u), line_no);
        edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
    while (std::getline(is, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        throw parse_error("trailing content after the declared " + std::to_string(m) + " edges",
                          line_no);
    }

    EdgeListLoad out;
    Digraph::BuildReport report;
    out.graph = Digraph::build(static_cast<int>(n), std::move(edges), &report);
    out.duplicates_collapsed = report.duplicates_collapsed;
    return out;
}

inline EdgeListLoad load_edge_list_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw parse_error("cannot open \"" + path + "\"", 0);
    return load_edge_list(is);
}

inline void save_edge_list(const Digraph& g, std::ostream& os) {
    os << g.n() << ' ' << g.m() << '\n';
    for (const auto& [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

inline void save_edge_list_file(const Digraph& g, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw validation_error("cannot write \"" + path + "\"");
    save_edge_list(g, os);
    os.flush();
    if (!os) throw validation_error("write to \"" + path + "\" failed");
}

} // namespace tfd
