#pragma once

// Test-only reference computations. They work from a tree's edge list and
// plain loops, independent of the library's own path and scoring code.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include "ncdlab/dendrogram.hpp"

namespace oracle {

/// Edges between two leaves, by BFS over the edge list.
inline int path_edges(const ncdlab::Dendrogram& t, const std::string& a, const std::string& b) {
    std::map<int, std::vector<int>> adj;
    for (auto [u, v] : t.edges()) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    const auto& labels = t.labels();
    const int src = static_cast<int>(std::find(labels.begin(), labels.end(), a) - labels.begin());
    const int dst = static_cast<int>(std::find(labels.begin(), labels.end(), b) - labels.begin());
    std::map<int, int> dist{{src, 0}};
    std::queue<int> q;
    q.push(src);
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        for (int w : adj[v]) {
            if (!dist.count(w)) {
                dist[w] = dist[v] + 1;
                q.push(w);
            }
        }
    }
    return dist.at(dst);
}

/// Which pairing of {a,b,c,d} the tree induces: 0 = ab|cd, 1 = ac|bd, 2 = ad|bc.
inline int induced_pairing(const ncdlab::Dendrogram& t, const std::array<std::string, 4>& q) {
    const int s0 = path_edges(t, q[0], q[1]) + path_edges(t, q[2], q[3]);
    const int s1 = path_edges(t, q[0], q[2]) + path_edges(t, q[1], q[3]);
    const int s2 = path_edges(t, q[0], q[3]) + path_edges(t, q[1], q[2]);
    if (s0 < s1 && s0 < s2) return 0;
    if (s1 < s0 && s1 < s2) return 1;
    return 2;
}

/// Raw quartet cost of a tree under distance function d(label, label).
template <class D>
double quartet_raw(const ncdlab::Dendrogram& t, const std::vector<std::string>& labels, D d) {
    const auto n = labels.size();
    double raw = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c)
                for (std::size_t e = c + 1; e < n; ++e) {
                    const auto& A = labels[a];
                    const auto& B = labels[b];
                    const auto& C = labels[c];
                    const auto& E = labels[e];
                    const double cost[3] = {d(A, B) + d(C, E), d(A, C) + d(B, E), d(A, E) + d(B, C)};
                    raw += cost[induced_pairing(t, {A, B, C, E})];
                }
    return raw;
}

inline double mean(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double sample_std(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

inline long double_factorial(long k) {
    long r = 1;
    for (; k > 1; k -= 2) r *= k;
    return r;
}

}  // namespace oracle
