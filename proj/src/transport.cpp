#include "mdpa/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mdpa {

namespace {

struct Arc {
    int i, j;
    double flow;
};

}  // namespace

double transport_cost(std::span<const double> supply, std::span<const double> demand,
                      std::span<const double> cost) {
    const int n = static_cast<int>(supply.size());
    const int m = static_cast<int>(demand.size());
    if (cost.size() != static_cast<size_t>(n) * m)
        throw std::invalid_argument("transport cost matrix size mismatch");

    double sa = 0.0, sb = 0.0;
    for (double x : supply) {
        if (!(x >= 0.0)) throw std::invalid_argument("transport masses must be >= 0");
        sa += x;
    }
    for (double x : demand) {
        if (!(x >= 0.0)) throw std::invalid_argument("transport masses must be >= 0");
        sb += x;
    }
    if (std::abs(sa - sb) > 1e-9)
        throw std::invalid_argument("transport masses must balance");
    if (sa == 0.0) return 0.0;
    double cost_scale = 1.0;
    for (double c : cost) {
        if (!(c >= 0.0) || !std::isfinite(c))
            throw std::invalid_argument("transport ground costs must be finite and >= 0");
        cost_scale = std::max(cost_scale, c);
    }

    // Balance exactly and drop zero-mass points.
    std::vector<double> a, b;
    std::vector<int> ai, bj;  // original indices for cost lookup
    for (int i = 0; i < n; ++i)
        if (supply[i] > 0.0) {
            a.push_back(supply[i]);
            ai.push_back(i);
        }
    const double rescale = sa / sb;
    for (int j = 0; j < m; ++j)
        if (demand[j] > 0.0) {
            b.push_back(demand[j] * rescale);
            bj.push_back(j);
        }
    const int ns = static_cast<int>(a.size());
    const int nd = static_cast<int>(b.size());
    auto c_at = [&](int i, int j) { return cost[static_cast<size_t>(ai[i]) * m + bj[j]]; };

    // Northwest-corner initial basis: exactly ns + nd - 1 arcs forming a
    // spanning tree of the bipartite graph (zero flows keep degenerate trees
    // connected).
    std::vector<Arc> basis;
    basis.reserve(ns + nd - 1);
    {
        std::vector<double> ra = a, rb = b;
        int i = 0, j = 0;
        while (true) {
            double f = std::max(0.0, std::min(ra[i], rb[j]));
            basis.push_back({i, j, f});
            ra[i] -= f;
            rb[j] -= f;
            if (i == ns - 1 && j == nd - 1) break;
            if (i < ns - 1 && ra[i] <= rb[j])
                ++i;
            else
                ++j;
        }
    }

    const double enter_tol = 1e-12 * cost_scale;
    const long max_pivots = 1000L * (ns + nd) * (ns + nd) + 1000;
    std::vector<double> pot(ns + nd);  // node potentials (supply 0..ns-1, demand ns..)
    std::vector<int> order(ns + nd);   // tree traversal scratch

    for (long pivot = 0;; ++pivot) {
        if (pivot > max_pivots)
            throw std::runtime_error("transport solver exceeded its pivot budget");

        // Node potentials from the basis tree: pot_i + pot_j = c(i, j) on arcs.
        std::vector<std::vector<int>> adj(ns + nd);
        for (int k = 0; k < static_cast<int>(basis.size()); ++k) {
            adj[basis[k].i].push_back(k);
            adj[ns + basis[k].j].push_back(k);
        }
        std::vector<char> seen(ns + nd, 0);
        pot[0] = 0.0;
        seen[0] = 1;
        int head = 0, tail = 0;
        order[tail++] = 0;
        while (head < tail) {
            int node = order[head++];
            for (int k : adj[node]) {
                int other = node < ns ? ns + basis[k].j : basis[k].i;
                if (seen[other]) continue;
                seen[other] = 1;
                pot[other] = c_at(basis[k].i, basis[k].j) - pot[node];
                order[tail++] = other;
            }
        }

        // Entering arc: first (row-major) nonbasic arc with negative reduced
        // cost. Bland's rule, so degenerate pivots cannot cycle.
        int ei = -1, ej = -1;
        for (int i = 0; i < ns && ei < 0; ++i)
            for (int j = 0; j < nd; ++j) {
                if (c_at(i, j) - pot[i] - pot[ns + j] < -enter_tol) {
                    bool basic = false;
                    for (const Arc& arc : basis)
                        if (arc.i == i && arc.j == j) {
                            basic = true;
                            break;
                        }
                    if (!basic) {
                        ei = i;
                        ej = j;
                        break;
                    }
                }
            }
        if (ei < 0) break;  // optimal

        // Unique tree path from the entering arc's demand node back to its
        // supply node; cycle signs alternate starting with - on the arc
        // touching the demand node.
        std::vector<int> path;  // arc indices along the path
        {
            std::fill(seen.begin(), seen.end(), 0);
            std::vector<int> from(ns + nd, -1);
            seen[ei] = 1;
            head = 0;
            tail = 0;
            order[tail++] = ei;
            while (head < tail) {
                int node = order[head++];
                if (node == ns + ej) break;
                for (int k : adj[node]) {
                    int other = node < ns ? ns + basis[k].j : basis[k].i;
                    if (seen[other]) continue;
                    seen[other] = 1;
                    from[other] = k;
                    order[tail++] = other;
                }
            }
            int node = ns + ej;
            while (node != ei) {
                int k = from[node];
                path.push_back(k);
                node = (node < ns) ? ns + basis[k].j : basis[k].i;
            }
        }

        // Ratio test over the arcs that lose flow (odd positions walking from
        // the entering arc), smallest index on ties.
        double delta = std::numeric_limits<double>::infinity();
        int leaving = -1;
        for (size_t pos = 0; pos < path.size(); pos += 2) {
            const Arc& arc = basis[path[pos]];
            long long arc_id = static_cast<long long>(arc.i) * nd + arc.j;
            long long best_id = leaving < 0 ? -1
                                            : static_cast<long long>(basis[leaving].i) * nd +
                                                  basis[leaving].j;
            if (arc.flow < delta || (arc.flow == delta && (leaving < 0 || arc_id < best_id))) {
                delta = arc.flow;
                leaving = path[pos];
            }
        }
        for (size_t pos = 0; pos < path.size(); ++pos)
            basis[path[pos]].flow += (pos % 2 == 0) ? -delta : delta;
        basis[leaving] = {ei, ej, delta};
    }

    double total = 0.0;
    for (const Arc& arc : basis) total += arc.flow * c_at(arc.i, arc.j);
    return total;
}

}  // namespace mdpa
