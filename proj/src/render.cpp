#include "treeunif/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "treeunif/error.hpp"

namespace treeunif {

namespace {

struct Vec {
  double x = 0, y = 0;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string num(double v) { return fmt("%.3f", v); }

std::string color(std::uint32_t id) { return "hsl(" + fmt("%.1f", std::fmod(id * 137.507764, 360.0)) + ",70%,45%)"; }

struct Layout {
  std::vector<Vec> node;
  double scale = 1.0;  // pixels per unit of dd

  Vec at(const MetricTree& T, PointRef p) const {
    if (T.is_node(p)) return node[p.id];
    std::uint32_t e = T.edge_of(p);
    double t = static_cast<double>(T.k_of(p)) / T.grid_size(e);
    const Vec &a = node[T.edge_a(e)], &b = node[T.edge_b(e)];
    return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
  }
};

// Node adjacency as (edge, other) in edge order.
std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> node_adjacency(const MetricTree& T) {
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adj(T.node_count());
  for (std::uint32_t e = 0; e < T.edge_count(); ++e) {
    adj[T.edge_a(e)].push_back({e, T.edge_b(e)});
    adj[T.edge_b(e)].push_back({e, T.edge_a(e)});
  }
  return adj;
}

std::vector<double> edge_sums(const MetricTree& T, const std::vector<double>& len,
                              const std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>& adj,
                              std::uint32_t from, std::vector<std::uint32_t>* parent = nullptr) {
  std::vector<double> d(T.node_count(), -1.0);
  std::vector<std::uint32_t> par(T.node_count(), from), stack{from};
  d[from] = 0.0;
  while (!stack.empty()) {
    std::uint32_t u = stack.back();
    stack.pop_back();
    for (auto [e, v] : adj[u])
      if (d[v] < 0.0) {
        d[v] = d[u] + len[e];
        par[v] = u;
        stack.push_back(v);
      }
  }
  if (parent) *parent = std::move(par);
  return d;
}

Layout make_layout(const MetricTree& T, int size) {
  const std::size_t V = T.node_count();
  auto adj = node_adjacency(T);
  std::vector<double> len(T.edge_count());
  for (std::uint32_t e = 0; e < T.edge_count(); ++e) len[e] = T.dd({T.edge_a(e)}, {T.edge_b(e)});

  // Root at the centre of a longest edge path.
  auto d0 = edge_sums(T, len, adj, 0);
  std::uint32_t u = static_cast<std::uint32_t>(std::max_element(d0.begin(), d0.end()) - d0.begin());
  std::vector<std::uint32_t> par;
  auto du = edge_sums(T, len, adj, u, &par);
  std::uint32_t v = static_cast<std::uint32_t>(std::max_element(du.begin(), du.end()) - du.begin());
  std::uint32_t root = v;
  double best = du[v];
  for (std::uint32_t c = v;; c = par[c]) {
    double ecc = std::max(du[c], du[v] - du[c]);
    if (ecc < best) {
      best = ecc;
      root = c;
    }
    if (c == u) break;
  }

  std::vector<std::uint32_t> order{root}, parent(V, root), pedge(V, 0);
  std::vector<char> seen(V, 0);
  seen[root] = 1;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (auto [e, w] : adj[order[i]])
      if (!seen[w]) {
        seen[w] = 1;
        parent[w] = order[i];
        pedge[w] = e;
        order.push_back(w);
      }
  std::vector<double> leaves(V, 0.0);
  for (std::size_t i = order.size(); i-- > 0;) {
    std::uint32_t w = order[i];
    if (leaves[w] == 0.0) leaves[w] = 1.0;
    if (w != root) leaves[parent[w]] += leaves[w];
  }
  std::vector<double> lo(V, 0.0), hi(V, 2 * std::numbers::pi);
  Layout L;
  L.node.assign(V, {});
  auto is_child = [&](std::uint32_t w, std::uint32_t e, std::uint32_t c) {
    return c != root && parent[c] == w && pedge[c] == e;
  };
  for (std::uint32_t w : order) {
    double total = 0.0;
    for (auto [e, c] : adj[w])
      if (is_child(w, e, c)) total += leaves[c];
    double a = lo[w], span = hi[w] - lo[w];
    for (auto [e, c] : adj[w]) {
      if (!is_child(w, e, c)) continue;
      lo[c] = a;
      hi[c] = a + span * leaves[c] / total;
      a = hi[c];
      double theta = (lo[c] + hi[c]) / 2;
      L.node[c] = {L.node[w].x + len[e] * std::cos(theta), L.node[w].y + len[e] * std::sin(theta)};
    }
  }
  double minx = 0, maxx = 0, miny = 0, maxy = 0;
  for (const Vec& p : L.node) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  const double margin = 60.0, avail = size - 2 * margin;
  const double extent = std::max({maxx - minx, maxy - miny, 1e-12});
  L.scale = avail / extent;
  const double ox = margin + (avail - (maxx - minx) * L.scale) / 2, oy = margin + (avail - (maxy - miny) * L.scale) / 2;
  for (Vec& p : L.node) p = {ox + (p.x - minx) * L.scale, oy + (p.y - miny) * L.scale};
  return L;
}

}  // namespace

std::string render_svg(const TileDecomposition& decomp, const WeightAssignment& wa, int level, const SvgStyle& style) {
  if (level < 0 || level > decomp.depth())
    throw Error(Errc::LevelOutOfRange, "level " + std::to_string(level) + " not built");
  const MetricTree& T = decomp.tree();
  const Layout L = make_layout(T, style.size);
  const auto tiles = decomp.level_tiles(level);
  const std::string sz = std::to_string(style.size);

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + sz + "\" height=\"" + sz + "\" viewBox=\"0 0 " + sz +
       " " + sz + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<g stroke-linecap=\"round\" stroke-width=\"" + num(style.stroke) + "\">\n";
  for (std::uint32_t t : tiles) {
    const std::string c = color(t);
    for (const Segment& seg : decomp.tile(t).segments) {
      Vec a = L.at(T, T.edge_point(seg.edge, seg.from_k)), b = L.at(T, T.edge_point(seg.edge, seg.to_k));
      s += "<line x1=\"" + num(a.x) + "\" y1=\"" + num(a.y) + "\" x2=\"" + num(b.x) + "\" y2=\"" + num(b.y) +
           "\" stroke=\"" + c + "\"/>\n";
    }
  }
  s += "</g>\n<g fill=\"black\">\n";
  for (PointRef v : decomp.vertices(level)) {
    Vec p = L.at(T, v);
    s += "<circle cx=\"" + num(p.x) + "\" cy=\"" + num(p.y) + "\" r=\"3.000\"/>\n";
  }
  s += "</g>\n<g fill=\"none\" stroke-width=\"1.500\">\n";
  std::size_t arcs = 0;
  for (std::uint32_t t : tiles)
    if (wa.main[t]) ++arcs;
  std::string labels;
  for (std::uint32_t t : tiles) {
    if (!wa.main[t]) continue;
    const std::string c = color(t);
    Vec p = L.at(T, wa.main[t]->first), q = L.at(T, wa.main[t]->second);
    for (Vec m : {p, q})
      s += "<circle cx=\"" + num(m.x) + "\" cy=\"" + num(m.y) + "\" r=\"6.000\" stroke=\"" + c + "\"/>\n";
    if (arcs <= static_cast<std::size_t>(style.max_labels))
      labels += "<text x=\"" + num((p.x + q.x) / 2) + "\" y=\"" + num((p.y + q.y) / 2 - 8) + "\" fill=\"" + c +
                "\">" + to_fraction_string(wa.lambda[t]) + "</text>\n";
  }
  s += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">\n" + labels + "</g>\n";

  const double bar = 0.1 * L.scale, y = style.size - 24.0;
  s += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<text x=\"20.000\" y=\"24.000\">level " + std::to_string(level) + ", " + std::to_string(tiles.size()) +
       " tiles, " + std::to_string(decomp.vertices(level).size()) + " vertices</text>\n";
  s += "<line x1=\"20.000\" y1=\"" + num(y) + "\" x2=\"" + num(20.0 + bar) + "\" y2=\"" + num(y) +
       "\" stroke=\"black\" stroke-width=\"2.000\"/>\n";
  s += "<text x=\"20.000\" y=\"" + num(y - 6) + "\">dd 0.1 (edge lengths drawn as dd between end nodes)</text>\n";
  s += "</g>\n</svg>\n";
  return s;
}

}  // namespace treeunif
