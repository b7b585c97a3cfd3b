#include "treeunif/generators.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "treeunif/error.hpp"

namespace treeunif {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

template <class T>
T parse_number(const std::string& s, const char* what) {
  std::istringstream is(s);
  T v{};
  if (!(is >> v) || !is.eof()) throw Error(Errc::InvalidInput, std::string("bad ") + what + ": '" + s + "'");
  return v;
}

}  // namespace

GeneratorSpec parse_generator(const std::string& text) {
  GeneratorSpec g;
  std::string body = text;
  if (auto at = text.find('@'); at != std::string::npos) {
    body = text.substr(0, at);
    g.resolution = parse_number<int>(text.substr(at + 1), "resolution");
    if (g.resolution < 1) throw Error(Errc::InvalidInput, "resolution must be positive");
  }
  auto parts = split(body, ':');
  if (parts.empty()) throw Error(Errc::InvalidInput, "empty generator spec");
  const std::string& f = parts[0];
  if (f == "segment" && parts.size() == 1) {
    g.family = Family::Segment;
  } else if (f == "snowflake" && parts.size() == 2) {
    g.family = Family::Snowflake;
    g.epsilon_s = parse_number<double>(parts[1], "snowflake exponent");
    if (!(g.epsilon_s > 0.0 && g.epsilon_s <= 1.0)) throw Error(Errc::EpsilonOutOfRange, "snowflake exponent must lie in (0,1]");
  } else if (f == "csst" && parts.size() == 2) {
    g.family = Family::Csst;
    g.depth = parse_number<int>(parts[1], "csst depth");
    if (g.depth < 1 || g.depth > 8) throw Error(Errc::InvalidInput, "csst depth must lie in 1..8");
  } else if (f == "random" && (parts.size() == 3 || parts.size() == 4)) {
    g.family = Family::Random;
    g.nodes = parse_number<int>(parts[1], "node count");
    g.seed = parse_number<std::uint64_t>(parts[2], "seed");
    if (g.nodes < 2) throw Error(Errc::InvalidInput, "random tree needs at least 2 nodes");
    if (parts.size() == 4) {
      if (parts[3] == "uniform")
        g.law = LengthLaw::Uniform;
      else if (parts[3] == "unit")
        g.law = LengthLaw::Unit;
      else if (parts[3] == "exp")
        g.law = LengthLaw::Exponential;
      else
        throw Error(Errc::InvalidInput, "unknown length law '" + parts[3] + "'");
    }
  } else {
    throw Error(Errc::InvalidInput, "unknown generator '" + text + "'");
  }
  return g;
}

std::string to_string(const GeneratorSpec& g) {
  std::ostringstream os;
  switch (g.family) {
    case Family::Segment: os << "segment"; break;
    case Family::Snowflake: os << "snowflake:" << g.epsilon_s; break;
    case Family::Csst: os << "csst:" << g.depth; break;
    case Family::Random:
      os << "random:" << g.nodes << ":" << g.seed << ":"
         << (g.law == LengthLaw::Uniform ? "uniform" : g.law == LengthLaw::Unit ? "unit" : "exp");
      break;
  }
  if (g.resolution > 0) os << "@" << g.resolution;
  return os.str();
}

int default_resolution(const GeneratorSpec& g) {
  switch (g.family) {
    case Family::Segment: return 4096;
    case Family::Snowflake: return 8192;
    case Family::Csst: return 2048;
    case Family::Random: return 2048;
  }
  return 2048;
}

TreeSpec generate_spec(const GeneratorSpec& g) {
  TreeSpec t;
  t.resolution = g.resolution > 0 ? g.resolution : default_resolution(g);
  switch (g.family) {
    case Family::Segment:
    case Family::Snowflake:
      t.nodes = {"a", "b"};
      t.edges = {{0, 1, 1.0}};
      if (g.family == Family::Snowflake) {
        t.mode = MetricMode::Snowflake;
        t.epsilon_s = g.epsilon_s;
      }
      break;
    case Family::Csst: {
      // Tripod with unit legs; every round replaces each edge by a tripod
      // of three half-length legs glued at its midpoint.
      t.nodes = {"c", "l0", "l1", "l2"};
      t.edges = {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}};
      for (int d = 1; d < g.depth; ++d) {
        std::vector<EdgeSpec> next;
        for (const auto& e : t.edges) {
          std::size_t m = t.nodes.size();
          t.nodes.push_back("m" + std::to_string(m));
          std::size_t l = t.nodes.size();
          t.nodes.push_back("t" + std::to_string(l));
          double h = e.length / 2;
          next.push_back({e.a, m, h});
          next.push_back({m, e.b, h});
          next.push_back({m, l, h});
        }
        t.edges = std::move(next);
      }
      break;
    }
    case Family::Random: {
      std::mt19937_64 rng(g.seed);
      for (int i = 0; i < g.nodes; ++i) t.nodes.push_back("v" + std::to_string(i));
      for (int i = 1; i < g.nodes; ++i) {
        auto j = static_cast<std::size_t>(unit_draw(rng) * i);
        double u = unit_draw(rng), len = 1.0;
        if (g.law == LengthLaw::Uniform) len = 0.5 + u;
        if (g.law == LengthLaw::Exponential) len = 0.1 - std::log1p(-u);
        t.edges.push_back({j, static_cast<std::size_t>(i), len});
      }
      break;
    }
  }
  return t;
}

TreePtr generate(const GeneratorSpec& g) { return MetricTree::build(generate_spec(g)); }

}  // namespace treeunif
