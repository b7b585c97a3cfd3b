#include "treeunif/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "treeunif/error.hpp"

namespace treeunif {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(Errc::InvalidInput, msg); }

std::string node_name(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  bad("node ids must be strings or integers");
}

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

MetricMode mode_from(const std::string& s) {
  if (s == "geodesic") return MetricMode::Geodesic;
  if (s == "snowflake") return MetricMode::Snowflake;
  if (s == "table") return MetricMode::Table;
  bad("unknown metric mode '" + s + "'");
}

const char* to_string(Family f) {
  switch (f) {
    case Family::Segment: return "segment";
    case Family::Snowflake: return "snowflake";
    case Family::Csst: return "csst";
    case Family::Random: return "random";
  }
  return "?";
}

const char* to_string(LengthLaw l) {
  switch (l) {
    case LengthLaw::Uniform: return "uniform";
    case LengthLaw::Unit: return "unit";
    case LengthLaw::Exponential: return "exp";
  }
  return "?";
}

Json point_list(const std::vector<PointRef>& ps) {
  Json a = Json::array();
  for (PointRef p : ps) a.push_back(p.id);
  return a;
}

std::vector<PointRef> points_from(const Json& a) {
  std::vector<PointRef> out;
  for (const auto& v : a) out.push_back({v.get<std::uint32_t>()});
  return out;
}

}  // namespace

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json tree_to_json(const TreeSpec& spec) {
  Json j;
  j["nodes"] = spec.nodes;
  Json edges = Json::array();
  for (const auto& e : spec.edges) {
    Json ej;
    ej["a"] = spec.nodes.at(e.a);
    ej["b"] = spec.nodes.at(e.b);
    ej["length"] = e.length;
    edges.push_back(std::move(ej));
  }
  j["edges"] = std::move(edges);
  Json m;
  m["mode"] = to_string(spec.mode);
  if (spec.mode == MetricMode::Snowflake) m["epsilon_s"] = spec.epsilon_s;
  if (spec.mode == MetricMode::Table) m["table"] = spec.table;
  j["metric"] = std::move(m);
  j["resolution"] = spec.resolution;
  return j;
}

Json generator_to_json(const GeneratorSpec& g) {
  Json j;
  j["family"] = to_string(g.family);
  switch (g.family) {
    case Family::Segment: break;
    case Family::Snowflake: j["epsilon_s"] = g.epsilon_s; break;
    case Family::Csst: j["depth"] = g.depth; break;
    case Family::Random:
      j["nodes"] = g.nodes;
      j["seed"] = g.seed;
      j["law"] = to_string(g.law);
      break;
  }
  if (g.resolution > 0) j["resolution"] = g.resolution;
  return j;
}

GeneratorSpec generator_from_json(const Json& j) {
  if (j.is_string()) return parse_generator(j.get<std::string>());
  std::string fam = require(j, "family").get<std::string>();
  std::string text = fam;
  if (fam == "snowflake") {
    std::ostringstream os;
    os.precision(17);
    os << require(j, "epsilon_s").get<double>();
    text += ":" + os.str();
  } else if (fam == "csst") {
    text += ":" + std::to_string(require(j, "depth").get<int>());
  } else if (fam == "random") {
    text += ":" + std::to_string(require(j, "nodes").get<int>()) + ":" +
            std::to_string(require(j, "seed").get<std::uint64_t>());
    if (j.contains("law")) text += ":" + j.at("law").get<std::string>();
  }
  if (j.contains("resolution")) text += "@" + std::to_string(j.at("resolution").get<int>());
  return parse_generator(text);
}

TreeSpec tree_spec_from_json(const Json& j) {
  try {
    if (j.is_object() && j.contains("generate")) return generate_spec(generator_from_json(j.at("generate")));
    TreeSpec t;
    std::map<std::string, std::size_t> index;
    for (const auto& v : require(j, "nodes")) {
      std::string name = node_name(v);
      if (!index.emplace(name, t.nodes.size()).second) bad("duplicate node id '" + name + "'");
      t.nodes.push_back(name);
    }
    for (const auto& e : require(j, "edges")) {
      auto end = [&](const char* key) {
        std::string name = node_name(require(e, key));
        auto it = index.find(name);
        if (it == index.end()) bad("edge refers to unknown node '" + name + "'");
        return it->second;
      };
      EdgeSpec es;
      es.a = end("a");
      es.b = end("b");
      es.length = e.contains("length") ? e.at("length").get<double>() : 1.0;
      t.edges.push_back(es);
    }
    if (j.contains("metric")) {
      const Json& m = j.at("metric");
      t.mode = mode_from(require(m, "mode").get<std::string>());
      if (t.mode == MetricMode::Snowflake) t.epsilon_s = require(m, "epsilon_s").get<double>();
      if (t.mode == MetricMode::Table) {
        for (const auto& row : require(m, "table")) {
          std::vector<double> r;
          for (const auto& v : row) r.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
          t.table.push_back(std::move(r));
        }
      }
    }
    if (j.contains("resolution")) t.resolution = j.at("resolution").get<int>();
    return t;
  } catch (const Json::exception& e) {
    bad(std::string("malformed tree JSON: ") + e.what());
  }
}

TreeSpec read_tree_file(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    bad(path + ": " + e.what());
  }
  return tree_spec_from_json(j);
}

Json decomposition_to_json(const TileDecomposition& decomp, const WeightAssignment& wa) {
  Json j;
  j["tree"] = tree_to_json(decomp.tree().spec());
  const auto& hp = decomp.params();
  Json p;
  p["beta"] = hp.beta;
  p["gamma"] = hp.gamma;
  p["delta"] = hp.delta;
  p["depth"] = hp.depth;
  j["params"] = std::move(p);
  j["eps0"] = to_fraction_string(wa.eps0);
  j["K"] = wa.K;
  Json levels = Json::array();
  for (int n = 0; n <= decomp.depth(); ++n) {
    Json lv;
    lv["level"] = n;
    lv["vertices"] = point_list(decomp.vertices(n));
    Json tiles = Json::array();
    for (std::uint32_t t : decomp.level_tiles(n)) {
      const Tile& X = decomp.tile(t);
      Json tj;
      tj["id"] = X.id;
      tj["level"] = X.level;
      tj["kind"] = to_string(X.kind);
      tj["boundary"] = point_list(X.boundary);
      tj["parent"] = X.parent ? Json(*X.parent) : Json(nullptr);
      Json segs = Json::array();
      for (const auto& s : X.segments) segs.push_back(Json::array({s.edge, s.from_k, s.to_k}));
      tj["segments"] = std::move(segs);
      tiles.push_back(std::move(tj));
    }
    lv["tiles"] = std::move(tiles);
    levels.push_back(std::move(lv));
  }
  j["levels"] = std::move(levels);
  Json ws = Json::array();
  for (std::uint32_t t = 0; t < decomp.tile_count(); ++t) {
    Json w;
    w["tile_id"] = t;
    w["weight"] = to_fraction_string(wa.weight[t]);
    if (wa.main[t]) w["main"] = Json::array({wa.main[t]->first.id, wa.main[t]->second.id});
    ws.push_back(std::move(w));
  }
  j["weights"] = std::move(ws);
  return j;
}

LoadedDecomposition decomposition_from_json(const Json& j) {
  try {
    TreePtr tree = MetricTree::build(tree_spec_from_json(require(j, "tree")));
    const Json& p = require(j, "params");
    HierarchyParams hp;
    hp.beta = require(p, "beta").get<double>();
    hp.gamma = require(p, "gamma").get<double>();
    hp.delta = require(p, "delta").get<double>();
    hp.depth = require(p, "depth").get<int>();
    std::vector<std::vector<PointRef>> sets;
    const Json& levels = require(j, "levels");
    for (const auto& lv : levels)
      if (require(lv, "level").get<int>() > 0) sets.push_back(points_from(require(lv, "vertices")));
    DecompPtr d = TileDecomposition::from_vertex_sets(tree, hp, std::move(sets));
    Rational eps0 = parse_rational(require(j, "eps0").get<std::string>());
    auto wa = std::make_shared<WeightAssignment>(assign_weights(*d, eps0));
    Json again = decomposition_to_json(*d, *wa);
    if (again["levels"] != levels) bad("stored tiles do not match the rebuilt decomposition");
    if (again["weights"] != require(j, "weights")) bad("stored weights do not match the rebuilt assignment");
    return {d, wa};
  } catch (const Json::exception& e) {
    bad(std::string("malformed decomposition JSON: ") + e.what());
  }
}

Json skeleton_to_json(const GeodesicSkeleton& sk) {
  Json j;
  j["vertices"] = point_list(sk.vertices);
  Json edges = Json::array();
  for (const auto& e : sk.edges) {
    Json ej;
    ej["a"] = e.a.id;
    ej["b"] = e.b.id;
    ej["length"] = to_fraction_string(e.length);
    ej["exact"] = e.exact;
    ej["slack"] = to_fraction_string(e.slack);
    ej["tile"] = e.tile;
    edges.push_back(std::move(ej));
  }
  j["edges"] = std::move(edges);
  return j;
}

std::string skeleton_to_dot(const GeodesicSkeleton& sk, const MetricTree& tree) {
  std::ostringstream os;
  os << "graph skeleton {\n";
  for (PointRef v : sk.vertices) os << "  p" << v.id << " [label=\"" << tree.describe(v) << "\"];\n";
  for (const auto& e : sk.edges)
    os << "  p" << e.a.id << " -- p" << e.b.id << " [label=\"" << to_fraction_string(e.length) << "\""
       << (e.exact ? "" : ", style=dashed") << "];\n";
  os << "}\n";
  return os.str();
}

Json check_to_json(const CheckResult& c) {
  Json j;
  j["name"] = c.name;
  j["ok"] = c.ok;
  j["checked"] = c.checked;
  j["failed"] = c.failed;
  j["witnesses"] = c.witnesses;
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidInput, "cannot write " + path);
  out << text;
  if (!out) throw Error(Errc::InvalidInput, "failed writing " + path);
}

}  // namespace treeunif
