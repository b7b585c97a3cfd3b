#include "treeunif/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <thread>

#include "treeunif/error.hpp"
#include "treeunif/generators.hpp"
#include "treeunif/render.hpp"

namespace treeunif {

int auto_depth(const MetricTree& tree, double delta) {
  const double floor = 2.0 * tree.grid_tolerance();
  int d = 1;
  while (d < 6 && std::pow(delta, d + 1) >= floor) ++d;
  return d;
}

unsigned thread_cap() {
  if (const char* s = std::getenv("TREEUNIF_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end != s && v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void run_parallel(const std::vector<std::function<void()>>& jobs) {
  const unsigned n = std::min<unsigned>(thread_cap(), static_cast<unsigned>(jobs.size()));
  if (n <= 1) {
    for (const auto& j : jobs) j();
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs.size());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < jobs.size();) {
        try {
          jobs[i]();
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace {

std::string short_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

Json params_json(const HierarchyParams& p) {
  Json j;
  j["beta"] = p.beta;
  j["gamma"] = p.gamma;
  j["delta"] = p.delta;
  j["depth"] = p.depth;
  return j;
}

Json delta_json(const DeltaReport& r) {
  Json j;
  j["ok"] = r.ok();
  j["a"] = r.a;
  j["b"] = r.b;
  j["c"] = r.c;
  j["d"] = r.d;
  j["checked"] = Json::array({r.checked_a, r.checked_b, r.checked_c, r.checked_d});
  Json f = Json::array();
  for (const auto& v : r.failures) {
    Json x;
    x["check"] = std::string(1, v.check);
    x["tile"] = v.tile;
    x["detail"] = v.detail;
    f.push_back(std::move(x));
  }
  j["failures"] = std::move(f);
  return j;
}

Json hist_json(const std::vector<std::map<int, int>>& h) {
  Json a = Json::array();
  for (const auto& m : h) {
    Json o;
    for (auto [k, v] : m) o[std::to_string(k)] = v;
    a.push_back(std::move(o));
  }
  return a;
}

Json constants_json(const ConstantsBundle& c) {
  Json j;
  j["N"] = c.N;
  j["Nprime"] = c.Nprime;
  j["M"] = c.M;
  j["sigma"] = to_fraction_string(c.sigma);
  j["gamma"] = to_fraction_string(c.gamma);
  j["beta"] = to_fraction_string(c.beta);
  j["delta"] = to_fraction_string(c.delta);
  Json p;
  for (const auto& [k, v] : c.provenance) p[k] = to_string(v);
  j["provenance"] = std::move(p);
  return j;
}

Json qs_json(const QsReport& q, const MetricTree& T) {
  Json j;
  j["H_empirical"] = q.H_empirical;
  j["samples"] = q.samples;
  j["worst"] = Json::array({T.describe(q.wx), T.describe(q.wy), T.describe(q.wz)});
  Json qs = Json::array();
  for (auto [a, b] : q.quantiles) qs.push_back(Json::array({a, b}));
  j["quantiles"] = std::move(qs);
  return j;
}

Json dimension_json(const DimensionReport& d) {
  Json j;
  j["alpha"] = d.alpha;
  j["K"] = d.K;
  j["eps0"] = to_fraction_string(d.eps0);
  j["L"] = d.L;
  j["exact"] = d.exact;
  j["per_tile_ok"] = d.per_tile_ok;
  j["tiles_checked"] = d.tiles_checked;
  j["tile_failures"] = d.tile_failures;
  j["worst_tile_ratio"] = d.worst_tile_ratio;
  j["level_sums"] = d.level_sums;
  j["level_ratios"] = d.level_ratios;
  j["diam_level_sums"] = d.diam_level_sums;
  j["level_sums_ok"] = d.level_sums_ok;
  j["certified"] = d.certified;
  j["dimension_bound"] = d.dimension_bound;
  return j;
}

struct Resolved {
  HierarchyParams p;
  bool beta_auto, gamma_auto, delta_auto, depth_auto;
};

DecompPtr build_hierarchy(const TreePtr& tree, Resolved r, std::vector<Attempt>& attempts, DeltaReport& report) {
  constexpr int kRetries = 8;
  std::string last;
  for (int attempt = 0; attempt <= kRetries; ++attempt) {
    if (r.depth_auto) r.p.depth = auto_depth(*tree, r.p.delta);
    Attempt a{r.p, "ok"};
    try {
      DecompPtr d = TileDecomposition::build(tree, r.p);
      report = d->validate_delta();
      if (report.ok()) {
        attempts.push_back(a);
        return d;
      }
      std::string failed;
      for (char c : {'a', 'b', 'c', 'd'})
        if ((c == 'a' && !report.a) || (c == 'b' && !report.b) || (c == 'c' && !report.c) || (c == 'd' && !report.d))
          failed += c;
      a.outcome = "validate_delta failed (" + failed + ")";
      attempts.push_back(a);
      if (!r.delta_auto) return d;
      r.p.delta *= 0.8;
    } catch (const Error& e) {
      if (e.code() != Errc::PostVerificationFailed && e.code() != Errc::GammaTooLarge) throw;
      a.outcome = std::string(to_string(e.code())) + ": " + e.what();
      attempts.push_back(a);
      last = e.what();
      if (r.gamma_auto && r.p.gamma > 0.25) {
        r.p.gamma /= 2;
      } else if (r.beta_auto) {
        r.p.beta *= 2;
        if (r.p.delta >= 1.0 / (3.0 * r.p.beta)) {
          if (!r.delta_auto) throw;
          r.p.delta = 0.8 / (3.0 * r.p.beta);
        }
      } else if (r.gamma_auto) {
        r.p.gamma /= 2;
      } else {
        throw;
      }
    }
  }
  throw Error(Errc::PostVerificationFailed, "no admissible parameters after " + std::to_string(kRetries) +
                                                " retries; last failure: " + last);
}

}  // namespace

RunResult run(const RunConfig& cfg) {
  RunResult res;
  if (cfg.input_path.empty() == cfg.generate.empty())
    throw Error(Errc::InvalidInput, "give exactly one of an input file and a generator spec");
  TreeSpec spec = cfg.generate.empty() ? read_tree_file(cfg.input_path) : generate_spec(parse_generator(cfg.generate));
  res.tree = MetricTree::build(std::move(spec));
  const MetricTree& T = *res.tree;

  Resolved r{{}, !cfg.beta, !cfg.gamma, !cfg.delta, cfg.depth <= 0};
  r.p.beta = cfg.beta.value_or(1.0);
  r.p.gamma = cfg.gamma.value_or(0.5);
  r.p.delta = cfg.delta.value_or(0.125);
  r.p.depth = cfg.depth;
  if (!(r.p.delta > 0.0 && r.p.delta < 1.0 / (3.0 * r.p.beta)))
    throw Error(Errc::InvalidInput, "delta must lie in (0, 1/(3 beta))");

  Json& rep = res.reports;
  Json input;
  input["source"] = cfg.generate.empty() ? cfg.input_path : cfg.generate;
  input["mode"] = to_string(T.mode());
  input["nodes"] = T.node_count();
  input["edges"] = T.edge_count();
  input["samples"] = T.sample_count();
  input["grid_tolerance"] = T.grid_tolerance();
  rep["input"] = std::move(input);

  const DoublingEstimate dbl = T.estimate_doubling({0.5, 0.25, 0.125, 0.0625}, 0.5);
  ConstantsBundle consts;
  if (dbl.N >= 1 && dbl.N <= 30000) consts = derive_constants(dbl.N);
  consts.N = dbl.N;
  consts.provenance["N"] = Provenance::Measured;

  DeltaReport dr;
  res.decomp = build_hierarchy(res.tree, r, res.attempts, dr);
  const TileDecomposition& D = *res.decomp;
  const HierarchyParams& hp = D.params();

  Json used = params_json(hp);
  Json prov;
  prov["beta"] = to_string(cfg.beta ? Provenance::User : Provenance::Adaptive);
  prov["gamma"] = to_string(cfg.gamma ? Provenance::User : Provenance::Adaptive);
  prov["delta"] = to_string(cfg.delta ? Provenance::User : Provenance::Adaptive);
  prov["depth"] = to_string(cfg.depth > 0 ? Provenance::User : Provenance::Adaptive);
  used["provenance"] = std::move(prov);
  Json attempts = Json::array();
  for (const auto& a : res.attempts) {
    Json x = params_json(a.params);
    x["outcome"] = a.outcome;
    attempts.push_back(std::move(x));
  }
  Json cj;
  cj["derived"] = constants_json(consts);
  cj["used"] = std::move(used);
  cj["attempts"] = std::move(attempts);
  rep["constants"] = std::move(cj);

  const NeighborStats ns = D.neighbor_stats();
  Json hier;
  Json counts = Json::array();
  for (int n = 0; n <= D.depth(); ++n) {
    Json c;
    c["level"] = n;
    c["vertices"] = D.vertices(n).size();
    c["tiles"] = D.level_tiles(n).size();
    counts.push_back(std::move(c));
  }
  hier["levels"] = std::move(counts);
  hier["K"] = ns.K;
  hier["neighbor_hist"] = hist_json(ns.neighbor_hist);
  hier["children_hist"] = hist_json(ns.children_hist);
  hier["validate_delta"] = delta_json(dr);
  if (!dr.ok()) {
    for (char c : {'a', 'b', 'c', 'd'})
      if ((c == 'a' && !dr.a) || (c == 'b' && !dr.b) || (c == 'c' && !dr.c) || (c == 'd' && !dr.d))
        res.failed_checks.push_back(std::string("validate_delta(") + c + ")");
    rep["hierarchy"] = std::move(hier);
    rep["certified"] = false;
    rep["failed_checks"] = res.failed_checks;
    return res;
  }

  const Rational eps0 = cfg.eps0 ? *cfg.eps0 : default_eps0(ns.K);
  res.weights = std::make_shared<const WeightAssignment>(assign_weights(D, eps0));
  const WeightAssignment& W = *res.weights;
  auto rho = std::make_shared<const RhoMetric>(res.decomp, res.weights);
  res.rho = rho;

  const std::size_t ns_ = cfg.samples;
  const std::uint64_t sd = cfg.seed;
  CheckResult diam_c, sep_c, mv, bp, li, ba, td;
  WeightReport wr;
  GeodesicReport geo;
  QsReport qs;
  DoublingEstimate rdbl;
  std::vector<DimensionReport> dims(cfg.alphas.size());
  GeodesicSkeleton sk;
  std::vector<std::function<void()>> jobs = {
      [&] { diam_c = D.tile_diameter_check(); },
      [&] { sep_c = D.tile_separation_check(); },
      [&] { wr = verify_weight_bounds(D, W); },
      [&] { mv = rho->main_vertex_check(); },
      [&] { bp = rho->boundary_pair_check(); },
      [&] { li = rho->level_increment_check(ns_, sd + 1); },
      [&] { ba = rho->basics_check(std::max<std::size_t>(1, ns_ / 5), sd + 2); },
      [&] { td = rho->tile_diam_check(); },
      [&] { geo = rho->geodesic_check(ns_, sd + 3); },
      [&] { qs = verify_weak_qs(*rho, ns_, sd + 4); },
      [&] { rdbl = verify_rho_doubling(*rho, {0.5, 0.25, 0.125}, 0.5); },
      [&] { sk = rho->build_geodesic_skeleton(); },
  };
  for (std::size_t i = 0; i < cfg.alphas.size(); ++i)
    jobs.push_back([&, i] { dims[i] = hausdorff_bound(D, W, cfg.alphas[i]); });
  run_parallel(jobs);

  Json geom = Json::array({check_to_json(diam_c), check_to_json(sep_c)});
  hier["geometry"] = std::move(geom);
  rep["hierarchy"] = std::move(hier);

  Json wj;
  wj["eps0"] = to_fraction_string(W.eps0);
  wj["K"] = W.K;
  Json wc = Json::array();
  for (const auto& c : wr.checks) {
    wc.push_back(check_to_json(c));
    if (!c.ok) res.failed_checks.push_back("weights." + c.name);
  }
  wj["checks"] = std::move(wc);
  rep["weights"] = std::move(wj);

  Json rj;
  rj["n_max"] = rho->n_max();
  Json rc = Json::array();
  for (const CheckResult* c : {&mv, &bp, &li, &ba, &td}) {
    rc.push_back(check_to_json(*c));
    if (!c->ok) res.failed_checks.push_back("rho." + c->name);
  }
  rj["checks"] = std::move(rc);
  Json gj;
  gj["ok"] = geo.ok();
  gj["samples"] = geo.samples;
  gj["violations"] = geo.violations;
  gj["max_residual"] = to_fraction_string(geo.max_residual);
  gj["max_ratio"] = geo.max_ratio;
  gj["witnesses"] = geo.witnesses;
  rj["geodesic"] = std::move(gj);
  if (!geo.ok()) res.failed_checks.push_back("rho.geodesic");
  Json dj;
  dj["packing"] = rdbl.packing;
  dj["exponent"] = rdbl.exponent;
  dj["N"] = rdbl.N;
  rj["doubling"] = std::move(dj);
  rj["weak_qs"] = qs_json(qs, T);
  rep["rho"] = std::move(rj);

  Json dims_j = Json::array();
  for (const auto& d : dims) {
    dims_j.push_back(dimension_json(d));
    if (!d.per_tile_ok) res.failed_checks.push_back("dimension.per_tile(alpha=" + short_num(d.alpha) + ")");
  }
  rep["dimension"] = std::move(dims_j);
  rep["certified"] = res.failed_checks.empty();
  rep["failed_checks"] = res.failed_checks;

  res.decomposition_json = dump(decomposition_to_json(D, W));
  res.skeleton_json = dump(skeleton_to_json(sk));
  res.skeleton_dot = skeleton_to_dot(sk, T);
  if (cfg.svg)
    for (int n = 0; n <= D.depth(); ++n) res.svgs.push_back(render_svg(D, W, n));
  return res;
}

void write_artifacts(const RunResult& res, const RunConfig& cfg) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  write_text_file((dir / "reports.json").string(), dump(res.reports));
  if (!res.decomposition_json.empty()) write_text_file((dir / "decomposition.json").string(), res.decomposition_json);
  if (!res.skeleton_json.empty()) {
    write_text_file((dir / "skeleton.json").string(), res.skeleton_json);
    write_text_file((dir / "skeleton.dot").string(), res.skeleton_dot);
  }
  for (std::size_t n = 0; n < res.svgs.size(); ++n)
    write_text_file((dir / ("level_" + std::to_string(n) + ".svg")).string(), res.svgs[n]);
}

std::string text_summary(const RunResult& res) {
  const Json& r = res.reports;
  std::ostringstream os;
  const Json& in = r["input"];
  os << "input      " << in["source"].get<std::string>() << " (" << in["mode"].get<std::string>() << ", "
     << in["samples"].get<std::size_t>() << " samples, grid tolerance " << in["grid_tolerance"].get<double>()
     << ")\n";
  const Json& used = r["constants"]["used"];
  os << "params     beta " << used["beta"].get<double>() << ", gamma " << used["gamma"].get<double>() << ", delta "
     << used["delta"].get<double>() << ", depth " << used["depth"].get<int>() << " after "
     << res.attempts.size() << " attempt(s)\n";
  const Json& h = r["hierarchy"];
  os << "hierarchy  K " << h["K"].get<int>() << ", tiles per level";
  for (const auto& l : h["levels"]) os << " " << l["tiles"].get<std::size_t>();
  os << "\n";
  auto line = [&](const std::string& name, bool ok, const std::string& detail) {
    os << (ok ? "PASS " : "FAIL ") << name << (detail.empty() ? "" : "  " + detail) << "\n";
  };
  line("validate_delta", h["validate_delta"]["ok"].get<bool>(), "");
  if (h.contains("geometry"))
    for (const auto& c : h["geometry"])
      line(c["name"].get<std::string>() + " (diagnostic)", c["ok"].get<bool>(),
           std::to_string(c["failed"].get<std::size_t>()) + "/" + std::to_string(c["checked"].get<std::size_t>()));
  auto checks = [&](const char* section) {
    if (!r.contains(section)) return;
    for (const auto& c : r[section]["checks"])
      line(std::string(section) + "." + c["name"].get<std::string>(), c["ok"].get<bool>(),
           std::to_string(c["failed"].get<std::size_t>()) + "/" + std::to_string(c["checked"].get<std::size_t>()));
  };
  checks("weights");
  checks("rho");
  if (r.contains("rho")) {
    const Json& g = r["rho"]["geodesic"];
    line("rho.geodesic", g["ok"].get<bool>(),
         std::to_string(g["violations"].get<std::size_t>()) + "/" + std::to_string(g["samples"].get<std::size_t>()));
    os << "weak qs    H_empirical " << r["rho"]["weak_qs"]["H_empirical"].get<double>() << "\n";
    os << "rho dbl    N " << r["rho"]["doubling"]["N"].get<long long>() << "\n";
  }
  if (r.contains("dimension"))
    for (const auto& d : r["dimension"])
      line("dimension alpha=" + short_num(d["alpha"].get<double>()), d["per_tile_ok"].get<bool>(),
           "L " + std::to_string(d["L"].get<double>()) + ", bound " + std::to_string(d["dimension_bound"].get<double>()));
  os << "certified  " << (res.certified() ? "yes" : "no");
  for (const auto& f : res.failed_checks) os << " " << f;
  os << "\n";
  return os.str();
}

}  // namespace treeunif
