#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "treeunif/error.hpp"
#include "treeunif/pipeline.hpp"

namespace {

std::optional<double> real_or_auto(const std::string& s, const char* name) {
  if (s == "auto") return std::nullopt;
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw treeunif::Error(treeunif::Errc::InvalidInput, std::string("--") + name + " expects a number or auto");
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v = std::stod(item, &pos);
    if (pos != item.size()) throw treeunif::Error(treeunif::Errc::InvalidInput, "bad alpha '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constructive uniformization of quasiconformal trees"};
  treeunif::RunConfig cfg;
  std::string beta = "auto", gamma = "auto", delta = "auto", eps0 = "auto", alpha = "1.2,1.5,2.0", report = "text";
  auto* in = app.add_option("--input", cfg.input_path, "Tree JSON file");
  auto* gen = app.add_option("--generate", cfg.generate,
                             "Generator: segment | snowflake:EPS | csst:D | random:N:SEED[:uniform|unit|exp], optional @RES");
  in->excludes(gen);
  gen->excludes(in);
  app.add_option("--beta", beta, "beta or auto");
  app.add_option("--gamma", gamma, "gamma or auto");
  app.add_option("--delta", delta, "delta or auto");
  app.add_option("--eps0", eps0, "eps0 as P/Q or auto (1/(3K))");
  app.add_option("--depth", cfg.depth, "Hierarchy depth, 0 for auto");
  app.add_option("--alpha", alpha, "Comma separated exponents for dimension reports");
  app.add_option("--samples", cfg.samples, "Samples per randomized check");
  app.add_option("--seed", cfg.seed, "Seed for randomized checks");
  app.add_option("--out", cfg.out_dir, "Output directory");
  app.add_flag("--svg", cfg.svg, "Render one SVG per level");
  app.add_option("--report", report, "Report format on stdout")->check(CLI::IsMember({"json", "text"}));
  CLI11_PARSE(app, argc, argv);

  try {
    cfg.beta = real_or_auto(beta, "beta");
    cfg.gamma = real_or_auto(gamma, "gamma");
    cfg.delta = real_or_auto(delta, "delta");
    if (eps0 != "auto") cfg.eps0 = treeunif::parse_rational(eps0);
    cfg.alphas = parse_list(alpha);
    treeunif::RunResult res = treeunif::run(cfg);
    treeunif::write_artifacts(res, cfg);
    if (report == "json")
      std::cout << treeunif::dump(res.reports);
    else
      std::cout << treeunif::text_summary(res);
    return res.certified() ? 0 : 1;
  } catch (const treeunif::Error& e) {
    std::cerr << "error [" << treeunif::to_string(e.code()) << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
