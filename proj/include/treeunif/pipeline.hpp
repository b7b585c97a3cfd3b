#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "treeunif/analysis.hpp"
#include "treeunif/io.hpp"
#include "treeunif/rho_metric.hpp"
#include "treeunif/subdivision.hpp"
#include "treeunif/weights.hpp"

namespace treeunif {

struct RunConfig {
  std::string input_path;  // tree JSON file; empty when generating
  std::string generate;    // generator spec such as "csst:3"
  std::optional<double> beta, gamma, delta;  // empty: auto
  std::optional<Rational> eps0;              // empty: 1/(3K)
  int depth = 0;                             // 0: auto
  std::vector<double> alphas{1.2, 1.5, 2.0};
  std::size_t samples = 500;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  bool svg = false;
};

struct Attempt {
  HierarchyParams params;
  std::string outcome;  // "ok" or the reason for retrying
};

struct RunResult {
  TreePtr tree;
  DecompPtr decomp;
  WeightsPtr weights;
  std::shared_ptr<const RhoMetric> rho;
  std::vector<Attempt> attempts;
  Json reports;
  std::vector<std::string> failed_checks;
  std::string decomposition_json, skeleton_json, skeleton_dot;
  std::vector<std::string> svgs;  // one per level

  bool certified() const { return failed_checks.empty(); }
};

/// Largest depth in 1..6 with delta^depth >= 2 * grid tolerance.
int auto_depth(const MetricTree& tree, double delta);

/// Worker count from TREEUNIF_THREADS, else the hardware concurrency.
unsigned thread_cap();
/// Runs independent jobs on at most thread_cap() threads.
void run_parallel(const std::vector<std::function<void()>>& jobs);

/// Builds every artifact in memory. Exit status follows certified().
RunResult run(const RunConfig& config);
/// Writes the artifacts of a run into config.out_dir.
void write_artifacts(const RunResult& result, const RunConfig& config);
std::string text_summary(const RunResult& result);

}  // namespace treeunif
