#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "treeunif/metric_tree.hpp"
#include "treeunif/rational.hpp"

namespace treeunif {

struct ShadowPoint {
  PointRef p;
  double S = 0.0;
};

/// Sparse shadow function on J; points not listed have S = 0.
struct ShadowFunction {
  Arc J;
  std::vector<ShadowPoint> support;
};

struct GoodPointParams {
  double beta = 1.0;
  double gamma = 0.5;
  double Delta = 0.1;
};

enum class Provenance { PaperFormula, User, Adaptive, Measured };

const char* to_string(Provenance p) noexcept;

struct ConstantsBundle {
  long long N = 0;
  long long Nprime = 0;
  long long M = 0;
  Rational sigma;
  Rational gamma;
  Rational beta;
  Rational delta;
  long long K = 0;
  std::map<std::string, Provenance> provenance;
};

/// Packing constant used for the separated-set argument: N' = N^4
/// (a ball of radius 6r needs four halvings to reach radius < r/2).
long long packing_constant(long long N);
/// Shadow-count bound for the place-in-the-sun step: M = N^3 + 2.
long long shadow_count_from_doubling(long long N);

ConstantsBundle derive_constants(long long N);
ConstantsBundle derive_constants_from(long long Nprime, long long M);

/// Sub-arc I of Jp with diam(I) ~ diam(Jp)/(6M) and dd-distance at least
/// that much from A and from the endpoints of Jp.
Arc find_avoiding_subarc(const MetricTree& tree, const Arc& J, const Arc& Jp,
                         const std::vector<PointRef>& A, int M);

struct AvoidanceCheck {
  double diam = 0.0;
  double target = 0.0;
  double distance = 0.0;  // dd-distance from I to A and the endpoints of Jp
  double tolerance = 0.0;
  bool ok = false;
};

AvoidanceCheck check_avoiding_subarc(const MetricTree& tree, const Arc& Jp, const Arc& I,
                                     const std::vector<PointRef>& A, int M);

/// max over sub-arcs I of #{p in I : S(p) >= diam(I)}.
int shadow_count_bound(const MetricTree& tree, const ShadowFunction& S);

struct SunResult {
  PointRef x;
  double sigma = 0.0;
  bool used_fallback = false;
  double margin = 0.0;  // min over support of dd(x,p) - sigma S(p)
};

SunResult place_in_sun(const MetricTree& tree, const ShadowFunction& S, int M);

/// min over support of dd(x,p) - sigma S(p).
double sun_margin(const MetricTree& tree, const ShadowFunction& S, PointRef x, double sigma);

enum class Violation { None, NotDouble, DoubleDelta, BranchDistance };

const char* to_string(Violation v) noexcept;

struct GoodVerdict {
  bool good = false;
  Violation violation = Violation::None;
  std::optional<PointRef> witness;
  double value = 0.0;     // offending measured quantity
  double required = 0.0;  // bound it failed
  explicit operator bool() const { return good; }
};

struct BranchSize {
  PointRef b;
  double H = 0.0;
};

/// Branch points together with H of each.
std::vector<BranchSize> branch_sizes(const MetricTree& tree);

GoodVerdict is_good_double_point(const MetricTree& tree, PointRef x, const GoodPointParams& params);

struct ArcPointResult {
  PointRef x;
  int M = 0;
  bool used_fallback = false;
};

ArcPointResult good_double_point_on_arc(const MetricTree& tree, const Arc& J, double Delta, double gamma);

/// Diameters of the closures of the components of T minus V.
std::vector<double> complement_diameters(const MetricTree& tree, const std::vector<PointRef>& V);

std::vector<PointRef> maximal_good_set(const MetricTree& tree, const GoodPointParams& params,
                                       const std::vector<PointRef>& seed);

}  // namespace treeunif
