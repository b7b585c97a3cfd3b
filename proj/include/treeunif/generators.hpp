#pragma once

#include <cstdint>
#include <string>

#include "treeunif/metric_tree.hpp"

namespace treeunif {

enum class Family { Segment, Snowflake, Csst, Random };

enum class LengthLaw { Uniform, Unit, Exponential };

struct GeneratorSpec {
  Family family = Family::Segment;
  double epsilon_s = 1.0;  // snowflake
  int depth = 1;           // csst
  int nodes = 2;           // random
  std::uint64_t seed = 0;  // random
  LengthLaw law = LengthLaw::Uniform;
  int resolution = 0;      // 0: family default
};

/// Parses "segment", "snowflake:EPS", "csst:D", "random:N:SEED[:LAW]",
/// optionally followed by "@RES" for the resolution.
GeneratorSpec parse_generator(const std::string& text);
std::string to_string(const GeneratorSpec& spec);

int default_resolution(const GeneratorSpec& spec);

TreeSpec generate_spec(const GeneratorSpec& spec);
TreePtr generate(const GeneratorSpec& spec);

}  // namespace treeunif
