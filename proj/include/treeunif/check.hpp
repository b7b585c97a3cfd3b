#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace treeunif {

/// Outcome of one verification sweep. Keeps the first few witnesses.
struct CheckResult {
  std::string name;
  bool ok = true;
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::vector<std::string> witnesses;

  explicit CheckResult(std::string n = {}) : name(std::move(n)) {}

  void pass() { ++checked; }
  void fail(std::string witness) {
    ++checked;
    ++failed;
    ok = false;
    if (witnesses.size() < 8) witnesses.push_back(std::move(witness));
  }
  void expect(bool cond, const std::string& witness) {
    if (cond)
      pass();
    else
      fail(witness);
  }
};

}  // namespace treeunif
