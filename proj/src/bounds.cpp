#include "hypflow/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace hypflow {

std::string to_string(BoundStatus status) {
  switch (status) {
    case BoundStatus::Pass:
      return "pass";
    case BoundStatus::Fail:
      return "fail";
    case BoundStatus::Inapplicable:
      return "inapplicable";
  }
  return "unknown";
}

BoundEntry make_entry(std::string name, std::size_t k, double lhs, double rhs, double slack, double tol) {
  BoundEntry e;
  e.name = std::move(name);
  e.k = k;
  e.lhs = lhs;
  e.rhs = rhs;
  e.margin = slack;
  e.tol = tol;
  // NaN margins fail.
  e.status = slack >= -tol ? BoundStatus::Pass : BoundStatus::Fail;
  return e;
}

BoundEntry inapplicable_entry(std::string name, std::size_t k, std::string note) {
  BoundEntry e;
  e.name = std::move(name);
  e.k = k;
  e.lhs = e.rhs = e.margin = std::nan("");
  e.status = BoundStatus::Inapplicable;
  e.note = std::move(note);
  return e;
}

void BoundReport::append(const BoundReport& other) {
  entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
}

bool BoundReport::all_pass() const {
  return std::none_of(entries_.begin(), entries_.end(),
                      [](const BoundEntry& e) { return e.status == BoundStatus::Fail; });
}

namespace {
void tally(BoundCounts& c, BoundStatus s) {
  switch (s) {
    case BoundStatus::Pass:
      ++c.pass;
      break;
    case BoundStatus::Fail:
      ++c.fail;
      break;
    case BoundStatus::Inapplicable:
      ++c.inapplicable;
      break;
  }
}
}  // namespace

BoundCounts BoundReport::counts() const {
  BoundCounts c;
  for (const auto& e : entries_) tally(c, e.status);
  return c;
}

BoundCounts BoundReport::counts(const std::string& name) const {
  BoundCounts c;
  for (const auto& e : entries_) {
    if (e.name == name) tally(c, e.status);
  }
  return c;
}

std::vector<std::string> BoundReport::names() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (std::find(out.begin(), out.end(), e.name) == out.end()) out.push_back(e.name);
  }
  return out;
}

const BoundEntry* BoundReport::find(const std::string& name, std::size_t k) const {
  for (const auto& e : entries_) {
    if (e.name == name && e.k == k) return &e;
  }
  return nullptr;
}

}  // namespace hypflow
