#pragma once

#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "pgdiscrim/errors.hpp"

namespace pgdiscrim {

// Opaque label token for ensemble elements and measurement outcomes.
// Plain labels have a single part; product-outcome labels carry one part
// per partition block, in block order.
class Label {
 public:
  Label(std::string token) : parts_{std::move(token)} {}
  Label(const char* token) : parts_{std::string(token)} {}
  explicit Label(std::vector<std::string> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw BadArgs("label must have at least one part");
  }

  static Label tuple(std::vector<std::string> parts) { return Label(std::move(parts)); }

  std::size_t arity() const { return parts_.size(); }
  const std::string& part(std::size_t i) const { return parts_.at(i); }
  const std::vector<std::string>& parts() const { return parts_; }
  Label component(std::size_t i) const { return Label(parts_.at(i)); }

  std::string str() const {
    if (parts_.size() == 1) return parts_[0];
    std::string s = "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i > 0) s += ",";
      s += parts_[i];
    }
    s += ")";
    return s;
  }

  friend bool operator==(const Label& a, const Label& b) { return a.parts_ == b.parts_; }
  friend auto operator<=>(const Label& a, const Label& b) { return a.parts_ <=> b.parts_; }

 private:
  std::vector<std::string> parts_;
};

}  // namespace pgdiscrim
