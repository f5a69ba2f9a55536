#pragma once

#include <map>
#include <utility>

#include "gsw/scalar.hpp"

namespace gsw::detail {

/// Canonical sparse term storage shared by the polynomial types: ordered by
/// key, no zero coefficients.
template <class Key>
class TermMap {
 public:
  using container_type = std::map<Key, Scalar>;

  const container_type& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  Scalar coefficient(const Key& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? Scalar{} : it->second;
  }

  void add(const Key& key, const Scalar& value) {
    if (value.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(key, value);
    if (!inserted) {
      it->second += value;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  void add_all(const TermMap& other, const Scalar& factor) {
    for (const auto& [key, value] : other.terms_) add(key, value * factor);
  }

  void scale(const Scalar& factor) {
    if (factor.is_zero()) {
      terms_.clear();
      return;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second *= factor;
      if (it->second.is_zero()) {
        it = terms_.erase(it);
      } else {
        ++it;
      }
    }
  }

  bool approx_equal(const TermMap& other, double tol) const {
    // A floating coefficient within tolerance of zero may survive on one side
    // only, so compare over the union of keys.
    for (const auto& [key, value] : terms_) {
      if (!Scalar::approx_equal(value, other.coefficient(key), tol)) return false;
    }
    for (const auto& [key, value] : other.terms_) {
      if (!terms_.contains(key) && !Scalar::approx_equal(value, Scalar{}, tol)) return false;
    }
    return true;
  }

 private:
  container_type terms_;
};

}  // namespace gsw::detail
