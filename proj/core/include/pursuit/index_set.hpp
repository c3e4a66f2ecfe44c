#pragma once

#include <algorithm>
#include <initializer_list>
#include <vector>

#include "pursuit/error.hpp"

namespace pursuit {

/// An ordered set of column indices: sorted ascending, no duplicates.
class IndexSet {
 public:
  IndexSet() = default;

  IndexSet(std::initializer_list<int> indices)
      : IndexSet(std::vector<int>(indices)) {}

  explicit IndexSet(std::vector<int> indices) : idx_(std::move(indices)) {
    std::sort(idx_.begin(), idx_.end());
    if (std::adjacent_find(idx_.begin(), idx_.end()) != idx_.end()) {
      throw InvalidParams("IndexSet: duplicate index");
    }
    if (!idx_.empty() && idx_.front() < 0) {
      throw InvalidParams("IndexSet: negative index");
    }
  }

  static IndexSet full(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
    return IndexSet(std::move(v));
  }

  int size() const { return static_cast<int>(idx_.size()); }
  bool empty() const { return idx_.empty(); }
  int operator[](int i) const { return idx_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& indices() const { return idx_; }

  auto begin() const { return idx_.begin(); }
  auto end() const { return idx_.end(); }

  bool contains(int i) const {
    return std::binary_search(idx_.begin(), idx_.end(), i);
  }

  /// All indices must lie in [0, n).
  void require_within(int n) const {
    if (!idx_.empty() && idx_.back() >= n) {
      throw InvalidParams("IndexSet: index out of bounds");
    }
  }

  IndexSet set_union(const IndexSet& other) const {
    std::vector<int> out;
    out.reserve(idx_.size() + other.idx_.size());
    std::set_union(idx_.begin(), idx_.end(), other.idx_.begin(),
                   other.idx_.end(), std::back_inserter(out));
    return from_sorted(std::move(out));
  }

  IndexSet set_difference(const IndexSet& other) const {
    std::vector<int> out;
    std::set_difference(idx_.begin(), idx_.end(), other.idx_.begin(),
                        other.idx_.end(), std::back_inserter(out));
    return from_sorted(std::move(out));
  }

  IndexSet set_intersection(const IndexSet& other) const {
    std::vector<int> out;
    std::set_intersection(idx_.begin(), idx_.end(), other.idx_.begin(),
                          other.idx_.end(), std::back_inserter(out));
    return from_sorted(std::move(out));
  }

  /// Complement within {0, ..., n-1}.
  IndexSet complement(int n) const { return full(n).set_difference(*this); }

  bool operator==(const IndexSet& other) const = default;

 private:
  static IndexSet from_sorted(std::vector<int> v) {
    IndexSet s;
    s.idx_ = std::move(v);
    return s;
  }

  std::vector<int> idx_;
};

}  // namespace pursuit
