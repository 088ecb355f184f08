#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace confcurve {

/// Strictly increasing tuple of 1-based axis labels in an ambient dimension.
/// The empty tuple (degree 0) labels the scalar unit, which is what the
/// Hodge star of a top-degree form lands on.
class MultiIndex {
  public:
    MultiIndex(std::vector<int> axes, int ambient) : axes_(std::move(axes)), ambient_(ambient) {
        if (ambient_ < 1) throw std::invalid_argument("MultiIndex: ambient dimension must be >= 1");
        if (static_cast<int>(axes_.size()) > ambient_)
            throw std::invalid_argument("MultiIndex: degree exceeds ambient dimension");
        for (size_t i = 0; i < axes_.size(); ++i) {
            if (axes_[i] < 1 || axes_[i] > ambient_)
                throw std::invalid_argument("MultiIndex: axis " + std::to_string(axes_[i]) +
                                            " out of range 1.." + std::to_string(ambient_));
            if (i > 0 && axes_[i] <= axes_[i - 1])
                throw std::invalid_argument("MultiIndex: axes must be strictly increasing");
        }
    }

    int degree() const { return static_cast<int>(axes_.size()); }
    int ambient() const { return ambient_; }
    const std::vector<int>& axes() const { return axes_; }

    /// Complement within 1..ambient, in increasing order.
    MultiIndex complement() const {
        std::vector<int> rest;
        rest.reserve(ambient_ - degree());
        size_t k = 0;
        for (int a = 1; a <= ambient_; ++a) {
            if (k < axes_.size() && axes_[k] == a)
                ++k;
            else
                rest.push_back(a);
        }
        return MultiIndex(std::move(rest), ambient_);
    }

    /// Sign of the permutation (axes, complement) of (1..ambient):
    /// (-1)^{sum_k (axes_k - k)}.
    int complement_sign() const {
        long shift = 0;
        for (size_t k = 0; k < axes_.size(); ++k) shift += axes_[k] - static_cast<int>(k) - 1;
        return (shift % 2 == 0) ? 1 : -1;
    }

    bool operator==(const MultiIndex& o) const {
        return ambient_ == o.ambient_ && axes_ == o.axes_;
    }
    bool operator<(const MultiIndex& o) const {
        if (ambient_ != o.ambient_) return ambient_ < o.ambient_;
        return axes_ < o.axes_;
    }

  private:
    std::vector<int> axes_;
    int ambient_;
};

/// All strictly increasing k-tuples in 1..ambient, lexicographic order.
inline std::vector<MultiIndex> all_multi_indices(int degree, int ambient) {
    std::vector<MultiIndex> out;
    if (degree < 0 || degree > ambient) return out;
    std::vector<int> idx(degree);
    for (int i = 0; i < degree; ++i) idx[i] = i + 1;
    for (;;) {
        out.emplace_back(idx, ambient);
        int pos = degree - 1;
        while (pos >= 0 && idx[pos] == ambient - (degree - 1 - pos)) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < degree; ++i) idx[i] = idx[i - 1] + 1;
    }
    return out;
}

}  // namespace confcurve
