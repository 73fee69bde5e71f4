#pragma once

#include <array>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>
#include <string>

#include "crs/crcomplex.hpp"

namespace crs::detail {

extern const double kPi, S2, S7, S14;

ExactElem rho2_elem(const std::string& word);

struct MinResult {
    double x, f;
};
double golden_min(const std::function<double(double)>& f, double lo, double hi, int iters);
MinResult min_1d(const std::function<double(double)>& f, int n);

using P3 = std::array<double, 3>;
std::array<double, 3> xyz(const HeisPoint& p);

// Static 3-d tree for nearest-neighbour queries.
class KdTree {
public:
    explicit KdTree(std::vector<P3> pts) : p_(std::move(pts)), idx_(p_.size()) {
        std::iota(idx_.begin(), idx_.end(), 0);
        build(0, int(idx_.size()), 0);
    }
    // (distance, index) of the nearest point; index -1 when empty
    std::pair<double, int> nearest(const P3& q) const {
        double best = HUGE_VAL;
        int bi = -1;
        search(0, int(idx_.size()), 0, q, best, bi);
        return {std::sqrt(best), bi};
    }
    const P3& at(int i) const { return p_[i]; }
    // whether some point lies strictly within r of q
    bool any_within(const P3& q, double r) const {
        double best = r * r;
        int bi = -1;
        search(0, int(idx_.size()), 0, q, best, bi);
        return bi >= 0;
    }
    // indices of the k nearest points, closest first
    std::vector<int> knearest(const P3& q, int k) const {
        std::vector<std::pair<double, int>> heap;
        knn(0, int(idx_.size()), 0, q, std::size_t(k), heap);
        std::sort_heap(heap.begin(), heap.end());
        std::vector<int> out;
        for (auto& e : heap) out.push_back(e.second);
        return out;
    }
    std::size_t size() const { return p_.size(); }

private:
    void build(int lo, int hi, int axis) {
        if (hi - lo <= 1) return;
        int mid = (lo + hi) / 2;
        std::nth_element(idx_.begin() + lo, idx_.begin() + mid, idx_.begin() + hi,
                         [&](int a, int b) { return p_[a][axis] < p_[b][axis]; });
        build(lo, mid, (axis + 1) % 3);
        build(mid + 1, hi, (axis + 1) % 3);
    }
    void search(int lo, int hi, int axis, const P3& q, double& best, int& bi) const {
        if (hi <= lo) return;
        int mid = (lo + hi) / 2;
        const P3& m = p_[idx_[mid]];
        double dd = (m[0] - q[0]) * (m[0] - q[0]) + (m[1] - q[1]) * (m[1] - q[1]) + (m[2] - q[2]) * (m[2] - q[2]);
        if (dd < best) {
            best = dd;
            bi = idx_[mid];
        }
        double diff = q[axis] - m[axis];
        int na = (axis + 1) % 3;
        if (diff < 0) {
            search(lo, mid, na, q, best, bi);
            if (diff * diff < best) search(mid + 1, hi, na, q, best, bi);
        } else {
            search(mid + 1, hi, na, q, best, bi);
            if (diff * diff < best) search(lo, mid, na, q, best, bi);
        }
    }
    void knn(int lo, int hi, int axis, const P3& q, std::size_t k, std::vector<std::pair<double, int>>& heap) const {
        if (hi <= lo) return;
        int mid = (lo + hi) / 2;
        const P3& m = p_[idx_[mid]];
        double dd = (m[0] - q[0]) * (m[0] - q[0]) + (m[1] - q[1]) * (m[1] - q[1]) + (m[2] - q[2]) * (m[2] - q[2]);
        if (heap.size() < k) {
            heap.push_back({dd, idx_[mid]});
            std::push_heap(heap.begin(), heap.end());
        } else if (dd < heap.front().first) {
            std::pop_heap(heap.begin(), heap.end());
            heap.back() = {dd, idx_[mid]};
            std::push_heap(heap.begin(), heap.end());
        }
        double diff = q[axis] - m[axis];
        int na = (axis + 1) % 3;
        int a0 = diff < 0 ? lo : mid + 1, a1 = diff < 0 ? mid : hi;
        int b0 = diff < 0 ? mid + 1 : lo, b1 = diff < 0 ? hi : mid;
        knn(a0, a1, na, q, k, heap);
        if (heap.size() < k || diff * diff < heap.front().first) knn(b0, b1, na, q, k, heap);
    }
    std::vector<P3> p_;
    std::vector<int> idx_;
};


// Euclidean distance in (x,y,t) to a Negative arc
double dist_to_arc(const Arc& a, const HeisPoint& p);

}  // namespace crs::detail
