#pragma once

#include <numeric>
#include <utility>
#include <vector>

namespace wiregraph {

/// Union-find with path halving and union by rank.
class DisjointSet {
public:
    explicit DisjointSet(std::size_t n = 0) { reset(n); }

    void reset(std::size_t n)
    {
        parent_.resize(n);
        std::iota(parent_.begin(), parent_.end(), 0);
        rank_.assign(n, 0);
    }

    int add()
    {
        parent_.push_back(int(parent_.size()));
        rank_.push_back(0);
        return parent_.back();
    }

    int find(int x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    /// Returns the surviving root.
    int unite(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return a;
        if (rank_[a] < rank_[b])
            std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b])
            ++rank_[a];
        return a;
    }

    std::size_t size() const { return parent_.size(); }

private:
    std::vector<int> parent_;
    std::vector<int> rank_;
};

}  // namespace wiregraph
