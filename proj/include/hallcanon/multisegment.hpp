#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hallcanon/quiver.hpp"

namespace hallcanon {

// Iso class of a nilpotent representation of the cyclic quiver 1 -> 2 -> ... -> n -> 1
// (or of the linearly oriented A_n when `linear`): multiplicities of the segments S_i[l],
// i = top vertex (0-based), l = length.
class Multisegment {
public:
    Multisegment() = default;
    Multisegment(int n, bool linear) : n_(n), linear_(linear) {}

    int n() const { return n_; }
    bool linear() const { return linear_; }
    const std::map<std::pair<int, int>, int>& segments() const { return seg_; }
    int mult(int i, int l) const;
    void add(int i, int l, int m = 1);
    bool empty() const { return seg_.empty(); }
    int total_length() const;
    int max_length() const;

    DimVector dim() const;
    bool is_aperiodic() const;  // every length misses some top vertex (always true for linear)
    Multisegment operator+(const Multisegment& o) const;

    bool operator<(const Multisegment& o) const;
    bool operator==(const Multisegment& o) const { return n_ == o.n_ && linear_ == o.linear_ && seg_ == o.seg_; }
    bool operator!=(const Multisegment& o) const { return !(*this == o); }

    std::string str() const;  // "[1;2)+2[2;1)" with 1-based vertices, "0" when empty
    nlohmann::json to_json() const;
    static Multisegment from_json(const nlohmann::json& j);
    static Multisegment parse(int n, bool linear, const std::string& s);

    static Multisegment segment(int n, bool linear, int i, int l, int m = 1);
    static Multisegment simple(int n, bool linear, int i, int m = 1) { return segment(n, linear, i, 1, m); }

private:
    int n_ = 0;
    bool linear_ = false;
    std::map<std::pair<int, int>, int> seg_;
};

// all multisegments with the given dimension vector, in a fixed deterministic order
std::vector<Multisegment> enumerate_multisegments(int n, bool linear, const DimVector& nu);

}  // namespace hallcanon
