#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hallcanon/laurent.hpp"

namespace hallcanon {

// Weakly decreasing positive parts; the empty vector is the zero partition.
class Partition {
public:
    Partition() = default;
    Partition(std::vector<int> parts);  // sorts and drops zeros
    Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

    const std::vector<int>& parts() const { return parts_; }
    int size() const;
    int length() const { return static_cast<int>(parts_.size()); }
    int operator[](int i) const { return i < length() ? parts_[i] : 0; }
    bool empty() const { return parts_.empty(); }
    Partition conjugate() const;

    // plain lexicographic comparison of the part sequences
    bool operator<(const Partition& o) const { return parts_ < o.parts_; }
    bool operator==(const Partition& o) const { return parts_ == o.parts_; }
    bool operator!=(const Partition& o) const { return parts_ != o.parts_; }

    std::string str() const;  // "(2,1)"
    nlohmann::json to_json() const { return parts_; }
    static Partition from_json(const nlohmann::json& j) { return Partition(j.get<std::vector<int>>()); }

private:
    std::vector<int> parts_;
};

// descending lexicographic order, (m) first and (1^m) last
std::vector<Partition> partitions_of(int m);
bool dominates(const Partition& a, const Partition& b);  // a ⊵ b
BigInt centralizer_order(const Partition& mu);            // z_mu

// number of SSYT of shape lambda and content mu
BigInt kostka(const Partition& lambda, const Partition& mu);
// irreducible character of S_m indexed by lambda at cycle type mu
BigInt character(const Partition& lambda, const Partition& mu);
// permutation character on lambda-tabloids
BigInt perm_character(const Partition& lambda, const Partition& mu);

using IntMatrix = std::vector<std::vector<BigInt>>;
// rows and columns in partitions_of(m) order; entry [i][j] = kostka(p_i, p_j)
IntMatrix kostka_matrix(int m);
IntMatrix kostka_inverse(int m);

struct CharTable {
    int m = 0;
    std::vector<Partition> index;  // partitions_of(m)
    IntMatrix values;              // values[lambda][mu]
};
CharTable char_table(int m);

}  // namespace hallcanon
