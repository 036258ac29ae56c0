#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace hallcanon {

using DimVector = std::vector<int>;

struct Arrow {
    int s, t;
};

enum class QuiverKind { Acyclic, Cyclic, Jordan };

class Quiver {
public:
    Quiver(std::vector<std::string> labels, std::vector<Arrow> arrows);

    static Quiver kronecker();           // 0 => 1 (two arrows)
    static Quiver cyclic(int n);         // 1 -> 2 -> ... -> n -> 1
    static Quiver linear_An(int n, const std::string& orientation = "");  // default all arrows i -> i+1
    static Quiver jordan();              // one vertex, one loop
    static Quiver from_json(const nlohmann::json& j);
    static Quiver parse(const std::string& spec);  // "kronecker", "cyclic:3", "A2", "jordan", or JSON text

    int n() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<Arrow>& arrows() const { return arrows_; }
    QuiverKind kind() const { return kind_; }
    const std::string& id() const { return id_; }
    nlohmann::json to_json() const;
    int vertex(const std::string& label) const;

    bool is_sink(int i) const;
    bool is_source(int i) const;
    // vertices in an order with every arrow going forward; nullopt if there is an oriented cycle
    std::optional<std::vector<int>> topological_order() const;
    // same vertices, all arrows reversed at i
    Quiver reflected_at(int i) const;

    int euler_form(const DimVector& a, const DimVector& b) const;
    int symmetric_form(const DimVector& a, const DimVector& b) const;
    DimVector reflect(int i, const DimVector& v) const;  // s_i
    DimVector simple(int i) const;

    bool is_affine() const;
    DimVector delta() const;                 // throws unless affine
    int defect(const DimVector& v) const;    // <delta, v>
    bool is_root(const DimVector& v) const;  // nonzero, (v,v) <= 2 in the connected tame/finite sense

private:
    std::vector<std::string> labels_;
    std::vector<Arrow> arrows_;
    QuiverKind kind_;
    std::string id_;
};

DimVector operator+(const DimVector& a, const DimVector& b);
DimVector operator-(const DimVector& a, const DimVector& b);
DimVector scaled(const DimVector& a, int k);
bool leq(const DimVector& a, const DimVector& b);  // componentwise
bool is_zero(const DimVector& a);
int total(const DimVector& a);
std::string dim_str(const DimVector& a);  // "(1,2)"

// i_t for an acyclic quiver, vertices topologically ordered: i_t = order[(t-1) mod n]
class AdmissibleSequence {
public:
    explicit AdmissibleSequence(const Quiver& q);
    int at(int t) const;
    int period() const { return static_cast<int>(order_.size()); }
    const std::vector<int>& order() const { return order_; }

private:
    std::vector<int> order_;
};

// beta_t; nullopt once the reflected vector stops being positive (finite type)
std::optional<DimVector> beta(const Quiver& q, const AdmissibleSequence& seq, int t);
// (j_1, ..., j_r): j_1 a sink of q, j_k a sink of sigma_{j_{k-1}}...sigma_{j_1} q
bool is_admissible_sink_sequence(const Quiver& q, const std::vector<int>& js);
bool is_admissible_source_sequence(const Quiver& q, const std::vector<int>& js);

}  // namespace hallcanon
