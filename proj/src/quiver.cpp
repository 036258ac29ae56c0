#include "hallcanon/quiver.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "hallcanon/laurent.hpp"

namespace hallcanon {

namespace {
bool is_cyclic_orientation(int n, const std::vector<Arrow>& arrows) {
    if (n < 2 || static_cast<int>(arrows.size()) != n) return false;
    std::vector<int> out(n, -1);
    for (auto& a : arrows) {
        if (out[a.s] != -1) return false;
        out[a.s] = a.t;
    }
    for (int i = 0; i < n; ++i)
        if (out[i] != (i + 1) % n) return false;
    return true;
}

// rational Gaussian elimination, returns a basis of the kernel
std::vector<std::vector<Rational>> kernel(std::vector<std::vector<Rational>> m, int cols) {
    int rows = static_cast<int>(m.size());
    std::vector<int> pivcol;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (m[i][c] != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        std::swap(m[p], m[r]);
        Rational inv = 1 / m[r][c];
        for (auto& x : m[r]) x *= inv;
        for (int i = 0; i < rows; ++i)
            if (i != r && m[i][c] != 0) {
                Rational f = m[i][c];
                for (int k = 0; k < cols; ++k) m[i][k] -= f * m[r][k];
            }
        pivcol.push_back(c);
        ++r;
    }
    std::vector<std::vector<Rational>> basis;
    for (int f = 0; f < cols; ++f) {
        if (std::find(pivcol.begin(), pivcol.end(), f) != pivcol.end()) continue;
        std::vector<Rational> v(cols, 0);
        v[f] = 1;
        for (int i = 0; i < static_cast<int>(pivcol.size()); ++i) v[pivcol[i]] = -m[i][f];
        basis.push_back(v);
    }
    return basis;
}

Rational det(std::vector<std::vector<Rational>> m) {
    int n = static_cast<int>(m.size());
    Rational d = 1;
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
            if (m[i][c] != 0) {
                p = i;
                break;
            }
        if (p < 0) return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            d = -d;
        }
        d *= m[c][c];
        for (int i = c + 1; i < n; ++i) {
            Rational f = m[i][c] / m[c][c];
            for (int k = c; k < n; ++k) m[i][k] -= f * m[c][k];
        }
    }
    return d;
}
}  // namespace

Quiver::Quiver(std::vector<std::string> labels, std::vector<Arrow> arrows) : labels_(std::move(labels)), arrows_(std::move(arrows)) {
    for (auto& a : arrows_)
        if (a.s < 0 || a.t < 0 || a.s >= n() || a.t >= n()) throw std::invalid_argument("arrow endpoint out of range");
    if (topological_order())
        kind_ = QuiverKind::Acyclic;
    else if (n() == 1 && arrows_.size() == 1)
        kind_ = QuiverKind::Jordan;
    else if (is_cyclic_orientation(n(), arrows_))
        kind_ = QuiverKind::Cyclic;
    else
        throw std::invalid_argument("unsupported quiver: oriented cycles other than the cyclic orientation");
    id_ = "n" + std::to_string(n());
    std::vector<std::pair<int, int>> sorted;
    for (auto& a : arrows_) sorted.push_back({a.s, a.t});
    std::sort(sorted.begin(), sorted.end());
    for (auto& [s, t] : sorted) id_ += "_" + std::to_string(s) + "." + std::to_string(t);
}

Quiver Quiver::kronecker() { return Quiver({"0", "1"}, {{0, 1}, {0, 1}}); }

Quiver Quiver::cyclic(int n) {
    if (n < 1) throw std::invalid_argument("cyclic quiver needs n >= 1");
    if (n == 1) return jordan();
    std::vector<std::string> labels;
    std::vector<Arrow> arrows;
    for (int i = 0; i < n; ++i) {
        labels.push_back(std::to_string(i + 1));
        arrows.push_back({i, (i + 1) % n});
    }
    return Quiver(labels, arrows);
}

Quiver Quiver::linear_An(int n, const std::string& orientation) {
    if (n < 1) throw std::invalid_argument("A_n needs n >= 1");
    std::string o = orientation.empty() ? std::string(n - 1, 'R') : orientation;
    if (static_cast<int>(o.size()) != n - 1) throw std::invalid_argument("orientation string must have n-1 letters");
    std::vector<std::string> labels;
    std::vector<Arrow> arrows;
    for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i + 1));
    for (int i = 0; i + 1 < n; ++i) {
        if (o[i] == 'R')
            arrows.push_back({i, i + 1});
        else if (o[i] == 'L')
            arrows.push_back({i + 1, i});
        else
            throw std::invalid_argument("orientation letters are R or L");
    }
    return Quiver(labels, arrows);
}

Quiver Quiver::jordan() { return Quiver({"1"}, {{0, 0}}); }

Quiver Quiver::from_json(const nlohmann::json& j) {
    std::vector<std::string> labels;
    for (auto& v : j.at("vertices")) labels.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    auto find = [&](const nlohmann::json& v) {
        std::string s = v.is_string() ? v.get<std::string>() : v.dump();
        auto it = std::find(labels.begin(), labels.end(), s);
        if (it == labels.end()) throw std::invalid_argument("unknown vertex " + s);
        return static_cast<int>(it - labels.begin());
    };
    std::vector<Arrow> arrows;
    for (auto& a : j.at("arrows")) arrows.push_back({find(a.at(0)), find(a.at(1))});
    return Quiver(labels, arrows);
}

Quiver Quiver::parse(const std::string& spec) {
    if (spec == "kronecker") return kronecker();
    if (spec == "jordan") return jordan();
    if (spec.rfind("cyclic:", 0) == 0) return cyclic(std::stoi(spec.substr(7)));
    if (spec.rfind("linear_A", 0) == 0) {
        auto rest = spec.substr(8);
        auto colon = rest.find(':');
        return linear_An(std::stoi(rest.substr(0, colon)), colon == std::string::npos ? "" : rest.substr(colon + 1));
    }
    if (spec.size() >= 2 && spec[0] == 'A' && std::isdigit(static_cast<unsigned char>(spec[1]))) return linear_An(std::stoi(spec.substr(1)));
    if (!spec.empty() && spec[0] == '{') return from_json(nlohmann::json::parse(spec));
    throw std::invalid_argument("unknown quiver spec: " + spec);
}

nlohmann::json Quiver::to_json() const {
    nlohmann::json arrows = nlohmann::json::array();
    for (auto& a : arrows_) arrows.push_back({labels_[a.s], labels_[a.t]});
    return {{"vertices", labels_}, {"arrows", arrows}};
}

int Quiver::vertex(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw std::invalid_argument("unknown vertex " + label);
    return static_cast<int>(it - labels_.begin());
}

bool Quiver::is_sink(int i) const {
    for (auto& a : arrows_)
        if (a.s == i) return false;
    return true;
}

bool Quiver::is_source(int i) const {
    for (auto& a : arrows_)
        if (a.t == i) return false;
    return true;
}

std::optional<std::vector<int>> Quiver::topological_order() const {
    // Kahn with smallest index first, so ties break by vertex order
    std::vector<int> indeg(n(), 0), order;
    for (auto& a : arrows_) ++indeg[a.t];
    std::vector<bool> done(n(), false);
    for (int step = 0; step < n(); ++step) {
        int pick = -1;
        for (int i = 0; i < n(); ++i)
            if (!done[i] && indeg[i] == 0) {
                pick = i;
                break;
            }
        if (pick < 0) return std::nullopt;
        done[pick] = true;
        order.push_back(pick);
        for (auto& a : arrows_)
            if (a.s == pick) --indeg[a.t];
    }
    return order;
}

Quiver Quiver::reflected_at(int i) const {
    std::vector<Arrow> arrows = arrows_;
    for (auto& a : arrows)
        if ((a.s == i) != (a.t == i)) std::swap(a.s, a.t);
    return Quiver(labels_, arrows);
}

int Quiver::euler_form(const DimVector& a, const DimVector& b) const {
    if (static_cast<int>(a.size()) != n() || static_cast<int>(b.size()) != n()) throw std::invalid_argument("dimension vector size mismatch");
    int r = 0;
    for (int i = 0; i < n(); ++i) r += a[i] * b[i];
    for (auto& h : arrows_) r -= a[h.s] * b[h.t];
    return r;
}

int Quiver::symmetric_form(const DimVector& a, const DimVector& b) const { return euler_form(a, b) + euler_form(b, a); }

DimVector Quiver::simple(int i) const {
    DimVector e(n(), 0);
    e.at(i) = 1;
    return e;
}

DimVector Quiver::reflect(int i, const DimVector& v) const {
    DimVector r = v;
    r[i] -= symmetric_form(v, simple(i));
    return r;
}

bool Quiver::is_affine() const {
    std::vector<std::vector<Rational>> c(n(), std::vector<Rational>(n()));
    for (int i = 0; i < n(); ++i)
        for (int j = 0; j < n(); ++j) c[i][j] = symmetric_form(simple(i), simple(j));
    auto ker = kernel(c, n());
    if (ker.size() != 1) return false;
    auto& k = ker[0];
    bool pos = std::all_of(k.begin(), k.end(), [](auto& x) { return x > 0; });
    bool neg = std::all_of(k.begin(), k.end(), [](auto& x) { return x < 0; });
    if (!pos && !neg) return false;
    // deleting vertex 0 must leave a positive definite form
    for (int m = 1; m < n(); ++m) {
        std::vector<std::vector<Rational>> sub(m, std::vector<Rational>(m));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) sub[i][j] = c[i + 1][j + 1];
        if (det(sub) <= 0) return false;
    }
    return true;
}

DimVector Quiver::delta() const {
    if (!is_affine()) throw std::invalid_argument("quiver is not affine");
    std::vector<std::vector<Rational>> c(n(), std::vector<Rational>(n()));
    for (int i = 0; i < n(); ++i)
        for (int j = 0; j < n(); ++j) c[i][j] = symmetric_form(simple(i), simple(j));
    auto k = kernel(c, n())[0];
    // clear denominators, then divide by the gcd
    BigInt l = 1;
    for (auto& x : k) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(x));
    std::vector<BigInt> ints;
    for (auto& x : k) ints.push_back(boost::multiprecision::numerator(Rational(x * l)));
    BigInt g = 0;
    for (auto& x : ints) g = boost::multiprecision::gcd(g, x);
    DimVector d;
    for (auto& x : ints) d.push_back(static_cast<int>(x / g));
    if (d[0] < 0)
        for (auto& x : d) x = -x;
    return d;
}

int Quiver::defect(const DimVector& v) const { return euler_form(delta(), v); }

bool Quiver::is_root(const DimVector& v) const {
    if (is_zero(v)) return false;
    bool pos = std::all_of(v.begin(), v.end(), [](int x) { return x >= 0; });
    bool neg = std::all_of(v.begin(), v.end(), [](int x) { return x <= 0; });
    if (!pos && !neg) return false;
    return symmetric_form(v, v) <= 2;
}

DimVector operator+(const DimVector& a, const DimVector& b) {
    DimVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b.at(i);
    return r;
}

DimVector operator-(const DimVector& a, const DimVector& b) {
    DimVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b.at(i);
    return r;
}

DimVector scaled(const DimVector& a, int k) {
    DimVector r(a);
    for (auto& x : r) x *= k;
    return r;
}

bool leq(const DimVector& a, const DimVector& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b.at(i)) return false;
    return true;
}

bool is_zero(const DimVector& a) {
    return std::all_of(a.begin(), a.end(), [](int x) { return x == 0; });
}

int total(const DimVector& a) {
    int s = 0;
    for (int x : a) s += x;
    return s;
}

std::string dim_str(const DimVector& a) {
    std::string s = "(";
    for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
    return s + ")";
}

AdmissibleSequence::AdmissibleSequence(const Quiver& q) {
    auto o = q.topological_order();
    if (!o) throw std::invalid_argument("admissible sequence needs an acyclic quiver");
    order_ = *o;
}

int AdmissibleSequence::at(int t) const {
    int n = period();
    int k = ((t - 1) % n + n) % n;
    return order_[k];
}

std::optional<DimVector> beta(const Quiver& q, const AdmissibleSequence& seq, int t) {
    DimVector v = q.simple(seq.at(t));
    if (t <= 0) {
        for (int k = t + 1; k <= 0; ++k) v = q.reflect(seq.at(k), v);
    } else {
        for (int k = t - 1; k >= 1; --k) v = q.reflect(seq.at(k), v);
    }
    if (!std::all_of(v.begin(), v.end(), [](int x) { return x >= 0; })) return std::nullopt;
    return v;
}

bool is_admissible_sink_sequence(const Quiver& q, const std::vector<int>& js) {
    Quiver cur = q;
    for (int j : js) {
        if (!cur.is_sink(j)) return false;
        cur = cur.reflected_at(j);
    }
    return true;
}

bool is_admissible_source_sequence(const Quiver& q, const std::vector<int>& js) {
    Quiver cur = q;
    for (int j : js) {
        if (!cur.is_source(j)) return false;
        cur = cur.reflected_at(j);
    }
    return true;
}

}  // namespace hallcanon
