#include "hallcanon/multisegment.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace hallcanon {

int Multisegment::mult(int i, int l) const {
    auto it = seg_.find({i, l});
    return it == seg_.end() ? 0 : it->second;
}

void Multisegment::add(int i, int l, int m) {
    if (i < 0 || i >= n_ || l < 1) throw std::invalid_argument("bad segment");
    if (linear_ && i + l > n_) throw std::invalid_argument("segment runs off the end of A_n");
    int& slot = seg_[{i, l}];
    slot += m;
    if (slot < 0) throw std::invalid_argument("negative segment multiplicity");
    if (slot == 0) seg_.erase({i, l});
}

int Multisegment::total_length() const {
    int s = 0;
    for (auto& [k, m] : seg_) s += k.second * m;
    return s;
}

int Multisegment::max_length() const {
    int s = 0;
    for (auto& [k, m] : seg_) s = std::max(s, k.second);
    return s;
}

DimVector Multisegment::dim() const {
    DimVector d(n_, 0);
    for (auto& [k, m] : seg_)
        for (int j = 0; j < k.second; ++j) d[(k.first + j) % n_] += m;
    return d;
}

bool Multisegment::is_aperiodic() const {
    if (linear_) return true;
    for (int l = 1; l <= max_length(); ++l) {
        bool all = true;
        for (int i = 0; i < n_ && all; ++i)
            if (mult(i, l) == 0) all = false;
        if (all) return false;
    }
    return true;
}

Multisegment Multisegment::operator+(const Multisegment& o) const {
    Multisegment r = *this;
    for (auto& [k, m] : o.seg_) r.add(k.first, k.second, m);
    return r;
}

bool Multisegment::operator<(const Multisegment& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    if (linear_ != o.linear_) return linear_ < o.linear_;
    return seg_ < o.seg_;
}

std::string Multisegment::str() const {
    if (seg_.empty()) return "0";
    std::string s;
    for (auto& [k, m] : seg_) {
        if (!s.empty()) s += "+";
        if (m != 1) s += std::to_string(m);
        s += "[" + std::to_string(k.first + 1) + ";" + std::to_string(k.second) + ")";
    }
    return s;
}

nlohmann::json Multisegment::to_json() const {
    nlohmann::json segs = nlohmann::json::array();
    for (auto& [k, m] : seg_) segs.push_back({k.first + 1, k.second, m});
    return {{"n", n_}, {"linear", linear_}, {"segments", segs}};
}

Multisegment Multisegment::from_json(const nlohmann::json& j) {
    Multisegment r(j.at("n").get<int>(), j.at("linear").get<bool>());
    for (auto& s : j.at("segments")) r.add(s.at(0).get<int>() - 1, s.at(1).get<int>(), s.at(2).get<int>());
    return r;
}

Multisegment Multisegment::parse(int n, bool linear, const std::string& text) {
    Multisegment r(n, linear);
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty() || s == "0") return r;
    std::size_t pos = 0;
    while (pos < s.size()) {
        if (s[pos] == '+') ++pos;
        int m = 1;
        std::size_t b = s.find('[', pos);
        if (b == std::string::npos) throw std::invalid_argument("bad multisegment: " + text);
        if (b > pos) m = std::stoi(s.substr(pos, b - pos));
        std::size_t semi = s.find(';', b), close = s.find(')', b);
        if (semi == std::string::npos || close == std::string::npos) throw std::invalid_argument("bad multisegment: " + text);
        r.add(std::stoi(s.substr(b + 1, semi - b - 1)) - 1, std::stoi(s.substr(semi + 1, close - semi - 1)), m);
        pos = close + 1;
    }
    return r;
}

Multisegment Multisegment::segment(int n, bool linear, int i, int l, int m) {
    Multisegment r(n, linear);
    r.add(i, l, m);
    return r;
}

std::vector<Multisegment> enumerate_multisegments(int n, bool linear, const DimVector& nu) {
    std::vector<std::pair<int, int>> segs;
    int tot = total(nu);
    for (int l = 1; l <= tot; ++l)
        for (int i = 0; i < n; ++i)
            if (!linear || i + l <= n) segs.push_back({i, l});
    std::vector<Multisegment> out;
    Multisegment cur(n, linear);
    DimVector left = nu;
    std::function<void(std::size_t)> go = [&](std::size_t k) {
        if (is_zero(left)) {
            out.push_back(cur);
            return;
        }
        if (k == segs.size()) return;
        auto [i, l] = segs[k];
        // how many copies fit
        int maxm = tot;
        for (int j = 0; j < l; ++j) {
            int v = (i + j) % n;
            int cnt = 0;
            for (int jj = 0; jj < l; ++jj)
                if ((i + jj) % n == v) ++cnt;
            maxm = std::min(maxm, left[v] / cnt);
        }
        for (int m = 0; m <= maxm; ++m) {
            if (m) {
                for (int j = 0; j < l; ++j) --left[(i + j) % n];
                cur.add(i, l, 1);
            }
            go(k + 1);
        }
        for (int j = 0; j < l; ++j) left[(i + j) % n] += maxm;
        if (maxm) cur.add(i, l, -maxm);
    };
    go(0);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace hallcanon
