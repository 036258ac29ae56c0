#include "hallcanon/hallpoly.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>
#include <stdexcept>

namespace hallcanon {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {
std::atomic<std::uint64_t> g_evaluations{0};
constexpr int kRecordVersion = 1;
}  // namespace

std::uint64_t evaluation_count() { return g_evaluations.load(); }

// ---------------------------------------------------------------- QPoly

QPoly::QPoly(std::vector<Rational> coeffs) : c(std::move(coeffs)) {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

Rational QPoly::eval(const Rational& q) const {
    Rational r = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * q + *it;
    return r;
}

bool QPoly::integral() const {
    for (auto& x : c)
        if (denominator(x) != 1) return false;
    return true;
}

LaurentPoly QPoly::to_laurent() const {
    if (!integral()) throw std::domain_error("polynomial in q has non-integral coefficients: " + str());
    std::vector<BigInt> ints;
    for (auto& x : c) ints.push_back(numerator(x));
    return from_qpoly(ints);
}

std::string QPoly::str() const {
    if (c.empty()) return "0";
    std::string out;
    for (int e = degree(); e >= 0; --e) {
        Rational x = c[e];
        if (x == 0) continue;
        bool neg = x < 0;
        if (neg) x = -x;
        if (out.empty())
            out = neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        std::string mono = e == 0 ? "" : (e == 1 ? "q" : "q^" + std::to_string(e));
        if (x != 1 || e == 0) {
            out += rational_str(x);
            if (!mono.empty()) out += "*";
        }
        out += mono;
    }
    return out;
}

json QPoly::to_json() const {
    json j = json::array();
    for (auto& x : c) j.push_back(rational_str(x));
    return j;
}

QPoly QPoly::from_json(const json& j) {
    std::vector<Rational> c;
    for (auto& x : j) c.emplace_back(x.get<std::string>());
    return QPoly(std::move(c));
}

QPoly interpolate(const std::vector<std::pair<Rational, Rational>>& pts) {
    // Newton divided differences, then expand
    std::size_t n = pts.size();
    std::vector<Rational> dd(n);
    for (std::size_t i = 0; i < n; ++i) dd[i] = pts[i].second;
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t i = n - 1; i >= k; --i) {
            Rational den = pts[i].first - pts[i - k].first;
            if (den == 0) throw std::invalid_argument("interpolation: repeated abscissa");
            dd[i] = (dd[i] - dd[i - 1]) / den;
            if (i == k) break;
        }
    std::vector<Rational> poly{0};
    for (std::size_t k = n; k-- > 0;) {
        // poly = poly * (x - x_k) + dd[k]
        std::vector<Rational> next(poly.size() + 1, Rational(0));
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] += poly[i];
            next[i] -= poly[i] * pts[k].first;
        }
        next[0] += dd[k];
        poly = std::move(next);
    }
    return QPoly(std::move(poly));
}

// ---------------------------------------------------------------- ModuleType

ModuleType ModuleType::of(const Multisegment& m) {
    ModuleType t;
    t.kind = Segments;
    t.ms = m;
    return t;
}

ModuleType ModuleType::kron(std::map<int, int> pre, std::map<int, int> inj, std::vector<RegSlot> reg) {
    ModuleType t;
    t.kind = Kronecker;
    for (auto& [k, m] : pre) {
        if (k > 0) throw std::invalid_argument("preprojective index must be <= 0");
        if (m > 0) t.pre[k] = m;
    }
    for (auto& [k, m] : inj) {
        if (k <= 0) throw std::invalid_argument("preinjective index must be > 0");
        if (m > 0) t.inj[k] = m;
    }
    for (auto& r : reg)
        if (!r.part.empty()) t.reg.push_back(r);
    std::sort(t.reg.begin(), t.reg.end());
    for (std::size_t i = 1; i < t.reg.size(); ++i)
        if (t.reg[i].slot == t.reg[i - 1].slot) throw std::invalid_argument("regular slot used twice");
    return t;
}

DimVector ModuleType::dim(const Quiver& q) const {
    if (kind == Segments) return ms.dim();
    KronDesc d;
    d.pre = pre;
    d.inj = inj;
    DimVector v = d.dim();
    for (auto& r : reg) v = v + scaled(q.delta(), r.degree * r.part.size());
    return v;
}

std::map<int, int> ModuleType::points_needed() const {
    std::map<int, int> out;
    for (auto& r : reg) out[r.degree]++;
    return out;
}

std::string ModuleType::str() const {
    if (kind == Segments) return ms.str();
    std::string out;
    auto sep = [&] {
        if (!out.empty()) out += "+";
    };
    for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
        sep();
        if (it->second > 1) out += std::to_string(it->second);
        out += "P" + std::to_string(-it->first);
    }
    for (auto& r : reg) {
        sep();
        out += "R<" + std::to_string(r.slot) + ":" + std::to_string(r.degree) + ">" + r.part.str();
    }
    for (auto& [k, m] : inj) {
        sep();
        if (m > 1) out += std::to_string(m);
        out += "I" + std::to_string(k);
    }
    return out.empty() ? "0" : out;
}

json ModuleType::to_json() const {
    if (kind == Segments) return json{{"multisegment", ms.to_json()}};
    json p = json::array(), i = json::array(), r = json::array();
    for (auto& [k, m] : pre) p.push_back({k, m});
    for (auto& [k, m] : inj) i.push_back({k, m});
    for (auto& s : reg) r.push_back({s.slot, s.degree, s.part.to_json()});
    return json{{"pre", p}, {"inj", i}, {"reg", r}};
}

ModuleType ModuleType::from_json(const json& j) {
    if (j.contains("multisegment")) return of(Multisegment::from_json(j["multisegment"]));
    std::map<int, int> p, i;
    std::vector<RegSlot> r;
    for (auto& e : j.at("pre")) p[e[0].get<int>()] = e[1].get<int>();
    for (auto& e : j.at("inj")) i[e[0].get<int>()] = e[1].get<int>();
    for (auto& e : j.at("reg")) r.push_back(RegSlot{e[0].get<int>(), e[1].get<int>(), Partition::from_json(e[2])});
    return kron(p, i, r);
}

std::uint64_t count_closed_points(int q, int d) {
    if (d == 1) return static_cast<std::uint64_t>(q) + 1;
    // necklace formula (1/d) sum_{e | d} mu(e) q^{d/e}
    auto mobius = [](int n) {
        int r = 1;
        for (int p = 2; p * p <= n; ++p)
            if (n % p == 0) {
                n /= p;
                if (n % p == 0) return 0;
                r = -r;
            }
        return n > 1 ? -r : r;
    };
    BigInt s = 0;
    for (int e = 1; e <= d; ++e)
        if (d % e == 0) s += mobius(e) * boost::multiprecision::pow(BigInt(q), d / e);
    return static_cast<std::uint64_t>(s / d);
}

bool enough_points(const std::map<int, int>& needed, int q) {
    for (auto& [d, k] : needed)
        if (count_closed_points(q, d) < static_cast<std::uint64_t>(k)) return false;
    return true;
}

std::map<int, Point> realize_slots(const std::map<int, int>& slot_degree, const Field& f) {
    std::map<int, std::vector<int>> by_degree;
    for (auto& [slot, d] : slot_degree) by_degree[d].push_back(slot);
    std::map<int, Point> out;
    for (auto& [d, slots] : by_degree) {
        auto pts = closed_points(f, d);
        if (pts.size() < slots.size()) throw std::invalid_argument("not enough closed points of degree " + std::to_string(d) +
                                                                     " over GF(" + std::to_string(f.q()) + ")");
        for (std::size_t k = 0; k < slots.size(); ++k) out[slots[k]] = pts[k];
    }
    return out;
}

namespace {
std::map<int, int> slot_degrees(const std::vector<const ModuleType*>& ts) {
    std::map<int, int> out;
    for (auto* t : ts)
        for (auto& r : t->reg) {
            auto [it, fresh] = out.emplace(r.slot, r.degree);
            if (!fresh && it->second != r.degree) throw std::invalid_argument("slot used with two degrees");
        }
    return out;
}

int multisegment_vertices(const Quiver& q) { return q.kind() == QuiverKind::Jordan ? 1 : q.n(); }
}  // namespace

FqModule realize(QuiverPtr q, const ModuleType& t, const Field& f, const std::map<int, Point>& points) {
    if (t.kind == ModuleType::Segments) {
        if (t.ms.n() != multisegment_vertices(*q)) throw std::invalid_argument("multisegment does not match quiver");
        return build_multisegment(q, t.ms, f);
    }
    KronDesc d;
    d.pre = t.pre;
    d.inj = t.inj;
    for (auto& r : t.reg) {
        auto it = points.find(r.slot);
        if (it == points.end()) throw std::invalid_argument("unassigned slot");
        if (it->second.degree() != r.degree) throw std::invalid_argument("slot point has wrong degree");
        d.reg.emplace_back(it->second, r.part);
    }
    std::sort(d.reg.begin(), d.reg.end());
    return build_kronecker(q, d, f);
}

FqModule realize(QuiverPtr q, const ModuleType& t, const Field& f) { return realize(q, t, f, realize_slots(slot_degrees({&t}), f)); }

namespace {
int smallest_admissible_q(const std::map<int, int>& needed, const FitConfig& cfg = {}) {
    for (int q : cfg.qs)
        if (enough_points(needed, q)) return q;
    throw std::invalid_argument("no sample field has enough closed points");
}

// [(degree of residue field, multiplicity)] of the indecomposable summands
std::vector<std::pair<int, int>> summand_blocks(const ModuleType& t) {
    std::vector<std::pair<int, int>> out;
    if (t.kind == ModuleType::Segments) {
        for (auto& [seg, m] : t.ms.segments()) out.emplace_back(1, m);
        return out;
    }
    for (auto& [k, m] : t.pre) out.emplace_back(1, m);
    for (auto& [k, m] : t.inj) out.emplace_back(1, m);
    for (auto& r : t.reg) {
        std::map<int, int> mult;
        for (int p : r.part.parts()) mult[p]++;
        for (auto& [p, m] : mult) out.emplace_back(r.degree, m);
    }
    return out;
}

QPoly qpoly_of(const std::vector<BigInt>& c) {
    std::vector<Rational> r(c.begin(), c.end());
    return QPoly(r);
}

std::vector<BigInt> pmul(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
    std::vector<BigInt> r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}
}  // namespace

int generic_end_dim(QuiverPtr q, const ModuleType& t) {
    const Field& f = Field::get(smallest_admissible_q(t.points_needed()));
    return end_dim(realize(q, t, f));
}

QPoly aut_polynomial(QuiverPtr q, const ModuleType& t) {
    // Aut = units of End; End/rad is a product of matrix rings M_m(F_{q^d})
    int e = generic_end_dim(q, t);
    std::vector<BigInt> poly{1};
    for (auto& [d, m] : summand_blocks(t)) {
        e -= d * m * m;
        for (int i = 0; i < m; ++i) {
            std::vector<BigInt> factor(d * m + 1, 0);
            factor[d * m] += 1;
            factor[d * i] -= 1;
            poly = pmul(poly, factor);
        }
    }
    if (e < 0) throw std::logic_error("negative radical dimension for " + t.str());
    std::vector<BigInt> shift(e + 1, 0);
    shift[e] = 1;
    return qpoly_of(pmul(poly, shift));
}

// ---------------------------------------------------------------- fitting

json HallPolynomial::to_json() const {
    json s = json::array(), v = json::array();
    for (auto& [q, c] : samples) s.push_back({q, c.str()});
    for (auto& [q, c] : validations) v.push_back({q, c.str()});
    return json{{"poly", poly.to_json()}, {"samples", s}, {"validations", v}, {"min_q", min_q}};
}

HallPolynomial HallPolynomial::from_json(const json& j) {
    HallPolynomial h;
    h.poly = QPoly::from_json(j.at("poly"));
    for (auto& e : j.at("samples")) h.samples.emplace_back(e[0].get<int>(), BigInt(e[1].get<std::string>()));
    for (auto& e : j.at("validations")) h.validations.emplace_back(e[0].get<int>(), BigInt(e[1].get<std::string>()));
    h.min_q = j.value("min_q", 0);
    return h;
}

HallPolynomial fit_polynomial(const std::function<BigInt(int)>& count, const std::function<bool(int)>& admissible, int start_degree,
                              int cap_degree, const FitConfig& cfg) {
    auto f = fit_rational([&](int q) { return Rational(count(q)); }, admissible, start_degree, cap_degree, cfg);
    if (!f.poly.integral()) throw std::runtime_error("count interpolates to non-integral polynomial " + f.poly.str());
    return f;
}

HallPolynomial fit_rational(const std::function<Rational(int)>& value_at, const std::function<bool(int)>& admissible, int start_degree,
                            int cap_degree, const FitConfig& cfg) {
    std::vector<int> qs;
    for (int q : cfg.qs)
        if (admissible(q)) qs.push_back(q);
    std::map<int, Rational> memo;
    auto value = [&](int q) -> const Rational& {
        auto it = memo.find(q);
        if (it == memo.end()) {
            g_evaluations++;
            it = memo.emplace(q, value_at(q)).first;
        }
        return it->second;
    };
    auto as_int = [](const Rational& r) {
        if (denominator(r) != 1) throw std::runtime_error("sample value is not an integer");
        return numerator(r);
    };
    start_degree = std::max(0, start_degree);
    for (int d = start_degree; d <= std::max(cap_degree, start_degree); ++d) {
        std::size_t need = static_cast<std::size_t>(d + 1 + cfg.validations);
        if (qs.size() < need)
            throw std::runtime_error("not enough sample fields for trial degree " + std::to_string(d) + " (have " +
                                     std::to_string(qs.size()) + ")");
        std::vector<std::pair<Rational, Rational>> pts;
        for (int k = 0; k <= d; ++k) pts.emplace_back(Rational(qs[k]), value(qs[k]));
        QPoly p = interpolate(pts);
        bool ok = true;
        for (int k = d + 1; k < static_cast<int>(need) && ok; ++k) ok = p.eval(qs[k]) == value(qs[k]);
        if (!ok) continue;
        HallPolynomial h;
        h.poly = p;
        bool integral = true;
        for (int k = 0; k < static_cast<int>(need); ++k) integral &= denominator(value(qs[k])) == 1;
        if (integral) {
            for (int k = 0; k <= d; ++k) h.samples.emplace_back(qs[k], as_int(value(qs[k])));
            for (int k = d + 1; k < static_cast<int>(need); ++k) h.validations.emplace_back(qs[k], as_int(value(qs[k])));
        }
        h.min_q = qs.front();
        return h;
    }
    throw std::runtime_error("polynomial validation failed up to degree " + std::to_string(cap_degree));
}

// ---------------------------------------------------------------- cache

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr)) throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

bool record_valid(const json& rec) {
    if (!rec.is_object() || !rec.contains("checksum") || !rec.contains("key") || !rec.contains("poly")) return false;
    json body = rec;
    body.erase("checksum");
    return rec["checksum"] == sha256_hex(body.dump()) && rec.value("version", 0) == kRecordVersion;
}

PolyCache::PolyCache(std::string dir) : dir_(std::move(dir)) {}

std::string PolyCache::default_dir() {
    const char* env = std::getenv("HALLCANON_CACHE");
    return env && *env ? env : ".hallcanon-cache";
}

std::string PolyCache::path_for(const std::string& quiver_id, const json& key) const {
    return (fs::path(dir_) / quiver_id / (sha256_hex(key.dump()) + ".json")).string();
}

std::optional<HallPolynomial> PolyCache::get(const std::string& quiver_id, const json& key) {
    std::string k = quiver_id + "|" + key.dump();
    {
        std::lock_guard<std::mutex> g(lock_);
        auto it = mem_.find(k);
        if (it != mem_.end()) {
            hits_++;
            return it->second;
        }
    }
    if (!dir_.empty()) {
        std::ifstream in(path_for(quiver_id, key));
        if (in) {
            json rec;
            try {
                in >> rec;
            } catch (...) {
                rec = json();
            }
            if (record_valid(rec) && rec["key"] == key) {
                auto h = HallPolynomial::from_json(rec);
                std::lock_guard<std::mutex> g(lock_);
                mem_[k] = h;
                hits_++;
                return h;
            }
        }
    }
    std::lock_guard<std::mutex> g(lock_);
    misses_++;
    return std::nullopt;
}

void PolyCache::put(const std::string& quiver_id, const json& key, const HallPolynomial& p) {
    {
        std::lock_guard<std::mutex> g(lock_);
        mem_[quiver_id + "|" + key.dump()] = p;
    }
    if (dir_.empty()) return;
    json rec = p.to_json();
    rec["key"] = key;
    rec["quiver"] = quiver_id;
    rec["version"] = kRecordVersion;
    rec["created"] = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch()).count();
    rec["checksum"] = sha256_hex(rec.dump());
    fs::path target = path_for(quiver_id, key);
    fs::create_directories(target.parent_path());
    // unique temp name per writer, then atomic rename
    std::ostringstream tmpname;
    tmpname << target.filename().string() << ".tmp." << std::hex << std::hash<std::thread::id>{}(std::this_thread::get_id()) << "."
            << std::chrono::steady_clock::now().time_since_epoch().count();
    fs::path tmp = target.parent_path() / tmpname.str();
    {
        std::ofstream out(tmp);
        out << rec.dump(1) << "\n";
        if (!out) throw std::runtime_error("cannot write cache record " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::vector<PolyCache::Entry> PolyCache::list() const {
    std::vector<Entry> out;
    if (dir_.empty() || !fs::exists(dir_)) return out;
    for (auto& e : fs::recursive_directory_iterator(dir_)) {
        if (!e.is_regular_file() || e.path().extension() != ".json") continue;
        Entry en{e.path().string(), json(), false};
        std::ifstream in(e.path());
        try {
            json rec;
            in >> rec;
            en.valid = record_valid(rec) && e.path().stem() == sha256_hex(rec["key"].dump());
            en.key = rec.value("key", json());
        } catch (...) {
            en.valid = false;
        }
        out.push_back(en);
    }
    std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.path < b.path; });
    return out;
}

int PolyCache::gc() {
    int removed = 0;
    for (auto& e : list())
        if (!e.valid) {
            fs::remove(e.path);
            removed++;
        }
    if (!dir_.empty() && fs::exists(dir_))
        for (auto& e : fs::recursive_directory_iterator(dir_))
            if (e.is_regular_file() && e.path().string().find(".tmp.") != std::string::npos) {
                fs::remove(e.path());
                removed++;
            }
    return removed;
}

// ---------------------------------------------------------------- Hall and flag polynomials

BigInt hall_count(QuiverPtr q, const HallTriple& t, int fq, std::uint64_t budget) {
    const Field& f = Field::get(fq);
    auto pts = realize_slots(slot_degrees({&t.l, &t.m, &t.n}), f);
    auto l = realize(q, t.l, f, pts);
    auto m = realize(q, t.m, f, pts);
    auto n = realize(q, t.n, f, pts);
    return hall_number(l, m, n, budget);
}

HallPolynomial hall_polynomial(QuiverPtr q, const HallTriple& t, PolyCache* cache, const FitConfig& cfg, std::uint64_t budget) {
    json key{{"kind", "hall"}, {"L", t.l.to_json()}, {"M", t.m.to_json()}, {"N", t.n.to_json()}};
    if (cache)
        if (auto hit = cache->get(q->id(), key)) return *hit;
    HallPolynomial h;
    if (t.m.dim(*q) + t.n.dim(*q) != t.l.dim(*q)) {
        h.poly = QPoly();
    } else {
        auto needed = slot_degrees({&t.l, &t.m, &t.n});
        std::map<int, int> per_degree;
        for (auto& [s, d] : needed) per_degree[d]++;
        int q0 = smallest_admissible_q(per_degree, cfg);
        const Field& f0 = Field::get(q0);
        auto pts = realize_slots(needed, f0);
        auto l = realize(q, t.l, f0, pts), m = realize(q, t.m, f0, pts), n = realize(q, t.n, f0, pts);
        // the End-dimension estimate overshoots (4S over the Jordan quiver gives 12 for a quartic),
        // so trial degrees start at 0 and the held-out points do the gating
        int cap = std::max(end_dim(l), hom_dim(n, l));
        h = fit_polynomial([&](int fq) { return hall_count(q, t, fq, budget); },
                           [&](int fq) { return enough_points(per_degree, fq); }, 0, cap, cfg);
    }
    if (cache) cache->put(q->id(), key, h);
    return h;
}

HallPolynomial flag_polynomial(QuiverPtr q, const ModuleType& l, const Word& w, PolyCache* cache, const FitConfig& cfg) {
    json wj = json::array();
    for (auto& s : w) wj.push_back({s.vertex, s.amount});
    json key{{"kind", "flags"}, {"L", l.to_json()}, {"word", wj}};
    if (cache)
        if (auto hit = cache->get(q->id(), key)) return *hit;
    // Grassmannian bound: a flag of subspaces of type w has at most sum a_j (r_j - a_j) parameters
    DimVector rem = l.dim(*q);
    int cap = 0;
    bool possible = true;
    for (auto& s : w) {
        cap += s.amount * std::max(0, rem[s.vertex] - s.amount);
        rem[s.vertex] -= s.amount;
        if (rem[s.vertex] < 0) possible = false;
    }
    HallPolynomial h;
    if (possible && is_zero(rem)) {
        auto needed = l.points_needed();
        h = fit_polynomial(
            [&](int fq) {
                const Field& f = Field::get(fq);
                return BigInt(flag_count(realize(q, l, f), w));
            },
            [&](int fq) { return enough_points(needed, fq); }, 0, cap, cfg);
    }
    if (cache) cache->put(q->id(), key, h);
    return h;
}

}  // namespace hallcanon
