#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hallcanon/fqrep.hpp"
#include "hallcanon/laurent.hpp"

namespace hallcanon {

// Polynomial in q with rational coefficients, ascending powers.
struct QPoly {
    std::vector<Rational> c;
    QPoly() = default;
    explicit QPoly(std::vector<Rational> coeffs);
    int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero
    Rational eval(const Rational& q) const;
    bool integral() const;
    LaurentPoly to_laurent() const;  // q -> v^2, requires integral coefficients
    std::string str() const;         // "q^2 - q + 1"
    nlohmann::json to_json() const;
    static QPoly from_json(const nlohmann::json& j);
    bool operator==(const QPoly& o) const { return c == o.c; }
};

// exact interpolation through the given points (distinct abscissae)
QPoly interpolate(const std::vector<std::pair<Rational, Rational>>& pts);

// Generic iso-class data: a multisegment, or a Kronecker module whose regular part is given by
// point slots of a fixed degree (realized on distinct closed points at each q).
struct RegSlot {
    int slot;
    int degree;
    Partition part;
    bool operator<(const RegSlot& o) const { return std::tie(slot, degree, part) < std::tie(o.slot, o.degree, o.part); }
    bool operator==(const RegSlot& o) const { return slot == o.slot && degree == o.degree && part == o.part; }
};

struct ModuleType {
    enum Kind { Segments, Kronecker } kind = Segments;
    Multisegment ms;
    std::map<int, int> pre, inj;
    std::vector<RegSlot> reg;  // sorted

    static ModuleType of(const Multisegment& m);
    static ModuleType kron(std::map<int, int> pre, std::map<int, int> inj, std::vector<RegSlot> reg = {});
    DimVector dim(const Quiver& q) const;
    // number of closed points of each degree required
    std::map<int, int> points_needed() const;
    std::string str() const;
    nlohmann::json to_json() const;
    static ModuleType from_json(const nlohmann::json& j);
    bool operator<(const ModuleType& o) const { return to_json().dump() < o.to_json().dump(); }
    bool operator==(const ModuleType& o) const { return to_json() == o.to_json(); }
};

// does GF(q) have enough closed points for the slot requirements
bool enough_points(const std::map<int, int>& needed, int q);
std::uint64_t count_closed_points(int q, int d);
// slot -> concrete point at this q, shared by every module in one key
std::map<int, Point> realize_slots(const std::map<int, int>& slot_degree, const Field& f);
FqModule realize(QuiverPtr q, const ModuleType& t, const Field& f, const std::map<int, Point>& points);
FqModule realize(QuiverPtr q, const ModuleType& t, const Field& f);
// |Aut| from the radical formula, as a polynomial in q
QPoly aut_polynomial(QuiverPtr q, const ModuleType& t);
int generic_end_dim(QuiverPtr q, const ModuleType& t);

struct HallPolynomial {
    QPoly poly;
    std::vector<std::pair<int, BigInt>> samples, validations;
    int min_q = 0;  // smallest q used
    nlohmann::json to_json() const;
    static HallPolynomial from_json(const nlohmann::json& j);
};

struct FitConfig {
    std::vector<int> qs{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31};
    int validations = 2;
};

// Fit a polynomial in q to an integer-valued count: trial degree d uses the first d+1 admissible
// q's, the next `validations` q's must agree. Escalates up to cap_degree, then throws.
HallPolynomial fit_polynomial(const std::function<BigInt(int)>& count, const std::function<bool(int)>& admissible, int start_degree,
                              int cap_degree, const FitConfig& cfg);

// same protocol for rational-valued data (provenance lists stay empty unless every value is integral)
HallPolynomial fit_rational(const std::function<Rational(int)>& value, const std::function<bool(int)>& admissible, int start_degree,
                            int cap_degree, const FitConfig& cfg);

// On-disk content-addressed store: <dir>/<quiver-id>/<sha256(key)>.json
class PolyCache {
public:
    explicit PolyCache(std::string dir);  // empty dir = in-memory only
    static std::string default_dir();     // $HALLCANON_CACHE or ".hallcanon-cache"
    std::optional<HallPolynomial> get(const std::string& quiver_id, const nlohmann::json& key);
    void put(const std::string& quiver_id, const nlohmann::json& key, const HallPolynomial& p);
    const std::string& dir() const { return dir_; }

    struct Entry {
        std::string path;
        nlohmann::json key;
        bool valid;
    };
    std::vector<Entry> list() const;
    int gc();  // removes corrupt records, returns count

    std::uint64_t hits() const { return hits_; }
    std::uint64_t misses() const { return misses_; }

private:
    std::string path_for(const std::string& quiver_id, const nlohmann::json& key) const;
    std::string dir_;
    std::mutex lock_;
    std::map<std::string, HallPolynomial> mem_;
    std::uint64_t hits_ = 0, misses_ = 0;
};

std::string sha256_hex(const std::string& data);
// record checksum over everything but the checksum field
bool record_valid(const nlohmann::json& rec);

struct HallTriple {
    ModuleType l, m, n;
};

// g^L_{MN} as a polynomial in q (M the quotient, N the submodule), all three sharing slots
HallPolynomial hall_polynomial(QuiverPtr q, const HallTriple& t, PolyCache* cache, const FitConfig& cfg = {},
                               std::uint64_t budget = 0);
// count at one q
BigInt hall_count(QuiverPtr q, const HallTriple& t, int fq, std::uint64_t budget = 0);

// number of filtrations of type w on the realized module, as a polynomial in q
HallPolynomial flag_polynomial(QuiverPtr q, const ModuleType& l, const Word& w, PolyCache* cache, const FitConfig& cfg = {});

// counts of evaluations performed (observability for cache tests)
std::uint64_t evaluation_count();

}  // namespace hallcanon
