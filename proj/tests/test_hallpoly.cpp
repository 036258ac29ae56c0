#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "hallcanon/hallpoly.hpp"

using namespace hallcanon;
namespace fs = std::filesystem;

namespace {
QuiverPtr qp(const Quiver& q) { return std::make_shared<Quiver>(q); }

ModuleType ms(int n, const std::string& s) { return ModuleType::of(Multisegment::parse(n, false, s)); }

std::string tmpdir(const std::string& tag) {
    auto p = fs::temp_directory_path() / ("hallcanon-test-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(p);
    return p.string();
}

QPoly qpoly(std::initializer_list<int> c) {
    std::vector<Rational> r;
    for (int x : c) r.emplace_back(x);
    return QPoly(r);
}
}  // namespace

TEST_CASE("interpolation is exact") {
    // (q-2)(q-3)/2 has half-integer coefficients
    std::vector<std::pair<Rational, Rational>> pts;
    for (int x : {0, 1, 4, 7}) pts.emplace_back(x, Rational((x - 2) * (x - 3), 2));
    auto p = interpolate(pts);
    CHECK(p.degree() == 2);
    CHECK(p.c[2] == Rational(1, 2));
    CHECK(p.c[0] == 3);
    CHECK_FALSE(p.integral());
    CHECK(interpolate({{2, 5}}).str() == "5");
    CHECK(qpoly({0, -1, 0, 1}).str() == "q^3 - q");
    CHECK(qpoly({1, 1}).to_laurent() == LaurentPoly::v(2) + LaurentPoly(1));
    CHECK(QPoly::from_json(qpoly({3, 0, -2}).to_json()) == qpoly({3, 0, -2}));
    CHECK_THROWS(interpolate({{1, 1}, {1, 2}}));
}

TEST_CASE("closed points") {
    for (int q : {2, 3, 4, 5}) {
        const Field& f = Field::get(q);
        for (int d = 1; d <= 3; ++d) CHECK(count_closed_points(q, d) == closed_points(f, d).size());
    }
    CHECK(enough_points({{1, 3}}, 2));
    CHECK_FALSE(enough_points({{1, 4}}, 2));
    CHECK(enough_points({{2, 1}, {1, 3}}, 2));
}

TEST_CASE("hall polynomials, named examples") {
    PolyCache mem("");
    auto jq = qp(Quiver::jordan());
    auto h = hall_polynomial(jq, {ms(1, "2[1;1)"), ms(1, "[1;1)"), ms(1, "[1;1)")}, &mem);
    CHECK(h.poly == qpoly({1, 1}));
    CHECK(h.poly.str() == "q + 1");
    REQUIRE(h.samples.size() >= 2);
    CHECK(h.samples[0] == std::make_pair(2, BigInt(3)));
    CHECK(h.validations.size() == 2);
    for (auto& [q, c] : h.validations) CHECK(c == q + 1);

    auto c2 = qp(Quiver::cyclic(2));
    auto g = hall_polynomial(c2, {ms(2, "[1;2)"), ms(2, "[1;1)"), ms(2, "[2;1)")}, &mem);
    CHECK(g.poly == qpoly({1}));
    auto z = hall_polynomial(c2, {ms(2, "[1;2)"), ms(2, "[2;1)"), ms(2, "[1;1)")}, &mem);
    CHECK(z.poly.c.empty());
    auto bad = hall_polynomial(c2, {ms(2, "[1;2)"), ms(2, "[1;1)"), ms(2, "[1;1)")}, &mem);
    CHECK(bad.poly.c.empty());
    CHECK(bad.samples.empty());

    // Kronecker regulars sharing slots
    auto kr = qp(Quiver::kronecker());
    auto r1 = ModuleType::kron({}, {}, {{0, 1, Partition{1}}});
    auto r2 = ModuleType::kron({}, {}, {{1, 1, Partition{1}}});
    auto r11 = ModuleType::kron({}, {}, {{0, 1, Partition{1, 1}}});
    auto split = ModuleType::kron({}, {}, {{0, 1, Partition{1}}, {1, 1, Partition{1}}});
    CHECK(hall_polynomial(kr, {split, r1, r2}, &mem).poly == qpoly({1}));
    CHECK(hall_polynomial(kr, {r11, r1, r1}, &mem).poly == qpoly({1, 1}));
    // S_0 on top of S_1: every dim-(1,1) class except the split one has Hall number 1
    auto s1 = ModuleType::kron({{0, 1}}, {});
    auto s0 = ModuleType::kron({}, {{1, 1}});
    CHECK(hall_polynomial(kr, {r1, s0, s1}, &mem).poly == qpoly({1}));
    CHECK(hall_polynomial(kr, {r1, s1, s0}, &mem).poly.c.empty());
}

TEST_CASE("automorphism polynomials against enumeration") {
    auto jq = qp(Quiver::jordan());
    CHECK(aut_polynomial(jq, ms(1, "[1;1)")) == qpoly({-1, 1}));
    CHECK(aut_polynomial(jq, ms(1, "2[1;1)")) == qpoly({0, 1, -1, -1, 1}));
    auto c2 = qp(Quiver::cyclic(2));
    CHECK(aut_polynomial(c2, ms(2, "[1;2)")) == qpoly({-1, 1}));

    std::vector<std::pair<QuiverPtr, ModuleType>> cases;
    for (auto& [n, total] : std::vector<std::pair<int, int>>{{1, 3}, {2, 4}, {3, 3}}) {
        auto q = n == 1 ? jq : qp(Quiver::cyclic(n));
        DimVector d(n, 0);
        std::function<void(int, int)> rec = [&](int i, int left) {
            if (i == n) {
                for (auto& m : enumerate_multisegments(n, false, d)) cases.emplace_back(q, ModuleType::of(m));
                return;
            }
            for (int k = 0; k <= left; ++k) {
                d[i] = k;
                rec(i + 1, left - k);
            }
        };
        rec(0, total);
    }
    auto kr = qp(Quiver::kronecker());
    cases.emplace_back(kr, ModuleType::kron({{0, 2}}, {{1, 1}}));
    cases.emplace_back(kr, ModuleType::kron({{-1, 1}}, {}, {{0, 1, Partition{1}}}));
    cases.emplace_back(kr, ModuleType::kron({}, {}, {{0, 1, Partition{2}}}));
    cases.emplace_back(kr, ModuleType::kron({}, {}, {{0, 1, Partition{1, 1}}}));
    cases.emplace_back(kr, ModuleType::kron({}, {}, {{0, 2, Partition{1}}}));
    cases.emplace_back(kr, ModuleType::kron({{0, 1}}, {}, {{0, 1, Partition{1}}, {1, 1, Partition{1}}}));
    int checked = 0;
    for (auto& [q, t] : cases)
        for (int fq : {2, 3}) {
            const Field& f = Field::get(fq);
            auto m = realize(q, t, f);
            if (end_dim(m) * std::log2(fq) > 20) continue;
            CAPTURE(t.str());
            CHECK(aut_polynomial(q, t).eval(fq) == Rational(aut_order(m)));
            ++checked;
        }
    CHECK(checked > 40);
}

TEST_CASE("held-out prediction on random triples") {
    std::mt19937_64 rng(2024);
    PolyCache mem("");
    FitConfig cfg;
    int tested = 0;
    for (int n : {2, 3}) {
        auto q = qp(Quiver::cyclic(n));
        std::vector<Multisegment> pool;
        for (int a = 0; a <= 2; ++a)
            for (int b = 0; b <= 2; ++b) {
                DimVector d(n, 0);
                d[0] = a;
                d[1] = b;
                if (a + b == 0 || a + b > 3) continue;
                for (auto& m : enumerate_multisegments(n, false, d)) pool.push_back(m);
            }
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        for (int trial = 0; trial < 12; ++trial) {
            auto m = pool[pick(rng)], nn = pool[pick(rng)];
            auto ls = enumerate_multisegments(n, false, m.dim() + nn.dim());
            auto l = ls[std::uniform_int_distribution<std::size_t>(0, ls.size() - 1)(rng)];
            HallTriple t{ModuleType::of(l), ModuleType::of(m), ModuleType::of(nn)};
            auto h = hall_polynomial(q, t, &mem, cfg);
            CAPTURE(l.str());
            CAPTURE(m.str());
            CAPTURE(nn.str());
            CHECK(h.poly.integral());
            int held = 0;
            for (int p : {5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
                bool used = false;
                for (auto& s : h.samples) used |= s.first == p;
                for (auto& s : h.validations) used |= s.first == p;
                if (!used) {
                    held = p;
                    break;
                }
            }
            CHECK(h.poly.eval(held) == Rational(hall_count(q, t, held)));
            ++tested;
        }
    }
    CHECK(tested >= 20);
}

TEST_CASE("degree escalation does not change a validated fit") {
    auto jq = qp(Quiver::jordan());
    HallTriple t{ms(1, "3[1;1)"), ms(1, "[1;1)"), ms(1, "2[1;1)")};
    auto count = [&](int fq) { return hall_count(jq, t, fq); };
    auto all = [](int) { return true; };
    auto base = fit_polynomial(count, all, 0, 4, {});
    CHECK(base.poly == qpoly({1, 1, 1}));
    for (int start = base.poly.degree(); start <= 4; ++start) CHECK(fit_polynomial(count, all, start, 4, {}).poly == base.poly);
    // a count that is not polynomial fails after escalation
    CHECK_THROWS(fit_polynomial([](int fq) { return BigInt(fq % 3); }, all, 0, 3, {}));
}

TEST_CASE("flag polynomials") {
    PolyCache mem("");
    auto c2 = qp(Quiver::cyclic(2));
    // S_1 + S_2: one flag of type (2,1), one of type (1,2)
    Word w12{{0, 1}, {1, 1}}, w21{{1, 1}, {0, 1}};
    CHECK(flag_polynomial(c2, ms(2, "[1;1)+[2;1)"), w12, &mem).poly == qpoly({1}));
    CHECK(flag_polynomial(c2, ms(2, "[1;2)"), w21, &mem).poly.c.empty());
    auto jq = qp(Quiver::jordan());
    Word w111{{0, 1}, {0, 1}, {0, 1}};
    // complete flags in a 3-space: (q+1)(q^2+q+1)
    CHECK(flag_polynomial(jq, ms(1, "3[1;1)"), w111, &mem).poly == qpoly({1, 2, 2, 1}));
    auto kr = qp(Quiver::kronecker());
    auto reg = ModuleType::kron({}, {}, {{0, 1, Partition{1, 1}}});
    Word w{{0, 1}, {1, 1}, {0, 1}, {1, 1}};
    auto h = flag_polynomial(kr, reg, w, &mem);
    CHECK(h.poly.eval(19) == Rational(flag_count(realize(kr, reg, Field::get(19)), w)));
}

TEST_CASE("cache round trip, hits and corruption") {
    auto dir = tmpdir("cache");
    auto jq = qp(Quiver::jordan());
    HallTriple t{ms(1, "2[1;1)"), ms(1, "[1;1)"), ms(1, "[1;1)")};
    HallPolynomial first;
    {
        PolyCache c(dir);
        first = hall_polynomial(jq, t, &c);
        CHECK(c.misses() == 1);
    }
    auto before = evaluation_count();
    {
        PolyCache c(dir);
        auto again = hall_polynomial(jq, t, &c);
        CHECK(again.poly == first.poly);
        CHECK(again.samples == first.samples);
        CHECK(c.hits() == 1);
        CHECK(evaluation_count() == before);
        auto entries = c.list();
        REQUIRE(entries.size() == 1);
        CHECK(entries[0].valid);
        CHECK(entries[0].path.find(jq->id()) != std::string::npos);
    }
    // corrupt the record: detected, recomputed, overwritten
    PolyCache c(dir);
    auto path = c.list()[0].path;
    {
        std::ifstream in(path);
        nlohmann::json rec;
        in >> rec;
        rec["poly"] = nlohmann::json::array({"7"});
        std::ofstream out(path);
        out << rec.dump();
    }
    CHECK_FALSE(c.list()[0].valid);
    auto fixed = hall_polynomial(jq, t, &c);
    CHECK(fixed.poly == first.poly);
    CHECK(evaluation_count() > before);
    CHECK(c.list()[0].valid);
    // garbage files are removed by gc
    { std::ofstream(fs::path(dir) / jq->id() / "junk.json") << "{not json"; }
    CHECK(c.list().size() == 2);
    CHECK(c.gc() == 1);
    CHECK(c.list().size() == 1);
    fs::remove_all(dir);
}

TEST_CASE("readers never see a torn record") {
    auto dir = tmpdir("race");
    auto jq = qp(Quiver::jordan());
    nlohmann::json key{{"kind", "test"}};
    HallPolynomial big;
    for (int i = 0; i < 400; ++i) big.poly.c.push_back(Rational(i + 1));
    std::atomic<bool> stop{false};
    std::atomic<int> torn{0}, seen{0};
    std::thread writer([&] {
        PolyCache w(dir);
        for (int i = 0; i < 200; ++i) w.put(jq->id(), key, big);
        stop = true;
    });
    std::vector<std::thread> readers;
    for (int r = 0; r < 3; ++r)
        readers.emplace_back([&] {
            while (!stop) {
                PolyCache rd(dir);
                auto got = rd.get(jq->id(), key);
                if (!got) continue;
                ++seen;
                if (!(got->poly == big.poly)) ++torn;
            }
        });
    writer.join();
    for (auto& t : readers) t.join();
    CHECK(torn == 0);
    PolyCache check(dir);
    CHECK(check.get(jq->id(), key).has_value());
    fs::remove_all(dir);
}
