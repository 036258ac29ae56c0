// hallcanon: canonical bases, Hall polynomials, bundle verification, cache maintenance
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "hallcanon/canonical.hpp"

using namespace hallcanon;
using nlohmann::json;

namespace {

struct Job {
    std::string quiver = "kronecker";
    std::string dim;
    std::vector<int> primes;
    std::uint64_t budget = 0;
    int series_order = 10;
    std::string cache_dir;
    std::string format = "json";
    int threads = 1;
    unsigned seed = 1;
    std::string out;
    bool dump_transition = false;
};

int fail(const std::string& kind, const std::string& msg) {
    std::cout << json{{"error", {{"kind", kind}, {"message", msg}}}}.dump() << "\n";
    return 2;
}

DimVector parse_dim(const std::string& s, int n) {
    DimVector d;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        int x = std::stoi(tok, &used);
        if (used != tok.size() || x < 0) throw std::invalid_argument("bad dimension entry '" + tok + "'");
        d.push_back(x);
    }
    if (static_cast<int>(d.size()) != n) throw std::invalid_argument("dimension vector needs " + std::to_string(n) + " entries");
    return d;
}

ModuleType parse_type(const Quiver& q, const std::string& s) {
    if (!s.empty() && s[0] == '{') return ModuleType::from_json(json::parse(s));
    if (family_of(q) == Family::Kronecker) throw std::invalid_argument("kronecker module types are given as JSON");
    bool linear = q.kind() != QuiverKind::Cyclic && q.kind() != QuiverKind::Jordan;
    return ModuleType::of(Multisegment::parse(q.n(), linear, s));
}

AlgebraContext context(const Job& job, PolyCache* cache) {
    AlgebraContext ctx;
    ctx.quiver = std::make_shared<Quiver>(Quiver::parse(job.quiver));
    ctx.cache = cache;
    ctx.threads = job.threads;
    ctx.budget = job.budget;
    if (!job.primes.empty()) {
        for (int p : job.primes) Field::get(p);  // throws on non prime powers
        ctx.fit.qs = job.primes;
    }
    return ctx;
}

void emit(const Job& job, const std::string& text) {
    if (job.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(job.out);
    if (!f) throw std::runtime_error("cannot write " + job.out);
    f << text;
}

int cmd_canonical(const Job& job) {
    PolyCache cache(job.cache_dir);
    auto ctx = context(job, &cache);
    if (ctx.quiver->kind() == QuiverKind::Jordan)
        return fail("unsupported", "the Jordan quiver has no composition algebra canonical basis here");
    DimVector nu = parse_dim(job.dim, ctx.quiver->n());
    auto cb = canonical_basis(ctx, nu);
    VerifyOptions opt;
    opt.series_order = job.series_order;
    auto report = verify(ctx, cb, opt);
    json bundle = bundle_json(*ctx.quiver, cb, report);
    bundle["config"] = {{"primes", ctx.fit.qs}, {"series_order", job.series_order}, {"seed", job.seed}, {"linear_extension", 0}};
    if (job.format == "latex") {
        std::string tex = latex_table(cb);
        if (job.dump_transition) {
            std::ostringstream os;
            os << "% monomial over E\n" << mat_json(cb.pbw.a).dump() << "\n% E over monomial\n" << mat_json(cb.pbw.a_inv).dump() << "\n";
            tex += os.str();
        }
        emit(job, tex);
    } else {
        if (job.dump_transition) bundle["E_over_monomial"] = mat_json(cb.pbw.a_inv);
        emit(job, bundle.dump(2) + "\n");
    }
    if (!report.ok()) {
        std::cerr << json{{"error", {{"kind", "verification"}, {"failures", report.failures}}}}.dump() << "\n";
        return 1;
    }
    return 0;
}

int cmd_hallpoly(const Job& job, const std::string& l, const std::string& m, const std::string& n) {
    PolyCache cache(job.cache_dir);
    auto ctx = context(job, &cache);
    const Quiver& q = *ctx.quiver;
    HallTriple t{parse_type(q, l), parse_type(q, m), parse_type(q, n)};
    auto h = hall_polynomial(ctx.quiver, t, &cache, ctx.fit, job.budget);
    json out = h.to_json();
    out["quiver"] = q.id();
    out["L"] = t.l.str();
    out["M"] = t.m.str();
    out["N"] = t.n.str();
    out["polynomial"] = h.poly.str();
    std::cout << out.dump(2) << "\n";
    return 0;
}

LMatrix read_matrix(const json& j) {
    LMatrix m;
    for (auto& row : j) {
        std::vector<LaurentPoly> r;
        for (auto& x : row) r.push_back(LaurentPoly::parse(x.get<std::string>()));
        m.push_back(r);
    }
    return m;
}

// checks that need only the bundle, then a full recomputation
int cmd_verify(const Job& job, const std::string& path) {
    std::ifstream f(path);
    if (!f) return fail("io", "cannot read " + path);
    json b = json::parse(f);
    std::vector<std::string> problems;
    LMatrix a = read_matrix(b.at("monomial_over_E")), g = read_matrix(b.at("g"));
    LMatrix over_m = mat_mul(g, unitriangular_inverse(a));
    if (mat_bar(over_m) != over_m) problems.push_back("C is not bar-invariant over monomials");
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t k = 0; k < g.size(); ++k) {
            bool good = i == k ? g[i][k] == LaurentPoly(1) : (k < i ? in_vinv_Z(g[i][k]) : g[i][k].is_zero());
            if (!good) problems.push_back("g is not unitriangular at (" + std::to_string(i) + "," + std::to_string(k) + ")");
        }

    PolyCache cache(job.cache_dir);
    Job j2 = job;
    j2.quiver = b.at("quiver").dump();
    auto ctx = context(j2, &cache);
    DimVector nu = b.at("dim").get<DimVector>();
    auto cb = canonical_basis(ctx, nu);
    VerifyOptions opt;
    opt.series_order = job.series_order;
    auto report = verify(ctx, cb, opt);
    for (auto& s : report.failures) problems.push_back(s);
    if (mat_json(cb.c_over_n) != b.at("C_over_N")) problems.push_back("C_over_N differs from a recomputation");
    if (mat_json(cb.pbw.e_over_n) != b.at("E_over_N")) problems.push_back("E_over_N differs from a recomputation");
    std::cout << json{{"ok", problems.empty()}, {"problems", problems}}.dump(2) << "\n";
    return problems.empty() ? 0 : 1;
}

int cmd_cache(const Job& job, const std::string& action) {
    PolyCache cache(job.cache_dir);
    if (cache.dir().empty()) return fail("config", "no cache directory");
    if (action == "gc") {
        std::cout << json{{"removed", cache.gc()}}.dump() << "\n";
        return 0;
    }
    auto entries = cache.list();
    json arr = json::array();
    int bad = 0;
    for (auto& e : entries) {
        bad += !e.valid;
        if (action == "list" || !e.valid) arr.push_back({{"path", e.path}, {"key", e.key}, {"valid", e.valid}});
    }
    if (action == "list") {
        std::cout << arr.dump(2) << "\n";
        return 0;
    }
    std::cout << json{{"records", entries.size()}, {"corrupt", bad}, {"bad", arr}}.dump(2) << "\n";
    return bad ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"canonical bases of Ringel-Hall composition algebras"};
    app.require_subcommand(1);
    Job job;
    const char* env = std::getenv("HALLCANON_CACHE");
    job.cache_dir = env ? env : PolyCache::default_dir();

    auto common = [&](CLI::App* s) {
        s->add_option("--quiver", job.quiver, "kronecker, cyclic:n, An, jordan or quiver JSON");
        s->add_option("--primes", job.primes, "sample field sizes for polynomial fits")->delimiter(',');
        s->add_option("--budget-subspaces", job.budget, "submodule enumeration budget per count (0 = none)");
        s->add_option("--series-order", job.series_order, "order of the v^-1 tail checks");
        s->add_option("--cache-dir", job.cache_dir, "Hall polynomial cache (default $HALLCANON_CACHE)");
        s->add_option("--format", job.format)->check(CLI::IsMember({"json", "latex"}));
        s->add_option("--threads", job.threads)->check(CLI::PositiveNumber);
        s->add_option("--seed", job.seed);
        s->add_option("-o,--out", job.out, "write output here instead of stdout");
    };

    auto* canon = app.add_subcommand("canonical", "canonical basis for one dimension vector");
    common(canon);
    canon->add_option("--dim", job.dim, "dimension vector, e.g. 2,1")->required();
    canon->add_flag("--dump-transition", job.dump_transition, "include the monomial/E transition matrices");

    std::string l, m, n;
    auto* hp = app.add_subcommand("hallpoly", "Hall polynomial g^L_{MN} (M quotient, N submodule)");
    common(hp);
    hp->add_option("L", l)->required();
    hp->add_option("M", m)->required();
    hp->add_option("N", n)->required();

    std::string bundle;
    auto* ver = app.add_subcommand("verify", "re-check an emitted bundle");
    common(ver);
    ver->add_option("bundle", bundle)->required();

    std::string action;
    auto* cache = app.add_subcommand("cache", "inspect the Hall polynomial cache");
    common(cache);
    cache->add_option("action", action)->required()->check(CLI::IsMember({"list", "gc", "verify"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    try {
        if (*canon) return cmd_canonical(job);
        if (*hp) return cmd_hallpoly(job, l, m, n);
        if (*ver) return cmd_verify(job, bundle);
        return cmd_cache(job, action);
    } catch (const std::invalid_argument& e) {
        return fail("input", e.what());
    } catch (const std::exception& e) {
        return fail("computation", e.what());
    }
}
