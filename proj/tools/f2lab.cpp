// f2lab: exact desk-scale laboratory for low-degree polynomial samplers
// over F2. Every subcommand prints schema-versioned JSON (or CSV/text where
// noted); all rationals are exact "p/q" strings with 12-digit decimal
// companions. Exit codes: 0 success, 1 domain error (JSON on stderr),
// 2 usage error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "f2lab/dist.hpp"
#include "f2lab/exec.hpp"
#include "f2lab/factors.hpp"
#include "f2lab/gap.hpp"
#include "f2lab/gf2.hpp"
#include "f2lab/quadratic.hpp"
#include "f2lab/rational.hpp"
#include "f2lab/spectral.hpp"
#include "f2lab/subspaces.hpp"
#include "f2lab/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace f2lab;

constexpr const char* kSchema = "f2lab/1";

struct RunConfig {
    int enumeration_cap_m = 28;
    int combo_cap_k = 20;
    int worker_count = 1;
    std::uint64_t seed = 1;
    std::string output_format = "json";
};

ExecPolicy policy_from(const RunConfig& cfg) {
    ExecPolicy p;
    p.workers = cfg.worker_count;
    p.enum_cap_m = cfg.enumeration_cap_m;
    p.combo_cap_k = cfg.combo_cap_k;
    return p;
}

json int_json(const Int& v) {
    static const Int lo = std::numeric_limits<long long>::min();
    static const Int hi = std::numeric_limits<long long>::max();
    if (v >= lo && v <= hi) return v.convert_to<long long>();
    return v.str();
}

void put_rat(json& o, const std::string& key, const Rational& v) {
    o[key] = frac_str(v);
    o[key + "_dec"] = dec_str(v, 12);
}

std::string bitstr(std::uint64_t v, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i)
        if ((v >> i) & 1) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

std::uint64_t parse_bitstr(const std::string& s, int n) {
    if (static_cast<int>(s.size()) != n)
        throw DomainError("bit string has length " + std::to_string(s.size()) +
                          ", expected " + std::to_string(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
        char c = s[static_cast<std::size_t>(i)];
        if (c != '0' && c != '1') throw DomainError("bit string must be over {0,1}");
        if (c == '1') v |= 1ull << i;
    }
    return v;
}

std::string trimmed(const std::string& line) {
    std::string s = line;
    if (auto pos = s.find('#'); pos != std::string::npos) s.erase(pos);
    auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && issp(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && issp(static_cast<unsigned char>(s[i]))) ++i;
    return s.substr(i);
}

std::vector<std::string> content_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open file: " + path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trimmed(line);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

// One expression per line, '#' comments, blank lines ignored. All
// expressions are widened to a common variable count (the max referenced
// index, or the explicit --m override).
std::vector<PolyF2> load_polys(const std::string& path, std::optional<int> m_flag) {
    std::vector<std::string> lines = content_lines(path);
    if (lines.empty()) throw DomainError("no polynomials in file: " + path);
    int need = 1;
    for (const auto& e : lines) need = std::max(need, parse_poly(e).m);
    int m = m_flag.value_or(need);
    std::vector<PolyF2> out;
    out.reserve(lines.size());
    for (const auto& e : lines) out.push_back(parse_poly(e, m));
    return out;
}

// Same grammar, with groups separated by lines consisting of "--".
std::vector<std::vector<PolyF2>> load_groups(const std::string& path,
                                             std::optional<int> m_flag) {
    std::vector<std::string> lines = content_lines(path);
    std::vector<std::vector<std::string>> groups(1);
    for (const auto& t : lines) {
        if (t == "--")
            groups.emplace_back();
        else
            groups.back().push_back(t);
    }
    while (!groups.empty() && groups.back().empty()) groups.pop_back();
    if (groups.empty()) throw DomainError("no polynomial groups in file: " + path);
    int need = 1;
    for (const auto& g : groups)
        for (const auto& e : g) need = std::max(need, parse_poly(e).m);
    int m = m_flag.value_or(need);
    std::vector<std::vector<PolyF2>> out;
    for (const auto& g : groups) {
        std::vector<PolyF2> ps;
        ps.reserve(g.size());
        for (const auto& e : g) ps.push_back(parse_poly(e, m));
        out.push_back(std::move(ps));
    }
    return out;
}

PolyF2 load_single(const std::string& expr, const std::string& file,
                   std::optional<int> m_flag) {
    if (!expr.empty()) return parse_poly(expr, m_flag);
    if (file.empty()) throw DomainError("need --poly or --file");
    std::vector<PolyF2> ps = load_polys(file, m_flag);
    if (ps.size() != 1) throw DomainError("expected exactly one polynomial in " + file);
    return ps.front();
}

GammaTable gamma_from_bits(const std::string& bits) {
    std::size_t n = bits.size();
    int r = 0;
    while ((1ull << r) < n) ++r;
    if ((1ull << r) != n)
        throw DomainError("gamma table length must be a power of two");
    GammaTable g = gamma_make(r);
    for (std::size_t i = 0; i < n; ++i) {
        char c = bits[i];
        if (c != '0' && c != '1') throw DomainError("gamma table must be over {0,1}");
        gamma_set_bit(g, i, c - '0');
    }
    return g;
}

std::string gamma_bits(const GammaTable& g) {
    std::string s;
    const std::uint64_t n = 1ull << g.bits;
    for (std::uint64_t i = 0; i < n; ++i)
        s.push_back(static_cast<char>('0' + gamma_bit(g, i)));
    return s;
}

json subspace_json(const Subspace& v) {
    json basis = json::array();
    for (std::uint64_t b : v.basis) basis.push_back(bitstr(b, v.m));
    return json{{"m", v.m}, {"basis", basis}};
}

Subspace subspace_from_json(const json& j) {
    int m = j.at("m").get<int>();
    std::vector<std::uint64_t> vecs;
    for (const auto& s : j.at("basis"))
        vecs.push_back(parse_bitstr(s.get<std::string>(), m));
    return subspace_from_vectors(m, vecs);
}

json exprs_json(const std::vector<PolyF2>& ps) {
    json a = json::array();
    for (const auto& p : ps) a.push_back(serialize_poly(p));
    return a;
}

void emit(const json& doc) { std::cout << doc.dump(2) << "\n"; }

int run(int argc, char** argv) {
    RunConfig cfg;
    int exit_code = 0;

    CLI::App app{"exact desk-scale lab for low-degree polynomial samplers over F2"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file")->envname("F2LAB_CONFIG");
    app.add_option("--worker_count,--workers", cfg.worker_count,
                   "parallel worker count (1 = serial reference path)")
        ->capture_default_str();
    app.add_option("--enumeration_cap_m,--enum-cap", cfg.enumeration_cap_m,
                   "max variables for full truth-table enumeration")
        ->capture_default_str();
    app.add_option("--combo_cap_k,--combo-cap", cfg.combo_cap_k,
                   "max members for combination sweeps")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "default seed for randomized subcommands")
        ->capture_default_str();
    app.add_option("--output_format,--format", cfg.output_format,
                   "output format: json, csv, or text")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();

    // ---- eval ----------------------------------------------------------
    std::string ev_poly, ev_file, ev_point;
    std::optional<int> ev_m;
    auto* sc_eval = app.add_subcommand("eval", "evaluate a polynomial at a point");
    sc_eval->fallthrough();
    sc_eval->add_option("--poly,-p", ev_poly, "polynomial expression");
    sc_eval->add_option("--file", ev_file, "file with one polynomial");
    sc_eval->add_option("--m", ev_m, "number of variables");
    sc_eval->add_option("--point", ev_point, "assignment bits, first char = x1")->required();
    sc_eval->callback([&] {
        PolyF2 p = load_single(ev_poly, ev_file, ev_m);
        std::uint64_t x = parse_bitstr(ev_point, p.m);
        int v = poly_eval(p, x);
        if (cfg.output_format == "text") {
            std::cout << v << "\n";
            return;
        }
        emit(json{{"schema", kSchema},
                  {"poly", serialize_poly(p)},
                  {"m", p.m},
                  {"point", ev_point},
                  {"value", v}});
    });

    // ---- bias ----------------------------------------------------------
    std::string bi_poly, bi_file;
    std::optional<int> bi_m;
    auto* sc_bias = app.add_subcommand("bias", "Pr[P=1], signed bias, and the 1/3 gap");
    sc_bias->fallthrough();
    sc_bias->add_option("--poly,-p", bi_poly, "polynomial expression");
    sc_bias->add_option("--file", bi_file, "file with one polynomial");
    sc_bias->add_option("--m", bi_m, "number of variables");
    sc_bias->callback([&] {
        ExecPolicy pol = policy_from(cfg);
        PolyF2 p = load_single(bi_poly, bi_file, bi_m);
        Rational pr = pr_one(p, pol);
        Rational sb = signed_bias(p, pol);
        json doc{{"schema", kSchema}, {"poly", serialize_poly(p)}, {"m", p.m}};
        put_rat(doc, "pr_one", pr);
        put_rat(doc, "signed_bias", sb);
        put_rat(doc, "one_third_gap", abs_r(pr - Rational(1, 3)));
        if (cfg.output_format == "text") {
            std::cout << "pr_one " << frac_str(pr) << "\nsigned_bias " << frac_str(sb)
                      << "\n";
            return;
        }
        emit(doc);
    });

    // ---- spectrum ------------------------------------------------------
    std::string sp_poly, sp_file;
    std::optional<int> sp_m;
    auto* sc_spec = app.add_subcommand("spectrum", "Walsh spectrum of (-1)^P");
    sc_spec->fallthrough();
    sc_spec->add_option("--poly,-p", sp_poly, "polynomial expression");
    sc_spec->add_option("--file", sp_file, "file with one polynomial");
    sc_spec->add_option("--m", sp_m, "number of variables");
    sc_spec->callback([&] {
        ExecPolicy pol = policy_from(cfg);
        PolyF2 p = load_single(sp_poly, sp_file, sp_m);
        WalshSpectrum s = walsh_spectrum(p, pol);
        if (cfg.output_format == "csv") {
            for (const auto& [mask, w] : s.entries)
                std::cout << bitstr(mask, s.m) << ","
                          << frac_str(Rational(w) / pow2r(static_cast<unsigned>(s.m)))
                          << "\n";
            return;
        }
        json entries = json::array();
        for (const auto& [mask, w] : s.entries)
            entries.push_back(json{
                {"mask", bitstr(mask, s.m)},
                {"value", frac_str(Rational(w) / pow2r(static_cast<unsigned>(s.m)))}});
        emit(json{{"schema", kSchema},
                  {"poly", serialize_poly(p)},
                  {"m", s.m},
                  {"entries", entries}});
    });

    // ---- dickson -------------------------------------------------------
    std::string dk_poly, dk_file;
    std::optional<int> dk_m;
    auto* sc_dick = app.add_subcommand("dickson", "Dickson normal form of a quadratic");
    sc_dick->fallthrough();
    sc_dick->add_option("--poly,-p", dk_poly, "polynomial expression (degree <= 2)");
    sc_dick->add_option("--file", dk_file, "file with one polynomial");
    sc_dick->add_option("--m", dk_m, "number of variables");
    sc_dick->callback([&] {
        PolyF2 p = load_single(dk_poly, dk_file, dk_m);
        DicksonForm d = dickson_decompose(p);
        json pairs = json::array();
        for (const auto& [u, v] : d.pairs)
            pairs.push_back(json::array({serialize_poly(linform_poly(d.m, u)),
                                         serialize_poly(linform_poly(d.m, v))}));
        json doc{{"schema", kSchema},
                 {"poly", serialize_poly(p)},
                 {"m", d.m},
                 {"r", static_cast<int>(d.pairs.size())},
                 {"pairs", pairs},
                 {"tail", d.has_tail ? json(serialize_poly(poly_from_affine(d.m, d.tail, 0)))
                                     : json(nullptr)},
                 {"c", d.c},
                 {"rank1", rank1_quadratic(p)}};
        put_rat(doc, "bias", bias_quadratic(p));
        emit(doc);
    });

    // ---- rank ----------------------------------------------------------
    std::string rk_file;
    std::optional<int> rk_m, rk_d;
    long long rk_r = 0;
    bool rk_heur = false;
    auto* sc_rank = app.add_subcommand("rank", "r-regularity certificate for a factor");
    sc_rank->fallthrough();
    sc_rank->add_option("--factor", rk_file, "polynomial file (one member per line)")
        ->required();
    sc_rank->add_option("--r", rk_r, "regularity threshold")->required();
    sc_rank->add_option("--d", rk_d, "formal degree (default: max member degree)");
    sc_rank->add_option("--m", rk_m, "number of variables");
    sc_rank->add_flag("--heuristic", rk_heur, "bias-threshold rank estimate for degree >= 3");
    sc_rank->callback([&] {
        ExecPolicy pol = policy_from(cfg);
        std::vector<PolyF2> ps = load_polys(rk_file, rk_m);
        int d = rk_d.value_or(std::max(
            1, std::accumulate(ps.begin(), ps.end(), 0, [](int acc, const PolyF2& p) {
                return std::max(acc, poly_degree(p));
            })));
        Factor f = make_factor(ps.front().m, d, ps);
        RegularityCertificate cert = regularity_witness(
            f, Int(rk_r), pol, rk_heur ? RankMode::heuristic_bias : RankMode::exact);
        json doc{{"schema", kSchema},
                 {"r", rk_r},
                 {"members", static_cast<int>(ps.size())},
                 {"regular", cert.regular},
                 {"heuristic", cert.heuristic}};
        if (cert.regular) {
            doc["violation"] = nullptr;
        } else {
            json sel = json::array();
            for (int i = 0; i < static_cast<int>(ps.size()); ++i)
                if ((cert.lambda >> i) & 1) sel.push_back(i + 1);
            json v{{"lambda", static_cast<long long>(cert.lambda)},
                   {"members", sel},
                   {"combo", serialize_poly(cert.combo)},
                   {"ell", cert.ell},
                   {"rank_infinite", cert.rank.infinite}};
            v["rank"] = cert.heuristic ? json(nullptr) : int_json(cert.rank.value);
            doc["violation"] = v;
        }
        emit(doc);
    });

    // ---- regularize ----------------------------------------------------
    std::string rg_factor, rg_collection, rg_fspec = "linear:c=1";
    std::optional<int> rg_m, rg_d;
    int rg_s = 2;
    auto* sc_reg =
        app.add_subcommand("regularize", "refine a factor (or a collection) to regularity");
    sc_reg->fallthrough();
    auto* rg_fopt =
        sc_reg->add_option("--factor", rg_factor, "polynomial file: single-factor mode");
    auto* rg_copt = sc_reg->add_option(
        "--collection", rg_collection,
        "grouped polynomial file ('--' separators): sunflower mode");
    rg_fopt->excludes(rg_copt);
    rg_copt->excludes(rg_fopt);
    sc_reg->add_option("--f", rg_fspec,
                       "growth function: id | add:<c> | mul:<c> | linear:c=<c> | "
                       "ckl2:delta=<p/q>")
        ->capture_default_str();
    sc_reg->add_option("--s", rg_s, "sunflower petal target (collection mode)")
        ->capture_default_str();
    sc_reg->add_option("--d", rg_d, "formal degree (default: max member degree)");
    sc_reg->add_option("--m", rg_m, "number of variables");
    sc_reg->callback([&] {
        ExecPolicy pol = policy_from(cfg);
        GrowthFn gf = parse_growth(rg_fspec);
        if (!rg_collection.empty()) {
            std::vector<std::vector<PolyF2>> groups = load_groups(rg_collection, rg_m);
            int m = groups.front().front().m;
            int d = rg_d.value_or(2);
            std::vector<SetFactor> fs;
            for (auto& g : groups) fs.push_back(set_factor(m, d, g));
            SunflowerRegReport rep = pairwise_sunflower_regularize(fs, gf, rg_s, pol);
            json factors = json::array();
            for (const auto& sf : rep.factors) factors.push_back(exprs_json(sf.members));
            json petals = json::array();
            for (const auto& sf : rep.petals) petals.push_back(exprs_json(sf.members));
            json surv = json::array();
            for (int i : rep.surviving) surv.push_back(i + 1);
            emit(json{{"schema", kSchema},
                      {"mode", "sunflower"},
                      {"f", gf.spec},
                      {"s", rg_s},
                      {"m", m},
                      {"surviving", surv},
                      {"factors", factors},
                      {"core", exprs_json(rep.core.members)},
                      {"petals", petals},
                      {"w", rep.w},
                      {"met_target", rep.met_target},
                      {"iterations", rep.iterations},
                      {"k_init", int_json(rep.k_init)},
                      {"k_final", int_json(rep.k_final)},
                      {"refinement_ok", rep.refinement_ok},
                      {"locality_ok", rep.locality_ok},
                      {"pairwise_ok", rep.pairwise_ok},
                      {"sunflower_ok", rep.sunflower_ok},
                      {"predicted_w_bound", rep.predicted_w_materialized
                                                ? json(rep.predicted_w_bound)
                                                : json(nullptr)}});
            return;
        }
        if (rg_factor.empty())
            throw DomainError("regularize: need --factor or --collection");
        std::vector<PolyF2> ps = load_polys(rg_factor, rg_m);
        int d = rg_d.value_or(std::max(
            1, std::accumulate(ps.begin(), ps.end(), 0, [](int acc, const PolyF2& p) {
                return std::max(acc, poly_degree(p));
            })));
        Factor f0 = make_factor(ps.front().m, d, ps);
        RegularizeResult res = regularize(f0, gf, pol);

        // Replay the schedule round by round to attach each violation
        // certificate to its transcript entry.
        json rounds = json::array();
        Factor cur = f0;
        std::vector<int> ids(ps.size());
        std::iota(ids.begin(), ids.end(), 0);
        int next_id = static_cast<int>(ps.size());
        for (int round = 1;; ++round) {
            Int r = growth_eval(gf, Int(static_cast<long>(cur.members.size())));
            RegularityCertificate cert = regularity_witness(cur, r, pol);
            if (cert.regular) break;
            RefineOutcome out = refine_step(cur, ids, next_id, cert);
            const ReplayEvent& ev = out.event;
            std::size_t na = ev.added_ids.size();
            json added = json::array();
            for (std::size_t t = 0; t < na; ++t) {
                const PolyF2& w = out.factor.members[out.factor.members.size() - na + t];
                added.push_back(
                    json{{"id", ev.added_ids[t]}, {"poly", serialize_poly(w)}});
            }
            std::size_t rem_pos = 0;
            while (ids[rem_pos] != ev.removed_id &&
                   rem_pos + 1 < ids.size())  // position before removal
                ++rem_pos;
            json others = json::array();
            for (int oid : ev.other_ids) others.push_back(oid);
            rounds.push_back(json{
                {"round", round},
                {"r", int_json(r)},
                {"lambda", static_cast<long long>(cert.lambda)},
                {"combo", serialize_poly(cert.combo)},
                {"ell", cert.ell},
                {"rank", int_json(cert.rank.value)},
                {"removed", json{{"id", ev.removed_id},
                                 {"poly", serialize_poly(cur.members[rem_pos])}}},
                {"added", added},
                {"pair_count", ev.pair_count},
                {"has_tail", ev.has_tail},
                {"c", ev.c},
                {"others", others}});
            cur = out.factor;
            ids = out.ids;
        }

        json dims0 = json::array(), dims1 = json::array();
        for (const Int& v : dim_vector(f0)) dims0.push_back(int_json(v));
        for (const Int& v : dim_vector(res.factor)) dims1.push_back(int_json(v));
        emit(json{{"schema", kSchema},
                  {"mode", "factor"},
                  {"f", gf.spec},
                  {"m", f0.m},
                  {"d", d},
                  {"initial", json{{"members", exprs_json(f0.members)}, {"dims", dims0}}},
                  {"rounds", rounds},
                  {"final", json{{"members", exprs_json(res.factor.members)},
                                 {"dims", dims1}}},
                  {"final_r", int_json(res.final_r)},
                  {"iterations", res.iterations},
                  {"replay_ok", replay_verify(f0, res)},
                  {"psi_bound", res.psi_bound >= 0 ? int_json(res.psi_bound) : json(-1)},
                  {"psi_ok", res.psi_ok}});
    });

    // ---- rank21 --------------------------------------------------------
    std::string r21_gamma, r21_qs, r21_ls;
    std::optional<int> r21_m;
    long long r21_c = 2;
    auto* sc_r21 =
        app.add_subcommand("rank21", "rank-lowering reduction of a (Gamma, Q, L) presentation");
    sc_r21->fallthrough();
    sc_r21->add_option("--gamma", r21_gamma, "outer function table bits, length 2^(r+s)")
        ->required();
    sc_r21->add_option("--qs", r21_qs, "quadratic members file")->required();
    sc_r21->add_option("--ls", r21_ls, "linear members file");
    sc_r21->add_option("--C", r21_c, "rank growth base")->capture_default_str();
    sc_r21->add_option("--m", r21_m, "number of variables");
    sc_r21->callback([&] {
        ExecPolicy pol = policy_from(cfg);
        std::vector<std::string> exprs = content_lines(r21_qs);
        if (!r21_ls.empty())
            for (const auto& e : content_lines(r21_ls)) exprs.push_back(e);
        std::size_t nq = content_lines(r21_qs).size();
        int need = 1;
        for (const auto& e : exprs) need = std::max(need, parse_poly(e).m);
        int m = r21_m.value_or(need);
        std::vector<PolyF2> qs, ls;
        for (std::size_t i = 0; i < exprs.size(); ++i)
            (i < nq ? qs : ls).push_back(parse_poly(exprs[i], m));
        GammaTable gam = gamma_from_bits(r21_gamma);
        Rank21Result res = regularize_rank21(gam, qs, ls, Int(r21_c), pol);
        json kept = json::array();
        for (int i : res.kept) kept.push_back(i + 1);
        emit(json{{"schema", kSchema},
                  {"r", static_cast<int>(qs.size())},
                  {"s", static_cast<int>(ls.size())},
                  {"C", r21_c},
                  {"k", res.k},
                  {"kept", kept},
                  {"lp", exprs_json(res.lp)},
                  {"gamma_out", gamma_bits(res.gamma_out)},
                  {"threshold", int_json(res.threshold)},
                  {"q_empty", res.q_empty},
                  {"size_ok", res.size_ok},
                  {"rank_ok", res.rank_ok},
                  {"functional_ok", res.functional_ok}});
    });

    // ---- sunflower -----------------------------------------------------
    std::string sf_in;
    int sf_size = 2;
    auto* sc_sun = app.add_subcommand("sunflower", "find a subspace sunflower in a collection");
    sc_sun->fallthrough();
    sc_sun->add_option("--in", sf_in, "JSON file: array of {m, basis:[bitstrings]}")
        ->required();
    sc_sun->add_option("--size", sf_size, "number of petals")->capture_default_str();
    sc_sun->callback([&] {
        std::ifstream in(sf_in);
        if (!in) throw DomainError("cannot open file: " + sf_in);
        json j = json::parse(in);
        if (j.is_object() && j.contains("spaces")) j = j["spaces"];
        if (!j.is_array()) throw DomainError("expected a JSON array of subspaces");
        std::vector<Subspace> coll;
        for (const auto& e : j) coll.push_back(subspace_from_json(e));
        SunflowerResult res = find_sunflower(coll, sf_size);
        json members = json::array();
        for (int i : res.indices) members.push_back(i + 1);
        emit(json{{"schema", kSchema},
                  {"s", sf_size},
                  {"collection", static_cast<int>(coll.size())},
                  {"found", res.found},
                  {"core", res.found ? subspace_json(res.core) : json(nullptr)},
                  {"members", members}});
    });

    // ---- tv ------------------------------------------------------------
    std::string tv_polys, tv_rho = "1/3";
    std::optional<int> tv_m;
    bool tv_uniform = false;
    auto* sc_tv = app.add_subcommand("tv", "exact TV of a joint tuple from a product law");
    sc_tv->fallthrough();
    sc_tv->add_option("--polys", tv_polys, "polynomial file, one member per line")->required();
    sc_tv->add_option("--rho", tv_rho, "Bernoulli parameter p/q")->capture_default_str();
    sc_tv->add_option("--m", tv_m, "number of variables");
    sc_tv->add_flag("--uniform", tv_uniform, "compare against uniform instead of Ber(rho)^n");
    sc_tv->callback([&] {
        ExecPolicy pol = policy_from(cfg);
        std::vector<PolyF2> ps = load_polys(tv_polys, tv_m);
        ExactDist d = joint_distribution(ps, pol);
        Rational rho = parse_rational(tv_rho);
        Rational tv = tv_uniform ? tv_to_uniform(d) : tv_to_product_bernoulli(d, rho);
        emit(json{{"schema", kSchema},
                  {"n", d.n},
                  {"m", d.m},
                  {"rho", tv_uniform ? "uniform" : frac_str(rho)},
                  {"tv", frac_str(tv)},
                  {"decimal", dec_str(tv, 12)}});
    });

    // ---- joint ---------------------------------------------------------
    std::string jt_polys;
    std::optional<int> jt_m;
    bool jt_support = false;
    auto* sc_joint =
        app.add_subcommand("joint", "exact joint output distribution of a tuple");
    sc_joint->fallthrough();
    sc_joint->add_option("--polys", jt_polys, "polynomial file, one member per line")
        ->required();
    sc_joint->add_option("--m", jt_m, "number of variables");
    sc_joint->add_flag("--support", jt_support,
                       "select a greedy independent sub-tuple instead");
    sc_joint->callback([&] {
        ExecPolicy pol = policy_from(cfg);
        std::vector<PolyF2> ps = load_polys(jt_polys, jt_m);
        if (jt_support) {
            std::vector<int> keep = greedy_independent_support(ps, pol);
            json kept = json::array(), members = json::array();
            for (int i : keep) {
                kept.push_back(i + 1);
                members.push_back(serialize_poly(ps[static_cast<std::size_t>(i)]));
            }
            emit(json{{"schema", kSchema},
                      {"n", static_cast<int>(ps.size())},
                      {"kept", kept},
                      {"members", members}});
            return;
        }
        ExactDist d = joint_distribution(ps, pol);
        if (cfg.output_format == "csv") {
            for (const auto& [outcome, count] : d.counts)
                std::cout << bitstr(outcome, d.n) << "," << count.str() << "\n";
            return;
        }
        json entries = json::array();
        for (const auto& [outcome, count] : d.counts)
            entries.push_back(
                json{{"outcome", bitstr(outcome, d.n)}, {"count", int_json(count)}});
        emit(json{{"schema", kSchema},
                  {"n", d.n},
                  {"m", d.m},
                  {"denom", int_json(d.denom)},
                  {"entries", entries}});
    });

    // ---- audit ---------------------------------------------------------
    auto* sc_audit = app.add_subcommand("audit", "exact verification reports");
    sc_audit->require_subcommand(1);
    sc_audit->fallthrough();

    std::string ac_polys, ac_petals, ac_eta = "1";
    std::optional<int> ac_m;
    long long ac_r = 3;
    auto* sc_cheb =
        sc_audit->add_subcommand("chebyshev", "pairwise covariance and lower-tail audit");
    sc_cheb->fallthrough();
    sc_cheb->add_option("--polys", ac_polys, "member file, one quadratic per line")
        ->required();
    sc_cheb->add_option("--petals", ac_petals, "grouped petal file ('--' separators)")
        ->required();
    sc_cheb->add_option("--r", ac_r, "pairwise regularity threshold")->capture_default_str();
    sc_cheb->add_option("--eta", ac_eta, "claimed pairwise petal TV bound p/q")
        ->capture_default_str();
    sc_cheb->add_option("--m", ac_m, "number of variables");
    sc_cheb->callback([&] {
        ExecPolicy pol = policy_from(cfg);
        std::vector<PolyF2> t = load_polys(ac_polys, ac_m);
        std::vector<std::vector<PolyF2>> petals = load_groups(ac_petals, std::optional<int>(t.front().m));
        ChebyshevReport rep =
            chebyshev_audit(t, petals, Int(ac_r), parse_rational(ac_eta), pol);
        json pairs = json::array();
        for (const auto& pa : rep.pairs) {
            json pj{{"i", pa.i + 1}, {"j", pa.j + 1}, {"regular", pa.regular}};
            put_rat(pj, "eta", pa.eta);
            put_rat(pj, "cov", pa.cov);
            pj["cov_ok"] = pa.cov_ok;
            pj["eta_ok"] = pa.eta_ok;
            pairs.push_back(pj);
        }
        json doc{{"schema", kSchema},
                 {"n", static_cast<int>(t.size())},
                 {"r", ac_r},
                 {"pairs", pairs},
                 {"all_regular", rep.all_regular},
                 {"all_cov_ok", rep.all_cov_ok}};
        put_rat(doc, "delta", rep.delta);
        put_rat(doc, "mu", rep.mu);
        put_rat(doc, "threshold", rep.threshold);
        put_rat(doc, "tail_prob", rep.tail_prob);
        put_rat(doc, "variance", rep.variance);
        put_rat(doc, "chebyshev_bound", rep.chebyshev_bound);
        doc["bound_applicable"] = rep.bound_applicable;
        doc["chebyshev_ok"] = rep.chebyshev_ok;
        put_rat(doc, "tv_from_ber_third", rep.tv_from_ber_third);
        emit(doc);
    });

    std::string av_polys, av_eta;
    std::optional<int> av_m;
    auto* sc_var = sc_audit->add_subcommand("variety", "common-zero density identity audit");
    sc_var->fallthrough();
    sc_var->add_option("--polys", av_polys, "polynomial file")->required();
    sc_var->add_option("--eta", av_eta, "certify deviation <= eta (p/q) via regularity");
    sc_var->add_option("--m", av_m, "number of variables");
    sc_var->callback([&] {
        ExecPolicy pol = policy_from(cfg);
        std::vector<PolyF2> ps = load_polys(av_polys, av_m);
        json doc{{"schema", kSchema}};
        if (!av_eta.empty()) {
            VarietyCertified c = variety_density_certified(ps, parse_rational(av_eta), pol);
            doc["k"] = c.base.k;
            put_rat(doc, "density", c.base.density);
            put_rat(doc, "deviation", c.base.deviation);
            put_rat(doc, "budget", c.base.budget);
            doc["identity_ok"] = c.base.identity_ok;
            doc["within_budget"] = c.base.within_budget;
            doc["threshold_r"] = int_json(c.threshold_r);
            doc["regular"] = c.regular;
            put_rat(doc, "eta", c.eta);
            doc["deviation_ok"] = c.deviation_ok;
        } else {
            VarietyReport rep = variety_density(ps, pol);
            doc["k"] = rep.k;
            put_rat(doc, "density", rep.density);
            put_rat(doc, "deviation", rep.deviation);
            put_rat(doc, "budget", rep.budget);
            doc["identity_ok"] = rep.identity_ok;
            doc["within_budget"] = rep.within_budget;
        }
        emit(doc);
    });

    std::string az_polys;
    std::optional<int> az_m;
    auto* sc_vaz = sc_audit->add_subcommand("vazirani", "XOR-lemma closeness audit");
    sc_vaz->fallthrough();
    sc_vaz->add_option("--polys", az_polys, "polynomial file")->required();
    sc_vaz->add_option("--m", az_m, "number of variables");
    sc_vaz->callback([&] {
        ExecPolicy pol = policy_from(cfg);
        std::vector<PolyF2> ps = load_polys(az_polys, az_m);
        VaziraniReport rep = vazirani_check(ps, pol);
        json doc{{"schema", kSchema}, {"n", rep.n}};
        put_rat(doc, "tv", rep.tv);
        put_rat(doc, "eps", rep.eps);
        put_rat(doc, "bound", rep.bound);
        doc["bound_exact"] = rep.bound_exact;
        put_rat(doc, "tv_sq", rep.tv_sq);
        put_rat(doc, "bound_sq", rep.bound_sq);
        doc["holds"] = rep.holds;
        emit(doc);
    });

    // ---- scan ----------------------------------------------------------
    int scn_d = 2, scn_m = 4;
    std::string scn_rho = "1/3", scn_census;
    auto* sc_scan =
        app.add_subcommand("scan", "exhaustive minimum-gap census over degree <= d");
    sc_scan->fallthrough();
    sc_scan->add_option("--degree,-d", scn_d, "max degree")->capture_default_str();
    sc_scan->add_option("--vars,-m", scn_m, "number of variables")->capture_default_str();
    sc_scan->add_option("--rho", scn_rho, "target probability p/q")->capture_default_str();
    sc_scan->add_option("--census", scn_census, "also write the census as CSV to this file");
    sc_scan->callback([&] {
        ExecPolicy pol = policy_from(cfg);
        ScanResult res = min_gap_scan(scn_d, scn_m, parse_rational(scn_rho), pol);
        if (!scn_census.empty()) {
            std::ofstream out(scn_census);
            if (!out) throw DomainError("cannot write file: " + scn_census);
            for (const auto& [pr, count] : res.census)
                out << frac_str(pr) << "," << count << "\n";
        }
        if (cfg.output_format == "csv") {
            for (const auto& [pr, count] : res.census)
                std::cout << frac_str(pr) << "," << count << "\n";
            return;
        }
        json census = json::array();
        for (const auto& [pr, count] : res.census)
            census.push_back(json{{"pr", frac_str(pr)}, {"count", count}});
        json doc{{"schema", kSchema}, {"d", res.d}, {"m", res.m}};
        doc["rho"] = frac_str(res.rho);
        put_rat(doc, "min_gap", res.min_gap);
        doc["witness"] = serialize_poly(res.witness);
        put_rat(doc, "witness_pr", res.witness_pr);
        doc["searched"] = res.searched;
        doc["census"] = census;
        emit(doc);
    });

    // ---- certify -------------------------------------------------------
    std::string cf_poly, cf_gamma, cf_qs;
    std::optional<int> cf_m, cf_delta_d;
    long long cf_t = 2;
    auto* sc_cert =
        app.add_subcommand("certify", "dyadic proximity certificate and gap floors");
    sc_cert->fallthrough();
    auto* cf_popt = sc_cert->add_option("--poly,-p", cf_poly,
                                        "single quadratic (identity outer function)");
    auto* cf_gopt =
        sc_cert->add_option("--gamma", cf_gamma, "outer function table bits, length 2^r");
    auto* cf_qopt = sc_cert->add_option("--qs", cf_qs, "quadratic members file");
    cf_popt->excludes(cf_gopt)->excludes(cf_qopt);
    sc_cert->add_option("--t", cf_t, "slack parameter")->capture_default_str();
    sc_cert->add_option("--m", cf_m, "number of variables");
    sc_cert->add_option("--delta-d", cf_delta_d,
                        "also report the degree-d collapse floor for this d");
    sc_cert->callback([&] {
        ExecPolicy pol = policy_from(cfg);
        GammaTable gam;
        std::vector<PolyF2> qs;
        if (!cf_poly.empty()) {
            gam = gamma_identity_r1();
            qs.push_back(parse_poly(cf_poly, cf_m));
        } else {
            if (cf_gamma.empty() || cf_qs.empty())
                throw DomainError("certify: need --poly or (--gamma and --qs)");
            gam = gamma_from_bits(cf_gamma);
            qs = load_polys(cf_qs, cf_m);
        }
        DyadicCertificate cert = dyadic_proximity(gam, qs, Int(cf_t), pol);
        int r = static_cast<int>(qs.size());
        json doc{{"schema", kSchema},
                 {"r", r},
                 {"t", cf_t},
                 {"path", cert.path},
                 {"a", int_json(cert.a)},
                 {"s", int_json(cert.s)},
                 {"s_max", int_json(cert.s_max)}};
        put_rat(doc, "signed_bias", cert.signed_bias);
        put_rat(doc, "err_bound", cert.err_bound);
        put_rat(doc, "achieved_err", cert.achieved_err);
        put_rat(doc, "lemma_floor", cert.lemma_floor);
        put_rat(doc, "honest_floor", cert.honest_floor);
        put_rat(doc, "dyadic_gap_floor", dyadic_gap_floor(cert.s));
        put_rat(doc, "delta_2r", delta_2r_bound(r));
        if (cf_delta_d) {
            DeltaDr dd = delta_dr_bound(*cf_delta_d, Int(r));
            json dj{{"d", *cf_delta_d},
                    {"materialized", dd.materialized},
                    {"psi_star", dd.materialized ? int_json(dd.psi_star_value) : json(-1)}};
            put_rat(dj, "delta", dd.delta);
            doc["delta_dr"] = dj;
        }
        emit(doc);
    });

    // ---- search --------------------------------------------------------
    int se_d = 3, se_m = 9, se_top = 5;
    std::uint64_t se_steps = 100000, se_seed = 0;
    std::string se_target = "1/3";
    double se_temp = 0.02;
    bool se_greedy = false, se_no_trace = false;
    auto* sc_search =
        app.add_subcommand("search", "seeded random walk minimizing |Pr[P=1] - target|");
    sc_search->fallthrough();
    sc_search->add_option("--degree,-d", se_d, "max degree")->capture_default_str();
    sc_search->add_option("--vars,-m", se_m, "number of variables")->capture_default_str();
    sc_search->add_option("--target", se_target, "target probability p/q")
        ->capture_default_str();
    sc_search->add_option("--steps", se_steps, "walk length")->capture_default_str();
    auto* se_seed_opt = sc_search->add_option("--seed", se_seed, "walk seed");
    sc_search->add_option("--temp", se_temp, "Metropolis temperature")->capture_default_str();
    sc_search->add_flag("--greedy", se_greedy, "zero-temperature walk");
    sc_search->add_option("--top", se_top, "distinct best list size")->capture_default_str();
    sc_search->add_flag("--no-trace", se_no_trace, "omit the step trace from the output");
    sc_search->callback([&] {
        ExecPolicy pol = policy_from(cfg);
        std::uint64_t seed = se_seed_opt->count() ? se_seed : cfg.seed;
        WalkSchedule sched;
        sched.temperature = se_temp;
        sched.greedy = se_greedy;
        WalkResult res = random_walk_search(se_d, se_m, parse_rational(se_target),
                                            se_steps, seed, sched, se_top, pol);
        json top = json::array();
        for (const auto& [p, gap] : res.top) {
            json e{{"poly", serialize_poly(p)}};
            put_rat(e, "gap", gap);
            top.push_back(e);
        }
        json doc{{"schema", kSchema},
                 {"d", se_d},
                 {"m", se_m},
                 {"target", frac_str(parse_rational(se_target))},
                 {"steps", se_steps},
                 {"seed", seed},
                 {"greedy", se_greedy},
                 {"temperature", se_temp},
                 {"best", serialize_poly(res.best)}};
        put_rat(doc, "best_gap", res.best_gap);
        put_rat(doc, "best_pr", res.best_pr);
        doc["best_step"] = res.best_step;
        doc["accepted"] = res.accepted;
        doc["top"] = top;
        if (!se_no_trace) {
            json trace = json::array();
            for (const auto& st : res.trace)
                trace.push_back(json{{"step", st.step},
                                     {"gap", frac_str(st.gap)},
                                     {"accepted", st.accepted}});
            doc["trace"] = trace;
        }
        emit(doc);
    });

    // ---- verify --------------------------------------------------------
    std::string vf_suite = "all";
    auto* sc_verify = app.add_subcommand("verify", "run a named acceptance battery");
    sc_verify->fallthrough();
    sc_verify->add_option("--suite", vf_suite,
                          "gaps | lemmas | chebyshev | regularize | sunflower | all")
        ->capture_default_str();
    sc_verify->callback([&] {
        ExecPolicy pol = policy_from(cfg);
        std::vector<CheckResult> checks = run_suite(vf_suite, pol);
        bool all = true;
        for (const auto& c : checks) all = all && c.pass;
        if (cfg.output_format == "text") {
            for (const auto& c : checks)
                std::cout << "criterion " << c.criterion << ": "
                          << (c.pass ? "PASS" : "FAIL") << " — " << c.name << " — "
                          << c.detail << "\n";
            std::cout << (all ? "all checks passed" : "FAILURES present") << "\n";
        } else {
            json arr = json::array();
            for (const auto& c : checks)
                arr.push_back(json{{"criterion", c.criterion},
                                   {"name", c.name},
                                   {"pass", c.pass},
                                   {"detail", c.detail},
                                   {"seconds", c.seconds}});
            emit(json{{"schema", kSchema},
                      {"suite", vf_suite},
                      {"checks", arr},
                      {"pass", all}});
        }
        if (!all) exit_code = 1;
    });

    // ---- psi -----------------------------------------------------------
    int ps_d = 2;
    std::string ps_f = "id";
    std::vector<long long> ps_vec;
    std::optional<long long> ps_star;
    std::uint64_t ps_cap = 10000000;
    auto* sc_psi = app.add_subcommand("psi", "factor-growth bookkeeping function");
    sc_psi->fallthrough();
    sc_psi->add_option("--d", ps_d, "degree")->capture_default_str();
    sc_psi->add_option("--f", ps_f, "growth function spec")->capture_default_str();
    sc_psi->add_option("--vec", ps_vec, "dimension vector, degree 1 first")
        ->delimiter(',');
    sc_psi->add_option("--star", ps_star, "evaluate psi* at this initial size instead");
    sc_psi->add_option("--cap", ps_cap, "iteration guard")->capture_default_str();
    sc_psi->callback([&] {
        GrowthFn gf = parse_growth(ps_f);
        if (ps_star) {
            Int v = psi_star(ps_d, gf, Int(*ps_star), ps_cap);
            emit(json{{"schema", kSchema},
                      {"d", ps_d},
                      {"f", gf.spec},
                      {"k", *ps_star},
                      {"psi_star", int_json(v)}});
            return;
        }
        if (ps_vec.empty()) throw DomainError("psi: need --vec or --star");
        if (static_cast<int>(ps_vec.size()) != ps_d)
            throw DomainError("psi: --vec must have exactly d entries");
        std::vector<Int> vec(ps_vec.begin(), ps_vec.end());
        Int v = psi(ps_d, gf, vec, ps_cap);
        json vj = json::array();
        for (long long x : ps_vec) vj.push_back(x);
        emit(json{{"schema", kSchema},
                  {"d", ps_d},
                  {"f", gf.spec},
                  {"vec", vj},
                  {"psi", int_json(v)}});
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const f2lab::ParseError& e) {
        json err{{"schema", kSchema},
                 {"error", json{{"type", "parse"}, {"message", e.what()}}}};
        std::cerr << err.dump(2) << "\n";
        return 1;
    } catch (const f2lab::DomainError& e) {
        json err{{"schema", kSchema},
                 {"error", json{{"type", "domain"}, {"message", e.what()}}}};
        std::cerr << err.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        json err{{"schema", kSchema},
                 {"error", json{{"type", "internal"}, {"message", e.what()}}}};
        std::cerr << err.dump(2) << "\n";
        return 1;
    }
}
