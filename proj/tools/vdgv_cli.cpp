#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "vdgv/curve.hpp"

using json = nlohmann::json;
using namespace vdgv;

namespace {

enum Exit { Ok = 0, Failure = 1, Parse = 2, Ambient = 3, Mismatch = 4, Cap = 5 };

struct RunConfig {
    std::string field = "F4";
    std::uint64_t budget = std::uint64_t(1) << 24;
    unsigned threads = 1;
    std::string format = "json";
    unsigned cap = 16;
    std::string output;
};

// Errors raised while reading the user's input are reported as parse errors.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class Fn>
auto parsing(Fn&& fn) -> decltype(fn())
{
    try {
        return fn();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::AmbientTooSmall)
            throw;
        throw InputError(e.what());
    }
}

// Prints elements of F_q in the representation of the field the user named.
struct Printer {
    FieldPtr amb;
    std::shared_ptr<const Embedding> view;

    explicit Printer(const CurveSpec& C) : amb(C.field), view(C.view) {}
    Printer(FieldPtr f, std::shared_ptr<const Embedding> v) : amb(std::move(f)), view(std::move(v)) {}
    std::string operator()(Elem x) const { return view ? view->src()->hex(view->back(x)) : amb->hex(x); }
    json set(const std::set<Elem>& s) const
    {
        std::vector<std::pair<Elem, std::string>> v;
        for (Elem x : s)
            v.push_back({view ? view->back(x) : x, (*this)(x)});
        std::sort(v.begin(), v.end());
        json out = json::array();
        for (auto& [k, str] : v)
            out.push_back(str);
        return out;
    }
    // coefficients b_e, ..., b_0
    json coeffs(const SkewPoly& F) const
    {
        json out = json::array();
        for (int i = F.max_exp(); i >= 0; --i)
            out.push_back((*this)(F.coeff(i)));
        return out;
    }
};

std::vector<Elem> field_order(const Field& f, unsigned deg)
{
    auto v = f.subfield_elements(deg);
    std::sort(v.begin(), v.end());
    return v;
}

json roots_json(const LPoly& L)
{
    json out = json::array();
    for (auto& [r, m] : L.roots)
        for (unsigned i = 0; i < m; ++i)
            out.push_back(r.str());
    return out;
}

const char* short_class(Extremality x)
{
    return x == Extremality::Maximal ? "max" : x == Extremality::Minimal ? "min" : "zero";
}

std::vector<unsigned> parse_ext(const std::string& s)
{
    std::vector<unsigned> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty())
            continue;
        try {
            std::size_t used = 0;
            unsigned long v = std::stoul(tok, &used);
            if (used != tok.size() || v == 0 || v > 16)
                throw std::invalid_argument(tok);
            out.push_back(unsigned(v));
        } catch (const std::exception&) {
            throw InputError("bad extension degree '" + tok + "'");
        }
    }
    return out;
}

std::vector<Elem> parse_list(const Field& f, const std::string& s)
{
    std::vector<Elem> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        out.push_back(parsing([&] { return f.parse_elem(tok); }));
    if (out.empty())
        throw InputError("empty coefficient list");
    return out;
}

struct Output {
    json doc;
    std::string csv;
    int code = Ok;
};

// ---- subcommands ----

Output cmd_analyze(const RunConfig& cfg, const std::string& text, const std::string& ext_text)
{
    auto ext = parse_ext(ext_text);
    unsigned factor = 2;
    for (unsigned m : ext)
        factor = std::lcm(factor, m);
    CurveSpec C = parsing([&] { return parse_curve(text, factor); });
    Printer pr(C);
    CountOptions opt{cfg.budget, cfg.threads};
    Output out;
    json& r = out.doc;
    r["curve"] = C.str();
    r["p"] = C.p();
    r["q"] = C.q();
    r["e"] = C.e();
    r["genus"] = C.genus();
    r["warnings"] = json::array();

    auto d = detr_conditions(C);
    r["detr"] = {{"flag1", d.flag1}, {"flag2", d.flag2}, {"flag3", d.flag3}, {"flag4", d.flag4},
                 {"kernel_in_fq2", d.v_in_q2}, {"dim_vq", d.dim_vq}};

    std::optional<LPoly> L;
    r["presentation"] = nullptr;
    if (d.flag1) {
        L = l_polynomial(*d.F, *d.t);
        r["presentation"] = {{"F", pr.coeffs(d.F->F)}, {"t", pr(*d.t)}};
        r["L"] = L->str();
        r["L_roots"] = roots_json(*L);
        r["twist_class"] = short_class(classify_lpoly(*L, 1, C.genus()));
    } else {
        r["L"] = nullptr;
        r["L_roots"] = nullptr;
        r["twist_class"] = nullptr;
    }

    r["counts"] = json::object();
    r["verdicts"] = json::object();
    for (unsigned m : ext) {
        json entry;
        std::optional<std::int64_t> formula;
        if (L)
            formula = point_count_formula(*L, m);
        entry["formula"] = formula ? json(*formula) : json(nullptr);
        unsigned D = C.q_deg * m;
        if (D < 63 && (std::uint64_t(1) << D) <= cfg.budget) {
            std::uint64_t n = brute_count(C, m, opt);
            entry["brute"] = n;
            if (formula && *formula != std::int64_t(n))
                throw Error(ErrorKind::OracleMismatch, C.str() + " over F_{q^" + std::to_string(m) +
                                                           "}: formula " + std::to_string(*formula) +
                                                           ", count " + std::to_string(n));
            r["verdicts"][std::to_string(m)] = extremality_name(classify_count(n, D, C.genus()));
        } else {
            entry["brute"] = nullptr;
            r["warnings"].push_back("count over F_{q^" + std::to_string(m) + "} exceeds the budget; formula only");
            if (L)
                r["verdicts"][std::to_string(m)] = extremality_name(classify_lpoly(*L, m, C.genus()));
        }
        r["counts"][std::to_string(m)] = entry;
    }

    r["period_parity"] = nullptr;
    if (C.q_deg == C.p_log()) {
        try {
            auto pp = period_parity(C, cfg.cap, opt);
            r["period_parity"] = {{"mu", pp.mu}, {"delta", pp.delta}};
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::CapExceeded && e.kind() != ErrorKind::AmbientTooSmall)
                throw;
            r["warnings"].push_back(std::string("period not found: ") + e.what());
        }
    }
    return out;
}

// The head is R without a_0; a coefficient list gives a_e, ..., a_1.
CurveSpec parse_head(const std::string& text)
{
    std::string t = text;
    auto pos = t.find("R=");
    if (pos != std::string::npos) {
        auto end = t.find(';', pos);
        std::string val = t.substr(pos + 2, end == std::string::npos ? std::string::npos : end - pos - 2);
        bool poly = val.find('x') != std::string::npos && val.find(',') == std::string::npos &&
                    val.find("x^") != std::string::npos;
        if (!poly) {
            std::size_t stop = val.find_last_not_of(" \t");
            val = val.substr(0, stop == std::string::npos ? 0 : stop + 1) + ",0";
            t = t.substr(0, pos + 2) + val + (end == std::string::npos ? "" : t.substr(end));
        }
    }
    CurveSpec C = parse_curve(t);
    C.a[0] = 0;
    return C;
}

Output cmd_twists(const RunConfig& cfg, const std::string& text)
{
    CurveSpec head = parsing([&] { return parse_head(text); });
    Printer pr(head);
    CountOptions opt{cfg.budget, cfg.threads};
    auto tc = classify_twists(head, opt);
    Output out;
    json& r = out.doc;
    r["head"] = head.str();
    r["F"] = pr.coeffs(tc.F_used->F);
    r["S_F"] = pr.set(tc.S_F);
    r["S_minus"] = pr.set(tc.S_minus);
    r["S_plus"] = pr.set(tc.S_plus);
    r["S_0"] = pr.set(tc.S_0);
    r["T_max"] = pr.set(tc.T_max);
    r["T_min"] = pr.set(tc.T_min);
    r["T_0"] = pr.set(tc.T_0);
    r["counted"] = tc.counted;
    r["warnings"] = json::array();
    if (!tc.counted)
        r["warnings"].push_back("q^2 exceeds the budget; twist sets from the formula only");
    json counts = json::object();
    std::ostringstream csv;
    csv << "a,class,count\n";
    for (Elem a : field_order(*head.field, head.q_deg)) {
        const char* cls = tc.T_max.count(a) ? "max" : tc.T_min.count(a) ? "min" : "zero";
        csv << pr(a) << "," << cls << ",";
        if (tc.counted) {
            counts[pr(a)] = tc.counts.at(a);
            csv << tc.counts.at(a);
        }
        csv << "\n";
    }
    r["counts"] = counts;
    out.csv = csv.str();
    return out;
}

struct FieldView {
    FieldPtr qf, amb;
    std::shared_ptr<const Embedding> emb;
};

// F_q as named, inside an ambient of degree factor * [F_q:F_2]
FieldView field_view(const std::string& spec, unsigned factor)
{
    FieldView v;
    v.qf = parsing([&] { return Field::parse(spec); });
    if (factor == 1) {
        v.amb = v.qf;
        return v;
    }
    if (v.qf->N() * factor > 32)
        throw Error(ErrorKind::AmbientTooSmall, "extension of degree " + std::to_string(v.qf->N() * factor) +
                                                    " exceeds 32 bits");
    v.amb = Field::make(v.qf->N() * factor, std::nullopt, v.qf->p_log());
    v.emb = std::make_shared<const Embedding>(v.qf, v.amb);
    return v;
}

Output cmd_construct(const RunConfig& cfg, const std::string& Ftext, const std::string& Wtext,
                     const std::string& ttext)
{
    FieldView fv = field_view(cfg.field, 2);
    Printer pr(fv.amb, fv.emb);
    const unsigned qd = fv.qf->N();
    Elem t = (*fv.emb)(parsing([&] { return fv.qf->parse_elem(ttext.empty() ? "0" : ttext); }));
    CountOptions opt{cfg.budget, cfg.threads};
    Output out;
    json& r = out.doc;
    r["field"] = fv.qf->spec();
    r["t"] = pr(t);
    if (Ftext.empty() == Wtext.empty())
        throw InputError("construct needs exactly one of --F and --W");

    auto attach = [&](CurveSpec C) {
        C.view = fv.emb;
        return C;
    };
    if (!Wtext.empty()) {
        std::vector<Elem> basis;
        for (Elem x : parse_list(*fv.qf, Wtext))
            basis.push_back((*fv.emb)(x));
        Subspace W = Subspace::fp_span(fv.amb, fv.amb->p_log(), basis);
        auto res = recipe_extremal(W, t, qd, opt);
        r["mode"] = "recipe";
        r["W"] = pr.set([&] {
            auto els = W.fp_basis();
            return std::set<Elem>(els.begin(), els.end());
        }());
        r["F"] = pr.coeffs(res.F.F);
        r["curve"] = attach(res.curve).str();
        r["verdict"] = extremality_name(res.verdict);
        r["count"] = res.count ? json(*res.count) : json(nullptr);
        return out;
    }

    std::vector<Elem> desc = parse_list(*fv.qf, Ftext);
    std::vector<Elem> b(desc.rbegin(), desc.rend());
    for (auto& x : b)
        x = (*fv.emb)(x);
    FDatum d = parsing([&] { return make_fdatum(SkewPoly::from_coeffs(fv.amb, b, fv.amb->p_log()), qd); });
    r["mode"] = "F";
    r["F"] = pr.coeffs(d.F);
    r["conditions"] = {{"i", d.c1}, {"ii", d.c2}, {"iii", d.c3}, {"iv", d.c4}};
    r["gamma"] = pr(d.gamma);
    CurveSpec C = attach(build_curve(d, t));
    auto L = l_polynomial(d, t);
    r["alpha"] = pr(alpha_f(d, t));
    r["curve"] = C.str();
    r["genus"] = C.genus();
    r["L"] = L.str();
    r["L_roots"] = roots_json(L);
    r["counts"] = json::object();
    for (unsigned m : {1u, 2u}) {
        std::int64_t formula = point_count_formula(L, m);
        json entry{{"formula", formula}, {"brute", nullptr}};
        if ((std::uint64_t(1) << (qd * m)) <= cfg.budget) {
            std::uint64_t n = brute_count(C, m, opt);
            entry["brute"] = n;
            if (std::int64_t(n) != formula)
                throw Error(ErrorKind::OracleMismatch, C.str() + ": formula " + std::to_string(formula) +
                                                           ", count " + std::to_string(n));
        }
        r["counts"][std::to_string(m)] = entry;
    }
    r["verdict"] = extremality_name(classify_lpoly(L, 1, C.genus()));
    r["fq2_maximal"] = d.c4 ? json(fq2_maximal_test(d, t)) : json(nullptr);
    return out;
}

Output cmd_period(const RunConfig& cfg, const std::string& text)
{
    CurveSpec C = parsing([&] { return parse_curve(text); });
    if (C.q_deg != C.p_log())
        throw InputError("period needs a curve over F_p (use p=...)");
    auto pp = period_parity(C, cfg.cap, {cfg.budget, cfg.threads});
    Output out;
    out.doc = {{"curve", C.str()}, {"mu", pp.mu}, {"delta", pp.delta}};
    return out;
}

Output cmd_verify(const RunConfig& cfg, unsigned e_max)
{
    FieldView fv = field_view(cfg.field, 2);
    Printer pr(fv.amb, fv.emb);
    const unsigned qd = fv.qf->N(), k = fv.amb->p_log();
    auto Fq = field_order(*fv.amb, qd);
    std::uint64_t pairs = 0;
    json mism = json::array();
    for (unsigned e = 1; e <= e_max; ++e) {
        std::uint64_t total = 1;
        for (unsigned i = 0; i <= e; ++i) {
            total *= Fq.size();
            if (total > cfg.budget)
                throw Error(ErrorKind::BudgetExceeded, "too many F to enumerate");
        }
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            std::vector<Elem> b(e + 1);
            std::uint64_t rest = idx;
            for (auto& x : b) {
                x = Fq[rest % Fq.size()];
                rest /= Fq.size();
            }
            if (!b[0] || !b[e])
                continue;
            FDatum d = make_fdatum(SkewPoly::from_coeffs(fv.amb, b, k), qd);
            if (!(d.c1 && d.c2 && d.c3))
                continue;
            for (Elem t : Fq) {
                CurveSpec C = build_curve(d, t);
                C.view = fv.emb;
                auto L = l_polynomial(d, t);
                for (unsigned m : {1u, 2u}) {
                    if ((std::uint64_t(1) << (qd * m)) > cfg.budget)
                        continue;
                    std::int64_t a = point_count_formula(L, m);
                    std::uint64_t n = brute_count(C, m, {cfg.budget, cfg.threads});
                    if (a != std::int64_t(n))
                        mism.push_back({{"F", pr.coeffs(d.F)}, {"t", pr(t)}, {"m", m}, {"formula", a}, {"brute", n}});
                }
                ++pairs;
            }
        }
    }
    Output out;
    out.doc = {{"field", fv.qf->spec()}, {"e_max", e_max}, {"pairs", pairs}, {"mismatches", mism}};
    if (!mism.empty())
        out.code = Mismatch;
    return out;
}

// least coefficient vector among the rescalings x -> bx, which send a_i to a_i b^{p^i + 1}
std::vector<Elem> canonical(const CurveSpec& C)
{
    const Field& f = *C.field;
    std::vector<Elem> best;
    for (Elem b : f.subfield_elements(C.q_deg)) {
        if (!b)
            continue;
        std::vector<Elem> a(C.a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            a[i] = f.mul(C.a[i], f.mul(b, f.frob_p(b, long(i))));
        std::vector<Elem> key(a.rbegin(), a.rend());
        if (best.empty() || key < best)
            best = key;
    }
    return best;
}

Output cmd_search(const RunConfig& cfg, unsigned e_max, const std::string& predicate)
{
    if (predicate != "maximal" && predicate != "minimal" && predicate != "extremal")
        throw InputError("predicate must be maximal, minimal or extremal");
    FieldView fv = field_view(cfg.field, 1);
    const FieldPtr& f = fv.amb;
    const unsigned qd = f->N(), k = f->p_log();
    if (f->size() > cfg.budget)
        throw Error(ErrorKind::BudgetExceeded, "field larger than the budget");
    auto Fq = field_order(*f, qd);

    // F_p-subspaces of F_q containing 1, dimension <= e_max
    std::map<std::vector<Elem>, Subspace> spaces;
    std::vector<Subspace> frontier{Subspace::fp_span(f, k, {1})};
    while (!frontier.empty()) {
        std::vector<Subspace> next;
        for (const auto& S : frontier) {
            auto key = S.elements();
            std::sort(key.begin(), key.end());
            if (!spaces.emplace(key, S).second)
                continue;
            if (S.dim() < e_max)
                for (Elem v : Fq)
                    if (!S.contains(v))
                        next.push_back(S + Subspace::fp_span(f, k, {v}));
        }
        frontier = std::move(next);
    }

    std::map<std::vector<Elem>, json> found;
    for (auto& [key, W] : spaces)
        for (Elem t : Fq) {
            std::optional<RecipeResult> got;
            try {
                got = recipe_extremal(W, t, qd, {cfg.budget, cfg.threads});
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::PairingConditionFailed)
                    continue;
                throw;
            }
            const RecipeResult& res = *got;
            bool want = predicate == "extremal" || (predicate == "maximal") == (res.verdict == Extremality::Maximal);
            if (!want)
                continue;
            if (!res.count)
                throw Error(ErrorKind::BudgetExceeded, "cannot verify " + res.curve.str() + " by counting");
            auto canon = canonical(res.curve);
            if (found.count(canon))
                continue;
            CurveSpec rep = res.curve;
            rep.a.assign(canon.rbegin(), canon.rend());
            std::uint64_t n = brute_count(rep, 1, {cfg.budget, cfg.threads});
            if (classify_count(n, qd, rep.genus()) != res.verdict)
                throw Error(ErrorKind::OracleMismatch, rep.str() + " fails its count check");
            found[canon] = {{"curve", rep.str()}, {"verdict", extremality_name(res.verdict)}, {"count", n},
                            {"genus", rep.genus()}};
        }
    Output out;
    out.doc = json::array();
    std::ostringstream csv;
    csv << "curve,verdict,count\n";
    for (auto& [k2, v] : found) {
        out.doc.push_back(v);
        csv << "\"" << v["curve"].get<std::string>() << "\"," << v["verdict"].get<std::string>() << ","
            << v["count"].get<std::uint64_t>() << "\n";
    }
    out.csv = csv.str();
    return out;
}

Output cmd_hd(unsigned s_max)
{
    if (s_max == 0 || s_max > 24)
        throw InputError("--s-max must be between 1 and 24");
    Output out;
    out.doc = json::array();
    std::ostringstream csv;
    csv << "s,sum,expected,ok\n";
    for (unsigned s = 1; s <= s_max; ++s) {
        GaussInt got = hd_sum(*Field::make(s), s), want = GaussInt(-1, -1).pow(s);
        out.doc.push_back({{"s", s}, {"sum", got.str()}, {"expected", want.str()}, {"ok", got == want}});
        csv << s << "," << got.str() << "," << want.str() << "," << (got == want ? "true" : "false") << "\n";
        if (!(got == want))
            out.code = Mismatch;
    }
    out.csv = csv.str();
    return out;
}

int exit_code(ErrorKind k)
{
    switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::ReduciblePolynomial: return Parse;
    case ErrorKind::AmbientTooSmall:
    case ErrorKind::FieldTooSmall: return Ambient;
    case ErrorKind::OracleMismatch: return Mismatch;
    case ErrorKind::CapExceeded: return Cap;
    default: return Failure;
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Curves y^p - y = x R(x) over finite fields of characteristic 2"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    app.add_option("--field", cfg.field, "field spec, e.g. F16 or F16:0x13:p=4");
    app.add_option("--budget", cfg.budget, "largest number of field elements enumerated by one count");
    app.add_option("--threads", cfg.threads, "worker threads for counting")->check(CLI::Range(1u, 256u));
    app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--cap", cfg.cap, "largest extension degree tried by period searches");
    app.add_option("-o,--output", cfg.output, "write the report here instead of stdout");

    std::string curve, ext = "1", Ftext, Wtext, ttext, predicate = "maximal";
    unsigned e_max = 1, s_max = 16;
    auto analyze = app.add_subcommand("analyze", "presentation, L-polynomial and counts of one curve");
    analyze->add_option("curve", curve, "e.g. \"q=F4; R=1,0\"")->required();
    analyze->add_option("--ext", ext, "comma-separated extension degrees m, empty for none");
    auto twists = app.add_subcommand("twists", "extremal twists of a head R (a_0 omitted)");
    twists->add_option("head", curve, "e.g. \"q=F4; R=1\" for R = x^2")->required();
    auto construct = app.add_subcommand("construct", "build D_{F,t} from F, or from W by the recipe");
    construct->add_option("--F", Ftext, "coefficients b_e,...,b_0 of F");
    construct->add_option("--W", Wtext, "F_p-basis of W (must contain 1)");
    construct->add_option("--t", ttext, "twist parameter t in F_q");
    auto period = app.add_subcommand("period", "period and parity of a curve over F_p");
    period->add_option("curve", curve, "e.g. \"p=2; R=x^2+x^8\"")->required();
    auto verify = app.add_subcommand("verify", "formula counts against brute counts for every admissible F");
    verify->add_option("--e-max", e_max, "largest degree of F")->check(CLI::Range(1u, 4u));
    auto search = app.add_subcommand("search", "extremal curves from the recipe, up to x -> bx");
    search->add_option("--e-max", e_max, "largest dimension of W")->check(CLI::Range(1u, 4u));
    search->add_option("--predicate", predicate, "maximal, minimal or extremal");
    auto hd = app.add_subcommand("hd-check", "sums of Q_q over F_{2^s} against (-1-i)^s");
    hd->add_option("--s-max", s_max, "largest s");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return Parse;
    }

    Output out;
    try {
        if (*analyze)
            out = cmd_analyze(cfg, curve, ext);
        else if (*twists)
            out = cmd_twists(cfg, curve);
        else if (*construct)
            out = cmd_construct(cfg, Ftext, Wtext, ttext);
        else if (*period)
            out = cmd_period(cfg, curve);
        else if (*verify)
            out = cmd_verify(cfg, e_max);
        else if (*search)
            out = cmd_search(cfg, e_max, predicate);
        else
            out = cmd_hd(s_max);
    } catch (const InputError& e) {
        out.doc = {{"error", {{"kind", "ParseError"}, {"message", e.what()}}}};
        out.csv.clear();
        out.code = Parse;
    } catch (const Error& e) {
        out.doc = {{"error", {{"kind", error_name(e.kind())}, {"message", e.what()}}}};
        out.csv.clear();
        out.code = exit_code(e.kind());
    }
    if (out.code != Ok && out.doc.contains("error"))
        std::cerr << "vdgv: " << out.doc["error"]["message"].get<std::string>() << "\n";

    std::ofstream file;
    if (!cfg.output.empty()) {
        file.open(cfg.output);
        if (!file) {
            std::cerr << "vdgv: cannot write " << cfg.output << "\n";
            return Failure;
        }
    }
    std::ostream& os = cfg.output.empty() ? std::cout : file;
    bool csv_ok = !out.csv.empty();
    if (cfg.format == "csv" && csv_ok)
        os << out.csv;
    else
        os << out.doc.dump(2) << "\n";
    if (cfg.format == "csv" && !csv_ok && out.code == Ok)
        std::cerr << "vdgv: this subcommand has no CSV form; wrote JSON\n";
    return out.code;
}
