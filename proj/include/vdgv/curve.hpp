#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vdgv/count.hpp"
#include "vdgv/skew.hpp"
#include "vdgv/symplectic.hpp"
#include "vdgv/witt.hpp"

namespace vdgv {

struct CountOptions {
    std::uint64_t budget = std::uint64_t(1) << 24;
    unsigned threads = 1;
    CountKernel kernel = CountKernel::Auto;
};

// y^p - y = x R(x), R(x) = sum_{i=0}^e a_i x^{p^i}, coefficients in F_q = F_{2^q_deg}
// inside the ambient field.
struct CurveSpec {
    FieldPtr field;
    unsigned q_deg = 0;
    std::vector<Elem> a;
    // optional smaller field used only for printing coefficients
    std::shared_ptr<const Embedding> view;

    unsigned p_log() const { return field->p_log(); }
    unsigned e() const { return unsigned(a.size()) - 1; }
    std::uint64_t p() const { return std::uint64_t(1) << p_log(); }
    std::uint64_t q() const { return std::uint64_t(1) << q_deg; }
    std::uint64_t genus() const;
    SkewPoly R() const;
    // R + R*; the tau^0 terms cancel, so a_0 does not matter
    SkewPoly E() const;
    std::string str() const;
    bool operator==(const CurveSpec& o) const { return q_deg == o.q_deg && a == o.a && field->same_as(*o.field); }
};

CurveSpec make_curve(FieldPtr f, unsigned q_deg, std::vector<Elem> a);
// Text form "q=<field>; R=<a_e>,...,<a_0>" or "p=<p>; R=...". R may also be written as an
// additive polynomial such as "x^2+x^8" or "0x3*x^4+x". The ambient field has degree
// q_deg * ambient_factor and the given field is embedded into it.
CurveSpec parse_curve(const std::string& text, unsigned ambient_factor = 1);

// Conditions on F = sum_{i=0}^e b_i tau^i with coefficients in F_q.
struct FDatum {
    SkewPoly F;
    unsigned q_deg = 0;
    bool c1 = false;  // b_0 b_e != 0
    bool c2 = false;  // F*(1) = 0
    bool c3 = false;  // ker F* inside F_q
    bool c4 = false;  // ker F*F inside F_q
    Subspace Wstar;   // ker F* ∩ F_q
    Subspace WF;      // ker F ∩ F_q
    Elem gamma = 0;

    unsigned e() const { return unsigned(F.max_exp()); }
};

FDatum make_fdatum(const SkewPoly& F, unsigned q_deg);
Elem gamma_f(const SkewPoly& F);
// R_F, with zero tau^0 coefficient
SkewPoly r_f(const FDatum& F);
Elem alpha_f(const FDatum& F, Elem t);
CurveSpec build_curve(const FDatum& F, Elem t);

struct LPoly {
    std::map<GaussInt, unsigned> roots;
    unsigned q_deg = 0;
    unsigned degree() const;
    // factored form, e.g. (1+2T)^2
    std::string str() const;
};

LPoly l_polynomial(const FDatum& F, Elem t);
std::int64_t point_count_formula(const LPoly& L, unsigned m);
// sum of tau^m over the roots, with multiplicity
GaussInt eigen_power_sum(const LPoly& L, unsigned m);

std::uint64_t brute_count(const CurveSpec& C, unsigned m, const CountOptions& opt = {});
// Field multiplication and trace per point; no bit tricks.
std::uint64_t brute_count_reference(const CurveSpec& C, unsigned m, std::uint64_t budget = std::uint64_t(1) << 24);

enum class Extremality { Maximal, Minimal, Neither };
const char* extremality_name(Extremality x);
// Classifies a projective count over F_{2^deg}.
Extremality classify_count(std::uint64_t count, unsigned deg, std::uint64_t genus);
Extremality classify_lpoly(const LPoly& L, unsigned m, std::uint64_t genus);

struct DetrResult {
    bool flag1 = false, flag2 = false, flag3 = false, flag4 = false;
    bool v_in_q2 = false;
    unsigned dim_vq = 0;
    std::optional<FDatum> F;
    std::optional<Elem> t;
    bool consistent() const { return flag1 == flag2 && flag2 == flag3 && flag3 == flag4; }
};

DetrResult detr_conditions(const CurveSpec& C);

// Presentation of R - a_0 x as R_F for a maximal totally isotropic W of V = ker(R + R*).
FDatum recover_head(const CurveSpec& C, const std::optional<Subspace>& W = std::nullopt);
struct Recovered {
    FDatum F;
    Elem t;
};
Recovered recover_f(const CurveSpec& C, const std::optional<Subspace>& W = std::nullopt);
// All maximal totally isotropic subspaces of V (small V only), in a fixed order.
std::vector<Subspace> all_maximal_isotropic(const CurveSpec& C, std::uint64_t limit = 4096);

struct TwistClassification {
    std::optional<FDatum> F_used;
    std::set<Elem> S_F, S_minus, S_plus, S_0;
    std::set<Elem> T_max, T_min, T_0;
    // a -> projective count of C_a over F_q when the counting path ran
    std::map<Elem, std::uint64_t> counts;
    bool counted = false;
};

TwistClassification classify_twists(const CurveSpec& head, const CountOptions& opt = {},
                                    const std::optional<Subspace>& W = std::nullopt);
TwistClassification easycase_sets(const FDatum& F);

struct ExmaxResult {
    TwistClassification sets;
    Elem t0 = 0;
    bool t0_in_q1sq = false;       // t0 in F_{q1^2}, t0^{q1+1} in F_{q1}
    bool t0_norm_trace = false;    // Tr_{q1/2}(t0^{q1+1}) = 1
    bool t0_witt_trace = false;    // Tr_{q1^2/2}(t0, 0) = s(1,0) + (0,1)
};
ExmaxResult exmax_sets(const FDatum& F, unsigned q1_deg);

struct RecipeResult {
    CurveSpec curve;
    FDatum F;
    Extremality verdict = Extremality::Neither;
    std::optional<std::uint64_t> count;  // brute count over F_q when within budget
};
RecipeResult recipe_extremal(const Subspace& W, Elem t, unsigned q_deg, const CountOptions& opt = {});

bool fq2_maximal_test(const FDatum& F, Elem t);

struct ExRxFamily {
    CurveSpec head;     // R with a_0 = 0
    std::vector<Elem> g;  // x^e f(x) f(1/x), constant term first
    unsigned n = 0;
    unsigned s = 0;       // [F_q : F_{p^n}]
    Elem alpha0 = 0;      // alpha~(0)
    std::set<Elem> extremal, maximal;
};
ExRxFamily exrx_family(FieldPtr f, unsigned q_deg, const std::vector<Elem>& fcoeffs);

struct HermitianReport {
    Elem a = 0;
    Elem alpha = 0;
    unsigned m = 0;
    // alpha != 0
    std::map<GaussInt, unsigned> eigenvalues;
    // alpha == 0
    Elem beta = 0;
    Extremality verdict = Extremality::Neither;
    // explicit F = c tau + c^{-1} with c^4 = alpha^{p-1}
    bool f_path_checked = false;
    std::map<unsigned, std::uint64_t> brute, predicted;
};
HermitianReport hermitian_twist(FieldPtr f, unsigned q_deg, Elem a, const CountOptions& opt = {});

struct PeriodParity {
    unsigned mu = 0;
    int delta = 0;
    bool operator==(const PeriodParity&) const = default;
};
// C over F_p (q_deg = p_log); extremality over F_{p^n} for n = 1, 2, ...
Extremality extremality_over(const CurveSpec& C, unsigned n, const CountOptions& opt = {});
PeriodParity period_parity(const CurveSpec& C, unsigned cap, const CountOptions& opt = {});

struct ScanReport {
    unsigned checked = 0;
    unsigned cap_exceeded = 0;
    std::map<std::pair<unsigned, int>, unsigned> histogram;
    std::vector<std::string> violations;
    bool hypothesis_met = true;
};
// Every R over F_p with 1 <= e <= e_max; reports any R whose (mu, delta) is in forbidden.
ScanReport impossibility_scan(unsigned p_log, unsigned e_max, const std::set<std::pair<unsigned, int>>& forbidden,
                              unsigned cap, const CountOptions& opt = {});

}  // namespace vdgv
