#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vdgv/field.hpp"

namespace vdgv {

// Laurent twisted polynomial sum a_i tau^i with tau a = a^p tau, acting as x -> sum a_i x^{p^i}.
class SkewPoly {
public:
    // p_log = 0 takes the base field of the context.
    explicit SkewPoly(FieldPtr f, unsigned p_log = 0);
    static SkewPoly term(FieldPtr f, Elem a, int i, unsigned p_log = 0);
    // a[i] is the coefficient of tau^i, i >= 0.
    static SkewPoly from_coeffs(FieldPtr f, const std::vector<Elem>& a, unsigned p_log = 0);
    // "a*t^i + b*t^j + ..." with hex coefficients; "t" alone means t^1, a bare constant means a*t^0.
    static SkewPoly parse(FieldPtr f, const std::string& s, unsigned p_log = 0);

    const FieldPtr& field() const { return f_; }
    unsigned p_log() const { return k_; }
    bool is_zero() const { return c_.empty(); }
    int min_exp() const;
    int max_exp() const;
    int span() const { return max_exp() - min_exp(); }
    Elem coeff(int i) const;
    void set(int i, Elem a);
    const std::map<int, Elem>& terms() const { return c_; }
    // coefficients of tau^0..tau^max_exp(); requires min_exp() >= 0
    std::vector<Elem> coeff_vector() const;

    SkewPoly operator+(const SkewPoly& o) const;
    SkewPoly operator-(const SkewPoly& o) const { return *this + o; }
    SkewPoly operator*(const SkewPoly& o) const;
    SkewPoly adjoint() const;
    // a * f for a constant a
    SkewPoly scaled(Elem a) const;
    bool operator==(const SkewPoly& o) const;
    bool operator!=(const SkewPoly& o) const { return !(*this == o); }

    Elem operator()(Elem x) const;
    std::string str() const;

    void check_compatible(const SkewPoly& o) const;

private:
    FieldPtr f_;
    unsigned k_;
    std::map<int, Elem> c_;
};

Subspace kernel(const SkewPoly& f);
// ker f ∩ F_{2^deg}; never fails on non-splitting kernels.
Subspace kernel_in_subfield(const SkewPoly& f, unsigned deg);
SkewPoly from_subspace(const Subspace& W);

struct Normalized {
    Elem a;
    int n;
    Subspace W;
};
Normalized normalize(const SkewPoly& f);

std::optional<SkewPoly> try_right_divide(const SkewPoly& f, const SkewPoly& g);
SkewPoly right_divide(const SkewPoly& f, const SkewPoly& g);

// ker f ⊆ F_{2^deg} inside an algebraic closure, decided by exact division of
// tau^{deg/k} + 1 by f on the right; independent of the ambient size.
bool kernel_within_subfield(const SkewPoly& f, unsigned deg);
unsigned kernel_splitting_degree(const SkewPoly& f, unsigned over_deg, unsigned cap);

struct SymmetricFactor {
    SkewPoly F;
    Elem a;
};
SymmetricFactor factor_through_symmetric(const SkewPoly& E, const Subspace& W);

}  // namespace vdgv
