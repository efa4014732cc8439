#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "vdgv/skew.hpp"

namespace vdgv {

// The polynomial g with g(0,0) = 0 and g^p + g = x F(y) + y F*(x), evaluated at (x, y).
// Every call checks that identity.
Elem g_witness(const SkewPoly& F, Elem x, Elem y);

// Pairing W x W* -> F_p, omega(u, u*) = g(u*, u). Argument order is part of the definition.
class PairingCtx {
public:
    // W = ker F, W* = ker F*; both must split in the ambient.
    static PairingCtx on_kernel(const SkewPoly& F);
    // Restriction to given subspaces of ker F and ker F*; the Gram matrix may be singular.
    PairingCtx(SkewPoly F, Subspace W, Subspace Wstar);

    const SkewPoly& F() const { return F_; }
    const Subspace& W() const { return W_; }
    const Subspace& Wstar() const { return Ws_; }
    const std::vector<std::vector<Elem>>& gram() const { return gram_; }
    bool nondegenerate() const;
    bool self_adjoint() const { return selfadj_; }

    Elem omega(Elem u, Elem ustar) const;
    Subspace orthogonal_complement(const Subspace& X) const;
    // {w in X : omega(s, w) = 0 for all s in S}, for a self-adjoint form with X, S inside W.
    Subspace perp_within(const Subspace& X, const Subspace& S) const;

private:
    SkewPoly F_;
    Subspace W_, Ws_;
    std::vector<std::vector<Elem>> gram_;
    bool selfadj_;
};

// Rank over F_p of a matrix with entries in F_p, using ambient arithmetic.
unsigned fp_rank(const Field& f, std::vector<std::vector<Elem>> m);

// ker(h*) where E = h f.
Subspace factor_complement_check(const SkewPoly& E, const SkewPoly& f);

struct IsotropicOptions {
    // search inside this subspace of W (default: W); it may be degenerate
    std::optional<Subspace> within;
    // additive form that must vanish on the result
    std::function<Elem(Elem)> phi;
    // F_p-linear automorphism that must preserve the result
    std::function<Elem(Elem)> stabilizer;
    // truncate to this dimension (first vectors of the canonical basis)
    std::optional<unsigned> dim;
};

// Maximal totally isotropic subspace, built greedily with least coset representatives.
Subspace maximal_isotropic(const PairingCtx& ctx, const IsotropicOptions& opt = {});

// Heisenberg group attached to R = sum_{i=0}^e a_i tau^i.
struct HeisenbergElt {
    Elem a = 0;
    Elem b = 0;
    bool operator==(const HeisenbergElt&) const = default;
};

SkewPoly E_R(const SkewPoly& R);
Elem f_R(const SkewPoly& R, Elem x, Elem y);
Elem omega_R(const SkewPoly& R, Elem x, Elem y);
bool on_heisenberg(const SkewPoly& R, HeisenbergElt g);
HeisenbergElt heisenberg_mul(const SkewPoly& R, HeisenbergElt g1, HeisenbergElt g2);
HeisenbergElt heisenberg_inv(const SkewPoly& R, HeisenbergElt g);

}  // namespace vdgv
