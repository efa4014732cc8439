#include "vdgv/symplectic.hpp"

#include <algorithm>

namespace vdgv {

Elem g_witness(const SkewPoly& F, Elem x, Elem y)
{
    const Field& f = *F.field();
    Elem g = 0;
    for (auto [i, b] : F.terms()) {
        if (i == 0)
            continue;  // x b y + y b x cancels
        Elem z = f.mul(y, f.frob_p(f.mul(b, x), -i));
        Elem w = i > 0 ? z : f.frob_p(z, i);
        int n = i > 0 ? i : -i;
        for (int j = 0; j < n; ++j)
            g ^= f.frob_p(w, j);
    }
    Elem lhs = f.frob_p(g, 1) ^ g;
    Elem rhs = f.mul(x, F(y)) ^ f.mul(y, F.adjoint()(x));
    require(lhs == rhs, ErrorKind::Internal, "Artin-Schreier witness identity failed");
    return g;
}

unsigned fp_rank(const Field& f, std::vector<std::vector<Elem>> m)
{
    unsigned rank = 0;
    std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && m[piv][c] == 0)
            ++piv;
        if (piv == rows)
            continue;
        std::swap(m[piv], m[rank]);
        Elem inv = f.inv(m[rank][c]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || m[r][c] == 0)
                continue;
            Elem factor = f.mul(m[r][c], inv);
            for (std::size_t k = c; k < cols; ++k)
                m[r][k] ^= f.mul(factor, m[rank][k]);
        }
        ++rank;
    }
    return rank;
}

PairingCtx PairingCtx::on_kernel(const SkewPoly& F)
{
    return PairingCtx(F, kernel(F), kernel(F.adjoint()));
}

PairingCtx::PairingCtx(SkewPoly F, Subspace W, Subspace Wstar)
    : F_(std::move(F)), W_(std::move(W)), Ws_(std::move(Wstar))
{
    selfadj_ = F_ == F_.adjoint();
    SkewPoly Fs = F_.adjoint();
    for (Elem u : W_.f2_basis())
        require(F_(u) == 0, ErrorKind::NotInKernel, "W is not inside ker F");
    for (Elem u : Ws_.f2_basis())
        require(Fs(u) == 0, ErrorKind::NotInKernel, "W* is not inside ker F*");
    for (Elem u : W_.fp_basis()) {
        std::vector<Elem> row;
        for (Elem v : Ws_.fp_basis())
            row.push_back(g_witness(F_, v, u));
        gram_.push_back(row);
    }
}

bool PairingCtx::nondegenerate() const
{
    if (W_.dim() != Ws_.dim())
        return false;
    return fp_rank(*F_.field(), gram_) == W_.dim();
}

Elem PairingCtx::omega(Elem u, Elem ustar) const
{
    require(W_.contains(u), ErrorKind::NotInKernel, F_.field()->hex(u) + " is not in W");
    require(Ws_.contains(ustar), ErrorKind::NotInKernel, F_.field()->hex(ustar) + " is not in W*");
    Elem v = g_witness(F_, ustar, u);
    require(F_.field()->in_subfield(v, F_.p_log()), ErrorKind::Internal, "pairing value outside F_p");
    return v;
}

Subspace PairingCtx::orthogonal_complement(const Subspace& X) const
{
    require(X.subset_of(W_), ErrorKind::NotSubspaceOfW, X.to_string() + " is not inside W");
    Subspace K = Ws_;
    for (Elem x : X.fp_basis())
        K = kernel_of(K, [&](Elem us) { return omega(x, us); });
    return K;
}

Subspace PairingCtx::perp_within(const Subspace& X, const Subspace& S) const
{
    Subspace K = X;
    for (Elem s : S.fp_basis())
        K = kernel_of(K, [&](Elem w) { return omega(s, w); });
    return K;
}

Subspace factor_complement_check(const SkewPoly& E, const SkewPoly& f)
{
    SkewPoly h = right_divide(E, f);
    return kernel(h.adjoint());
}

namespace {

Subspace add_line(const Subspace& S, Elem v)
{
    return S + Subspace::fp_span(S.field(), S.p_log(), {v});
}

Subspace truncate(const Subspace& S, unsigned d)
{
    auto b = S.fp_basis();
    require(b.size() >= d, ErrorKind::NotIsotropic,
            "isotropic subspace of dimension " + std::to_string(b.size()) + " < requested " + std::to_string(d));
    b.resize(d);
    return Subspace::fp_span(S.field(), S.p_log(), b);
}

}  // namespace

Subspace maximal_isotropic(const PairingCtx& ctx, const IsotropicOptions& opt)
{
    require(ctx.self_adjoint() && ctx.W() == ctx.Wstar(), ErrorKind::NotSymplectic,
            "pairing is not a symplectic form on W");
    const Subspace& W = ctx.W();
    Subspace X = opt.within ? *opt.within : W;
    require(X.subset_of(W), ErrorKind::NotSubspaceOfW, "search space is not inside W");
    if (opt.phi)
        X = kernel_of(X, opt.phi);
    Subspace S(W.field(), W.p_log());

    if (!opt.stabilizer) {
        for (;;) {
            Subspace C = ctx.perp_within(X, S);
            if (C.dim() == S.dim())
                break;
            S = add_line(S, C.complement_basis(S).front());
        }
    } else {
        const auto& f = *W.field();
        auto& phi = opt.stabilizer;
        for (Elem x : X.f2_basis())
            require(X.contains(phi(x)), ErrorKind::StabilizerNotCompatible, "stabilizer does not preserve X");
        S = ctx.perp_within(X, X);
        for (Elem x : S.f2_basis())
            require(S.contains(phi(x)), ErrorKind::StabilizerNotCompatible, "stabilizer moves the radical");
        std::vector<Elem> lambdas = f.subfield_elements(W.p_log());
        std::sort(lambdas.begin(), lambdas.end());
        for (;;) {
            Subspace C = ctx.perp_within(X, S);
            if (C.dim() == S.dim())
                break;
            bool found = false;
            for (Elem lam : lambdas) {
                if (lam == 0)
                    continue;
                Subspace K = kernel_of(C, [&](Elem u) { return S.reduce(phi(u) ^ f.mul(lam, u)); });
                if (K.dim() > S.dim()) {
                    S = add_line(S, K.complement_basis(S).front());
                    found = true;
                    break;
                }
            }
            if (!found)
                fail(ErrorKind::StabilizerNotCompatible, "no eigenvector on the current quotient");
        }
    }
    if (opt.dim)
        S = truncate(S, *opt.dim);
    for (Elem u : S.fp_basis())
        for (Elem v : S.fp_basis())
            require(ctx.omega(u, v) == 0, ErrorKind::Internal, "constructed subspace is not isotropic");
    return S;
}

SkewPoly E_R(const SkewPoly& R)
{
    int e = R.max_exp();
    return SkewPoly::term(R.field(), 1, e, R.p_log()) * (R + R.adjoint());
}

Elem f_R(const SkewPoly& R, Elem x, Elem y)
{
    const Field& f = *R.field();
    int e = R.max_exp();
    Elem xRy = f.mul(x, R(y));
    Elem s = 0;
    for (int i = 0; i < e; ++i) {
        Elem t = f.mul(f.mul(R.coeff(i), f.frob_p(x, i)), y);
        for (int j = 0; j <= e - i - 1; ++j)
            s ^= f.frob_p(t, j);
        s ^= f.frob_p(xRy, i);
    }
    return s;
}

Elem omega_R(const SkewPoly& R, Elem x, Elem y) { return f_R(R, x, y) ^ f_R(R, y, x); }

bool on_heisenberg(const SkewPoly& R, HeisenbergElt g)
{
    const Field& f = *R.field();
    return E_R(R)(g.a) == 0 && (f.frob_p(g.b, 1) ^ g.b) == f.mul(g.a, R(g.a));
}

HeisenbergElt heisenberg_mul(const SkewPoly& R, HeisenbergElt g1, HeisenbergElt g2)
{
    require(on_heisenberg(R, g1) && on_heisenberg(R, g2), ErrorKind::NotOnCurve, "element not in H_R");
    HeisenbergElt r{g1.a ^ g2.a, g1.b ^ g2.b ^ f_R(R, g1.a, g2.a)};
    require(on_heisenberg(R, r), ErrorKind::Internal, "H_R product left the group");
    return r;
}

HeisenbergElt heisenberg_inv(const SkewPoly& R, HeisenbergElt g)
{
    require(on_heisenberg(R, g), ErrorKind::NotOnCurve, "element not in H_R");
    return {g.a, g.b ^ f_R(R, g.a, g.a)};
}

}  // namespace vdgv
