import pytest

from poissonlab.laurent import LaurentPoly, VarRegistry
from poissonlab.linalg import generic_rank, kernel_basis
from poissonlab.multivector import (Chart, FormedMultiVector, MultiVector,
                                    schouten, schouten_formed)
from poissonlab.obstruction import OBSTRUCTED, UNOBSTRUCTED_MC
from poissonlab.products import (ConstraintViolation, TP1PoissonClass,
                                 ep1_bases, ep1_bracket_matrices, ep1_classify,
                                 ep1_context, ep1_h1_model, ep1_ks_matrix,
                                 ep1_lambda0, ep1_mc_solution, torus_dims,
                                 tp1_bases, tp1_classify, tp1_context,
                                 tp1_dims, tp1_integrability, tp1_ks_matrix,
                                 tp1_lambda0, tp1_mc_solution)
from poissonlab.rational import GaussianRational


def test_basis_dimensions():
    ctx = ep1_context()
    b = ep1_bases(ctx)
    assert tuple(len(b[k]) for k in ("h0_theta", "h1_theta", "h0_sq", "h1_sq")) == (4, 4, 3, 3)
    ctx2 = tp1_context()
    b2 = tp1_bases(ctx2)
    dims = tuple(len(b2[k]) for k in (
        "h0_theta", "h1_theta", "h2_theta", "h0_sq", "h1_sq", "h2_sq",
        "h0_cube", "h1_cube"))
    assert dims == (5, 10, 5, 7, 14, 7, 3, 6)


def test_ep1_matrices_match_displayed_form():
    m_h1, m_h0 = ep1_bracket_matrices()
    rows = [[str(e) for e in r] for r in m_h1.rows]
    assert rows == [["0", "-B", "A", "0"],
                    ["0", "-2*C", "0", "2*A"],
                    ["0", "0", "-C", "B"]]
    assert m_h0.rows == m_h1.rows
    assert generic_rank(m_h1) == 2
    kers = kernel_basis(m_h1)
    assert [[str(p) for p in v] for v in kers] == [
        ["1", "0", "0", "0"], ["0", "A", "B", "C"]]


def test_ep1_specialized_ranks():
    m_h1, _ = ep1_bracket_matrices(0, 0, 0)
    assert generic_rank(m_h1) == 0
    m_h1, _ = ep1_bracket_matrices(1, 2, 1)
    assert generic_rank(m_h1) == 2
    m_h1, m_h0 = ep1_bracket_matrices(1, 0, 0)
    assert generic_rank(m_h0) == 2


def test_ep1_mc_defect_vanishes_symbolically():
    sol = ep1_mc_solution()
    assert sol.defect().is_zero()


def test_ep1_mc_defect_vanishes_with_symbolic_cokernel_choice():
    # any (F0,F1,F2) kills the defect; the cokernel condition only
    # matters for the tangent map
    ctx = ep1_context()
    sol = ep1_mc_solution()
    fsym = (ctx.param("F0"), ctx.param("F1"), ctx.param("F2"))
    lam0 = ep1_lambda0(ctx)
    kpoly = lam0.coefficient(("z", "xi"))
    fpoly = fsym[0] + fsym[1] * ctx.xi() + fsym[2] * ctx.xi(2)
    t0, t1, t2 = (ctx.param(n) for n in ("t0", "t1", "t2"))
    beta = (ctx.formed(ctx.mv(t0 * fpoly, ("z", "xi")))
            + ctx.formed(ctx.mv(t0 * t2 * fpoly, ("xi",)), ("z",)))
    alpha = (ctx.formed(ctx.mv(t1 * ctx.const(1), ("z",)), ("z",))
             + ctx.formed(ctx.mv(t2 * kpoly, ("xi",)), ("z",)))
    from poissonlab.multivector import mc_defect
    assert mc_defect(lam0, beta + alpha).is_zero()
    del sol


def test_ep1_mc_t2_zero_slice():
    sol = ep1_mc_solution()
    reg = sol.lambda0.registry
    slice_sub = {"t2": LaurentPoly.const(reg, 0)}
    el = sol.element().map_coefficients(lambda p: p.substitute(slice_sub))
    from poissonlab.multivector import mc_defect
    assert mc_defect(sol.lambda0, el).is_zero()


def test_ep1_defect_residual_without_correction():
    ctx = ep1_context()
    lam0 = ep1_lambda0(ctx)
    sol = ep1_mc_solution()
    # drop the t0 t2 correction: the defect equals -t0 t2 [lam0, F dxi dzbar]
    corr = ctx.formed(ctx.mv(ctx.param("t0") * ctx.param("t2") * ctx.const(1), ("xi",)), ("z",))
    reps = sol.beta.part(()).coefficient(("z", "xi"))
    fpoly = reps.exact_div(ctx.param("t0"))
    corr = ctx.formed(ctx.mv(ctx.param("t0") * ctx.param("t2") * fpoly, ("xi",)), ("z",))
    raw = sol.element() - corr
    from poissonlab.multivector import mc_defect
    defect = mc_defect(lam0, raw)
    lam0f = FormedMultiVector.of(lam0, ctx.dbar)
    assert defect == schouten_formed(lam0f, -corr)
    assert not defect.is_zero()


def test_ep1_ks_identity_pattern():
    sol = ep1_mc_solution()
    model = ep1_h1_model()
    rows = ep1_ks_matrix(sol, model)
    n = len(rows)
    assert n == 3
    for i in range(n):
        for j in range(n):
            want = "1" if i == j else "0"
            assert str(rows[i][j]) == want


def test_ep1_classify():
    cert = ep1_classify(1, 0, 0)
    assert cert.verdict == UNOBSTRUCTED_MC
    assert cert.data == {"dim_h1": 3, "dim_h2": 1}
    cert = ep1_classify(0, 0, 5)
    assert cert.verdict == UNOBSTRUCTED_MC
    cert = ep1_classify(0, 0, 0)
    assert cert.verdict == OBSTRUCTED
    assert cert.witness == {"a": "(@z^@xi)", "b": "xi*@xi*~z"}
    assert cert.class_repr == "(@z^@xi)*~z"


def test_tp1_poisson_condition_equivalence():
    # [lam, lam] = 0 iff the three 2x2 minors of (b, c) vanish
    reg = VarRegistry(("z1", "z2", "xi"),
                      ("a", "b0", "b1", "b2", "c0", "c1", "c2"))
    ch = Chart("T", ("z1", "z2", "xi"))
    v = lambda n: LaurentPoly.var(reg, n)
    xi = v("xi")
    P2 = v("b0") + v("b1") * xi + v("b2") * xi * xi
    P3 = v("c0") + v("c1") * xi + v("c2") * xi * xi
    lam = (MultiVector.term(ch, reg, v("a"), ("z1", "z2"))
           + MultiVector.term(ch, reg, P2, ("z2", "xi"))
           - MultiVector.term(ch, reg, P3, ("z1", "xi")))
    sq = schouten(lam, lam)
    coeff = sq.coefficient(("z1", "z2", "xi"))
    minors = (v("b1") * v("c0") - v("b0") * v("c1"),
              v("b2") * v("c0") - v("b0") * v("c2"),
              v("b2") * v("c1") - v("b1") * v("c2"))
    expected = -(minors[0] + minors[1] * xi * 2 + minors[2] * xi * xi) * 2
    assert coeff == expected


def test_tp1_lambda0_is_poisson_per_class():
    ctx = tp1_context()
    for cid in (1, 2, 3):
        lam = tp1_lambda0(ctx, TP1PoissonClass(cid, {}))
        assert schouten(lam, lam).is_zero()


def test_tp1_dims_table():
    assert tp1_dims(TP1PoissonClass(1, {}))["dim_h1"] == 17
    assert tp1_dims(TP1PoissonClass(2, {}))["dim_h1"] == 9
    assert tp1_dims(TP1PoissonClass(3, {}))["dim_h1"] == 9


def test_tp1_integrability_identities():
    sol = tp1_mc_solution(TP1PoissonClass(2, {}))
    pieces = tp1_integrability(sol)
    assert all(v.is_zero() for v in pieces.values())


def _tp1_split_linear(sol):
    ctx = tp1_context()
    reg = ctx.registry
    z0 = {f"t{i}": LaurentPoly.const(reg, 0) for i in range(9)}

    def linear(mv):
        out = None
        for tn in (f"t{i}" for i in range(9)):
            piece = mv.map_coefficients(
                lambda p, tn=tn: p.partial(tn).substitute(z0)).scale(ctx.param(tn))
            out = piece if out is None else out + piece
        return out

    lam_full = sol.beta.part(())
    lam_lin = linear(lam_full)
    lam_corr = lam_full - lam_lin
    phi_corr = None
    phi_lin = None
    for g in ("z1", "z2"):
        part = sol.alpha.part((g,))
        lp = linear(part)
        cp = part - lp
        fc = FormedMultiVector.of(cp, sol.beta.dbar_vars, (g,))
        lc = FormedMultiVector.of(lp, sol.beta.dbar_vars, (g,))
        phi_corr = fc if phi_corr is None else phi_corr + fc
        phi_lin = lc if phi_lin is None else phi_lin + lc
    return ctx, lam_lin, lam_corr, phi_lin, phi_corr


def test_tp1_deletion_residuals():
    sol = tp1_mc_solution(TP1PoissonClass(2, {}))
    ctx, lam_lin, lam_corr, phi_lin, phi_corr = _tp1_split_linear(sol)
    lam0 = sol.lambda0
    lam0f = FormedMultiVector.of(lam0, sol.beta.dbar_vars)
    # [lam(t), lam(t)] = [lam0, -2 t1 t2 F dxi^dz1] and the correction is
    # exactly minus half of the right-hand argument
    assert schouten(lam_lin, lam_lin) == schouten(lam0, lam_corr.scale(
        LaurentPoly.const(ctx.registry, -2)))
    # dropping the bivector correction breaks the first identity
    half = GaussianRational.of(1) / 2
    lam_lin_f = FormedMultiVector.of(lam_lin, sol.beta.dbar_vars)
    p14_raw = (schouten_formed(lam0f, lam_lin_f)
               + schouten_formed(lam_lin_f, lam_lin_f).scale(half))
    assert not p14_raw.is_zero()
    corr_f = FormedMultiVector.of(lam_corr, sol.beta.dbar_vars)
    assert p14_raw == schouten_formed(lam0f, -corr_f)
    # dropping the form correction breaks the mixed identity with the
    # displayed residual
    beta = sol.beta
    p15_raw = schouten_formed(lam0f, phi_lin) + schouten_formed(beta, phi_lin)
    assert not p15_raw.is_zero()
    assert schouten_formed(lam_lin_f, phi_lin) == schouten_formed(lam0f, -phi_corr)
    # mixed corrections cancel pairwise
    assert (schouten_formed(lam_lin_f, phi_corr)
            + schouten_formed(corr_f, phi_lin)).is_zero()
    assert schouten_formed(corr_f, phi_corr).is_zero()


def test_tp1_ks_matrix_full_rank():
    sol = tp1_mc_solution(TP1PoissonClass(2, {}))
    rows = tp1_ks_matrix(sol)
    assert len(rows) == 9
    from poissonlab.linalg import LabeledBasis, LinMap
    ctx = tp1_context()
    ks = LinMap(LabeledBasis("t", sol.params),
                LabeledBasis("H1", tuple(range(9))), rows, ctx.registry)
    assert generic_rank(ks) == 9


def test_tp1_classify():
    assert tp1_classify(TP1PoissonClass(1, {})).verdict == OBSTRUCTED
    assert tp1_classify(TP1PoissonClass(2, {})).verdict == UNOBSTRUCTED_MC
    cert3 = tp1_classify(TP1PoissonClass(3, {}))
    assert cert3.verdict == UNOBSTRUCTED_MC
    assert cert3.data == {"dim_h1": 9}
    with pytest.raises(ConstraintViolation):
        TP1PoissonClass(2, {"A": 0, "B": 0, "C": 0})


def test_tp1_class2_numeric_points():
    cert = tp1_classify(TP1PoissonClass(2, {"D": 0, "A": 1, "B": 0, "C": 0, "k": 0}))
    assert cert.verdict == UNOBSTRUCTED_MC
    cert = tp1_classify(TP1PoissonClass(2, {"D": 1, "A": 0, "B": 1, "C": 0, "k": 2}))
    assert cert.verdict == UNOBSTRUCTED_MC


def test_torus_dims():
    assert torus_dims(1) == 1
    assert torus_dims(2) == 5
    assert torus_dims(3) == 12
    assert torus_dims(2, {"b12": 7}) == 5
