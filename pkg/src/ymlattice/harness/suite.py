"""The verification suite run by ``ymlattice verify``.

Items run in declaration order (or concurrently with ``jobs > 1``; output
order is unchanged).  Every item seeds its own generator from the config
seed, so the report is a pure function of the config.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .. import lie
from ..clebsch import (
    check_pullback_consistency,
    gamma,
    gamma_inverse,
    phi,
    project_R0,
    random_R0_tangent,
)
from ..dynamics import evolve_R, evolve_T, maxwell_image_check
from ..elliptic import (
    cov_d_star_su,
    cov_d_su,
    decompose_cotangent,
    decompose_tangent,
    green,
    irreducibility_check,
    laplacian,
)
from ..gauge import (
    PhasePointR,
    PhasePointS,
    PhasePointT,
    TangentS,
    TangentT,
    bianchi_defect,
    cov_d,
    cov_d_star,
    curvature,
)
from ..lattice import bracket_cup, cup, hodge, inner, integrate
from ..symplectic import (
    Omega_T,
    builtin_observables,
    check_equivariance,
    check_variational_derivative,
    hamiltonian_vf_T,
    moment_T_density,
    moment_T_density_dual,
    omega_S,
    omega_T_spectrum,
    poisson_T,
    random_point,
    random_tangent,
    sigma_R,
)
from .config import RunConfig
from .criteria import CRITERIA, Check, _R0_point, _rng, _torus, le, within

LONG = {"criterion-11", "criterion-12"}


# -- module invariants beyond the numbered criteria --------------------------


def lattice_invariants(cfg):
    cx = _torus(cfg)
    rng = _rng(cfg, 101)
    n = cfg.algebra_n
    iso = star2 = assoc = 0.0
    for k in range(4):
        a, b = cx.random(k, n, seed=rng), cx.random(k, n, seed=rng)
        iso = max(iso, abs(inner(hodge(a), hodge(b)) - inner(a, b)))
        star2 = max(star2, (hodge(hodge(a)) - a).max_abs())
    for j in range(2):
        for k in range(2 - j):
            a = cx.random(j, n, seed=rng)
            b = cx.random(k, n, seed=rng)
            c = cx.random(1, n, seed=rng)
            assoc = max(assoc, (cup(cup(a, b), c) - cup(a, cup(b, c))).max_abs())
    return [
        le("hodge star is an isometry", iso, 1e-12),
        le("hodge star squares to the identity", star2, 0.0),
        le("cup associativity", assoc, 1e-12),
    ]


def gauge_invariants(cfg):
    cx = _torus(cfg)
    rng = _rng(cfg, 102)
    A = cx.random(1, cfg.algebra_n, seed=rng, scale=0.5)
    xi = cx.random(0, cfg.algebra_n, seed=rng)
    F = curvature(A)
    sq = (cov_d(A, cov_d(A, xi)) - bracket_cup(F, xi)).norm() / xi.norm()
    return [
        le("d_A d_A xi = [F_A cup xi]", sq, 1e-12),
        le("Bianchi d_A F_A / |F_A|", bianchi_defect(A) / F.norm(), 1e-12),
    ]


def elliptic_invariants(cfg):
    cx = _torus(cfg)
    rng = _rng(cfg, 103)
    n = cfg.algebra_n
    A = cx.random(1, n, seed=rng, scale=0.5)
    tol = cfg.cg_tol
    rows = []
    worst = 0.0
    for k in range(4):
        y = cx.random(k, n, seed=rng)
        x, _ = green(A, laplacian(A, y), tol=tol)
        worst = max(worst, (x - y).norm() / y.norm())
    rows.append(le("green(laplacian(y)) = y, degrees 0-3", worst, 1e3 * tol))
    sa = 0.0
    for k in range(4):
        a, b = cx.random(k, n, seed=rng), cx.random(k, n, seed=rng)
        sa = max(sa, abs(inner(laplacian(A, a), b) - inner(a, laplacian(A, b))) / (a.norm() * b.norm()))
    rows.append(le("laplacian self-adjoint", sa, 1e-12))
    x = cx.random(1, n, seed=rng)
    xi, y = decompose_tangent(A, x, tol)
    rows.append(le("tangent split: |d_A^* y| / |x|", cov_d_star(A, y).norm() / x.norm(), 10 * tol))
    rows.append(le("tangent split: orthogonality", abs(inner(cov_d_su(A, xi), y)) / inner(x, x), 10 * tol))
    u = cx.random(2, n, seed=rng)
    lam, w = decompose_cotangent(A, u, tol)
    rows.append(le("cotangent split: |d_A w| / |u|", cov_d_su(A, w).norm() / u.norm(), 10 * tol))
    rows.append(le("cotangent split: orthogonality", abs(inner(cov_d_star_su(A, lam), w)) / inner(u, u), 10 * tol))
    rows.append(le("irreducibility estimate at A = 0", irreducibility_check(cx.zeros(1, n)), 1e-12))
    rows.append(Check("irreducibility estimate at random A", irreducibility_check(A), 1e-8,
                      irreducibility_check(A) > 1e-8, ">"))
    return rows


def symplectic_invariants(cfg):
    cx = _torus(cfg)
    rng = _rng(cfg, 104)
    n = cfg.algebra_n
    rows = []
    anti = 0.0
    for space, form in (("R", sigma_R), ("S", omega_S), ("T", Omega_T)):
        pt = random_point(space, cx, n, seed=rng)
        v1, v2 = random_tangent(pt, rng), random_tangent(pt, rng)
        anti = max(anti, abs(form(pt, v1, v2) + form(pt, v2, v1)), abs(form(pt, v1, v1)))
    rows.append(le("antisymmetry of sigma_R, omega_S, Omega_T", anti, 1e-12))
    pt = random_point("S", cx, n, seed=rng)
    a, al = cx.random(1, n, seed=rng), cx.random(2, n, seed=rng)
    lhs = omega_S(pt, TangentS(a, al), TangentS(hodge(al), hodge(a)))
    rows.append(le("omega_S((a,al),(*al,*a)) = |al|^2 - |a|^2", abs(lhs - (inner(al, al) - inner(a, a))), 1e-12))
    xi0 = cx.constant(0, lie.random_su(n, rng))
    eq = max(check_equivariance(xi0, random_point(s, cx, n, seed=rng)) for s in "RST")
    rows.append(le("moment map equivariance under gauge flow", eq, 1e-6))
    pt = random_point("T", cx, n, seed=rng)
    obs = builtin_observables(pt.A, seed=cfg.seed)
    vd = max(check_variational_derivative(o, pt, cfg.fd_step, cfg.fd_probes, cfg.seed) for o in obs)
    rows.append(le("variational derivatives of built-in observables", vd, 1e-5))
    pw = max(
        abs(poisson_T(f, g, pt) - Omega_T(pt, hamiltonian_vf_T(f, pt), hamiltonian_vf_T(g, pt)))
        for f in obs
        for g in obs
    )
    rows.append(le("{f,g} = Omega_T(X_f, X_g)", pw, 1e-10))
    if cfg.suite_spectrum:
        sv, rank = omega_T_spectrum(pt)
        rows.append(Check(f"Omega_T rank (smallest sv {sv[-1]:.2e}, largest {sv[0]:.2e})", rank, sv.size, True, "of"))
    return rows


def clebsch_invariants(cfg):
    cx = build_torus_like(cfg, 2)
    rng = _rng(cfg, 105)
    n = cfg.algebra_n
    tol = cfg.cg_tol
    A, p = _R0_point(cx, n, rng, tol)
    rows = []
    v = random_R0_tangent(A, rng, tol)
    w = gamma_inverse(A, gamma(A, p, v, tol), tol, check=False)
    rows.append(le("gamma_inverse(gamma(v)) = v on R^0 tangents", ((w.a - v.a).norm() + (w.x - v.x).norm()) / (v.a.norm() + v.x.norm()), 1e-7))
    _, e = decompose_tangent(A, cx.random(1, n, seed=rng), tol)
    beta = cov_d_su(A, random_R0_tangent(A, rng, tol).a)
    g = gamma(A, p, gamma_inverse(A, TangentT(cx.zeros(1, n), e, beta), tol), tol)
    rows.append(le("gamma(gamma_inverse(e, beta)) = (e, beta)", ((g.e - e).norm() + (g.beta - beta).norm()) / (e.norm() + beta.norm()), 1e-7))
    q = cx.random(1, n, seed=rng)
    p1 = project_R0(A, q, tol).p
    p2 = project_R0(A, p1, tol).p
    r = cx.random(1, n, seed=rng)
    rows.append(le("project_R0 idempotent", (p2 - p1).norm() / q.norm(), 2 * tol * 10))
    rows.append(le("project_R0 self-adjoint", abs(inner(p1, r) - inner(q, project_R0(A, r, tol).p)) / (q.norm() * r.norm()), 2 * tol * 10))
    pb = max(check_pullback_consistency(o, A, p, tol) for o in builtin_observables(A, cfg.seed))
    rows.append(le("gamma((G + 1) X^R) = X^T for built-in observables", pb, 1e-7))
    pt = phi(A, p)
    q1 = integrate(moment_T_density(pt))
    q2 = integrate(moment_T_density_dual(pt))
    corr = integrate(bracket_cup(pt.A, bracket_cup(hodge(pt.B), pt.E)))
    rows.append(le("Q1 - Q2 = int [A cup [*B cup E]] (integration by parts)", np.abs(q1 - q2 - corr).max(), 1e-10))
    return rows


def build_torus_like(cfg, L):
    from ..lattice import build_torus

    return build_torus(L, L, L, cfg.h)


def dynamics_invariants(cfg):
    cx = _torus(cfg)
    rng = _rng(cfg, 106)
    n = cfg.algebra_n
    rows = []
    A = cx.random(1, n, seed=rng, scale=0.5)
    pt0 = PhasePointT(A, cx.random(1, n, seed=rng), cx.random(2, n, seed=rng))
    steps = min(cfg.steps, 200)
    pt1, rec = evolve_T(pt0, 10 * cfg.dt, steps, cfg.convention)
    e = rec.column("energy")
    rows.append(le("midpoint energy change per step, random A", np.abs(np.diff(e)).max() / e[0], 1e-10))
    pt2, _ = evolve_T(pt1, -10 * cfg.dt, steps, cfg.convention)
    rows.append(le("midpoint reversibility", max((pt2.E - pt0.E.project_su()).max_abs(), (pt2.B - pt0.B.project_su()).max_abs()), 1e-10))
    # Gauss drift at fixed nonabelian A: from d_A^* E = 0, B = 0 one step
    # creates d_A B ~ dt d_A d_A E = dt [F_A cup E]
    _, ev = decompose_tangent(A, cx.random(1, n, seed=rng), cfg.cg_tol)
    _, rec = evolve_T(PhasePointT(A, ev, cx.zeros(2, n)), cfg.dt, 1, cfg.convention)
    drift = rec.column("gauss_b")[-1]
    scale = cfg.dt * bracket_cup(curvature(A), ev).norm()
    rows.append(Check("field-flow |d_A B| after one step / (dt |[F cup E]|)", drift / scale, 1.0, True, "~"))
    # Maxwell equations on the image of an R-trajectory
    A, p = _R0_point(cx, n, rng, cfg.cg_tol)
    res = []
    for dt in (cfg.dt, cfg.dt / 2):
        k = int(round(0.02 / dt))
        _, _, r = evolve_R(A, p, dt, k, keep_states=True)
        res.append(maxwell_image_check(r, dt))
    rows.append(within("Maxwell image: E' residual ratio under dt halving", res[0][0] / res[1][0], 1.8, 2.2))
    rows.append(within("Maxwell image: B' residual ratio under dt halving", res[0][1] / res[1][1], 1.8, 2.2))
    # abelian Gauss law
    Aab = cx.random_diagonal(1, n, seed=rng)
    pab = project_R0(Aab, cx.random_diagonal(1, n, seed=rng), cfg.cg_tol).p
    _, _, r = evolve_R(Aab, pab, cfg.dt, cfg.steps, record_every=max(1, cfg.steps // 10))
    g = r.column("gauss_e")
    bound = 10 * max(g[0], cfg.cg_tol * pab.norm())
    rows.append(le("abelian Gauss law max |d_A^* p| (bound 10 x initial)", g.max(), bound))
    return rows


def determinism_probe(cfg):
    cx = _torus(cfg)
    rng = _rng(cfg, 107)
    A = cx.random(1, cfg.algebra_n, seed=rng, scale=0.5)
    p = cx.random(1, cfg.algebra_n, seed=rng, scale=0.5)
    _, _, rec = evolve_R(A, p, cfg.dt, cfg.steps)
    return [Check("R-trajectory final energy", rec.column("energy")[-1], 0.0, True, "=")]


ITEMS = [(f"criterion-{k}", (lambda f: lambda cfg: f(cfg))(fn)) for k, (_, fn) in CRITERIA.items() if k != 15]
ITEMS += [
    ("lattice", lattice_invariants),
    ("gauge", gauge_invariants),
    ("elliptic", elliptic_invariants),
    ("symplectic", symplectic_invariants),
    ("clebsch", clebsch_invariants),
    ("dynamics", dynamics_invariants),
    ("determinism-probe", determinism_probe),
]
TITLES = {f"criterion-{k}": t for k, (t, _) in CRITERIA.items()}


def _run_item(item, cfg):
    name, fn = item
    try:
        return name, fn(cfg)
    except Exception as exc:  # reported as a failed row, keeps the table whole
        return name, [Check(f"raised {type(exc).__name__}: {exc}", float("nan"), 0.0, False, "!")]


def run_suite(cfg: RunConfig, jobs=1, only=None):
    items = [it for it in ITEMS if (only is None or it[0] in only)]
    if not cfg.suite_long:
        items = [it for it in items if it[0] not in LONG]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(lambda it: _run_item(it, cfg), items))
    return [_run_item(it, cfg) for it in items]


def render_report(results, cfg=None):
    out = []
    if cfg is not None:
        out.append(
            f"ymlattice verify: lattice {cfg.lattice_n}^3, h = {cfg.h:g}, su({cfg.algebra_n}), "
            f"seed {cfg.seed}, cg.tol {cfg.cg_tol:g}"
        )
        out.append("")
    npass = nfail = 0
    for name, rows in results:
        ok = all(r.passed for r in rows)
        title = TITLES.get(name, name)
        out.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {title}" if name in TITLES else f"[{'PASS' if ok else 'FAIL'}] {name}")
        for r in rows:
            out.append("    " + r.line())
            npass += r.passed
            nfail += not r.passed
    out.append("")
    out.append(f"{npass} checks passed, {nfail} failed")
    return "\n".join(out) + "\n"


def suite_passed(results):
    return all(r.passed for _, rows in results for r in rows)
