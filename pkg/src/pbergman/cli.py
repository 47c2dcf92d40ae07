"""Command-line front end.

Every subcommand builds a :class:`~pbergman.reports.Report`, prints it to
stdout (CSV or JSON) and, with ``--out DIR``, writes ``DIR/<name>.csv``
and ``DIR/<name>.json``.  Errors raised by the library are reported as a
one-line JSON object on stderr carrying the error code.

Exit status: 0 on success, 1 when ``verify`` finds a failed criterion,
2 for configuration errors and 3 for computation errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import closed_forms as cf
from .config import RunConfig, parse_complex
from .domains import AnnularBand, Complement, SubDisc, UnitDisc
from .errors import ConfigError, PBergmanError, UnsupportedDomainError
from .kernels import derivative_identity_residual, kernel_diag, levi_log_kernel, metric
from .parallel import pmap
from .reports import Report, emit, to_csv, to_json
from .schwarz import (
    SchwarzResult,
    bm_bound,
    bound_checks,
    first_eigenvalue,
    nonchebyshev_demo,
    schwarz_dim_sweep,
    schwarz_general,
    schwarz_p2,
)
from .weighted import ns_kernel, ns_metric_coeff, thm2_residual


def parse_region(text: str):
    """``subdisc:r``, ``band:a,b`` or ``complement:<region>``."""
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "subdisc":
            return SubDisc(float(rest))
        if kind == "band":
            a, b = (float(x) for x in rest.split(","))
            return AnnularBand(a, b)
    except ValueError:
        raise ConfigError(f"cannot read region {text!r}") from None
    if kind == "complement":
        return Complement(parse_region(rest))
    raise ConfigError(f"unknown region {text!r}; use subdisc:r, band:a,b or complement:<region>")


def _region_distance(region, domain) -> float | None:
    """Distance from a concentric region to the outer boundary, if it is relatively compact."""
    if isinstance(region, SubDisc):
        return domain.r_max - region.r
    if isinstance(region, AnnularBand) and region.a > domain.r_min:
        return min(domain.r_max - region.b, region.a - domain.r_min)
    return None


def _report(cfg, name, columns) -> Report:
    config = {k: v for k, v in cfg.data.items() if k != "output"}
    return Report(name, columns, config=config, config_hash=cfg.hash)


# -- workers (module level so they pickle) ---------------------------------------------


def _kernel_job(args):
    domain, p, z, N, kw, opts = args
    rep = kernel_diag(domain, p, z, N, opts=opts, **kw)
    return rep.K, rep.N, rep.converged


def _thm2_job(args):
    domain, p, z, N, kw = args
    return thm2_residual(domain, p, z, N, **kw)


def _levi_job(args):
    domain, p, z, X, N, kw = args
    L = levi_log_kernel(domain, p, z, X, N, **kw)
    return L, metric(domain, p, z, X, N, **kw).B


# -- subcommands -----------------------------------------------------------------------


def cmd_kernel(cfg):
    r = _report(cfg, "kernel", ["z_re", "z_im", "p", "N", "value", "converged"])
    D, opts = cfg.domain(), cfg.solver_options()
    jobs = [(D, p, z, cfg.N, cfg.grid_kw, opts) for p in cfg.params["p"] for z in cfg.points()]
    for (_, p, z, *_), (K, N, ok) in zip(jobs, pmap(_kernel_job, jobs)):
        r.add("solver", z_re=z.real, z_im=z.imag, p=p, N=N, value=K, converged=ok)
    r.summary = {"domain": str(D), "points": len(jobs)}
    return r


def cmd_offdiag(cfg):
    r = _report(cfg, "offdiag", ["zeta_re", "zeta_im", "z_re", "z_im", "p", "N", "value_re", "value_im", "converged"])
    D, opts = cfg.domain(), cfg.solver_options()
    for p in cfg.params["p"]:
        for z in cfg.points():
            rep = kernel_diag(D, p, z, cfg.N, opts=opts, **cfg.grid_kw)
            for zeta in cfg.points("zeta"):
                v = complex(rep.offdiag([D.check_point(zeta)])[0])
                r.add("solver", zeta_re=zeta.real, zeta_im=zeta.imag, z_re=z.real, z_im=z.imag, p=p, N=rep.N,
                      value_re=v.real, value_im=v.imag, converged=rep.converged)
    r.summary = {"domain": str(D)}
    return r


def cmd_metric(cfg):
    r = _report(cfg, "metric", ["z_re", "z_im", "X_re", "X_im", "p", "N", "m_X", "B", "K", "converged"])
    D, opts, X = cfg.domain(), cfg.solver_options(), parse_complex(cfg.params["X"])
    for p in cfg.params["p"]:
        for z in cfg.points():
            m = metric(D, p, z, X, cfg.N, opts=opts, **cfg.grid_kw)
            r.add("solver", z_re=z.real, z_im=z.imag, X_re=X.real, X_im=X.imag, p=p, N=cfg.N, m_X=m.m_X, B=m.B, K=m.K,
                  converged=m.solution.converged)
    r.summary = {"domain": str(D)}
    return r


def cmd_levi(cfg):
    r = _report(cfg, "levi", ["z_re", "z_im", "X_re", "X_im", "p", "N", "levi", "B_squared", "relative_margin"])
    D, X = cfg.domain(), parse_complex(cfg.params["X"])
    jobs = [(D, p, z, X, cfg.N, cfg.grid_kw) for p in cfg.params["p"] for z in cfg.points()]
    for (_, p, z, *_), (L, B) in zip(jobs, pmap(_levi_job, jobs)):
        r.add("solver", z_re=z.real, z_im=z.imag, X_re=X.real, X_im=X.imag, p=p, N=cfg.N, levi=L, B_squared=B * B,
              relative_margin=(L - B * B) / (B * B))
    r.summary = {"domain": str(D), "note": "the inequality levi >= B^2 is only claimed for p >= 2"}
    return r


def cmd_thm1_deriv(cfg):
    r = _report(cfg, "thm1-deriv", ["z_re", "z_im", "p", "h", "lhs_x", "lhs_y", "rhs_x", "rhs_y", "relative_error"])
    D, h = cfg.domain(), float(cfg.params["h"])
    for p in cfg.params["p"]:
        for z in cfg.points():
            lhs, rhs, res = derivative_identity_residual(D, p, z, h, cfg.N, **cfg.grid_kw)
            r.add("solver", z_re=z.real, z_im=z.imag, p=p, h=h, lhs_x=lhs[0], lhs_y=lhs[1], rhs_x=rhs[0], rhs_y=rhs[1],
                  relative_error=float(np.linalg.norm(res) / max(1.0, np.linalg.norm(lhs))))
    return r


def cmd_thm2(cfg):
    r = _report(cfg, "thm2", ["z_re", "z_im", "p", "N", "residual"])
    D = cfg.domain()
    jobs = [(D, p, z, cfg.N, cfg.grid_kw) for p in cfg.params["p"] for z in cfg.points()]
    for (_, p, z, *_), res in zip(jobs, pmap(_thm2_job, jobs)):
        r.add("solver", z_re=z.real, z_im=z.imag, p=p, N=cfg.N, residual=res)
    return r


def cmd_ns_metric(cfg):
    r = _report(cfg, "ns-metric", ["z_re", "z_im", "p", "N", "coefficient"])
    D = cfg.domain()
    for p in cfg.params["p"]:
        kern = ns_kernel(D, p, cfg.N, **cfg.grid_kw)
        for z in cfg.points():
            r.add("solver", z_re=z.real, z_im=z.imag, p=p, N=cfg.N, coefficient=ns_metric_coeff(D, p, z, cfg.N, kernel=kern))
    return r


def cmd_schwarz(cfg):
    cols = ["region", "p", "N", "estimate", "exact_eig", "multistarts", "bound_136", "ok_136", "bound_128", "ok_128"]
    r = _report(cfg, "schwarz", cols)
    D, region = cfg.domain(), parse_region(cfg.params["region"])
    d, lam1 = _region_distance(region, D), first_eigenvalue(D)
    for p in cfg.params["p"]:
        if p == 2:
            s = schwarz_p2(region, D, cfg.N, **cfg.grid_kw)
            res = SchwarzResult(region, p, s, exact_eig=s, multistarts=0)
        else:
            res = schwarz_general(region, D, p, cfg.N, cfg.params["multistarts"], cfg.seed, **cfg.grid_kw)
        checks = {}
        if d is not None and lam1 is not None:
            for name, value, ok in bound_checks(res, d, lam1).bound_checks:
                checks[name] = (value, ok)
        b136, b128 = checks.get("lambda1_136", (None, None)), checks.get("lambda1_128", (None, None))
        r.add("solver", region=cfg.params["region"], p=p, N=cfg.N, estimate=res.estimate, exact_eig=res.exact_eig,
              multistarts=res.multistarts, bound_136=b136[0], ok_136=b136[1], bound_128=b128[0], ok_128=b128[1])
    r.summary = {"note": "estimates are lower bounds for the supremum over the truncated span"}
    return r


def cmd_schwarz_dim(cfg):
    r = _report(cfg, "schwarz-dim", ["p", "eps", "content", "gap"])
    D = cfg.domain()
    fits = {}
    for p in cfg.params["p"]:
        fit = schwarz_dim_sweep(D, p, cfg.params["eps"], cfg.N)
        for e, s in zip(fit.eps, fit.contents):
            r.add("solver", p=p, eps=e, content=s, gap=1 - s)
        fits[f"{p:g}"] = {"slope": fit.slope, "dimension": fit.dimension}
    r.summary = {"fits": fits}
    return r


def cmd_bm_bound(cfg):
    r = _report(cfg, "bm-bound", ["s", "p", "bound"])
    s = float(cfg.params["s"])
    for p in cfg.params["p"]:
        r.add("oracle", s=s, p=p, bound=bm_bound(s, p))
    return r


def cmd_chebyshev_demo(cfg):
    cols = ["p", "radius", "inner_integral", "outer_integral", "distance_h1", "distance_h2", "candidate_min", "candidates"]
    r = _report(cfg, "chebyshev-demo", cols)
    for p in cfg.params["p"]:
        d = nonchebyshev_demo(p, cfg.params["candidates"], cfg.seed, cfg.N, **cfg.grid_kw)
        r.add("solver", p=p, radius=d.radius, inner_integral=d.inner_integral, outer_integral=d.outer_integral,
              distance_h1=d.distance_h1, distance_h2=d.distance_h2, candidate_min=d.candidate_min, candidates=d.candidates)
    r.summary = {"target": np.pi / 2}
    return r


def cmd_puncture_asym(cfg):
    r = _report(cfg, "puncture-asym", ["p", "radius", "K", "asymptotic", "lower", "upper"])
    fits = {}
    for p in cfg.params["p"]:
        radii, vals = cf.puncture_samples(p, N=cfg.N, **cfg.grid_kw)
        fit = cf.fit_puncture(p, radii, vals)
        for rad, v in zip(radii, vals):
            try:
                lo, hi = cf.punctured_bounds(p, rad)
            except PBergmanError:
                lo = hi = None
            r.add("solver", p=p, radius=rad, K=v, asymptotic=cf.punctured_asym(p, rad), lower=lo, upper=hi)
        fits[f"{p:.6g}"] = {"A": fit.A, "B": fit.B, "A_expected": fit.A_expected, "B_expected": fit.B_expected,
                            "A_rel_error": fit.A_rel_error, "B_rel_error": fit.B_rel_error, "k_p": fit.k_p}
    r.summary = {"fits": fits}
    return r


ORACLES = ("disc", "disc-diag", "punctured-asym", "punctured-bounds", "weighted-disc", "lemma-b6", "szego")


def cmd_oracle(cfg):
    r = _report(cfg, "oracle", ["name", "p", "zeta_re", "zeta_im", "z_re", "z_im", "value_re", "value_im", "upper"])
    name = cfg.params["oracle"]
    if name not in ORACLES:
        raise ConfigError(f"unknown oracle {name!r}; choose from {', '.join(ORACLES)}")
    for p in cfg.params["p"]:
        for z in cfg.points():
            zetas = cfg.points("zeta") if name in ("disc", "weighted-disc") else [z]
            for zeta in zetas:
                upper = None
                if name == "disc":
                    v = complex(cf.disc_kernel_closed(p, zeta, z))
                elif name == "disc-diag":
                    v = complex(cf.disc_diag_closed(p, z))
                elif name == "punctured-asym":
                    v = complex(cf.punctured_asym(p, z))
                elif name == "punctured-bounds":
                    lo, upper = cf.punctured_bounds(p, z)
                    v = complex(lo)
                elif name == "weighted-disc":
                    v = complex(cf.weighted_disc_closed(p, zeta, z))
                elif name == "lemma-b6":
                    lo, upper = cf.lemma_b6_bounds(p, cfg.domain(), z)
                    v = complex(lo)
                else:
                    v = complex(cf.szego_closed(z))
                r.add("oracle", name=name, p=p, zeta_re=zeta.real, zeta_im=zeta.imag, z_re=z.real, z_im=z.imag,
                      value_re=v.real, value_im=v.imag, upper=upper)
    r.summary = {"note": "for bound oracles value is the lower bound"}
    return r


def cmd_hardy(cfg):
    r = _report(cfg, "hardy", ["index", "degree", "carleman_lhs", "carleman_rhs", "hl_ratio"])
    if cfg.domain().kind != UnitDisc().kind:
        raise UnsupportedDomainError("Hardy-space checks are provided on the unit disc only")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(cfg.seed)))
    p = cfg.params["p"][0]
    m = cfg.data["quad"]["m_boundary"]
    worst = 0.0
    for i in range(cfg.params["family"]):
        deg = int(rng.integers(0, cfg.params["degree"] + 1))
        c = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
        lhs, rhs = cf.carleman_check(c, m)
        hl = cf.hl_ratio(p, c)
        worst = max(worst, hl)
        r.add("oracle", index=i, degree=deg, carleman_lhs=lhs, carleman_rhs=rhs, hl_ratio=hl)
    eq = cf.carleman_check([1.0], m)
    r.summary = {"constant_function": list(eq), "hl_ratio_max": worst, "p": p,
                 "szego_at_0": cf.szego_diag(0, cfg.N, m), "szego_closed_at_0": cf.szego_closed(0)}
    return r


def cmd_rp_explore(cfg):
    r = _report(cfg, "rp-explore", ["p", "r_p", "phi_min", "log_convex", "nonconvex"])
    for p in cfg.params["p"]:
        e = cf.rp_exploration(p, cfg.N, **cfg.grid_kw)
        r.add("solver", p=p, r_p=e.r_p, phi_min=e.phi_min, log_convex=e.log_convex, nonconvex=e.nonconvex)
    r.summary = {"note": "exploratory: the location of the minimum is an open question"}
    return r


def cmd_verify(cfg):
    from .acceptance import run_all

    r = _report(cfg, "verify", ["id", "name", "passed", "detail"])
    results = run_all(quick=bool(cfg.params["quick"]), seed=cfg.seed)
    for res in results:
        r.add("solver", id=res.id, name=res.name, passed=res.passed, detail=res.detail)
        print(res.line(), file=sys.stderr)
    r.summary = {"passed": sum(x.passed for x in results), "total": len(results),
                 "failed": [x.id for x in results if not x.passed]}
    return r


COMMANDS = {
    "kernel": cmd_kernel,
    "offdiag": cmd_offdiag,
    "metric": cmd_metric,
    "levi": cmd_levi,
    "thm1-deriv": cmd_thm1_deriv,
    "thm2": cmd_thm2,
    "ns-metric": cmd_ns_metric,
    "schwarz": cmd_schwarz,
    "schwarz-dim": cmd_schwarz_dim,
    "bm-bound": cmd_bm_bound,
    "chebyshev-demo": cmd_chebyshev_demo,
    "puncture-asym": cmd_puncture_asym,
    "oracle": cmd_oracle,
    "hardy": cmd_hardy,
    "rp-explore": cmd_rp_explore,
    "verify": cmd_verify,
}


def _csv_list(text):
    return [x for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override its values")
    common.add_argument("--domain", help="disc, annulus or punctured")
    common.add_argument("--r-in", type=float, dest="r_in", help="annulus inner radius")
    common.add_argument("--R", type=float, help="disc radius")
    common.add_argument("--p", help="exponent(s), comma separated")
    common.add_argument("--z", help="point(s), comma separated, e.g. 0,0.3,0.6i")
    common.add_argument("--zeta", help="first-argument point(s) for offdiag and two-point oracles")
    common.add_argument("--X", help="direction, e.g. 1 or 0.5+0.5i")
    common.add_argument("--N", type=int, help="basis degree")
    common.add_argument("--n-r", type=int, dest="n_r")
    common.add_argument("--n-theta", type=int, dest="n_theta")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="directory for <command>.csv and <command>.json")
    common.add_argument("--format", choices=("csv", "json"), help="what to print on stdout")
    common.add_argument("--quick", action="store_true", default=None, help="verify: acceptance criteria only")
    common.add_argument("--h", type=float, help="finite-difference step (thm1-deriv)")
    common.add_argument("--region", help="subdisc:r, band:a,b or complement:<region> (schwarz)")
    common.add_argument("--multistarts", type=int)
    common.add_argument("--eps", help="boundary-layer widths, comma separated (schwarz-dim)")
    common.add_argument("--s", type=float, help="content of the removed set (bm-bound)")
    common.add_argument("--candidates", type=int, help="random candidates (chebyshev-demo)")
    common.add_argument("--oracle", help=f"closed form to print: {', '.join(ORACLES)}")
    common.add_argument("--family", type=int, help="number of random polynomials (hardy)")
    common.add_argument("--degree", type=int, help="maximal polynomial degree (hardy)")

    parser = argparse.ArgumentParser(prog="pbergman", description="p-Bergman kernels on planar model domains")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def overrides_from_args(ns) -> dict:
    o: dict = {}

    def put(section, key, value):
        if value is not None:
            o.setdefault(section, {})[key] = value

    put("domain", "kind", ns.domain)
    put("domain", "r_in", ns.r_in)
    put("domain", "R", ns.R)
    put("quad", "n_r", ns.n_r)
    put("quad", "n_theta", ns.n_theta)
    put("basis", "N", ns.N)
    put("output", "dir", ns.out)
    put("output", "format", ns.format)
    if ns.seed is not None:
        o["seed"] = ns.seed
    put("params", "p", _csv_list(ns.p) if ns.p else None)
    put("params", "z", _csv_list(ns.z) if ns.z else None)
    put("params", "zeta", _csv_list(ns.zeta) if ns.zeta else None)
    put("params", "eps", _csv_list(ns.eps) if ns.eps else None)
    for key in ("X", "h", "region", "multistarts", "s", "candidates", "oracle", "family", "degree", "quick"):
        put("params", key, getattr(ns, key))
    return o


def _fail(exc, status):
    print(json.dumps({"error": getattr(exc, "code", "error"), "message": str(exc)}, sort_keys=True), file=sys.stderr)
    return status


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        ov = overrides_from_args(ns)
        cfg = RunConfig.from_file(ns.config, ov) if ns.config else RunConfig.build(None, ov)
    except PBergmanError as exc:
        return _fail(exc, 2)
    try:
        report = COMMANDS[ns.command](cfg)
        out_dir = cfg.data["output"]["dir"]
        if out_dir:
            emit(report, out_dir)
    except ConfigError as exc:
        return _fail(exc, 2)
    except PBergmanError as exc:
        return _fail(exc, 3)
    fmt = cfg.data["output"]["format"]
    sys.stdout.write(to_csv(report) if fmt == "csv" else to_json(report))
    if ns.command == "verify" and report.summary["failed"]:
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
