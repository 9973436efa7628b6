"""Assemble the JSON invariant report for one algebra.

Each section is computed independently; a section that exceeds an enumeration
limit is replaced by ``{"capacity_exceeded": message}``.
"""

from __future__ import annotations

import time

from .cohomology import cohomology
from .errors import CapacityError
from .specfile import input_hash
from .spectra import elementary_rank, nullcone
from .tori import invariant_profile, maximal_tori, root_decomposition, _search_tori
from .verdict import classify_rank_one


def _section(fn, timings, name):
    start = time.perf_counter()
    try:
        out = fn()
    except CapacityError as exc:
        out = {"capacity_exceeded": str(exc)}
    timings[name] = round(time.perf_counter() - start, 6)
    return out


def _roots_table(A):
    search = _search_tori(A)
    table = []
    for T in maximal_tori(A):
        D = root_decomposition(A, T, check_maximal=False)
        table.append(
            {
                "torus": T.basis.tolist(),
                "cartan_dim": D.cartan.dim,
                "rho": D.rho,
                "r_count": D.r_count,
                "roots": [{"functional": list(r.functional), "space": r.space.basis.tolist()} for r in D.roots],
            }
        )
    return {"exhaustive": search.exhaustive, "tori": table}


def _verdict(A, ext):
    rank = elementary_rank(A, ext).rank
    if rank >= 2:
        return {"outcome": None, "skipped": f"p-rank {rank} >= 2"}
    return classify_rank_one(A, ext).as_dict()


def build_report(A, ext: int = 1, timings: bool = False) -> dict:
    t = {}
    rep = {"input_hash": input_hash(A), "name": A.name, "p": A.p, "dim": A.dim, "ext": ext}
    rep["profile"] = _section(lambda: invariant_profile(A, ext).as_dict(), t, "profile")

    def nc():
        n = nullcone(A, ext)
        return {"ext": ext, "count": n.count_with_zero, "exhaustive": True}

    rep["nullcone"] = _section(nc, t, "nullcone")

    def rk():
        r = elementary_rank(A, ext)
        return {
            "value": r.rank,
            "witness": r.witness.space.basis.tolist(),
            "exhaustive": r.exhaustive,
            "ext": ext,
            "level_counts": {str(k): v for k, v in r.levels.items()},
        }

    rep["rank"] = _section(rk, t, "rank")
    rep["roots"] = _section(lambda: _roots_table(A), t, "roots")

    def coh():
        c = cohomology(A)
        return {"h1": c.h1, "h2": c.h2}

    rep["cohomology"] = _section(coh, t, "cohomology")
    rep["verdict"] = _section(lambda: _verdict(A, ext), t, "verdict")
    if timings:
        rep["timings"] = t
    return rep


def capacity_hit(report: dict) -> bool:
    return any(isinstance(v, dict) and "capacity_exceeded" in v for v in report.values())
