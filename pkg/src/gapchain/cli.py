"""Pipeline driver, instance generators, and the oracle-backed verifier.

Exit codes: 0 success/verified, 1 usage, 2 parse error, 3 domain error,
4 cap exceeded (verification: "unverifiable at this size"), 5 verification
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import completion, denseola, fastchain, formats, oracle, satchain, sparseola
from .errors import (
    CapExceededError,
    ConstructionError,
    DomainError,
    GapChainError,
    ParseError,
)
from .expander import build_expander
from .model import (
    CnfFormula,
    Digraph,
    GapParams,
    MultiGraph,
    cost_of_ordering,
    count_nae_satisfied,
    count_satisfied,
    cut_size,
)
from .satchain import GapInstance

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_CAP = 4
EXIT_VERIFY = 5


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad fraction {text!r}; use integers or 'p/q'") from None


# ---------------------------------------------------------------------------
# Pipeline machinery
# ---------------------------------------------------------------------------


@dataclass
class PipelineState:
    kind: str  # "cnf" | "multigraph" | "digraph" | "bipartite"
    payload: object
    gap: GapParams | None
    meta: dict = field(default_factory=dict)

    def sizes(self) -> dict:
        p = self.payload
        if isinstance(p, CnfFormula):
            return {"variables": p.var_count, "clauses": p.m}
        if isinstance(p, MultiGraph):
            return {"vertices": p.n, "edges": p.m}
        if isinstance(p, Digraph):
            return {"vertices": p.n, "arcs": p.m}
        return {"a": p.a_size, "b": p.b_size, "edges": p.m}

    def gap_instance(self, unit_kind: str) -> GapInstance:
        if self.gap is None:
            raise DomainError("this step needs a gap; set one in the pipeline spec")
        return GapInstance(self.payload, self.gap, unit_kind)


def _step_e3sat_to_nae4sat(state, params, seed):
    out, _ = satchain.e3sat_to_nae4sat(state.gap_instance("clauses"))
    return PipelineState("cnf", out.instance, out.gap), {}


def _step_nae4sat_to_nae3sat(state, params, seed):
    out, _ = satchain.nae4sat_to_nae3sat(state.gap_instance("clauses"))
    return PipelineState("cnf", out.instance, out.gap), {}


def _step_nae3sat_to_multicut(state, params, seed):
    out, _ = satchain.nae3sat_to_multicut(state.gap_instance("clauses"))
    return PipelineState("multigraph", out.instance, out.gap), {}


def _step_multicut_to_simplecut(state, params, seed):
    out, _ = satchain.multicut_to_simplecut(state.gap_instance("edges"))
    return PipelineState("multigraph", out.instance, out.gap), {}


def _step_maxcut_to_ola(state, params, seed):
    out = denseola.maxcut_to_ola(state.gap_instance("edges"))
    meta = {
        "budget": out.budget,
        "M": out.M,
        "clique": [out.clique_vertices.start, out.clique_vertices.stop],
        "threshold_ceiled": out.threshold_ceiled,
    }
    new = PipelineState("multigraph", out.graph, state.gap, dict(meta))
    new.meta["dense_output"] = out
    return new, meta


def _step_ola_to_chain(state, params, seed):
    if "k" in params:
        k = int(params["k"])
    elif "budget" in state.meta:
        k = int(state.meta["budget"])
    else:
        raise DomainError("ola_to_chain needs a budget: pass params.k")
    g: MultiGraph = state.payload
    loops_dropped = sum(mult for u, v, mult in g.edges if u == v)
    if loops_dropped:
        # loops cost 0 in every arrangement, so (G, k) and (G - loops, k) are
        # the same decision problem; the chain construction needs them gone
        g = MultiGraph(g.n, tuple(e for e in g.edges if e[0] != e[1]))
    ci, _ = completion.ola_to_chain(g, k)
    new = PipelineState("bipartite", ci.graph, state.gap, {"budget": ci.budget})
    new.meta["chain_instance"] = ci
    meta = {"budget": ci.budget, "delta": ci.source_delta}
    if loops_dropped:
        meta["loops_dropped"] = loops_dropped
    return new, meta


def _chain_instance_from_state(state) -> completion.ChainInstance:
    ci = state.meta.get("chain_instance")
    if ci is None:
        raise DomainError("this step must follow ola_to_chain")
    return ci


def _step_chain_completion(builder):
    def run(state, params, seed):
        graph, budget = builder(_chain_instance_from_state(state))
        return PipelineState("multigraph", graph, state.gap, {"budget": budget}), {
            "budget": budget
        }

    return run


def _step_nae3_to_ssat(state, params, seed):
    out, fparams = fastchain.nae3_to_ssat(state.gap_instance("clauses"), seed)
    new = PipelineState("cnf", out.instance, out.gap, {"fast_d": fparams.d})
    return new, {"d": fparams.d}


def _step_ssat_to_fvs(state, params, seed):
    out = fastchain.ssat_to_fvs(state.gap_instance("clauses"))
    return PipelineState("digraph", out.instance, out.gap, dict(state.meta)), {}


def _step_fvs_to_fas(state, params, seed):
    out = fastchain.fvs_to_fas(state.gap_instance("vertices"))
    return PipelineState("digraph", out.instance, out.gap, dict(state.meta)), {}


def _step_subdivide_arcs(state, params, seed):
    out = fastchain.subdivide_arcs(state.payload)
    gap = state.gap.map(lambda x: x / 2) if state.gap is not None else None
    return PipelineState("digraph", out, gap, dict(state.meta)), {}


def _step_blowup(state, params, seed):
    if "t" not in params:
        raise DomainError("blowup needs params.t")
    t = int(params["t"])
    core = state.payload
    out = fastchain.blowup(core, t)
    meta = dict(state.meta)
    meta["blow_factor"] = t
    meta["core_arcs"] = core.m
    return PipelineState("digraph", out, state.gap, meta), {"t": t}


def _step_complete_to_tournament(state, params, seed):
    base = fastchain.FastParams(
        d=state.meta.get("fast_d"),
        gap=state.gap,
        blow_factor=state.meta.get("blow_factor"),
        core_arcs=state.meta.get("core_arcs"),
    )
    out, fparams = fastchain.complete_to_tournament(state.payload, seed, base)
    meta = dict(state.meta)
    meta["random_arcs"] = fparams.random_arcs
    step_meta = {"random_arcs": fparams.random_arcs}
    try:
        low, high = fparams.thresholds()
        step_meta["thresholds"] = [str(low), str(high)]
        meta["thresholds"] = (low, high)
    except DomainError:
        pass
    return PipelineState("digraph", out, state.gap, meta), step_meta


def _step_build_t(state, params, seed):
    if "d_g" not in params:
        raise DomainError("build_t needs params.d_g")
    mode = params.get("mode", sparseola.DESK)
    overrides = params.get("overrides")
    sp = sparseola.derive_params(state.gap, int(params["d_g"]), mode, overrides)
    layout = sparseola.build_t(state.payload, sp, seed)
    meta = {"sparse_layout": layout}
    step_meta = {
        "z": sp.z,
        "phi": str(sp.phi),
        "block_size": layout.block_size,
        "d_h": layout.params.d_h,
        "d_hi": list(layout.params.d_hi),
    }
    if params.get("desk_budget", mode == sparseola.DESK):
        h_graph = _induced(layout.graph, range(len(layout.g_vertices), layout.graph.n))
        try:
            ola_h = oracle.ola_exact(h_graph).value
            budget = sparseola.compute_budget(
                layout, ola_h, allow_ceil=bool(params.get("allow_ceil", False))
            )
            meta["budget"] = budget
            step_meta.update({"ola_h": ola_h, "budget": budget})
        except CapExceededError:
            step_meta["budget"] = "unavailable: H exceeds the exact arrangement cap"
        except DomainError as exc:
            # opportunistic budget only; pass params.allow_ceil to force it
            step_meta["budget"] = f"unavailable: {exc}"
    return PipelineState("multigraph", layout.graph, state.gap, meta), step_meta


def _induced(g: MultiGraph, vertices) -> MultiGraph:
    idx = {v: i for i, v in enumerate(vertices)}
    edges = [
        (idx[u], idx[v], m) for u, v, m in g.edges if u in idx and v in idx
    ]
    return MultiGraph(len(idx), tuple(edges))


STEPS = {
    "e3sat_to_nae4sat": ("cnf", "cnf", _step_e3sat_to_nae4sat),
    "nae4sat_to_nae3sat": ("cnf", "cnf", _step_nae4sat_to_nae3sat),
    "nae3sat_to_multicut": ("cnf", "multigraph", _step_nae3sat_to_multicut),
    "multicut_to_simplecut": ("multigraph", "multigraph", _step_multicut_to_simplecut),
    "maxcut_to_ola": ("multigraph", "multigraph", _step_maxcut_to_ola),
    "ola_to_chain": ("multigraph", "bipartite", _step_ola_to_chain),
    "chain_to_fillin": ("bipartite", "multigraph", _step_chain_completion(completion.chain_to_fillin)),
    "chain_to_interval": ("bipartite", "multigraph", _step_chain_completion(completion.chain_to_interval)),
    "chain_to_proper_interval": ("bipartite", "multigraph", _step_chain_completion(completion.chain_to_proper_interval)),
    "chain_to_threshold": ("bipartite", "multigraph", _step_chain_completion(completion.chain_to_threshold)),
    "chain_to_trivially_perfect": ("bipartite", "multigraph", _step_chain_completion(completion.chain_to_trivially_perfect)),
    "build_t": ("multigraph", "multigraph", _step_build_t),
    "nae3_to_ssat": ("cnf", "cnf", _step_nae3_to_ssat),
    "ssat_to_fvs": ("cnf", "digraph", _step_ssat_to_fvs),
    "fvs_to_fas": ("digraph", "digraph", _step_fvs_to_fas),
    "subdivide_arcs": ("digraph", "digraph", _step_subdivide_arcs),
    "blowup": ("digraph", "digraph", _step_blowup),
    "complete_to_tournament": ("digraph", "digraph", _step_complete_to_tournament),
}

_READERS = {
    "cnf": formats.dimacs_to_cnf,
    "multigraph": formats.json_to_multigraph,
    "digraph": formats.json_to_digraph,
    "bipartite": formats.json_to_bipartite,
}

_WRITERS = {
    "cnf": (formats.cnf_to_dimacs, "cnf"),
    "multigraph": (formats.multigraph_to_json, "json"),
    "digraph": (formats.digraph_to_json, "json"),
    "bipartite": (formats.bipartite_to_json, "json"),
}


def load_pipeline_spec(path: str) -> dict:
    try:
        spec = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read pipeline spec: {exc}")
    except json.JSONDecodeError as exc:
        raise ParseError(f"pipeline spec: invalid JSON at line {exc.lineno}: {exc.msg}")
    if not isinstance(spec.get("steps"), list):
        raise ParseError("pipeline spec needs a 'steps' list")
    for step in spec["steps"]:
        name = step.get("name") if isinstance(step, dict) else None
        if name not in STEPS:
            raise ParseError(f"unknown pipeline step {name!r}")
    return spec


def run_pipeline(spec: dict, input_path: str, seed: int):
    """Apply the steps in order; returns (final state, states, provenance)."""
    steps = spec["steps"]
    first_kind = STEPS[steps[0]["name"]][0] if steps else None
    gap = None
    if "gap" in spec:
        lo, hi = spec["gap"]
        gap = GapParams(parse_fraction(str(lo)), parse_fraction(str(hi)))
    if first_kind is None:
        # empty pipeline: default to multigraph identity
        first_kind = "multigraph"
    try:
        text = Path(input_path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read input: {exc}")
    state = PipelineState(first_kind, _READERS[first_kind](text), gap)
    states = [state]
    master = random.Random(seed)
    provenance = {"seed": seed, "steps": []}
    for step in steps:
        name = step["name"]
        params = step.get("params", {})
        in_kind, out_kind, runner = STEPS[name]
        step_seed = master.randrange(2**32)
        if state.kind != in_kind:
            raise DomainError(
                f"step {name} expects a {in_kind} instance, have {state.kind}"
            )
        before = state.sizes()
        state, meta = runner(state, params, step_seed)
        if state.kind != out_kind:  # pragma: no cover - registry invariant
            raise AssertionError(f"step {name} produced {state.kind}")
        record = {
            "step": name,
            "params": params,
            "seed": step_seed,
            "in": before,
            "out": state.sizes(),
            "gap": [str(state.gap.alpha), str(state.gap.beta)] if state.gap else None,
        }
        record.update({k: v for k, v in meta.items()})
        provenance["steps"].append(record)
        states.append(state)
    return state, states, provenance


def write_pipeline_outputs(states, spec, out_dir: str, provenance: dict):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = ["input"] + [s["name"] for s in spec["steps"]]
    for i, (state, name) in enumerate(zip(states, names)):
        writer, ext = _WRITERS[state.kind]
        path = out / f"step_{i:02d}_{name}.{ext}"
        path.write_text(writer(state.payload))
    writer, ext = _WRITERS[states[-1].kind]
    (out / f"out.{ext}").write_text(writer(states[-1].payload))
    (out / "provenance.json").write_text(
        json.dumps(provenance, indent=2, sort_keys=True, default=str) + "\n"
    )


# ---------------------------------------------------------------------------
# Stepwise verification against the oracles
# ---------------------------------------------------------------------------


def _verify_e3sat_to_nae4sat(prev, cur, meta):
    k_in = oracle.max_sat_exact(prev.payload).value
    res = oracle.max_nae_exact(cur.payload)
    _, lift = satchain.e3sat_to_nae4sat(prev.gap_instance("clauses"))
    lifted = lift(res.witness)
    return [
        ("max_nae(out) == max_sat(in)", res.value == k_in),
        ("lifted witness achieves max_sat(in)", count_satisfied(prev.payload, lifted) == k_in),
    ]


def _verify_nae4sat_to_nae3sat(prev, cur, meta):
    k_in = oracle.max_nae_exact(prev.payload).value
    res = oracle.max_nae_exact(cur.payload)
    _, lift = satchain.nae4sat_to_nae3sat(prev.gap_instance("clauses"))
    lifted = lift(res.witness)
    return [
        ("max_nae(out) == m + max_nae(in)", res.value == prev.payload.m + k_in),
        ("lifted witness achieves max_nae(in)", count_nae_satisfied(prev.payload, lifted) == k_in),
    ]


def _verify_nae3sat_to_multicut(prev, cur, meta):
    k_in = oracle.max_nae_exact(prev.payload).value
    res = oracle.max_cut_exact(cur.payload)
    _, lift = satchain.nae3sat_to_multicut(prev.gap_instance("clauses"))
    lifted = lift(res.witness)
    return [
        ("max_cut(out) == 3m + 2 max_nae(in)", res.value == 3 * prev.payload.m + 2 * k_in),
        ("lifted witness achieves max_nae(in)", count_nae_satisfied(prev.payload, lifted) == k_in),
    ]


def _verify_multicut_to_simplecut(prev, cur, meta):
    k_in = oracle.max_cut_exact(prev.payload).value
    res = oracle.max_cut_exact(cur.payload)
    _, lift = satchain.multicut_to_simplecut(prev.gap_instance("edges"))
    lifted = lift(res.witness)
    return [
        ("max_cut(out) == 2m + max_cut(in)", res.value == 2 * prev.payload.m + k_in),
        ("lifted witness achieves max_cut(in)", cut_size(prev.payload, lifted) == k_in),
    ]


def _verify_maxcut_to_ola(prev, cur, meta):
    out = cur.meta.get("dense_output")
    if out is None:
        out = denseola.maxcut_to_ola(prev.gap_instance("edges"))
    checks = [("pair multiset tiles the complete graph", denseola.star_identity_holds(out))]
    cut = oracle.max_cut_exact(prev.payload)
    arr = oracle.ola_exact(out.graph)
    thr = math.ceil(prev.gap.beta * prev.payload.m)
    if cut.value >= thr:
        checks.append(("cut >= beta*m implies OLA <= budget", arr.value <= out.budget))
    if prev.payload.m > 0 and arr.value <= out.budget:
        checks.append(
            ("OLA <= budget implies cut > alpha*m", cut.value > prev.gap.alpha * prev.payload.m)
        )
    recovered = denseola.cut_from_ordering(out, arr.witness)
    if arr.value <= out.budget and prev.payload.m > 0:
        checks.append(
            ("recovered cut beats alpha*m", cut_size(prev.payload, recovered) > prev.gap.alpha * prev.payload.m)
        )
    return checks


def _verify_ola_to_chain(prev, cur, meta):
    ci = cur.meta.get("chain_instance")
    arr = oracle.ola_exact(prev.payload)
    chain = oracle.min_chain_completion_exact(ci.graph)
    n = prev.payload.n
    const = ci.source_delta * n * (n - 1) // 2 - 2 * ci.source_edges
    return [("min_chain == OLA + const", chain.value == arr.value + const)]


def _verify_chain_to_fillin(prev, cur, meta):
    ci = prev.meta.get("chain_instance")
    if ci is None:
        return [("chain instance available", False)]
    chain = oracle.min_chain_completion_exact(ci.graph)
    fill = oracle.min_fill_in_exact(cur.payload)
    ok_interval = completion.verify_completion(cur.payload, fill.witness, "interval")
    ok_proper = completion.verify_completion(cur.payload, fill.witness, "proper_interval")
    return [
        ("min_fill_in == min_chain", fill.value == chain.value),
        ("fill witness is interval", ok_interval),
        ("fill witness is proper interval", ok_proper),
    ]


def _verify_nae3_to_ssat(prev, cur, meta):
    d = fastchain.audit_ssat_profile(cur.payload)
    checks = [("occurrence profile audited", True)]
    nae = oracle.max_nae_exact(prev.payload).value
    sat = oracle.max_sat_exact(cur.payload).value
    m = prev.payload.m
    checks.append(("max_sat(out) == (1+3d)m + max_nae(in)", sat == (1 + 3 * d) * m + nae))
    return checks


def _verify_ssat_to_fvs(prev, cur, meta):
    fvs = oracle.min_fvs_exact(cur.payload)
    sat = oracle.max_sat_exact(prev.payload).value
    half = cur.payload.n // 2
    return [
        ("min_fvs >= n/2", fvs.value >= half),
        ("min_fvs == n/2 iff fully satisfiable", (fvs.value == half) == (sat == prev.payload.m)),
    ]


def _verify_fvs_to_fas(prev, cur, meta):
    fvs = oracle.min_fvs_exact(prev.payload)
    fas = oracle.min_fas_exact(cur.payload)
    return [("min_fas(out) == min_fvs(in)", fas.value == fvs.value)]


def _verify_subdivide_arcs(prev, cur, meta):
    return [
        (
            "min_fas preserved",
            oracle.min_fas_exact(cur.payload).value
            == oracle.min_fas_exact(prev.payload).value,
        )
    ]


def _verify_blowup(prev, cur, meta):
    t = cur.meta.get("blow_factor")
    return [
        (
            "fas(out) == t^2 fas(in)",
            oracle.min_fas_exact(cur.payload).value
            == t * t * oracle.min_fas_exact(prev.payload).value,
        )
    ]


def _verify_complete_to_tournament(prev, cur, meta):
    core = oracle.min_fas_exact(prev.payload).value
    tour = oracle.min_fas_exact(cur.payload).value
    r = cur.meta.get("random_arcs", 0)
    return [("fas(core) <= fas(T) <= fas(core) + |R|", core <= tour <= core + r)]


def _verify_build_t(prev, cur, meta):
    layout = cur.meta.get("sparse_layout")
    n = len(layout.g_vertices)
    checks = [
        (
            "vertex count n + Z*ceil(phi n)",
            layout.graph.n == n + layout.params.z * layout.block_size,
        ),
        (
            "degree bound",
            layout.graph.max_degree <= layout.params.degree_bound(),
        ),
    ]
    budget = cur.meta.get("budget")
    if isinstance(budget, int):
        bis = oracle.min_bisection_exact(prev.payload)
        alpha_m = prev.gap.alpha * prev.payload.m
        if bis.value <= alpha_m:
            h_graph = _induced(layout.graph, layout.h_vertices)
            pi_h = oracle.ola_exact(h_graph).witness
            arr = sparseola.ordering_from_bisection(layout, bis.witness, pi_h)
            checks.append(
                ("bisection <= alpha*m gives cost <= budget", cost_of_ordering(layout.graph, arr) <= budget)
            )
        # desk-scale report, not an assertion: cut recovered from an optimal
        # arrangement vs the true optimum
        try:
            full = oracle.ola_exact(layout.graph)
            recovered = sparseola.bisection_from_ordering(layout, full.witness)
            checks.append(
                (
                    f"recovered balanced cut {cut_size(prev.payload, recovered)} "
                    f"vs optimum {bis.value} (reported)",
                    None,
                )
            )
        except CapExceededError:
            pass
    return checks


_VERIFIERS = {
    "e3sat_to_nae4sat": _verify_e3sat_to_nae4sat,
    "nae4sat_to_nae3sat": _verify_nae4sat_to_nae3sat,
    "nae3sat_to_multicut": _verify_nae3sat_to_multicut,
    "multicut_to_simplecut": _verify_multicut_to_simplecut,
    "maxcut_to_ola": _verify_maxcut_to_ola,
    "ola_to_chain": _verify_ola_to_chain,
    "chain_to_fillin": _verify_chain_to_fillin,
    "chain_to_interval": _verify_chain_to_fillin,
    "chain_to_proper_interval": _verify_chain_to_fillin,
    "nae3_to_ssat": _verify_nae3_to_ssat,
    "ssat_to_fvs": _verify_ssat_to_fvs,
    "fvs_to_fas": _verify_fvs_to_fas,
    "subdivide_arcs": _verify_subdivide_arcs,
    "blowup": _verify_blowup,
    "complete_to_tournament": _verify_complete_to_tournament,
    "build_t": _verify_build_t,
}


def verify_pipeline(spec: dict, input_path: str, seed: int):
    """Run the pipeline and check every step's correspondence identity.

    Returns (all_ok, any_unverifiable, report lines)."""
    final, states, _prov = run_pipeline(spec, input_path, seed)
    report = []
    all_ok = True
    any_cap = False
    for i, step in enumerate(spec["steps"]):
        name = step["name"]
        verifier = _VERIFIERS.get(name)
        if verifier is None:
            report.append((name, "no verifier", None))
            continue
        prev, cur = states[i], states[i + 1]
        try:
            for label, ok in verifier(prev, cur, step.get("params", {})):
                report.append((name, label, ok))
                if ok is False:  # None entries are informational reports
                    all_ok = False
        except CapExceededError as exc:
            report.append((name, f"unverifiable at this size ({exc})", None))
            any_cap = True
    return all_ok, any_cap, report


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def gen_e3cnf(n: int, m: int, seed: int) -> CnfFormula:
    """Random exact-3-CNF with three distinct variables per clause."""
    if n < 3:
        raise DomainError("gen e3cnf needs n >= 3")
    rng = random.Random(seed)
    clauses = []
    for _ in range(m):
        vars_ = rng.sample(range(n), 3)
        clauses.append(tuple((v, rng.random() < 0.5) for v in sorted(vars_)))
    return CnfFormula(n, tuple(clauses))


def gen_regular_graph(n: int, d: int, seed: int, tries: int = 1000) -> MultiGraph:
    """Random simple d-regular graph by rejection-sampled stub matching."""
    if d < 0 or d >= n or (n * d) % 2 != 0:
        raise DomainError(f"no simple {d}-regular graph on {n} vertices")
    rng = random.Random(seed)
    for _ in range(tries):
        stubs = [v for v in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        pairs = [(stubs[i], stubs[i + 1]) for i in range(0, len(stubs), 2)]
        if any(u == v for u, v in pairs):
            continue
        keys = {(min(u, v), max(u, v)) for u, v in pairs}
        if len(keys) != len(pairs):
            continue
        return MultiGraph(n, tuple((u, v, 1) for u, v in sorted(keys)))
    raise ConstructionError(
        f"failed to sample a simple {d}-regular graph on {n} vertices in {tries} tries"
    )


def gen_digraph(n: int, m: int, seed: int) -> Digraph:
    """Random simple digraph: m distinct non-loop arcs without replacement."""
    if m > n * (n - 1):
        raise DomainError(f"at most {n * (n - 1)} arcs fit on {n} vertices")
    rng = random.Random(seed)
    pool = [(u, v) for u in range(n) for v in range(n) if u != v]
    arcs = rng.sample(pool, m)
    return Digraph(n, tuple((u, v, 1) for u, v in sorted(arcs)))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

_SOLVERS = {
    "ola": (formats.json_to_multigraph, oracle.ola_exact),
    "maxcut": (formats.json_to_multigraph, oracle.max_cut_exact),
    "bisection": (formats.json_to_multigraph, oracle.min_bisection_exact),
    "fillin": (formats.json_to_multigraph, oracle.min_fill_in_exact),
    "maxsat": (formats.dimacs_to_cnf, oracle.max_sat_exact),
    "maxnae": (formats.dimacs_to_cnf, oracle.max_nae_exact),
    "chain": (formats.json_to_bipartite, oracle.min_chain_completion_exact),
    "fas": (formats.json_to_digraph, oracle.min_fas_exact),
    "fvs": (formats.json_to_digraph, oracle.min_fvs_exact),
}


def cmd_reduce(args) -> int:
    spec = load_pipeline_spec(args.pipeline)
    final, states, provenance = run_pipeline(spec, args.input, args.seed)
    write_pipeline_outputs(states, spec, args.out, provenance)
    print(f"wrote {len(states)} instance files and provenance.json to {args.out}")
    return EXIT_OK


def cmd_solve(args) -> int:
    reader, solver = _SOLVERS[args.problem]
    try:
        text = Path(args.input).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read input: {exc}")
    instance = reader(text)
    result = solver(instance)
    print(f"value {result.value}")
    print("witness " + formats.witness_to_json(result.witness).strip())
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = load_pipeline_spec(args.pipeline)
    if args.provenance:
        try:
            stored = json.loads(Path(args.provenance).read_text())
        except OSError as exc:
            raise ParseError(f"cannot read provenance: {exc}")
        except json.JSONDecodeError as exc:
            raise ParseError(f"provenance: invalid JSON: {exc.msg}")
        _final, _states, fresh = run_pipeline(spec, args.input, args.seed)
        fresh = json.loads(json.dumps(fresh, default=str))
        if stored != fresh:
            print("provenance mismatch: stored record cannot be re-derived")
            return EXIT_VERIFY
        print("provenance re-derived and matches")
    all_ok, any_cap, report = verify_pipeline(spec, args.input, args.seed)
    for name, label, ok in report:
        status = "PASS" if ok else ("SKIP" if ok is None else "FAIL")
        print(f"[{status}] {name}: {label}")
    if not all_ok:
        return EXIT_VERIFY
    if any_cap:
        return EXIT_CAP
    print("all step identities verified")
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.kind == "e3cnf":
        payload = formats.cnf_to_dimacs(gen_e3cnf(args.n, args.m, args.seed))
    elif args.kind == "regular":
        payload = formats.multigraph_to_json(gen_regular_graph(args.n, args.d, args.seed))
    elif args.kind == "digraph":
        payload = formats.digraph_to_json(gen_digraph(args.n, args.m, args.seed))
    else:  # pragma: no cover - argparse choices
        raise DomainError(f"unknown kind {args.kind}")
    Path(args.out).write_text(payload)
    print(f"wrote {args.kind} instance to {args.out}")
    return EXIT_OK


def cmd_expander(args) -> int:
    p = parse_fraction(args.p)
    graph, spec = build_expander(args.n, p, args.seed)
    if args.out:
        Path(args.out).write_text(formats.multigraph_to_json(graph))
    print(
        f"n={spec.n} d={spec.d} certified_h={spec.certified_h} "
        f"kind={spec.certificate_kind}"
    )
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gapchain", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="run a reduction pipeline")
    p.add_argument("--pipeline", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="run an exact oracle")
    p.add_argument("--problem", required=True, choices=sorted(_SOLVERS))
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check pipeline identities against oracles")
    p.add_argument("--pipeline", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--provenance", help="stored provenance.json to re-derive and compare")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--kind", required=True, choices=["e3cnf", "regular", "digraph"])
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--m", type=int, default=8)
    p.add_argument("--d", type=int, default=3)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("expander", help="build a certified expander")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", required=True, help="Cheeger lower bound, e.g. 3/2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_expander)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (CapExceededError, ConstructionError) as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except GapChainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
