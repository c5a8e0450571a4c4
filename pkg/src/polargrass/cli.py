"""Batch command-line surface.

Every verb reads one JSON input object (``--input``), runs one module
operation, and emits one JSON report with the shape

    {"schema": "report.v1", "verb": ..., "inputs": ..., "residuals": ...,
     "pass": ..., ...}

to ``--output`` (or stdout).  Exit codes: 0 when the check passes, 2 on
a failed check or a domain error (the error name lands in the report),
1 on I/O or parse problems.  ``report-suite`` runs a list of named
scenarios from a config file and aggregates them, in declared order,
into a ``suite.v1`` object; with a fixed seed the aggregate is
byte-identical across runs.
"""

from __future__ import annotations

import dataclasses
import sys
from dataclasses import dataclass

import click
import numpy as np

from . import serialize as se
from .circle import diffeo_from_spec, fermion_polarization, grunsky, torus_period
from .errors import DomainError, FormatError, PolargrassError
from .fock import adjoint_residual, build_fock, car_check, vacuum_cyclicity_rank
from .linalg import (
    DEFAULT_TOL,
    Frame,
    Tolerances,
    hs_norm,
    min_eig_hermitian,
    op_norm,
    principal_angle_distance,
)
from .orthograss import OrthoGraphOperator, chart_graph_columns, find_chart, transition
from .polarization import OrthogonalPolarization, complexify, eigensplit
from .sampling import generate_input
from .siegel import (
    BlockSymplectic,
    UpperHalfPoint,
    halfspace_membership,
    mobius_act,
    siegel_membership,
)
from .triples import (
    complete_from_g_J,
    complete_from_g_omega,
    complete_from_J_omega,
    verify_triple,
)

REPORT_SCHEMA = "report.v1"
SUITE_SCHEMA = "suite.v1"

#: Fixed pass thresholds for verbs whose result is a checked reconstruction.
CHART_RECONSTRUCTION_TOL = 1e-7
TORUS_PERIOD_TOL = 1e-9
CAR_TOL = 1e-12


@dataclass(frozen=True)
class Options:
    """Per-invocation knobs shared by all verbs."""

    tol: Tolerances = DEFAULT_TOL
    cutoff: int | None = None
    quadrature: int | None = None
    seed: int | None = None


def _make_options(tol_eq, tol_spd, cutoff=None, quadrature=None, seed=None) -> Options:
    tol = DEFAULT_TOL
    if tol_eq is not None:
        tol = dataclasses.replace(tol, eq_tol=float(tol_eq))
    if tol_spd is not None:
        tol = dataclasses.replace(tol, spd_tol=float(tol_spd))
    return Options(tol=tol, cutoff=cutoff, quadrature=quadrature, seed=seed)


# ---------------------------------------------------------------------------
# verb handlers (parsed object -> report core; errors propagate)


def _triple_members(obj, present):
    se._check_keys(obj, present)
    out = {}
    if "g" in present:
        out["g"] = se.form_from_json(obj["g"])
        if out["g"].kind != "symmetric":
            raise FormatError('the "g" member must have kind "symmetric"')
    if "J" in present:
        out["J"] = se.structure_from_json(obj["J"])
    if "omega" in present:
        out["omega"] = se.form_from_json(obj["omega"])
        if out["omega"].kind != "antisymmetric":
            raise FormatError('the "omega" member must have kind "antisymmetric"')
    return out


def _verb_triple_verify(obj, opts: Options) -> dict:
    m = _triple_members(obj, ("g", "J", "omega"))
    report = verify_triple(m["g"], m["J"], m["omega"], opts.tol)
    min_eig = min_eig_hermitian(m["g"].matrix.astype(np.complex128))
    residuals = dict(report.residuals)
    residuals["g_min_eigenvalue"] = min_eig
    return {
        "verb": "triple-verify",
        "inputs": {"dim": m["g"].dim},
        "residuals": residuals,
        "pass": bool(report.compatible and min_eig > opts.tol.spd_tol),
    }


def _verb_triple_complete(obj, opts: Options) -> dict:
    if not isinstance(obj, dict):
        raise FormatError("expected a JSON object")
    present = tuple(k for k in ("g", "J", "omega") if k in obj)
    if len(present) != 2:
        raise FormatError(
            f"triple-complete needs exactly two of g/J/omega, got {list(obj)}"
        )
    m = _triple_members(obj, present)
    if present == ("g", "J"):
        t = complete_from_g_J(m["g"], m["J"], opts.tol)
    elif present == ("g", "omega"):
        t = complete_from_g_omega(m["g"], m["omega"], opts.tol)
    else:
        t = complete_from_J_omega(m["J"], m["omega"], opts.tol)
    residuals = dict(verify_triple(t.g, t.J, t.omega, opts.tol).residuals)
    residuals["g_min_eigenvalue"] = min_eig_hermitian(t.G.astype(np.complex128))
    return {
        "verb": "triple-complete",
        "inputs": {"dim": t.dim, "given": list(present)},
        "residuals": residuals,
        "pass": True,
        "outputs": se.triple_to_json(t),
    }


def _verb_polarize(obj, opts: Options) -> dict:
    t = se.triple_from_json(obj)
    space = complexify(t, opts.tol)
    split = eigensplit(space, tol=opts.tol)
    L = split.lplus
    eye = np.eye(split.n)
    return {
        "verb": "polarize",
        "inputs": {"dim": t.dim},
        "residuals": {
            "eigenvector": hs_norm(t.Jmat @ L - 1j * L),
            "gram": hs_norm(space.gram(L) - eye),
            "omega_isotropy": hs_norm(L.T @ space.Omega @ L),
        },
        "pass": True,
        "outputs": {"wplus": {**se.matrix_to_json(L), "ambient_dim": t.dim}},
    }


def _verb_siegel_member(obj, opts: Options) -> dict:
    mat = se.matrix_from_json(obj, extra=("model",))
    model = obj.get("model")
    if model == "disk":
        rep = siegel_membership(mat, opts.tol)
    elif model == "halfspace":
        rep = halfspace_membership(mat, opts.tol)
    else:
        raise FormatError(f'model must be "disk" or "halfspace", got {model!r}')
    return {
        "verb": "siegel-member",
        "inputs": {"model": model, "n": mat.shape[0]},
        "residuals": {
            "symmetry_residual": rep.symmetry_residual,
            "min_eigenvalue": rep.min_eigenvalue,
        },
        "pass": bool(rep.member),
    }


def _verb_siegel_act(obj, opts: Options) -> dict:
    se._check_keys(obj, ("a", "b", "Z"))
    a = se.matrix_from_json(obj["a"])
    b = se.matrix_from_json(obj["b"])
    p = se.disk_point_from_json(obj["Z"])
    if isinstance(p, UpperHalfPoint):
        raise FormatError("siegel-act moves disk-model points; convert first")
    u = BlockSymplectic(a, b)
    q = mobius_act(u, p, opts.tol)
    return {
        "verb": "siegel-act",
        "inputs": {"n": u.n},
        "residuals": {
            "result_symmetry": hs_norm(q.Z - q.Z.T),
            "result_opnorm": op_norm(q.Z),
        },
        "pass": True,
        "outputs": {"Z": se.disk_point_to_json(q)},
    }


def _verb_grunsky(obj, opts: Options) -> dict:
    se._check_keys(obj, ("diffeo",), ("cutoff", "quadrature"))
    N = opts.cutoff or obj.get("cutoff") or 32
    K = opts.quadrature or obj.get("quadrature") or 16 * N
    if not isinstance(N, int) or not isinstance(K, int) or N < 1 or K < 1:
        raise FormatError("cutoff and quadrature must be positive integers")
    phi = diffeo_from_spec(obj["diffeo"])
    p = grunsky(phi, N, K, tol=opts.tol)
    return {
        "verb": "grunsky",
        "inputs": {"kind": obj["diffeo"].get("kind"), "cutoff": N, "quadrature": K},
        "residuals": {
            "z_opnorm": op_norm(p.Z),
            "symmetry_residual": hs_norm(p.Z - p.Z.T),
        },
        "pass": True,
        "outputs": {"Z": se.disk_point_to_json(p)},
    }


def _verb_chart_find(obj, opts: Options) -> dict:
    se._check_keys(obj, ("frame",))
    w = se.frame_from_json(obj["frame"])
    if w.ambient_dim != 2 * w.rank:
        raise FormatError(
            f"polarization frame needs ambient 2n x n, got {w.ambient_dim} x {w.rank}"
        )
    from .triples import standard_triple

    split = eigensplit(complexify(standard_triple(w.rank)))
    found = find_chart(w, split, opts.tol)
    cols = chart_graph_columns(split, found.S, found.Z)
    recon = principal_angle_distance(Frame.from_columns(cols), w)
    return {
        "verb": "chart-find",
        "inputs": {"n": w.rank},
        "residuals": {
            "reconstruction": recon,
            "z_antisymmetry": hs_norm(found.Z.Z + found.Z.Z.T),
        },
        "pass": bool(recon <= CHART_RECONSTRUCTION_TOL),
        "outputs": {
            "chart": se.chart_index_to_json(found.S),
            "Z": se.matrix_to_json(found.Z.Z),
            "kernel_dims": list(found.kernel_dims),
        },
    }


def _verb_chart_transition(obj, opts: Options) -> dict:
    se._check_keys(obj, ("Z", "source", "target"), ("atol",))
    atol = obj.get("atol", 1e-10)
    if not isinstance(atol, (int, float)) or isinstance(atol, bool) or atol <= 0:
        raise FormatError(f"atol must be a positive number, got {atol!r}")
    Z1 = OrthoGraphOperator(se.matrix_from_json(obj["Z"]), atol=float(atol))
    S1 = se.chart_index_from_json(obj["source"])
    S2 = se.chart_index_from_json(obj["target"])
    Z2 = transition(S1, S2, Z1, opts.tol)
    return {
        "verb": "chart-transition",
        "inputs": {
            "n": Z1.n,
            "source": se.chart_index_to_json(S1),
            "target": se.chart_index_to_json(S2),
        },
        "residuals": {"z_antisymmetry": hs_norm(Z2.Z + Z2.Z.T)},
        "pass": True,
        "outputs": {"Z": se.matrix_to_json(Z2.Z)},
    }


def _verb_fock_car(obj, opts: Options) -> dict:
    if isinstance(obj, dict) and "model" in obj:
        se._check_keys(obj, ("model",), ("cutoff",))
        if obj["model"] != "fermion":
            raise FormatError(f'only the "fermion" model is built in, got {obj["model"]!r}')
        N = opts.cutoff if opts.cutoff is not None else obj.get("cutoff", 3)
        if not isinstance(N, int) or N < 0:
            raise FormatError("cutoff must be a nonnegative integer")
        pol = fermion_polarization(N)
        inputs = {"model": "fermion", "cutoff": N}
    else:
        se._check_keys(obj, ("triple", "frame"))
        t = se.triple_from_json(obj["triple"])
        w = se.frame_from_json(obj["frame"])
        pol = OrthogonalPolarization(complexify(t), w)
        inputs = {"dim": t.dim}
    rep = build_fock(pol)
    gens = [rep.frame[:, k] for k in range(rep.n)]
    gens += [np.conj(g) for g in gens]
    car = max(
        (car_check(rep, v, w) for v in gens for w in gens), default=0.0
    )
    adjoint = max((adjoint_residual(rep, g) for g in gens), default=0.0)
    vac = max(
        (float(np.linalg.norm(rep.annihilation[k] @ rep.vacuum)) for k in range(rep.n)),
        default=0.0,
    )
    rank = vacuum_cyclicity_rank(rep)
    ok = car <= CAR_TOL and adjoint <= CAR_TOL and vac <= CAR_TOL and rank == rep.dim
    return {
        "verb": "fock-car",
        "inputs": inputs,
        "residuals": {
            "car_max": car,
            "adjoint_max": adjoint,
            "vacuum_annihilation": vac,
        },
        "pass": bool(ok),
        "outputs": {"modes": rep.n, "dim": rep.dim, "cyclicity_rank": rank},
    }


def _verb_torus_period(obj, opts: Options) -> dict:
    se._check_keys(obj, ("tau",))
    tau = se._entry(obj["tau"])
    rep = torus_period(tau, opts.tol)
    residuals = dict(rep.residuals)
    return {
        "verb": "torus-period",
        "inputs": {"tau": [tau.real, tau.imag]},
        "residuals": residuals,
        "pass": bool(max(residuals.values()) <= TORUS_PERIOD_TOL),
        "outputs": {
            "period_a": [rep.period_a.real, rep.period_a.imag],
            "period_b": [rep.period_b.real, rep.period_b.imag],
        },
    }


_HANDLERS = {
    "triple-verify": _verb_triple_verify,
    "triple-complete": _verb_triple_complete,
    "polarize": _verb_polarize,
    "siegel-member": _verb_siegel_member,
    "siegel-act": _verb_siegel_act,
    "grunsky": _verb_grunsky,
    "chart-find": _verb_chart_find,
    "chart-transition": _verb_chart_transition,
    "fock-car": _verb_fock_car,
    "torus-period": _verb_torus_period,
}

_HELP = {
    "triple-verify": "Check the three compatibility identities of (g, J, omega).",
    "triple-complete": "Complete two of g/J/omega to a full compatible triple.",
    "polarize": "Split the complexification of a triple along the J eigenspaces.",
    "siegel-member": "Membership report for a disk or half-space point.",
    "siegel-act": "Move a disk point by a block symplectic element.",
    "grunsky": "Siegel point of a circle diffeomorphism at a Fourier cutoff.",
    "chart-find": "Locate a chart of the orthogonal Grassmannian containing a frame.",
    "chart-transition": "Change chart coordinates of a graph operator.",
    "fock-car": "Build a Fock representation and verify the anticommutation relations.",
    "torus-period": "Period point of the lattice (1, tau) with residuals.",
}


def run_verb(verb: str, obj, opts: Options) -> tuple[dict, int]:
    """Run one verb on a parsed input object.

    Returns the finished report plus the exit code; all failures are
    folded into the report rather than raised.
    """
    if verb not in _HANDLERS:
        raise FormatError(f"unknown verb {verb!r}")
    try:
        report = _HANDLERS[verb](obj, opts)
    except DomainError as exc:
        report = _error_report(verb, exc, exc.name)
        return report, 2
    except FormatError as exc:
        return _error_report(verb, exc, exc.name), 1
    except PolargrassError as exc:  # pragma: no cover - defensive
        return _error_report(verb, exc, exc.name), 1
    except Exception as exc:  # malformed structures that slipped past checks
        return _error_report(verb, exc, type(exc).__name__), 1
    report["schema"] = REPORT_SCHEMA
    return report, 0 if report["pass"] else 2


def _error_report(verb: str, exc: Exception, name: str) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "verb": verb,
        "inputs": {},
        "residuals": {},
        "pass": False,
        "error": name,
        "detail": str(exc),
    }


# ---------------------------------------------------------------------------
# report-suite

_SCENARIO_KEYS = ("name", "verb")
_SCENARIO_OPTIONAL = (
    "input",
    "generate",
    "expect_error",
    "seed",
    "cutoff",
    "quadrature",
    "tol_eq",
    "tol_spd",
)


def run_suite(config: dict, seed_override: int | None = None) -> tuple[dict, int]:
    """Run every scenario of a suite config and aggregate in declared order.

    Scenario seeds default to ``suite_seed + position`` so a single
    64-bit seed pins the whole run; per-scenario ``seed`` keys override.
    A scenario with ``expect_error`` counts as passed exactly when the
    named error occurs.
    """
    se._check_keys(config, ("scenarios",), ("seed", "schema"))
    scenarios = config["scenarios"]
    if not isinstance(scenarios, list):
        raise FormatError("scenarios must be a list")
    suite_seed = seed_override if seed_override is not None else config.get("seed", 0)
    if not isinstance(suite_seed, int) or isinstance(suite_seed, bool):
        raise FormatError(f"seed must be an integer, got {suite_seed!r}")

    entries = []
    counts = {"total": 0, "passed": 0, "failed": 0, "expected_failures": 0}
    for pos, scen in enumerate(scenarios):
        se._check_keys(scen, _SCENARIO_KEYS, _SCENARIO_OPTIONAL)
        name, verb = scen["name"], scen["verb"]
        if not isinstance(name, str) or not isinstance(verb, str):
            raise FormatError("scenario name and verb must be strings")
        if ("input" in scen) == ("generate" in scen):
            raise FormatError(f"scenario {name!r} needs exactly one of input/generate")
        scen_seed = scen.get("seed", suite_seed + pos)
        if not isinstance(scen_seed, int) or isinstance(scen_seed, bool):
            raise FormatError(f"scenario {name!r} seed must be an integer")
        opts = _make_options(
            scen.get("tol_eq"),
            scen.get("tol_spd"),
            cutoff=scen.get("cutoff"),
            quadrature=scen.get("quadrature"),
            seed=scen_seed,
        )
        if "generate" in scen:
            obj = generate_input(scen["generate"], np.random.default_rng(scen_seed))
        else:
            obj = scen["input"]
        report, code = run_verb(verb, obj, opts)
        expected = scen.get("expect_error")
        if expected is not None and not isinstance(expected, str):
            raise FormatError(f"scenario {name!r} expect_error must be a string")
        if expected is None:
            status = "passed" if code == 0 else "failed"
        elif report.get("error") == expected:
            status = "failed-as-expected"
        elif code == 0:
            status = "unexpected-pass"
        else:
            status = "failed"
        effective = status in ("passed", "failed-as-expected")
        counts["total"] += 1
        if status == "passed":
            counts["passed"] += 1
        elif status == "failed-as-expected":
            counts["expected_failures"] += 1
        else:
            counts["failed"] += 1
        entry = {
            "name": name,
            "verb": verb,
            "status": status,
            "pass": effective,
            "seed": scen_seed,
            "report": report,
        }
        if expected is not None:
            entry["expect_error"] = expected
        entries.append(entry)

    aggregate = {
        "schema": SUITE_SCHEMA,
        "seed": suite_seed,
        "pass": counts["failed"] == 0,
        "counts": counts,
        "scenarios": entries,
    }
    return aggregate, 0 if aggregate["pass"] else 2


# ---------------------------------------------------------------------------
# click wiring


def _write_out(payload: dict, output_path: str | None, summary: str) -> None:
    text = se.dumps_canonical(payload)
    if output_path:
        with open(output_path, "w", encoding="ascii") as fh:
            fh.write(text)
        click.echo(summary)
    else:
        click.echo(text, nl=False)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main() -> None:
    """Numerics for compatible triples, polarizations and Siegel disks."""


def _verb_command(verb: str) -> click.Command:
    takes_cutoff = verb in ("grunsky", "fock-car")
    takes_quadrature = verb == "grunsky"

    @click.pass_context
    def _run(ctx, input_path, output_path, tol_eq, tol_spd, cutoff=None, quadrature=None):
        try:
            obj = se.load_json(input_path)
        except FormatError as exc:
            _write_out(
                _error_report(verb, exc, exc.name), output_path, f"{verb}: error"
            )
            ctx.exit(1)
        opts = _make_options(tol_eq, tol_spd, cutoff=cutoff, quadrature=quadrature)
        report, code = run_verb(verb, obj, opts)
        report.setdefault("inputs", {})
        report["inputs"]["path"] = str(input_path)
        verdict = "pass" if code == 0 else report.get("error", "fail")
        _write_out(report, output_path, f"{verb}: {verdict}")
        ctx.exit(code)

    params = [
        click.Option(
            ["--input", "input_path"],
            required=True,
            type=click.Path(exists=False),
            help="input JSON object",
        ),
        click.Option(
            ["--output", "output_path"],
            type=click.Path(),
            default=None,
            help="report destination (default: stdout)",
        ),
        click.Option(["--tol-eq", "tol_eq"], type=float, default=None),
        click.Option(["--tol-spd", "tol_spd"], type=float, default=None),
    ]
    if takes_cutoff:
        params.append(click.Option(["--cutoff", "cutoff"], type=int, default=None))
    if takes_quadrature:
        params.append(
            click.Option(["--quadrature", "quadrature"], type=int, default=None)
        )
    return click.Command(verb, params=params, callback=_run, help=_HELP[verb])


for _verb in _HANDLERS:
    main.add_command(_verb_command(_verb))


@main.command("report-suite")
@click.option("--input", "input_path", required=True, type=click.Path())
@click.option("--output", "output_path", type=click.Path(), default=None)
@click.option(
    "--seed",
    type=int,
    default=None,
    envvar="POLARGRASS_SEED",
    help="overrides the config seed (env: POLARGRASS_SEED)",
)
@click.pass_context
def cmd_report_suite(ctx, input_path, output_path, seed):
    """Run a scenario suite config and aggregate the reports."""
    try:
        config = se.load_json(input_path)
        aggregate, code = run_suite(config, seed_override=seed)
    except FormatError as exc:
        _write_out(
            {
                "schema": SUITE_SCHEMA,
                "seed": seed if seed is not None else 0,
                "pass": False,
                "counts": {"total": 0, "passed": 0, "failed": 0, "expected_failures": 0},
                "scenarios": [],
                "error": exc.name,
                "detail": str(exc),
            },
            output_path,
            "report-suite: error",
        )
        ctx.exit(1)
    c = aggregate["counts"]
    summary = (
        f"report-suite: {'pass' if aggregate['pass'] else 'FAIL'} "
        f"({c['passed']} passed, {c['expected_failures']} expected failures, "
        f"{c['failed']} failed)"
    )
    _write_out(aggregate, output_path, summary)
    ctx.exit(code)


if __name__ == "__main__":
    main()
