"""Command-line front end.

Thin shell over the library: reads JSON operands, prints canonical JSON
documents (sorted keys, 12-significant-digit floats), and maps errors to
exit codes -- 0 success/pass, 1 check failure, 2 input error, 3 capacity.
"""

from __future__ import annotations

import sys
from dataclasses import asdict

import click

from . import certify as certify_mod
from . import harness, serialize, summing, tensor
from .config import Config, config_from_env
from .errors import CapacityError, LipnormError
from .free_space import FreeVector
from .lipmap import linearize
from .spaces import validate_metric

EXIT_CHECK_FAIL = 1
EXIT_INPUT = 2
EXIT_CAPACITY = 3


def _run(ctx, fn):
    try:
        fn()
    except CapacityError as exc:
        click.echo(f"capacity error: {exc}", err=True)
        ctx.exit(EXIT_CAPACITY)
    except LipnormError as exc:
        click.echo(f"error: {exc}", err=True)
        ctx.exit(EXIT_INPUT)


@click.group()
@click.option("--seed", type=int, default=None, help="RNG seed for searches.")
@click.option("--restarts", type=int, default=None, help="Search restart count.")
@click.option("--threads", type=int, default=None, help="Worker cap.")
@click.pass_context
def main(ctx, seed, restarts, threads):
    cfg = config_from_env()
    over = {}
    if seed is not None:
        over["seed"] = seed
    if restarts is not None:
        over["restarts"] = restarts
    if threads is not None:
        over["threads"] = threads
    if over:
        cfg = Config(**{**asdict(cfg), **over})
    ctx.obj = cfg


@main.command()
@click.argument("space_json", type=click.Path(exists=True))
@click.pass_context
def validate(ctx, space_json):
    """Report metric axiom violations of a space document."""
    def go():
        doc = serialize.load_json(space_json)
        try:
            space = serialize.space_from_dict(doc)
        except LipnormError as exc:
            click.echo(serialize.canonical_dumps(
                {"valid": False, "violations": [str(exc)]}), nl=False)
            ctx.exit(EXIT_INPUT)
        violations = validate_metric(space)
        click.echo(serialize.canonical_dumps(
            {"valid": not violations,
             "violations": [str(v) for v in violations]}), nl=False)
        if violations:
            ctx.exit(EXIT_INPUT)
    _run(ctx, go)


@main.command()
@click.argument("space_json", type=click.Path(exists=True))
@click.argument("vector_json", type=click.Path(exists=True))
@click.pass_context
def aenorm(ctx, space_json, vector_json):
    """Free-space norm of a coefficient vector, with both certificates."""
    def go():
        cfg = ctx.obj
        space = serialize.space_from_dict(serialize.load_json(space_json))
        vdoc = serialize.load_json(vector_json)
        vec = serialize.free_vector_from_dict(space, vdoc)
        from .free_space import ae_norm
        est = ae_norm(vec, cfg)
        click.echo(serialize.canonical_dumps(serialize.estimate_document(
            "aenorm", {"space": serialize.space_to_dict(space),
                       "vector": serialize.free_vector_to_dict(vec)},
            est, cfg)), nl=False)
    _run(ctx, go)


@main.command()
@click.argument("map_json", type=click.Path(exists=True))
@click.pass_context
def lip(ctx, map_json):
    """Lipschitz constant of a tabulated map."""
    def go():
        T = serialize.lip_map_from_dict(serialize.load_json(map_json))
        click.echo(serialize.canonical_dumps(
            {"lip_constant": T.lip_constant()}), nl=False)
    _run(ctx, go)


@main.command("linearize")
@click.argument("map_json", type=click.Path(exists=True))
@click.pass_context
def linearize_cmd(ctx, map_json):
    """Matrix of the linear extension through the free space."""
    def go():
        T = serialize.lip_map_from_dict(serialize.load_json(map_json))
        click.echo(serialize.canonical_dumps(
            serialize.operator_to_dict(linearize(T))), nl=False)
    _run(ctx, go)


@main.command()
@click.option("--kind", required=True,
              type=click.Choice(["op", "pi", "dp", "pisl", "pil", "dpl"]))
@click.option("--p", "p_", default="2", help="Exponent (number or 'inf').")
@click.argument("operand_json", type=click.Path(exists=True))
@click.pass_context
def norm(ctx, kind, p_, operand_json):
    """Operator/map norm bracket as a certificate document."""
    def go():
        cfg = ctx.obj
        doc = serialize.load_json(operand_json)
        if kind in ("op", "pi", "dp"):
            u = serialize.operator_from_dict(doc)
            fn = {"op": lambda: summing.op_norm(u, cfg),
                  "pi": lambda: summing.pi_norm(u, p_, cfg),
                  "dp": lambda: summing.strongly_p_summing_norm(u, p_, cfg)}[kind]
            operand = {"operator": serialize.operator_to_dict(u)}
        else:
            T = serialize.lip_map_from_dict(doc)
            fn = {"pisl": lambda: summing.strictly_lip_p_summing_norm(T, p_, cfg),
                  "pil": lambda: summing.lip_p_summing_norm(T, p_, cfg),
                  "dpl": lambda: summing.lip_cohen_strongly_p_summing_norm(
                      T, p_, cfg)}[kind]
            operand = {"map": serialize.lip_map_to_dict(T)}
        est = fn()
        from .exponents import exponent
        params = {"kind": kind}
        if kind != "op":
            params["p"] = exponent(p_).as_json()
        click.echo(serialize.canonical_dumps(serialize.estimate_document(
            "norm", operand, est, cfg, params)), nl=False)
    _run(ctx, go)


@main.command()
@click.option("--kind", required=True,
              type=click.Choice(["piL", "epsL", "dpL", "gpL", "mu", "cs"]))
@click.option("--p", "p_", default="2", help="Exponent (number).")
@click.argument("tensor_json", type=click.Path(exists=True))
@click.pass_context
def crossnorm(ctx, kind, p_, tensor_json):
    """Cross-norm bracket of a tensor element document."""
    def go():
        cfg = ctx.obj
        u = serialize.tensor_from_dict(serialize.load_json(tensor_json))
        fn = {"piL": lambda: tensor.proj_norm(u, cfg),
              "epsL": lambda: tensor.inj_norm(u, cfg),
              "dpL": lambda: tensor.dp_norm(u, p_, cfg),
              "gpL": lambda: tensor.gp_norm(u, p_, cfg),
              "mu": lambda: tensor.mu_norm(u, p_, cfg),
              "cs": lambda: tensor.cs_norm(u, p_, cfg)}[kind]
        est = fn()
        from .exponents import exponent
        params = {"kind": kind}
        if kind not in ("piL", "epsL"):
            params["p"] = exponent(p_).as_json()
        click.echo(serialize.canonical_dumps(serialize.estimate_document(
            "crossnorm", {"tensor": serialize.tensor_to_dict(u)},
            est, cfg, params)), nl=False)
    _run(ctx, go)


@main.command()
@click.option("--suite", default="all",
              type=click.Choice(list(harness.SUITES) + ["all"]))
@click.option("--trials", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--text/--json", "as_text", default=False)
@click.pass_context
def check(ctx, suite, trials, seed, as_text):
    """Run a verification suite; exit 0 iff all checks pass."""
    def go():
        cfg = ctx.obj
        run_seed = seed if seed is not None else cfg.seed
        cfg = Config(**{**asdict(cfg), "seed": run_seed})
        report = harness.run_suite(suite, trials, run_seed, cfg)
        if as_text:
            click.echo(harness.render_text(report), nl=False)
        else:
            click.echo(serialize.canonical_dumps(report), nl=False)
        if report["verdict"] != "pass":
            ctx.exit(EXIT_CHECK_FAIL)
    _run(ctx, go)


@main.command("certify")
@click.argument("estimate_json", type=click.Path(exists=True))
@click.pass_context
def certify_cmd(ctx, estimate_json):
    """Re-verify the certificates stored in an estimate document."""
    def go():
        doc = serialize.load_json(estimate_json)
        res = certify_mod.verify_document(doc)
        click.echo(serialize.canonical_dumps(
            {"ok": res.ok, "messages": res.messages}), nl=False)
        if not res.ok:
            ctx.exit(EXIT_CHECK_FAIL)
    _run(ctx, go)


if __name__ == "__main__":
    main()
