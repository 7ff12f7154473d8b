"""Command line front end: ``asailab <command> --spec FILE [--json]``."""
from __future__ import annotations

import json
import sys

import click

from . import asai, corpus, oracle, runspec
from .errors import AsaiError, SpecError
from .padic import DEFAULT_BUDGET, PrimeContext, base_field
from .towers import base_representative, classify_tower, lattice_over, quadratic_extensions

EXIT_OK, EXIT_FAILED, EXIT_ERROR = 0, 1, 2


def _record(obj, command, result, factors=(), choices=None, ambiguities=None) -> dict:
    return {"object": obj, "command": command, "result": result,
            "factors": [a.to_json() for a in factors],
            "metadata": {"choices": choices or {}, "ambiguities": ambiguities or []}}


def _emit(records, as_json: bool, text_lines):
    if as_json:
        click.echo(json.dumps(records, sort_keys=True, indent=2))
    else:
        for line in text_lines:
            click.echo(line)


def _jsonable(meta: dict) -> dict:
    return {str(k): (v if isinstance(v, (bool, int, str)) else str(v))
            for k, v in sorted(meta.items())}


def _load(spec_path):
    if not spec_path:
        raise SpecError("--spec is required for this command")
    return runspec.load(spec_path)


def _objects(spec, name):
    reps = spec.representations
    if name:
        if name not in reps:
            raise SpecError(f"{spec.source}: unknown representation {name!r}")
        return [(name, reps[name])]
    return sorted(reps.items())


# per-representation commands ----------------------------------------------------

def _rep_command(command: str, name: str, pi):
    """(record, text lines, passed) for one representation."""
    meta, amb = {}, []
    if isinstance(pi, asai.DihedralSupercuspidal):
        meta["tower"] = str(pi.tower_class)
        if pi.tower_class.value == "NonGaloisDihedral8":
            cl = asai.closure_of(pi.L)
            meta["K_prime"] = cl.K_cyclic.name if cl.K_cyclic else None
            if "ambiguity" in cl.metadata:
                amb.append(cl.metadata["ambiguity"])
            amb.append("descended character chosen as first of two solutions "
                       "(they differ by the quadratic character of M/B)")
    if command == "lw":
        rho = asai.parameter(pi)
        dec = asai.induction_decompose(rho)
        meta["summands"] = len(dec.summands)
        meta.update(_jsonable({k: v for k, v in dec.metadata.items() if k != "alternatives"}))
        L = asai.lw_factor(rho)
        return (_record(name, command, str(L), L.inverse_roots, meta, amb),
                [f"{name}: L_W = {L}"], True)
    if command == "las":
        L = asai.las_factor(pi)
        return (_record(name, command, str(L), L.inverse_roots, meta, amb),
                [f"{name}: L_As = {L}"], True)
    if command == "l1":
        L = asai.l1_factor(pi)
        return (_record(name, command, str(L), L.inverse_roots, meta, amb),
                [f"{name}: L_1 = {L}"], True)
    if command == "twists":
        ts = asai.distinguishing_twists(pi)
        meta.update(_jsonable(ts.metadata))
        vals = list(ts)
        shown = ", ".join(str(a) for a in vals) or "(none)"
        return (_record(name, command, [a.to_json() for a in vals], vals, meta, amb),
                [f"{name}: twists = {shown}"], True)
    if command == "check-egal":
        rep = asai.check_egal(pi)
        res = {"equal": rep.equal, "lw": rep.lw.to_json(), "las": rep.las.to_json()}
        lines = [f"{name}:", f"  equal: {str(rep.equal).lower()}",
                 f"  L_W  = {rep.lw}", f"  L_As = {rep.las}"]
        return (_record(name, command, res, rep.las.inverse_roots, meta, amb), lines, rep.equal)
    if command == "distinguished":
        d, e = asai.is_distinguished(pi), asai.eta_distinguished(pi)
        res = {"distinguished": d, "eta_distinguished": e}
        return (_record(name, command, res, (), meta, amb),
                [f"{name}: distinguished: {str(d).lower()}, "
                 f"eta-distinguished: {str(e).lower()}"], True)
    raise SpecError(f"unknown command {command!r}")


def _run_rep_command(command, spec_path, as_json, obj):
    spec = _load(spec_path)
    records, lines, ok = [], [], True
    for name, pi in _objects(spec, obj):
        rec, ls, passed = _rep_command(command, name, pi)
        records.append(rec)
        lines.extend(ls)
        ok = ok and passed
    _emit(records, as_json, lines)
    return EXIT_OK if ok else EXIT_FAILED


# verify ---------------------------------------------------------------------------

VERIFY_CHECKS = ("normbiquad", "ker", "hilbert", "classify", "distinguished")


def _lattices(F):
    for K in quadratic_extensions(F):
        for t in F.square_class_representatives()[1:]:
            if K.square_class(K.lift(t)).trivial:
                continue
            yield lattice_over(K, t, names=(f"{F.name}(sqrt{t.coords()})",
                                            f"{F.name}(sqrt t.d)", f"{K.name}(sqrt{t.coords()})"))


def _verify(checks, F, level, budget, samples, seed, spec):
    results = []
    for check in checks:
        if check in ("normbiquad", "ker"):
            fn = oracle.verify_normbiquad if check == "normbiquad" else oracle.verify_ker_lemma
            for lat in _lattices(F):
                results.append((f"{check}[{lat.B.name}]", fn(lat, level, budget)))
        elif check == "hilbert":
            for E in [F] + quadratic_extensions(F):
                n, bad = oracle.hilbert_vs_norms(E, samples, seed, budget=budget)
                results.append((f"hilbert[{E.name}] {n} pairs, {bad} disagreements", bad == 0))
        elif check == "classify":
            for K in quadratic_extensions(F):
                for L in quadratic_extensions(K):
                    got = str(classify_tower(L))
                    want = oracle.classify_tower_oracle(L)
                    results.append((f"classify[{L.name}] {got}", got == want))
        elif check == "distinguished":
            reps = sorted(spec.representations.items()) if spec else []
            for name, pi in reps:
                if not isinstance(pi, asai.DihedralSupercuspidal):
                    continue
                if pi.tower_class.value != "Biquadratic":
                    continue
                v = oracle.independent_distinguished(pi.omega, asai.lattice_of(pi.L),
                                                     level, budget)
                ok = (v.distinguished == asai.is_distinguished(pi)
                      and v.eta_distinguished == asai.eta_distinguished(pi))
                results.append((f"distinguished[{name}] {v.distinguished}/"
                                f"{v.eta_distinguished}", ok))
    return results


# click wiring -------------------------------------------------------------------------

def _common(f):
    f = click.option("--spec", "spec_path", type=click.Path(dir_okay=False),
                     help="Run specification (JSON).")(f)
    f = click.option("--json", "as_json", is_flag=True, help="Emit canonical JSON.")(f)
    f = click.option("--object", "obj", default=None,
                     help="Restrict to one named representation.")(f)
    return f


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Asai L-factors of ordinary GL(2) representations over p-adic fields."""


def _guarded(fn):
    try:
        code = fn()
    except (AsaiError, ValueError) as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        code = EXIT_ERROR
    sys.exit(code)


REP_HELP = {
    "lw": "L-factor of the multiplicative induction of the Langlands parameter.",
    "las": "Asai factor as L_1 times the exceptional factor.",
    "l1": "The L_1 factor read off the Kirillov model.",
    "twists": "Values alpha = q_F^s0 of the twists |.|_F^-s0 that distinguish.",
    "check-egal": "Compute both routes and report whether they agree (exit 1 if not).",
    "distinguished": "Distinction and eta-distinction verdicts.",
}


def _make(command):
    @_common
    def run(spec_path, as_json, obj):
        _guarded(lambda: _run_rep_command(command, spec_path, as_json, obj))
    run.__doc__ = REP_HELP[command]
    return run


for _cmd in REP_HELP:
    main.command(_cmd)(_make(_cmd))


def _classify(spec, obj):
    records, lines = [], []
    for name, L in sorted(spec.fields.items()):
        if L.depth != 2 or (obj and name != obj):
            continue
        cls = classify_tower(L)
        meta = {}
        t = base_representative(L)
        if t is not None:
            meta["base_representative"] = str(t.coords()[0])
        records.append(_record(name, "classify", str(cls), (), meta))
        lines.append(f"{name}: {cls}")
    return records, lines, True


@main.command("classify")
@_common
def classify_cmd(spec_path, as_json, obj):
    """Classify every two-step tower L/K/F defined in the spec."""
    def run():
        records, lines, _ = _classify(_load(spec_path), obj)
        _emit(records, as_json, lines)
        return EXIT_OK
    _guarded(run)


REP_COMMANDS = tuple(REP_HELP)


@main.command("run")
@_common
def run_cmd(spec_path, as_json, obj):
    """Execute the spec's own ``commands`` list in order."""
    def run():
        spec = _load(spec_path)
        records, lines, ok = [], [], True
        for i, command in enumerate(spec.commands):
            if command == "classify":
                recs, ls, passed = _classify(spec, obj)
            elif command in REP_COMMANDS:
                recs, ls, passed = [], [], True
                for name, pi in _objects(spec, obj):
                    rec, l2, p2 = _rep_command(command, name, pi)
                    recs.append(rec)
                    ls.extend(l2)
                    passed = passed and p2
            else:
                raise SpecError(f"{spec.source}: commands[{i}]: unsupported command "
                                f"{command!r} (expected classify or one of {REP_COMMANDS})")
            records.extend(recs)
            lines.append(f"== {command}")
            lines.extend(ls)
            ok = ok and passed
        _emit(records, as_json, lines)
        return EXIT_OK if ok else EXIT_FAILED
    _guarded(run)


@main.command("verify")
@click.argument("checks", nargs=-1, type=click.Choice(VERIFY_CHECKS + ("all",)))
@_common
@click.option("--prime", type=int, default=None, help="Prime to use without a spec.")
@click.option("--level", type=int, default=2, show_default=True)
@click.option("--budget", type=int, default=DEFAULT_BUDGET, show_default=True,
              help="Maximum size of an enumerated unit group.")
@click.option("--samples", type=int, default=10_000, show_default=True,
              help="Random pairs per field for the Hilbert-symbol check.")
@click.option("--seed", type=int, default=0, show_default=True)
def verify_cmd(checks, spec_path, as_json, obj, prime, level, budget, samples, seed):
    """Run the brute-force oracles (default: normbiquad, ker, classify)."""
    def run():
        spec = runspec.load(spec_path) if spec_path else None
        if spec is None and prime is None:
            raise SpecError("verify needs --spec or --prime")
        p = prime if prime is not None else spec.p
        F = spec.fields["F"] if spec and spec.p == p else base_field(PrimeContext(p))
        todo = checks or ("normbiquad", "ker", "classify")
        if "all" in todo:
            todo = VERIFY_CHECKS
        results = _verify(todo, F, level, budget, samples, seed, spec)
        ok = all(r for _, r in results)
        records = [_record(label, "verify", passed, (), {"p": p, "level": level})
                   for label, passed in results]
        lines = [f"{'pass' if r else 'FAIL'}: {label}" for label, r in results]
        lines.append(f"verify: {'pass' if ok else 'FAIL'} ({sum(r for _, r in results)}"
                     f"/{len(results)})")
        _emit(records, as_json, lines)
        return EXIT_OK if ok else EXIT_FAILED
    _guarded(run)


@main.command("corpus")
@click.option("--json", "as_json", is_flag=True, help="Emit canonical JSON.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--primes", default="3,5,7", show_default=True)
@click.option("--per-field", type=int, default=10, show_default=True,
              help="Random characters per field and variant.")
@click.option("--max-level", type=click.IntRange(0, 2), default=2, show_default=True,
              help="Largest conductor level of random characters.")
@click.option("--max-nongalois", type=int, default=None,
              help="Cap on instances needing a degree-8 closure (default: no cap).")
@click.option("--items", "show_items", is_flag=True, help="Include per-item results.")
def corpus_cmd(as_json, seed, primes, per_field, max_level, max_nongalois,
               show_items):
    """Generate a seeded corpus and check both routes on every instance."""
    def run():
        try:
            ps = tuple(int(x) for x in primes.split(","))
        except ValueError:
            raise SpecError(f"--primes: expected comma-separated integers, got {primes!r}")
        items = corpus.generate(seed, ps, per_field, max_level=max_level,
                                max_nongalois=max_nongalois)
        results = corpus.sweep(items)
        summ = corpus.summary(results)
        ok = summ["failed"] == 0
        meta = {"seed": seed, "primes": list(ps), "per_field": per_field,
                "max_level": max_level, "max_nongalois": max_nongalois}
        res = dict(summ, passed=ok)
        if show_items:
            res["items"] = [r.to_json() for r in results]
        lines = [f"corpus seed={seed} primes={primes}: {summ['instances']} instances, "
                 f"{summ['failed']} failed, {summ['errors']} errors"]
        for k, v in summ["checks"].items():
            lines.append(f"  {k}: {v['pass']}/{v['total']}")
        lines.append(f"corpus: {'pass' if ok else 'FAIL'}")
        _emit([_record("corpus", "corpus", res, (), meta)], as_json, lines)
        return EXIT_OK if ok else EXIT_FAILED
    _guarded(run)


if __name__ == "__main__":  # pragma: no cover
    main()
