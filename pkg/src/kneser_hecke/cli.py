"""Command-line interface: classify, spectrum, molien, cwe and verify.

Every command reads and writes schema-versioned JSON under one directory per
(Type, length); tables and figures are rendered from those files only.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from kneser_hecke import __version__, exact, golden, oracle
from kneser_hecke.code import Code, rref
from kneser_hecke.family import FamilyError, TypeSpec, parse_type
from kneser_hecke.hecke import (
    HeckeError,
    HeckeMatrix,
    Spectrum,
    SpectrumError,
    check_self_adjoint,
    hecke_matrix,
    polynomial_relation,
    spectrum,
)
from kneser_hecke.neighbor import (
    DEFAULT_SUBSPACE_CAP,
    ClassDatabase,
    NeighborError,
    classify,
    condition_star_sum,
    sample_admissible_tuple,
)
from kneser_hecke.weight_enum import DEFAULT_BUDGET, BudgetError, cwe, filtration_dims, phi

log = logging.getLogger("kneser_hecke")

OUT_ENV = "KNESER_HECKE_OUT"
DEFAULT_OUT = "kneser_hecke_out"
DEFAULT_CAPS = {"2EI": 24, "2EII": 24}
OTHER_CAP = 12
ORACLE_MAX_LENGTH = 10
ORACLE_MAX_CODES = 200_000

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    type: TypeSpec | None
    lengths: list[int]
    out: Path
    threads: int = 1
    budget: int = DEFAULT_BUDGET
    subspace_cap: int = DEFAULT_SUBSPACE_CAP
    max_length: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def N(self) -> int:
        return self.lengths[0]

    def cap(self) -> int:
        if self.max_length is not None:
            return self.max_length
        return DEFAULT_CAPS.get(self.type.label, OTHER_CAP)

    def run_dir(self, N: int | None = None) -> Path:
        return self.out / f"{self.type.label}-N{N if N is not None else self.N}"

    def validate(self) -> None:
        if self.type is None:
            raise ConfigError("--type is required")
        if self.threads < 1:
            raise ConfigError("--threads must be at least 1")
        if self.budget < 1:
            raise ConfigError("--budget must be positive")
        for N in self.lengths:
            try:
                self.type.check_length(N)
            except FamilyError as exc:
                raise ConfigError(str(exc)) from exc
            if N > self.cap():
                raise ConfigError(
                    f"N={N} exceeds the default cap {self.cap()} for {self.type.label}; "
                    "pass --max-length to run it anyway"
                )


# ---------------------------------------------------------------------------
# persistence


def write_json(path: Path, data) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")
    return path


def read_json(path: Path, what: str) -> dict:
    if not path.exists():
        raise ConfigError(f"{path} not found; run `{what}` first")
    return json.loads(path.read_text())


def write_table(path: Path, header: list[str], rows, delimiter: str = ",") -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return path


def load_seed(path: Path, t: TypeSpec, N: int) -> Code:
    """A seed code from JSON (``generators`` key) or from rows of digits, one per line."""
    text = Path(path).read_text()
    if path.suffix == ".json":
        rows = json.loads(text)["generators"]
    else:
        rows = []
        for line in text.splitlines():
            line = line.split("#")[0].strip()
            if line:
                rows.append([int(x) for x in (line.split() if " " in line else line)])
    C = rref(rows, t.field, N=N)
    if not t.is_member(C):
        raise ConfigError(f"seed in {path} is not a code of Type {t.label} and length {N}")
    return C


def load_db(cfg: RunConfig, N: int) -> ClassDatabase:
    return ClassDatabase.from_json(read_json(cfg.run_dir(N) / "classes.json", "classify"))


# ---------------------------------------------------------------------------
# commands


def cmd_classify(cfg: RunConfig) -> int:
    status = EXIT_OK
    for N in cfg.lengths:
        t = cfg.type
        seed = load_seed(Path(cfg.extra["seed_file"]), t, N) if cfg.extra.get("seed_file") else None
        db = classify(
            t, N, seed=seed, use_orbits=not cfg.extra.get("no_orbits"), threads=cfg.threads,
            progress=log.info,
        )
        d = cfg.run_dir(N)
        write_json(d / "classes.json", db.to_json())
        write_table(
            d / "classes.csv",
            ["index", "aut_order", "fingerprint", "discovered_from"],
            [[c.index, c.aut_order, c.fingerprint, "" if c.discovered_from is None else c.discovered_from]
             for c in db.classes],
        )
        print(f"{t.label} N={N}: {len(db)} classes")
        print("aut orders: " + " ".join(str(a) for a in db.aut_orders()))
        print(f"mass sum N!/|Aut| = {exact.format_fraction(db.total_codes())}")
        if cfg.extra.get("verify_mass"):
            expected = t.code_count(N)
            ok = db.total_codes() == expected
            print(f"mass check (closed form): expected {expected} -> {'PASS' if ok else 'FAIL'}")
            if N <= ORACLE_MAX_LENGTH and expected <= ORACLE_MAX_CODES:
                counted = len(oracle.self_dual_codes(t, N))
                ok_oracle = db.total_codes() == counted
                print(f"mass check (exhaustive): {counted} codes -> {'PASS' if ok_oracle else 'FAIL'}")
                ok = ok and ok_oracle
            if not ok:
                status = EXIT_FAIL
    return status


def _spectrum_checks(T: HeckeMatrix, t: TypeSpec, n: int) -> dict[str, bool]:
    alpha0 = t.alpha(0, n)
    return {
        "self_adjoint": check_self_adjoint(T)[0],
        "column_sums": all(s == alpha0 for s in T.column_sums()),
    }


def cmd_spectrum(cfg: RunConfig) -> int:
    from kneser_hecke.plotting import plot_spectrum

    status = EXIT_OK
    for N in cfg.lengths:
        t = cfg.type
        db = load_db(cfg, N)
        d = cfg.run_dir(N)
        T = hecke_matrix(db, 1)
        write_json(d / "hecke.json", T.to_json())
        checks = _spectrum_checks(T, t, db.n)
        spec = spectrum(T, t, db.n, strict=False)
        checks.update(
            sigma_eigenvector=spec.sigma_ok, orthogonal=spec.orthogonal, complete=spec.complete
        )
        k = cfg.extra.get("k", 1)
        report = spec.to_json()
        report["checks"] = checks
        if k > 1:
            Tk = hecke_matrix(db, k, cfg.subspace_cap)
            write_json(d / f"hecke_k{k}.json", Tk.to_json())
            rel = polynomial_relation(Tk, T)
            report["polynomial_relation"] = {
                "k": k,
                "coefficients": None if rel is None else [exact.format_fraction(x) for x in rel],
            }
            print(f"T_{k} = " + ("(no polynomial in T found)" if rel is None else
                                 " + ".join(f"({exact.format_fraction(c)})*T^{i}" for i, c in enumerate(rel) if c)))
        write_json(d / "spectrum.json", report)
        row = spec.row()
        write_table(
            d / "spectrum.csv",
            ["eigenvalue", "m", "dimension"],
            [[exact.format_fraction(nu), "+".join(map(str, g)), dim]
             for nu, g, dim in zip(spec.eigenvalues, spec.ms, spec.dims)],
        )
        plot_spectrum(t.label, N, row, T.entries, d / "spectrum.png")
        print(f"{t.label} N={N} row: " + " ".join(map(str, row)))
        if spec.merged:
            print(f"merged eigenvalues at m groups {spec.merged}")
        for name, ok in checks.items():
            print(f"  {name}: {'PASS' if ok else 'FAIL'}")
        if not all(checks.values()):
            status = EXIT_FAIL
    return status


def cmd_molien(cfg: RunConfig) -> int:
    from kneser_hecke.plotting import plot_molien

    m_max = cfg.extra.get("m_max", 11)
    t = cfg.type
    grid: dict[int, list[int]] = {}
    status = EXIT_OK
    rows = []
    for N in cfg.lengths:
        spec = Spectrum.from_json(read_json(cfg.run_dir(N) / "spectrum.json", "spectrum"))
        if spec.merged:
            raise ConfigError(f"N={N}: merged eigenvalues make a_N(m) ambiguous")
        cum = golden.cumulative(spec.dims_by_m())
        grid[N] = [cum[min(m, len(cum) - 1)] for m in range(1, m_max + 1)]
        filt = None
        if cfg.extra.get("cross_check"):
            db = load_db(cfg, N)
            feasible = [m for m in range(m_max + 1) if t.q ** (db.n * m) <= cfg.budget]
            filt = filtration_dims(db, max(feasible), cfg.budget)
        for m in range(1, m_max + 1):
            a = grid[N][m - 1]
            ref = golden.molien(N, m) if t.label == "2EI" and N in golden.molien_lengths() else None
            fd = filt[m] if filt is not None and m < len(filt) else None
            ok = (ref is None or ref == a) and (fd is None or fd == a)
            status = status if ok else EXIT_FAIL
            rows.append([N, m, a, "" if ref is None else ref, "" if fd is None else fd, "PASS" if ok else "FAIL"])
    header = ["N", "m", "a_N(m)", "reference", "filtration_dims", "status"]
    out = cfg.out / f"{t.label}-molien.csv"
    write_table(out, header, rows)
    plot_molien(grid, cfg.out / f"{t.label}-molien.png")
    print("\t".join(["m"] + [f"N={N}" for N in cfg.lengths]))
    for m in range(1, m_max + 1):
        print("\t".join([str(m)] + [str(grid[N][m - 1]) for N in cfg.lengths]))
    bad = [r for r in rows if r[-1] == "FAIL"]
    for r in bad:
        print(f"MISMATCH N={r[0]} m={r[1]}: got {r[2]}, reference {r[3]}, filtration {r[4]}")
    return status


def cmd_cwe(cfg: RunConfig) -> int:
    N = cfg.N
    db = load_db(cfg, N)
    m = cfg.extra.get("m", 1)
    which = cfg.extra.get("class_index")
    chosen = db.classes if which is None else [db.classes[which]]
    payload = []
    for c in chosen:
        w = cwe(c.canon, m, cfg.budget)
        payload.append({"class": c.index, "m": m, "terms": w.to_json()})
        text = w.to_str() if m <= 2 else f"{len(w.terms)} monomials, total {w.total()}"
        print(f"class {c.index}: {text}")
    suffix = "all" if which is None else str(which)
    write_json(cfg.run_dir(N) / f"cwe_m{m}_{suffix}.json", {"schema": "kneser-hecke/cwe/1", "enumerators": payload})
    return EXIT_OK


def run_checks(db: ClassDatabase, cfg: RunConfig, T: HeckeMatrix | None = None) -> list[tuple[str, bool, str]]:
    """The full invariant suite for one classified data set."""
    t, N, n = db.type, db.N, db.n
    results: list[tuple[str, bool, str]] = []
    rng = np.random.default_rng(cfg.extra.get("rng_seed", 0))

    total = db.total_codes()
    expected = t.code_count(N)
    results.append(("mass", total == expected, f"{exact.format_fraction(total)} vs {expected}"))

    if T is None:
        T = hecke_matrix(db, 1)
    sa, bad = check_self_adjoint(T)
    results.append(("self_adjoint", sa, f"{len(bad)} offending pairs"))
    alpha0 = t.alpha(0, n)
    sums = set(T.column_sums())
    results.append(("column_sums", sums == {alpha0}, f"sums {sorted(sums)} vs alpha_0 {alpha0}"))

    try:
        spec = spectrum(T, t, n, strict=True)
        results.append(("spectrum_complete", True, f"row {spec.row()}"))
    except SpectrumError as exc:
        spec = spectrum(T, t, n, strict=False)
        results.append(("spectrum_complete", False, str(exc)))
    results.append(("sigma_eigenvector", spec.sigma_ok, ""))
    results.append(("eigenspaces_orthogonal", spec.orthogonal, ""))

    ref = {"2EI": golden.TABLE_2EI, "2EII": golden.TABLE_2EII}.get(t.label, {}).get(N)
    if ref is not None:
        results.append(("reference_row", tuple(spec.row()) == ref, f"{spec.row()} vs {list(ref)}"))

    samples = cfg.extra.get("samples", 50)
    if N <= cfg.extra.get("star_max_length", 12) and samples:
        for m in (1, 2):
            if m > n:
                continue
            want = t.alpha(m, n)
            seen, drawn = set(), 0
            for s in range(samples):
                C = db.classes[s % len(db)].canon
                c = sample_admissible_tuple(C, t, m, rng)
                if c is None:
                    continue
                drawn += 1
                seen.add(condition_star_sum(C, t, c))
            ok = seen <= {want}
            results.append((f"condition_star_m{m}", ok, f"{drawn} tuples, sums {sorted(seen)} vs {want}"))

    budget = cfg.budget
    m_top = max(m for m in range(n + 1) if t.q ** (n * m) <= budget)
    m_top = min(m_top, cfg.extra.get("genus_max", 3))
    phi_ok, inv_ok = True, True
    for c in db.classes:
        prev = cwe(c.canon, 0, budget)
        for m in range(1, m_top + 1):
            w = cwe(c.canon, m, budget)
            phi_ok &= phi(w) == prev
            perm = rng.permutation(N)
            inv_ok &= cwe(c.canon.permute(perm), m, budget) == w
            prev = w
    results.append(("phi_compatible", phi_ok, f"m <= {m_top}"))
    results.append(("cwe_permutation_invariant", inv_ok, f"m <= {m_top}"))

    dims = filtration_dims(db, m_top, budget)
    merged = {m for g in spec.merged for m in g}
    by_m = spec.dims_by_m() + [0] * (m_top + 1)
    agree = all(
        dims[m] - (dims[m - 1] if m else 0) == by_m[m] for m in range(m_top + 1) if m not in merged
    )
    results.append(("filtration_matches_spectrum", agree, f"dims {dims} vs Y row {spec.row()}"))
    return results


def cmd_verify(cfg: RunConfig) -> int:
    status = EXIT_OK
    for N in cfg.lengths:
        d = cfg.run_dir(N)
        path = d / "classes.json"
        if path.exists():
            db = ClassDatabase.from_json(json.loads(path.read_text()))
        else:
            db = classify(cfg.type, N, threads=cfg.threads, progress=log.info)
            write_json(path, db.to_json())
        T = hecke_matrix(db, 1)
        if cfg.extra.get("perturb"):
            T = perturbed(T)
        results = run_checks(db, cfg, T)
        write_table(
            d / "verify.tsv", ["check", "status", "detail"],
            [[name, "PASS" if ok else "FAIL", detail] for name, ok, detail in results],
            delimiter="\t",
        )
        print(f"{cfg.type.label} N={N}")
        for name, ok, detail in results:
            print(f"  {'PASS' if ok else 'FAIL'}  {name:<28} {detail}")
        if not all(ok for _, ok, _ in results):
            status = EXIT_FAIL
    return status


def perturbed(T: HeckeMatrix) -> HeckeMatrix:
    """Negative control: move one unit of weight between two entries of a column."""
    entries = [list(r) for r in T.entries]
    if T.size < 2:
        entries[0][0] += 1
    else:
        entries[1][0] += 1
        entries[0][0] -= 1
    return HeckeMatrix(T.k, T.basis, T.aut_orders, entries)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="kneser-hecke",
        description="Classify self-dual codes by neighbouring and verify the Hecke spectrum.",
    )
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--type", required=True, help="2eI, 2eII, qE:q=3, qE1:q=3, qH:q=4, qH1:q=4, ...")
        sp.add_argument("--length", type=int, nargs="+", required=True, help="one or more lengths N")
        sp.add_argument("--out", default=None, help=f"output directory (default ${OUT_ENV} or ./{DEFAULT_OUT})")
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max tuples enumerated per enumerator")
        sp.add_argument("--max-length", type=int, default=None, help="override the default length cap")

    sp = sub.add_parser("classify", help="enumerate equivalence classes")
    common(sp)
    sp.add_argument("--seed-file", default=None)
    sp.add_argument("--no-orbits", action="store_true", help="visit every hyperplane")
    sp.add_argument("--verify-mass", action="store_true", help="compare sum N!/|Aut| with the closed form")

    sp = sub.add_parser("spectrum", help="build T and its eigenspaces from classes.json")
    common(sp)
    sp.add_argument("--k", type=int, default=1, help="also build T_k and express it in T")
    sp.add_argument("--subspace-cap", type=int, default=DEFAULT_SUBSPACE_CAP)

    sp = sub.add_parser("molien", help="a_N(m) from stored spectra")
    common(sp)
    sp.add_argument("--m-max", type=int, default=11)
    sp.add_argument("--cross-check", action="store_true", help="recompute with filtration_dims within budget")

    sp = sub.add_parser("cwe", help="print genus-m complete weight enumerators")
    common(sp)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--class-index", type=int, default=None)

    sp = sub.add_parser("verify", help="run the invariant suite and print a pass/fail matrix")
    common(sp)
    sp.add_argument("--samples", type=int, default=50, help="Condition-star tuples per genus")
    sp.add_argument("--genus-max", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0, dest="rng_seed")
    sp.add_argument("--perturb", action="store_true", help="inject a corrupted T (negative control)")
    return p


def config_from_args(args) -> RunConfig:
    out = Path(args.out or os.environ.get(OUT_ENV) or DEFAULT_OUT)
    try:
        t = parse_type(args.type)
    except FamilyError as exc:
        raise ConfigError(str(exc)) from exc
    extra = {
        key: getattr(args, key)
        for key in ("seed_file", "no_orbits", "verify_mass", "k", "m_max", "cross_check", "m",
                    "class_index", "samples", "genus_max", "rng_seed", "perturb")
        if hasattr(args, key)
    }
    cfg = RunConfig(
        args.command, t, list(args.length), out, args.threads, args.budget,
        getattr(args, "subspace_cap", DEFAULT_SUBSPACE_CAP), args.max_length, extra,
    )
    cfg.validate()
    if cfg.extra.get("k", 1) < 1:
        raise ConfigError("--k must be at least 1")
    if cfg.command == "cwe" and cfg.extra["m"] < 0:
        raise ConfigError("--m must be non-negative")
    return cfg


COMMANDS = {
    "classify": cmd_classify,
    "spectrum": cmd_spectrum,
    "molien": cmd_molien,
    "cwe": cmd_cwe,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.command](cfg)
    except (ConfigError, FamilyError, NeighborError, HeckeError, BudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
