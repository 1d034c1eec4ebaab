from __future__ import annotations

import argparse
import concurrent.futures
import logging
import random
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

# Allow running this file directly (python app.py) by ensuring the
# package directory is on sys.path (so flat module imports work).
if __package__ in (None, ""):
    pkg_dir = Path(__file__).resolve().parent
    if str(pkg_dir) not in sys.path:
        sys.path.insert(0, str(pkg_dir))

import config
from algebras import (
    AlgebraError,
    AugmentedAlgebra,
    NonUnitalAlgebra,
    augmentation_kernel,
    roundtrip_aug,
    roundtrip_nu,
    underlying,
    unitalize,
    validate,
)
from arrow_category import (
    ArrowError,
    ArrowObject,
    ComparisonNotIso,
    adjoint_transpose_bwd,
    adjoint_transpose_fwd,
    adjunction_unit,
    box_braiding,
    box_morphism,
    box_left_unitor,
    box_right_unitor,
    cok,
    compose,
    identity_morphism,
    im,
    is_coim_local,
    is_im_local,
    lax_comparison,
    morphism_difference,
    strong_monoidal_comparison,
    tensor_arrow,
    tensor_morphism,
    triangle_identities,
    unit_tensor,
)
from chain_complexes import (
    ChainComplexError,
    ChainMap,
    cone,
    homology,
    identity_map,
    induces_homology_iso,
    is_acyclic,
    is_quasi_iso,
    stable_counit_check,
    stable_unit_check,
)
from corpus import (
    cyclic_group_algebra,
    random_arrow,
    random_chain_map,
    random_complex,
    square_zero,
    square_zero_dg,
    truncated_polynomial,
    upper_triangular,
)
from dg_algebras import (
    AugmentedDGAlgebra,
    DGAlgebraError,
    DGAlgebraNU,
    check_dg_morphism,
    dg_augmentation_kernel,
    dg_roundtrip_aug,
    dg_roundtrip_nu,
    dg_unitalize,
    main_theorem_check,
)
from exact_linalg import Field, LinalgError, is_epi, is_mono
from file_formats import (
    ParseError,
    emit_algebra,
    emit_arrows,
    emit_chain_map,
    emit_complex,
    emit_dg,
    parse_algebra,
    parse_arrows,
    parse_chain_map,
    parse_complex,
    parse_dg,
    sniff_kind,
)
from reports import CheckRecord, Report, all_passed, check, fail, ok
from smith_ideal import (
    SmithIdealError,
    check_smith_morphism,
    cok_smith,
    is_unit_cokernel,
    mutate_smith_ideal,
    nu_algebra_as_smith,
    smith_from_augmented,
    smith_ideal_comparison,
    verify_smith_ideal,
)

log = logging.getLogger("smith")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(RuntimeError):
    """Raised when a command is given input it cannot act on."""


def _read_file(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _write_output(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
        log.info("wrote %s", output)
    else:
        sys.stdout.write(text)


def _finish(report: Report, args: argparse.Namespace) -> int:
    print(report.render(porcelain=args.porcelain))
    return report.exit_code


def _seeds(seed: int, count: int) -> list[int]:
    rng = random.Random(seed)
    return [rng.getrandbits(64) for _ in range(count)]


def _run_batch(
    job: Callable[[int], list[CheckRecord]],
    total: int,
    jobs: Optional[int],
) -> list[list[CheckRecord]]:
    """Run job(idx) for every index; results are kept in index order."""
    results: list[list[CheckRecord]] = [[] for _ in range(total)]
    if total == 0:
        return results
    max_workers = config.resolve_max_workers(total, jobs)
    with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as ex:
        future_to_idx = {ex.submit(job, idx): idx for idx in range(total)}
        for fut in concurrent.futures.as_completed(future_to_idx):
            idx = future_to_idx[fut]
            try:
                results[idx] = fut.result()
            except (LinalgError, ArrowError, ChainComplexError) as exc:
                results[idx] = [fail("error", str(exc))]
    return results


def _field(label: Optional[str]) -> Field:
    try:
        return config.resolve_field(label)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _seed(seed: Optional[int]) -> int:
    try:
        return config.resolve_seed(seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _prefixed(name: str, records: Sequence[CheckRecord]) -> list[CheckRecord]:
    return [CheckRecord(f"{name}.{r.name}", r.passed, r.witness) for r in records]


def _load_algebra(path: str):
    return parse_algebra(_read_file(path))


def cmd_validate(args: argparse.Namespace) -> int:
    text = _read_file(args.file)
    kind = sniff_kind(text)
    report = Report("validate")
    if kind == "algebra":
        report.extend(validate(parse_algebra(text), commutative=args.commutative))
    elif kind == "arrows":
        for i, arrow in enumerate(parse_arrows(text)):
            report.extend(triangle_identities(arrow, arrow), prefix=f"arrow[{i}].")
    elif kind == "complex":
        c = parse_complex(text)
        w = c.d_squared_witness()
        report.add(check("d_squared", w is None, f"degree {w}"))
    elif kind == "chain_map":
        f = parse_chain_map(text)
        for name, c in (("source", f.src), ("target", f.dst)):
            w = c.d_squared_witness()
            report.add(check(f"{name}.d_squared", w is None, f"degree {w}"))
        n = f.chain_witness()
        report.add(check("chain_map", n is None, f"degree {n}"))
    else:
        report.extend(parse_dg(text).checks(commutative=args.commutative))
    return _finish(report, args)


def cmd_unitalize(args: argparse.Namespace) -> int:
    algebra = _load_algebra(args.file)
    if not isinstance(algebra, NonUnitalAlgebra):
        log.warning("%s carries a unit; unitalizing the underlying multiplication", args.file)
    try:
        result = unitalize(underlying(algebra))
    except AlgebraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    _write_output(emit_algebra(result), args.output)
    return EXIT_OK


def cmd_augker(args: argparse.Namespace) -> int:
    algebra = _load_algebra(args.file)
    if not isinstance(algebra, AugmentedAlgebra):
        raise UsageError("augker expects an augmented algebra (UNIT and AUG lines)")
    try:
        kernel, _ = augmentation_kernel(algebra)
    except AlgebraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    _write_output(emit_algebra(kernel), args.output)
    return EXIT_OK


def cmd_roundtrip(args: argparse.Namespace) -> int:
    algebra = _load_algebra(args.file)
    report = Report("roundtrip")
    try:
        if isinstance(algebra, NonUnitalAlgebra):
            report.extend(roundtrip_nu(algebra).checks(), prefix="nu.")
            report.extend(roundtrip_aug(unitalize(algebra)).checks(), prefix="aug.")
        elif isinstance(algebra, AugmentedAlgebra):
            report.extend(roundtrip_aug(algebra).checks(), prefix="aug.")
            kernel, _ = augmentation_kernel(algebra)
            report.extend(roundtrip_nu(kernel).checks(), prefix="nu.")
        else:
            raise UsageError("roundtrip expects a non-unital or an augmented algebra")
    except AlgebraError as exc:
        report.add(fail("construction", str(exc)))
    return _finish(report, args)


def _smith_records(b: AugmentedAlgebra, args: argparse.Namespace) -> list[CheckRecord]:
    s = smith_from_augmented(b)
    records = _prefixed("smith", verify_smith_ideal(s, commutative=args.commutative))
    records.append(check("unit_cokernel", is_unit_cokernel(s), "Coker(j) is not an augmentation"))
    records.append(check("im_local", is_im_local(s.j), "j -> im(j) is not invertible"))
    records.append(check("cok_smith_recovers", cok_smith(s) == b, "cok_smith(S) differs from the input"))

    kernel, _ = augmentation_kernel(b)
    t = nu_algebra_as_smith(kernel)
    try:
        alpha = smith_ideal_comparison(t, s, ring_map=roundtrip_aug(b).matrix)
        records += _prefixed("kernel_comparison", check_smith_morphism(t, s, alpha))
    except (LinalgError, ArrowError) as exc:
        records.append(fail("kernel_comparison", str(exc)))

    for i, seed in enumerate(_seeds(_seed(args.seed), args.mutations)):
        mutation = mutate_smith_ideal(s, seed)
        rejected = not all_passed(verify_smith_ideal(mutation.smith))
        records.append(check(f"mutation[{i}].rejected", rejected, mutation.describe()))
    return records


def cmd_smith_check(args: argparse.Namespace) -> int:
    algebra = _load_algebra(args.file)
    report = Report("smith-check")
    try:
        if isinstance(algebra, NonUnitalAlgebra):
            b = unitalize(algebra)
        elif isinstance(algebra, AugmentedAlgebra):
            b = algebra
        else:
            raise UsageError("smith-check expects a non-unital or an augmented algebra")
        report.extend(_smith_records(b, args))
    except (AlgebraError, SmithIdealError) as exc:
        report.add(fail("construction", str(exc)))
    return _finish(report, args)


def monoidal_records(f: ArrowObject, g: ArrowObject) -> list[CheckRecord]:
    records: list[CheckRecord] = []
    try:
        strong_monoidal_comparison(f, g)
        records.append(ok("strong_comparison_iso"))
    except ComparisonNotIso as exc:
        records.append(fail("strong_comparison_iso", str(exc)))
    lax = lax_comparison(f, g)
    records.append(check("lax_comparison_square", lax.commutes(), f"entry {lax.square_witness()}"))
    records += triangle_identities(f, g)
    records.append(check("box_unit_left_iso", box_left_unitor(f).is_iso(), "unit_box □ f -> f"))
    records.append(check("box_unit_right_iso", box_right_unitor(f).is_iso(), "f □ unit_box -> f"))
    braid = box_braiding(f, g)
    records.append(check("box_symmetry_iso", braid.is_iso(), "f □ g -> g □ f"))
    twice = morphism_difference(compose(box_braiding(g, f), braid), identity_morphism(braid.src))
    records.append(check("box_symmetry_involutive", twice is None, twice or ""))
    records.append(
        check("tensor_unit", tensor_arrow(unit_tensor(f.field), f) == f, "id_k ⊗ f != f")
    )
    ident_f, ident_g = identity_morphism(f), identity_morphism(g)
    diff = morphism_difference(
        tensor_morphism(ident_f, ident_g), identity_morphism(tensor_arrow(f, g))
    )
    records.append(check("tensor_preserves_identities", diff is None, diff or ""))
    diff = morphism_difference(box_morphism(ident_f, ident_g), identity_morphism(braid.src))
    records.append(check("box_preserves_identities", diff is None, diff or ""))
    square = tensor_morphism(adjunction_unit(f), adjunction_unit(g))
    records.append(check("tensor_of_units_commutes", square.commutes(), f"entry {square.square_witness()}"))
    records.append(
        check("unit_iso_iff_mono", is_im_local(f) == is_mono(f.f), f"rank {f.f.rank()}")
    )
    records.append(
        check("counit_iso_iff_epi", is_coim_local(g) == is_epi(g.f), f"rank {g.f.rank()}")
    )
    records.append(check("im_idempotent", im(im(f)) == im(f), "im(im f) != im f"))
    phi = identity_morphism(cok(f))
    fwd = adjoint_transpose_fwd(phi, f)
    diff = morphism_difference(fwd, adjunction_unit(f))
    records.append(check("transpose_of_identity_is_unit", diff is None, diff or ""))
    diff = morphism_difference(adjoint_transpose_bwd(fwd, cok(f)), phi)
    records.append(check("transpose_roundtrip", diff is None, diff or ""))
    return records


def cmd_monoidal_check(args: argparse.Namespace) -> int:
    field = _field(args.field)
    seed = _seed(args.seed)
    pairs: list[tuple[ArrowObject, ArrowObject]] = []
    for s in _seeds(seed, args.count):
        inner = random.Random(s)
        pairs.append((
            random_arrow(inner.getrandbits(64), args.max_dim, field),
            random_arrow(inner.getrandbits(64), args.max_dim, field),
        ))
    if args.file:
        arrows = parse_arrows(_read_file(args.file))
        pairs += [(a, arrows[(i + 1) % len(arrows)]) for i, a in enumerate(arrows)]
    results = _run_batch(lambda idx: monoidal_records(*pairs[idx]), len(pairs), args.jobs)
    report = Report("monoidal-check")
    for idx, records in enumerate(results):
        report.extend(records, prefix=f"[{idx}].")
    return _finish(report, args)


def cmd_homology(args: argparse.Namespace) -> int:
    """Porcelain output adds one `HOMOLOGY <n> <dim>` line per degree before the CHECK lines."""
    c = parse_complex(_read_file(args.file))
    report = Report("homology")
    w = c.d_squared_witness()
    report.add(check("d_squared", w is None, f"degree {w}"))
    if w is None:
        for n, h in homology(c):
            print(f"HOMOLOGY {n} {h}" if args.porcelain else f"H_{n} = {h}")
    return _finish(report, args)


def stable_records(f: ChainMap) -> list[CheckRecord]:
    return [
        check("unit_weq", stable_unit_check(f), "X -> hofib(hocofib f) is not a quasi-isomorphism"),
        check("counit_weq", stable_counit_check(f), "hocofib(hofib f) -> Y is not a quasi-isomorphism"),
        check(
            "cone_detects_quasi_iso",
            is_quasi_iso(f) == induces_homology_iso(f),
            "acyclic cone disagrees with the map on homology",
        ),
        check("cone_of_identity_acyclic", is_acyclic(cone(identity_map(f.src)).complex)),
    ]


def cmd_stable_check(args: argparse.Namespace) -> int:
    field = _field(args.field)
    seed = _seed(args.seed)
    maps = [
        random_chain_map(s, 0, 3, args.max_dim, field) for s in _seeds(seed, args.count)
    ]
    if args.file:
        maps.append(parse_chain_map(_read_file(args.file)))
    results = _run_batch(lambda idx: stable_records(maps[idx]), len(maps), args.jobs)
    report = Report("stable-check")
    for idx, records in enumerate(results):
        report.extend(records, prefix=f"[{idx}].")
    return _finish(report, args)


def cmd_dg_roundtrip(args: argparse.Namespace) -> int:
    algebra = parse_dg(_read_file(args.file))
    report = Report("dg-roundtrip")
    try:
        if isinstance(algebra, AugmentedDGAlgebra):
            u, phi = dg_roundtrip_aug(algebra)
            report.extend(check_dg_morphism(u, algebra, phi), prefix="aug.")
            kernel, _ = dg_augmentation_kernel(algebra)
            report.extend(dg_roundtrip_nu(kernel), prefix="nu.")
        else:
            report.extend(dg_roundtrip_nu(algebra), prefix="nu.")
            b = dg_unitalize(algebra)
            u, phi = dg_roundtrip_aug(b)
            report.extend(check_dg_morphism(u, b, phi), prefix="aug.")
    except (AlgebraError, DGAlgebraError, ChainComplexError) as exc:
        report.add(fail("construction", str(exc)))
    return _finish(report, args)


def cmd_main_theorem(args: argparse.Namespace) -> int:
    algebra = parse_dg(_read_file(args.file))
    if not isinstance(algebra, DGAlgebraNU):
        raise UsageError("main-theorem expects a non-unital dg algebra (no UNIT/AUG)")
    report = Report("main-theorem")
    report.extend(main_theorem_check(algebra))
    return _finish(report, args)


CORPUS_FAMILIES: dict[str, tuple[tuple[str, ...], Callable[..., str]]] = {
    "truncated-polynomial": (("n",), lambda k, n: emit_algebra(truncated_polynomial(k, n))),
    "upper-triangular": (("n",), lambda k, n: emit_algebra(upper_triangular(k, n))),
    "cyclic-group": (("n",), lambda k, n: emit_algebra(cyclic_group_algebra(k, n))),
    "square-zero": (("n",), lambda k, n: emit_algebra(square_zero(k, n))),
    "random-arrow": (
        ("seed", "max_dim"),
        lambda k, seed, max_dim: emit_arrows([random_arrow(seed, max_dim, k)], k),
    ),
    "random-complex": (
        ("seed", "lo", "hi", "max_dim"),
        lambda k, seed, lo, hi, max_dim: emit_complex(random_complex(seed, lo, hi, max_dim, k)),
    ),
    "random-chain-map": (
        ("seed", "lo", "hi", "max_dim"),
        lambda k, seed, lo, hi, max_dim: emit_chain_map(random_chain_map(seed, lo, hi, max_dim, k)),
    ),
    "square-zero-dg": (
        ("degree", "dim"),
        lambda k, degree, dim: emit_dg(square_zero_dg(k, degree, dim)),
    ),
}


def cmd_corpus(args: argparse.Namespace) -> int:
    if args.family not in CORPUS_FAMILIES:
        known = ", ".join(sorted(CORPUS_FAMILIES))
        raise UsageError(f"unknown family {args.family!r} (known: {known})")
    names, build = CORPUS_FAMILIES[args.family]
    if len(args.params) != len(names):
        raise UsageError(f"{args.family} takes {len(names)} parameter(s): {' '.join(names)}")
    try:
        params = [int(p) for p in args.params]
    except ValueError as exc:
        raise UsageError(f"parameters must be integers: {exc}") from exc
    field = _field(args.field)
    try:
        text = build(field, *params)
    except ValueError as exc:
        raise UsageError(f"{args.family}: {exc}") from exc
    _write_output(text, args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--porcelain", action="store_true", help="one CHECK line per check")
    common.add_argument("--field", help="Q or FP:<p> (default: SMITH_FIELD or Q)")
    common.add_argument("--jobs", type=int, help="batch workers (overrides SMITH_MAX_WORKERS)")
    common.add_argument("-v", "--verbose", action="store_true", help="debug diagnostics on stderr")

    parser = argparse.ArgumentParser(
        description="Exact checks for Smith ideals, augmented algebras and their chain-level analogues"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    validate_p = subparsers.add_parser("validate", parents=[common], help="invariant checks for any file")
    validate_p.add_argument("file")
    validate_p.add_argument("--commutative", action="store_true", help="also check commutativity")
    validate_p.set_defaults(func=cmd_validate)

    unitalize_p = subparsers.add_parser("unitalize", parents=[common], help="k ⊕ A as an augmented algebra")
    unitalize_p.add_argument("file")
    unitalize_p.add_argument("-o", "--output", help="output path")
    unitalize_p.set_defaults(func=cmd_unitalize)

    augker = subparsers.add_parser("augker", parents=[common], help="kernel of the augmentation")
    augker.add_argument("file")
    augker.add_argument("-o", "--output", help="output path")
    augker.set_defaults(func=cmd_augker)

    roundtrip = subparsers.add_parser("roundtrip", parents=[common], help="both equivalence roundtrips")
    roundtrip.add_argument("file")
    roundtrip.set_defaults(func=cmd_roundtrip)

    smith = subparsers.add_parser("smith-check", parents=[common], help="Smith ideal of an augmented algebra")
    smith.add_argument("file")
    smith.add_argument("--commutative", action="store_true", help="also check μ ∘ braiding = μ")
    smith.add_argument("--mutations", type=int, default=0, help="corrupted copies that must be rejected")
    smith.add_argument("--seed", type=int)
    smith.set_defaults(func=cmd_smith_check)

    monoidal = subparsers.add_parser("monoidal-check", parents=[common], help="arrow-category laws on random arrows")
    monoidal.add_argument("--seed", type=int)
    monoidal.add_argument("--count", type=int, default=10)
    monoidal.add_argument("--max-dim", type=int, default=3)
    monoidal.add_argument("--file", help="arrow file checked in addition")
    monoidal.set_defaults(func=cmd_monoidal_check)

    homology_p = subparsers.add_parser("homology", parents=[common], help="homology of a complex")
    homology_p.add_argument("file")
    homology_p.set_defaults(func=cmd_homology)

    stable = subparsers.add_parser("stable-check", parents=[common], help="unit/counit weak equivalences")
    stable.add_argument("--seed", type=int)
    stable.add_argument("--count", type=int, default=10)
    stable.add_argument("--max-dim", type=int, default=3)
    stable.add_argument("--file", help="chain-map file checked in addition")
    stable.set_defaults(func=cmd_stable_check)

    dg_round = subparsers.add_parser("dg-roundtrip", parents=[common], help="dg equivalence roundtrips")
    dg_round.add_argument("file")
    dg_round.set_defaults(func=cmd_dg_roundtrip)

    theorem = subparsers.add_parser("main-theorem", parents=[common], help="unit-cokernel and unit weq checks")
    theorem.add_argument("file")
    theorem.set_defaults(func=cmd_main_theorem)

    corpus_p = subparsers.add_parser("corpus", parents=[common], help="emit corpus instances")
    corpus_p.add_argument("action", choices=["dump"])
    corpus_p.add_argument("family")
    corpus_p.add_argument("params", nargs="*")
    corpus_p.add_argument("-o", "--output", help="output path")
    corpus_p.set_defaults(func=cmd_corpus)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    config.load_env()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(
        stream=sys.stderr,
        format="[%(name)s] %(message)s",
        level=config.resolve_log_level(args.verbose),
    )
    try:
        return args.func(args)
    except (ParseError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AlgebraError, DGAlgebraError, ChainComplexError, SmithIdealError, ArrowError, LinalgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    raise SystemExit(main())
