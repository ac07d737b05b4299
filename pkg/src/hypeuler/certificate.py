"""Certificate assembly, deterministic serialization, report rendering,
and independent re-verification.

A certificate is a plain JSON tree in which every rational is an exact
``num/den`` string and every interval a pair of such strings; no floating
point number appears anywhere.  Given the bundled dataset, the verifier
recomputes every arithmetic claim (zeta special values, local factor
polynomials and minima, bound cutoffs, reduced products, witness
primality and divisibility) from scratch and reports the first
divergence.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from sympy import isprime

from . import __version__
from .exact_arith import RationalInterval, dyadic_round_up, format_rational, parse_rational
from .euler_char import chi_principal_from_values, index_divisor
from .field_tables import FieldTable, load_table
from .local_factors import calibrate_oracle, minimum_proof, table_fingerprint
from .characters_zeta import zeta_k_special
from .search_bounds import (
    CertificateSection,
    VERDICT_CERTIFIED,
    certify_section,
    enumerate_candidates,
    high_degree_exclusion,
)

CERTIFICATE_FORMAT = "hypeuler-certificate v1"


class CertificateError(Exception):
    pass


def _interval_json(iv: RationalInterval) -> list[str]:
    # Exact endpoints can run to many thousands of digits; store an
    # outward-rounded enclosure (still rigorous) at bounded precision.
    rounded = iv.outward_round(sig_bits=128)
    return [format_rational(rounded.lo), format_rational(rounded.hi)]


def _bounds_pass_json(p) -> dict:
    return {
        "mode": p.mode.value,
        "disc_upper": p.disc_upper,
        "doubled_exponent": p.doubled_exponent,
        "threshold_squared": _interval_json(p.threshold_squared),
        "enclosure_decisive": p.enclosure_decisive,
    }


def section_to_json(section: CertificateSection) -> dict:
    out: dict = {
        "r": section.r,
        "n": section.n,
        "kind": section.kind,
        "verdict": section.verdict,
        "notes": list(section.notes),
    }
    if section.local_factor_proof is not None:
        proof = section.local_factor_proof
        out["local_factors"] = {
            "minimum_at_q2": format_rational(proof.minimum),
            "entries": [
                {
                    "type": e.type.slug(),
                    "description": e.type.describe(proof.r),
                    "polynomial": [str(int(c)) for c in e.polynomial.coeffs],
                    "value_at_q2": format_rational(e.value_at_two),
                    "shifted_nonnegative": e.shifted_nonnegative,
                }
                for e in proof.entries
            ],
            "calibration": {k: format_rational(v) for k, v in sorted((section.calibration or {}).items())},
        }
    if section.enumeration is not None:
        out["bounds"] = [
            {
                "degree": a.degree,
                "pass_one": _bounds_pass_json(a.pass_one),
                "pass_two": _bounds_pass_json(a.pass_two),
                "pass_one_discs": list(a.pass_one_discs),
                "pass_two_discs": list(a.pass_two_discs),
            }
            for a in section.enumeration.audits
        ]
        out["candidates"] = [
            {"label": rec.label, "degree": rec.degree, "disc": rec.disc, "h": rec.h}
            for rec in section.enumeration.records
        ]
    if section.high_degree is not None:
        hd = section.high_degree
        out["high_degree"] = {
            "growth_factor": _interval_json(hd.growth_factor),
            "value_at_degree_five": _interval_json(hd.value_at_degree_five),
            "low_degree": [
                {
                    "degree": row.degree,
                    "disc_upper": row.disc_upper,
                    "minimal_disc": row.minimal_disc,
                    "excluded": row.excluded,
                }
                for row in hd.low_degree
            ],
        }
    out["verdicts"] = [
        {
            "label": v.record.label,
            "degree": v.record.degree,
            "disc": v.record.disc,
            "h": v.record.h,
            "zeta_values": [format_rational(z) for z in v.obstruction.zeta_values],
            "product": format_rational(v.obstruction.product),
            "odd_numerator": str(v.obstruction.odd_numerator),
            "witness": v.obstruction.witness,
            "conclusion": v.conclusion,
            "euler": {
                "chi_lambda": format_rational(v.euler.chi_lambda),
                "index_divisor": v.euler.index_divisor,
                "chi_gamma_lower": format_rational(v.euler.chi_gamma_lower),
                "two_exponent": v.euler.two_exponent,
            },
            "dual_path": None
            if v.dual_path is None
            else {
                "enclosure": _interval_json(v.dual_path.enclosure),
                "contains_exact": v.dual_path.contains,
                "relative_width": format_rational(
                    dyadic_round_up(v.dual_path.relative_width, 32)
                ),
            },
        }
        for v in section.verdicts
    ]
    return out


def axioms(dataset_checksum: str) -> list[dict]:
    return [
        {
            "id": "discriminant-floor",
            "statement": "every totally real number field of degree d >= 5 has |disc| > 6.5^d",
            "source": "Odlyzko-type discriminant bounds (published tables)",
        },
        {
            "id": "maximal-type-table",
            "statement": "closed-form local factors for the maximal parahoric types of rank-r "
            "odd orthogonal groups, as fingerprinted polynomials in the residue size",
            "fingerprint": table_fingerprint(),
        },
        {
            "id": "field-dataset",
            "statement": "bundled totally real field invariants (discriminant, class number, "
            "abelian character data) with stated completeness bounds",
            "checksum": dataset_checksum,
        },
    ]


def build_certificate(
    sections: list[CertificateSection],
    table: FieldTable,
    precision_bits: int,
    requested: list[int],
    status: str = "complete",
    error: str | None = None,
) -> dict:
    cert: dict = {
        "format": CERTIFICATE_FORMAT,
        "tool": {"name": "hypeuler", "version": __version__},
        "dataset": {
            "checksum": table.checksum,
            "source": table.source,
            "completeness": {str(k): v for k, v in sorted(table.completeness.items())},
        },
        "axioms": axioms(table.checksum),
        "parameters": {
            "precision_bits": precision_bits,
            "requested_r": sorted(requested),
        },
        "sections": [section_to_json(s) for s in sorted(sections, key=lambda s: s.r)],
        "overall": {str(2 * s.r): s.verdict for s in sections},
        "status": status,
    }
    if error is not None:
        cert["error"] = error
    return cert


def serialize_certificate(cert: dict) -> str:
    return json.dumps(cert, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_certificate(cert: dict, path: str | Path) -> None:
    Path(path).write_text(serialize_certificate(cert), encoding="utf-8")


def read_certificate(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CertificateError(f"cannot read certificate {path}: {exc}") from exc


def run_certification(
    requested_r: list[int],
    table: FieldTable,
    precision_bits: int = 192,
    dual_path: bool = True,
) -> tuple[dict, int]:
    """Certify every requested rank; returns (certificate, exit code).

    Exit codes: 0 all certified, 2 at least one rank inconclusive,
    1 internal error (the certificate is then partial, status failed).
    """
    sections: list[CertificateSection] = []
    for r in sorted(set(requested_r)):
        try:
            sections.append(certify_section(r, table, precision_bits, dual_path))
        except Exception as exc:  # embed the failure, per the exit-code contract
            cert = build_certificate(
                sections, table, precision_bits, requested_r, status="failed",
                error=f"r={r}: {type(exc).__name__}: {exc}",
            )
            return cert, 1
    cert = build_certificate(sections, table, precision_bits, requested_r)
    code = 0 if all(s.verdict == VERDICT_CERTIFIED for s in sections) else 2
    return cert, code


# ---------------------------------------------------------------------------
# Independent verification
# ---------------------------------------------------------------------------


@dataclass
class VerificationOutcome:
    ok: bool
    checks: int
    divergence: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def _fail(msg: str, checks: int) -> VerificationOutcome:
    return VerificationOutcome(ok=False, checks=checks, divergence=msg)


def verify_certificate(cert: dict | str | Path, table: FieldTable | None = None) -> VerificationOutcome:
    """Recompute every arithmetic claim of a certificate from scratch.

    Shares only the exact-arithmetic core with the producer in its trusted
    base: zeta values, local factor polynomials, bound cutoffs, reduced
    products, witness primality/divisibility and verdict logic are all
    recomputed and compared, not trusted.
    """
    if not isinstance(cert, dict):
        cert = read_certificate(cert)
    checks = 0
    if cert.get("format") != CERTIFICATE_FORMAT:
        return _fail(f"unknown certificate format {cert.get('format')!r}", checks)
    if table is None:
        table = load_table()
    checks += 1
    if cert.get("dataset", {}).get("checksum") != table.checksum:
        return _fail("dataset checksum does not match the table in use", checks)
    if cert.get("status") != "complete":
        return _fail(f"certificate status is {cert.get('status')!r}", checks)

    for sec in cert.get("sections", []):
        r = sec["r"]
        tag = f"section r={r}"
        if sec["n"] != 2 * r:
            return _fail(f"{tag}: n={sec['n']} is not 2r", checks)

        if "local_factors" in sec:
            proof = minimum_proof(r)
            by_slug = {e.type.slug(): e for e in proof.entries}
            entries = sec["local_factors"]["entries"]
            checks += 1
            if {e["type"] for e in entries} != set(by_slug):
                return _fail(f"{tag}: maximal type list does not match enumeration", checks)
            for e in entries:
                known = by_slug[e["type"]]
                checks += 1
                if [str(int(c)) for c in known.polynomial.coeffs] != e["polynomial"]:
                    return _fail(f"{tag}: polynomial mismatch for type {e['type']}", checks)
                if parse_rational(e["value_at_q2"]) != known.value_at_two:
                    return _fail(f"{tag}: value at q=2 mismatch for type {e['type']}", checks)
            checks += 1
            if parse_rational(sec["local_factors"]["minimum_at_q2"]) != proof.minimum:
                return _fail(f"{tag}: minimum over types at q=2 mismatch", checks)
            recal = calibrate_oracle(r)
            cal = {k: parse_rational(v) for k, v in sec["local_factors"]["calibration"].items()}
            checks += 1
            if cal != recal:
                return _fail(f"{tag}: order-formula calibration mismatch", checks)

        if "bounds" in sec:
            enum = enumerate_candidates(r, table)
            audits = {a.degree: a for a in enum.audits}
            for b in sec["bounds"]:
                a = audits.get(b["degree"])
                checks += 1
                if a is None:
                    return _fail(f"{tag}: unexpected bounds degree {b['degree']}", checks)
                for key, known in (("pass_one", a.pass_one), ("pass_two", a.pass_two)):
                    checks += 1
                    if b[key]["disc_upper"] != known.disc_upper:
                        return _fail(
                            f"{tag}: degree {b['degree']} {key} cutoff "
                            f"{b[key]['disc_upper']} != recomputed {known.disc_upper}",
                            checks,
                        )
                    if b[key]["doubled_exponent"] != known.doubled_exponent:
                        return _fail(f"{tag}: degree {b['degree']} {key} exponent mismatch", checks)
                checks += 1
                if list(b["pass_two_discs"]) != list(a.pass_two_discs):
                    return _fail(f"{tag}: degree {b['degree']} pass-two discriminants mismatch", checks)
            cand = [(c["degree"], c["disc"]) for c in sec.get("candidates", [])]
            checks += 1
            if cand != [(rec.degree, rec.disc) for rec in enum.records]:
                return _fail(f"{tag}: candidate list mismatch", checks)

        if "high_degree" in sec:
            hd = high_degree_exclusion(r, table=table if sec["high_degree"]["low_degree"] else None)
            checks += 1
            if not hd.growth_factor.strictly_greater_than(1):
                return _fail(f"{tag}: high-degree growth factor fails", checks)
            for row in sec["high_degree"]["low_degree"]:
                known = next((x for x in hd.low_degree if x.degree == row["degree"]), None)
                checks += 1
                if known is None or known.disc_upper != row["disc_upper"] or known.excluded != row["excluded"]:
                    return _fail(f"{tag}: high-degree row for degree {row['degree']} mismatch", checks)

        all_obstructed = True
        for v in sec.get("verdicts", []):
            label = v["label"]
            rec = table.by_disc(v["degree"], v["disc"])
            checks += 1
            if rec is None or rec.label != label or rec.h != v["h"]:
                return _fail(f"{tag}: field {label} not found in dataset as recorded", checks)
            zetas = [parse_rational(z) for z in v["zeta_values"]]
            checks += 1
            if len(zetas) != r:
                return _fail(f"{tag}: {label}: expected {r} zeta values", checks)
            for j, claimed in enumerate(zetas, start=1):
                checks += 1
                recomputed = zeta_k_special(rec, j)
                if recomputed != claimed:
                    return _fail(
                        f"{tag}: zeta value for field {label}, j={j}: certificate says "
                        f"{format_rational(claimed)}, recomputed {format_rational(recomputed)}",
                        checks,
                    )
            product = Fraction(1)
            for z in zetas:
                product *= abs(z)
            checks += 1
            if product != parse_rational(v["product"]):
                return _fail(f"{tag}: {label}: reduced zeta product mismatch", checks)
            num = product.numerator
            odd = num >> ((num & -num).bit_length() - 1)
            checks += 1
            if str(odd) != v["odd_numerator"]:
                return _fail(f"{tag}: {label}: odd numerator mismatch", checks)
            witness = v["witness"]
            if witness is None:
                all_obstructed = False
                checks += 1
                if odd != 1 or v["conclusion"] != "unobstructed":
                    return _fail(f"{tag}: {label}: missing witness despite nontrivial numerator", checks)
            else:
                checks += 3
                if not isprime(witness) or witness <= 2:
                    return _fail(f"{tag}: {label}: witness {witness} is not an odd prime", checks)
                if odd % witness != 0:
                    return _fail(f"{tag}: {label}: witness {witness} does not divide {odd}", checks)
                if v["conclusion"] != "obstructed":
                    return _fail(f"{tag}: {label}: witness present but conclusion not obstructed", checks)
                for p in range(3, witness, 2):
                    if odd % p == 0 and isprime(p):
                        return _fail(f"{tag}: {label}: witness {witness} is not the smallest prime", checks)
            euler = v["euler"]
            chi = chi_principal_from_values(r, v["degree"], [abs(z) for z in zetas], [])
            checks += 1
            if chi != parse_rational(euler["chi_lambda"]):
                return _fail(f"{tag}: {label}: chi(Lambda) mismatch", checks)
            checks += 1
            if euler["index_divisor"] != index_divisor(v["h"], v["degree"], 0):
                return _fail(f"{tag}: {label}: index divisor mismatch", checks)
            checks += 1
            if chi / euler["index_divisor"] != parse_rational(euler["chi_gamma_lower"]):
                return _fail(f"{tag}: {label}: chi(Gamma) lower bound mismatch", checks)
            if v.get("dual_path"):
                lo, hi = (parse_rational(s) for s in v["dual_path"]["enclosure"])
                checks += 1
                if not (lo <= chi <= hi):
                    return _fail(f"{tag}: {label}: recorded enclosure misses the exact value", checks)

        checks += 1
        expect_certified = sec["verdict"] == VERDICT_CERTIFIED
        has_field_proof = bool(sec.get("verdicts"))
        bound_only = (
            sec.get("kind") == "bound-exclusion"
            and "high_degree" in sec
            and all(row["excluded"] for row in sec["high_degree"]["low_degree"])
        )
        actually_certified = bound_only or (has_field_proof and all_obstructed)
        if expect_certified != actually_certified:
            return _fail(f"{tag}: verdict {sec['verdict']!r} inconsistent with evidence", checks)
        checks += 1
        if cert["overall"].get(str(sec["n"])) != sec["verdict"]:
            return _fail(f"{tag}: overall map disagrees with section verdict", checks)

    return VerificationOutcome(ok=True, checks=checks)


# ---------------------------------------------------------------------------
# Report rendering
# ---------------------------------------------------------------------------


def _collect_zeta_matrix(cert: dict) -> dict[tuple[int, int], list[str]]:
    rows: dict[tuple[int, int], list[str]] = {}
    for sec in cert.get("sections", []):
        for v in sec.get("verdicts", []):
            key = (v["degree"], v["disc"])
            if key not in rows or len(v["zeta_values"]) > len(rows[key]):
                rows[key] = list(v["zeta_values"])
    return rows


def render_report(cert: dict) -> str:
    """Human-readable summary of a certificate."""
    lines: list[str] = []
    lines.append("hypeuler certification report")
    lines.append("=" * 60)
    tool = cert.get("tool", {})
    lines.append(f"tool: {tool.get('name', '?')} {tool.get('version', '?')}")
    lines.append(f"dataset checksum: {cert.get('dataset', {}).get('checksum', '?')}")
    lines.append(f"status: {cert.get('status', '?')}")
    if cert.get("error"):
        lines.append(f"error: {cert['error']}")
    sections = cert.get("sections", [])
    if not sections:
        lines.append("")
        lines.append("(no sections)")
        return "\n".join(lines) + "\n"

    for sec in sections:
        lines.append("")
        lines.append(f"dimension n = {sec['n']} (rank r = {sec['r']}, {sec['kind']})")
        lines.append("-" * 60)
        if "bounds" in sec:
            for b in sec["bounds"]:
                lines.append(
                    f"  degree {b['degree']}: |D| <= {b['pass_one']['disc_upper']} "
                    f"(first pass), <= {b['pass_two']['disc_upper']} (class number one); "
                    f"survivors {list(b['pass_two_discs'])}"
                )
        if "high_degree" in sec:
            for row in sec["high_degree"]["low_degree"]:
                status = "excluded" if row["excluded"] else "NOT excluded"
                lines.append(
                    f"  degree {row['degree']}: bound {row['disc_upper']} vs smallest "
                    f"disc {row['minimal_disc']} -> {status}"
                )
            lines.append("  degrees >= 5 excluded against the 6.5^d discriminant floor")
        if "local_factors" in sec:
            lf = sec["local_factors"]
            lines.append(
                f"  local factors: {len(lf['entries'])} maximal types, all integer "
                f"polynomials, minimum at q=2 is {lf['minimum_at_q2']}"
            )
        for v in sec.get("verdicts", []):
            zrow = ", ".join(v["zeta_values"])
            lines.append(f"  D={v['disc']} (degree {v['degree']}, h={v['h']}): {zrow}")
            if v["witness"] is not None:
                lines.append(
                    f"    -> obstructed: prime {v['witness']} divides the numerator "
                    f"{v['odd_numerator']} of the zeta product {v['product']}"
                )
            else:
                lines.append(
                    f"    -> unobstructed: zeta product {v['product']} has trivial "
                    "numerator, no odd-prime witness exists"
                )
        for note in sec.get("notes", []):
            lines.append(f"  note: {note}")
        lines.append(f"  verdict: {sec['verdict']}")

    matrix = _collect_zeta_matrix(cert)
    if matrix:
        lines.append("")
        lines.append("special values zeta_k(1-2j) of the candidate fields")
        lines.append("-" * 60)
        for (degree, disc), zs in sorted(matrix.items()):
            lines.append(f"  d={degree} D={disc}: " + ", ".join(zs))

    lines.append("")
    lines.append("overall verdicts")
    lines.append("-" * 60)
    for n, verdict in sorted(cert.get("overall", {}).items(), key=lambda kv: int(kv[0])):
        lines.append(f"  n = {n}: {verdict}")
    return "\n".join(lines) + "\n"
