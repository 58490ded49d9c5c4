"""JSON encoding/decoding for certificates and interval constraints.

Scalar, form, order, multiorder and finite-structure types carry their
own to_json/from_json; this module covers the tag-dispatched certificate
evidence.
"""

from __future__ import annotations

from .field import FieldScalar
from .genericity import IntervalConstraint
from .refuter import (
    TAG_DEPENDENT,
    TAG_DISCRETE_BASE,
    TAG_RATIONAL_KERNEL,
    TAG_SMALL_VOLUME,
    Certificate,
    MalformedCertificateError,
)

SCHEMA_VERSION = 1


def certificate_to_json(cert: Certificate) -> dict:
    ev = cert.evidence
    tag = cert.lemma_tag
    if tag == TAG_DEPENDENT:
        ev_json = {
            "k": ev["k"],
            "coeffs": [c.to_json() for c in ev["coeffs"]],
            "reversed": list(ev["reversed"]),
        }
    elif tag == TAG_RATIONAL_KERNEL:
        ev_json = {
            "order": ev["order"],
            "kernel_basis": [list(b) for b in ev["kernel_basis"]],
            "inner": certificate_to_json(ev["inner"]),
        }
    elif tag == TAG_SMALL_VOLUME:
        ev_json = {
            "det": ev["det"].to_json(),
            "widths": [w.to_json() for w in ev["widths"]],
        }
    elif tag == TAG_DISCRETE_BASE:
        ev_json = {
            "order": ev["order"],
            "pair": [list(p) for p in ev["pair"]],
        }
    else:
        raise MalformedCertificateError(f"unknown lemma tag {tag!r}")
    return {
        "lemma_tag": tag,
        "constraints": cert.constraints.to_json(),
        "evidence": ev_json,
    }


def certificate_from_json(obj: dict) -> Certificate:
    tag = obj["lemma_tag"]
    ev = obj["evidence"]
    if tag == TAG_DEPENDENT:
        evidence = {
            "k": ev["k"],
            "coeffs": [FieldScalar.from_json(c) for c in ev["coeffs"]],
            "reversed": list(ev["reversed"]),
        }
    elif tag == TAG_RATIONAL_KERNEL:
        evidence = {
            "order": ev["order"],
            "kernel_basis": [tuple(b) for b in ev["kernel_basis"]],
            "inner": certificate_from_json(ev["inner"]),
        }
    elif tag == TAG_SMALL_VOLUME:
        evidence = {
            "det": FieldScalar.from_json(ev["det"]),
            "widths": [FieldScalar.from_json(w) for w in ev["widths"]],
        }
    elif tag == TAG_DISCRETE_BASE:
        evidence = {
            "order": ev["order"],
            "pair": (tuple(ev["pair"][0]), tuple(ev["pair"][1])),
        }
    else:
        raise MalformedCertificateError(f"unknown lemma tag {tag!r}")
    return Certificate(
        IntervalConstraint.from_json(obj["constraints"]), tag, evidence
    )
