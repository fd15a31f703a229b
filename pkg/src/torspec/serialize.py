"""On-disk formats: sparse/dense fields, term symbols, reports; atomic writes.

Sparse fields serialize as JSON with coefficients sorted in frequency order;
dense fields as a raw little-endian complex64 array next to a JSON sidecar.
Term-form symbols carry structured multiplier descriptors so they can be
reconstructed exactly.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import TorspecError
from .fields import DenseField, SparseField
from .symbols import (
    ALL_ETA,
    EtaSupport,
    RadialBump,
    SeparableSymbol,
    Term,
    _block_mult,
    _corona_mult,
)
from .cutoffs import CutoffProfile, LPFamily


def atomic_write_text(path: Path | str, text: str) -> Path:
    """Write via a temp file and rename, so readers never see partial data."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
    return path


def atomic_write_bytes(path: Path | str, blob: bytes) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(blob)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
    return path


def write_json(path: Path | str, obj) -> Path:
    return atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=False) + "\n")


# -- sparse fields ---------------------------------------------------------------


def sparse_to_json(u: SparseField) -> dict:
    return {
        "n": u.n,
        "coeffs": [
            {"xi": list(xi), "re": c.real, "im": c.imag} for xi, c in u.items()
        ],
    }


def sparse_from_json(obj: dict, tau: float = 0.0) -> SparseField:
    coeffs = {
        tuple(int(c) for c in entry["xi"]): complex(entry["re"], entry["im"])
        for entry in obj["coeffs"]
    }
    return SparseField(int(obj["n"]), coeffs, tau)


def save_sparse(u: SparseField, path: Path | str) -> Path:
    return write_json(path, sparse_to_json(u))


def load_sparse(path: Path | str) -> SparseField:
    with open(path) as handle:
        return sparse_from_json(json.load(handle))


# -- dense fields ------------------------------------------------------------------


def save_dense(g: DenseField, base: Path | str) -> tuple[Path, Path]:
    """Write <base>.c64 (raw little-endian complex64) and <base>.json."""
    base = Path(base)
    data = np.ascontiguousarray(g.samples.astype("<c8"))
    bin_path = atomic_write_bytes(base.with_suffix(".c64"), data.tobytes())
    meta_path = write_json(base.with_suffix(".json"), {"M": g.M, "n": g.n})
    return bin_path, meta_path


def load_dense(base: Path | str) -> DenseField:
    base = Path(base)
    with open(base.with_suffix(".json")) as handle:
        meta = json.load(handle)
    raw = np.fromfile(base.with_suffix(".c64"), dtype="<c8")
    shape = (int(meta["M"]),) * int(meta["n"])
    return DenseField(int(meta["n"]), int(meta["M"]), raw.reshape(shape).astype(np.complex128))


# -- term-form symbols ---------------------------------------------------------------


def _bump_to_json(chi: RadialBump) -> dict:
    return {
        "lo": chi.lo,
        "hi": chi.hi,
        "plo": chi.plo,
        "phi": chi.phi,
        "kind": chi.kind,
        "zero_order": chi.zero_order,
    }


def _bump_from_json(obj: dict) -> RadialBump:
    return RadialBump(
        obj["lo"], obj["hi"], obj["plo"], obj["phi"], obj["kind"], obj["zero_order"]
    )


def symbol_to_json(a: SeparableSymbol) -> dict:
    terms = []
    for t in a.terms:
        if not t.meta or "kind" not in t.meta:
            raise TorspecError("only structured multipliers serialize")
        kind = t.meta["kind"]
        if kind == "one":
            mult = {"kind": "one"}
        elif kind == "corona":
            mult = {"kind": "corona", "j": t.meta["j"], "chi": _bump_to_json(t.meta["chi"])}
        elif kind == "block":
            prof = t.meta.get("profile")
            if prof is None:
                raise TorspecError("block multiplier needs its profile recorded")
            mult = {
                "kind": "block",
                "j": t.meta["j"],
                "profile": {"r": prof.r, "R": prof.R, "kind": prof.kind},
            }
        else:
            raise TorspecError(f"unknown multiplier kind {kind!r}")
        terms.append({"xpart": sparse_to_json(t.xpart), "mult": mult})
    return {"d": a.d, "n": a.n, "terms": terms}


def symbol_from_json(obj: dict) -> SeparableSymbol:
    terms = []
    for entry in obj["terms"]:
        xpart = sparse_from_json(entry["xpart"])
        m = entry["mult"]
        if m["kind"] == "one":
            terms.append(Term(xpart, lambda eta: 1.0, ALL_ETA, {"kind": "one"}))
        elif m["kind"] == "corona":
            chi = _bump_from_json(m["chi"])
            j = int(m["j"])
            scale = float(2**j)
            support = EtaSupport("annulus", chi.lo * scale, chi.hi * scale)
            terms.append(
                Term(xpart, _corona_mult(chi, scale), support, {"kind": "corona", "j": j, "chi": chi})
            )
        elif m["kind"] == "block":
            j = int(m["j"])
            prof = CutoffProfile(m["profile"]["r"], m["profile"]["R"], m["profile"]["kind"])
            fam = LPFamily(prof)
            lo, hi = fam.block_bounds(j)
            support = (
                EtaSupport("ball", 0.0, hi) if j == 0 else EtaSupport("annulus", lo, hi)
            )
            terms.append(
                Term(
                    xpart,
                    _block_mult(fam, j),
                    support,
                    {"kind": "block", "j": j, "profile": prof},
                )
            )
        else:
            raise TorspecError(f"unknown multiplier kind {m['kind']!r}")
    return SeparableSymbol(float(obj["d"]), int(obj["n"]), tuple(terms))


def save_symbol(a: SeparableSymbol, path: Path | str) -> Path:
    return write_json(path, symbol_to_json(a))


def load_symbol(path: Path | str) -> SeparableSymbol:
    with open(path) as handle:
        return symbol_from_json(json.load(handle))
