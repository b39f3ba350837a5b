"""Oracle container files.

Layout: ``MAGIC`` (6 bytes), version (u16), CRC-32 of the body (u32), body
length (u64), then the body: zlib-compressed canonical JSON holding the graph
fingerprint, parameters and per-subgraph payloads in canonical index order.
"""
from __future__ import annotations

import json
import struct
import zlib

from .graph import WeightedGraph
from .large import LargeDso, PivotStructure
from .rpc import Payload, RpcFamily, RpcParams
from .small import SmallDso
from .tz import TzOracle, TzSpanner

MAGIC = b"FTDSO\x00"
VERSION = 1
_HEADER = struct.Struct(">6sHIQ")


class ContainerError(ValueError):
    """Malformed, corrupted or incompatible container."""


class FingerprintMismatch(ContainerError):
    pass


def _family_payload(fam: RpcFamily) -> dict:
    p = fam.params
    return {
        "variant": fam.variant,
        "k": fam.k,
        "n": fam.n,
        "params": {"L": p.L, "f": p.f, "m": p.m, "q": p.q, "p": p.p, "ell": p.ell, "c": p.c},
        "slots": fam.slots if fam.variant == "det" else None,
        "payloads": [
            {
                "oracle": pl.oracle.to_payload(),
                "spanner": None if pl.spanner is None else sorted(pl.spanner.edge_ids),
            }
            for pl in fam.payloads
        ],
    }


def _family_from(d: dict) -> RpcFamily:
    params = RpcParams(**d["params"])
    payloads = []
    for pl in d["payloads"]:
        spanner = None if pl["spanner"] is None else TzSpanner(frozenset(pl["spanner"]), params.m)
        payloads.append(Payload(TzOracle.from_payload(pl["oracle"]), spanner))
    slots = d["slots"] if d["slots"] is not None else list(range(len(payloads)))
    return RpcFamily(params=params, variant=d["variant"], k=d["k"], n=d["n"], payloads=payloads, slots=slots)


def to_document(dso) -> dict:
    if isinstance(dso, SmallDso):
        return {
            "kind": "small",
            "fingerprint": dso.fingerprint,
            "config": {"k": dso.k, "f": dso.f, "L": dso.L, "D": dso.D, "variant": dso.variant, "seed": dso.seed},
            "family": _family_payload(dso.family),
        }
    if isinstance(dso, LargeDso):
        return {
            "kind": "large",
            "fingerprint": dso.fingerprint,
            "config": {"k": dso.k, "f": dso.f, "L": dso.L, "alpha": dso.alpha, "seed": dso.seed},
            "family": _family_payload(dso.family),
            "pivots": {"B": dso.pivots.B, "K": dso.pivots.K, "paths": dso.pivots.paths, "table": dso.pivots.table},
            "pivot_spanners": [[list(e) for e in sp] for sp in dso.pivot_spanners],
        }
    raise TypeError(f"cannot serialize {type(dso).__name__}")


def from_document(doc: dict):
    fam = _family_from(doc["family"])
    cfg = doc["config"]
    if doc["kind"] == "small":
        return SmallDso(family=fam, fingerprint=doc["fingerprint"], **cfg)
    if doc["kind"] == "large":
        pv = doc["pivots"]
        pivots = PivotStructure(B=pv["B"], K=pv["K"], table=[[float(x) for x in row] for row in pv["table"]],
                                paths=pv["paths"])
        spanners = [[(int(x), int(y), float(w)) for x, y, w in sp] for sp in doc["pivot_spanners"]]
        return LargeDso(family=fam, pivots=pivots, pivot_spanners=spanners, fingerprint=doc["fingerprint"], **cfg)
    raise ContainerError(f"unknown oracle kind {doc['kind']!r}")


def dumps(dso) -> bytes:
    text = json.dumps(to_document(dso), sort_keys=True, separators=(",", ":"))
    body = zlib.compress(text.encode("utf-8"), 9)
    return _HEADER.pack(MAGIC, VERSION, zlib.crc32(body), len(body)) + body


def loads(data: bytes, graph: WeightedGraph | None = None):
    if len(data) < _HEADER.size:
        raise ContainerError("truncated container header")
    magic, version, crc, length = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ContainerError("not an oracle container (bad magic)")
    if version != VERSION:
        raise ContainerError(f"unsupported container version {version}")
    body = data[_HEADER.size:]
    if len(body) != length:
        raise ContainerError(f"body length {len(body)} != declared {length}")
    if zlib.crc32(body) != crc:
        raise ContainerError("checksum mismatch: container is corrupted")
    try:
        doc = json.loads(zlib.decompress(body).decode("utf-8"))
        dso = from_document(doc)
    except (ValueError, KeyError, TypeError, zlib.error) as exc:
        raise ContainerError(f"malformed container body: {exc}") from exc
    if graph is not None:
        check_fingerprint(dso, graph)
    return dso


def check_fingerprint(dso, graph: WeightedGraph) -> None:
    expected = graph.fingerprint()
    if dso.fingerprint != expected:
        raise FingerprintMismatch(f"oracle was built for {dso.fingerprint}, graph is {expected}")


def save(dso, path) -> int:
    data = dumps(dso)
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)


def load(path, graph: WeightedGraph | None = None):
    with open(path, "rb") as fh:
        return loads(fh.read(), graph)
