"""Directory-backed cluster simulation.

A cluster directory holds meta.json (code shape, field, points, secure
wrapping parameters), one share_<i>.bin per node (alpha elements, fixed
width, little-endian), and events.jsonl, an append-only log of repair
events carrying the exact symbols each helper sent.  Replaying the log
over a re-encode of the reconstructed message must reproduce the share
files byte for byte; verify_cluster() checks that, which is what catches
a corrupted share.

Payloads are framed with a 4-byte big-endian length prefix, then packed
big-endian-bit-first into field symbols; whatever capacity is left is
zero padding.  Mutating operations take an advisory lock file.
"""

from __future__ import annotations

import json
import os
import random
import secrets
from contextlib import contextmanager
from pathlib import Path

from . import secrecy
from .errors import (BadModel, IntegrityError, PayloadTooLarge, SelfRepair,
                     UnknownNode, WrongHelperCount, WrongNodeCount)
from .field import ExtensionSpec, FieldSpec
from .matrix import Matrix
from .product_matrix import CodeParams, ProductMatrixCode, RepairFromTo, Stored

LAYOUT_VERSION = 1


def bits_per_symbol(field) -> int:
    """Payload bits that always fit in one element encoding."""
    return field.order.bit_length() - 1


def element_width(field) -> int:
    """Bytes per element in share files."""
    return ((field.order - 1).bit_length() + 7) // 8


def frame_payload(payload: bytes) -> bytes:
    if len(payload) >= 1 << 32:
        raise PayloadTooLarge("payload too long for a 4-byte length prefix")
    return len(payload).to_bytes(4, "big") + payload


def bytes_to_symbols(data: bytes, bits: int, count: int) -> list[int]:
    """Pack a byte stream into count symbols, big-endian bit order."""
    total_bits = len(data) * 8
    if total_bits > count * bits:
        raise PayloadTooLarge(
            f"{len(data)} framed bytes exceed {count} symbols of {bits} bits")
    value = int.from_bytes(data, "big") << (count * bits - total_bits)
    mask = (1 << bits) - 1
    return [(value >> ((count - 1 - i) * bits)) & mask for i in range(count)]


def symbols_to_bytes(symbols, bits: int) -> bytes:
    """Unpack symbols back to the longest whole-byte prefix of the stream."""
    value = 0
    for s in symbols:
        value = (value << bits) | s
    total_bits = len(symbols) * bits
    nbytes = total_bits // 8
    value >>= total_bits - nbytes * 8
    return value.to_bytes(nbytes, "big") if nbytes else b""


def unframe_payload(stream: bytes) -> bytes:
    if len(stream) < 4:
        raise IntegrityError("stream shorter than its length prefix")
    length = int.from_bytes(stream[:4], "big")
    if 4 + length > len(stream):
        raise IntegrityError(
            f"framed length {length} exceeds {len(stream) - 4} stored bytes")
    return stream[4:4 + length]


@contextmanager
def _lock(path: Path):
    lock = path / ".lock"
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise IntegrityError(f"cluster {path} is locked by another writer")
    try:
        os.close(fd)
        yield
    finally:
        os.unlink(lock)


class ClusterState:
    def __init__(self, path: Path, meta: dict, base: ProductMatrixCode,
                 codec: ProductMatrixCode, scheme):
        self.path = Path(path)
        self.meta = meta
        self.base = base        # code over the symbol field F
        self.codec = codec      # code over F (plain) or L (secure)
        self.scheme = scheme    # SecureScheme or None

    # -- creation and loading

    @classmethod
    def create(cls, path, params: CodeParams, field: FieldSpec,
               payload: bytes, secure=None, seed=None,
               points=None) -> "ClusterState":
        path = Path(path)
        path.mkdir(parents=True, exist_ok=True)
        if (path / "meta.json").exists():
            raise IntegrityError(f"cluster already exists at {path}")
        base = ProductMatrixCode(params, field, points)
        meta = {
            "layout": LAYOUT_VERSION,
            "params": {"n": params.n, "k": params.k, "d": params.d,
                       "m": params.m},
            "field": field.to_json(),
            "points": list(base.points),
            "mode": "plain",
            "secure": None,
        }
        if secure is None:
            codec, scheme = base, None
            capacity = params.message_length
        else:
            l1, l2 = secure
            scheme = secrecy.scheme_make(base, l1, l2)
            codec = ProductMatrixCode(params, scheme.ext, base.points)
            capacity = scheme.secret_size
            if seed is None:
                seed = secrets.randbits(63)
            meta["mode"] = "secure"
            meta["secure"] = {"l1": l1, "l2": l2, "ell": scheme.ell,
                              "seed": seed,
                              "extension": scheme.ext.to_json()}
        framed = frame_payload(payload)
        bits = bits_per_symbol(codec.field)
        data_symbols = bytes_to_symbols(framed, bits, capacity)
        if scheme is None:
            message = data_symbols
        else:
            rng = random.Random(seed)
            randomness = [rng.randrange(scheme.ext.order)
                          for _ in range(scheme.ell)]
            message = scheme.wrap(data_symbols, randomness)
        shares = codec.encode(message)
        state = cls(path, meta, base, codec, scheme)
        with _lock(path):
            (path / "meta.json").write_text(
                json.dumps(meta, sort_keys=True, indent=1) + "\n")
            (path / "events.jsonl").write_text("")
            for node in codec.nodes:
                state.write_share(node, shares[node - 1])
        return state

    @classmethod
    def load(cls, path) -> "ClusterState":
        path = Path(path)
        try:
            meta = json.loads((path / "meta.json").read_text())
        except FileNotFoundError:
            raise IntegrityError(f"no cluster at {path}")
        if meta.get("layout") != LAYOUT_VERSION:
            raise IntegrityError(f"unknown layout {meta.get('layout')}")
        params = CodeParams(**meta["params"])
        field = FieldSpec.from_json(meta["field"])
        base = ProductMatrixCode(params, field, meta["points"])
        if meta["mode"] == "secure":
            sec = meta["secure"]
            scheme = secrecy.SecureScheme(base, sec["l1"], sec["l2"],
                                          sec["ell"])
            if scheme.ext.to_json() != sec["extension"]:
                raise IntegrityError("stored extension disagrees with "
                                     "the derived one")
            codec = ProductMatrixCode(params, scheme.ext, base.points)
        else:
            scheme, codec = None, base
        return cls(path, meta, base, codec, scheme)

    # -- share files

    def share_path(self, node: int) -> Path:
        self.codec._node_index(node)
        return self.path / f"share_{node}.bin"

    def write_share(self, node: int, symbols):
        width = element_width(self.codec.field)
        blob = b"".join(s.to_bytes(width, "little") for s in symbols)
        self.share_path(node).write_bytes(blob)

    def read_share(self, node: int) -> list[int]:
        width = element_width(self.codec.field)
        try:
            blob = self.share_path(node).read_bytes()
        except FileNotFoundError:
            raise UnknownNode(f"share of node {node} is missing")
        alpha = self.codec.params.alpha
        if len(blob) != alpha * width:
            raise IntegrityError(
                f"share_{node}.bin has {len(blob)} bytes, "
                f"expected {alpha * width}")
        out = []
        for i in range(alpha):
            v = int.from_bytes(blob[i * width:(i + 1) * width], "little")
            out.append(self.codec.field.element(v))
        return out

    # -- event log

    def events(self) -> list[dict]:
        lines = (self.path / "events.jsonl").read_text().splitlines()
        return [json.loads(line) for line in lines if line.strip()]

    def _append_event(self, event: dict):
        with open(self.path / "events.jsonl", "a") as fh:
            fh.write(json.dumps(event, sort_keys=True,
                                separators=(",", ":")) + "\n")

    # -- operations

    def fail_repair(self, failed: int, helpers=None) -> dict:
        codec = self.codec
        if helpers is None:
            helpers = [x for x in codec.nodes if x != failed][:codec.params.d]
        helpers = sorted(set(helpers))
        if len(helpers) != codec.params.d:
            raise WrongHelperCount(
                f"need exactly d={codec.params.d} helpers, got {len(helpers)}")
        if failed in helpers:
            raise SelfRepair(f"node {failed} cannot help repair itself")
        with _lock(self.path):
            before = self.read_share(failed)
            symbols = {h: codec.repair_symbol(h, failed, self.read_share(h))
                       for h in helpers}
            self.share_path(failed).unlink()
            rebuilt = codec.repair(failed, symbols)
            if rebuilt != before:
                self.write_share(failed, before)
                raise IntegrityError(
                    f"repair of node {failed} did not reproduce its share; "
                    f"a helper share is corrupt")
            self.write_share(failed, rebuilt)
            events = self.events()
            epoch = events[-1]["epoch"] + 1 if events else 1
            event = {"epoch": epoch, "event": "repair", "failed": failed,
                     "helpers": helpers,
                     "symbols": {str(h): [format(s, "#x") for s in symbols[h]]
                                 for h in helpers}}
            self._append_event(event)
        return event

    def reconstruct_message(self, nodes=None) -> list[int]:
        codec = self.codec
        if nodes is None:
            nodes = list(codec.nodes)[:codec.params.k]
        nodes = sorted(set(nodes))
        if len(nodes) != codec.params.k:
            raise WrongNodeCount(
                f"need exactly k={codec.params.k} nodes, got {len(nodes)}")
        return codec.reconstruct({n: self.read_share(n) for n in nodes})

    def reconstruct_payload(self, nodes=None) -> bytes:
        message = self.reconstruct_message(nodes)
        if self.scheme is not None:
            message = self.scheme.unwrap(message)
        stream = symbols_to_bytes(message, bits_per_symbol(self.codec.field))
        return unframe_payload(stream)

    def attack(self, stored, repaired, epochs=None) -> dict:
        model = secrecy.EavesdropperModel(stored, repaired)
        secrecy.check_model(self.codec, model)
        lo, hi = epochs if epochs is not None else (1, None)
        picked = [e for e in self.events()
                  if e["event"] == "repair" and e["failed"] in model.repaired
                  and e["epoch"] >= lo and (hi is None or e["epoch"] <= hi)]
        stored_rows = [o.row for o in
                       self.codec.observation_rows(Stored(model.stored))]
        first_rows = dict.fromkeys(model.repaired)
        event_rows = []
        for e in picked:
            rows = []
            for h in e["helpers"]:
                rows.extend(o.row for o in self.codec.observation_rows(
                    RepairFromTo((h,), (e["failed"],))))
            event_rows.extend(rows)
            if first_rows[e["failed"]] is None:
                first_rows[e["failed"]] = rows
        baseline = list(stored_rows)
        for rows in first_rows.values():
            baseline.extend(rows or [])
        width = self.codec.params.message_length
        field = self.codec.field
        rank_all = Matrix(field, stored_rows + event_rows, ncols=width).rank()
        rank_base = Matrix(field, baseline, ncols=width).rank()
        report = secrecy.attack_report(self.codec, model,
                                       observed_leakage=rank_all,
                                       scheme=self.scheme)
        report["rank_growth"] = rank_all - rank_base
        report["epochs"] = [e["epoch"] for e in picked]
        return report

    def verify_cluster(self) -> list[dict]:
        checks = []

        def record(name, passed, detail=""):
            checks.append({"check": name, "passed": bool(passed),
                           "detail": detail})

        codec = self.codec
        try:
            shares = {n: self.read_share(n) for n in codec.nodes}
            record("shares", True, f"{codec.params.n} share files read")
        except (UnknownNode, IntegrityError, ValueError) as exc:
            record("shares", False, str(exc))
            return checks

        try:
            message = codec.reconstruct(
                {n: shares[n] for n in list(codec.nodes)[:codec.params.k]})
            expected = codec.encode(message)
            bad = [n for n in codec.nodes if expected[n - 1] != shares[n]]
            record("replay", not bad,
                   f"shares differ from re-encode at nodes {bad}" if bad
                   else "all shares match the re-encode")
        except Exception as exc:
            record("replay", False, str(exc))
            return checks

        last = 0
        log_ok, log_detail = True, "event log consistent"
        for e in self.events():
            if e["epoch"] <= last:
                log_ok, log_detail = False, f"epoch {e['epoch']} not increasing"
                break
            last = e["epoch"]
            f = e["failed"]
            for h in e["helpers"]:
                sent = [int(s, 16) for s in e["symbols"][str(h)]]
                want = codec.repair_symbol(h, f, expected[h - 1])
                if sent != want:
                    log_ok = False
                    log_detail = (f"epoch {e['epoch']}: helper {h} symbols "
                                  f"disagree with its share")
                    break
            if not log_ok:
                break
        record("events", log_ok, log_detail)

        try:
            import itertools
            payloads = set()
            for group in itertools.combinations(codec.nodes, codec.params.k):
                payloads.add(self.reconstruct_payload(group))
            record("agreement", len(payloads) == 1,
                   f"{len(payloads)} distinct payloads across k-subsets")
        except Exception as exc:
            record("agreement", False, str(exc))
        return checks
