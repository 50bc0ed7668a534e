"""Versioned binary weight checkpoints.

Layout: magic bytes, format version, a JSON architecture descriptor, then
the raw parameter arrays as little-endian float32 in layer order (networks
sorted by name).  Loading validates sizes up front and never leaves a
half-written network behind.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from .network import Network

MAGIC = b"CNAV"
VERSION = 1
_HEADER = struct.Struct("<4sII")  # magic, version, descriptor length


class SerializationError(ValueError):
    """Corrupt, truncated or otherwise unreadable checkpoint blob."""


class ArchitectureMismatchError(SerializationError):
    """Checkpoint describes a different layer layout than the target."""


def save_networks(nets: dict[str, Network]) -> bytes:
    descriptor = {
        name: {"dtype": str(net.dtype), "layers": net.descriptor()}
        for name, net in nets.items()
    }
    desc_bytes = json.dumps(descriptor, sort_keys=True).encode("utf-8")
    chunks = [_HEADER.pack(MAGIC, VERSION, len(desc_bytes)), desc_bytes]
    for name in sorted(nets):
        for param in nets[name].params():
            chunks.append(np.ascontiguousarray(param, dtype="<f4").tobytes())
    return b"".join(chunks)


def save_network(net: Network) -> bytes:
    return save_networks({"net": net})


def _parse(blob: bytes) -> tuple[dict, bytes]:
    if len(blob) < _HEADER.size:
        raise SerializationError("blob too short for header")
    magic, version, desc_len = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise SerializationError("bad magic bytes")
    if version != VERSION:
        raise SerializationError(f"unsupported checkpoint version {version}")
    end = _HEADER.size + desc_len
    if len(blob) < end:
        raise SerializationError("truncated descriptor")
    try:
        descriptor = json.loads(blob[_HEADER.size:end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SerializationError(f"unreadable descriptor: {exc}") from None
    return descriptor, blob[end:]


def _fill_params(net: Network, payload: bytes, offset: int) -> int:
    staged = []
    for param in net.params():
        nbytes = param.size * 4
        if offset + nbytes > len(payload):
            raise SerializationError("truncated parameter data")
        arr = np.frombuffer(payload, dtype="<f4", count=param.size, offset=offset)
        staged.append(arr.reshape(param.shape))
        offset += nbytes
    for param, arr in zip(net.params(), staged):
        param[...] = arr.astype(param.dtype)
    return offset


def load_networks(blob: bytes, dtype=np.float32) -> dict[str, Network]:
    """Reconstruct the saved networks from scratch."""
    descriptor, payload = _parse(blob)
    nets = {
        name: Network.from_descriptor(entry["layers"], dtype)
        for name, entry in descriptor.items()
    }
    # validate the full payload length before touching anything
    expected = sum(p.size * 4 for name in sorted(nets) for p in nets[name].params())
    if len(payload) != expected:
        raise SerializationError(
            f"parameter payload has {len(payload)} bytes, expected {expected}"
        )
    offset = 0
    for name in sorted(nets):
        offset = _fill_params(nets[name], payload, offset)
    return nets


def load_network(blob: bytes, dtype=np.float32) -> Network:
    nets = load_networks(blob, dtype)
    if set(nets) != {"net"}:
        raise SerializationError("blob does not hold a single unnamed network")
    return nets["net"]


def restore_networks(blob: bytes, nets: dict[str, Network]) -> None:
    """Copy checkpoint weights into existing networks, verifying architecture."""
    loaded = load_networks(blob)
    if set(loaded) != set(nets):
        raise ArchitectureMismatchError(
            f"checkpoint holds {sorted(loaded)}, target expects {sorted(nets)}"
        )
    for name, net in nets.items():
        if loaded[name].architecture() != net.architecture():
            raise ArchitectureMismatchError(f"layer layout differs for {name!r}")
    for name, net in nets.items():
        for mine, theirs in zip(net.params(), loaded[name].params()):
            mine[...] = theirs
