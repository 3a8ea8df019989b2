"""Deterministic sub-seed derivation for independent experiment tasks."""

import hashlib

from ..errors import ConfigError

_U64 = 2**64


def derive_seed(master_seed: int, task_label: str) -> int:
    """Stable uint64 seed from a master seed and a task label.

    SHA-256 over the big-endian master seed bytes followed by the UTF-8
    label; the first 8 digest bytes, big-endian, are the sub-seed. Distinct
    labels give independent generators no matter how tasks are scheduled.
    """
    if not 0 <= master_seed < _U64:
        raise ConfigError(f"master seed must be a uint64, got {master_seed}")
    digest = hashlib.sha256(
        master_seed.to_bytes(8, "big") + task_label.encode("utf-8")
    ).digest()
    return int.from_bytes(digest[:8], "big")
