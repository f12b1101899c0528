"""Exact secrecy auditing of protocol runs.

The security index is log|K| - H(K|F): zero exactly when the group key is
uniform and independent of the transcript.  Because key and transcript are
GF(2)-linear in i.i.d. uniform edge bits, conditional entropies are matrix
ranks, so the index is computed in exact integer arithmetic; a brute-force
enumeration of all edge-bit assignments provides an independent check at
small sizes (dyadic joint distributions, again exact).

Fault-injection helpers build tampered copies of a run so tests can show
the audits actually fail on bad runs.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping

from .errors import AuditFailureError, SizeLimitError
from .gf2 import Gf2Matrix
from .protocol import Broadcast, ProtocolRun, recover_key

BRUTEFORCE_EDGE_CAP = 20


@dataclass(frozen=True)
class SecurityReport:
    """Exact secrecy figures for one run; everything rational, no floats."""

    security_index: Fraction
    key_entropy: Fraction
    key_given_transcript: Fraction
    uniformity_deficit: Fraction  # key length minus key entropy
    method: str
    recoverability: Mapping[int, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.security_index == 0 and all(self.recoverability.values())


def security_index_rank(run: ProtocolRun) -> SecurityReport:
    """Security index via GF(2) ranks of the recorded linear maps."""
    key_rank = run.key_map.rank()
    transcript_rank = run.transcript_map.rank()
    joint_rank = run.key_map.stack(run.transcript_map).rank()
    key_given_transcript = Fraction(joint_rank - transcript_rank)
    key_length = len(run.key_bits)
    return SecurityReport(
        security_index=Fraction(key_length) - key_given_transcript,
        key_entropy=Fraction(key_rank),
        key_given_transcript=key_given_transcript,
        uniformity_deficit=Fraction(key_length - key_rank),
        method="rank",
    )


def _dyadic_entropy(counts: Counter, total_bits: int) -> Fraction:
    """Entropy of a distribution whose probabilities are counts / 2^total.

    Linear images of uniform bits have power-of-two fiber sizes, which keeps
    the entropy an exact rational.
    """
    weighted = 0
    for count in counts.values():
        log = count.bit_length() - 1
        if count != 1 << log:
            raise ArithmeticError(
                f"joint count {count} is not a power of two; "
                "the run's maps are not linear"
            )
        weighted += count * log
    return Fraction(total_bits) - Fraction(weighted, 1 << total_bits)


def security_index_bruteforce(run: ProtocolRun) -> SecurityReport:
    """Security index by enumerating every edge-bit assignment.

    Builds the exact joint distribution of (key, transcript) and computes
    the entropies directly.  Gray-code iteration keeps each step O(1): one
    edge bit flips, so the key/transcript images are updated by XOR.
    """
    edges = len(run.edge_order)
    if edges > BRUTEFORCE_EDGE_CAP:
        raise SizeLimitError(
            f"brute force is capped at {BRUTEFORCE_EDGE_CAP} edges, got {edges}"
        )
    key_columns = []
    transcript_columns = []
    for k in range(edges):
        bit = 1 << k
        key_columns.append(
            sum(1 << r for r, row in enumerate(run.key_map.rows) if row & bit)
        )
        transcript_columns.append(
            sum(1 << r for r, row in enumerate(run.transcript_map.rows) if row & bit)
        )

    joint: Counter = Counter()
    key_marginal: Counter = Counter()
    transcript_marginal: Counter = Counter()
    key_value = 0
    transcript_value = 0
    joint[(0, 0)] += 1
    key_marginal[0] += 1
    transcript_marginal[0] += 1
    gray = 0
    for step in range(1, 1 << edges):
        flipped = (step & -step).bit_length() - 1
        gray ^= 1 << flipped
        key_value ^= key_columns[flipped]
        transcript_value ^= transcript_columns[flipped]
        joint[(key_value, transcript_value)] += 1
        key_marginal[key_value] += 1
        transcript_marginal[transcript_value] += 1

    joint_entropy = _dyadic_entropy(joint, edges)
    transcript_entropy = _dyadic_entropy(transcript_marginal, edges)
    key_entropy = _dyadic_entropy(key_marginal, edges)
    key_given_transcript = joint_entropy - transcript_entropy
    key_length = len(run.key_bits)
    return SecurityReport(
        security_index=Fraction(key_length) - key_given_transcript,
        key_entropy=key_entropy,
        key_given_transcript=key_given_transcript,
        uniformity_deficit=Fraction(key_length) - key_entropy,
        method="bruteforce",
    )


def audit(
    run: ProtocolRun,
    strict: bool = False,
    bruteforce_cap: int = BRUTEFORCE_EDGE_CAP,
) -> SecurityReport:
    """Full audit: per-terminal recovery plus the exact security index.

    The rank method always runs; brute force cross-checks it whenever the
    edge count permits, and any disagreement is an internal error.  With
    ``strict`` the audit raises instead of returning a failing report.
    """
    rank_report = security_index_rank(run)
    method = "rank"
    if len(run.edge_order) <= bruteforce_cap:
        brute = security_index_bruteforce(run)
        if (brute.security_index != rank_report.security_index
                or brute.key_given_transcript != rank_report.key_given_transcript):
            raise AuditFailureError(
                f"method disagreement: rank says s={rank_report.security_index}, "
                f"brute force says s={brute.security_index}"
            )
        method = "rank+bruteforce"
    recoverability = {
        terminal: recover_key(run, terminal) == run.key_bits
        for terminal in run.target
    }
    report = replace(rank_report, method=method, recoverability=recoverability)
    if strict and not report.passed:
        failed = sorted(t for t, ok in recoverability.items() if not ok)
        raise AuditFailureError(
            f"audit failed: security index {report.security_index}, "
            f"terminals failing recovery: {failed}"
        )
    return report


# ---------------------------------------------------------------------------
# Fault injection (test surface: the audits must be falsifiable)
# ---------------------------------------------------------------------------


def flip_broadcast(run: ProtocolRun, index: int) -> ProtocolRun:
    """Copy of the run with one transcript bit flipped.

    The linear maps are left alone, so the tampering shows up as a recovery
    failure at the terminal informed through that broadcast (pick a
    broadcast whose ``informed_terminal`` is in the target set to make the
    audit fail; helpers outside the target never re-decode).
    """
    original = run.transcript[index]
    tampered = Broadcast(
        tree=original.tree,
        terminal=original.terminal,
        bit=original.bit ^ 1,
        support=original.support,
    )
    transcript = (run.transcript[:index] + (tampered,)
                  + run.transcript[index + 1:])
    return replace(run, transcript=transcript)


def leak_key_bit(run: ProtocolRun, key_index: int, broadcast_index: int) -> ProtocolRun:
    """Copy of the run with one key bit replaced by a broadcast bit (value
    and map row both), so the key visibly leaks into the transcript."""
    key_bits = list(run.key_bits)
    key_bits[key_index] = run.transcript[broadcast_index].bit
    key_rows = list(run.key_map.rows)
    key_rows[key_index] = run.transcript_map.rows[broadcast_index]
    return replace(
        run,
        key_bits=tuple(key_bits),
        key_map=Gf2Matrix(tuple(key_rows), run.key_map.ncols),
    )
