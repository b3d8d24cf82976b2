"""
Sequence alignment helpers for statement merging.

An LCS over hashable keys anchors two sequences; the super-sequence keeps
both in order. Artefact ids repeated in a merged block are told apart by
their duplicate index.
"""
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from src.models.artefact import ArtefactId

Slot = Tuple[Optional[int], Optional[int]]


def lcs_pairs(s1: Sequence[Hashable], s2: Sequence[Hashable]) -> List[Tuple[int, int]]:
    """
    Longest common subsequence as (index in s1, index in s2) pairs.

    Forward reconstruction over a suffix table: equal heads always match,
    and on a tie the head of s1 is skipped.
    """
    n, m = len(s1), len(s2)
    table = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        row, below = table[i], table[i + 1]
        for j in range(m - 1, -1, -1):
            if s1[i] == s2[j]:
                row[j] = below[j + 1] + 1
            else:
                row[j] = below[j] if below[j] >= row[j + 1] else row[j + 1]
    pairs = []
    i = j = 0
    while i < n and j < m:
        if s1[i] == s2[j]:
            pairs.append((i, j))
            i += 1
            j += 1
        elif table[i + 1][j] >= table[i][j + 1]:
            i += 1
        else:
            j += 1
    return pairs


def super_sequence_slots(s1: Sequence[Hashable], s2: Sequence[Hashable]) -> List[Slot]:
    """
    Positions of the super-sequence of s1 and s2.

    Each slot is (i, j) for an LCS anchor, (i, None) for s1-only content and
    (None, j) for s2-only content. Between consecutive anchors the gap of s1
    comes before the gap of s2; after the last anchor the rest of s1 comes
    before the rest of s2.
    """
    slots: List[Slot] = []
    prev_i = prev_j = -1
    for i, j in lcs_pairs(s1, s2):
        slots.extend((k, None) for k in range(prev_i + 1, i))
        slots.extend((None, k) for k in range(prev_j + 1, j))
        slots.append((i, j))
        prev_i, prev_j = i, j
    slots.extend((k, None) for k in range(prev_i + 1, len(s1)))
    slots.extend((None, k) for k in range(prev_j + 1, len(s2)))
    return slots


def super_sequence(s1: Sequence[Hashable], s2: Sequence[Hashable]) -> list:
    """Super-sequence of two plain sequences; anchors are taken from s1"""
    return [s1[i] if i is not None else s2[j] for i, j in super_sequence_slots(s1, s2)]


def mint_duplicates(seq: Sequence[ArtefactId], keep: Sequence[bool] = None) -> List[ArtefactId]:
    """
    Give repeated (base, twin) pairs distinct duplicate ids.

    Ids flagged in `keep` are already minted and never change; every other
    occurrence gets one more than the highest dup seen for its pair, so on a
    fresh sequence the k-th occurrence gets dup k.
    """
    keep = list(keep) if keep is not None else [False] * len(seq)
    highest: Dict[Tuple[int, int], int] = {}
    for artefact_id, kept in zip(seq, keep):
        if kept:
            highest[artefact_id.key] = max(highest.get(artefact_id.key, 0), artefact_id.dup)
    result = []
    for artefact_id, kept in zip(seq, keep):
        if kept:
            result.append(artefact_id)
        else:
            dup = highest.get(artefact_id.key, 0) + 1
            highest[artefact_id.key] = dup
            result.append(artefact_id.with_dup(dup))
    return result


def super_sequence_ids(s1: Sequence[ArtefactId], s2: Sequence[ArtefactId]) -> List[ArtefactId]:
    """
    Super-sequence of an SPL statement sequence and a product's.

    Alignment matches on (base, twin); s1's ids are kept and s2-only entries
    are minted as duplicates where their pair already occurs.
    """
    slots = super_sequence_slots([a.key for a in s1], [a.key for a in s2])
    merged = [s1[i] if i is not None else s2[j] for i, j in slots]
    return mint_duplicates(merged, [i is not None for i, _ in slots])
