"""Reference implementation of the gestalt similarity, used as the
oracle for the production matcher. Written independently: direct
recursion on string slices and a brute-force longest-block scan, no
shared code with the package.

Frozen: do not optimize or restructure; tests rely on this being the
plainest possible statement of the semantics.
"""


def reference_longest_block(a: str, b: str) -> tuple[int, int, int]:
    """Longest common substring by scanning every (i, j) start pair.

    Ties resolve to the smallest start in ``a``, then the smallest
    start in ``b``, because the scan goes in that order and only a
    strictly longer block replaces the best one.
    """
    best_i = best_j = best_k = 0
    for i in range(len(a)):
        for j in range(len(b)):
            k = 0
            while i + k < len(a) and j + k < len(b) and a[i + k] == b[j + k]:
                k += 1
            if k > best_k:
                best_i, best_j, best_k = i, j, k
    return best_i, best_j, best_k


def reference_matched_length(a: str, b: str) -> int:
    i, j, k = reference_longest_block(a, b)
    if k == 0:
        return 0
    return (
        reference_matched_length(a[:i], b[:j])
        + k
        + reference_matched_length(a[i + k :], b[j + k :])
    )


def reference_similarity(a: str, b: str) -> float:
    if not a and not b:
        return 1.0
    return 2.0 * reference_matched_length(a, b) / (len(a) + len(b))
