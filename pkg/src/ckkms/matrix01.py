"""Square 0-1 matrices: admissibility structure and Kronecker products.

A matrix is in the working class when it is nondegenerate (no zero row or
column), irreducible (its digraph is strongly connected), and not a
permutation matrix.  Indices are 1-based at the API boundary to match the
generator labels s_1..s_n.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionError, DomainError, ResourceLimitError

DEFAULT_DIMENSION_CAP = 4096


@dataclass(frozen=True)
class ZeroOneMatrix:
    rows: tuple  # tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        n = len(rows)
        if n < 2:
            raise DimensionError("matrices must be at least 2x2")
        for r in rows:
            if len(r) != n:
                raise DimensionError("matrix must be square")
            for v in r:
                if v not in (0, 1):
                    raise DomainError(f"entries must be 0 or 1, got {v!r}")

    @property
    def n(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> int:
        """1-based entry access."""
        return self.rows[i - 1][j - 1]

    def row_set(self, i: int) -> frozenset:
        """Column indices j with A[i][j] = 1 (1-based)."""
        return frozenset(j + 1 for j, v in enumerate(self.rows[i - 1]) if v)

    @staticmethod
    def full(n: int) -> "ZeroOneMatrix":
        """The all-ones matrix F_n."""
        return ZeroOneMatrix(tuple(tuple(1 for _ in range(n)) for _ in range(n)))

    def is_full(self) -> bool:
        return all(all(v == 1 for v in r) for r in self.rows)

    def to_json(self) -> dict:
        return {"n": self.n, "rows": [list(r) for r in self.rows]}

    @staticmethod
    def from_json(obj: dict) -> "ZeroOneMatrix":
        if not isinstance(obj, dict) or "rows" not in obj:
            raise DomainError(f"malformed matrix JSON: {obj!r}")
        m = ZeroOneMatrix(tuple(tuple(r) for r in obj["rows"]))
        if "n" in obj and obj["n"] != m.n:
            raise DimensionError("matrix JSON 'n' does not match row count")
        return m


def is_nondegenerate(a: ZeroOneMatrix) -> bool:
    """No zero row and no zero column."""
    if any(not any(r) for r in a.rows):
        return False
    return all(any(a.rows[i][j] for i in range(a.n)) for j in range(a.n))


def _strongly_connected(rows: tuple) -> bool:
    """Strong connectivity of the digraph i -> j when rows[i][j] = 1.

    Iterative Tarjan; the matrix is strongly connected exactly when the
    first component found covers every vertex and no vertex is unreachable.
    """
    n = len(rows)
    adj = [[j for j in range(n) if rows[i][j]] for i in range(n)]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    components = 0

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for k in range(pi, len(adj[v])):
                w = adj[v][k]
                if index[w] == -1:
                    work[-1] = (v, k + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                components += 1
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    if w == v:
                        break
    return components == 1


def is_irreducible(a: ZeroOneMatrix) -> bool:
    return _strongly_connected(a.rows)


def is_permutation(a: ZeroOneMatrix) -> bool:
    return all(sum(r) == 1 for r in a.rows) and all(
        sum(a.rows[i][j] for i in range(a.n)) == 1 for j in range(a.n)
    )


def in_class_cdm(a: ZeroOneMatrix) -> bool:
    """Nondegenerate, irreducible, and not a permutation matrix."""
    return is_nondegenerate(a) and is_irreducible(a) and not is_permutation(a)


def kronecker_matrix(a: ZeroOneMatrix, b: ZeroOneMatrix,
                     dimension_cap: int = DEFAULT_DIMENSION_CAP) -> ZeroOneMatrix:
    """Kronecker product; block index u = m(i-1)+j for (i, j)."""
    n, m = a.n, b.n
    if n * m > dimension_cap:
        raise ResourceLimitError(
            f"Kronecker dimension {n * m} exceeds the cap {dimension_cap}")
    rows = tuple(
        tuple(a.rows[i][ip] * b.rows[j][jp] for ip in range(n) for jp in range(m))
        for i in range(n) for j in range(m)
    )
    return ZeroOneMatrix(rows)
