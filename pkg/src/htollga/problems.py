"""The five benchmark problems: bit-string genotype, fitness functions,
instance types, random generators, file formats and initialization modes.

Orientation: the optimizers maximize.  MST and partition are minimization
problems; their evaluators return the raw minimized value, and the engine
works on the negated value internally.  All reporting shows raw values.

Bit indexing: index 0 is the leftmost character of any textual rendering,
and LeadingOnes counts from index 0.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels

ONEMAX = "onemax"
LEADINGONES = "leadingones"
JUMP = "jump"
MST = "mst"
PARTITION = "partition"

_KIND_CODES = {
    ONEMAX: kernels.ONEMAX,
    LEADINGONES: kernels.LEADINGONES,
    JUMP: kernels.JUMP,
    MST: kernels.MST,
    PARTITION: kernels.PARTITION,
}

_INT64_MAX = 2**63 - 1


class ParseError(ValueError):
    """Malformed instance file; the message names the offending line."""


class BitString:
    """Fixed-length binary search point, packed into uint64 words.

    Copy and Hamming distance are O(n/64); padding bits above ``n`` are kept
    zero so word-level scans stay valid.
    """

    __slots__ = ("n", "words")

    def __init__(self, n, words=None):
        if n < 1:
            raise ValueError(f"bit string length must be positive, got {n}")
        self.n = int(n)
        if words is None:
            self.words = np.zeros((self.n + 63) >> 6, dtype=np.uint64)
        else:
            self.words = words

    @classmethod
    def zeros(cls, n):
        return cls(n)

    @classmethod
    def ones(cls, n):
        x = cls(n)
        x.words[:] = np.uint64(0xFFFFFFFFFFFFFFFF)
        x._mask_padding()
        return x

    @classmethod
    def from01(cls, text):
        x = cls(len(text))
        for i, ch in enumerate(text):
            if ch == "1":
                kernels.bit_set(x.words, i, 1)
            elif ch != "0":
                raise ValueError(f"bit strings are rendered with 0/1, got {ch!r}")
        return x

    def _mask_padding(self):
        rem = self.n & 63
        if rem:
            self.words[-1] &= (np.uint64(1) << np.uint64(rem)) - np.uint64(1)

    def copy(self):
        return BitString(self.n, self.words.copy())

    def get(self, i):
        self._check_index(i)
        return int(kernels.bit_get(self.words, i))

    def set(self, i, value):
        self._check_index(i)
        kernels.bit_set(self.words, i, 1 if value else 0)

    def flip(self, i):
        self._check_index(i)
        kernels.bit_flip(self.words, i)

    def _check_index(self, i):
        if not 0 <= i < self.n:
            raise IndexError(f"bit index {i} out of range for length {self.n}")

    def count(self):
        return int(kernels.popcount_words(self.words))

    def hamming(self, other):
        if other.n != self.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")
        return int(kernels.hamming_words(self.words, other.words))

    def complement(self):
        out = BitString(self.n, ~self.words)
        out._mask_padding()
        return out

    def to01(self):
        return "".join("1" if kernels.bit_get(self.words, i) else "0"
                       for i in range(self.n))

    def __eq__(self, other):
        return (isinstance(other, BitString) and other.n == self.n
                and bool(np.array_equal(self.words, other.words)))

    def __len__(self):
        return self.n

    def __repr__(self):
        if self.n <= 80:
            return f"BitString({self.to01()!r})"
        return f"BitString(n={self.n}, ones={self.count()})"


@dataclass(frozen=True)
class JumpParams:
    """Jump gap width; the valley spans OneMax values n-k+1 .. n-1."""

    k: int

    def validate(self, n):
        if not 2 <= self.k <= n // 4:
            raise ValueError(f"jump parameter k must satisfy 2 <= k <= n/4, "
                             f"got k={self.k} with n={n}")


@dataclass(frozen=True)
class MstInstance:
    """Connected simple graph with positive integer edge weights.

    Bit i of a genotype selects the edge at index i; ``w_max`` is the total
    weight of all edges.
    """

    n_v: int
    edges: tuple  # of (a, b, w), 0-based, a < b

    def __post_init__(self):
        if self.n_v < 2:
            raise ValueError(f"need at least 2 vertices, got {self.n_v}")
        seen = set()
        for idx, (a, b, w) in enumerate(self.edges):
            if a == b:
                raise ValueError(f"edge {idx}: loop at vertex {a + 1}")
            if not (0 <= a < self.n_v and 0 <= b < self.n_v):
                raise ValueError(f"edge {idx}: endpoint out of range")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise ValueError(f"edge {idx}: parallel edge {a + 1}-{b + 1}")
            seen.add(key)
            if w < 1:
                raise ValueError(f"edge {idx}: weight must be >= 1, got {w}")
        if not self._connected():
            raise ValueError("graph is not connected: no spanning tree exists")
        wp1 = self.w_max + 1
        if wp1 * wp1 * self.n_v + wp1 * self.m + self.w_max > _INT64_MAX:
            raise ValueError("instance too heavy: fitness would overflow 64-bit range")

    def _connected(self):
        parent = list(range(self.n_v))

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for a, b, _ in self.edges:
            parent[find(a)] = find(b)
        return len({find(v) for v in range(self.n_v)}) == 1

    @property
    def m(self):
        return len(self.edges)

    @property
    def w_max(self):
        return sum(w for _, _, w in self.edges)


@dataclass(frozen=True)
class PartitionInstance:
    """Object weights, sorted non-increasing; bit i = 1 puts object i in bin 1."""

    weights: tuple

    def __post_init__(self):
        if not self.weights:
            raise ValueError("partition instance needs at least one object")
        prev = None
        for i, w in enumerate(self.weights):
            if w < 1:
                raise ValueError(f"object {i}: weight must be >= 1, got {w}")
            if prev is not None and w > prev:
                raise ValueError(f"object {i}: weights must be non-increasing")
            prev = w
        if self.total > _INT64_MAX:
            raise ValueError("total weight overflows 64-bit range")

    @property
    def n(self):
        return len(self.weights)

    @property
    def total(self):
        return sum(self.weights)


@dataclass(frozen=True)
class ProblemInstance:
    """One benchmark problem with a fixed genotype length.

    ``optimum_raw`` is the raw-orientation optimal fitness when known
    (always for OneMax/LeadingOnes/Jump, via oracles for MST, via oracles
    for partition up to n=24, else None and runs are budget-terminated).
    """

    kind: str
    dimension: int
    jump: JumpParams = None
    mst: MstInstance = None
    partition: PartitionInstance = None
    optimum_raw: int = None

    @property
    def minimizing(self):
        return self.kind in (MST, PARTITION)

    def raw_value(self, internal_fitness):
        """Map the engine's maximized fitness to the reported raw value."""
        return -internal_fitness if self.minimizing else internal_fitness

    def internal_optimum(self):
        if self.optimum_raw is None:
            return None
        return -self.optimum_raw if self.minimizing else self.optimum_raw

    def evaluate(self, x):
        """Raw fitness of ``x`` (maximized for OneMax/LeadingOnes/Jump,
        minimized for MST/partition)."""
        if x.n != self.dimension:
            raise ValueError(f"genotype length {x.n} != problem dimension {self.dimension}")
        payload = kernel_payload(self)
        uf = np.zeros(self.mst.n_v if self.kind == MST else 0, dtype=np.int64)
        fit, _aux = kernels.eval_full(payload, x.words, uf)
        return self.raw_value(int(fit))

    def is_optimal(self, x):
        if self.optimum_raw is None:
            return False
        return self.evaluate(x) == self.optimum_raw


def kernel_payload(problem):
    """The flat tuple handed to the jitted kernels."""
    kind = _KIND_CODES[problem.kind]
    n = problem.dimension
    empty = np.zeros(0, dtype=np.int64)
    k = problem.jump.k if problem.kind == JUMP else 0
    if problem.kind == MST:
        inst = problem.mst
        eu = np.array([a for a, _, _ in inst.edges], dtype=np.int64)
        ev = np.array([b for _, b, _ in inst.edges], dtype=np.int64)
        ew = np.array([w for _, _, w in inst.edges], dtype=np.int64)
        return (kind, n, 0, empty, 0, eu, ev, ew, inst.n_v, inst.w_max)
    if problem.kind == PARTITION:
        inst = problem.partition
        pw = np.array(inst.weights, dtype=np.int64)
        return (kind, n, 0, pw, inst.total, empty, empty, empty, 0, 0)
    return (kind, n, k, empty, 0, empty, empty, empty, 0, 0)


def make_onemax(n):
    return ProblemInstance(ONEMAX, n, optimum_raw=n)


def make_leadingones(n):
    return ProblemInstance(LEADINGONES, n, optimum_raw=n)


def make_jump(n, k):
    params = k if isinstance(k, JumpParams) else JumpParams(int(k))
    params.validate(n)
    return ProblemInstance(JUMP, n, jump=params, optimum_raw=n + params.k)


def make_mst_problem(inst):
    from . import oracles

    best_tree = oracles.kruskal_mst_weight(inst)
    wp1 = inst.w_max + 1
    optimum = wp1 * wp1 + wp1 * (inst.n_v - 1) + best_tree
    return ProblemInstance(MST, inst.m, mst=inst, optimum_raw=optimum)


# partition optima are precomputed at load time only up to this size;
# larger instances run to the evaluation budget
PARTITION_ORACLE_MAX_N = 24


def make_partition_problem(inst):
    from . import oracles

    optimum = None
    if inst.n <= PARTITION_ORACLE_MAX_N:
        optimum = oracles.partition_optimum(inst)
    return ProblemInstance(PARTITION, inst.n, partition=inst, optimum_raw=optimum)


def evaluate_onemax(x):
    """Number of one-bits."""
    return x.count()


def evaluate_leadingones(x):
    """Length of the prefix of ones starting at index 0."""
    return int(kernels.leading_ones_words(x.words, x.n))


def evaluate_jump(x, k):
    """OneMax plus gap k outside the valley, n - OneMax inside it."""
    kk = k.k if isinstance(k, JumpParams) else int(k)
    return int(kernels.jump_value(x.count(), x.n, kk))


def evaluate_mst(x, inst):
    """Connected-components / edge-count / weight penalty fitness
    (minimized; smaller is better)."""
    if x.n != inst.m:
        raise ValueError(f"genotype length {x.n} != edge count {inst.m}")
    payload = kernel_payload(ProblemInstance(MST, inst.m, mst=inst))
    uf = np.zeros(inst.n_v, dtype=np.int64)
    fit, _ = kernels.eval_full(payload, x.words, uf)
    return -int(fit)


def evaluate_partition(x, inst):
    """Weight of the heavier bin (minimized)."""
    if x.n != inst.n:
        raise ValueError(f"genotype length {x.n} != object count {inst.n}")
    payload = kernel_payload(ProblemInstance(PARTITION, inst.n, partition=inst))
    fit, _ = kernels.eval_full(payload, x.words, np.zeros(0, dtype=np.int64))
    return -int(fit)


# --- initialization -------------------------------------------------------

UNIFORM = "uniform"
JUMP_LOCAL_OPTIMUM = "jump_local_optimum"
FIXED_DISTANCE = "fixed_distance"

_ALL_ONES_OPT = (ONEMAX, LEADINGONES, JUMP)


@dataclass(frozen=True)
class InitMode:
    mode: str
    distance: int = None

    def label(self):
        if self.mode == FIXED_DISTANCE:
            return f"fixed_distance({self.distance})"
        return self.mode


def init_point(mode, problem, rng):
    """Starting point for a run.

    uniform: fair coin per bit.  jump_local_optimum: exactly n-k ones at
    random positions (Jump only).  fixed_distance(d): exactly n-d ones at
    random positions (problems whose optimum is the all-ones string only).
    """
    if isinstance(mode, str):
        mode = InitMode(mode)
    n = problem.dimension
    if mode.mode == UNIFORM:
        x = BitString(n)
        kernels.fill_random_words(rng, x.words, n)
        return x
    if mode.mode == JUMP_LOCAL_OPTIMUM:
        if problem.kind != JUMP:
            raise ValueError(f"jump_local_optimum init requires a jump problem, "
                             f"got {problem.kind}")
        return _ones_minus(n, problem.jump.k, rng)
    if mode.mode == FIXED_DISTANCE:
        if problem.kind not in _ALL_ONES_OPT:
            raise ValueError(f"fixed_distance init requires an all-ones-optimum "
                             f"problem, got {problem.kind}")
        d = mode.distance
        if d is None or not 0 <= d <= n:
            raise ValueError(f"fixed_distance needs a distance in [0..n], got {d}")
        return _ones_minus(n, d, rng)
    raise ValueError(f"unknown init mode {mode.mode!r}")


def _ones_minus(n, d, rng):
    """All-ones with d uniformly chosen distinct positions cleared."""
    x = BitString.ones(n)
    if d == 0:
        return x
    pos = np.zeros(n, dtype=np.int64)
    marks = np.zeros(n, dtype=np.int64)
    kernels.floyd_sample(rng, n, d, pos, marks, 1)
    for t in range(d):
        kernels.bit_set(x.words, int(pos[t]), 0)
    return x


# --- random instance generators ------------------------------------------


def gen_random_mst_instance(n_v, m, max_weight, rng):
    """Connected simple graph: a uniform random spanning tree first, then
    extra distinct edges; weights uniform in [1..max_weight]."""
    if n_v < 2:
        raise ValueError(f"need at least 2 vertices, got {n_v}")
    max_edges = n_v * (n_v - 1) // 2
    if m < n_v - 1:
        raise ValueError(f"m={m} cannot connect {n_v} vertices (need >= {n_v - 1})")
    if m > max_edges:
        raise ValueError(f"m={m} exceeds the {max_edges} possible simple edges")
    if max_weight < 1:
        raise ValueError(f"max_weight must be >= 1, got {max_weight}")
    chosen = []
    seen = set()
    # random tree: attach each new vertex to a uniformly chosen earlier one
    order = list(range(n_v))
    _shuffle(order, rng)
    for i in range(1, n_v):
        a = order[i]
        b = order[int(kernels.randint_below(rng, i))]
        key = (min(a, b), max(a, b))
        seen.add(key)
        chosen.append(key)
    while len(chosen) < m:
        a = int(kernels.randint_below(rng, n_v))
        b = int(kernels.randint_below(rng, n_v))
        if a == b:
            continue
        key = (min(a, b), max(a, b))
        if key in seen:
            continue
        seen.add(key)
        chosen.append(key)
    edges = tuple((a, b, 1 + int(kernels.randint_below(rng, max_weight)))
                  for a, b in chosen)
    return MstInstance(n_v, edges)


def gen_random_partition_instance(n, max_weight, rng):
    """n objects with weights uniform in [1..max_weight], sorted."""
    if n < 1:
        raise ValueError(f"need at least one object, got {n}")
    if max_weight < 1:
        raise ValueError(f"max_weight must be >= 1, got {max_weight}")
    w = sorted((1 + int(kernels.randint_below(rng, max_weight)) for _ in range(n)),
               reverse=True)
    return PartitionInstance(tuple(w))


def _shuffle(seq, rng):
    for i in range(len(seq) - 1, 0, -1):
        j = int(kernels.randint_below(rng, i + 1))
        seq[i], seq[j] = seq[j], seq[i]


# --- instance files --------------------------------------------------------
# MST file: line 1 "n_v m"; then m lines "a b w", 1-based indices a < b,
# weight w >= 1; the edge's bit index is its (0-based) line order.
# Partition file: line 1 "n"; line 2: n space-separated non-increasing ints.


def save_instance(inst, path):
    if isinstance(inst, ProblemInstance):
        if inst.kind == MST:
            inst = inst.mst
        elif inst.kind == PARTITION:
            inst = inst.partition
        else:
            raise ValueError(f"{inst.kind} problems have no instance file format")
    with open(path, "w", encoding="utf-8") as fh:
        if isinstance(inst, MstInstance):
            fh.write(f"{inst.n_v} {inst.m}\n")
            for a, b, w in inst.edges:
                lo, hi = min(a, b) + 1, max(a, b) + 1
                fh.write(f"{lo} {hi} {w}\n")
        elif isinstance(inst, PartitionInstance):
            fh.write(f"{inst.n}\n")
            fh.write(" ".join(str(w) for w in inst.weights) + "\n")
        else:
            raise ValueError(f"cannot save {type(inst).__name__}")


def load_instance(path):
    """Load an MST or partition instance file into a ProblemInstance.

    The two formats are distinguished by the header: two integers for MST,
    one for partition.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    rows = [(no, line.split()) for no, line in enumerate(lines, start=1)
            if line.strip()]
    if not rows:
        raise ParseError(f"{path}: line 1: empty instance file")
    header_no, header = rows[0]
    body = rows[1:]
    try:
        header_ints = [int(tok) for tok in header]
    except ValueError:
        raise ParseError(f"{path}: line {header_no}: header must be integers") from None
    if len(header_ints) == 2:
        return _load_mst(path, header_no, header_ints, body)
    if len(header_ints) == 1:
        return _load_partition(path, header_no, header_ints[0], body)
    raise ParseError(f"{path}: line {header_no}: header must be 'n_v m' or 'n'")


def _load_mst(path, header_no, header, body):
    n_v, m = header
    if len(body) != m:
        raise ParseError(f"{path}: expected {m} edge lines, found {len(body)}")
    edges = []
    seen = set()
    for no, toks in body:
        if len(toks) != 3:
            raise ParseError(f"{path}: line {no}: expected 'a b w'")
        try:
            a, b, w = (int(t) for t in toks)
        except ValueError:
            raise ParseError(f"{path}: line {no}: expected integers") from None
        if a == b:
            raise ParseError(f"{path}: line {no}: loop edge {a} {b}")
        if not (1 <= a < b <= n_v):
            raise ParseError(f"{path}: line {no}: endpoints must satisfy "
                             f"1 <= a < b <= {n_v}")
        if w < 1:
            raise ParseError(f"{path}: line {no}: weight must be >= 1")
        if (a, b) in seen:
            raise ParseError(f"{path}: line {no}: duplicate edge {a} {b}")
        seen.add((a, b))
        edges.append((a - 1, b - 1, w))
    try:
        inst = MstInstance(n_v, tuple(edges))
    except ValueError as exc:
        first = body[0][0] if body else header_no
        raise ParseError(f"{path}: line {first}: {exc}") from None
    return make_mst_problem(inst)


def _load_partition(path, header_no, n, body):
    if len(body) != 1:
        raise ParseError(f"{path}: expected one weight line, found {len(body)}")
    no, toks = body[0]
    if len(toks) != n:
        raise ParseError(f"{path}: line {no}: expected {n} weights, found {len(toks)}")
    try:
        weights = tuple(int(t) for t in toks)
    except ValueError:
        raise ParseError(f"{path}: line {no}: expected integers") from None
    try:
        inst = PartitionInstance(weights)
    except ValueError as exc:
        raise ParseError(f"{path}: line {no}: {exc}") from None
    return make_partition_problem(inst)
