"""Exact graded-commutative algebra over F_p.

Generator tables, sparse monomials, elements with Koszul-sign products,
tensor products of graded algebras, dense linear algebra mod p, chain
complexes on a degree window, and a brute-force normalized Hochschild
complex used as an independent oracle.

All values are immutable after construction and every operation is a pure
function, so objects may be shared across parallel work.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigError,
    ContractViolation,
    ResolutionError,
    ResourceBudgetError,
)

EVEN = "even"
ODD = "odd"


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def validate_odd_prime(p):
    """Reject p = 2 and non-primes at configuration time."""
    if not isinstance(p, int) or not is_prime(p):
        raise ConfigError(f"p = {p!r} is not prime")
    if p == 2:
        raise ConfigError("p = 2 is not supported; only odd primes")
    return p


def memory_budget_bytes():
    """Memory budget in bytes, configurable via THHTATE_MEMORY_BUDGET_MB."""
    raw = os.environ.get("THHTATE_MEMORY_BUDGET_MB", "1024")
    try:
        mb = int(raw)
    except ValueError:
        raise ConfigError(f"THHTATE_MEMORY_BUDGET_MB = {raw!r} is not an integer")
    return mb * 1024 * 1024


def check_budget(item_count, bytes_per_item=256, what="basis"):
    need = item_count * bytes_per_item
    cap = memory_budget_bytes()
    if need > cap:
        raise ResourceBudgetError(
            f"{what} needs about {need} bytes but the budget is {cap};"
            " raise THHTATE_MEMORY_BUDGET_MB or shrink the window"
        )


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    parity: str


class GeneratorTable:
    """Ordered table of graded generators over F_p.

    Parity must match degree parity; odd generators are exterior.  At most
    one designated Laurent generator may carry negative exponents.
    """

    def __init__(self, p, entries, laurent=None):
        self.p = validate_odd_prime(p)
        self.entries = []
        self._index = {}
        for entry in entries:
            if isinstance(entry, Generator):
                gen = entry
            else:
                gen = Generator(*entry)
            if gen.parity not in (EVEN, ODD):
                raise ConfigError(f"bad parity {gen.parity!r} for {gen.name}")
            if gen.degree % 2 != (0 if gen.parity == EVEN else 1) % 2:
                raise ConfigError(
                    f"generator {gen.name} has degree {gen.degree} but parity {gen.parity}"
                )
            if gen.name in self._index:
                raise ConfigError(f"duplicate generator name {gen.name}")
            self._index[gen.name] = len(self.entries)
            self.entries.append(gen)
        if laurent is not None and laurent not in self._index:
            raise ResolutionError(f"Laurent generator {laurent!r} not in table")
        if laurent is not None and self.entries[self._index[laurent]].parity == ODD:
            raise ConfigError("the Laurent generator must be even")
        self.laurent = laurent
        self._laurent_pos = None if laurent is None else self._index[laurent]

    def __len__(self):
        return len(self.entries)

    def __contains__(self, name):
        return name in self._index

    def names(self):
        return [g.name for g in self.entries]

    def position(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise ResolutionError(f"unknown generator {name!r}")

    def generator(self, name):
        return self.entries[self.position(name)]

    def degree_at(self, pos):
        return self.entries[pos].degree

    def parity_at(self, pos):
        return self.entries[pos].parity

    def name_at(self, pos):
        return self.entries[pos].name

    def is_laurent_pos(self, pos):
        return pos == self._laurent_pos

    def extended(self, new_entries, laurent=None):
        """New table with extra generators appended; keeps existing order."""
        entries = list(self.entries) + [
            e if isinstance(e, Generator) else Generator(*e) for e in new_entries
        ]
        return GeneratorTable(self.p, entries, laurent=laurent or self.laurent)


# A monomial is a tuple of (position, exponent) pairs, sorted by position,
# with no zero exponents.  () is the unit monomial.

MONO_ONE = ()


def mono_from_pairs(pairs, table):
    items = []
    for pos, e in sorted(pairs):
        if e == 0:
            continue
        if e < 0 and not table.is_laurent_pos(pos):
            raise ResolutionError(
                f"negative exponent on non-Laurent generator {table.name_at(pos)}"
            )
        if table.parity_at(pos) == ODD and e > 1:
            return None
        items.append((pos, e))
    return tuple(items)


def mono_from_names(table, exps):
    """Build a monomial from a {name: exponent} mapping; None if it is zero."""
    return mono_from_pairs(((table.position(n), e) for n, e in exps.items()), table)


def mono_degree(mono, table):
    return sum(e * table.degree_at(pos) for pos, e in mono)


def mono_odd_positions(mono, table):
    return [pos for pos, e in mono if table.parity_at(pos) == ODD]


def mono_mul(m1, m2, table):
    """Product of monomials with Koszul sign.  Returns (sign, mono) or (0, None)."""
    o1 = mono_odd_positions(m1, table)
    o2 = mono_odd_positions(m2, table)
    inversions = 0
    if o1 and o2:
        j = 0
        for a in o1:
            while j < len(o2) and o2[j] < a:
                j += 1
            inversions += j
        # positions equal to a also square to zero; caught by the merge below
    merged = {}
    for pos, e in m1:
        merged[pos] = merged.get(pos, 0) + e
    for pos, e in m2:
        merged[pos] = merged.get(pos, 0) + e
    items = []
    for pos in sorted(merged):
        e = merged[pos]
        if e == 0:
            continue
        if table.parity_at(pos) == ODD and e > 1:
            return 0, None
        items.append((pos, e))
    sign = -1 if inversions % 2 else 1
    return sign, tuple(items)


def mono_sort_key(mono, table):
    """Graded-lexicographic key: degree first, then (name, exponent) pairs."""
    return (mono_degree(mono, table), tuple((table.name_at(p), e) for p, e in mono))


def mono_to_str(mono, table):
    if not mono:
        return "1"
    parts = []
    for pos, e in mono:
        name = table.name_at(pos)
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


class Element:
    """F_p-linear combination of monomials over a generator table."""

    __slots__ = ("table", "terms")

    def __init__(self, table, terms=None):
        self.table = table
        clean = {}
        p = table.p
        for mono, c in (terms or {}).items():
            c %= p
            if c:
                clean[mono] = c
        self.terms = clean

    @classmethod
    def zero(cls, table):
        return cls(table)

    @classmethod
    def unit(cls, table, coeff=1):
        return cls(table, {MONO_ONE: coeff})

    @classmethod
    def gen(cls, table, name, exp=1, coeff=1):
        mono = mono_from_names(table, {name: exp})
        if mono is None:
            return cls.zero(table)
        return cls(table, {mono: coeff})

    @classmethod
    def from_mono(cls, table, mono, coeff=1):
        return cls(table, {mono: coeff})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.table is other.table and self.terms == other.terms

    def __ne__(self, other):
        return not self.__eq__(other)

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return Element(self.table, terms)

    def __sub__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) - c
        return Element(self.table, terms)

    def __neg__(self):
        return Element(self.table, {m: -c for m, c in self.terms.items()})

    def scaled(self, c):
        return Element(self.table, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scaled(other)
        self._check(other)
        table = self.table
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                sign, m = mono_mul(m1, m2, table)
                if sign == 0:
                    continue
                terms[m] = terms.get(m, 0) + sign * c1 * c2
        return Element(table, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers of elements are not defined")
        out = Element.unit(self.table)
        for _ in range(n):
            out = out * self
        return out

    def _check(self, other):
        if self.table is not other.table:
            raise ResolutionError("elements live over different generator tables")

    def is_homogeneous(self):
        degs = {mono_degree(m, self.table) for m in self.terms}
        return len(degs) <= 1

    def degree(self):
        """Degree of a homogeneous element; None for zero."""
        degs = {mono_degree(m, self.table) for m in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise ContractViolation(f"element is not homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def sorted_terms(self):
        table = self.table
        return sorted(self.terms.items(), key=lambda mc: mono_sort_key(mc[0], table))

    def to_str(self):
        """Canonical text form, `c*g1^e1*... + ...` with monomials in canonical order."""
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            if mono == MONO_ONE:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono_to_str(mono, self.table))
            else:
                parts.append(f"{c}*{mono_to_str(mono, self.table)}")
        return " + ".join(parts)

    def to_json(self):
        """Canonical JSON form: a list of {coeff, exps} records."""
        out = []
        for mono, c in self.sorted_terms():
            out.append(
                {"coeff": int(c), "exps": {self.table.name_at(p): int(e) for p, e in mono}}
            )
        return out

    def __repr__(self):
        return f"<Element {self.to_str()}>"


def element_from_json(table, data):
    terms = {}
    for rec in data:
        mono = mono_from_names(table, rec["exps"])
        if mono is None:
            continue
        terms[mono] = terms.get(mono, 0) + rec["coeff"]
    return Element(table, terms)


def multiply(a, b, table=None):
    """Graded-commutative product; `table` is checked against the operands."""
    if table is not None and (a.table is not table or b.table is not table):
        raise ResolutionError("operands do not live over the supplied table")
    return a * b


class TensorElement:
    """F_p-linear combination of two-sided tensors over a pair of tables."""

    __slots__ = ("left_table", "right_table", "terms")

    def __init__(self, left_table, right_table, terms=None):
        if left_table.p != right_table.p:
            raise ConfigError("tensor factors must share the prime")
        self.left_table = left_table
        self.right_table = right_table
        p = left_table.p
        clean = {}
        for key, c in (terms or {}).items():
            c %= p
            if c:
                clean[key] = c
        self.terms = clean

    @classmethod
    def zero(cls, lt, rt):
        return cls(lt, rt)

    @classmethod
    def unit(cls, lt, rt, coeff=1):
        return cls(lt, rt, {(MONO_ONE, MONO_ONE): coeff})

    @classmethod
    def of(cls, left_elt, right_elt):
        terms = {}
        for ml, cl in left_elt.terms.items():
            for mr, cr in right_elt.terms.items():
                terms[(ml, mr)] = terms.get((ml, mr), 0) + cl * cr
        return cls(left_elt.table, right_elt.table, terms)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (
            self.left_table is other.left_table
            and self.right_table is other.right_table
            and self.terms == other.terms
        )

    def __add__(self, other):
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return TensorElement(self.left_table, self.right_table, terms)

    def __sub__(self, other):
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) - c
        return TensorElement(self.left_table, self.right_table, terms)

    def scaled(self, c):
        return TensorElement(
            self.left_table, self.right_table, {k: c * v for k, v in self.terms.items()}
        )

    def __mul__(self, other):
        """Product with the Koszul sign (-1)^{|x||b|} for (a⊗x)(b⊗y)."""
        lt, rt = self.left_table, self.right_table
        terms = {}
        for (a, x), c1 in self.terms.items():
            dx = mono_degree(x, rt)
            for (b, y), c2 in other.terms.items():
                db = mono_degree(b, lt)
                sign = -1 if (dx % 2) and (db % 2) else 1
                s1, ab = mono_mul(a, b, lt)
                if s1 == 0:
                    continue
                s2, xy = mono_mul(x, y, rt)
                if s2 == 0:
                    continue
                key = (ab, xy)
                terms[key] = terms.get(key, 0) + sign * s1 * s2 * c1 * c2
        return TensorElement(lt, rt, terms)

    def __pow__(self, n):
        out = TensorElement.unit(self.left_table, self.right_table)
        for _ in range(n):
            out = out * self
        return out

    def map_left(self, fn, new_left_table=None):
        """Substitute each left monomial by fn(mono): an Element.  Degree-preserving."""
        lt = new_left_table
        terms = {}
        for (a, x), c in self.terms.items():
            img = fn(a)
            if lt is None:
                lt = img.table
            for m, cm in img.terms.items():
                key = (m, x)
                terms[key] = terms.get(key, 0) + c * cm
        return TensorElement(lt or self.left_table, self.right_table, terms)

    def map_right(self, fn, new_right_table=None):
        rt = new_right_table
        terms = {}
        for (a, x), c in self.terms.items():
            img = fn(x)
            if rt is None:
                rt = img.table
            for m, cm in img.terms.items():
                key = (a, m)
                terms[key] = terms.get(key, 0) + c * cm
        return TensorElement(self.left_table, rt or self.right_table, terms)

    def sorted_terms(self):
        lt, rt = self.left_table, self.right_table
        return sorted(
            self.terms.items(),
            key=lambda kv: (mono_sort_key(kv[0][0], lt), mono_sort_key(kv[0][1], rt)),
        )

    def to_str(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, x), c in self.sorted_terms():
            left = mono_to_str(a, self.left_table)
            right = mono_to_str(x, self.right_table)
            body = f"{left} (x) {right}"
            parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)

    def __repr__(self):
        return f"<Tensor {self.to_str()}>"


# ---------------------------------------------------------------------------
# dense linear algebra mod p


def _as_array(mat, p):
    a = np.array(mat, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("expected a 2-d array")
    return a


def rref_mod_p(mat, p):
    """Reduced row echelon form over F_p.  Deterministic pivot choice
    (first nonzero row), vectorized elimination."""
    a = _as_array(mat, p).copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        factors = a[:, c].copy()
        factors[r] = 0
        if np.any(factors):
            a -= np.outer(factors, a[r])
            a %= p
        pivots.append(c)
        r += 1
    return a % p, pivots


def rank_mod_p(mat, p):
    if mat.size == 0:
        return 0
    _, pivots = rref_mod_p(mat, p)
    return len(pivots)


def nullspace_mod_p(mat, p):
    """Rows of the returned matrix are a basis of the kernel (column vectors of mat)."""
    a = _as_array(mat, p)
    rows, cols = a.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    r, pivots = rref_mod_p(a, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-int(r[i, fc])) % p
    return basis


def row_reduce_stack(rows_list, p, ncols):
    """Greedy independent subset of the given row vectors, in order."""
    kept = []
    echelon = np.zeros((0, ncols), dtype=np.int64)
    rank = 0
    for v in rows_list:
        stacked = np.vstack([echelon, np.asarray(v, dtype=np.int64).reshape(1, -1)])
        r, piv = rref_mod_p(stacked, p)
        if len(piv) > rank:
            rank = len(piv)
            echelon = r[:rank]
            kept.append(v)
    return kept, echelon


def in_row_space(vec, echelon, p):
    if echelon.shape[0] == 0:
        return not np.any(np.asarray(vec) % p)
    stacked = np.vstack([echelon, np.asarray(vec, dtype=np.int64).reshape(1, -1)])
    return rank_mod_p(stacked, p) == echelon.shape[0]


class LinearMapMatrix:
    """Matrix of a linear map with explicit ordered monomial bases."""

    def __init__(self, domain, codomain, p, entries=None):
        self.domain = list(domain)
        self.codomain = list(codomain)
        self.p = p
        self._cod_index = {m: i for i, m in enumerate(self.codomain)}
        if entries is None:
            self.mat = np.zeros((len(self.codomain), len(self.domain)), dtype=np.int64)
        else:
            self.mat = _as_array(entries, p)
            if self.mat.shape != (len(self.codomain), len(self.domain)):
                raise ContractViolation(
                    f"matrix shape {self.mat.shape} does not match bases "
                    f"({len(self.codomain)}, {len(self.domain)})"
                )

    @classmethod
    def from_images(cls, domain, codomain, p, images):
        """images[j] is a dict codomain-monomial -> coefficient for domain[j]."""
        m = cls(domain, codomain, p)
        for j, img in enumerate(images):
            for mono, c in img.items():
                i = m._cod_index.get(mono)
                if i is None:
                    raise ContractViolation(f"image monomial {mono} not in codomain basis")
                m.mat[i, j] = c % p
        return m

    def compose(self, other):
        """self after other."""
        if other.codomain != self.domain:
            raise ContractViolation("bases do not match for composition")
        return LinearMapMatrix(
            other.domain, self.codomain, self.p, (self.mat @ other.mat) % self.p
        )

    def __eq__(self, other):
        return (
            isinstance(other, LinearMapMatrix)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and np.array_equal(self.mat % self.p, other.mat % other.p)
        )

    def is_zero(self):
        return not np.any(self.mat % self.p)

    def rank(self):
        return rank_mod_p(self.mat, self.p)

    def apply_coords(self, vec):
        return (self.mat @ (np.asarray(vec, dtype=np.int64) % self.p)) % self.p


@dataclass
class HomologyDegree:
    degree: int
    representatives: list  # coordinate vectors of chosen cycles
    kernel_basis: object
    image_basis: object

    @property
    def dim(self):
        return len(self.representatives)


class ChainComplexWindow:
    """Graded pieces on an integer window with differentials lowering degree by 1.

    Missing differentials are treated as zero maps; callers who need edge
    correctness must supply windows wide enough for their question.
    """

    def __init__(self, p, bases, diffs):
        self.p = p
        self.bases = dict(bases)
        self.diffs = {}
        for n, mat in diffs.items():
            a = _as_array(mat, p)
            lower = len(self.bases.get(n - 1, []))
            here = len(self.bases.get(n, []))
            if a.shape != (lower, here):
                raise ContractViolation(
                    f"differential at degree {n} has shape {a.shape}, expected {(lower, here)}"
                )
            self.diffs[n] = a

    def diff(self, n):
        if n in self.diffs:
            return self.diffs[n]
        lower = len(self.bases.get(n - 1, []))
        here = len(self.bases.get(n, []))
        return np.zeros((lower, here), dtype=np.int64)

    def check_dd(self):
        for n in sorted(self.bases):
            if (n - 1) not in self.bases or (n + 1) not in self.bases:
                continue
            comp = (self.diff(n) @ self.diff(n + 1)) % self.p
            if np.any(comp):
                raise ContractViolation(f"d∘d is nonzero into degree {n - 1} (from {n + 1})")

    def homology(self):
        """Per-degree homology with chosen representative cycles."""
        self.check_dd()
        out = []
        for n in sorted(self.bases):
            dim_n = len(self.bases[n])
            d_out = self.diff(n)
            d_in = self.diff(n + 1)
            cycles = nullspace_mod_p(d_out, self.p)
            img, img_pivots = rref_mod_p(d_in.T, self.p)
            img_rank = len(img_pivots)
            ech = img[:img_rank] if img.size else np.zeros((0, dim_n), dtype=np.int64)
            rank = img_rank
            reps = []
            for v in cycles:
                stacked = np.vstack([ech, v.reshape(1, -1)])
                newech, newpiv = rref_mod_p(stacked, self.p)
                if len(newpiv) > rank:
                    reps.append(v)
                    rank = len(newpiv)
                    ech = newech[:rank]
            if cycles.shape[0] - img_rank != len(reps):
                raise ContractViolation(
                    f"rank bookkeeping failed at degree {n}: "
                    f"{cycles.shape[0]} - {img_rank} != {len(reps)}"
                )
            out.append(HomologyDegree(n, reps, cycles, img[:img_rank]))
        return out


# ---------------------------------------------------------------------------
# brute-force normalized Hochschild complex (oracle)


def monomials_of_degree(table, degree, positions=None):
    """All monomials of the exact degree with non-negative exponents."""
    if positions is None:
        positions = [i for i in range(len(table)) if not table.is_laurent_pos(i)]
    if degree < 0:
        return []
    if degree == 0:
        return [MONO_ONE]
    out = []

    def rec(idx, remaining, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        if idx == len(positions):
            return
        pos = positions[idx]
        d = table.degree_at(pos)
        if d <= 0:
            raise ConfigError("enumeration needs positive generator degrees")
        cap = 1 if table.parity_at(pos) == ODD else remaining // d
        for e in range(min(cap, remaining // d), -1, -1):
            if e:
                acc.append((pos, e))
            rec(idx + 1, remaining - e * d, acc)
            if e:
                acc.pop()

    rec(0, degree, [])
    return sorted(out, key=lambda m: mono_sort_key(m, table))


def monomials_up_to_degree(table, max_degree):
    out = {}
    for d in range(max_degree + 1):
        ms = monomials_of_degree(table, d)
        if ms:
            out[d] = ms
    return out


def hochschild_boundary(chain, table):
    """Hochschild boundary of a normalized basis chain (a0, a1, ..., an).

    Adjacent faces multiply neighbours in place; the rotation face carries
    the Koszul sign for moving a_n across a_0 ... a_{n-1}.
    """
    p = table.p
    n = len(chain) - 1
    out = {}
    if n == 0:
        return out

    def add(target, coeff):
        coeff %= p
        if coeff:
            out[target] = (out.get(target, 0) + coeff) % p

    for i in range(n):
        sign, prod = mono_mul(chain[i], chain[i + 1], table)
        if sign == 0:
            continue
        face = chain[:i] + (prod,) + chain[i + 2 :]
        add(face, ((-1) ** i) * sign)
    an = chain[n]
    koszul = mono_degree(an, table) * sum(mono_degree(c, table) for c in chain[:n])
    sign_rot = -1 if koszul % 2 else 1
    s2, prod = mono_mul(an, chain[0], table)
    if s2 != 0:
        face = (prod,) + chain[1:n]
        add(face, ((-1) ** n) * sign_rot * s2)
    return out


def hochschild_homology_small(table, cutoff):
    """Brute-force normalized Hochschild homology of the free graded-commutative
    algebra on `table`, reported for total degree (internal + simplicial) ≤ cutoff.

    Returns ({total_degree: dim}, {(n, w): HomologyDegree}, chain bases).
    """
    p = table.p
    min_gen = min((g.degree for g in table.entries), default=None)
    if min_gen is not None and min_gen <= 0:
        raise ConfigError("Hochschild oracle needs positively graded input")
    by_deg = monomials_up_to_degree(table, cutoff)
    positive = {d: ms for d, ms in by_deg.items() if d > 0}

    # chains in simplicial degree n, internal degree w: (a0, ..., an) with
    # a0 arbitrary and every interior factor a nonunit monomial
    chains = {}
    total = 0
    for w in range(0, cutoff + 1):
        level = [(m,) for m in by_deg.get(w, [])]
        if level:
            chains[(0, w)] = level
            total += len(level)
    n = 0
    while True:
        n += 1
        grew = False
        for w in range(0, cutoff + 1):
            out = []
            for d1, ms in sorted(positive.items()):
                for rest in chains.get((n - 1, w - d1), []):
                    for m in ms:
                        out.append(rest + (m,))
            if out:
                chains[(n, w)] = out
                total += len(out)
                check_budget(total, what="Hochschild chain basis")
                grew = True
        if not grew:
            break

    matrices = {}
    for (nn, w), basis in sorted(chains.items()):
        lower = chains.get((nn - 1, w), [])
        idx = {c: i for i, c in enumerate(lower)}
        mat = np.zeros((len(lower), len(basis)), dtype=np.int64)
        for j, c in enumerate(basis):
            for face, coeff in hochschild_boundary(c, table).items():
                i = idx.get(face)
                if i is None:
                    raise ContractViolation("boundary left the enumerated chain basis")
                mat[i, j] = (mat[i, j] + coeff) % p
        matrices[(nn, w)] = mat

    result_bidegree = {}
    for w in range(0, cutoff + 1):
        ns = sorted(nn for (nn, ww) in chains if ww == w)
        if not ns:
            continue
        bases = {nn: chains[(nn, w)] for nn in ns}
        diffs = {nn: matrices[(nn, w)] for nn in ns if (nn - 1) in bases}
        for h in ChainComplexWindow(p, bases, diffs).homology():
            result_bidegree[(h.degree, w)] = h

    per_total = {t: 0 for t in range(cutoff + 1)}
    for (nn, w), h in result_bidegree.items():
        t = nn + w
        if t <= cutoff:
            per_total[t] += h.dim
    return per_total, result_bidegree, chains
